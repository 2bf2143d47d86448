//! File formats, jobs, oracles and reports behind the `indrep` command.

// `!(r < tol)` is deliberate: a NaN residual must fail.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod export;
pub mod io;
pub mod job;
pub mod oracle;
pub mod output;

pub use error::{WbError, WbResult};
pub use job::{run, Job, JobSpec, Task};
pub use output::{RunReport, Verdict};
