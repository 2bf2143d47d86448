//! Named residual checks.

use std::fmt;

/// One verified identity: its worst residual over all probes and where it occurred.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub location: String,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tol: f64, location: impl Into<String>) -> Self {
        Self { name: name.into(), residual, tol, location: location.into() }
    }

    /// Passes iff `residual < tol`; a NaN residual fails.
    pub fn passed(&self) -> bool {
        self.residual < self.tol
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} residual={:.3e} tol={:.1e} at {}",
            if self.passed() { "pass" } else { "FAIL" },
            self.name,
            self.residual,
            self.tol,
            self.location
        )
    }
}

/// Running maximum of a residual with the location of its first maximizer.
#[derive(Debug, Clone)]
pub struct MaxResidual {
    value: f64,
    location: String,
}

impl Default for MaxResidual {
    fn default() -> Self {
        Self { value: 0.0, location: "-".into() }
    }
}

impl MaxResidual {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `value`; `location` is only evaluated when it becomes the new maximum.
    pub fn observe(&mut self, value: f64, location: impl FnOnce() -> String) {
        if value > self.value || (value.is_nan() && !self.value.is_nan()) {
            self.value = value;
            self.location = location();
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn into_check(self, name: impl Into<String>, tol: f64) -> Check {
        Check::new(name, self.value, tol, self.location)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn record(&mut self, name: impl Into<String>, residual: f64, tol: f64, location: impl Into<String>) {
        self.push(Check::new(name, residual, tol, location));
    }

    /// Appends `other`'s checks with `prefix/` prepended to their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_keeps_first_location() {
        let mut m = MaxResidual::new();
        m.observe(1e-12, || "a".into());
        m.observe(3e-12, || "b".into());
        m.observe(3e-12, || "c".into());
        let c = m.into_check("x", 1e-9);
        assert_eq!(c.location, "b");
        assert!(c.passed());
    }

    #[test]
    fn nan_fails() {
        let mut m = MaxResidual::new();
        m.observe(f64::NAN, || "n".into());
        assert!(!m.into_check("x", 1.0).passed());
    }
}
