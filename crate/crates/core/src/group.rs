//! Finite groups as validated Cayley tables, with subgroups, cosets, double
//! cosets and conjugacy classes.
//!
//! Elements are indices `0..order`. Subgroups keep a handle to their parent
//! and also carry themselves as an abstract group on member positions, so a
//! representation of `K` is indexed by `0..|K|` in ascending parent order.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default cap on the group order; dense `|G|`-dimensional work stays cheap below it.
pub const DEFAULT_ORDER_LIMIT: usize = 200;

/// Largest `n` accepted by [`PermutationGroup::symmetric`].
pub const MAX_SYMMETRIC_DEGREE: usize = 6;

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
    classes: ConjugacyClasses,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.cayley == other.cayley && self.labels == other.labels
    }
}

impl Eq for FiniteGroup {}

/// Conjugacy classes, ordered by their minimal element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClasses {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Index of the class containing `g`.
    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn class(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    /// Minimal element of each class.
    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Indicator function `1_{C(g)}` as a 0/1 vector over the group.
    pub fn indicator(&self, g: usize) -> Vec<bool> {
        let c = self.class_of[g];
        self.class_of.iter().map(|&x| x == c).collect()
    }
}

impl FiniteGroup {
    /// Validates a Cayley table under the default order cap.
    pub fn from_cayley(table: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_cayley_with_limit(table, DEFAULT_ORDER_LIMIT)
    }

    pub fn from_cayley_with_limit(table: Vec<Vec<usize>>, limit: usize) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if n > limit {
            return Err(Error::SizeLimit { what: "group order", value: n, limit });
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(format!("row {r} has length {} (expected {n})", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::NotAGroup(format!("row {r} contains out-of-range entry {bad}")));
            }
        }
        let cayley: Vec<usize> = table.into_iter().flatten().collect();
        let at = |a: usize, b: usize| cayley[a * n + b];

        let mut seen = vec![false; n];
        for r in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for c in 0..n {
                let x = at(r, c);
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::NotAGroup(format!("Latin square violated: row {r} repeats {x}")));
                }
            }
        }
        for c in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for r in 0..n {
                let x = at(r, c);
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::NotAGroup(format!("Latin square violated: column {c} repeats {x}")));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::NotAGroup(format!("associativity fails for ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let b = (0..n).find(|&b| at(a, b) == identity).expect("Latin square has an identity in every row");
            if at(b, a) != identity {
                return Err(Error::NotAGroup(format!("element {a} has no two-sided inverse")));
            }
            inverse.push(b);
        }

        let mut g = Self {
            order: n,
            cayley,
            identity,
            inverse,
            labels: None,
            classes: ConjugacyClasses { classes: Vec::new(), class_of: Vec::new() },
        };
        g.classes = g.compute_classes();
        Ok(g)
    }

    /// Attaches human-readable element names.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::InvalidInput(format!(
                "{} labels given for a group of order {}",
                labels.len(),
                self.order
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    fn compute_classes(&self) -> ConjugacyClasses {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|h| self.conjugate(g, h)).collect();
            class.sort_unstable();
            class.dedup();
            for &x in &class {
                class_of[x] = classes.len();
            }
            classes.push(class);
        }
        ConjugacyClasses { classes, class_of }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `h⁻¹ g h`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.inv(h), self.mul(g, h))
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        self.cayley.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The element's label, or its index when no labels are attached.
    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        &self.classes
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Cyclic group `ℤ/n` with `i·j = i + j mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotAGroup("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::from_cayley(table)?.with_labels((0..n).map(|i| i.to_string()).collect())
    }

    pub fn check_element(&self, g: usize) -> Result<()> {
        if g < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { index: g, order: self.order })
        }
    }
}

/// A group realized by permutations of `0..degree`, elements sorted
/// lexicographically as words `[p(0), …, p(degree-1)]`.
///
/// The product is composition, `(pq)(i) = p(q(i))`.
#[derive(Debug, Clone)]
pub struct PermutationGroup {
    pub group: Arc<FiniteGroup>,
    pub perms: Vec<Vec<usize>>,
}

impl PermutationGroup {
    /// Closure of the generators.
    pub fn from_generators(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for p in generators {
            if !is_permutation(p, degree) {
                return Err(Error::InvalidInput(format!("{p:?} is not a permutation of 0..{degree}")));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in generators {
                let y = compose(s, &x);
                if !elems.contains(&y) {
                    if elems.len() >= DEFAULT_ORDER_LIMIT {
                        return Err(Error::SizeLimit {
                            what: "group order",
                            value: elems.len() + 1,
                            limit: DEFAULT_ORDER_LIMIT,
                        });
                    }
                    elems.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Self::from_elements(elems)
    }

    /// Symmetric group `S_n`, `1 ≤ n ≤ 6`.
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("symmetric group of degree 0".into()));
        }
        if n > MAX_SYMMETRIC_DEGREE {
            return Err(Error::SizeLimit { what: "symmetric degree", value: n, limit: MAX_SYMMETRIC_DEGREE });
        }
        let mut perms = Vec::new();
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            perms.push(p.clone());
            if !next_permutation(&mut p) {
                break;
            }
        }
        Self::from_elements(perms)
    }

    fn from_elements(mut perms: Vec<Vec<usize>>) -> Result<Self> {
        perms.sort();
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("closed under composition");
        let table: Vec<Vec<usize>> =
            perms.iter().map(|a| perms.iter().map(|b| index(&compose(a, b))).collect()).collect();
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        let group = FiniteGroup::from_cayley_with_limit(table, usize::MAX)?.with_labels(labels)?;
        Ok(Self { group: Arc::new(group), perms })
    }

    pub fn degree(&self) -> usize {
        self.perms.first().map_or(0, Vec::len)
    }

    pub fn index_of(&self, p: &[usize]) -> Option<usize> {
        self.perms.binary_search_by(|q| q.as_slice().cmp(p)).ok()
    }

    /// Index of the element written in 1-based cycle notation, e.g. `"(12)(34)"` or `"e"`.
    pub fn parse_cycles(&self, s: &str) -> Option<usize> {
        let p = parse_cycle_notation(s, self.degree())?;
        self.index_of(&p)
    }
}

/// `(p∘q)(i) = p(q(i))`.
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

pub fn is_permutation(p: &[usize], degree: usize) -> bool {
    let mut seen = vec![false; degree];
    p.len() == degree && p.iter().all(|&x| x < degree && !std::mem::replace(&mut seen[x], true))
}

/// Sign of a permutation, `+1` or `-1`.
pub fn parity(p: &[usize]) -> i32 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Cycle notation with 1-based points; the identity is `"e"`.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut i = start;
        let wide = p.len() > 9;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if wide && !first {
                out.push(' ');
            }
            let _ = write!(out, "{}", i + 1);
            first = false;
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

fn parse_cycle_notation(s: &str, degree: usize) -> Option<Vec<usize>> {
    let mut p: Vec<usize> = (0..degree).collect();
    let s = s.trim();
    if s == "e" || s == "()" {
        return Some(p);
    }
    for cycle in s.split(')') {
        let body = cycle.trim();
        if body.is_empty() {
            continue;
        }
        let body = body.strip_prefix('(')?;
        let points: Vec<usize> = if body.contains(' ') || body.contains(',') {
            body.split([' ', ',']).filter(|t| !t.is_empty()).map(|t| t.parse::<usize>().ok()).collect::<Option<_>>()?
        } else {
            body.chars().map(|ch| ch.to_digit(10).map(|d| d as usize)).collect::<Option<_>>()?
        };
        if points.iter().any(|&x| x == 0 || x > degree) {
            return None;
        }
        // cycles are applied right to left
        let mut c: Vec<usize> = (0..degree).collect();
        for w in 0..points.len() {
            c[points[w] - 1] = points[(w + 1) % points.len()] - 1;
        }
        p = compose(&p, &c);
    }
    is_permutation(&p, degree).then_some(p)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A subgroup `K ≤ G` with a fixed left transversal `𝒯`.
///
/// The identity's coset comes first and is represented by `1_G`; every later
/// coset is represented by its smallest element not yet covered.
#[derive(Debug, Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    position: Vec<Option<usize>>,
    transversal: Vec<usize>,
    coset_of: Vec<usize>,
    group: Arc<FiniteGroup>,
}

impl Subgroup {
    /// Subgroup generated by `generators`.
    pub fn generated(parent: &Arc<FiniteGroup>, generators: &[usize]) -> Result<Self> {
        for &g in generators {
            parent.check_element(g)?;
        }
        let e = parent.identity();
        let mut inside = vec![false; parent.order()];
        inside[e] = true;
        let mut queue = VecDeque::from([e]);
        while let Some(x) = queue.pop_front() {
            for &s in generators {
                let y = parent.mul(s, x);
                if !inside[y] {
                    inside[y] = true;
                    queue.push_back(y);
                }
            }
        }
        let members = (0..parent.order()).filter(|&g| inside[g]).collect();
        Ok(Self::build(parent.clone(), members))
    }

    /// Subgroup with exactly the given elements; fails unless they form a subgroup.
    pub fn from_elements(parent: &Arc<FiniteGroup>, elements: &[usize]) -> Result<Self> {
        for &g in elements {
            parent.check_element(g)?;
        }
        let mut members = elements.to_vec();
        members.sort_unstable();
        members.dedup();
        let mut inside = vec![false; parent.order()];
        members.iter().for_each(|&g| inside[g] = true);
        if !inside[parent.identity()] {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for &a in &members {
            if !inside[parent.inv(a)] {
                return Err(Error::NotASubgroup(format!("inverse of {} missing", parent.label(a))));
            }
            for &b in &members {
                if !inside[parent.mul(a, b)] {
                    return Err(Error::NotASubgroup(format!(
                        "not closed: {} * {} missing",
                        parent.label(a),
                        parent.label(b)
                    )));
                }
            }
        }
        Ok(Self::build(parent.clone(), members))
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        Self::build(parent.clone(), vec![parent.identity()])
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        Self::build(parent.clone(), parent.elements().collect())
    }

    fn build(parent: Arc<FiniteGroup>, members: Vec<usize>) -> Self {
        let n = parent.order();
        let mut position = vec![None; n];
        for (i, &g) in members.iter().enumerate() {
            position[g] = Some(i);
        }
        let mut coset_of = vec![usize::MAX; n];
        let mut transversal = Vec::with_capacity(n / members.len());
        let starts = std::iter::once(parent.identity()).chain(0..n);
        for t in starts {
            if coset_of[t] != usize::MAX {
                continue;
            }
            for &k in &members {
                coset_of[parent.mul(t, k)] = transversal.len();
            }
            transversal.push(t);
        }
        let table = members
            .iter()
            .map(|&a| members.iter().map(|&b| position[parent.mul(a, b)].expect("closed")).collect())
            .collect();
        let mut group = FiniteGroup::from_cayley_with_limit(table, usize::MAX).expect("subgroup of a valid group");
        if let Some(labels) = parent.labels() {
            group = group.with_labels(members.iter().map(|&g| labels[g].clone()).collect()).expect("label count");
        }
        Self { parent, members, position, transversal, coset_of, group: Arc::new(group) }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    /// The subgroup as an abstract group on member positions `0..|K|`.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    /// Members as parent element indices, ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// `|G/K|`.
    pub fn index(&self) -> usize {
        self.transversal.len()
    }

    pub fn transversal(&self) -> &[usize] {
        &self.transversal
    }

    pub fn contains(&self, g: usize) -> bool {
        self.position[g].is_some()
    }

    /// Position of a parent element among the members.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.position[g]
    }

    /// Transversal index of the coset `gK`.
    pub fn coset_index(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// Writes `g = t·k` with `t ∈ 𝒯`; returns the transversal index of `t` and
    /// the member position of `k`.
    pub fn split(&self, g: usize) -> (usize, usize) {
        let ti = self.coset_of[g];
        let k = self.parent.mul(self.parent.inv(self.transversal[ti]), g);
        (ti, self.position[k].expect("t⁻¹g lies in K"))
    }

    /// Member position → parent element.
    pub fn element(&self, k: usize) -> usize {
        self.members[k]
    }

    /// `self ≤ outer` re-expressed as a subgroup of `outer.group()`.
    pub fn relative_to(&self, outer: &Subgroup) -> Result<Subgroup> {
        if self.parent != outer.parent {
            return Err(Error::NotASubgroup("subgroups of different groups".into()));
        }
        let positions = self
            .members
            .iter()
            .map(|&g| outer.position(g).ok_or_else(|| Error::NotASubgroup(format!("{} not in outer subgroup", self.parent.label(g)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::build(outer.group.clone(), positions))
    }

    /// Replaces the transversal with `{t·k_t}` for the given choice of member
    /// positions `k_t` (one per coset). Used to probe transversal independence.
    pub fn with_shifted_transversal(&self, shifts: &[usize]) -> Result<Subgroup> {
        if shifts.len() != self.index() {
            return Err(Error::InvalidInput("one shift per coset required".into()));
        }
        let mut s = self.clone();
        for (t, &k) in s.transversal.iter_mut().zip(shifts) {
            if k >= self.order() {
                return Err(Error::IndexOutOfRange(format!("member position {k}")));
            }
            *t = self.parent.mul(*t, self.members[k]);
        }
        Ok(s)
    }

    pub fn double_cosets(&self) -> DoubleCosets {
        let g = &self.parent;
        let n = g.order();
        let mut block_of = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            if block_of[s] != usize::MAX {
                continue;
            }
            let mut block: Vec<usize> = Vec::new();
            for &k1 in &self.members {
                let k1s = g.mul(k1, s);
                for &k2 in &self.members {
                    block.push(g.mul(k1s, k2));
                }
            }
            block.sort_unstable();
            block.dedup();
            for &x in &block {
                block_of[x] = blocks.len();
            }
            blocks.push(block);
        }
        DoubleCosets { representatives: blocks.iter().map(|b| b[0]).collect(), blocks, block_of }
    }
}

/// `G = ⨿_{s∈𝒮} KsK`, representatives the minimal element of each block, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCosets {
    pub representatives: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
    pub block_of: Vec<usize>,
}

impl DoubleCosets {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}
