//! Finite permutations of `{1..n}` and lazily evaluated bijections of the
//! positive integers.
//!
//! Squares are numbered from 1. Composition follows the right-to-left
//! convention everywhere in the crate: `p.compose(&q)` is `p ∘ q`, so
//! `q` is applied first. [`FinitePerm::compose`] is the only place this
//! convention is spelled out; group multiplication and every commutator
//! go through it.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

/// 1-based index of a unit square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SquareId(u32);

impl SquareId {
    /// Panics if `value` is zero.
    pub fn new(value: u32) -> Self {
        assert!(value >= 1, "square ids start at 1");
        SquareId(value)
    }

    pub fn try_new(value: u32) -> Option<Self> {
        (value >= 1).then_some(SquareId(value))
    }

    /// Square for a 0-based position.
    pub fn from_index(index: usize) -> Self {
        SquareId(u32::try_from(index + 1).expect("square index overflows u32"))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// 0-based position.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for SquareId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("index {index} is outside 1..={degree}")]
    OutOfRange { index: u32, degree: usize },
    #[error("index {index} appears more than once")]
    Repeated { index: u32 },
    #[error("permutations of different degrees ({left} and {right})")]
    DegreeMismatch { left: usize, right: usize },
}

/// A bijection of `{1..n}` stored as its image table.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinitePerm {
    // 0-based images
    images: Vec<u32>,
}

impl FinitePerm {
    pub fn identity(degree: usize) -> Self {
        FinitePerm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its 1-based image table
    /// (`images[i - 1]` is the image of `i`).
    pub fn from_images(images: &[u32]) -> Result<Self, PermError> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        let mut table = Vec::with_capacity(degree);
        for &img in images {
            if img == 0 || img as usize > degree {
                return Err(PermError::OutOfRange { index: img, degree });
            }
            let slot = &mut seen[img as usize - 1];
            if *slot {
                return Err(PermError::Repeated { index: img });
            }
            *slot = true;
            table.push(img - 1);
        }
        Ok(FinitePerm { images: table })
    }

    /// Builds a permutation of `{1..degree}` from disjoint cycles; points
    /// that appear in no cycle are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for &point in cycle {
                if point == 0 || point as usize > degree {
                    return Err(PermError::OutOfRange {
                        index: point,
                        degree,
                    });
                }
                if std::mem::replace(&mut seen[point as usize - 1], true) {
                    return Err(PermError::Repeated { index: point });
                }
            }
            for (k, &point) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                images[point as usize - 1] = next - 1;
            }
        }
        Ok(FinitePerm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: SquareId) -> SquareId {
        SquareId(self.images[i.index()] + 1)
    }

    /// Image of a 0-based position, as a 0-based position.
    #[inline]
    pub fn apply_index(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    /// 1-based image table.
    pub fn images(&self) -> Vec<u32> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img as usize] = i as u32;
        }
        FinitePerm { images: inv }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &FinitePerm) -> Result<Self, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(FinitePerm {
            images: other
                .images
                .iter()
                .map(|&j| self.images[j as usize])
                .collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = SquareId> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &j)| *i as u32 == j)
            .map(|(i, _)| SquareId::from_index(i))
    }

    /// Disjoint cycles including fixed points, each starting at its
    /// minimal element, sorted by minimal element.
    pub fn cycles(&self) -> Vec<Vec<SquareId>> {
        let n = self.degree();
        let mut visited = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !visited[j] {
                visited[j] = true;
                cycle.push(SquareId::from_index(j));
                j = self.images[j] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle notation with fixed points omitted; the identity prints as
    /// `(1)` so the text is never empty.
    pub fn to_cycle_string(&self) -> String {
        let mut out = String::new();
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            out.push('(');
            let parts: Vec<String> = cycle.iter().map(|s| s.to_string()).collect();
            out.push_str(&parts.join(","));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("(1)");
        }
        out
    }
}

impl fmt::Debug for FinitePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinitePerm[{}; {}]",
            self.degree(),
            self.to_cycle_string()
        )
    }
}

impl fmt::Display for FinitePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl Serialize for FinitePerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_cycle_string())
    }
}

/// Cycle decomposition, canonicalized: minimal element first, cycles
/// sorted by minimal element.
pub fn cycle_decomposition(p: &FinitePerm) -> Vec<Vec<SquareId>> {
    p.cycles()
}

type Rule = Arc<dyn Fn(SquareId) -> SquareId + Send + Sync>;

/// A bijection of the positive integers given by explicit forward and
/// backward rules.
#[derive(Clone)]
pub struct LazyBijection {
    forward: Rule,
    backward: Rule,
    name: String,
}

impl LazyBijection {
    /// The caller guarantees `backward` inverts `forward`; debug builds
    /// check the round trip on every evaluation.
    pub fn new<F, B>(name: impl Into<String>, forward: F, backward: B) -> Self
    where
        F: Fn(SquareId) -> SquareId + Send + Sync + 'static,
        B: Fn(SquareId) -> SquareId + Send + Sync + 'static,
    {
        LazyBijection {
            forward: Arc::new(forward),
            backward: Arc::new(backward),
            name: name.into(),
        }
    }

    pub fn identity() -> Self {
        LazyBijection::new("id", |i| i, |i| i)
    }

    /// Extends a finite permutation by the identity beyond its degree.
    pub fn from_finite(p: &FinitePerm) -> Self {
        let fwd = p.clone();
        let bwd = p.inverse();
        let n = p.degree();
        LazyBijection::new(
            format!("finite[{}; {}]", n, p.to_cycle_string()),
            move |i| if i.index() < n { fwd.apply(i) } else { i },
            move |i| if i.index() < n { bwd.apply(i) } else { i },
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, i: SquareId) -> SquareId {
        let j = (self.forward)(i);
        debug_assert_eq!(
            (self.backward)(j),
            i,
            "{}: backward(forward({i})) != {i}",
            self.name
        );
        j
    }

    pub fn apply_inverse(&self, i: SquareId) -> SquareId {
        let j = (self.backward)(i);
        debug_assert_eq!(
            (self.forward)(j),
            i,
            "{}: forward(backward({i})) != {i}",
            self.name
        );
        j
    }
}

impl fmt::Debug for LazyBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LazyBijection({})", self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleTrace {
    /// The full cycle, starting at the traced point.
    Cycle(Vec<SquareId>),
    /// No return within this many applications.
    BudgetExceeded(usize),
}

/// Follows `b` from `start` for at most `budget` applications.
pub fn trace_cycle(b: &LazyBijection, start: SquareId, budget: usize) -> CycleTrace {
    let mut cycle = vec![start];
    let mut j = start;
    for _ in 0..budget {
        j = b.apply(j);
        if j == start {
            return CycleTrace::Cycle(cycle);
        }
        cycle.push(j);
    }
    CycleTrace::BudgetExceeded(budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u32]) -> Vec<SquareId> {
        v.iter().map(|&x| SquareId::new(x)).collect()
    }

    #[test]
    fn cycles_of_small_permutations() {
        let id = FinitePerm::identity(3);
        assert_eq!(
            cycle_decomposition(&id),
            vec![ids(&[1]), ids(&[2]), ids(&[3])]
        );

        let t = FinitePerm::from_images(&[2, 1, 3]).unwrap();
        assert_eq!(cycle_decomposition(&t), vec![ids(&[1, 2]), ids(&[3])]);

        let p = FinitePerm::from_images(&[2, 3, 1, 5, 4]).unwrap();
        assert_eq!(cycle_decomposition(&p), vec![ids(&[1, 2, 3]), ids(&[4, 5])]);
    }

    #[test]
    fn rejects_bad_tables() {
        assert_eq!(
            FinitePerm::from_images(&[1, 1]),
            Err(PermError::Repeated { index: 1 })
        );
        assert_eq!(
            FinitePerm::from_images(&[3, 1]),
            Err(PermError::OutOfRange {
                index: 3,
                degree: 2
            })
        );
        assert_eq!(
            FinitePerm::from_cycles(2, &[vec![1, 1]]),
            Err(PermError::Repeated { index: 1 })
        );
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let a = FinitePerm::from_cycles(3, &[vec![1, 2]]).unwrap();
        let b = FinitePerm::from_cycles(3, &[vec![1, 3]]).unwrap();
        let ab = a.compose(&b).unwrap();
        for i in 1..=3 {
            let s = SquareId::new(i);
            assert_eq!(ab.apply(s), a.apply(b.apply(s)));
        }
        assert_eq!(ab.to_cycle_string(), "(1,3,2)");
        assert!(a.compose(&FinitePerm::identity(2)).is_err());
    }

    #[test]
    fn trace_cycle_examples() {
        let id = LazyBijection::identity();
        assert_eq!(
            trace_cycle(&id, SquareId::new(7), 10),
            CycleTrace::Cycle(ids(&[7]))
        );

        let tau = LazyBijection::new(
            "tau",
            |i: SquareId| {
                let v = i.get();
                SquareId::new(if (v - 1) % 3 < 2 { v + 1 } else { v - 2 })
            },
            |i: SquareId| {
                let v = i.get();
                SquareId::new(if (v - 1) % 3 > 0 { v - 1 } else { v + 2 })
            },
        );
        assert_eq!(
            trace_cycle(&tau, SquareId::new(1), 10),
            CycleTrace::Cycle(ids(&[1, 2, 3]))
        );

        let succ = LazyBijection::new(
            "succ",
            |i: SquareId| SquareId::new(i.get() + 1),
            |i: SquareId| SquareId::new(i.get().saturating_sub(1).max(1)),
        );
        assert_eq!(
            trace_cycle(&succ, SquareId::new(1), 50),
            CycleTrace::BudgetExceeded(50)
        );
    }

    #[test]
    fn finite_wrapped_as_lazy_extends_by_identity() {
        let p = FinitePerm::from_images(&[2, 3, 1]).unwrap();
        let lazy = LazyBijection::from_finite(&p);
        assert_eq!(lazy.apply(SquareId::new(3)), SquareId::new(1));
        assert_eq!(lazy.apply_inverse(SquareId::new(1)), SquareId::new(3));
        assert_eq!(lazy.apply(SquareId::new(9)), SquareId::new(9));
    }

    #[test]
    fn identity_prints_as_single_fixed_point() {
        assert_eq!(FinitePerm::identity(4).to_cycle_string(), "(1)");
        let p = FinitePerm::from_cycles(5, &[vec![4, 2], vec![5, 1, 3]]).unwrap();
        assert_eq!(p.to_cycle_string(), "(1,3,5)(2,4)");
    }
}
