//! Deck groups: finite permutation groups, free abelian groups `Z^k` and
//! free groups `F_r`, each with a canonical normal form so that equality
//! of elements is structural equality.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::perm::FinitePerm;

/// Default bound on the size of an enumerated closure.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element {found} does not belong to {expected}")]
    MixedGroupKinds { expected: String, found: String },
    #[error("closure exceeds {cap} elements")]
    CapExceeded { cap: usize },
    #[error("{0} is not a finite permutation group")]
    NotFinite(String),
    #[error("invalid group: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupKind {
    FinitePerm { degree: usize },
    FreeAbelian { rank: usize },
    Free { rank: usize },
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::FinitePerm { degree } => write!(f, "Sym({degree}) subgroup"),
            GroupKind::FreeAbelian { rank } => write!(f, "Z^{rank}"),
            GroupKind::Free { rank } => write!(f, "F_{rank}"),
        }
    }
}

/// A group element in normal form.
///
/// Words are sequences of nonzero letters: `k` is the `k`-th free
/// generator and `-k` its inverse. They are always freely reduced.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElem {
    Perm(FinitePerm),
    Vector(Vec<i64>),
    Word(Vec<i32>),
}

impl GroupElem {
    pub fn is_identity(&self) -> bool {
        match self {
            GroupElem::Perm(p) => p.is_identity(),
            GroupElem::Vector(v) => v.iter().all(|&x| x == 0),
            GroupElem::Word(w) => w.is_empty(),
        }
    }

    /// Canonical text; equal keys iff equal elements within one group.
    pub fn key(&self) -> String {
        self.to_string()
    }

    pub fn as_perm(&self) -> Option<&FinitePerm> {
        match self {
            GroupElem::Perm(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[i64]> {
        match self {
            GroupElem::Vector(v) => Some(v),
            _ => None,
        }
    }
}

/// Free reduction of a word.
pub fn reduce_word(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn letter_name(index: u32) -> String {
    if (1..=26).contains(&index) {
        ((b'a' + (index - 1) as u8) as char).to_string()
    } else {
        format!("x{index}")
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElem::Perm(p) => write!(f, "{p}"),
            GroupElem::Vector(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            GroupElem::Word(w) if w.is_empty() => f.write_str("e"),
            GroupElem::Word(w) => {
                // run-length: a^2 b^-1
                let mut i = 0;
                while i < w.len() {
                    let mut j = i;
                    while j < w.len() && w[j] == w[i] {
                        j += 1;
                    }
                    let exp = (j - i) as i64 * w[i].signum() as i64;
                    f.write_str(&letter_name(w[i].unsigned_abs()))?;
                    if exp != 1 {
                        write!(f, "^{exp}")?;
                    }
                    i = j;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for GroupElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

/// Three-valued answer of [`Group::generates`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Generation {
    Generates,
    DoesNotGenerate,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    kind: GroupKind,
    generators: Vec<GroupElem>,
}

impl Group {
    /// Subgroup of `Sym(degree)` generated by `gens`.
    pub fn perm_group(gens: Vec<FinitePerm>) -> Result<Self, GroupError> {
        let first = gens
            .first()
            .ok_or_else(|| GroupError::Invalid("no generators".into()))?;
        let degree = first.degree();
        if let Some(bad) = gens.iter().find(|g| g.degree() != degree) {
            return Err(GroupError::Invalid(format!(
                "generator {bad} has degree {}, expected {degree}",
                bad.degree()
            )));
        }
        Ok(Group {
            kind: GroupKind::FinitePerm { degree },
            generators: gens.into_iter().map(GroupElem::Perm).collect(),
        })
    }

    /// The trivial group, as the permutation group of one point.
    pub fn trivial() -> Self {
        Group::perm_group(vec![FinitePerm::identity(1)]).expect("one generator")
    }

    /// `Z^rank` with its standard basis as generators.
    pub fn free_abelian(rank: usize) -> Result<Self, GroupError> {
        if rank == 0 {
            return Err(GroupError::Invalid("Z^0 has no generators".into()));
        }
        let generators = (0..rank)
            .map(|j| {
                let mut v = vec![0; rank];
                v[j] = 1;
                GroupElem::Vector(v)
            })
            .collect();
        Ok(Group {
            kind: GroupKind::FreeAbelian { rank },
            generators,
        })
    }

    /// `F_rank` with its free basis as generators.
    pub fn free(rank: usize) -> Result<Self, GroupError> {
        if rank == 0 {
            return Err(GroupError::Invalid("F_0 has no generators".into()));
        }
        let generators = (1..=rank as i32)
            .map(|k| GroupElem::Word(vec![k]))
            .collect();
        Ok(Group {
            kind: GroupKind::Free { rank },
            generators,
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn generators(&self) -> &[GroupElem] {
        &self.generators
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, GroupKind::FinitePerm { .. })
    }

    pub fn identity(&self) -> GroupElem {
        match self.kind {
            GroupKind::FinitePerm { degree } => GroupElem::Perm(FinitePerm::identity(degree)),
            GroupKind::FreeAbelian { rank } => GroupElem::Vector(vec![0; rank]),
            GroupKind::Free { .. } => GroupElem::Word(Vec::new()),
        }
    }

    /// True if `g` has this group's shape and is in normal form.
    pub fn contains(&self, g: &GroupElem) -> bool {
        match (self.kind, g) {
            (GroupKind::FinitePerm { degree }, GroupElem::Perm(p)) => p.degree() == degree,
            (GroupKind::FreeAbelian { rank }, GroupElem::Vector(v)) => v.len() == rank,
            (GroupKind::Free { rank }, GroupElem::Word(w)) => {
                w.iter()
                    .all(|&l| l != 0 && l.unsigned_abs() as usize <= rank)
                    && reduce_word(w).len() == w.len()
            }
            _ => false,
        }
    }

    pub fn check(&self, g: &GroupElem) -> Result<(), GroupError> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(GroupError::MixedGroupKinds {
                expected: self.kind.to_string(),
                found: g.key(),
            })
        }
    }

    /// Builds a reduced word from raw letters.
    pub fn word(&self, letters: &[i32]) -> Result<GroupElem, GroupError> {
        let g = GroupElem::Word(reduce_word(letters));
        self.check(&g)?;
        Ok(g)
    }

    /// Normal form of a possibly unreduced element of this group.
    pub fn normalize(&self, g: &GroupElem) -> Result<GroupElem, GroupError> {
        let g = match g {
            GroupElem::Word(w) => GroupElem::Word(reduce_word(w)),
            other => other.clone(),
        };
        self.check(&g)?;
        Ok(g)
    }

    /// `g·h`. For permutations this is `g ∘ h` (apply `h` first).
    pub fn multiply(&self, g: &GroupElem, h: &GroupElem) -> Result<GroupElem, GroupError> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.mul(g, h))
    }

    pub fn invert(&self, g: &GroupElem) -> Result<GroupElem, GroupError> {
        self.check(g)?;
        Ok(self.inv(g))
    }

    /// Product of operands already known to belong to this group.
    pub(crate) fn mul(&self, g: &GroupElem, h: &GroupElem) -> GroupElem {
        match (g, h) {
            (GroupElem::Perm(a), GroupElem::Perm(b)) => {
                GroupElem::Perm(a.compose(b).expect("same degree"))
            }
            (GroupElem::Vector(a), GroupElem::Vector(b)) => {
                GroupElem::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupElem::Word(a), GroupElem::Word(b)) => {
                let mut w = a.clone();
                for &l in b {
                    if w.last() == Some(&-l) {
                        w.pop();
                    } else {
                        w.push(l);
                    }
                }
                GroupElem::Word(w)
            }
            _ => unreachable!("operands checked by caller"),
        }
    }

    pub(crate) fn inv(&self, g: &GroupElem) -> GroupElem {
        match g {
            GroupElem::Perm(p) => GroupElem::Perm(p.inverse()),
            GroupElem::Vector(v) => GroupElem::Vector(v.iter().map(|x| -x).collect()),
            GroupElem::Word(w) => GroupElem::Word(w.iter().rev().map(|l| -l).collect()),
        }
    }

    /// The subgroup generated by `gens`, in breadth-first order from the
    /// identity (right multiplication by generators). Finite groups only.
    pub fn closure(&self, gens: &[GroupElem], cap: usize) -> Result<Vec<GroupElem>, GroupError> {
        if !self.is_finite() {
            return Err(GroupError::NotFinite(self.kind.to_string()));
        }
        for g in gens {
            self.check(g)?;
        }
        let id = self.identity();
        let mut seen: HashSet<GroupElem> = HashSet::from([id.clone()]);
        let mut order = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.mul(&x, g);
                if seen.insert(y.clone()) {
                    if order.len() == cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    order.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(order)
    }

    /// All elements of a finite group, identity first.
    pub fn elements(&self, cap: usize) -> Result<Vec<GroupElem>, GroupError> {
        self.closure(&self.generators, cap)
    }

    /// Whether `gens` generate the whole group.
    ///
    /// Finite groups compare closures; `Z^k` row-reduces the generator
    /// matrix; free groups answer `Generates` only for the standard basis
    /// up to order and inversion and `Unknown` otherwise.
    pub fn generates(&self, gens: &[GroupElem]) -> Generation {
        if gens.iter().any(|g| !self.contains(g)) {
            return Generation::DoesNotGenerate;
        }
        match self.kind {
            GroupKind::FinitePerm { .. } => {
                let (Ok(sub), Ok(full)) = (
                    self.closure(gens, DEFAULT_CLOSURE_CAP),
                    self.elements(DEFAULT_CLOSURE_CAP),
                ) else {
                    return Generation::Unknown;
                };
                if sub.len() == full.len() {
                    Generation::Generates
                } else {
                    Generation::DoesNotGenerate
                }
            }
            GroupKind::FreeAbelian { rank } => {
                let rows: Vec<Vec<i64>> = gens
                    .iter()
                    .filter_map(|g| g.as_vector().map(<[i64]>::to_vec))
                    .collect();
                match Lattice::new(&rows, rank) {
                    Some(l) if l.is_full() => Generation::Generates,
                    Some(_) => Generation::DoesNotGenerate,
                    None => Generation::Unknown,
                }
            }
            GroupKind::Free { rank } => {
                let mut covered = vec![false; rank];
                for g in gens {
                    match g {
                        GroupElem::Word(w) if w.is_empty() => {}
                        GroupElem::Word(w) if w.len() == 1 => {
                            covered[w[0].unsigned_abs() as usize - 1] = true;
                        }
                        _ => return Generation::Unknown,
                    }
                }
                if covered.iter().all(|&c| c) {
                    Generation::Generates
                } else {
                    Generation::Unknown
                }
            }
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::FinitePerm { .. } => {
                let gens: Vec<String> = self.generators.iter().map(|g| g.key()).collect();
                write!(f, "perm: {}", gens.join("; "))
            }
            GroupKind::FreeAbelian { rank } => write!(f, "Z^{rank}"),
            GroupKind::Free { rank } => write!(f, "F_{rank}"),
        }
    }
}

/// Integer lattice spanned by a list of row vectors, kept in reduced row
/// echelon (Hermite) form together with the unimodular transform that
/// produced it.
#[derive(Clone, Debug)]
pub struct Lattice {
    rank: usize,
    // hermite[r] has its pivot at pivots[r]; rows past pivots.len() are zero
    hermite: Vec<Vec<i128>>,
    transform: Vec<Vec<i128>>,
    pivots: Vec<usize>,
}

impl Lattice {
    /// Returns `None` on arithmetic overflow.
    pub fn new(rows: &[Vec<i64>], rank: usize) -> Option<Self> {
        let m = rows.len();
        let mut h: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut u: Vec<Vec<i128>> = (0..m)
            .map(|i| (0..m).map(|j| i128::from(i == j)).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..rank {
            if r == m {
                break;
            }
            while let Some(p) = (r..m)
                .filter(|&i| h[i][col] != 0)
                .min_by_key(|&i| h[i][col].unsigned_abs())
            {
                h.swap(r, p);
                u.swap(r, p);
                let mut clean = true;
                for i in r + 1..m {
                    if h[i][col] != 0 {
                        let q = h[i][col].div_euclid(h[r][col]);
                        sub_row(&mut h, i, r, q)?;
                        sub_row(&mut u, i, r, q)?;
                        clean &= h[i][col] == 0;
                    }
                }
                if clean {
                    break;
                }
            }
            if h.get(r).is_none_or(|row| row[col] == 0) {
                continue;
            }
            if h[r][col] < 0 {
                h[r].iter_mut().for_each(|x| *x = -*x);
                u[r].iter_mut().for_each(|x| *x = -*x);
            }
            for i in 0..r {
                let q = h[i][col].div_euclid(h[r][col]);
                sub_row(&mut h, i, r, q)?;
                sub_row(&mut u, i, r, q)?;
            }
            pivots.push(col);
            r += 1;
        }
        Some(Lattice {
            rank,
            hermite: h,
            transform: u,
            pivots,
        })
    }

    /// Absolute value of the index in `Z^k`, or `None` for infinite index.
    pub fn index(&self) -> Option<u128> {
        if self.pivots.len() < self.rank {
            return None;
        }
        Some(
            (0..self.rank)
                .map(|r| self.hermite[r][self.pivots[r]].unsigned_abs())
                .product(),
        )
    }

    pub fn is_full(&self) -> bool {
        self.index() == Some(1)
    }

    /// Whether `v` is an integer combination of the spanning rows.
    pub fn contains(&self, v: &[i64]) -> bool {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (r, &col) in self.pivots.iter().enumerate() {
            let p = self.hermite[r][col];
            if w[col] % p != 0 {
                return false;
            }
            let q = w[col] / p;
            for (x, y) in w.iter_mut().zip(&self.hermite[r]) {
                *x -= q * y;
            }
        }
        w.iter().all(|&x| x == 0)
    }

    /// For a full lattice, coefficients `c[j]` with `e_j = Σ_i c[j][i]·row_i`.
    pub fn standard_basis_coefficients(&self) -> Option<Vec<Vec<i64>>> {
        if !self.is_full() {
            return None;
        }
        (0..self.rank)
            .map(|j| {
                self.transform[j]
                    .iter()
                    .map(|&x| i64::try_from(x).ok())
                    .collect()
            })
            .collect()
    }
}

fn sub_row(m: &mut [Vec<i128>], target: usize, source: usize, q: i128) -> Option<()> {
    let src = m[source].clone();
    for (x, y) in m[target].iter_mut().zip(src) {
        *x = x.checked_sub(q.checked_mul(y)?)?;
    }
    Some(())
}
