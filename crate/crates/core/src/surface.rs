//! Origamis as permutation pairs.
//!
//! `sigma(i) = j` glues the right edge of square `i` to the left edge of
//! square `j`; `tau(i) = j` glues the top edge of `i` to the bottom edge of
//! `j`. Vertices of the square tiling are the cycles of the commutator
//! `c = tau ∘ sigma ∘ tau⁻¹ ∘ sigma⁻¹`, each anchored at the bottom-left
//! corners of its squares; the cycle length is the local degree (cone
//! angle `2πk`).

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::perm::{FinitePerm, LazyBijection, SquareId};

pub const DEFAULT_CYCLE_BUDGET: usize = 10_000;
/// Squares whose commutator cycles are traced when validating a countable
/// origami.
pub const DEFAULT_SAMPLE_SQUARES: u32 = 1_000;

/// One of the four gluing moves, in the fixed exploration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Right,
    Left,
    Up,
    Down,
}

impl Move {
    pub const ALL: [Move; 4] = [Move::Right, Move::Left, Move::Up, Move::Down];

    pub fn reverse(self) -> Move {
        match self {
            Move::Right => Move::Left,
            Move::Left => Move::Right,
            Move::Up => Move::Down,
            Move::Down => Move::Up,
        }
    }
}

/// Anything glued from unit squares by a right-neighbour and an
/// above-neighbour bijection.
pub trait SquareTiled {
    type Square: Clone + Eq + Hash + Ord + fmt::Debug + fmt::Display;

    /// σ
    fn right(&self, s: &Self::Square) -> Self::Square;
    /// σ⁻¹
    fn left(&self, s: &Self::Square) -> Self::Square;
    /// τ
    fn up(&self, s: &Self::Square) -> Self::Square;
    /// τ⁻¹
    fn down(&self, s: &Self::Square) -> Self::Square;

    /// The distinguished square "1".
    fn origin(&self) -> Self::Square;

    /// `None` for infinitely many squares.
    fn square_count(&self) -> Option<usize>;

    fn step(&self, s: &Self::Square, m: Move) -> Self::Square {
        match m {
            Move::Right => self.right(s),
            Move::Left => self.left(s),
            Move::Up => self.up(s),
            Move::Down => self.down(s),
        }
    }

    /// `c(s) = τ(σ(τ⁻¹(σ⁻¹(s))))`: one full turn around the bottom-left
    /// corner of `s`.
    fn commutator_step(&self, s: &Self::Square) -> Self::Square {
        self.up(&self.right(&self.down(&self.left(s))))
    }

    fn commutator_step_inverse(&self, s: &Self::Square) -> Self::Square {
        self.right(&self.up(&self.left(&self.down(s))))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Finite(usize),
    Countable,
}

#[derive(Clone, Debug)]
pub enum SquareMap {
    Finite(FinitePerm),
    Lazy(LazyBijection),
}

impl SquareMap {
    pub fn apply(&self, i: SquareId) -> SquareId {
        match self {
            SquareMap::Finite(p) => p.apply(i),
            SquareMap::Lazy(b) => b.apply(i),
        }
    }

    pub fn apply_inverse(&self, i: SquareId) -> SquareId {
        match self {
            // FinitePerm has no cached inverse; finite origamis use the
            // stored inverse tables instead of this path
            SquareMap::Finite(p) => p.inverse().apply(i),
            SquareMap::Lazy(b) => b.apply_inverse(i),
        }
    }
}

impl PartialEq for SquareMap {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (SquareMap::Finite(a), SquareMap::Finite(b)) => a == b,
            (SquareMap::Lazy(a), SquareMap::Lazy(b)) => a.name() == b.name(),
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    /// Decided by exhaustive search.
    Connected,
    /// Known from the rule that defines the origami.
    ByConstruction,
    /// Not decidable from the data checked.
    Unverified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommutatorCheck {
    /// Finite origamis: every cycle is finite.
    Exhaustive,
    /// Cycles through squares `1..=squares` closed within `budget` steps.
    Sampled { squares: u32, budget: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub connectivity: Connectivity,
    pub commutator: CommutatorCheck,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("an origami needs at least one square")]
    EmptyDomain,
    #[error("not connected: square {witness} is unreachable from square 1")]
    NotConnected { witness: SquareId },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("commutator cycle through square {square} does not close within {budget} steps")]
    InfiniteVertexCycle { square: SquareId, budget: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("commutator cycle through {square} does not close within {budget} steps")]
    BudgetExceeded { square: String, budget: usize },
    #[error("operation needs a finite origami")]
    NotFinite,
    #[error("vertex count and square count have different parity (internal inconsistency)")]
    OddParity,
}

#[derive(Clone, Debug)]
struct FiniteTables {
    sigma_inv: FinitePerm,
    tau_inv: FinitePerm,
}

/// A validated origami.
#[derive(Clone, Debug)]
pub struct Origami {
    domain: Domain,
    sigma: SquareMap,
    tau: SquareMap,
    tables: Option<FiniteTables>,
    validation: Validation,
    builtin: Option<&'static str>,
}

impl PartialEq for Origami {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.sigma == other.sigma && self.tau == other.tau
    }
}

/// Validates a gluing. Finite origamis are checked for connectivity
/// exhaustively; countable ones have the commutator cycles through the
/// first [`DEFAULT_SAMPLE_SQUARES`] squares traced.
pub fn make_origami(
    sigma: SquareMap,
    tau: SquareMap,
    domain: Domain,
) -> Result<Origami, ValidationError> {
    match (sigma, tau, domain) {
        (SquareMap::Finite(s), SquareMap::Finite(t), Domain::Finite(n)) => {
            if s.degree() != n || t.degree() != n {
                return Err(ValidationError::DomainMismatch(format!(
                    "sigma has degree {}, tau has degree {}, domain has {n} squares",
                    s.degree(),
                    t.degree()
                )));
            }
            Origami::finite(s, t)
        }
        (SquareMap::Lazy(s), SquareMap::Lazy(t), Domain::Countable) => {
            Origami::countable(s, t, DEFAULT_SAMPLE_SQUARES, DEFAULT_CYCLE_BUDGET)
        }
        (_, _, domain) => Err(ValidationError::DomainMismatch(format!(
            "gluing rules do not match domain {domain:?}"
        ))),
    }
}

impl Origami {
    pub fn finite(sigma: FinitePerm, tau: FinitePerm) -> Result<Self, ValidationError> {
        let n = sigma.degree();
        if n == 0 {
            return Err(ValidationError::EmptyDomain);
        }
        if tau.degree() != n {
            return Err(ValidationError::DomainMismatch(format!(
                "sigma has degree {n}, tau has degree {}",
                tau.degree()
            )));
        }
        let tables = FiniteTables {
            sigma_inv: sigma.inverse(),
            tau_inv: tau.inverse(),
        };
        if let Some(witness) = first_unreachable(&sigma, &tau) {
            return Err(ValidationError::NotConnected { witness });
        }
        Ok(Origami {
            domain: Domain::Finite(n),
            sigma: SquareMap::Finite(sigma),
            tau: SquareMap::Finite(tau),
            tables: Some(tables),
            validation: Validation {
                connectivity: Connectivity::Connected,
                commutator: CommutatorCheck::Exhaustive,
            },
            builtin: None,
        })
    }

    /// A countable origami; commutator cycles through `1..=sample` must
    /// close within `budget` steps. Connectivity is recorded as unverified.
    pub fn countable(
        sigma: LazyBijection,
        tau: LazyBijection,
        sample: u32,
        budget: usize,
    ) -> Result<Self, ValidationError> {
        let o = Origami {
            domain: Domain::Countable,
            sigma: SquareMap::Lazy(sigma),
            tau: SquareMap::Lazy(tau),
            tables: None,
            validation: Validation {
                connectivity: Connectivity::Unverified,
                commutator: CommutatorCheck::Sampled {
                    squares: sample,
                    budget,
                },
            },
            builtin: None,
        };
        for v in 1..=sample {
            let square = SquareId::new(v);
            if singularity_at(&o, &square, budget).is_err() {
                return Err(ValidationError::InfiniteVertexCycle { square, budget });
            }
        }
        Ok(o)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn validation(&self) -> Validation {
        self.validation
    }

    pub fn sigma(&self) -> &SquareMap {
        &self.sigma
    }

    pub fn tau(&self) -> &SquareMap {
        &self.tau
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.domain, Domain::Finite(_))
    }

    /// Name of the built-in rule, for countable origamis that have one.
    pub fn builtin_name(&self) -> Option<&'static str> {
        self.builtin
    }

    /// `(sigma, tau)` of a finite origami.
    pub fn finite_perms(&self) -> Option<(&FinitePerm, &FinitePerm)> {
        match (&self.sigma, &self.tau) {
            (SquareMap::Finite(s), SquareMap::Finite(t)) => Some((s, t)),
            _ => None,
        }
    }

    /// The commutator `τ∘σ∘τ⁻¹∘σ⁻¹` as a permutation (finite only).
    pub fn commutator_perm(&self) -> Option<FinitePerm> {
        let (s, t) = self.finite_perms()?;
        let tables = self.tables.as_ref()?;
        let c = t
            .compose(s)
            .and_then(|x| x.compose(&tables.tau_inv))
            .and_then(|x| x.compose(&tables.sigma_inv))
            .expect("same degree");
        Some(c)
    }
}

fn first_unreachable(sigma: &FinitePerm, tau: &FinitePerm) -> Option<SquareId> {
    let n = sigma.degree();
    let (si, ti) = (sigma.inverse(), tau.inverse());
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in [
            sigma.apply_index(i),
            si.apply_index(i),
            tau.apply_index(i),
            ti.apply_index(i),
        ] {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.iter().position(|&s| !s).map(SquareId::from_index)
}

impl SquareTiled for Origami {
    type Square = SquareId;

    fn right(&self, s: &SquareId) -> SquareId {
        self.sigma.apply(*s)
    }

    fn left(&self, s: &SquareId) -> SquareId {
        match &self.tables {
            Some(t) => t.sigma_inv.apply(*s),
            None => self.sigma.apply_inverse(*s),
        }
    }

    fn up(&self, s: &SquareId) -> SquareId {
        self.tau.apply(*s)
    }

    fn down(&self, s: &SquareId) -> SquareId {
        match &self.tables {
            Some(t) => t.tau_inv.apply(*s),
            None => self.tau.apply_inverse(*s),
        }
    }

    fn origin(&self) -> SquareId {
        SquareId::new(1)
    }

    fn square_count(&self) -> Option<usize> {
        match self.domain {
            Domain::Finite(n) => Some(n),
            Domain::Countable => None,
        }
    }
}

fn lemma1_sigma(i: SquareId) -> SquareId {
    let v = i.get();
    let w = match v % 3 {
        _ if v <= 2 => v,
        2 => v,
        0 => v + 1,
        _ => v - 1,
    };
    SquareId::new(w)
}

fn lemma1_tau(i: SquareId) -> SquareId {
    let v = i.get();
    SquareId::new(if (v - 1) % 3 < 2 { v + 1 } else { v - 2 })
}

fn lemma1_tau_inv(i: SquareId) -> SquareId {
    let v = i.get();
    SquareId::new(if (v - 1) % 3 > 0 { v - 1 } else { v + 2 })
}

/// The infinite staircase: `sigma = (1)(2)(3,4)(5)(6,7)(8)…` and
/// `tau = (1,2,3)(4,5,6)(7,8,9)…`.
///
/// sigma fixes 1, 2 and every `3k+2`, and swaps `3k` with `3k+1` for
/// `k ≥ 1`; tau rotates each block `(3k+1, 3k+2, 3k+3)`.
pub fn lemma1_origami() -> Origami {
    let sigma = LazyBijection::new("lemma1.sigma", lemma1_sigma, lemma1_sigma);
    let tau = LazyBijection::new("lemma1.tau", lemma1_tau, lemma1_tau_inv);
    let mut o = Origami::countable(sigma, tau, DEFAULT_SAMPLE_SQUARES, DEFAULT_CYCLE_BUDGET)
        .expect("staircase vertex cycles have length at most 3");
    o.validation.connectivity = Connectivity::ByConstruction;
    o.builtin = Some("lemma1");
    o
}

/// Looks up a built-in countable origami by name.
pub fn builtin(name: &str) -> Option<Origami> {
    match name {
        "lemma1" => Some(lemma1_origami()),
        _ => None,
    }
}

pub fn commutator_step<O: SquareTiled>(o: &O, i: &O::Square) -> O::Square {
    o.commutator_step(i)
}

/// A vertex: one commutator cycle, minimal square first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Singularity<S> {
    pub cycle: Vec<S>,
    pub degree: usize,
}

impl<S: Ord + Clone> Singularity<S> {
    /// Rotates a commutator cycle so its minimal element comes first.
    pub fn from_cycle(mut cycle: Vec<S>) -> Self {
        let pos = cycle
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        cycle.rotate_left(pos);
        let degree = cycle.len();
        Singularity { cycle, degree }
    }

    pub fn anchor(&self) -> &S {
        &self.cycle[0]
    }
}

/// Traces the commutator cycle through `i`.
pub fn singularity_at<O: SquareTiled>(
    o: &O,
    i: &O::Square,
    budget: usize,
) -> Result<Singularity<O::Square>, SurfaceError> {
    let mut cycle = vec![i.clone()];
    let mut j = o.commutator_step(i);
    while &j != i {
        if cycle.len() >= budget {
            return Err(SurfaceError::BudgetExceeded {
                square: i.to_string(),
                budget,
            });
        }
        cycle.push(j.clone());
        j = o.commutator_step(&j);
    }
    Ok(Singularity::from_cycle(cycle))
}

/// Distinct singularities meeting `squares`, in order of first contact.
pub fn singularities_meeting<O, I>(
    o: &O,
    squares: I,
    budget: usize,
) -> Result<Vec<Singularity<O::Square>>, SurfaceError>
where
    O: SquareTiled,
    I: IntoIterator<Item = O::Square>,
{
    let mut covered: HashSet<O::Square> = HashSet::new();
    let mut out = Vec::new();
    for s in squares {
        if covered.contains(&s) {
            continue;
        }
        let sing = singularity_at(o, &s, budget)?;
        covered.extend(sing.cycle.iter().cloned());
        out.push(sing);
    }
    Ok(out)
}

/// All singularities of a finite origami, sorted by anchor.
pub fn singularities(o: &Origami) -> Result<Vec<Singularity<SquareId>>, SurfaceError> {
    let c = o.commutator_perm().ok_or(SurfaceError::NotFinite)?;
    Ok(c.cycles()
        .into_iter()
        .map(Singularity::from_cycle)
        .collect())
}

/// Multiset of local degrees, ascending.
pub fn singularity_profile(o: &Origami) -> Result<Vec<usize>, SurfaceError> {
    let mut degrees: Vec<usize> = singularities(o)?.iter().map(|s| s.degree).collect();
    degrees.sort_unstable();
    Ok(degrees)
}

/// `χ = V − E + F = V − 2n + n`.
pub fn euler_characteristic(o: &Origami) -> Result<i64, SurfaceError> {
    let n = o.square_count().ok_or(SurfaceError::NotFinite)? as i64;
    let v = singularities(o)?.len() as i64;
    Ok(v - n)
}

pub fn genus(o: &Origami) -> Result<u64, SurfaceError> {
    let chi = euler_characteristic(o)?;
    if chi % 2 != 0 || chi > 2 {
        return Err(SurfaceError::OddParity);
    }
    Ok(((2 - chi) / 2) as u64)
}

/// Squares within `radius` gluing steps of `base`.
#[derive(Clone, Debug)]
pub struct Ball<S: Hash + Eq> {
    pub base: S,
    pub radius: usize,
    /// Square to BFS depth, in discovery order.
    pub squares: IndexMap<S, usize>,
    /// No square of the ball has a neighbour outside it.
    pub closed: bool,
}

impl<S: Hash + Eq + Clone> Ball<S> {
    pub fn contains(&self, s: &S) -> bool {
        self.squares.contains_key(s)
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &S> {
        self.squares.keys()
    }

    pub fn depth(&self, s: &S) -> Option<usize> {
        self.squares.get(s).copied()
    }
}

/// Breadth-first ball over σ, σ⁻¹, τ, τ⁻¹ (in that order).
pub fn ball<O: SquareTiled>(o: &O, base: &O::Square, radius: usize) -> Ball<O::Square> {
    let mut squares = IndexMap::new();
    squares.insert(base.clone(), 0);
    let mut queue = VecDeque::from([(base.clone(), 0usize)]);
    let mut closed = true;
    while let Some((x, d)) = queue.pop_front() {
        for m in Move::ALL {
            let y = o.step(&x, m);
            if squares.contains_key(&y) {
                continue;
            }
            if d < radius {
                squares.insert(y.clone(), d + 1);
                queue.push_back((y, d + 1));
            } else {
                closed = false;
            }
        }
    }
    Ball {
        base: base.clone(),
        radius,
        squares,
        closed,
    }
}
