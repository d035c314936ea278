//! Origamis with a prescribed automorphism group.
//!
//! Both constructions take a base origami with exactly one vertex of local
//! degree 1 (the marker) and build a flat voltage cover whose deck group
//! is `G`. An automorphism of the cover has to permute the degree-1
//! vertices over the marker, and those are exactly one deck orbit, so
//! nothing beyond the deck group survives. Finite groups are certified by
//! computing the full automorphism group of a compact cover. Infinite
//! groups cover the staircase, where only bounded certificates are
//! possible.
//!
//! Voltages sit on "loop slots": squares `i` whose upper neighbour `τ(i)`
//! is fixed by `σ`. With all horizontal voltages trivial, the two corner
//! traversals of such an edge are consecutive in one vertex word and
//! cancel, so any values placed on loop slots give a flat cover.

use std::collections::VecDeque;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::aut::{automorphism_group, bounded_aut_search, check_translation_rule, AutVerdict};
use crate::cover::{
    build_cover, check_cover_connected, check_flat, deck_map, CoverConnectivity, CoverError,
    CoverOrigami, CoverSquare, Region, VoltageAssignment,
};
use crate::group::{Generation, Group, GroupElem, GroupError, DEFAULT_CLOSURE_CAP};
use crate::perm::{FinitePerm, SquareId};
use crate::surface::{
    ball, lemma1_origami, singularities, singularity_at, Origami, Singularity, SquareTiled,
    DEFAULT_CYCLE_BUDGET,
};

/// Largest square count enumerated exhaustively when no staircase
/// truncation qualifies.
pub const EXHAUSTIVE_MAX_SQUARES: usize = 5;
pub const DEFAULT_MAX_SQUARES: usize = 64;
pub const DEFAULT_RETRIES: usize = 3;
pub const DEFAULT_RADIUS: usize = 6;
pub const DEFAULT_VERTEX_BUDGET: usize = 200;
pub const DEFAULT_SEED_RADIUS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizeError {
    #[error("no marker base with at most {max_squares} squares{}", needed_slots(*.slots))]
    NotFound { max_squares: usize, slots: usize },
    #[error("the voltages do not generate the group ({0})")]
    NotGenerating(String),
    #[error("loop-slot voltages are not flat: {0}")]
    FlatnessFailed(String),
    #[error("certificate failed after {} attempt(s); {}", attempts.len(), counterexample.as_deref().unwrap_or("no counterexample"))]
    CertificateFailed {
        attempts: Vec<String>,
        counterexample: Option<String>,
    },
    #[error("{0} needs a finite permutation group")]
    NotFinite(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

fn needed_slots(slots: usize) -> String {
    if slots > 1 {
        format!(" and {slots} loop slots")
    } else {
        String::new()
    }
}

/// A compact origami with a unique degree-1 vertex.
#[derive(Clone, Debug)]
pub struct MarkerBase {
    pub origami: Origami,
    pub marker: Singularity<SquareId>,
    /// Loop slots usable together: removing their vertical gluings keeps
    /// the origami connected.
    pub loop_slots: Vec<SquareId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MarkerRejection {
    #[error("not a finite origami")]
    NotFinite,
    #[error("{0} vertices of degree 1 (need exactly one)")]
    MarkerCount(usize),
    #[error("no branched vertex")]
    Unbranched,
    #[error("automorphism group of order {0}")]
    NontrivialAut(usize),
    #[error("no loop slots")]
    NoLoopSlots,
}

/// Checks every marker-base property of `o`.
pub fn marker_base(o: Origami) -> Result<MarkerBase, MarkerRejection> {
    let sings = singularities(&o).map_err(|_| MarkerRejection::NotFinite)?;
    let markers: Vec<_> = sings.iter().filter(|s| s.degree == 1).collect();
    if markers.len() != 1 {
        return Err(MarkerRejection::MarkerCount(markers.len()));
    }
    if sings.iter().all(|s| s.degree == 1) {
        return Err(MarkerRejection::Unbranched);
    }
    let marker = markers[0].clone();
    let aut = automorphism_group(&o).map_err(|_| MarkerRejection::NotFinite)?;
    if aut.len() != 1 {
        return Err(MarkerRejection::NontrivialAut(aut.len()));
    }
    let loop_slots = loop_slots(&o);
    if loop_slots.is_empty() {
        return Err(MarkerRejection::NoLoopSlots);
    }
    Ok(MarkerBase {
        origami: o,
        marker,
        loop_slots,
    })
}

/// Squares `i` with `σ(τ(i)) = τ(i)`, taken greedily in increasing order
/// while the origami minus the chosen vertical gluings stays connected.
pub fn loop_slots(o: &Origami) -> Vec<SquareId> {
    let Some((sigma, tau)) = o.finite_perms() else {
        return Vec::new();
    };
    let n = sigma.degree();
    let mut removed = vec![false; n];
    let mut slots = Vec::new();
    for i in 0..n {
        let up = tau.apply_index(i);
        if sigma.apply_index(up) != up {
            continue;
        }
        removed[i] = true;
        if connected_without(sigma, tau, &removed) {
            slots.push(SquareId::from_index(i));
        } else {
            removed[i] = false;
        }
    }
    slots
}

fn connected_without(sigma: &FinitePerm, tau: &FinitePerm, removed_up: &[bool]) -> bool {
    let n = sigma.degree();
    let (si, ti) = (sigma.inverse(), tau.inverse());
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut count = 1;
    while let Some(i) = queue.pop_front() {
        let mut next = vec![sigma.apply_index(i), si.apply_index(i)];
        if !removed_up[i] {
            next.push(tau.apply_index(i));
        }
        let below = ti.apply_index(i);
        if !removed_up[below] {
            next.push(below);
        }
        for j in next {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                queue.push_back(j);
            }
        }
    }
    count == n
}

/// The staircase cut off after `n` squares: blocks `(3k+1, 3k+2, 3k+3)`
/// of the vertical rotation are truncated at `n`, and a horizontal pair
/// `(3k, 3k+1)` is kept only if both squares exist.
pub fn staircase(n: usize) -> Origami {
    assert!(n >= 1, "staircase needs at least one square");
    let mut sigma_cycles = Vec::new();
    let mut tau_cycles = Vec::new();
    let n32 = n as u32;
    let mut start = 1;
    while start <= n32 {
        tau_cycles.push((start..=(start + 2).min(n32)).collect::<Vec<u32>>());
        start += 3;
    }
    let mut k = 3;
    while k < n32 {
        sigma_cycles.push(vec![k, k + 1]);
        k += 3;
    }
    let sigma = FinitePerm::from_cycles(n, &sigma_cycles).expect("disjoint pairs");
    let tau = FinitePerm::from_cycles(n, &tau_cycles).expect("disjoint blocks");
    Origami::finite(sigma, tau).expect("staircases are connected")
}

/// Marker bases in search order: staircase truncations with 3 to
/// `max_squares` squares, then every permutation pair on at most
/// [`EXHAUSTIVE_MAX_SQUARES`] squares in lexicographic order.
pub fn marker_base_candidates(max_squares: usize) -> impl Iterator<Item = MarkerBase> {
    let staircases = (3..=max_squares).map(staircase);
    let exhaustive = (1..=max_squares.min(EXHAUSTIVE_MAX_SQUARES)).flat_map(|n| {
        let perms: Vec<Vec<u32>> = (1..=n as u32).permutations(n).collect();
        let pairs: Vec<(Vec<u32>, Vec<u32>)> = perms
            .iter()
            .cartesian_product(perms.iter())
            .map(|(s, t)| (s.clone(), t.clone()))
            .collect();
        pairs.into_iter().filter_map(|(s, t)| {
            let s = FinitePerm::from_images(&s).ok()?;
            let t = FinitePerm::from_images(&t).ok()?;
            Origami::finite(s, t).ok()
        })
    });
    staircases
        .chain(exhaustive)
        .filter_map(|o| marker_base(o).ok())
}

pub fn find_marker_base(max_squares: usize) -> Result<MarkerBase, RealizeError> {
    marker_base_candidates(max_squares)
        .next()
        .ok_or(RealizeError::NotFound {
            max_squares,
            slots: 1,
        })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RealizationCertificate {
    /// The full automorphism group equals the deck group as a set.
    Exact {
        order: usize,
        aut: Vec<FinitePerm>,
        deck: Vec<FinitePerm>,
    },
    /// Evidence gathered on finite balls of an infinite cover.
    Bounded(BoundedCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedCertificate {
    pub radius: usize,
    pub seed_radius: usize,
    pub flat_vertices: usize,
    pub seeds_examined: usize,
    pub refuted_seed_count: usize,
    pub max_refutation_depth: usize,
    /// Deck seeds whose propagated map matched the deck action on the ball.
    pub certified_deck_seeds: Vec<CoverSquare>,
    /// Deck maps of the generators (and inverses) checked on the ball.
    pub verified_deck_elems: Vec<GroupElem>,
}

#[derive(Clone, Copy, Debug)]
pub struct FiniteOptions {
    pub max_squares: usize,
    pub retries: usize,
}

impl Default for FiniteOptions {
    fn default() -> Self {
        FiniteOptions {
            max_squares: DEFAULT_MAX_SQUARES,
            retries: DEFAULT_RETRIES,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteRealization {
    pub base: MarkerBase,
    pub voltages: VoltageAssignment,
    pub cover: CoverOrigami,
    pub origami: Origami,
    pub certificate: RealizationCertificate,
    /// Reasons earlier marker bases were abandoned.
    pub retries: Vec<String>,
}

fn nontrivial_generators(g: &Group) -> Vec<GroupElem> {
    let mut gens: Vec<GroupElem> = Vec::new();
    for x in g.generators() {
        if !x.is_identity() && !gens.contains(x) {
            gens.push(x.clone());
        }
    }
    gens
}

/// Realizes a finite permutation group as the full automorphism group of
/// a compact origami.
pub fn realize_finite(g: &Group, opts: FiniteOptions) -> Result<FiniteRealization, RealizeError> {
    if !g.is_finite() {
        return Err(RealizeError::NotFinite(g.to_string()));
    }
    let elements = g.elements(DEFAULT_CLOSURE_CAP)?;
    let gens = nontrivial_generators(g);
    let mut attempts = Vec::new();
    let mut counterexample = None;
    let candidates = marker_base_candidates(opts.max_squares)
        .filter(|b| b.loop_slots.len() >= gens.len())
        .take(opts.retries);
    for base in candidates {
        let mut voltages = VoltageAssignment::new(g.clone());
        for (slot, x) in base.loop_slots.iter().zip(&gens) {
            voltages.set_v(*slot, x.clone())?;
        }
        let cover = build_cover(&base.origami, &voltages)
            .map_err(|e| RealizeError::FlatnessFailed(e.to_string()))?;
        let n = base.origami.square_count().unwrap_or(0);
        let (origami, index) = match cover.to_origami() {
            Ok(x) => x,
            Err(CoverError::NotConnectedCover { witness }) => {
                attempts.push(format!("{n}-square base: cover disconnected at {witness}"));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let mut aut = automorphism_group(&origami).map_err(CoverError::from)?;
        let mut deck = elements
            .iter()
            .map(|h| deck_map(&cover, h).map(|d| d.to_perm(&index)))
            .collect::<Result<Vec<_>, _>>()?;
        aut.sort();
        deck.sort();
        if aut == deck {
            return Ok(FiniteRealization {
                base,
                voltages,
                cover,
                origami,
                certificate: RealizationCertificate::Exact {
                    order: aut.len(),
                    aut,
                    deck,
                },
                retries: attempts,
            });
        }
        let extra = aut.iter().find(|a| !deck.contains(a));
        counterexample = extra.map(|a| format!("automorphism {a} is not a deck map"));
        attempts.push(format!(
            "{n}-square base: |Aut| = {} but |G| = {}",
            aut.len(),
            deck.len()
        ));
    }
    if attempts.is_empty() {
        return Err(RealizeError::NotFound {
            max_squares: opts.max_squares,
            slots: gens.len(),
        });
    }
    Err(RealizeError::CertificateFailed {
        attempts,
        counterexample,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct CountableOptions {
    /// Propagation radius for seeds and deck verification.
    pub radius: usize,
    /// Minimum number of staircase vertices whose words are checked.
    pub vertex_budget: usize,
    /// Seeds are all squares within this radius of the origin.
    pub seed_radius: usize,
}

impl Default for CountableOptions {
    fn default() -> Self {
        CountableOptions {
            radius: DEFAULT_RADIUS,
            vertex_budget: DEFAULT_VERTEX_BUDGET,
            seed_radius: DEFAULT_SEED_RADIUS,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CountableRealization {
    pub voltages: VoltageAssignment,
    pub cover: CoverOrigami,
    pub connectivity: CoverConnectivity,
    pub certificate: BoundedCertificate,
}

/// Voltages `wv(3j+1) = g_j` on the staircase.
pub fn staircase_voltages(g: &Group, gens: &[GroupElem]) -> Result<VoltageAssignment, GroupError> {
    let mut v = VoltageAssignment::new(g.clone());
    for (j, x) in gens.iter().enumerate() {
        v.set_v(SquareId::new(3 * j as u32 + 1), x.clone())?;
    }
    Ok(v)
}

/// Covers the staircase with deck group `g` and collects a bounded
/// certificate that the deck group is everything.
pub fn realize_countable(
    g: &Group,
    opts: CountableOptions,
) -> Result<CountableRealization, RealizeError> {
    let gens = nontrivial_generators(g);
    if g.generates(&gens) != Generation::Generates {
        return Err(RealizeError::NotGenerating(format!(
            "generators of {g} could not be shown to generate it"
        )));
    }
    let base = lemma1_origami();
    let voltages = staircase_voltages(g, &gens)?;

    let mut upto = (3 * gens.len() + 3).max(opts.vertex_budget);
    let report = loop {
        let squares: Vec<SquareId> = (1..=upto as u32).map(SquareId::new).collect();
        let report = check_flat(&base, &voltages, Region::Squares(&squares))?;
        if report.vertices.len() >= opts.vertex_budget {
            break report;
        }
        upto *= 2;
    };
    if let Some(bad) = report.offending().next() {
        return Err(RealizeError::FlatnessFailed(format!(
            "vertex at square {} has word {}",
            bad.singularity.anchor(),
            bad.word
        )));
    }
    let cover = build_cover(&base, &voltages)?;
    let connectivity = check_cover_connected(&cover, opts.vertex_budget.max(3 * gens.len() + 3));
    if connectivity != CoverConnectivity::Connected {
        return Err(RealizeError::NotGenerating(format!(
            "cover connectivity is {connectivity:?}"
        )));
    }

    let origin = cover.origin();
    let region = ball(&cover, &origin, opts.radius);
    let mut verified = Vec::new();
    for x in &gens {
        for h in [x.clone(), g.invert(x)?] {
            let d = deck_map(&cover, &h)?;
            if let Err(conflict) = check_translation_rule(&cover, |s| d.apply(s), region.iter()) {
                return Err(RealizeError::CertificateFailed {
                    attempts: vec![format!("deck map of {h}")],
                    counterexample: Some(conflict.to_string()),
                });
            }
            if let Some(fixed) = region.iter().find(|s| d.apply(s) == **s) {
                return Err(RealizeError::CertificateFailed {
                    attempts: vec![format!("deck map of {h}")],
                    counterexample: Some(format!("fixes square {fixed}")),
                });
            }
            if !verified.contains(&h) {
                verified.push(h);
            }
        }
    }

    let seeds: Vec<CoverSquare> = ball(&cover, &origin, opts.seed_radius)
        .iter()
        .cloned()
        .collect();
    let verdicts = bounded_aut_search(&cover, &origin, opts.radius, &seeds);
    let mut certified = Vec::new();
    let mut refuted = 0;
    let mut max_depth = 0;
    for v in &verdicts {
        match &v.verdict {
            AutVerdict::RefutedAtDepth { depth, conflict } => {
                if v.seed.square == origin.square {
                    return Err(RealizeError::CertificateFailed {
                        attempts: vec![format!("deck seed {}", v.seed)],
                        counterexample: Some(conflict.to_string()),
                    });
                }
                refuted += 1;
                max_depth = max_depth.max(*depth);
            }
            verdict => {
                let map = verdict.map().expect("not refuted");
                if v.seed.square != origin.square {
                    return Err(RealizeError::CertificateFailed {
                        attempts: vec![format!("seed {}", v.seed)],
                        counterexample: Some(format!(
                            "no obstruction within radius {} for non-deck seed {}",
                            opts.radius, v.seed
                        )),
                    });
                }
                let d = deck_map(&cover, &v.seed.fiber)?;
                if let Some((k, img)) = map.table.iter().find(|(k, img)| d.apply(k) != **img) {
                    return Err(RealizeError::CertificateFailed {
                        attempts: vec![format!("deck seed {}", v.seed)],
                        counterexample: Some(format!("{k} maps to {img}, not a deck image")),
                    });
                }
                certified.push(v.seed.clone());
            }
        }
    }

    Ok(CountableRealization {
        voltages,
        cover,
        connectivity,
        certificate: BoundedCertificate {
            radius: opts.radius,
            seed_radius: opts.seed_radius,
            flat_vertices: report.vertices.len(),
            seeds_examined: verdicts.len(),
            refuted_seed_count: refuted,
            max_refutation_depth: max_depth,
            certified_deck_seeds: certified,
            verified_deck_elems: verified,
        },
    })
}

pub const MONSTER_DISCLAIMER: &str = "heuristic only: counts branched vertices inside balls; \
the number of ends and the homeomorphism type are not computed";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub radius: usize,
    pub squares: usize,
    pub branched_vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonsterReport {
    pub rows: Vec<GrowthRow>,
    pub disclaimer: &'static str,
}

/// Counts vertices of degree at least 2 whose whole commutator cycle lies
/// in the ball of each radius around the origin. Growth without bound is
/// what infinite genus looks like on finite windows; it proves nothing.
pub fn monster_heuristics<O: SquareTiled>(o: &O, radii: &[usize]) -> MonsterReport {
    let origin = o.origin();
    let rows = radii
        .iter()
        .map(|&radius| {
            let b = ball(o, &origin, radius);
            let mut counted = std::collections::HashSet::new();
            let mut branched = 0;
            for s in b.iter() {
                if counted.contains(s) {
                    continue;
                }
                let Ok(sing) = singularity_at(o, s, DEFAULT_CYCLE_BUDGET) else {
                    continue;
                };
                counted.extend(sing.cycle.iter().cloned());
                if sing.degree >= 2 && sing.cycle.iter().all(|x| b.contains(x)) {
                    branched += 1;
                }
            }
            GrowthRow {
                radius,
                squares: b.len(),
                branched_vertices: branched,
            }
        })
        .collect();
    MonsterReport {
        rows,
        disclaimer: MONSTER_DISCLAIMER,
    }
}
