//! Translation automorphisms: bijections of the squares commuting with
//! both gluings.
//!
//! A translation automorphism of a connected origami is determined by the
//! image of a single square, so every search here is "pick a seed image
//! and propagate along σ±, τ±". Finite origamis get exact answers. On
//! countable ones a successful propagation only certifies that no
//! obstruction exists within the explored radius.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use indexmap::IndexMap;

use crate::perm::{FinitePerm, SquareId};
use crate::surface::{
    singularity_at, Move, Origami, SquareTiled, SurfaceError, DEFAULT_CYCLE_BUDGET,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certified {
    /// Defined and consistent on every square.
    Total,
    /// Consistent on the ball of this radius; not a proof of extendability.
    Radius(usize),
}

/// A partial map propagated from `base ↦ image`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationMap<S: std::hash::Hash + Eq> {
    pub base: S,
    pub image: S,
    /// Explored square to image, in BFS order.
    pub table: IndexMap<S, S>,
    pub certified: Certified,
}

impl TranslationMap<SquareId> {
    /// The map as a permutation, if it is total on `{1..n}`.
    pub fn to_perm(&self, n: usize) -> Option<FinitePerm> {
        if self.certified != Certified::Total || self.table.len() != n {
            return None;
        }
        let mut images = vec![0u32; n];
        for (k, v) in &self.table {
            images[k.index()] = v.get();
        }
        FinitePerm::from_images(&images).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conflict<S> {
    /// Two propagation paths send `square` to different images.
    Inconsistent { square: S, first: S, second: S },
    /// Two squares share an image.
    NotInjective { image: S, first: S, second: S },
    /// The vertex at the seed's corner has another degree than at the base.
    DegreeMismatch {
        base_degree: usize,
        seed_degree: usize,
    },
}

impl<S: fmt::Display> fmt::Display for Conflict<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conflict::Inconsistent {
                square,
                first,
                second,
            } => write!(f, "square {square} forced to both {first} and {second}"),
            Conflict::NotInjective {
                image,
                first,
                second,
            } => write!(f, "squares {first} and {second} both map to {image}"),
            Conflict::DegreeMismatch {
                base_degree,
                seed_degree,
            } => write!(
                f,
                "corner degree {base_degree} at base but {seed_degree} at seed"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutVerdict<S: std::hash::Hash + Eq> {
    Total(TranslationMap<S>),
    CertifiedToRadius(TranslationMap<S>, usize),
    RefutedAtDepth { depth: usize, conflict: Conflict<S> },
}

impl<S: std::hash::Hash + Eq> AutVerdict<S> {
    pub fn map(&self) -> Option<&TranslationMap<S>> {
        match self {
            AutVerdict::Total(m) | AutVerdict::CertifiedToRadius(m, _) => Some(m),
            AutVerdict::RefutedAtDepth { .. } => None,
        }
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, AutVerdict::RefutedAtDepth { .. })
    }
}

/// Propagates `base ↦ image` breadth-first to `radius`, checking every
/// gluing between explored squares and injectivity.
///
/// A refutation found while expanding a square at depth `d` is reported
/// at depth `d`; a collision of images on a newly reached square at its
/// own depth.
pub fn extend_translation<O: SquareTiled>(
    o: &O,
    base: &O::Square,
    image: &O::Square,
    radius: usize,
) -> AutVerdict<O::Square> {
    let mut table: IndexMap<O::Square, O::Square> = IndexMap::new();
    let mut preimage: HashMap<O::Square, O::Square> = HashMap::new();
    let mut depth: HashMap<O::Square, usize> = HashMap::new();
    table.insert(base.clone(), image.clone());
    preimage.insert(image.clone(), base.clone());
    depth.insert(base.clone(), 0);
    let mut queue = VecDeque::from([base.clone()]);
    let mut closed = true;

    while let Some(x) = queue.pop_front() {
        let d = depth[&x];
        let fx = table[&x].clone();
        for m in Move::ALL {
            let y = o.step(&x, m);
            let fy = o.step(&fx, m);
            if let Some(existing) = table.get(&y) {
                if existing != &fy {
                    return AutVerdict::RefutedAtDepth {
                        depth: d,
                        conflict: Conflict::Inconsistent {
                            square: y,
                            first: existing.clone(),
                            second: fy,
                        },
                    };
                }
                continue;
            }
            if d >= radius {
                closed = false;
                continue;
            }
            if let Some(other) = preimage.get(&fy) {
                return AutVerdict::RefutedAtDepth {
                    depth: d + 1,
                    conflict: Conflict::NotInjective {
                        image: fy,
                        first: other.clone(),
                        second: y,
                    },
                };
            }
            table.insert(y.clone(), fy.clone());
            preimage.insert(fy, y.clone());
            depth.insert(y.clone(), d + 1);
            queue.push_back(y);
        }
    }

    let total = closed && o.square_count() == Some(table.len());
    let map = TranslationMap {
        base: base.clone(),
        image: image.clone(),
        table,
        certified: if total {
            Certified::Total
        } else {
            Certified::Radius(radius)
        },
    };
    if total {
        AutVerdict::Total(map)
    } else {
        AutVerdict::CertifiedToRadius(map, radius)
    }
}

/// Degree of the vertex at the bottom-left corner of `s`, if it closes
/// within `budget` steps.
pub fn corner_degree<O: SquareTiled>(o: &O, s: &O::Square, budget: usize) -> Option<usize> {
    singularity_at(o, s, budget).ok().map(|x| x.degree)
}

/// Every translation automorphism of a finite connected origami, ordered
/// by the image of square 1.
pub fn automorphism_group(o: &Origami) -> Result<Vec<FinitePerm>, SurfaceError> {
    let n = o.square_count().ok_or(SurfaceError::NotFinite)?;
    let c = o.commutator_perm().ok_or(SurfaceError::NotFinite)?;
    let degrees = cycle_lengths(&c);
    let base = SquareId::new(1);
    let mut out = Vec::new();
    for j in 0..n {
        if degrees[j] != degrees[0] {
            continue;
        }
        let image = SquareId::from_index(j);
        if let AutVerdict::Total(map) = extend_translation(o, &base, &image, n) {
            out.push(map.to_perm(n).expect("total map on a finite origami"));
        }
    }
    Ok(out)
}

fn cycle_lengths(c: &FinitePerm) -> Vec<usize> {
    let mut len = vec![0; c.degree()];
    for cycle in c.cycles() {
        for s in &cycle {
            len[s.index()] = cycle.len();
        }
    }
    len
}

/// Verdict for one seed image in [`bounded_aut_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedVerdict<S: std::hash::Hash + Eq> {
    pub seed: S,
    pub verdict: AutVerdict<S>,
}

/// Runs [`extend_translation`] from `base` for each seed image (in
/// increasing order), refusing seeds whose corner vertex degree differs
/// from the base's before propagating.
pub fn bounded_aut_search<O: SquareTiled>(
    o: &O,
    base: &O::Square,
    radius: usize,
    seeds: &[O::Square],
) -> Vec<SeedVerdict<O::Square>> {
    let mut seeds = seeds.to_vec();
    seeds.sort();
    seeds.dedup();
    let base_degree = corner_degree(o, base, DEFAULT_CYCLE_BUDGET);
    seeds
        .into_iter()
        .map(|seed| {
            let seed_degree = corner_degree(o, &seed, DEFAULT_CYCLE_BUDGET);
            let verdict = match (base_degree, seed_degree) {
                (Some(b), Some(s)) if b != s => AutVerdict::RefutedAtDepth {
                    depth: 0,
                    conflict: Conflict::DegreeMismatch {
                        base_degree: b,
                        seed_degree: s,
                    },
                },
                _ => extend_translation(o, base, &seed, radius),
            };
            SeedVerdict { seed, verdict }
        })
        .collect()
}

/// Checks that `rule` commutes with all four gluings on `region` and is
/// injective there.
pub fn check_translation_rule<'a, O, F, I>(
    o: &O,
    rule: F,
    region: I,
) -> Result<(), Conflict<O::Square>>
where
    O: SquareTiled,
    O::Square: 'a,
    F: Fn(&O::Square) -> O::Square,
    I: IntoIterator<Item = &'a O::Square>,
{
    let mut preimage: HashMap<O::Square, O::Square> = HashMap::new();
    for x in region {
        let fx = rule(x);
        if let Some(other) = preimage.insert(fx.clone(), x.clone()) {
            if &other != x {
                return Err(Conflict::NotInjective {
                    image: fx,
                    first: other,
                    second: x.clone(),
                });
            }
        }
        for m in Move::ALL {
            let y = o.step(x, m);
            let via_rule = rule(&y);
            let via_step = o.step(&fx, m);
            if via_rule != via_step {
                return Err(Conflict::Inconsistent {
                    square: y,
                    first: via_rule,
                    second: via_step,
                });
            }
        }
    }
    Ok(())
}
