//! Voltage covers of origamis.
//!
//! A voltage assignment decorates the right-edge gluing `i → σ(i)` of each
//! square with `wh(i)` and the top-edge gluing `i → τ(i)` with `wv(i)`.
//! The cover has squares `(i, g)` with
//!
//! ```text
//! σ'(i, g) = (σ(i), g·wh(i))      τ'(i, g) = (τ(i), g·wv(i))
//! ```
//!
//! and the deck group acts by `(i, g) ↦ (i, h·g)`. Voltages multiply on
//! the right and deck elements on the left, so the two commute.
//!
//! Going once around a base vertex multiplies the fiber coordinate by the
//! vertex's voltage word; the cover is unbranched exactly when every word
//! is the identity ("flat"). Only flat covers are built.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::group::{
    Generation, Group, GroupElem, GroupError, GroupKind, Lattice, DEFAULT_CLOSURE_CAP,
};
use crate::perm::{FinitePerm, SquareId};
use crate::surface::{
    ball, singularities_meeting, Ball, Connectivity, Move, Origami, Singularity, SquareTiled,
    SurfaceError, ValidationError, DEFAULT_CYCLE_BUDGET,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("voltage word {word} at the vertex anchored at square {anchor} is not the identity")]
    NotFlat { anchor: SquareId, word: GroupElem },
    #[error("region misses the vertex at square {square}, which carries voltages")]
    RegionTooSmall { square: SquareId },
    #[error("the whole-origami region needs a finite base")]
    InfiniteRegion,
    #[error("cover is not connected: {witness} is unreachable from the origin")]
    NotConnectedCover { witness: String },
    #[error("operation needs a finite base and a finite group")]
    NotFinite,
}

/// Group-valued decorations of the gluings; unassigned squares carry the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoltageAssignment {
    group: Group,
    identity: GroupElem,
    wh: BTreeMap<SquareId, GroupElem>,
    wv: BTreeMap<SquareId, GroupElem>,
}

impl VoltageAssignment {
    pub fn new(group: Group) -> Self {
        let identity = group.identity();
        VoltageAssignment {
            group,
            identity,
            wh: BTreeMap::new(),
            wv: BTreeMap::new(),
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// Voltage on the right edge of `i`.
    pub fn set_h(&mut self, i: SquareId, g: GroupElem) -> Result<(), GroupError> {
        let g = self.group.normalize(&g)?;
        if g.is_identity() {
            self.wh.remove(&i);
        } else {
            self.wh.insert(i, g);
        }
        Ok(())
    }

    /// Voltage on the top edge of `i`.
    pub fn set_v(&mut self, i: SquareId, g: GroupElem) -> Result<(), GroupError> {
        let g = self.group.normalize(&g)?;
        if g.is_identity() {
            self.wv.remove(&i);
        } else {
            self.wv.insert(i, g);
        }
        Ok(())
    }

    pub fn h(&self, i: SquareId) -> &GroupElem {
        self.wh.get(&i).unwrap_or(&self.identity)
    }

    pub fn v(&self, i: SquareId) -> &GroupElem {
        self.wv.get(&i).unwrap_or(&self.identity)
    }

    /// Nonidentity horizontal and vertical voltages.
    pub fn horizontal(&self) -> impl Iterator<Item = (&SquareId, &GroupElem)> {
        self.wh.iter()
    }

    pub fn vertical(&self) -> impl Iterator<Item = (&SquareId, &GroupElem)> {
        self.wv.iter()
    }

    /// Squares carrying a nonidentity voltage.
    pub fn support(&self) -> BTreeSet<SquareId> {
        self.wh.keys().chain(self.wv.keys()).copied().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.wh.is_empty() && self.wv.is_empty()
    }

    /// Anchors of the vertices whose voltage words involve a nonidentity
    /// voltage.
    pub fn affected_anchors(&self, o: &Origami) -> BTreeSet<SquareId> {
        let mut out = BTreeSet::new();
        for &i in self.wh.keys() {
            out.insert(o.right(&i));
            out.insert(o.right(&o.up(&i)));
        }
        for &i in self.wv.keys() {
            out.insert(o.right(&o.up(&i)));
            out.insert(o.right(&o.up(&o.left(&i))));
        }
        out
    }
}

/// Product of voltages met while circling the vertex `s` once.
///
/// At each cycle point `p` this multiplies, in order,
/// `wh(σ⁻¹p)⁻¹ · wv(τ⁻¹σ⁻¹p)⁻¹ · wh(τ⁻¹σ⁻¹p) · wv(στ⁻¹σ⁻¹p)`.
pub fn vertex_voltage_word(
    o: &Origami,
    voltages: &VoltageAssignment,
    s: &Singularity<SquareId>,
) -> Result<GroupElem, CoverError> {
    let g = voltages.group();
    let mut acc = g.identity();
    for p in &s.cycle {
        let q1 = o.left(p);
        let q2 = o.down(&q1);
        let q3 = o.right(&q2);
        acc = g.multiply(&acc, &g.invert(voltages.h(q1))?)?;
        acc = g.multiply(&acc, &g.invert(voltages.v(q2))?)?;
        acc = g.multiply(&acc, voltages.h(q2))?;
        acc = g.multiply(&acc, voltages.v(q3))?;
    }
    Ok(acc)
}

/// Squares whose vertices [`check_flat`] inspects.
#[derive(Clone, Copy, Debug)]
pub enum Region<'a> {
    /// Every square of a finite origami.
    All,
    Ball(&'a Ball<SquareId>),
    Squares(&'a [SquareId]),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexWord {
    pub singularity: Singularity<SquareId>,
    pub word: GroupElem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatReport {
    pub vertices: Vec<VertexWord>,
    pub flat: bool,
}

impl FlatReport {
    pub fn offending(&self) -> impl Iterator<Item = &VertexWord> {
        self.vertices.iter().filter(|v| !v.word.is_identity())
    }
}

/// Voltage words of every vertex meeting `region`.
pub fn check_flat(
    o: &Origami,
    voltages: &VoltageAssignment,
    region: Region<'_>,
) -> Result<FlatReport, CoverError> {
    let squares: Vec<SquareId> = match region {
        Region::All => {
            let n = o.square_count().ok_or(CoverError::InfiniteRegion)?;
            (0..n).map(SquareId::from_index).collect()
        }
        Region::Ball(b) => b.iter().copied().collect(),
        Region::Squares(s) => s.to_vec(),
    };
    let sings = singularities_meeting(o, squares, DEFAULT_CYCLE_BUDGET)?;
    let covered: HashSet<SquareId> = sings.iter().flat_map(|s| s.cycle.iter().copied()).collect();
    if let Some(&square) = voltages
        .affected_anchors(o)
        .iter()
        .find(|a| !covered.contains(a))
    {
        return Err(CoverError::RegionTooSmall { square });
    }
    let mut vertices = Vec::with_capacity(sings.len());
    for s in sings {
        let word = vertex_voltage_word(o, voltages, &s)?;
        vertices.push(VertexWord {
            singularity: s,
            word,
        });
    }
    let flat = vertices.iter().all(|v| v.word.is_identity());
    Ok(FlatReport { vertices, flat })
}

/// A square of a cover: base square plus fiber coordinate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CoverSquare {
    pub square: SquareId,
    pub fiber: GroupElem,
}

impl fmt::Display for CoverSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.square, self.fiber)
    }
}

/// A flat voltage cover, evaluated lazily.
#[derive(Clone, Debug)]
pub struct CoverOrigami {
    base: Origami,
    voltages: VoltageAssignment,
    group_order: Option<usize>,
}

/// Builds the cover after checking flatness at every vertex that carries
/// a voltage.
pub fn build_cover(
    base: &Origami,
    voltages: &VoltageAssignment,
) -> Result<CoverOrigami, CoverError> {
    let anchors: Vec<SquareId> = voltages.affected_anchors(base).into_iter().collect();
    let report = check_flat(base, voltages, Region::Squares(&anchors))?;
    if let Some(bad) = report.offending().next() {
        return Err(CoverError::NotFlat {
            anchor: *bad.singularity.anchor(),
            word: bad.word.clone(),
        });
    }
    let group_order = if voltages.group().is_finite() {
        Some(voltages.group().elements(DEFAULT_CLOSURE_CAP)?.len())
    } else {
        None
    };
    Ok(CoverOrigami {
        base: base.clone(),
        voltages: voltages.clone(),
        group_order,
    })
}

impl SquareTiled for CoverOrigami {
    type Square = CoverSquare;

    fn right(&self, s: &CoverSquare) -> CoverSquare {
        let g = self.group();
        CoverSquare {
            square: self.base.right(&s.square),
            fiber: g.mul(&s.fiber, self.voltages.h(s.square)),
        }
    }

    fn left(&self, s: &CoverSquare) -> CoverSquare {
        let g = self.group();
        let prev = self.base.left(&s.square);
        CoverSquare {
            square: prev,
            fiber: g.mul(&s.fiber, &g.inv(self.voltages.h(prev))),
        }
    }

    fn up(&self, s: &CoverSquare) -> CoverSquare {
        let g = self.group();
        CoverSquare {
            square: self.base.up(&s.square),
            fiber: g.mul(&s.fiber, self.voltages.v(s.square)),
        }
    }

    fn down(&self, s: &CoverSquare) -> CoverSquare {
        let g = self.group();
        let prev = self.base.down(&s.square);
        CoverSquare {
            square: prev,
            fiber: g.mul(&s.fiber, &g.inv(self.voltages.v(prev))),
        }
    }

    fn origin(&self) -> CoverSquare {
        CoverSquare {
            square: SquareId::new(1),
            fiber: self.group().identity(),
        }
    }

    fn square_count(&self) -> Option<usize> {
        Some(self.base.square_count()? * self.group_order?)
    }
}

/// Bijection between the squares of a finite cover and `1..=n·|G|`:
/// `(i, g_k) ↦ k·n + i`, with `g_0 = e` and the elements in closure order.
#[derive(Clone, Debug)]
pub struct CoverIndex {
    base_n: usize,
    elements: Vec<GroupElem>,
    position: HashMap<GroupElem, usize>,
}

impl CoverIndex {
    pub fn len(&self) -> usize {
        self.base_n * self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> &[GroupElem] {
        &self.elements
    }

    pub fn square_id(&self, s: &CoverSquare) -> SquareId {
        let k = self.position[&s.fiber];
        SquareId::from_index(k * self.base_n + s.square.index())
    }

    pub fn cover_square(&self, id: SquareId) -> CoverSquare {
        let (k, i) = (id.index() / self.base_n, id.index() % self.base_n);
        CoverSquare {
            square: SquareId::from_index(i),
            fiber: self.elements[k].clone(),
        }
    }

    pub fn squares(&self) -> impl Iterator<Item = CoverSquare> + '_ {
        (0..self.len()).map(|k| self.cover_square(SquareId::from_index(k)))
    }
}

impl CoverOrigami {
    pub fn base(&self) -> &Origami {
        &self.base
    }

    pub fn voltages(&self) -> &VoltageAssignment {
        &self.voltages
    }

    pub fn group(&self) -> &Group {
        self.voltages.group()
    }

    pub fn is_finite(&self) -> bool {
        self.square_count().is_some()
    }

    pub fn index(&self) -> Result<CoverIndex, CoverError> {
        let base_n = self.base.square_count().ok_or(CoverError::NotFinite)?;
        if !self.group().is_finite() {
            return Err(CoverError::NotFinite);
        }
        let elements = self.group().elements(DEFAULT_CLOSURE_CAP)?;
        let position = elements
            .iter()
            .enumerate()
            .map(|(k, g)| (g.clone(), k))
            .collect();
        Ok(CoverIndex {
            base_n,
            elements,
            position,
        })
    }

    /// `(σ', τ')` of a finite cover under `index`.
    pub fn permutations(&self, index: &CoverIndex) -> (FinitePerm, FinitePerm) {
        let mut sigma = Vec::with_capacity(index.len());
        let mut tau = Vec::with_capacity(index.len());
        for s in index.squares() {
            sigma.push(index.square_id(&self.right(&s)).get());
            tau.push(index.square_id(&self.up(&s)).get());
        }
        (
            FinitePerm::from_images(&sigma).expect("cover gluing is a bijection"),
            FinitePerm::from_images(&tau).expect("cover gluing is a bijection"),
        )
    }

    /// The finite cover as an ordinary origami.
    pub fn to_origami(&self) -> Result<(Origami, CoverIndex), CoverError> {
        let index = self.index()?;
        let (s, t) = self.permutations(&index);
        match Origami::finite(s, t) {
            Ok(o) => Ok((o, index)),
            Err(ValidationError::NotConnected { witness }) => Err(CoverError::NotConnectedCover {
                witness: index.cover_square(witness).to_string(),
            }),
            Err(e) => unreachable!("cover of a valid origami failed validation: {e}"),
        }
    }
}

/// Left multiplication of fibers by a group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeckMap {
    group: Group,
    element: GroupElem,
}

impl DeckMap {
    pub fn element(&self) -> &GroupElem {
        &self.element
    }

    pub fn apply(&self, s: &CoverSquare) -> CoverSquare {
        CoverSquare {
            square: s.square,
            fiber: self.group.mul(&self.element, &s.fiber),
        }
    }

    pub fn to_perm(&self, index: &CoverIndex) -> FinitePerm {
        let images: Vec<u32> = index
            .squares()
            .map(|s| index.square_id(&self.apply(&s)).get())
            .collect();
        FinitePerm::from_images(&images).expect("deck map is a bijection")
    }
}

pub fn deck_map(c: &CoverOrigami, h: &GroupElem) -> Result<DeckMap, CoverError> {
    let element = c.group().normalize(h)?;
    Ok(DeckMap {
        group: c.group().clone(),
        element,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CoverConnectivity {
    Connected,
    Disconnected {
        witness: CoverSquare,
    },
    /// Holonomy found while exploring `explored` base squares did not
    /// settle the question.
    Unknown {
        explored: usize,
        holonomy: Vec<GroupElem>,
    },
}

/// Decides connectivity of finite covers by search. Otherwise the
/// holonomy collected on up to `budget` base squares is tested with
/// [`Group::generates`].
pub fn check_cover_connected(c: &CoverOrigami, budget: usize) -> CoverConnectivity {
    if let Ok(index) = c.index() {
        let all = ball(c, &c.origin(), usize::MAX);
        return match index.squares().find(|s| !all.contains(s)) {
            None => CoverConnectivity::Connected,
            Some(witness) => CoverConnectivity::Disconnected { witness },
        };
    }
    let (explored, holonomy) = holonomy_generators(c, budget);
    let base_connected = matches!(
        c.base().validation().connectivity,
        Connectivity::Connected | Connectivity::ByConstruction
    );
    let exhaustive = c.base().square_count() == Some(explored);
    match c.group().generates(&holonomy) {
        Generation::Generates if base_connected => CoverConnectivity::Connected,
        Generation::DoesNotGenerate if exhaustive => match missing_fiber(c.group(), &holonomy) {
            Some(fiber) => CoverConnectivity::Disconnected {
                witness: CoverSquare {
                    square: SquareId::new(1),
                    fiber,
                },
            },
            None => CoverConnectivity::Unknown { explored, holonomy },
        },
        _ => CoverConnectivity::Unknown { explored, holonomy },
    }
}

fn missing_fiber(group: &Group, holonomy: &[GroupElem]) -> Option<GroupElem> {
    let GroupKind::FreeAbelian { rank } = group.kind() else {
        return None;
    };
    let rows: Vec<Vec<i64>> = holonomy
        .iter()
        .filter_map(|h| h.as_vector().map(<[i64]>::to_vec))
        .collect();
    let lattice = Lattice::new(&rows, rank)?;
    group
        .generators()
        .iter()
        .find(|e| !lattice.contains(e.as_vector().expect("vector")))
        .cloned()
}

/// Voltages of closed walks at square 1, one per explored gluing, relative
/// to potentials grown along identity-voltage gluings first. Returns the
/// number of base squares explored and the distinct nonidentity values.
pub fn holonomy_generators(c: &CoverOrigami, budget: usize) -> (usize, Vec<GroupElem>) {
    let g = c.group();
    let origin = SquareId::new(1);
    let mut potential: HashMap<SquareId, GroupElem> = HashMap::from([(origin, g.identity())]);
    let mut cost: HashMap<SquareId, usize> = HashMap::from([(origin, 0)]);
    let mut order = vec![origin];
    let mut deque = VecDeque::from([origin]);
    while let Some(x) = deque.pop_front() {
        for m in Move::ALL {
            let cx = c.step(
                &CoverSquare {
                    square: x,
                    fiber: potential[&x].clone(),
                },
                m,
            );
            let weight = usize::from(cx.fiber != potential[&x]);
            let new_cost = cost[&x] + weight;
            let y = cx.square;
            match cost.get(&y) {
                Some(&old) if old <= new_cost => continue,
                Some(_) => {}
                None => {
                    if order.len() >= budget {
                        continue;
                    }
                    order.push(y);
                }
            }
            cost.insert(y, new_cost);
            potential.insert(y, cx.fiber);
            if weight == 0 {
                deque.push_front(y);
            } else {
                deque.push_back(y);
            }
        }
    }
    let mut seen = HashSet::new();
    let mut holonomy = Vec::new();
    for &x in &order {
        for m in [Move::Right, Move::Up] {
            let cx = c.step(
                &CoverSquare {
                    square: x,
                    fiber: potential[&x].clone(),
                },
                m,
            );
            let Some(py) = potential.get(&cx.square) else {
                continue;
            };
            let h = g.mul(&cx.fiber, &g.inv(py));
            if !h.is_identity() && seen.insert(h.clone()) {
                holonomy.push(h);
            }
        }
    }
    (order.len(), holonomy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aut::{automorphism_group, check_translation_rule};
    use crate::surface::{lemma1_origami, singularity_at, singularity_profile};

    fn sq(v: u32) -> SquareId {
        SquareId::new(v)
    }

    fn perm(n: usize, cycles: &[&[u32]]) -> FinitePerm {
        let c: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
        FinitePerm::from_cycles(n, &c).unwrap()
    }

    fn torus() -> Origami {
        Origami::finite(FinitePerm::identity(1), FinitePerm::identity(1)).unwrap()
    }

    fn s3() -> Group {
        Group::perm_group(vec![perm(3, &[&[1, 2]]), perm(3, &[&[1, 3]])]).unwrap()
    }

    fn z2_perm() -> Group {
        Group::perm_group(vec![perm(2, &[&[1, 2]])]).unwrap()
    }

    #[test]
    fn abelian_torus_word_is_trivial() {
        let z2 = Group::free_abelian(2).unwrap();
        let mut v = VoltageAssignment::new(z2.clone());
        v.set_h(sq(1), GroupElem::Vector(vec![1, 0])).unwrap();
        v.set_v(sq(1), GroupElem::Vector(vec![0, 1])).unwrap();
        let o = torus();
        let s = singularity_at(&o, &sq(1), 10).unwrap();
        assert_eq!(vertex_voltage_word(&o, &v, &s).unwrap(), z2.identity());
    }

    #[test]
    fn nonabelian_torus_word_is_the_commutator() {
        let g = s3();
        let (a, b) = (g.generators()[0].clone(), g.generators()[1].clone());
        let mut v = VoltageAssignment::new(g.clone());
        v.set_h(sq(1), a.clone()).unwrap();
        v.set_v(sq(1), b.clone()).unwrap();
        let o = torus();
        let s = singularity_at(&o, &sq(1), 10).unwrap();
        let word = vertex_voltage_word(&o, &v, &s).unwrap();
        // a⁻¹ b⁻¹ a b with both transpositions self-inverse, as image tables
        let (ta, tb) = (a.as_perm().unwrap().images(), b.as_perm().unwrap().images());
        let apply = |t: &[u32], i: u32| t[i as usize - 1];
        let expected: Vec<u32> = (1..=3)
            .map(|i| apply(&ta, apply(&tb, apply(&ta, apply(&tb, i)))))
            .collect();
        assert_eq!(word.as_perm().unwrap().images(), expected);
        assert!(!word.is_identity());

        let report = check_flat(&o, &v, Region::All).unwrap();
        assert!(!report.flat);
        assert_eq!(
            report.offending().next().unwrap().singularity.cycle,
            vec![sq(1)]
        );
        assert!(matches!(
            build_cover(&o, &v),
            Err(CoverError::NotFlat { .. })
        ));
    }

    #[test]
    fn lemma1_single_loop_voltage_cancels() {
        let o = lemma1_origami();
        let f2 = Group::free(2).unwrap();
        let mut v = VoltageAssignment::new(f2.clone());
        v.set_v(sq(1), f2.word(&[1, 2]).unwrap()).unwrap();
        let s = singularity_at(&o, &sq(2), 10).unwrap();
        assert_eq!(vertex_voltage_word(&o, &v, &s).unwrap(), f2.identity());
    }

    #[test]
    fn identity_voltages_are_flat_and_loop_slots_stay_flat() {
        let o = lemma1_origami();
        let f3 = Group::free(3).unwrap();
        let squares: Vec<SquareId> = (1..=12).map(sq).collect();
        let trivial = VoltageAssignment::new(f3.clone());
        assert!(
            check_flat(&o, &trivial, Region::Squares(&squares))
                .unwrap()
                .flat
        );

        let mut v = VoltageAssignment::new(f3.clone());
        for j in 0..3u32 {
            v.set_v(sq(3 * j + 1), f3.generators()[j as usize].clone())
                .unwrap();
        }
        let report = check_flat(&o, &v, Region::Squares(&squares)).unwrap();
        assert!(report.flat);
        assert!(report.vertices.len() >= 4);

        let few = [sq(1)];
        assert!(matches!(
            check_flat(&o, &v, Region::Squares(&few)),
            Err(CoverError::RegionTooSmall { .. })
        ));
        assert_eq!(
            check_flat(&o, &v, Region::All),
            Err(CoverError::InfiniteRegion)
        );
    }

    #[test]
    fn torus_z2_cover_is_the_cylinder() {
        let g = z2_perm();
        let mut v = VoltageAssignment::new(g.clone());
        v.set_h(sq(1), g.generators()[0].clone()).unwrap();
        let c = build_cover(&torus(), &v).unwrap();
        let (o, index) = c.to_origami().unwrap();
        let (s, t) = o.finite_perms().unwrap();
        assert_eq!(*s, perm(2, &[&[1, 2]]));
        assert!(t.is_identity());

        let d = deck_map(&c, &g.generators()[0]).unwrap();
        assert_eq!(
            automorphism_group(&o).unwrap(),
            vec![FinitePerm::identity(2), d.to_perm(&index)]
        );
        assert_eq!(check_cover_connected(&c, 100), CoverConnectivity::Connected);
    }

    #[test]
    fn trivial_cover_is_the_base() {
        let l = Origami::finite(perm(3, &[&[1, 2]]), perm(3, &[&[1, 3]])).unwrap();
        let c = build_cover(&l, &VoltageAssignment::new(Group::trivial())).unwrap();
        let (o, _) = c.to_origami().unwrap();
        assert_eq!(o, l);
    }

    #[test]
    fn z_cover_of_lemma1() {
        let o = lemma1_origami();
        let z = Group::free_abelian(1).unwrap();
        let mut v = VoltageAssignment::new(z.clone());
        v.set_v(sq(1), GroupElem::Vector(vec![1])).unwrap();
        let c = build_cover(&o, &v).unwrap();
        assert!(!c.is_finite());
        for k in -3..=3 {
            let s = CoverSquare {
                square: sq(2),
                fiber: GroupElem::Vector(vec![k]),
            };
            assert_eq!(singularity_at(&c, &s, 100).unwrap().degree, 1);
        }
        assert_eq!(check_cover_connected(&c, 200), CoverConnectivity::Connected);

        let shift = deck_map(&c, &GroupElem::Vector(vec![1])).unwrap();
        let region = ball(&c, &c.origin(), 8);
        assert!(check_translation_rule(&c, |x| shift.apply(x), region.iter()).is_ok());
        assert!(region.iter().all(|x| shift.apply(x) != *x));
        let id = deck_map(&c, &z.identity()).unwrap();
        assert!(region.iter().all(|x| id.apply(x) == *x));
    }

    #[test]
    fn connectivity_verdicts() {
        let g = s3();
        let c = build_cover(&torus(), &VoltageAssignment::new(g)).unwrap();
        assert!(matches!(
            check_cover_connected(&c, 100),
            CoverConnectivity::Disconnected { .. }
        ));
        assert!(matches!(
            c.to_origami(),
            Err(CoverError::NotConnectedCover { .. })
        ));

        let z2 = Group::free_abelian(2).unwrap();
        let mut v = VoltageAssignment::new(z2.clone());
        v.set_v(sq(1), GroupElem::Vector(vec![1, 0])).unwrap();
        let c = build_cover(&lemma1_origami(), &v).unwrap();
        match check_cover_connected(&c, 200) {
            CoverConnectivity::Unknown { explored, holonomy } => {
                assert_eq!(explored, 200);
                assert_eq!(holonomy, vec![GroupElem::Vector(vec![1, 0])]);
            }
            other => panic!("unexpected {other:?}"),
        }

        // finite base, infinite group: exact
        let c = build_cover(&torus(), &{
            let mut v = VoltageAssignment::new(z2.clone());
            v.set_v(sq(1), GroupElem::Vector(vec![1, 0])).unwrap();
            v
        })
        .unwrap();
        assert_eq!(
            check_cover_connected(&c, 10),
            CoverConnectivity::Disconnected {
                witness: CoverSquare {
                    square: sq(1),
                    fiber: GroupElem::Vector(vec![0, 1])
                }
            }
        );
    }

    #[test]
    fn finite_cover_profile_is_fiberwise() {
        // L-shaped base, Z/2 on the top edge of square 2
        let l = Origami::finite(perm(3, &[&[1, 2]]), perm(3, &[&[1, 3]])).unwrap();
        let g = z2_perm();
        let mut v = VoltageAssignment::new(g.clone());
        v.set_v(sq(2), g.generators()[0].clone()).unwrap();
        let c = build_cover(&l, &v).unwrap();
        let (o, _) = c.to_origami().unwrap();
        assert_eq!(singularity_profile(&o).unwrap(), vec![3, 3]);
    }
}
