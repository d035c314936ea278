mod common;

use std::collections::HashSet;

use origami::aut::{automorphism_group, bounded_aut_search, corner_degree};
use origami::cover::{build_cover, check_flat, deck_map, Region, VoltageAssignment};
use origami::group::{Generation, Group, GroupElem, Lattice};
use origami::perm::{
    cycle_decomposition, trace_cycle, CycleTrace, FinitePerm, LazyBijection, SquareId,
};
use origami::realize::{
    realize_countable, realize_finite, staircase_voltages, CountableOptions, FiniteOptions,
    RealizationCertificate,
};
use origami::surface::{
    ball, genus, lemma1_origami, singularities, singularity_at, singularity_profile, Move, Origami,
    SquareMap, SquareTiled, DEFAULT_CYCLE_BUDGET,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn perm_strategy(max: usize) -> impl Strategy<Value = Images> {
    (1..=max).prop_flat_map(|n| Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
}

fn origami_strategy(max: usize) -> impl Strategy<Value = (Images, Images)> {
    (1..=max)
        .prop_flat_map(|n| {
            let base: Vec<usize> = (0..n).collect();
            (Just(base.clone()).prop_shuffle(), Just(base).prop_shuffle())
        })
        .prop_filter("connected", |(s, t)| connected(s, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cycles_rebuild_the_permutation(p in perm_strategy(100)) {
        let f = from_images(&p);
        let cycles: Vec<Vec<u32>> = cycle_decomposition(&f)
            .iter()
            .map(|c| c.iter().map(|x| x.get()).collect())
            .collect();
        let back = FinitePerm::from_cycles(p.len(), &cycles).unwrap();
        prop_assert_eq!(back.images(), f.images());
        prop_assert!(f.compose(&f.inverse()).unwrap().is_identity());
    }

    #[test]
    fn trace_agrees_with_decomposition(p in perm_strategy(100), start in 0usize..100) {
        let f = from_images(&p);
        let start = SquareId::from_index(start % p.len());
        let lazy = LazyBijection::from_finite(&f);
        let CycleTrace::Cycle(traced) = trace_cycle(&lazy, start, p.len() + 1) else {
            return Err(TestCaseError::fail("finite cycle exceeded its budget"));
        };
        let cycle = cycle_decomposition(&f).into_iter().find(|c| c.contains(&start)).unwrap();
        let k = cycle.iter().position(|&x| x == start).unwrap();
        let mut rotated = cycle.clone();
        rotated.rotate_left(k);
        prop_assert_eq!(traced, rotated);
    }

    #[test]
    fn gauss_bonnet((s, t) in origami_strategy(30)) {
        let o = origami_of(&s, &t);
        let profile = singularity_profile(&o).unwrap();
        let g = genus(&o).unwrap() as i64;
        let excess: i64 = profile.iter().map(|&d| d as i64 - 1).sum();
        prop_assert_eq!(excess, 2 * g - 2);
        prop_assert_eq!(profile.iter().sum::<usize>(), s.len());
    }

    #[test]
    fn inverse_commutator_has_the_same_cycle_type((s, t) in origami_strategy(30)) {
        let o = origami_of(&s, &t);
        let c = o.commutator_perm().unwrap();
        let mut forward: Vec<usize> = c.cycles().iter().map(Vec::len).collect();
        let mut backward: Vec<usize> = c.inverse().cycles().iter().map(Vec::len).collect();
        forward.sort();
        backward.sort();
        prop_assert_eq!(&forward, &backward);
        // the inverse step walks the same vertices backwards
        for i in 0..s.len() {
            let x = SquareId::from_index(i);
            prop_assert_eq!(o.commutator_step_inverse(&o.commutator_step(&x)), x);
        }
        let mut lib: Vec<usize> = singularities(&o).unwrap().iter().map(|v| v.degree).collect();
        lib.sort();
        prop_assert_eq!(lib, forward);
    }

    #[test]
    fn balls_grow((s, t) in origami_strategy(20), r in 0usize..6, b in 0usize..20) {
        let o = origami_of(&s, &t);
        let base = SquareId::from_index(b % s.len());
        let small = ball(&o, &base, r);
        let big = ball(&o, &base, r + 1);
        prop_assert!(small.iter().all(|x| big.contains(x)));
        prop_assert!(small.iter().all(|x| small.depth(x).unwrap() <= r));
    }

    #[test]
    fn automorphisms_are_free_and_closed((s, t) in origami_strategy(12)) {
        let o = origami_of(&s, &t);
        let aut = automorphism_group(&o).unwrap();
        let set: HashSet<Vec<u32>> = aut.iter().map(|a| a.images()).collect();
        prop_assert_eq!(s.len() % aut.len(), 0);
        for a in &aut {
            if !a.is_identity() {
                prop_assert!(a.fixed_points().next().is_none());
            }
            prop_assert!(set.contains(&a.inverse().images()));
            for b in &aut {
                prop_assert!(set.contains(&a.compose(b).unwrap().images()));
            }
            // automorphisms preserve vertex degrees
            for i in 0..s.len() {
                let x = SquareId::from_index(i);
                prop_assert_eq!(
                    corner_degree(&o, &x, DEFAULT_CYCLE_BUDGET),
                    corner_degree(&o, &a.apply(x), DEFAULT_CYCLE_BUDGET)
                );
            }
        }
    }

    #[test]
    fn word_normal_form_is_idempotent(letters in prop::collection::vec(prop_oneof![1i32..=3, -3i32..=-1], 0..40)) {
        let f3 = Group::free(3).unwrap();
        let w = f3.word(&letters).unwrap();
        prop_assert_eq!(f3.normalize(&w).unwrap(), w.clone());
        let inv = f3.invert(&w).unwrap();
        prop_assert!(f3.multiply(&w, &inv).unwrap().is_identity());
    }
}

#[test]
fn builtin_bijections_are_inverse_pairs() {
    let o = lemma1_origami();
    for map in [o.sigma(), o.tau()] {
        let SquareMap::Lazy(b) = map else {
            panic!("lemma1 uses lazy rules");
        };
        for v in 1..=10_000 {
            let i = SquareId::new(v);
            assert_eq!(b.apply_inverse(b.apply(i)), i);
            assert_eq!(b.apply(b.apply_inverse(i)), i);
        }
    }
}

#[test]
fn normal_forms_are_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let z3 = Group::free_abelian(3).unwrap();
    let f2 = Group::free(2).unwrap();
    let s5 = Group::perm_group(vec![perm(5, &[&[1, 2]]), perm(5, &[&[1, 2, 3, 4, 5]])]).unwrap();
    for _ in 0..1000 {
        let v = GroupElem::Vector((0..3).map(|_| rng.gen_range(-50..=50)).collect());
        assert_eq!(
            z3.normalize(&z3.normalize(&v).unwrap()).unwrap(),
            z3.normalize(&v).unwrap()
        );
        let letters: Vec<i32> = (0..rng.gen_range(0..30))
            .map(|_| if rng.gen() { 1 } else { -1 } * rng.gen_range(1..=2))
            .collect();
        let w = f2.word(&letters).unwrap();
        assert_eq!(f2.normalize(&w).unwrap(), w);
        let p = GroupElem::Perm(from_images(&random_perm(&mut rng, 5)));
        assert_eq!(s5.normalize(&s5.normalize(&p).unwrap()).unwrap(), p);
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn closure_orders_divide_n_factorial() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=3);
        let gens: Vec<FinitePerm> = (0..k)
            .map(|_| from_images(&random_perm(&mut rng, n)))
            .collect();
        let g = Group::perm_group(gens).unwrap();
        let order = g.elements(1_000_000).unwrap().len();
        assert_eq!(factorial(n) % order, 0, "order {order} on {n} points");
    }
}

#[test]
fn free_abelian_generation_is_constructive() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut generated = 0;
    for _ in 0..300 {
        let rank = rng.gen_range(1..=3);
        let count = rng.gen_range(1..=4);
        let rows: Vec<Vec<i64>> = (0..count)
            .map(|_| (0..rank).map(|_| rng.gen_range(-4..=4)).collect())
            .collect();
        let g = Group::free_abelian(rank).unwrap();
        let gens: Vec<GroupElem> = rows.iter().cloned().map(GroupElem::Vector).collect();
        if g.generates(&gens) != Generation::Generates {
            continue;
        }
        generated += 1;
        let coeffs = Lattice::new(&rows, rank)
            .unwrap()
            .standard_basis_coefficients()
            .unwrap();
        for (axis, c) in coeffs.iter().enumerate() {
            let mut sum = vec![0i64; rank];
            for (ci, row) in c.iter().zip(&rows) {
                for (s, x) in sum.iter_mut().zip(row) {
                    *s += ci * x;
                }
            }
            let mut e = vec![0i64; rank];
            e[axis] = 1;
            assert_eq!(sum, e);
        }
    }
    assert!(generated > 20);
}

#[test]
fn commuting_pairs_are_tori() {
    // sigma and tau are the two coordinate shifts of an a x b grid, or
    // powers of them
    for a in 1..=5usize {
        for b in 1..=5usize {
            let n = a * b;
            let idx = |x: usize, y: usize| (y % b) * a + (x % a);
            for (p, q) in [(1, 1), (1, 2), (2, 1)] {
                let s: Images = (0..n).map(|i| idx(i % a + p, i / a)).collect();
                let t: Images = (0..n).map(|i| idx(i % a, i / a + q)).collect();
                if !connected(&s, &t) {
                    continue;
                }
                let o = origami_of(&s, &t);
                assert!(singularities(&o).unwrap().iter().all(|v| v.degree == 1));
                assert_eq!(genus(&o).unwrap(), 1);
                assert_eq!(
                    automorphism_group(&o).unwrap().len(),
                    n,
                    "abelian and transitive"
                );
            }
        }
    }
}

#[test]
fn finite_covers_project_and_deck_maps_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for g in small_groups() {
        let elements = g.elements(1000).unwrap();
        for _ in 0..10 {
            let n = rng.gen_range(1..=6);
            let (s, t) = random_connected(&mut rng, n);
            let base = origami_of(&s, &t);
            let mut v = VoltageAssignment::new(g.clone());
            for i in (0..n).filter(|&i| s[t[i]] == t[i]) {
                v.set_v(SquareId::from_index(i), random_element(&mut rng, &elements))
                    .unwrap();
            }
            let cover = build_cover(&base, &v).unwrap();
            let index = cover.index().unwrap();
            for cs in index.squares() {
                for m in Move::ALL {
                    assert_eq!(cover.step(&cs, m).square, base.step(&cs.square, m));
                }
                for h in &elements {
                    let d = deck_map(&cover, h).unwrap();
                    for m in Move::ALL {
                        assert_eq!(d.apply(&cover.step(&cs, m)), cover.step(&d.apply(&cs), m));
                    }
                    if !h.is_identity() {
                        assert_ne!(d.apply(&cs), cs);
                    }
                }
            }
        }
    }
}

#[test]
fn staircase_scheme_is_flat_for_every_kind() {
    for k in 1..=8usize {
        let mut groups = vec![Group::free_abelian(k).unwrap(), Group::free(k).unwrap()];
        // (Z/2)^k acting on 2k points
        let gens: Vec<FinitePerm> = (0..k)
            .map(|j| perm(2 * k, &[&[2 * j as u32 + 1, 2 * j as u32 + 2]]))
            .collect();
        groups.push(Group::perm_group(gens).unwrap());
        for g in groups {
            let gens: Vec<GroupElem> = g.generators().to_vec();
            let v = staircase_voltages(&g, &gens).unwrap();
            let squares: Vec<SquareId> = (1..=(3 * k + 30) as u32).map(SquareId::new).collect();
            let report = check_flat(&lemma1_origami(), &v, Region::Squares(&squares)).unwrap();
            assert!(report.flat, "k = {k}, {g}");
        }
    }
}

#[test]
fn finite_certificates_reproduce() {
    for g in small_groups() {
        let r = realize_finite(&g, FiniteOptions::default()).unwrap();
        let RealizationCertificate::Exact { aut, deck, .. } = &r.certificate else {
            panic!("finite groups get exact certificates");
        };
        let mut again = automorphism_group(&r.origami).unwrap();
        again.sort();
        assert_eq!(&again, aut);
        let closure = g.elements(1000).unwrap();
        assert_eq!(closure.len(), deck.len());
        let index = r.cover.index().unwrap();
        let mut rebuilt: Vec<FinitePerm> = closure
            .iter()
            .map(|h| deck_map(&r.cover, h).unwrap().to_perm(&index))
            .collect();
        rebuilt.sort();
        assert_eq!(&rebuilt, deck);
        // fiber over the marker is all degree 1
        for h in &closure {
            let id = index.square_id(&origami::cover::CoverSquare {
                square: *r.base.marker.anchor(),
                fiber: h.clone(),
            });
            assert_eq!(
                singularity_at(&r.origami, &id, DEFAULT_CYCLE_BUDGET)
                    .unwrap()
                    .degree,
                1
            );
        }
    }
}

#[test]
fn infinite_realizations_keep_the_marker_and_decks() {
    for g in [
        Group::free_abelian(1).unwrap(),
        Group::free_abelian(2).unwrap(),
        Group::free(2).unwrap(),
    ] {
        let r = realize_countable(&g, CountableOptions::default()).unwrap();
        let origin = r.cover.origin();
        let region = ball(&r.cover, &origin, 6);
        for x in g.generators() {
            let d = deck_map(&r.cover, x).unwrap();
            for s in region.iter() {
                for m in Move::ALL {
                    assert_eq!(d.apply(&r.cover.step(s, m)), r.cover.step(&d.apply(s), m));
                }
            }
        }
        for s in region.iter().filter(|s| s.square == SquareId::new(2)) {
            assert_eq!(
                singularity_at(&r.cover, s, DEFAULT_CYCLE_BUDGET)
                    .unwrap()
                    .degree,
                1
            );
        }
        // surviving seeds preserve degrees on their explored table
        let seeds: Vec<_> = ball(&r.cover, &origin, 2).iter().cloned().collect();
        for v in bounded_aut_search(&r.cover, &origin, 4, &seeds) {
            if let Some(map) = v.verdict.map() {
                for (a, b) in &map.table {
                    assert_eq!(
                        corner_degree(&r.cover, a, DEFAULT_CYCLE_BUDGET),
                        corner_degree(&r.cover, b, DEFAULT_CYCLE_BUDGET)
                    );
                }
            }
        }
    }
}

#[test]
fn disconnected_pairs_are_rejected() {
    let o = Origami::finite(FinitePerm::identity(2), FinitePerm::identity(2));
    assert!(o.is_err());
}
