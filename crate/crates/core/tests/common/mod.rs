//! Test-side oracles written without the library's algorithms: plain
//! image vectors (0-based), union-find over square corners, and
//! brute-force centralizers.

#![allow(dead_code)]

use origami::group::{Group, GroupElem};
use origami::perm::FinitePerm;
use origami::surface::Origami;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Images = Vec<usize>;

pub fn to_images(p: &FinitePerm) -> Images {
    p.images().iter().map(|&x| x as usize - 1).collect()
}

pub fn from_images(v: &[usize]) -> FinitePerm {
    let one_based: Vec<u32> = v.iter().map(|&x| x as u32 + 1).collect();
    FinitePerm::from_images(&one_based).expect("valid images")
}

pub fn invert(p: &[usize]) -> Images {
    let mut q = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        q[j] = i;
    }
    q
}

pub fn connected(s: &[usize], t: &[usize]) -> bool {
    let n = s.len();
    let (si, ti) = (invert(s), invert(t));
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for y in [s[x], t[x], si[x], ti[x]] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.iter().all(|&b| b)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra] = rb;
    }
}

/// Corner classes of the glued squares. Corner `4i + c` is corner `c` of
/// square `i` (0 lower-left, 1 lower-right, 2 upper-right, 3 upper-left).
/// Returns the number of corners in each vertex class, sorted.
pub fn corner_classes(s: &[usize], t: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut parent: Vec<usize> = (0..4 * n).collect();
    for i in 0..n {
        let (r, u) = (s[i], t[i]);
        // right neighbour shares our right side
        union(&mut parent, 4 * i + 1, 4 * r);
        union(&mut parent, 4 * i + 2, 4 * r + 3);
        // upper neighbour shares our top side
        union(&mut parent, 4 * i + 3, 4 * u);
        union(&mut parent, 4 * i + 2, 4 * u + 1);
    }
    let mut counts = std::collections::HashMap::new();
    for c in 0..4 * n {
        *counts.entry(find(&mut parent, c)).or_insert(0usize) += 1;
    }
    let mut v: Vec<usize> = counts.into_values().collect();
    v.sort();
    v
}

/// Vertex degrees (cone angle over 2π) from corner classes.
pub fn oracle_profile(s: &[usize], t: &[usize]) -> Vec<usize> {
    corner_classes(s, t).into_iter().map(|c| c / 4).collect()
}

/// Genus from V - E + F with E = 2n edges and F = n faces.
pub fn oracle_genus(s: &[usize], t: &[usize]) -> i64 {
    let n = s.len() as i64;
    let v = corner_classes(s, t).len() as i64;
    let chi = v - 2 * n + n;
    (2 - chi) / 2
}

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Images {
    let mut v: Images = (0..n).collect();
    v.shuffle(rng);
    v
}

pub fn random_connected<R: Rng>(rng: &mut R, n: usize) -> (Images, Images) {
    loop {
        let s = random_perm(rng, n);
        let t = random_perm(rng, n);
        if connected(&s, &t) {
            return (s, t);
        }
    }
}

pub fn origami_of(s: &[usize], t: &[usize]) -> Origami {
    Origami::finite(from_images(s), from_images(t)).expect("connected")
}

fn commutes(p: &[usize], q: &[usize]) -> bool {
    (0..p.len()).all(|i| p[q[i]] == q[p[i]])
}

/// Every permutation of `0..n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Images> {
    let mut out = Vec::new();
    let mut cur: Images = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Permutations commuting with both `s` and `t`, drawn from `pool`.
pub fn centralizer_in(pool: &[Images], s: &[usize], t: &[usize]) -> Vec<Images> {
    pool.iter()
        .filter(|p| commutes(p, s) && commutes(p, t))
        .cloned()
        .collect()
}

pub fn brute_force_centralizer(s: &[usize], t: &[usize]) -> Vec<Images> {
    let mut c = centralizer_in(&all_perms(s.len()), s, t);
    c.sort();
    c
}

pub fn sorted_images(perms: &[FinitePerm]) -> Vec<Images> {
    let mut v: Vec<Images> = perms.iter().map(to_images).collect();
    v.sort();
    v
}

pub fn perm(n: usize, cycles: &[&[u32]]) -> FinitePerm {
    let c: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
    FinitePerm::from_cycles(n, &c).expect("valid cycles")
}

/// Quaternion group as left multiplication on itself. Elements are
/// numbered 1..8 as 1, i, j, k, -1, -i, -j, -k.
pub fn quaternion_group() -> Group {
    // unit quaternions as (sign, axis) with axis 0 = 1, 1 = i, 2 = j, 3 = k
    fn mul(a: (i8, u8), b: (i8, u8)) -> (i8, u8) {
        // table for axis products: (sign, axis)
        const T: [[(i8, u8); 4]; 4] = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ];
        let (s, ax) = T[a.1 as usize][b.1 as usize];
        (a.0 * b.0 * s, ax)
    }
    let elems: Vec<(i8, u8)> = [1i8, -1]
        .iter()
        .flat_map(|&s| (0..4).map(move |ax| (s, ax)))
        .collect();
    let index = |q: (i8, u8)| elems.iter().position(|&e| e == q).expect("unit") as u32 + 1;
    let left = |g: (i8, u8)| {
        let images: Vec<u32> = elems.iter().map(|&x| index(mul(g, x))).collect();
        FinitePerm::from_images(&images).expect("left multiplication is a bijection")
    };
    Group::perm_group(vec![left((1, 1)), left((1, 2))]).expect("same degree")
}

/// The eight groups used for finite realization.
pub fn acceptance_groups() -> Vec<(&'static str, Group, usize)> {
    let pg = |gens: Vec<FinitePerm>| Group::perm_group(gens).expect("perm group");
    vec![
        ("trivial", Group::trivial(), 1),
        ("Z/2", pg(vec![perm(2, &[&[1, 2]])]), 2),
        ("Z/3", pg(vec![perm(3, &[&[1, 2, 3]])]), 3),
        ("Z/4", pg(vec![perm(4, &[&[1, 2, 3, 4]])]), 4),
        (
            "Z/2xZ/2",
            pg(vec![perm(4, &[&[1, 2]]), perm(4, &[&[3, 4]])]),
            4,
        ),
        (
            "Sym(3)",
            pg(vec![perm(3, &[&[1, 2]]), perm(3, &[&[1, 2, 3]])]),
            6,
        ),
        (
            "Dih(4)",
            pg(vec![perm(4, &[&[1, 2, 3, 4]]), perm(4, &[&[1, 3]])]),
            8,
        ),
        ("Q8", quaternion_group(), 8),
    ]
}

/// Groups of order at most 6 as permutation groups.
pub fn small_groups() -> Vec<Group> {
    let pg = |gens: Vec<FinitePerm>| Group::perm_group(gens).expect("perm group");
    let mut v = vec![Group::trivial()];
    for n in 2..=6u32 {
        let cycle: Vec<u32> = (1..=n).collect();
        v.push(pg(vec![perm(n as usize, &[&cycle])]));
    }
    v.push(pg(vec![perm(4, &[&[1, 2]]), perm(4, &[&[3, 4]])]));
    v.push(pg(vec![perm(3, &[&[1, 2]]), perm(3, &[&[1, 2, 3]])]));
    v
}

pub fn random_element<R: Rng>(rng: &mut R, elements: &[GroupElem]) -> GroupElem {
    elements[rng.gen_range(0..elements.len())].clone()
}
