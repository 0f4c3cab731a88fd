//! Independent oracles over plain machine integers, plus random instance
//! generation shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use stable_pairs::lattice::{LatticePoint, OnePS};
use stable_pairs::pairs::{Pair, StabilityProblem, WeightedVector};
use stable_pairs::polytope::PointSet;

pub type V = Vec<i64>;

pub fn dot(u: &[i64], a: &[i64]) -> i64 {
    u.iter().zip(a).map(|(x, y)| x * y).sum()
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Primitive representative with the first nonzero coordinate positive.
pub fn canonical(u: &[i64]) -> Option<V> {
    let g = u.iter().fold(0, |acc, &x| gcd(acc, x));
    if g == 0 {
        return None;
    }
    let mut out: V = u.iter().map(|x| x / g).collect();
    if out.iter().find(|&&x| x != 0).copied().unwrap_or(0) < 0 {
        out.iter_mut().for_each(|x| *x = -*x);
    }
    Some(out)
}

/// Rank by fraction-free elimination.
pub fn rank(rows: &[V]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x = *x * a - y * b;
                }
                let g = m[i].iter().fold(0i128, |acc, &x| gcd128(acc, x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

fn gcd128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd128(b, a % b)
    }
}

fn det(m: &[Vec<i64>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0] as i128,
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] as i128 * det(&minor)
            })
            .sum(),
    }
}

/// Generalized cross product of `n - 1` vectors in `Z^n`.
fn cross(vs: &[&V], n: usize) -> V {
    (0..n)
        .map(|i| {
            let minor: Vec<Vec<i64>> = vs
                .iter()
                .map(|v| v.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect())
                .collect();
            let s = if i % 2 == 0 { 1 } else { -1 };
            (s * det(&minor)) as i64
        })
        .collect()
}

fn combinations(k: usize, n: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, k, n, cur, f);
            cur.pop();
        }
    }
    go(0, k, n, &mut Vec::new(), f);
}

/// Every primitive `u ⊥ D` orthogonal to `n - 1` independent vectors drawn
/// from the pairwise differences of `a`, the directions `d` and the
/// coordinate vectors. Contains a normal for every facet of `conv(a) +
/// span(d)` and a spanning set of the normals to its affine hull.
pub fn candidate_normals(a: &[V], d: &[V], n: usize) -> BTreeSet<V> {
    let mut gens: BTreeSet<V> = BTreeSet::new();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let diff: V = a[i].iter().zip(&a[j]).map(|(x, y)| x - y).collect();
            if let Some(c) = canonical(&diff) {
                gens.insert(c);
            }
        }
    }
    for v in d {
        if let Some(c) = canonical(v) {
            gens.insert(c);
        }
    }
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        gens.insert(e);
    }
    let gens: Vec<V> = gens.into_iter().collect();
    let mut out = BTreeSet::new();
    combinations(n - 1, gens.len(), &mut |idx| {
        let vs: Vec<&V> = idx.iter().map(|&i| &gens[i]).collect();
        let u = cross(&vs, n);
        if let Some(c) = canonical(&u) {
            if d.iter().all(|x| dot(&c, x) == 0) {
                out.insert(c);
            }
        }
    });
    out
}

pub fn min_dot(u: &[i64], a: &[V]) -> i64 {
    a.iter().map(|p| dot(u, p)).min().expect("nonempty")
}

/// `b ⊆ conv(a) + span(d)`, by checking every candidate half-space in both
/// orientations.
pub fn halfspace_contains(a: &[V], b: &[V], d: &[V], n: usize) -> bool {
    candidate_normals(a, d, n).iter().all(|u| {
        let neg: V = u.iter().map(|x| -x).collect();
        min_dot(u, b) >= min_dot(u, a) && min_dot(&neg, b) >= min_dot(&neg, a)
    })
}

/// Inward facet normals of `conv(w) + span(d)` relative to its affine hull,
/// plus both orientations of the normals to that hull (which cut out the
/// hull itself when it is not full-dimensional).
pub fn facet_normals(w: &[V], d: &[V], n: usize) -> Vec<V> {
    let diffs = |pts: &[&V]| -> Vec<V> {
        pts.iter().skip(1).map(|p| p.iter().zip(pts[0]).map(|(x, y)| x - y).collect()).collect()
    };
    let all: Vec<&V> = w.iter().collect();
    let mut span = diffs(&all);
    span.extend(d.iter().cloned());
    let dim = rank(&span);
    let mut out = Vec::new();
    for u in candidate_normals(w, d, n) {
        let neg: V = u.iter().map(|x| -x).collect();
        let constant = w.iter().all(|p| dot(&u, p) == dot(&u, &w[0]));
        if constant {
            out.push(u);
            out.push(neg);
            continue;
        }
        for cand in [u, neg] {
            let m = min_dot(&cand, w);
            let tight: Vec<&V> = w.iter().filter(|p| dot(&cand, p) == m).collect();
            let mut t = diffs(&tight);
            t.extend(d.iter().cloned());
            if rank(&t) + 1 == dim {
                out.push(cand);
            }
        }
    }
    out
}

/// A random problem instance over plain integers.
#[derive(Clone, Debug)]
pub struct Inst {
    pub rank: usize,
    pub constraints: Vec<V>,
    pub q: Vec<V>,
    pub v: Vec<V>,
    pub w: Vec<V>,
}

pub fn cross_polytope(n: usize) -> Vec<V> {
    let mut q = Vec::new();
    for i in 0..n {
        for s in [1, -1] {
            let mut e = vec![0; n];
            e[i] = s;
            q.push(e);
        }
    }
    q
}

pub fn simplex(n: usize) -> Vec<V> {
    (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect()
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, count: usize, lo: i64, hi: i64) -> Vec<V> {
    let mut pts: BTreeSet<V> = BTreeSet::new();
    while pts.len() < count {
        pts.insert((0..n).map(|_| rng.gen_range(lo..=hi)).collect());
    }
    pts.into_iter().collect()
}

/// Rank `1..=max_rank`; half the instances use the `SL` convention when the
/// rank allows it. Supports of size `1..=max_supp` with coordinates in
/// `[lo, hi]`. When `biased`, `v` is sometimes drawn near `conv(w)` so both
/// verdicts occur often.
pub fn random_instance(rng: &mut ChaCha8Rng, max_rank: usize, max_supp: usize, lo: i64, hi: i64) -> Inst {
    let rank = rng.gen_range(1..=max_rank);
    let sl = rank >= 2 && rng.gen_bool(0.5);
    let (constraints, q) = if sl { (vec![vec![1; rank]], simplex(rank)) } else { (Vec::new(), cross_polytope(rank)) };
    let nw = rng.gen_range(1..=max_supp);
    let w = random_points(rng, rank, nw, lo, hi);
    let nv = rng.gen_range(1..=max_supp);
    let v = if rng.gen_bool(0.5) {
        // shrink w towards one of its points so containment is likely
        let mut pts: BTreeSet<V> = BTreeSet::new();
        for _ in 0..nv {
            let a = &w[rng.gen_range(0..w.len())];
            let b = &w[rng.gen_range(0..w.len())];
            let mid: V = a.iter().zip(b).map(|(x, y)| (x + y).div_euclid(2)).collect();
            pts.insert(mid);
        }
        pts.into_iter().collect()
    } else {
        random_points(rng, rank, nv, lo, hi)
    };
    Inst { rank, constraints, q, v, w }
}

pub fn point_set(n: usize, pts: &[V]) -> PointSet {
    PointSet::new(n, pts.iter().map(|p| LatticePoint::from_i64s(p))).unwrap()
}

pub fn problem(inst: &Inst) -> StabilityProblem {
    StabilityProblem::new(
        inst.rank,
        inst.constraints.iter().map(|c| LatticePoint::from_i64s(c)).collect(),
        point_set(inst.rank, &inst.q),
    )
    .unwrap()
}

pub fn to_pair(inst: &Inst) -> Pair {
    Pair::new(
        WeightedVector::unit(&point_set(inst.rank, &inst.v)).unwrap(),
        WeightedVector::unit(&point_set(inst.rank, &inst.w)).unwrap(),
        problem(inst),
    )
    .unwrap()
}

pub fn small(k: &BigInt) -> i64 {
    k.to_i64().expect("fits in i64")
}

pub fn ops_to_vec(u: &OnePS) -> V {
    u.coords().iter().map(small).collect()
}

pub fn point_to_vec(p: &LatticePoint) -> V {
    p.coords().iter().map(small).collect()
}

/// Bitmasks over `a` of every argmin set `{p : <u,p> = min}` for integer
/// `u ∈ [-r, r]^n` with `u ⊥ d`.
pub fn box_limit_supports(a: &[V], d: &[V], n: usize, r: i64) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    let mut u = vec![-r; n];
    loop {
        if d.iter().all(|x| dot(&u, x) == 0) {
            let m = min_dot(&u, a);
            let mask = a
                .iter()
                .enumerate()
                .filter(|(_, p)| dot(&u, p) == m)
                .fold(0u32, |acc, (i, _)| acc | (1 << i));
            out.insert(mask);
        }
        let mut i = 0;
        while i < n && u[i] == r {
            u[i] = -r;
            i += 1;
        }
        if i == n {
            break;
        }
        u[i] += 1;
    }
    out
}
