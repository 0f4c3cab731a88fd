//! Exact convex geometry of finite point sets.
//!
//! Polytopes are kept in V-representation only. Every hull question is
//! answered by the exact simplex in [`crate::lp`]: a point `x` lies in
//! `conv(A) + span(D)` iff there are `lambda >= 0` with `sum lambda = 1` and free
//! `mu` such that `sum lambda_i a_i + sum mu_j d_j = x`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{LatticePoint, OnePS, Rational, RationalCoords, RationalFunctional};
use crate::linalg;
use crate::lp::{LinearProgram, LpOutcome, Relation};

/// A finite, deduplicated set of lattice points of a fixed rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    rank: usize,
    points: BTreeSet<LatticePoint>,
}

impl PointSet {
    pub fn new(rank: usize, points: impl IntoIterator<Item = LatticePoint>) -> Result<Self> {
        let points: BTreeSet<LatticePoint> = points.into_iter().collect();
        for p in &points {
            check_dim(rank, p.rank())?;
        }
        Ok(PointSet { rank, points })
    }

    pub fn from_i64s(rank: usize, points: &[&[i64]]) -> Result<Self> {
        Self::new(rank, points.iter().map(|p| LatticePoint::from_i64s(p)))
    }

    pub fn empty(rank: usize) -> Self {
        PointSet { rank, points: BTreeSet::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.points.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LatticePoint> {
        self.points.iter()
    }

    pub fn points(&self) -> Vec<LatticePoint> {
        self.points.iter().cloned().collect()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.points.is_subset(&other.points)
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        check_dim(self.rank, other.rank)?;
        Ok(PointSet {
            rank: self.rank,
            points: self.points.union(&other.points).cloned().collect(),
        })
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        PointSet {
            rank: self.rank,
            points: self.points.difference(&other.points).cloned().collect(),
        }
    }

    pub fn insert(&mut self, p: LatticePoint) -> Result<()> {
        check_dim(self.rank, p.rank())?;
        self.points.insert(p);
        Ok(())
    }
}

/// Directions to quotient by when testing containment, e.g. `(1, ..., 1)`
/// for the `SL` character lattice.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContainmentContext {
    mod_directions: Vec<LatticePoint>,
}

impl ContainmentContext {
    pub fn new(mod_directions: Vec<LatticePoint>) -> Result<Self> {
        if let Some(first) = mod_directions.first() {
            let n = first.rank();
            for d in &mod_directions {
                check_dim(n, d.rank())?;
            }
            let rows = linalg::to_rational_rows(&mod_directions);
            if linalg::rank(&rows, n) != mod_directions.len() {
                return Err(Error::DependentDirections);
            }
        }
        Ok(ContainmentContext { mod_directions })
    }

    pub fn none() -> Self {
        ContainmentContext::default()
    }

    pub fn directions(&self) -> &[LatticePoint] {
        &self.mod_directions
    }

    fn check(&self, rank: usize) -> Result<()> {
        for d in &self.mod_directions {
            check_dim(rank, d.rank())?;
        }
        Ok(())
    }
}

/// A convex combination witnessing `x in conv(A) + span(D)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Combination {
    /// `(a, lambda_a)` for the points with nonzero weight
    pub weights: Vec<(LatticePoint, Rational)>,
    /// one coefficient per mod direction
    pub shifts: Vec<Rational>,
}

/// The containment LP. Variables are `lambda_a` (nonnegative) followed by
/// `mu_d` (free); rows are the `rank` coordinate equations then `sum lambda = 1`.
fn containment_lp(a: &[LatticePoint], x: &[Rational], ctx: &ContainmentContext) -> LinearProgram {
    let n = x.len();
    let k = a.len();
    let dirs = ctx.directions();
    let mut lp = LinearProgram::new(k + dirs.len());
    for j in k..k + dirs.len() {
        lp.set_free(j);
    }
    for (i, xi) in x.iter().enumerate() {
        let mut row: Vec<Rational> = a
            .iter()
            .map(|p| Rational::from_integer(p.coords()[i].clone()))
            .collect();
        row.extend(dirs.iter().map(|d| Rational::from_integer(d.coords()[i].clone())));
        lp.add_constraint(row, Relation::Eq, xi.clone());
    }
    let mut ones = vec![Rational::one(); k];
    ones.extend(std::iter::repeat_n(Rational::zero(), dirs.len()));
    lp.add_constraint(ones, Relation::Eq, Rational::one());
    debug_assert_eq!(lp.constraints().len(), n + 1);
    lp
}

fn prepare<P: RationalCoords + ?Sized>(
    a: &PointSet,
    x: &P,
    ctx: &ContainmentContext,
) -> Result<Vec<Rational>> {
    let xs = x.rational_coords();
    check_dim(a.rank(), xs.len())?;
    ctx.check(a.rank())?;
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(xs)
}

/// Exact representation of `x` as a point of `conv(A) + span(D)`, if any.
pub fn convex_combination<P: RationalCoords + ?Sized>(
    a: &PointSet,
    x: &P,
    ctx: &ContainmentContext,
) -> Result<Option<Combination>> {
    let xs = prepare(a, x, ctx)?;
    let pts = a.points();
    match containment_lp(&pts, &xs, ctx).solve() {
        LpOutcome::Optimal { x: sol, .. } => {
            let weights = pts
                .into_iter()
                .zip(sol.iter())
                .filter(|(_, l)| !l.is_zero())
                .map(|(p, l)| (p, l.clone()))
                .collect();
            let shifts = sol[a.len()..].to_vec();
            Ok(Some(Combination { weights, shifts }))
        }
        LpOutcome::Infeasible { .. } => Ok(None),
        LpOutcome::Unbounded => unreachable!("feasibility LP has a zero objective"),
    }
}

/// Whether `x` lies in `conv(A) + span(mod_directions)`.
pub fn contains_point<P: RationalCoords + ?Sized>(
    a: &PointSet,
    x: &P,
    ctx: &ContainmentContext,
) -> Result<bool> {
    Ok(convex_combination(a, x, ctx)?.is_some())
}

/// Whether every point of `B` lies in `conv(A) + span(mod_directions)`.
/// An empty `B` is vacuously contained.
pub fn hull_contains(a: &PointSet, b: &PointSet, ctx: &ContainmentContext) -> Result<bool> {
    check_dim(a.rank(), b.rank())?;
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    for p in b.iter() {
        if !contains_point(a, p, ctx)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A rational functional `g` with `<g, x> < min_a <g, a>` that vanishes on
/// every mod direction, read off the Farkas certificate of the infeasible
/// containment LP.
pub fn separating_functional<P: RationalCoords + ?Sized>(
    a: &PointSet,
    x: &P,
    ctx: &ContainmentContext,
) -> Result<RationalFunctional> {
    let xs = prepare(a, x, ctx)?;
    let pts = a.points();
    let lp = containment_lp(&pts, &xs, ctx);
    match lp.solve() {
        LpOutcome::Infeasible { farkas } => {
            // y = (g', t) with <g', a> + t <= 0 and <g', x> + t > 0; negate g'.
            let g = RationalFunctional::new(farkas[..xs.len()].iter().map(|c| -c).collect());
            let gx = g.eval(&xs)?;
            for p in &pts {
                debug_assert!(g.eval(p)? > gx);
            }
            for d in ctx.directions() {
                debug_assert!(g.eval(d)?.is_zero());
            }
            Ok(g)
        }
        LpOutcome::Optimal { .. } => Err(Error::PointContained),
        LpOutcome::Unbounded => unreachable!("feasibility LP has a zero objective"),
    }
}

/// Pairwise sumset `{a + b}`.
pub fn minkowski_sum(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    check_dim(a.rank(), b.rank())?;
    let mut out = PointSet::empty(a.rank());
    for p in a.iter() {
        for q in b.iter() {
            out.insert(p.add(q)?)?;
        }
    }
    Ok(out)
}

/// Pointwise dilation `{m a}`.
pub fn scale(a: &PointSet, m: i64) -> Result<PointSet> {
    if m <= 0 {
        return Err(Error::NonPositiveScale(m));
    }
    let k = BigInt::from(m);
    PointSet::new(a.rank(), a.iter().map(|p| p.scaled(&k)))
}

/// `min_{a in A} <u, a>`.
pub fn min_functional(a: &PointSet, u: &OnePS) -> Result<BigInt> {
    check_dim(a.rank(), u.rank())?;
    let mut best: Option<BigInt> = None;
    for p in a.iter() {
        let v = crate::lattice::pair(u, p)?;
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    best.ok_or(Error::EmptySet)
}

/// Whether `x` lies in the relative interior of `conv(A) + span(D)`.
///
/// Maximizes a common lower bound `delta <= 1` on all convex weights; the point
/// is relatively interior iff the optimum is positive.
pub fn interior_contains<P: RationalCoords + ?Sized>(
    a: &PointSet,
    x: &P,
    ctx: &ContainmentContext,
) -> Result<bool> {
    let xs = prepare(a, x, ctx)?;
    let pts = a.points();
    let base = containment_lp(&pts, &xs, ctx);
    let k = pts.len();
    let nv = base.num_vars() + 1;
    let mut lp = LinearProgram::new(nv);
    for j in k..nv - 1 {
        lp.set_free(j);
    }
    lp.set_free(nv - 1);
    for c in base.constraints() {
        let mut row = c.coeffs.clone();
        row.push(Rational::zero());
        lp.add_constraint(row, c.relation, c.rhs.clone());
    }
    for i in 0..k {
        let mut row = vec![Rational::zero(); nv];
        row[i] = Rational::one();
        row[nv - 1] = -Rational::one();
        lp.add_constraint(row, Relation::Ge, Rational::zero());
    }
    let mut cap = vec![Rational::zero(); nv];
    cap[nv - 1] = Rational::one();
    lp.add_constraint(cap.clone(), Relation::Le, Rational::one());
    lp.maximize(cap);
    Ok(match lp.solve() {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        _ => false,
    })
}

/// Dimension of the affine hull of `A` plus the span of the mod directions.
pub fn affine_dimension(a: &PointSet, ctx: &ContainmentContext) -> Result<usize> {
    ctx.check(a.rank())?;
    let pts = a.points();
    let Some(first) = pts.first() else {
        return Err(Error::EmptySet);
    };
    let mut rows = Vec::new();
    for p in &pts[1..] {
        rows.push(p.sub(first)?.rational_coords());
    }
    rows.extend(linalg::to_rational_rows(ctx.directions()));
    Ok(linalg::rank(&rows, a.rank()))
}
