//! Toric degenerations: when an equivariant rational map extends over a
//! toric variety, and which one-parameter subgroup pushes a vector to a
//! prescribed boundary support.

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{clear_denominators, pair, LatticePoint, OnePS, Rational, RationalFunctional};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::polytope::{self, ContainmentContext, PointSet};

fn split(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    check_dim(a.rank(), b.rank())?;
    if b.is_empty() {
        return Err(Error::EmptySet);
    }
    if !b.is_subset(a) {
        return Err(Error::NotSubset);
    }
    Ok(a.difference(b))
}

/// `conv(A \ B) ⊆ conv({0} ∪ B)` modulo the context directions.
/// True when `A = B`.
pub fn extension_criterion(a: &PointSet, b: &PointSet, ctx: &ContainmentContext) -> Result<bool> {
    let rest = split(a, b)?;
    if rest.is_empty() {
        return Ok(true);
    }
    let mut base = b.clone();
    base.insert(LatticePoint::zero(a.rank()))?;
    polytope::hull_contains(&base, &rest, ctx)
}

/// When the extension criterion fails: an admissible `u` whose minimum over
/// `A \ B` is strictly below its minimum over `{0} ∪ B`.
pub fn extension_obstruction(
    a: &PointSet,
    b: &PointSet,
    ctx: &ContainmentContext,
) -> Result<Option<OnePS>> {
    let rest = split(a, b)?;
    let mut base = b.clone();
    base.insert(LatticePoint::zero(a.rank()))?;
    for x in rest.iter() {
        if !polytope::contains_point(&base, x, ctx)? {
            let g = polytope::separating_functional(&base, x, ctx)?;
            return clear_denominators(&g).map(Some);
        }
    }
    Ok(None)
}

/// `{a in A : <u, a> = min_A <u, .>}`.
pub fn limit_support(a: &PointSet, u: &OnePS) -> Result<PointSet> {
    let m = polytope::min_functional(a, u)?;
    let mut out = PointSet::empty(a.rank());
    for p in a.iter() {
        if pair(u, p)? == m {
            out.insert(p.clone())?;
        }
    }
    Ok(out)
}

/// An admissible `u` that is constant (say `c`) on `B` and strictly larger
/// than `c` on `A \ B`, so the renormalized limit `t^{-c} λ^u(t)·f` has
/// support exactly `B`.
///
/// Variables are `u` and `c` (free) and a slack `δ <= 1`; we maximize `δ`
/// subject to `<u,b> = c`, `<u,a> - c >= δ` and `<u,d> = 0` for every
/// context direction `d`. A positive optimum is the only success case.
pub fn find_degeneration(a: &PointSet, b: &PointSet, ctx: &ContainmentContext) -> Result<OnePS> {
    let rest = split(a, b)?;
    if rest.is_empty() {
        return Err(Error::InvalidArgument("B must be a proper subset of A".into()));
    }
    let n = a.rank();
    let delta = n + 1;
    let mut lp = LinearProgram::new(n + 2);
    for j in 0..=n {
        lp.set_free(j);
    }
    let row = |p: &LatticePoint, c: i64, d: i64| -> Vec<Rational> {
        let mut r: Vec<Rational> = p.coords().iter().cloned().map(Rational::from_integer).collect();
        r.push(Rational::from_integer(c.into()));
        r.push(Rational::from_integer(d.into()));
        r
    };
    for p in b.iter() {
        lp.add_constraint(row(p, -1, 0), Relation::Eq, Rational::zero());
    }
    for p in rest.iter() {
        lp.add_constraint(row(p, -1, -1), Relation::Ge, Rational::zero());
    }
    for d in ctx.directions() {
        check_dim(n, d.rank())?;
        lp.add_constraint(row(d, 0, 0), Relation::Eq, Rational::zero());
    }
    let mut cap = vec![Rational::zero(); n + 2];
    cap[delta] = Rational::one();
    lp.add_constraint(cap.clone(), Relation::Le, Rational::one());
    lp.maximize(cap);

    match lp.solve() {
        LpOutcome::Optimal { x, value } if value.is_positive() => {
            let u = clear_denominators(&RationalFunctional::new(x[..n].to_vec()))?;
            debug_assert_eq!(limit_support(a, &u)?, *b);
            Ok(u)
        }
        LpOutcome::Optimal { .. } | LpOutcome::Infeasible { .. } => Err(Error::NotLimitSupport),
        LpOutcome::Unbounded => unreachable!("slack is capped"),
    }
}
