//! Torus part of the automorphism group of a pair and the classical Futaki
//! character on it.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::lattice::{clear_denominators, pair, LatticePoint, OnePS, RationalCoords, RationalFunctional};
use crate::linalg;
use crate::pairs::{Pair, WeightedVector};

/// One-parameter subgroups fixing both lines `[v]` and `[w]`: admissible `u`
/// with `<u, .>` constant on each support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerSubtorus {
    pub basis: Vec<OnePS>,
}

impl StabilizerSubtorus {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanRelation {
    /// `b0 - a0` lies in the joint difference span, so `F` vanishes.
    Equal,
    Disjoint,
}

fn differences(v: &WeightedVector) -> Result<Vec<LatticePoint>> {
    let mut it = v.iter().map(|(p, _)| p);
    let first = it.next().ok_or(Error::EmptySet)?;
    it.map(|p| p.sub(first)).collect()
}

fn representative(v: &WeightedVector) -> &LatticePoint {
    v.iter().next().expect("weighted vectors are nonempty").0
}

pub fn stabilizer_subtorus(p: &Pair) -> Result<StabilizerSubtorus> {
    let mut rows = differences(p.v())?;
    rows.extend(differences(p.w())?);
    rows.extend(p.problem().constraints().iter().cloned());
    let basis = linalg::nullspace(&linalg::to_rational_rows(&rows), p.problem().rank())
        .into_iter()
        .map(|k| clear_denominators(&RationalFunctional::new(k)))
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilizerSubtorus { basis })
}

/// Whether `u` is admissible and constant on both supports.
pub fn in_stabilizer(p: &Pair, u: &OnePS) -> Result<bool> {
    check_dim(p.problem().rank(), u.rank())?;
    if !p.problem().is_admissible(u) {
        return Ok(false);
    }
    for d in differences(p.v())?.iter().chain(differences(p.w())?.iter()) {
        if !pair(u, d)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `F(u) = <u, b0> - <u, a0>` for `u` in the stabilizer subtorus.
pub fn futaki_classical(p: &Pair, u: &OnePS) -> Result<BigInt> {
    if !in_stabilizer(p, u)? {
        return Err(Error::InvalidArgument(format!("{u} is not in the stabilizer subtorus")));
    }
    Ok(pair(u, representative(p.w()))? - pair(u, representative(p.v()))?)
}

/// Compares the parallel affine spans of the two supports modulo the
/// constraint directions.
pub fn affine_span_test(p: &Pair) -> Result<SpanRelation> {
    let mut span = differences(p.v())?;
    span.extend(differences(p.w())?);
    span.extend(p.problem().constraints().iter().cloned());
    let offset = representative(p.w()).sub(representative(p.v()))?;
    if linalg::in_span(&offset.rational_coords(), &linalg::to_rational_rows(&span)) {
        Ok(SpanRelation::Equal)
    } else {
        Ok(SpanRelation::Disjoint)
    }
}
