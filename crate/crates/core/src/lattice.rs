//! Character lattice points, one-parameter subgroups and their pairing.
//!
//! Everything lives in the free lattice `Z^rank`. Quotient conventions such as
//! the `SL(N+1)` character lattice `Z^{N+1} / Z(1, ..., 1)` are realized by
//! requiring one-parameter subgroups to annihilate a list of constraint
//! covectors, never by quotienting points.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

fn fmt_coords<T: fmt::Display>(f: &mut fmt::Formatter<'_>, coords: &[T]) -> fmt::Result {
    write!(f, "(")?;
    for (i, c) in coords.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{c}")?;
    }
    write!(f, ")")
}

/// A character `a` of the torus, i.e. a point of `M_Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(Vec<BigInt>);

impl LatticePoint {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticePoint(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        LatticePoint(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatticePoint(vec![BigInt::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &LatticePoint) -> Result<LatticePoint> {
        check_dim(self.rank(), other.rank())?;
        Ok(LatticePoint(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &LatticePoint) -> Result<LatticePoint> {
        check_dim(self.rank(), other.rank())?;
        Ok(LatticePoint(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scaled(&self, k: &BigInt) -> LatticePoint {
        LatticePoint(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_coords(f, &self.0)
    }
}

/// An integer covector `u` in `N_Z`, identified with the one-parameter
/// subgroup `t -> lambda^u(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OnePS(Vec<BigInt>);

impl OnePS {
    pub fn new(coords: Vec<BigInt>) -> Self {
        OnePS(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        OnePS(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        OnePS(vec![BigInt::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// The inverse subgroup `t -> lambda^u(t)^{-1}`.
    pub fn inverse(&self) -> OnePS {
        OnePS(self.0.iter().map(|c| -c).collect())
    }

    pub fn to_rational(&self) -> RationalFunctional {
        RationalFunctional(self.0.iter().cloned().map(Rational::from_integer).collect())
    }
}

impl fmt::Display for OnePS {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_coords(f, &self.0)
    }
}

/// A rational linear functional on `M_R` (equivalently a rational point).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunctional(Vec<Rational>);

impl RationalFunctional {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalFunctional(coords)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Exact value `<g, x>`.
    pub fn eval<P: RationalCoords + ?Sized>(&self, x: &P) -> Result<Rational> {
        let xs = x.rational_coords();
        check_dim(self.rank(), xs.len())?;
        Ok(self
            .0
            .iter()
            .zip(&xs)
            .fold(Rational::zero(), |acc, (g, x)| acc + g * x))
    }
}

impl fmt::Display for RationalFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_coords(f, &self.0)
    }
}

/// Anything that can be read as a rational point of `M_R`.
pub trait RationalCoords {
    fn rational_coords(&self) -> Vec<Rational>;
}

impl RationalCoords for LatticePoint {
    fn rational_coords(&self) -> Vec<Rational> {
        self.0.iter().cloned().map(Rational::from_integer).collect()
    }
}

impl RationalCoords for RationalFunctional {
    fn rational_coords(&self) -> Vec<Rational> {
        self.0.clone()
    }
}

impl RationalCoords for [Rational] {
    fn rational_coords(&self) -> Vec<Rational> {
        self.to_vec()
    }
}

impl RationalCoords for Vec<Rational> {
    fn rational_coords(&self) -> Vec<Rational> {
        self.clone()
    }
}

/// The pairing `(u, m) = sum_i u_i m_i`, so that `m(lambda^u(t)) = t^{(u,m)}`.
pub fn pair(u: &OnePS, m: &LatticePoint) -> Result<BigInt> {
    check_dim(u.rank(), m.rank())?;
    Ok(u.0.iter().zip(&m.0).map(|(a, b)| a * b).sum())
}

/// Smallest positive multiple of `g` with integer coordinates.
///
/// The result is primitive: its coordinates have gcd one and every
/// coordinate keeps the sign it had in `g`.
pub fn clear_denominators(g: &RationalFunctional) -> Result<OnePS> {
    if g.is_zero() {
        return Err(Error::ZeroFunctional);
    }
    let lcm = g
        .0
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = g
        .0
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = ints
        .iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c))
        .abs();
    Ok(OnePS(ints.into_iter().map(|c| c / &gcd).collect()))
}
