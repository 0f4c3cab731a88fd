//! Degree bookkeeping for the resultant `R` and hyperdiscriminant `Δ` of a
//! smooth `X^n ⊂ P^N` of degree `d`, and the normalized pair
//! `(R^{deg Δ}, Δ^{deg R})` built from user-supplied weight data.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{OnePS, Rational};
use crate::pairs::{self, Pair, StabilityProblem, WeightedVector};
use crate::polytope;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyDatum {
    pub n: u32,
    pub d: u32,
    /// average scalar curvature
    pub mu: Rational,
    /// ambient dimension
    pub big_n: u32,
}

impl VarietyDatum {
    pub fn new(n: u32, d: u32, mu: Rational, big_n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidVariety("dimension n must be at least 1".into()));
        }
        if d < 2 {
            return Err(Error::InvalidVariety("degree d must be at least 2".into()));
        }
        if big_n <= n {
            return Err(Error::InvalidVariety(format!("a nonlinear {n}-fold needs N > {n}")));
        }
        Ok(VarietyDatum { n, d, mu, big_n })
    }

    /// A smooth plane curve of degree `d`, with `μ = (2 - 2g)/d` and
    /// `g = (d-1)(d-2)/2`.
    pub fn plane_curve(d: u32) -> Result<Self> {
        Self::new(1, d, plane_curve_mu(d), 2)
    }
}

fn plane_curve_mu(d: u32) -> Rational {
    let d = i64::from(d);
    let genus = (d - 1) * (d - 2) / 2;
    Rational::new((2 - 2 * genus).into(), d.into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub deg_r: BigInt,
    pub deg_delta: BigInt,
    pub r: BigInt,
    /// `(r/(n+1), ..., r/(n+1), 0, ..., 0)`, `N + 1` parts
    pub lambda_partition: Vec<BigInt>,
    /// `(r/n, ..., r/n, 0, ..., 0)`, `N + 1` parts
    pub mu_partition: Vec<BigInt>,
}

pub fn degrees(vd: &VarietyDatum) -> Result<DegreeReport> {
    let n = BigInt::from(vd.n);
    let d = BigInt::from(vd.d);
    let deg_r = &d * (&n + 1);
    let delta = Rational::from_integer(&n * (&n + 1) * &d) - Rational::from_integer(d.clone()) * &vd.mu;
    if !delta.is_integer() || !delta.is_positive() {
        return Err(Error::InvalidVariety(format!(
            "deg Δ = n(n+1)d - dμ = {delta} is not a positive integer"
        )));
    }
    let deg_delta = delta.to_integer();
    let r: BigInt = &deg_r * &deg_delta;
    let (lam, rem_l) = r.div_rem(&(&n + 1));
    let (mu, rem_m) = r.div_rem(&n);
    if !rem_l.is_zero() || !rem_m.is_zero() {
        return Err(Error::InvalidVariety(format!("r = {r} is not divisible by n and n+1")));
    }
    let parts = vd.big_n as usize + 1;
    let padded = |value: BigInt, count: usize| -> Vec<BigInt> {
        (0..parts).map(|i| if i < count { value.clone() } else { BigInt::zero() }).collect()
    };
    Ok(DegreeReport {
        deg_r,
        deg_delta,
        r,
        lambda_partition: padded(lam, vd.n as usize + 1),
        mu_partition: padded(mu, vd.n as usize),
    })
}

/// `degrees` after checking `μ` against the genus formula for a smooth plane curve.
pub fn degrees_with_genus_check(vd: &VarietyDatum) -> Result<DegreeReport> {
    if vd.n != 1 || vd.big_n != 2 {
        return Err(Error::InvalidVariety("the genus check applies to plane curves only".into()));
    }
    let expected = plane_curve_mu(vd.d);
    if vd.mu != expected {
        return Err(Error::InvalidVariety(format!(
            "μ = {} disagrees with the genus value {expected} for a smooth plane curve of degree {}",
            vd.mu, vd.d
        )));
    }
    degrees(vd)
}

fn small(k: &BigInt) -> Result<i64> {
    k.to_i64()
        .ok_or_else(|| Error::InvalidArgument(format!("exponent {k} is too large")))
}

/// `k·supp`, with squared magnitudes raised to the `k`-th power.
fn power(v: &WeightedVector, k: &BigInt) -> Result<WeightedVector> {
    let k = small(k)?;
    let scaled = polytope::scale(&v.support(), k)?;
    let entries = v.iter().zip(scaled.iter()).map(|((_, m), p)| {
        let mut acc = m.clone();
        for _ in 1..k {
            acc *= m;
        }
        (p.clone(), acc)
    });
    WeightedVector::new(v.rank(), entries)
}

/// `(R^{deg Δ}, Δ^{deg R})` at the level of weight data: supports scaled by
/// the opposite degree.
pub fn variety_pair(
    r_data: &WeightedVector,
    d_data: &WeightedVector,
    report: &DegreeReport,
    problem: &StabilityProblem,
) -> Result<Pair> {
    check_dim(problem.rank(), r_data.rank())?;
    check_dim(problem.rank(), d_data.rank())?;
    Pair::new(power(r_data, &report.deg_delta)?, power(d_data, &report.deg_r)?, problem.clone())
}

/// `(m+1)(w_u(Δ^{deg R}) - w_u(R^{deg Δ})) <= deg(E_λ) w_u(I) - w_u(R^{deg Δ})`,
/// with `w_u(I) = min_Q <u, .>`.
#[allow(clippy::too_many_arguments)]
pub fn mabuchi_weight_inequality(
    r_data: &WeightedVector,
    d_data: &WeightedVector,
    report: &DegreeReport,
    m: u32,
    deg_e: &BigInt,
    u: &OnePS,
    problem: &StabilityProblem,
) -> Result<bool> {
    let w_r = pairs::weight(u, r_data, problem)? * &report.deg_delta;
    let w_d = pairs::weight(u, d_data, problem)? * &report.deg_r;
    let w_i = polytope::min_functional(problem.reference(), u)?;
    let lhs = (&w_d - &w_r) * (m + 1);
    let rhs = deg_e * w_i - w_r;
    Ok(lhs <= rhs)
}
