//! The pair energy `p_vw(s) = log||s·w||² - log||s·v||²` on the diagonal
//! torus, with weight-orthonormal norms `||s·v||² = Σ |v_a|² e^{2<s,a>}`.
//!
//! This is the only floating-point module. Anything verdict-bearing
//! (the unboundedness flag, properness slopes) is decided exactly.

use num_traits::{ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{OnePS, Rational};
use crate::pairs::{self, Pair, StabilityProblem, Verdict, WeightedVector};
use crate::polytope;

/// Tolerance for `<c, s> = 0` on real log-moduli.
const CONSTRAINT_TOL: f64 = 1e-9;

/// A torus element `t_i = e^{s_i}` recorded by its log-moduli.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusElement {
    log_moduli: Vec<f64>,
}

impl TorusElement {
    pub fn new(log_moduli: Vec<f64>, problem: &StabilityProblem) -> Result<Self> {
        check_dim(problem.rank(), log_moduli.len())?;
        if log_moduli.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("log-moduli must be finite".into()));
        }
        let scale = 1.0 + log_moduli.iter().map(|x| x.abs()).sum::<f64>();
        for c in problem.constraints() {
            let dot: f64 = c
                .coords()
                .iter()
                .zip(&log_moduli)
                .map(|(ci, si)| ci.to_f64().unwrap_or(f64::NAN) * si)
                .sum();
            if dot.is_nan() || dot.abs() > CONSTRAINT_TOL * scale {
                return Err(Error::InvalidArgument(format!(
                    "log-moduli violate constraint {c}"
                )));
            }
        }
        Ok(TorusElement { log_moduli })
    }

    pub fn identity(rank: usize) -> Self {
        TorusElement { log_moduli: vec![0.0; rank] }
    }

    /// `λ^u(t)` for real `t > 0`, i.e. `s = (log t)·u`.
    pub fn along(u: &OnePS, t: f64) -> Self {
        let lt = t.ln();
        TorusElement {
            log_moduli: u.coords().iter().map(|c| lt * c.to_f64().unwrap_or(f64::NAN)).collect(),
        }
    }

    pub fn log_moduli(&self) -> &[f64] {
        &self.log_moduli
    }
}

fn rational_ln(q: &Rational) -> f64 {
    // numerator and denominator separately so huge magnitudes stay finite
    let ln_big = |b: &num_bigint::BigInt| {
        let bits = b.bits();
        if bits < 1000 {
            b.to_f64().unwrap().ln()
        } else {
            let shift = bits - 900;
            (b >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        }
    };
    ln_big(q.numer()) - ln_big(q.denom())
}

/// `log Σ |v_a|² e^{2<s,a>}` by log-sum-exp.
fn log_norm_sq(v: &WeightedVector, s: &[f64]) -> f64 {
    let terms: Vec<f64> = v
        .iter()
        .map(|(a, m)| {
            let dot: f64 = a.coords().iter().zip(s).map(|(ai, si)| ai.to_f64().unwrap() * si).sum();
            rational_ln(m) + 2.0 * dot
        })
        .collect();
    log_sum_exp(&terms)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

pub fn energy_at(p: &Pair, s: &TorusElement) -> Result<f64> {
    check_dim(p.problem().rank(), s.log_moduli.len())?;
    Ok(log_norm_sq(p.w(), &s.log_moduli) - log_norm_sq(p.v(), &s.log_moduli))
}

/// `p_vw(λ^u(t))` for `0 < t <= 1`.
pub fn energy_along(p: &Pair, u: &OnePS, t: f64) -> Result<f64> {
    p.problem().check_admissible(u)?;
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidArgument(format!("t = {t} is outside (0, 1]")));
    }
    energy_at(p, &TorusElement::along(u, t))
}

const SLOPE_TS: [f64; 3] = [1e-4, 1e-6, 1e-8];

/// Slope of `t -> p_vw(λ^u(t))` against `log t²` as `t -> 0`, from the two
/// smallest sample points. Tends to `futaki_gen(u)`.
pub fn asymptotic_slope(p: &Pair, u: &OnePS) -> Result<f64> {
    let [_, t1, t2] = SLOPE_TS;
    let e1 = energy_along(p, u, t1)?;
    let e2 = energy_along(p, u, t2)?;
    Ok((e2 - e1) / ((t2 * t2).ln() - (t1 * t1).ln()))
}

/// `log tan² d` where `d` is the Fubini–Study distance between `[s·(v,w)]`
/// and `[s·(v,0)]`, i.e. `cos d = ||s·v|| / sqrt(||s·v||² + ||s·w||²)`.
///
/// The angle is taken from `atan2` of the rescaled norms, and when `d` is
/// past `π/4` we work with the complement `π/2 - d` so that the small side
/// of the triangle never goes through a cancelling `cos`.
pub fn kempf_ness_distance(p: &Pair, s: &TorusElement) -> Result<f64> {
    check_dim(p.problem().rank(), s.log_moduli.len())?;
    let lv = log_norm_sq(p.v(), &s.log_moduli);
    let lw = log_norm_sq(p.w(), &s.log_moduli);
    let top = lv.max(lw);
    let nv = ((lv - top) / 2.0).exp();
    let nw = ((lw - top) / 2.0).exp();
    if nv == 0.0 || nw == 0.0 {
        // angle indistinguishable from 0 or π/2 in f64; tan d = ||w||/||v|| to first order
        return Ok(lw - lv);
    }
    let d = nw.atan2(nv);
    if d <= std::f64::consts::FRAC_PI_4 {
        Ok(2.0 * d.tan().ln())
    } else {
        let c = nv.atan2(nw);
        Ok(-2.0 * c.tan().ln())
    }
}

/// Search parameters for [`infimum_estimate`].
#[derive(Clone, Debug)]
pub struct DescentParams {
    pub max_sweeps: usize,
    pub initial_step: f64,
    pub min_step: f64,
    /// Ray lengths `r` probed as `s = r·u` along each basis direction.
    pub ray_lengths: Vec<f64>,
}

impl Default for DescentParams {
    fn default() -> Self {
        DescentParams {
            max_sweeps: 200,
            initial_step: 1.0,
            min_step: 1e-6,
            ray_lengths: vec![0.5, 1.0, 2.0, 4.0, 8.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InfimumEstimate {
    /// `inf p_vw = -∞`, certified by `u` with `futaki_gen(u) > 0`.
    Unbounded { witness: OnePS },
    /// `inf p_vw <= upper_bound`, attained at `at`.
    Bounded { upper_bound: f64, at: Vec<f64> },
}

pub fn infimum_estimate(p: &Pair, params: &DescentParams) -> Result<InfimumEstimate> {
    if let Verdict::Unstable { witness } = pairs::t_semistable(p)? {
        return Ok(InfimumEstimate::Unbounded { witness });
    }
    let rank = p.problem().rank();
    let dirs: Vec<Vec<f64>> = p
        .problem()
        .admissible_basis()
        .iter()
        .flat_map(|u| {
            let d: Vec<f64> = u.coords().iter().map(|c| c.to_f64().unwrap()).collect();
            let neg: Vec<f64> = d.iter().map(|x| -x).collect();
            [d, neg]
        })
        .collect();
    let eval = |s: &[f64]| log_norm_sq(p.w(), s) - log_norm_sq(p.v(), s);
    let shifted = |s: &[f64], d: &[f64], r: f64| -> Vec<f64> {
        s.iter().zip(d).map(|(a, b)| a + r * b).collect()
    };

    let mut best = vec![0.0; rank];
    let mut best_val = eval(&best);
    for d in &dirs {
        for &r in &params.ray_lengths {
            let s = shifted(&vec![0.0; rank], d, r);
            let val = eval(&s);
            if val < best_val {
                best_val = val;
                best = s;
            }
        }
    }

    let mut step = params.initial_step;
    for _ in 0..params.max_sweeps {
        if step < params.min_step {
            break;
        }
        let mut improved = false;
        for d in &dirs {
            let s = shifted(&best, d, step);
            let val = eval(&s);
            if val < best_val {
                best_val = val;
                best = s;
                improved = true;
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    Ok(InfimumEstimate::Bounded { upper_bound: best_val, at: best })
}

/// `(m+1) w_u(w) <= q min_Q <u,.> + m w_u(v)`: the growth condition of the
/// properness inequality along `λ^u`.
pub fn properness_slope_check(p: &Pair, m: u32, q: u32, u: &OnePS) -> Result<bool> {
    p.problem().check_admissible(u)?;
    let ww = pairs::weight(u, p.w(), p.problem())?;
    let wv = pairs::weight(u, p.v(), p.problem())?;
    let wq = polytope::min_functional(p.problem().reference(), u)?;
    let lhs = ww * (m + 1);
    let rhs = wq * q + wv * m;
    Ok(lhs <= rhs)
}

/// Squared magnitudes of a unit vector: `|v_a|² = 1/|supp v|`.
pub fn unit_norm(v: &WeightedVector) -> Result<WeightedVector> {
    let k = Rational::new(1.into(), v.len().into());
    debug_assert!(!k.is_zero());
    v.with_magnitudes(|_| k.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticePoint;

    fn rank1_pair() -> Pair {
        let pb = StabilityProblem::cross_polytope(1).unwrap();
        Pair::new(
            WeightedVector::from_i64s(1, &[&[0]]).unwrap(),
            WeightedVector::from_i64s(1, &[&[1], &[-1]]).unwrap(),
            pb,
        )
        .unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn energy_examples() {
        let pb = StabilityProblem::cross_polytope(2).unwrap();
        let v = unit_norm(&WeightedVector::from_i64s(2, &[&[1, 0], &[0, 1]]).unwrap()).unwrap();
        let w = unit_norm(&WeightedVector::from_i64s(2, &[&[2, 0], &[0, 2], &[1, 1]]).unwrap()).unwrap();
        let p = Pair::new(v, w, pb).unwrap();
        assert!(close(energy_at(&p, &TorusElement::identity(2)).unwrap(), 0.0, 1e-15));

        let p = rank1_pair();
        let s0 = TorusElement::identity(1);
        assert!(close(energy_at(&p, &s0).unwrap(), 2f64.ln(), 1e-15));
        let s = TorusElement::new(vec![-10.0], p.problem()).unwrap();
        let e = energy_at(&p, &s).unwrap();
        assert!(close(e, 20.0, 1e-6));
        assert!(close(e, (20f64.exp() + (-20f64).exp()).ln(), 1e-12));
    }

    #[test]
    fn energy_along_examples() {
        let p = rank1_pair();
        let u = OnePS::from_i64s(&[1]);
        for t in [0.5f64, 1e-3, 1e-7] {
            let expected = -(t * t).ln() + (1.0 + t.powi(4)).ln();
            assert!(close(energy_along(&p, &u, t).unwrap(), expected, 1e-12));
        }
        let zero = OnePS::zero(1);
        let e0 = energy_along(&p, &zero, 0.3).unwrap();
        assert!(close(energy_along(&p, &zero, 1e-5).unwrap(), e0, 1e-15));
        assert_eq!(
            energy_along(&p, &u, 1.0).unwrap(),
            energy_at(&p, &TorusElement::identity(1)).unwrap()
        );
        assert!(energy_along(&p, &u, 0.0).is_err());
        assert!(energy_along(&p, &u, 1.5).is_err());
    }

    #[test]
    fn slope_examples() {
        let p = rank1_pair();
        let u = OnePS::from_i64s(&[1]);
        assert_eq!(pairs::futaki_gen(&u, &p).unwrap(), (-1).into());
        assert!(close(asymptotic_slope(&p, &u).unwrap(), -1.0, 1e-6));
        assert!(close(asymptotic_slope(&p, &OnePS::zero(1)).unwrap(), 0.0, 1e-12));

        let pb = StabilityProblem::cross_polytope(2).unwrap();
        let p = Pair::new(
            WeightedVector::from_i64s(2, &[&[1, 0], &[0, 1]]).unwrap(),
            WeightedVector::from_i64s(2, &[&[1, 0]]).unwrap(),
            pb,
        )
        .unwrap();
        let w = pairs::t_semistable(&p).unwrap().witness().unwrap().clone();
        assert!(asymptotic_slope(&p, &w).unwrap() > 0.0);
    }

    #[test]
    fn distance_examples() {
        let pb = StabilityProblem::cross_polytope(2).unwrap();
        let p = Pair::new(
            WeightedVector::from_i64s(2, &[&[1, 0]]).unwrap(),
            WeightedVector::from_i64s(2, &[&[0, 1]]).unwrap(),
            pb,
        )
        .unwrap();
        assert!(close(kempf_ness_distance(&p, &TorusElement::identity(2)).unwrap(), 0.0, 1e-15));

        let p = rank1_pair();
        let s0 = TorusElement::identity(1);
        assert!(close(kempf_ness_distance(&p, &s0).unwrap(), 2f64.ln(), 1e-14));
        for x in [-3.0, -1.2, 0.4, 2.9] {
            let s = TorusElement::new(vec![x], p.problem()).unwrap();
            let e = energy_at(&p, &s).unwrap();
            let k = kempf_ness_distance(&p, &s).unwrap();
            assert!((e - k).abs() <= 1e-10 * e.abs().max(1.0));
        }
    }

    #[test]
    fn infimum_examples() {
        let pb = StabilityProblem::cross_polytope(2).unwrap();
        let unstable = Pair::new(
            WeightedVector::from_i64s(2, &[&[1, 0], &[0, 1]]).unwrap(),
            WeightedVector::from_i64s(2, &[&[1, 0]]).unwrap(),
            pb.clone(),
        )
        .unwrap();
        assert!(matches!(
            infimum_estimate(&unstable, &DescentParams::default()).unwrap(),
            InfimumEstimate::Unbounded { .. }
        ));

        let p = rank1_pair();
        match infimum_estimate(&p, &DescentParams::default()).unwrap() {
            InfimumEstimate::Bounded { upper_bound, .. } => {
                assert!(upper_bound <= 2f64.ln() + 1e-12)
            }
            other => panic!("expected a bound, got {other:?}"),
        }

        let v = WeightedVector::new(2, [(LatticePoint::from_i64s(&[1, 2]), Rational::new(3.into(), 2.into()))]).unwrap();
        let p = Pair::new(v.clone(), v, pb).unwrap();
        match infimum_estimate(&p, &DescentParams::default()).unwrap() {
            InfimumEstimate::Bounded { upper_bound, .. } => assert!(upper_bound.abs() < 1e-12),
            other => panic!("expected a bound, got {other:?}"),
        }
    }

    #[test]
    fn properness_examples() {
        let pb = StabilityProblem::cross_polytope(2).unwrap();
        let cross = WeightedVector::from_i64s(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]).unwrap();
        let p = Pair::new(WeightedVector::from_i64s(2, &[&[0, 0]]).unwrap(), cross, pb.clone()).unwrap();
        for n in [[1, 1], [1, -1], [-1, 1], [-1, -1]] {
            assert!(properness_slope_check(&p, 1, 1, &OnePS::from_i64s(&n)).unwrap());
        }
        assert!(properness_slope_check(&p, 1, 1, &OnePS::zero(2)).unwrap());

        let p = Pair::new(
            WeightedVector::from_i64s(2, &[&[0, 0]]).unwrap(),
            WeightedVector::from_i64s(2, &[&[0, 0], &[1, 0]]).unwrap(),
            pb,
        )
        .unwrap();
        for m in 1..10 {
            assert!(!properness_slope_check(&p, m, 1, &OnePS::from_i64s(&[1, 0])).unwrap());
        }
    }

    #[test]
    fn constraint_checked_on_torus_elements() {
        let sl = StabilityProblem::special_linear(2).unwrap();
        assert!(TorusElement::new(vec![1.0, -1.0], &sl).is_ok());
        assert!(TorusElement::new(vec![1.0, 0.0], &sl).is_err());
        assert!(TorusElement::new(vec![f64::NAN, 0.0], &sl).is_err());
    }
}
