//! Pairs of binary forms under `SL(2)`.
//!
//! A form is stored by its roots on the projective line; the root `[p:q]`
//! stands for the linear factor `q x - p y`, so `[0:1]` is `x` and `[1:0]` is
//! `y` up to sign. The pair `(f, g)` with `deg f = e`, `deg g = d` is
//! semistable iff `e <= d` and `ord_p g - ord_p f <= (d - e)/2` at every
//! point `p`. [`torus_oracle_bf`] checks the same thing by running the torus
//! criterion on every critical conjugate of the diagonal torus.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, OnePS, Rational};
use crate::pairs::{self, Pair, StabilityProblem, Verdict, WeightedVector};
use crate::polytope::PointSet;

/// A point `[p:q]` of the rational projective line, primitive with `q > 0`,
/// or `[1:0]` at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    p: BigInt,
    q: BigInt,
}

impl ProjPoint {
    pub fn new(p: BigInt, q: BigInt) -> Result<Self> {
        if p.is_zero() && q.is_zero() {
            return Err(Error::InvalidArgument("[0:0] is not a point".into()));
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / &g, q / &g);
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Ok(ProjPoint { p, q })
    }

    pub fn from_i64s(p: i64, q: i64) -> Result<Self> {
        Self::new(p.into(), q.into())
    }

    pub fn infinity() -> Self {
        ProjPoint { p: BigInt::one(), q: BigInt::zero() }
    }

    pub fn zero() -> Self {
        ProjPoint { p: BigInt::zero(), q: BigInt::one() }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.p, self.q)
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [p:q], got {s:?}")))?;
        let (p, q) = inner
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected [p:q], got {s:?}")))?;
        let num = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?} in {s:?}")))
        };
        ProjPoint::new(num(p)?, num(q)?)
    }
}

/// `scale · Π (q x - p y)^mult` over the roots `[p:q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    roots: BTreeMap<ProjPoint, u32>,
    scale: Rational,
}

impl BinaryForm {
    pub fn new(roots: impl IntoIterator<Item = (ProjPoint, u32)>, scale: Rational) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::InvalidArgument("a binary form must be nonzero".into()));
        }
        let mut map = BTreeMap::new();
        for (p, k) in roots {
            if k > 0 {
                *map.entry(p).or_insert(0) += k;
            }
        }
        Ok(BinaryForm { roots: map, scale })
    }

    pub fn from_roots(roots: impl IntoIterator<Item = (ProjPoint, u32)>) -> Result<Self> {
        Self::new(roots, Rational::one())
    }

    pub fn constant() -> Self {
        BinaryForm { roots: BTreeMap::new(), scale: Rational::one() }
    }

    pub fn degree(&self) -> u32 {
        self.roots.values().sum()
    }

    pub fn roots(&self) -> &BTreeMap<ProjPoint, u32> {
        &self.roots
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn ord(&self, p: &ProjPoint) -> u32 {
        self.roots.get(p).copied().unwrap_or(0)
    }

    /// Coefficients of `x^i y^{deg - i}`, indexed by `i`.
    pub fn coefficients(&self) -> Vec<Rational> {
        let mut c = vec![self.scale.clone()];
        for (r, &k) in &self.roots {
            let (a, b) = (Rational::from_integer(r.q.clone()), Rational::from_integer(-r.p.clone()));
            for _ in 0..k {
                // multiply by (a x + b y)
                let mut next = vec![Rational::zero(); c.len() + 1];
                for (i, ci) in c.iter().enumerate() {
                    next[i + 1] += ci * &a;
                    next[i] += ci * &b;
                }
                c = next;
            }
        }
        c
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.roots.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (r, &k) in &self.roots {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if k == 1 {
                write!(f, "{r}")?;
            } else {
                write!(f, "{r}^{k}")?;
            }
        }
        Ok(())
    }
}

/// Parses `"1"` or whitespace-separated roots such as `"[0:1]^2 [1:0]"`.
impl FromStr for BinaryForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(BinaryForm::constant());
        }
        let mut roots = Vec::new();
        for tok in s.split_whitespace() {
            let (pt, k) = match tok.split_once('^') {
                Some((pt, k)) => (
                    pt,
                    k.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad multiplicity in {tok:?}")))?,
                ),
                None => (tok, 1),
            };
            roots.push((pt.parse::<ProjPoint>()?, k));
        }
        BinaryForm::from_roots(roots)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DegreeExceeded { e: u32, d: u32 },
    /// `2 (ord_p g - ord_p f) > d - e`
    Order { point: ProjPoint, ord_g: u32, ord_f: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BfVerdict {
    Semistable,
    Unstable(Violation),
}

impl BfVerdict {
    pub fn is_semistable(&self) -> bool {
        matches!(self, BfVerdict::Semistable)
    }
}

/// Root-order test for `(f, g)` with `f ∈ V_e`, `g ∈ V_d`.
pub fn semistable_bf(f: &BinaryForm, g: &BinaryForm) -> BfVerdict {
    let (e, d) = (f.degree(), g.degree());
    if e > d {
        return BfVerdict::Unstable(Violation::DegreeExceeded { e, d });
    }
    let bound = i64::from(d - e);
    for point in g.roots.keys() {
        let (ord_g, ord_f) = (g.ord(point), f.ord(point));
        if 2 * (i64::from(ord_g) - i64::from(ord_f)) > bound {
            return BfVerdict::Unstable(Violation::Order { point: point.clone(), ord_g, ord_f });
        }
    }
    BfVerdict::Semistable
}

/// No pair in `V_{d-1} ⊕ V_d` is semistable.
pub fn impossible_degree_check(e: u32, d: u32) -> bool {
    e + 1 == d
}

/// A 2x2 integer matrix, rows first.
pub type Matrix2 = [[BigInt; 2]; 2];

pub fn matrix_from_i64s(m: [[i64; 2]; 2]) -> Matrix2 {
    m.map(|row| row.map(BigInt::from))
}

/// `(M·f)(X) = f(M^{-1} X)`: roots move to `M·p`.
pub fn mobius_act(m: &Matrix2, f: &BinaryForm) -> Result<BinaryForm> {
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let mut scale = f.scale.clone();
    let mut roots = Vec::with_capacity(f.roots.len());
    for (r, &k) in &f.roots {
        let np = &m[0][0] * &r.p + &m[0][1] * &r.q;
        let nq = &m[1][0] * &r.p + &m[1][1] * &r.q;
        let image = ProjPoint::new(np.clone(), nq.clone())?;
        // M(p,q) = c·image, and the factor picks up c / det
        let c = if image.p.is_zero() { nq / &image.q } else { np / &image.p };
        let factor = Rational::new(c, det.clone());
        for _ in 0..k {
            scale *= &factor;
        }
        roots.push((image, k));
    }
    BinaryForm::new(roots, scale)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Semistable,
    /// The diagonal torus conjugated so that `point` is a fixed point
    /// destabilizes, via the one-parameter subgroup `witness`.
    Unstable { point: ProjPoint, witness: OnePS },
}

impl OracleVerdict {
    pub fn is_semistable(&self) -> bool {
        matches!(self, OracleVerdict::Semistable)
    }
}

/// Diagonal-torus weights `2i - deg` of the monomials `x^i y^{deg-i}` with
/// nonzero coefficient, with squared magnitudes.
fn torus_vector(f: &BinaryForm) -> Result<WeightedVector> {
    let deg = i64::from(f.degree());
    let entries = f
        .coefficients()
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (LatticePoint::from_i64s(&[2 * i as i64 - deg]), &c * &c));
    WeightedVector::new(1, entries)
}

fn auxiliary_point(avoid: &[&ProjPoint], f: &BinaryForm, g: &BinaryForm) -> ProjPoint {
    let candidates = std::iter::once(ProjPoint::infinity())
        .chain((0i64..).flat_map(|k| [k, -k - 1]).map(|k| ProjPoint::from_i64s(k, 1).unwrap()));
    candidates
        .into_iter()
        .find(|c| !avoid.contains(&c) && f.ord(c) == 0 && g.ord(c) == 0)
        .expect("finitely many points to avoid")
}

/// Torus criterion at every critical conjugate of the diagonal torus: for
/// each root of `f` or `g` and each of `[1:0]`, `[0:1]`, move the point to
/// `[1:0]` and a non-root to `[0:1]`, expand, and compare weight intervals.
pub fn torus_oracle_bf(f: &BinaryForm, g: &BinaryForm) -> Result<OracleVerdict> {
    let q = PointSet::from_i64s(1, &[&[-1], &[1]])?;
    let problem = StabilityProblem::new(1, Vec::new(), q)?;
    let mut critical: Vec<ProjPoint> = f.roots.keys().chain(g.roots.keys()).cloned().collect();
    critical.push(ProjPoint::infinity());
    critical.push(ProjPoint::zero());
    critical.sort();
    critical.dedup();
    for p in critical {
        let aux = auxiliary_point(&[&p], f, g);
        let m: Matrix2 = [
            [aux.q.clone(), -aux.p.clone()],
            [-p.q.clone(), p.p.clone()],
        ];
        let pair = Pair::new(
            torus_vector(&mobius_act(&m, f)?)?,
            torus_vector(&mobius_act(&m, g)?)?,
            problem.clone(),
        )?;
        if let Verdict::Unstable { witness } = pairs::t_semistable(&pair)? {
            return Ok(OracleVerdict::Unstable { point: p, witness });
        }
    }
    Ok(OracleVerdict::Semistable)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str) -> BinaryForm {
        s.parse().unwrap()
    }

    fn pt(p: i64, q: i64) -> ProjPoint {
        ProjPoint::from_i64s(p, q).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    #[test]
    fn points_normalize() {
        assert_eq!(pt(2, -4), pt(-1, 2));
        assert_eq!(pt(-3, 0), ProjPoint::infinity());
        assert!(ProjPoint::from_i64s(0, 0).is_err());
        assert_eq!("[ 4 : 6 ]".parse::<ProjPoint>().unwrap(), pt(2, 3));
    }

    #[test]
    fn parse_and_display() {
        let g = form("[0:1]^2 [1:0]");
        assert_eq!(g.degree(), 3);
        assert_eq!(g.ord(&pt(0, 1)), 2);
        assert_eq!(g.to_string(), "[0:1]^2 [1:0]");
        assert_eq!(form("1").degree(), 0);
        assert!("[1:2".parse::<BinaryForm>().is_err());
        assert!("[1:2]^x".parse::<BinaryForm>().is_err());
    }

    #[test]
    fn coefficients_expand() {
        // x^2 y: roots [0:1]^2 (x·x) and [1:0] (-y)
        assert_eq!(form("[0:1]^2 [1:0]").coefficients(), ints(&[0, 0, -1, 0]));
        // x y (x - y) with [1:1] -> (x - y)
        assert_eq!(form("[0:1] [1:0] [1:1]").coefficients(), ints(&[0, 1, -1, 0]));
        assert_eq!(form("1").coefficients(), ints(&[1]));
    }

    #[test]
    fn criterion_examples() {
        let one = form("1");
        let v = semistable_bf(&one, &form("[0:1]^2 [1:0]"));
        assert_eq!(
            v,
            BfVerdict::Unstable(Violation::Order { point: pt(0, 1), ord_g: 2, ord_f: 0 })
        );
        assert!(semistable_bf(&one, &form("[0:1] [1:0] [1:1]")).is_semistable());
        let f = form("[2:3] [-1:1]^2");
        assert!(semistable_bf(&f, &f).is_semistable());
        assert_eq!(
            semistable_bf(&form("[0:1]^2"), &form("[1:0]")),
            BfVerdict::Unstable(Violation::DegreeExceeded { e: 2, d: 1 })
        );
    }

    #[test]
    fn impossible_degrees() {
        assert!(impossible_degree_check(2, 3));
        assert!(!impossible_degree_check(3, 3));
        assert!(!impossible_degree_check(0, 0));
    }

    #[test]
    fn mobius_examples() {
        let f = form("[0:1]^2 [3:-2]");
        let id = matrix_from_i64s([[1, 0], [0, 1]]);
        assert_eq!(mobius_act(&id, &f).unwrap(), f);

        let swap = matrix_from_i64s([[0, 1], [1, 0]]);
        let image = mobius_act(&swap, &form("[0:1]")).unwrap();
        assert_eq!(image.roots().keys().collect::<Vec<_>>(), vec![&ProjPoint::infinity()]);

        let shear = matrix_from_i64s([[1, 1], [0, 1]]);
        let image = mobius_act(&shear, &form("[-1:1]")).unwrap();
        assert_eq!(image.ord(&pt(0, 1)), 1);

        let singular = matrix_from_i64s([[1, 2], [2, 4]]);
        assert_eq!(mobius_act(&singular, &f), Err(Error::SingularMatrix));
    }

    #[test]
    fn mobius_matches_substitution() {
        // (M·f)(X) = f(M^{-1} X) checked on coefficients at a few points
        let f = form("[1:2] [-3:1]^2 [1:0]");
        let m = matrix_from_i64s([[2, 1], [1, 3]]);
        let det = Rational::from_integer(5.into());
        let mf = mobius_act(&m, &f).unwrap();
        let eval = |c: &[Rational], x: &Rational, y: &Rational| {
            c.iter().enumerate().fold(Rational::zero(), |acc, (i, ci)| {
                let mut t = ci.clone();
                for _ in 0..i {
                    t *= x;
                }
                for _ in i..c.len() - 1 {
                    t *= y;
                }
                acc + t
            })
        };
        for (x, y) in [(1, 0), (0, 1), (2, -1), (5, 7)] {
            let (x, y) = (Rational::from_integer(x.into()), Rational::from_integer(y.into()));
            // M^{-1} = [[3,-1],[-1,2]] / 5
            let xi = (Rational::from_integer(3.into()) * &x - &y) / &det;
            let yi = (Rational::from_integer(2.into()) * &y - &x) / &det;
            assert_eq!(eval(&mf.coefficients(), &x, &y), eval(&f.coefficients(), &xi, &yi));
        }
    }

    #[test]
    fn oracle_examples() {
        let one = form("1");
        let v = torus_oracle_bf(&one, &form("[0:1]^2 [1:0]")).unwrap();
        assert!(matches!(v, OracleVerdict::Unstable { ref point, .. } if *point == pt(0, 1)));
        assert!(torus_oracle_bf(&one, &form("[0:1] [1:0] [1:1]")).unwrap().is_semistable());
        let f = form("[2:3] [-1:1]^2");
        assert!(torus_oracle_bf(&f, &f).unwrap().is_semistable());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn roots(max_deg: usize) -> impl Strategy<Value = BinaryForm> {
            prop::collection::vec((-3i64..=3, 0i64..=2), 0..=max_deg).prop_map(|rs| {
                BinaryForm::from_roots(rs.into_iter().map(|(p, q)| {
                    let q = if p == 0 && q == 0 { 1 } else { q };
                    (ProjPoint::from_i64s(p, q).unwrap(), 1)
                }))
                .unwrap()
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            #[test]
            fn oracle_agrees(f in roots(4), g in roots(6)) {
                prop_assert_eq!(
                    semistable_bf(&f, &g).is_semistable(),
                    torus_oracle_bf(&f, &g).unwrap().is_semistable()
                );
            }

            #[test]
            fn constant_f_reduces_to_multiplicity(g in roots(6)) {
                let max = g.roots().values().copied().max().unwrap_or(0);
                prop_assert_eq!(
                    semistable_bf(&BinaryForm::constant(), &g).is_semistable(),
                    2 * max <= g.degree()
                );
            }
        }
    }
}
