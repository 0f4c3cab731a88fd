//! Torus (semi)stability of pairs `(v, w)`.
//!
//! For a fixed maximal torus the pair is semistable iff the weight polytope
//! of `v` sits inside the weight polytope of `w` (modulo the constraint
//! directions), iff `w_u(w) <= w_u(v)` for every admissible one-parameter
//! subgroup `u`. Failures come with an explicit destabilizing `u`; successes
//! come with relative-invariant exponents.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::lattice::{clear_denominators, pair, LatticePoint, OnePS, Rational, RationalCoords};
use crate::linalg;
use crate::polytope::{self, ContainmentContext, PointSet};

/// Torus data shared by both members of a pair: the lattice rank, the
/// covectors every admissible one-parameter subgroup must annihilate, and
/// the reference polytope `Q` (the weight polytope of the identity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityProblem {
    rank: usize,
    constraints: Vec<LatticePoint>,
    reference: PointSet,
    ctx: ContainmentContext,
}

impl StabilityProblem {
    /// Validates that `Q` is full-dimensional modulo the constraint
    /// directions and contains the origin in its interior.
    pub fn new(rank: usize, constraints: Vec<LatticePoint>, reference: PointSet) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidProblem("rank must be positive".into()));
        }
        check_dim(rank, reference.rank())?;
        for c in &constraints {
            check_dim(rank, c.rank())?;
        }
        if reference.is_empty() {
            return Err(Error::InvalidProblem("reference polytope is empty".into()));
        }
        let ctx = ContainmentContext::new(constraints.clone())?;
        if polytope::affine_dimension(&reference, &ctx)? != rank {
            return Err(Error::InvalidProblem(
                "reference polytope is not full-dimensional modulo the constraints".into(),
            ));
        }
        if !polytope::interior_contains(&reference, &LatticePoint::zero(rank), &ctx)? {
            return Err(Error::InvalidProblem(
                "reference polytope does not contain the origin in its interior".into(),
            ));
        }
        Ok(StabilityProblem { rank, constraints, reference, ctx })
    }

    /// The `SL(n)` convention: `Q` is the simplex `{e_0, ..., e_{n-1}}` and
    /// one-parameter subgroups have trace zero.
    pub fn special_linear(n: usize) -> Result<Self> {
        let simplex = (0..n).map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            LatticePoint::from_i64s(&e)
        });
        let reference = PointSet::new(n, simplex)?;
        Self::new(n, vec![LatticePoint::from_i64s(&vec![1; n])], reference)
    }

    /// Free lattice of the given rank with the cross-polytope `{+-e_i}` as `Q`.
    pub fn cross_polytope(rank: usize) -> Result<Self> {
        let mut pts = Vec::with_capacity(2 * rank);
        for i in 0..rank {
            for s in [1i64, -1] {
                let mut e = vec![0i64; rank];
                e[i] = s;
                pts.push(LatticePoint::from_i64s(&e));
            }
        }
        Self::new(rank, Vec::new(), PointSet::new(rank, pts)?)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn constraints(&self) -> &[LatticePoint] {
        &self.constraints
    }

    pub fn reference(&self) -> &PointSet {
        &self.reference
    }

    pub fn context(&self) -> &ContainmentContext {
        &self.ctx
    }

    pub fn is_admissible(&self, u: &OnePS) -> bool {
        u.rank() == self.rank
            && self
                .constraints
                .iter()
                .all(|c| pair(u, c).is_ok_and(|v| v.is_zero()))
    }

    pub fn check_admissible(&self, u: &OnePS) -> Result<()> {
        check_dim(self.rank, u.rank())?;
        if self.is_admissible(u) {
            Ok(())
        } else {
            Err(Error::Inadmissible(u.to_string()))
        }
    }

    /// A basis of the admissible one-parameter subgroups.
    pub fn admissible_basis(&self) -> Vec<OnePS> {
        let rows = linalg::to_rational_rows(&self.constraints);
        linalg::nullspace(&rows, self.rank)
            .into_iter()
            .map(|v| {
                clear_denominators(&crate::lattice::RationalFunctional::new(v))
                    .expect("kernel vectors are nonzero")
            })
            .collect()
    }
}

/// A nonzero vector `v = sum v_a` recorded by its support in the character
/// lattice and the squared magnitudes `|v_a|^2 > 0` of its weight components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedVector {
    rank: usize,
    entries: BTreeMap<LatticePoint, Rational>,
}

impl WeightedVector {
    pub fn new(rank: usize, entries: impl IntoIterator<Item = (LatticePoint, Rational)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, m) in entries {
            check_dim(rank, p.rank())?;
            if !m.is_positive() {
                return Err(Error::InvalidVector(format!("magnitude at {p} must be positive")));
            }
            if map.insert(p.clone(), m).is_some() {
                return Err(Error::InvalidVector(format!("duplicate support point {p}")));
            }
        }
        if map.is_empty() {
            return Err(Error::InvalidVector("support is empty".into()));
        }
        Ok(WeightedVector { rank, entries: map })
    }

    /// Unit magnitudes on every support point.
    pub fn unit(support: &PointSet) -> Result<Self> {
        Self::new(support.rank(), support.iter().map(|p| (p.clone(), Rational::one())))
    }

    pub fn from_i64s(rank: usize, points: &[&[i64]]) -> Result<Self> {
        Self::unit(&PointSet::from_i64s(rank, points)?)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn support(&self) -> PointSet {
        PointSet::new(self.rank, self.entries.keys().cloned()).expect("ranks checked on construction")
    }

    pub fn magnitude(&self, p: &LatticePoint) -> Option<&Rational> {
        self.entries.get(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same support, new magnitudes.
    pub fn with_magnitudes(&self, f: impl Fn(&LatticePoint) -> Rational) -> Result<Self> {
        Self::new(self.rank, self.entries.keys().map(|p| (p.clone(), f(p))))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    v: WeightedVector,
    w: WeightedVector,
    problem: StabilityProblem,
}

impl Pair {
    pub fn new(v: WeightedVector, w: WeightedVector, problem: StabilityProblem) -> Result<Self> {
        check_dim(problem.rank(), v.rank())?;
        check_dim(problem.rank(), w.rank())?;
        Ok(Pair { v, w, problem })
    }

    pub fn v(&self) -> &WeightedVector {
        &self.v
    }

    pub fn w(&self) -> &WeightedVector {
        &self.w
    }

    pub fn problem(&self) -> &StabilityProblem {
        &self.problem
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Semistable,
    /// `witness` satisfies `w_u(w) > w_u(v)`.
    Unstable { witness: OnePS },
}

impl Verdict {
    pub fn is_semistable(&self) -> bool {
        matches!(self, Verdict::Semistable)
    }

    pub fn witness(&self) -> Option<&OnePS> {
        match self {
            Verdict::Semistable => None,
            Verdict::Unstable { witness } => Some(witness),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StableVerdict {
    /// The least exponent `m` at which the perturbed pair is semistable.
    Stable { exponent: u32 },
    NotStableUpTo { max_exponent: u32 },
    UnstableBase { witness: OnePS },
}

/// `w_u(v) = min { <chi, u> : chi in supp(v) }`.
pub fn weight(u: &OnePS, v: &WeightedVector, problem: &StabilityProblem) -> Result<BigInt> {
    problem.check_admissible(u)?;
    polytope::min_functional(&v.support(), u)
}

/// `F_gen(u) = w_u(w) - w_u(v)`.
pub fn futaki_gen(u: &OnePS, p: &Pair) -> Result<BigInt> {
    Ok(weight(u, &p.w, &p.problem)? - weight(u, &p.v, &p.problem)?)
}

/// Semistability at the fixed torus: `N(v) ⊆ N(w)` modulo the constraints.
pub fn t_semistable(p: &Pair) -> Result<Verdict> {
    let ctx = p.problem.context();
    let w_support = p.w.support();
    for a in p.v.support().iter() {
        if polytope::contains_point(&w_support, a, ctx)? {
            continue;
        }
        let g = polytope::separating_functional(&w_support, a, ctx)?;
        let witness = clear_denominators(&g)?;
        debug_assert!(futaki_gen(&witness, p)?.is_positive());
        return Ok(Verdict::Unstable { witness });
    }
    Ok(Verdict::Semistable)
}

/// Least `k >= 1` with `N(v) ⊆ kQ` modulo the constraints.
pub fn degree_of(v: &WeightedVector, problem: &StabilityProblem) -> Result<u32> {
    check_dim(problem.rank(), v.rank())?;
    let support = v.support();
    let mut k: u32 = 1;
    loop {
        let kq = polytope::scale(problem.reference(), i64::from(k))?;
        if polytope::hull_contains(&kq, &support, problem.context())? {
            return Ok(k);
        }
        k += 1;
    }
}

/// The perturbed pair `(I^q ⊗ v^m, w^{m+1})`, represented by hull-generating
/// sets `qQ + m supp(v)` and `(m+1) supp(w)` with unit magnitudes.
pub fn perturb(p: &Pair, m: u32, q: u32) -> Result<Pair> {
    if m < 1 {
        return Err(Error::InvalidArgument("exponent m must be at least 1".into()));
    }
    if q < 1 {
        return Err(Error::InvalidArgument("degree q must be at least 1".into()));
    }
    let qq = polytope::scale(p.problem.reference(), i64::from(q))?;
    let v_side = polytope::minkowski_sum(&qq, &polytope::scale(&p.v.support(), i64::from(m))?)?;
    let w_side = polytope::scale(&p.w.support(), i64::from(m) + 1)?;
    Pair::new(WeightedVector::unit(&v_side)?, WeightedVector::unit(&w_side)?, p.problem.clone())
}

/// Searches `m = 1..=m_max` for the least exponent making the perturbed pair
/// semistable, with `q = degree_of(v)`.
pub fn stable(p: &Pair, m_max: u32) -> Result<StableVerdict> {
    let q = degree_of(&p.v, &p.problem)?;
    stable_with_degree(p, m_max, q)
}

pub fn stable_with_degree(p: &Pair, m_max: u32, q: u32) -> Result<StableVerdict> {
    if m_max < 1 {
        return Err(Error::InvalidArgument("m_max must be at least 1".into()));
    }
    if let Verdict::Unstable { witness } = t_semistable(p)? {
        return Ok(StableVerdict::UnstableBase { witness });
    }
    for m in 1..=m_max {
        if t_semistable(&perturb(p, m, q)?)?.is_semistable() {
            return Ok(StableVerdict::Stable { exponent: m });
        }
    }
    Ok(StableVerdict::NotStableUpTo { max_exponent: m_max })
}

/// Exponents `n_b >= 0` with `sum n_b = d` and `sum n_b b ≡ d chi` modulo the
/// constraint directions. The monomial `prod w_b^{n_b}` is a relative
/// invariant of degree `d` and weight `d chi`: it vanishes on `V ⊕ 0` and
/// not at `(v, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeInvariant {
    pub degree: BigInt,
    pub exponents: BTreeMap<LatticePoint, BigInt>,
}

impl RelativeInvariant {
    /// Exact check of the defining identities.
    pub fn verify(&self, chi: &LatticePoint, w: &WeightedVector, ctx: &ContainmentContext) -> bool {
        if !self.degree.is_positive() {
            return false;
        }
        let total: BigInt = self.exponents.values().sum();
        if total != self.degree || self.exponents.values().any(|n| n.is_negative()) {
            return false;
        }
        if self.exponents.keys().any(|b| w.magnitude(b).is_none()) {
            return false;
        }
        let mut diff = chi.scaled(&-self.degree.clone());
        for (b, n) in &self.exponents {
            diff = match diff.add(&b.scaled(n)) {
                Ok(d) => d,
                Err(_) => return false,
            };
        }
        linalg::in_span(&diff.rational_coords(), &linalg::to_rational_rows(ctx.directions()))
    }
}

pub fn relative_invariant(p: &Pair, chi: &LatticePoint) -> Result<RelativeInvariant> {
    check_dim(p.problem.rank(), chi.rank())?;
    if p.v.magnitude(chi).is_none() {
        return Err(Error::NotInSupport(chi.to_string()));
    }
    if !t_semistable(p)?.is_semistable() {
        return Err(Error::NotSemistable);
    }
    let ctx = p.problem.context();
    let dirs = linalg::to_rational_rows(ctx.directions());
    // a single support point congruent to chi gives the degree-one invariant
    for (b, _) in p.w.iter() {
        if linalg::in_span(&b.sub(chi)?.rational_coords(), &dirs) {
            return Ok(RelativeInvariant {
                degree: BigInt::one(),
                exponents: BTreeMap::from([(b.clone(), BigInt::one())]),
            });
        }
    }
    let comb = polytope::convex_combination(&p.w.support(), chi, ctx)?
        .ok_or(Error::NotSemistable)?;
    let degree = comb
        .weights
        .iter()
        .fold(BigInt::one(), |acc, (_, l)| acc.lcm(l.denom()));
    let exponents = comb
        .weights
        .into_iter()
        .map(|(b, l)| (b, (l * Rational::from_integer(degree.clone())).to_integer()))
        .collect();
    let inv = RelativeInvariant { degree, exponents };
    debug_assert!(inv.verify(chi, &p.w, ctx));
    Ok(inv)
}
