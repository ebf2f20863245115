//! Formula-free numerical validation by truncated p-adic integration.
//!
//! The unit polydisc is partitioned into the `p^{Mn}` residue classes modulo
//! `p^M`. On a class where every component has valuation below `M` the
//! integrand is constant and the contribution is exact. Remaining classes
//! are bracketed: from below by zero, from above by exact per-class tail
//! integrals when the offending component is a monomial (then the bound is
//! sharp and the bracket is certified), and otherwise by the crude
//! valuation-M estimate, which flags the bracket as heuristic. For a fully
//! monomial family the bracket collapses to the exact value.
//!
//! All values live in the real algebraic field Q(q^(1/denominator)), so the
//! bracket comparison against the symbolic zeta value is itself exact.

mod algebraic;

pub use algebraic::{nth_root_floor, QRootElem, QRootField};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::parallel;
use crate::polyring::{BaseField, IntegerPolynomial};
use crate::zeta::ZetaRational;

/// Default cap on coset enumeration: `p^{Mn}` classes.
pub const DEFAULT_ORACLE_BUDGET: u128 = 100_000_000;

/// Result of one truncation level: an exact bracket `[lower, upper]` for
/// the integral, the fraction of the measure fully resolved below the
/// truncation, and whether the upper bound is certified (monomial tails)
/// or heuristic.
#[derive(Clone, Debug)]
pub struct TruncationEstimate {
    pub level: u32,
    pub lower: QRootElem,
    pub upper: QRootElem,
    pub resolved_mass: BigRational,
    pub certified: bool,
}

impl TruncationEstimate {
    /// Midpoint of the bracket.
    pub fn value(&self) -> QRootElem {
        self.lower
            .add(&self.upper)
            .scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    pub fn width(&self) -> QRootElem {
        self.upper.sub(&self.lower)
    }

    /// Does the bracket contain the given exact value?
    pub fn contains(&self, value: &QRootElem) -> bool {
        self.lower.le(value) && value.le(&self.upper)
    }
}

/// Common denominator of the exponents, which fixes the algebraic field.
fn field_for(q: u64, s0: &[BigRational]) -> QRootField {
    let mut degree = BigInt::one();
    for s in s0 {
        degree = degree.lcm(s.denom());
    }
    QRootField::new(q, degree.to_u32().expect("exponent denominator fits u32"))
}

fn pow_u128(base: u64, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Valuation of an exact integer, `None` for zero (infinite valuation).
fn valuation(v: &BigInt, p: u64) -> Option<u32> {
    if v.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = v.abs();
    let mut ord = 0u32;
    while (&v % &pb).is_zero() {
        v /= &pb;
        ord += 1;
    }
    Some(ord)
}

/// Monomial structure of a component: unit coefficient valuation plus the
/// exponent vector, when the component is a single term.
struct MonomialShape {
    coeff_ord: u32,
    exponents: Vec<u32>,
}

fn monomial_shape(h: &IntegerPolynomial, p: u64) -> Option<MonomialShape> {
    if !h.is_monomial() {
        return None;
    }
    let (exps, coeff) = h.terms().next().expect("monomial has a term");
    Some(MonomialShape {
        coeff_ord: valuation(coeff, p).expect("nonzero coefficient"),
        exponents: exps.clone(),
    })
}

/// Per-coordinate average of `|x|^{w}` over a residue class: exactly
/// `q^{-k w}` when the coordinate has resolved valuation `k`, and the full
/// geometric tail `(1 - q^{-1}) q^{-M w} / (1 - q^{-(1+w)})` (normalized to
/// the class measure) when the coordinate is divisible by `p^M`.
///
/// Returns `None` when the tail diverges, i.e. `1 + w <= 0`.
fn coordinate_average(
    field: &QRootField,
    q: u64,
    w: &BigRational,
    coord_ord: Option<u32>,
    level: u32,
) -> Option<QRootElem> {
    match coord_ord {
        Some(k) => {
            let exp = -w * BigRational::from(BigInt::from(k));
            Some(field.q_pow(&exp))
        }
        None => {
            let one_plus = BigRational::one() + w;
            if !one_plus.is_positive() {
                return None;
            }
            // q^M * sum_{b>=M} q^{-b}(1-q^{-1}) q^{-b w}
            //   = (1-q^{-1}) q^{-M w} / (1 - q^{-(1+w)})
            let qinv = BigRational::new(BigInt::one(), BigInt::from(q));
            let top = field
                .q_pow(&(-w * BigRational::from(BigInt::from(level))))
                .scale(&(BigRational::one() - qinv));
            let denom = field
                .one()
                .sub(&field.q_pow(&-one_plus));
            Some(top.div(&denom))
        }
    }
}

struct OracleProblem<'a> {
    components: &'a [IntegerPolynomial],
    s0: &'a [BigRational],
    q: u64,
    n: usize,
    level: u32,
    field: QRootField,
    modulus: BigInt,
    monomials: Vec<Option<MonomialShape>>,
    /// Exponents scaled into the field: `scaled[i] = s0[i] * degree`, an
    /// integer since the field degree is the common denominator.
    scaled: Vec<i64>,
}

/// Per-block accumulator. Fully resolved classes contribute pure q-powers,
/// gathered as a map from the rho-exponent to the rational multiplicity;
/// only unresolved classes pay for arithmetic in the algebraic field.
struct BlockResult {
    resolved_powers: std::collections::BTreeMap<i64, BigRational>,
    lower_extra: QRootElem,
    upper_extra: QRootElem,
    resolved_count: u64,
    certified: bool,
}

impl BlockResult {
    fn merge(mut self, other: Self) -> Self {
        for (k, c) in other.resolved_powers {
            let entry = self
                .resolved_powers
                .entry(k)
                .or_insert_with(BigRational::zero);
            *entry += c;
        }
        Self {
            resolved_powers: self.resolved_powers,
            lower_extra: self.lower_extra.add(&other.lower_extra),
            upper_extra: self.upper_extra.add(&other.upper_extra),
            resolved_count: self.resolved_count + other.resolved_count,
            certified: self.certified && other.certified,
        }
    }

    fn bracket(&self, field: &QRootField) -> (QRootElem, QRootElem) {
        let mut base = field.zero();
        for (&k, c) in &self.resolved_powers {
            base = base.add(&field.rho_pow(k).scale(c));
        }
        (base.add(&self.lower_extra), base.add(&self.upper_extra))
    }
}

impl<'a> OracleProblem<'a> {
    fn class_measure(&self) -> BigRational {
        // q^{-Mn}
        let exp = -(BigInt::from(self.level) * BigInt::from(self.n as u32));
        crate::zeta::qpow(self.q, exp.to_i64().expect("measure exponent fits"))
    }

    /// rho-exponent of the class measure q^{-Mn}.
    fn measure_rho_exp(&self) -> i64 {
        -(self.level as i64) * (self.n as i64) * (self.field.degree as i64)
    }

    /// Process all residue classes whose first coordinate is `first`.
    fn block(&self, first: u64) -> BlockResult {
        let pm = self.modulus.clone();
        let mut out = BlockResult {
            resolved_powers: std::collections::BTreeMap::new(),
            lower_extra: self.field.zero(),
            upper_extra: self.field.zero(),
            resolved_count: 0,
            certified: true,
        };

        let mut point = vec![BigInt::zero(); self.n];
        point[0] = BigInt::from(first);
        loop {
            let ords: Vec<Option<u32>> = self
                .components
                .iter()
                .map(|h| {
                    let v = h.eval_bigint(&point);
                    match valuation(&v, self.q) {
                        Some(ord) if ord < self.level => Some(ord),
                        _ => None,
                    }
                })
                .collect();
            if ords.iter().all(|o| o.is_some()) {
                // Constant integrand: measure * q^{-sum ord_i s_i}, a pure
                // power of rho.
                let mut k = self.measure_rho_exp();
                for (ord, &c) in ords.iter().zip(&self.scaled) {
                    k -= ord.unwrap() as i64 * c;
                }
                let entry = out
                    .resolved_powers
                    .entry(k)
                    .or_insert_with(BigRational::zero);
                *entry += BigRational::one();
                out.resolved_count += 1;
            } else {
                let (lo, hi, cert) = self.unresolved_contribution(&point, &ords);
                out.lower_extra = out.lower_extra.add(&lo);
                out.upper_extra = out.upper_extra.add(&hi);
                out.certified &= cert;
            }
            // odometer over coordinates 1..n
            let mut i = self.n;
            let mut done = true;
            while i > 1 {
                i -= 1;
                point[i] += 1;
                if point[i] < pm {
                    done = false;
                    break;
                }
                point[i] = BigInt::zero();
            }
            if done {
                break;
            }
        }
        out
    }

    /// Exact contribution bracket of an unresolved residue class.
    ///
    /// Resolved factors are constants. Unresolved monomial factors are
    /// gathered into one separable product whose class integral is computed
    /// exactly coordinate by coordinate. Unresolved non-monomial factors
    /// are bounded pointwise by their value at valuation = level, which is
    /// valid for positive exponents and heuristic for nonpositive ones.
    fn unresolved_contribution(
        &self,
        rep: &[BigInt],
        ords: &[Option<u32>],
    ) -> (QRootElem, QRootElem, bool) {
        let p = self.q;
        let measure = self.class_measure();

        let coord_ords: Vec<Option<u32>> = rep
            .iter()
            .map(|x| match valuation(x, p) {
                Some(ord) if ord < self.level => Some(ord),
                _ => None,
            })
            .collect();
        let mut constant = self.field.from_rational(measure);
        let mut coord_weights = vec![BigRational::zero(); self.n];
        let mut have_monomial_part = false;
        let mut loose: Vec<&BigRational> = Vec::new();
        let mut certified = true;
        for (i, (ord, s)) in ords.iter().zip(self.s0).enumerate() {
            if s.is_zero() {
                continue; // factor is identically 1
            }
            match (ord, &self.monomials[i]) {
                (Some(ord), _) => {
                    let exp = -s * BigRational::from(BigInt::from(*ord));
                    constant = constant.mul(&self.field.q_pow(&exp));
                }
                (None, Some(shape)) => {
                    have_monomial_part = true;
                    let exp = -s * BigRational::from(BigInt::from(shape.coeff_ord));
                    constant = constant.mul(&self.field.q_pow(&exp));
                    for (j, &m) in shape.exponents.iter().enumerate() {
                        coord_weights[j] += s * BigRational::from(BigInt::from(m));
                    }
                }
                (None, None) => {
                    loose.push(s);
                    if !s.is_positive() {
                        certified = false;
                    }
                }
            }
        }
        // Joint exact average of the separable monomial part.
        let mut monomial_ok = true;
        if have_monomial_part {
            for (j, w) in coord_weights.iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                match coordinate_average(&self.field, self.q, w, coord_ords[j], self.level) {
                    Some(avg) => constant = constant.mul(&avg),
                    None => {
                        // Divergent tail: no exact handle, fall back to the
                        // heuristic pointwise value at the truncation level.
                        monomial_ok = false;
                        certified = false;
                        let exp = -w * BigRational::from(BigInt::from(self.level));
                        constant = constant.mul(&self.field.q_pow(&exp));
                    }
                }
            }
        }
        for s in &loose {
            let exp = -*s * BigRational::from(BigInt::from(self.level));
            constant = constant.mul(&self.field.q_pow(&exp));
        }
        if loose.is_empty() && monomial_ok {
            // Every unresolved factor was a monomial: the class integral is
            // exact, so the bracket collapses.
            return (constant.clone(), constant, certified);
        }
        (self.field.zero(), constant, certified)
    }
}

fn run_oracle(
    components: &[IntegerPolynomial],
    s0: &[BigRational],
    base: &BaseField,
    level: u32,
    budget: u128,
    sequential: bool,
) -> Result<TruncationEstimate> {
    assert_eq!(components.len(), s0.len());
    let n = components[0].nvars();
    let q = base.q();
    let classes = pow_u128(q, level * n as u32);
    if classes > budget {
        return Err(Error::BudgetExceeded {
            needed: classes,
            budget,
        });
    }
    let field = field_for(q, s0);
    let degree = BigRational::from(BigInt::from(field.degree));
    let scaled: Vec<i64> = s0
        .iter()
        .map(|s| {
            (s * &degree)
                .to_integer()
                .to_i64()
                .expect("scaled exponent fits i64")
        })
        .collect();
    let problem = OracleProblem {
        components,
        s0,
        q,
        n,
        level,
        field,
        modulus: BigInt::from(q).pow(level),
        monomials: components.iter().map(|h| monomial_shape(h, q)).collect(),
        scaled,
    };
    let blocks = pow_u128(q, level) as usize;
    let identity = || BlockResult {
        resolved_powers: std::collections::BTreeMap::new(),
        lower_extra: field.zero(),
        upper_extra: field.zero(),
        resolved_count: 0,
        certified: true,
    };
    let combined = if sequential {
        parallel::map_reduce_seq(blocks, |b| problem.block(b as u64), identity, BlockResult::merge)
    } else {
        parallel::map_reduce(blocks, |b| problem.block(b as u64), identity, BlockResult::merge)
    };
    let (lower, upper) = combined.bracket(&field);
    let total = BigRational::new(BigInt::one(), BigInt::from(classes));
    Ok(TruncationEstimate {
        level,
        lower,
        upper,
        resolved_mass: BigRational::from(BigInt::from(combined.resolved_count)) * total,
        certified: combined.certified,
    })
}

/// Sequential twin of `truncated_zeta_mapping`, for benchmarking.
pub fn truncated_zeta_mapping_seq(
    components: &[IntegerPolynomial],
    s0: &[BigRational],
    base: &BaseField,
    level: u32,
    budget: u128,
) -> Result<TruncationEstimate> {
    for s in s0 {
        if !s.is_positive() {
            return Err(Error::OutsideRegion {
                point: s.to_string(),
                region: "Re(s_i) > 0".to_string(),
            });
        }
    }
    run_oracle(components, s0, base, level, budget, true)
}

/// Truncated integral of `prod |h_i|^{s_i}` over the unit polydisc, at a
/// rational exponent vector with every entry positive.
pub fn truncated_zeta_mapping(
    components: &[IntegerPolynomial],
    s0: &[BigRational],
    base: &BaseField,
    level: u32,
    budget: u128,
) -> Result<TruncationEstimate> {
    for s in s0 {
        if !s.is_positive() {
            return Err(Error::OutsideRegion {
                point: s.to_string(),
                region: "Re(s_i) > 0".to_string(),
            });
        }
    }
    run_oracle(components, s0, base, level, budget, false)
}

/// Truncated integral of `|f/g|^{s0}` over the unit polydisc, at a rational
/// exponent strictly inside the holomorphy band `(band_lo, band_hi)`.
pub fn truncated_zeta_rational(
    f: &IntegerPolynomial,
    g: &IntegerPolynomial,
    s0: &BigRational,
    band: (&BigRational, &BigRational),
    base: &BaseField,
    level: u32,
    budget: u128,
) -> Result<TruncationEstimate> {
    if s0 <= band.0 || s0 >= band.1 {
        return Err(Error::OutsideRegion {
            point: s0.to_string(),
            region: format!("({}, {})", band.0, band.1),
        });
    }
    let components = [f.clone(), g.clone()];
    let exps = [s0.clone(), -s0.clone()];
    run_oracle(&components, &exps, base, level, budget, false)
}

/// Evaluate a single-variable zeta function at `t = q^{-s0}` inside Q(rho).
/// `None` when a denominator factor vanishes at that point.
pub fn eval_zeta_at(zeta: &ZetaRational, s0: &BigRational) -> Option<QRootElem> {
    assert_eq!(zeta.nvars(), 1);
    let field = field_for(zeta.q(), std::slice::from_ref(s0));
    let mut num = field.zero();
    for (exps, coeff) in zeta.numerator().terms() {
        let exp = -s0 * BigRational::from(BigInt::from(exps[0]));
        num = num.add(&field.q_pow(&exp).scale(coeff));
    }
    let mut den = field.one();
    for (factor, &mult) in zeta.denominator() {
        let exp = BigRational::from(BigInt::from(factor.qexp))
            - s0 * BigRational::from(BigInt::from(factor.texp[0]));
        let value = field.one().sub(&field.q_pow(&exp));
        if value.is_zero() {
            return None;
        }
        for _ in 0..mult {
            den = den.mul(&value);
        }
    }
    Some(num.div(&den))
}

/// Evaluate a multivariate zeta function at a rational exponent vector.
pub fn eval_zeta_multi_at(zeta: &ZetaRational, s0: &[BigRational]) -> Option<QRootElem> {
    assert_eq!(zeta.nvars(), s0.len());
    let field = field_for(zeta.q(), s0);
    let dot = |exps: &[i64]| -> BigRational {
        exps.iter()
            .zip(s0)
            .map(|(&e, s)| -s * BigRational::from(BigInt::from(e)))
            .sum()
    };
    let mut num = field.zero();
    for (exps, coeff) in zeta.numerator().terms() {
        num = num.add(&field.q_pow(&dot(exps)).scale(coeff));
    }
    let mut den = field.one();
    for (factor, &mult) in zeta.denominator() {
        let exp = BigRational::from(BigInt::from(factor.qexp)) + dot(&factor.texp);
        let value = field.one().sub(&field.q_pow(&exp));
        if value.is_zero() {
            return None;
        }
        for _ in 0..mult {
            den = den.mul(&value);
        }
    }
    Some(num.div(&den))
}
