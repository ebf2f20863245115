//! Exact multivariate polynomial arithmetic over the integers and over prime
//! fields: the ground ring for every geometric and symbolic computation in
//! this crate. Includes face-function extraction, formal partials, reduction
//! modulo p, and the canonical text form.

mod parser;

pub use parser::parse_polynomial;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::dot_i64;

/// A multivariate polynomial with big-integer coefficients, stored as a
/// finite map from exponent vectors to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntegerPolynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn variable(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(exps, BigInt::one());
        p
    }

    /// Build from `(exponents, coefficient)` pairs; zero coefficients are
    /// dropped and repeated exponent vectors are summed.
    pub fn from_terms<I>(nvars: usize, iter: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = Self::zero(nvars);
        for (exps, coeff) in iter {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: exps.len(),
                });
            }
            p.add_term(exps, coeff);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The support: exponent vectors with nonzero coefficient.
    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn vanishes_at_origin(&self) -> bool {
        !self.terms.contains_key(&vec![0u32; self.nvars])
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -(&*c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea
                    .iter()
                    .zip(eb)
                    .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
                    .collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.nvars, BigInt::one());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Minimum of the weight `<a, m>` over the support; this is the value the
    /// whole Newton polyhedron attains for nonnegative `a`.
    pub fn weight_min(&self, a: &[i64]) -> i64 {
        assert_eq!(a.len(), self.nvars);
        assert!(!self.is_zero(), "weight of the zero polynomial");
        self.terms
            .keys()
            .map(|m| {
                let mi: Vec<i64> = m.iter().map(|&x| x as i64).collect();
                dot_i64(a, &mi)
            })
            .min()
            .expect("nonempty support")
    }

    /// The sub-sum over monomials where the weight `<a, m>` is minimal.
    /// For `a = 0` every monomial has weight zero, so the result is the
    /// polynomial itself.
    pub fn face_function(&self, a: &[i64]) -> Result<Self> {
        if a.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: a.len(),
            });
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let d = self.weight_min(a);
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let mi: Vec<i64> = m.iter().map(|&x| x as i64).collect();
            (dot_i64(a, &mi) == d).then(|| (m.clone(), c.clone()))
        });
        let mut out = Self::zero(self.nvars);
        for (e, c) in terms {
            out.terms.insert(e, c);
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to variable `var` (0-based),
    /// taken over the integers so it reduces correctly in any characteristic.
    pub fn partial(&self, var: usize) -> Self {
        assert!(var < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var];
            if k == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[var] = k - 1;
            out.add_term(exps, c * BigInt::from(k));
        }
        out
    }

    /// Coefficient-wise reduction modulo the prime of `field`.
    pub fn reduce_mod(&self, field: &BaseField) -> PrimePoly {
        let p = field.p();
        let pb = BigInt::from(p);
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut r = c % &pb;
            if r.is_negative() {
                r += &pb;
            }
            let r = r.to_u64().expect("residue fits in u64");
            if r != 0 {
                terms.insert(e.clone(), r);
            }
        }
        PrimePoly {
            nvars: self.nvars,
            p,
            terms,
        }
    }

    /// Exact evaluation at an integer point.
    pub fn eval_bigint(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    term *= x;
                }
            }
            acc += term;
        }
        acc
    }

    /// Total degree of a monomial under graded-lexicographic comparison.
    fn grlex(a: &[u32], b: &[u32]) -> Ordering {
        let da: u64 = a.iter().map(|&x| x as u64).sum();
        let db: u64 = b.iter().map(|&x| x as u64).sum();
        da.cmp(&db).then_with(|| a.cmp(b))
    }
}

impl fmt::Display for IntegerPolynomial {
    /// Canonical text form: terms in descending graded-lexicographic order,
    /// explicit `*` between factors, `^` for powers. Parsing the result
    /// recovers the polynomial exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut sorted: Vec<(&Vec<u32>, &BigInt)> = self.terms.iter().collect();
        sorted.sort_by(|(a, _), (b, _)| Self::grlex(b, a));
        for (i, (exps, coeff)) in sorted.iter().enumerate() {
            let negative = coeff.is_negative();
            let abs = coeff.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || exps.iter().all(|&e| e == 0) {
                factors.push(abs.to_string());
            }
            for (j, &e) in exps.iter().enumerate() {
                if e == 1 {
                    factors.push(var_name(j));
                } else if e > 1 {
                    factors.push(format!("{}^{}", var_name(j), e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntegerPolynomial({})", self)
    }
}

/// Display fallback names x1, x2, ... used when no variable table is around;
/// the first few match the usual x, y, z, w convention.
fn var_name(i: usize) -> String {
    const NAMES: [&str; 4] = ["x", "y", "z", "w"];
    NAMES
        .get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("x{}", i + 1))
}

/// Render with caller-supplied variable names, in the same canonical order
/// used by `Display`.
pub fn render_with_vars(poly: &IntegerPolynomial, vars: &[String]) -> String {
    assert_eq!(vars.len(), poly.nvars());
    let mut sorted: Vec<(&Vec<u32>, &BigInt)> = poly.terms.iter().collect();
    sorted.sort_by(|(a, _), (b, _)| IntegerPolynomial::grlex(b, a));
    if sorted.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (exps, coeff)) in sorted.iter().enumerate() {
        let negative = coeff.is_negative();
        let abs = coeff.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mut factors: Vec<String> = Vec::new();
        if !abs.is_one() || exps.iter().all(|&e| e == 0) {
            factors.push(abs.to_string());
        }
        for (j, &e) in exps.iter().enumerate() {
            if e == 1 {
                factors.push(vars[j].clone());
            } else if e > 1 {
                factors.push(format!("{}^{}", vars[j], e));
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// The p-adic ground field at the level this engine needs: the residue field
/// size q equals the prime p, and the uniformizer is p itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaseField {
    p: u64,
}

impl BaseField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Residue field cardinality; equal to p for prime fields.
    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn uniformizer(&self) -> u64 {
        self.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A polynomial over the prime field F_p, obtained by reduction; coefficients
/// live in `0..p` and zero coefficients are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePoly {
    nvars: usize,
    p: u64,
    terms: BTreeMap<Vec<u32>, u64>,
}

impl PrimePoly {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &u64)> {
        self.terms.iter()
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        assert_eq!(point.len(), self.nvars);
        let p = self.p as u128;
        let mut acc: u128 = 0;
        for (e, c) in &self.terms {
            let mut term = *c as u128;
            for (x, &k) in point.iter().zip(e) {
                term = term * pow_mod(*x, k, self.p) as u128 % p;
            }
            acc = (acc + term) % p;
        }
        acc as u64
    }

    /// Formal partial derivative inside F_p.
    pub fn partial(&self, var: usize) -> Self {
        assert!(var < self.nvars);
        let p = self.p as u128;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[var];
            if k == 0 {
                continue;
            }
            let coeff = (*c as u128 * (k as u128 % p)) % p;
            if coeff != 0 {
                let mut exps = e.clone();
                exps[var] = k - 1;
                let entry = terms.entry(exps).or_insert(0u64);
                *entry = ((*entry as u128 + coeff) % p) as u64;
            }
        }
        terms.retain(|_, v| *v != 0);
        Self {
            nvars: self.nvars,
            p: self.p,
            terms,
        }
    }

    pub fn scale(&self, unit: u64) -> Self {
        let p = self.p as u128;
        let unit = unit as u128 % p;
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = (*c as u128 * unit % p) as u64;
            if v != 0 {
                terms.insert(e.clone(), v);
            }
        }
        Self {
            nvars: self.nvars,
            p: self.p,
            terms,
        }
    }
}

pub(crate) fn pow_mod(base: u64, exp: u32, p: u64) -> u64 {
    let mut b = base as u128 % p as u128;
    let mut e = exp;
    let mut acc: u128 = 1;
    let m = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// An ordered tuple of polynomials (h_1, ..., h_r) on a common variable set,
/// with r <= n, each component non-constant and nonzero modulo p.
#[derive(Clone, Debug)]
pub struct PolyMapping {
    components: Vec<IntegerPolynomial>,
}

impl PolyMapping {
    /// Validates the mapping against `field`. When `require_origin_vanishing`
    /// is set (the Newton-polyhedron-at-origin convention used for zeta
    /// computations), every component must have zero constant term.
    pub fn new(
        components: Vec<IntegerPolynomial>,
        field: &BaseField,
        require_origin_vanishing: bool,
    ) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::BadComponentCount { nvars: 0, got: 0 });
        };
        let nvars = first.nvars();
        if components.len() > nvars {
            return Err(Error::BadComponentCount {
                nvars,
                got: components.len(),
            });
        }
        for (index, h) in components.iter().enumerate() {
            if h.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: h.nvars(),
                });
            }
            if h.is_constant() {
                return Err(Error::ConstantComponent { index });
            }
            if h.reduce_mod(field).is_zero() {
                return Err(Error::VanishesModP {
                    index,
                    p: field.p(),
                });
            }
            if require_origin_vanishing && !h.vanishes_at_origin() {
                return Err(Error::NonzeroAtOrigin { index });
            }
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[IntegerPolynomial] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.components[0].nvars()
    }
}
