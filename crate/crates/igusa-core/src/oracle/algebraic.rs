//! Exact arithmetic in the real field Q(rho) with rho = q^(1/d), q prime.
//!
//! The minimal polynomial x^d - q is irreducible (Eisenstein at q), so an
//! element is zero exactly when its reduced coefficient vector is zero, and
//! signs of nonzero elements are decidable by interval refinement around
//! integer d-th roots. This is what lets the integration oracle produce
//! exact brackets and 50-digit decimal renderings at rational exponents.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The field descriptor: rho = q^(1/degree).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QRootField {
    pub q: u64,
    pub degree: u32,
}

impl QRootField {
    pub fn new(q: u64, degree: u32) -> Self {
        assert!(degree >= 1);
        Self { q, degree }
    }

    pub fn zero(&self) -> QRootElem {
        QRootElem {
            field: *self,
            coeffs: vec![BigRational::zero(); self.degree as usize],
        }
    }

    pub fn one(&self) -> QRootElem {
        self.from_rational(BigRational::one())
    }

    pub fn from_rational(&self, c: BigRational) -> QRootElem {
        let mut e = self.zero();
        e.coeffs[0] = c;
        e
    }

    /// rho^k for any integer k; negative powers use rho^{-1} = rho^{d-1}/q.
    pub fn rho_pow(&self, k: i64) -> QRootElem {
        let d = self.degree as i64;
        // Write k = m*d + r with 0 <= r < d: rho^k = q^m * rho^r.
        let m = k.div_euclid(d);
        let r = k.rem_euclid(d) as usize;
        let mut e = self.zero();
        e.coeffs[r] = crate::zeta::qpow(self.q, m);
        e
    }

    /// q^{x} for rational x whose denominator divides the field degree.
    pub fn q_pow(&self, x: &BigRational) -> QRootElem {
        let d = BigInt::from(self.degree);
        let scaled = x * BigRational::from(d);
        assert!(
            scaled.denom().is_one(),
            "exponent denominator must divide the field degree"
        );
        let k = scaled
            .numer()
            .to_i64()
            .expect("scaled exponent fits in i64");
        self.rho_pow(k)
    }
}

/// An element of Q(rho), reduced modulo rho^d = q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QRootElem {
    field: QRootField,
    coeffs: Vec<BigRational>,
}

impl QRootElem {
    pub fn field(&self) -> QRootField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            field: self.field,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field);
        let d = self.field.degree as usize;
        let q = BigRational::from(BigInt::from(self.field.q));
        let mut out = vec![BigRational::zero(); d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                let k = i + j;
                if k < d {
                    out[k] += prod;
                } else {
                    out[k - d] += prod * &q; // rho^d = q
                }
            }
        }
        Self {
            field: self.field,
            coeffs: out,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            field: self.field,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm on
    /// polynomials over Q modulo x^d - q. Panics on zero.
    pub fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let d = self.field.degree as usize;
        // mod poly m(x) = x^d - q
        let mut m = vec![BigRational::zero(); d + 1];
        m[0] = -BigRational::from(BigInt::from(self.field.q));
        m[d] = BigRational::one();
        // Extended Euclid on (m, self) returning s with s*self = gcd mod m.
        let a = m;
        let b = self.coeffs.clone();
        let (g, _, t) = ext_gcd(&a, &b);
        // gcd must be a nonzero constant since m is irreducible.
        let c = g
            .iter()
            .rposition(|x| !x.is_zero())
            .expect("gcd nonzero");
        assert_eq!(c, 0, "minimal polynomial is irreducible");
        let scale = g[0].recip();
        let mut coeffs: Vec<BigRational> = t.iter().map(|x| x * &scale).collect();
        // Reduce degree below d (t has degree < deg(m) already).
        coeffs.resize(d, BigRational::zero());
        Self {
            field: self.field,
            coeffs,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inverse())
    }

    /// Sign of the real number this element represents, by interval
    /// refinement of rho. Terminates for every element because zero is
    /// decided coefficient-wise first.
    pub fn sign(&self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut digits = 30u32;
        loop {
            let (lo, hi) = self.interval(digits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            digits *= 2;
            assert!(digits <= 4000, "sign refinement failed to converge");
        }
    }

    pub fn is_positive_real(&self) -> bool {
        self.sign() == std::cmp::Ordering::Greater
    }

    pub fn le(&self, other: &Self) -> bool {
        self.sub(other).sign() != std::cmp::Ordering::Greater
    }

    /// Rational enclosure of the value with roughly `digits` decimal digits.
    fn interval(&self, digits: u32) -> (BigRational, BigRational) {
        let scale = BigInt::from(10u32).pow(digits);
        // floor(10^digits * q^(1/d)) = floor((q * 10^(digits*d))^(1/d))
        let base = BigUint::from(self.field.q) * BigUint::from(10u32).pow(digits * self.field.degree);
        let root = nth_root_floor(&base, self.field.degree);
        let lo_rho = BigRational::new(BigInt::from(root.clone()), scale.clone());
        let hi_rho = BigRational::new(BigInt::from(root + BigUint::one()), scale);
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        // rho > 0, so powers keep interval orientation.
        let mut lo_pow = BigRational::one();
        let mut hi_pow = BigRational::one();
        for c in &self.coeffs {
            if !c.is_zero() {
                if c.is_positive() {
                    lo += c * &lo_pow;
                    hi += c * &hi_pow;
                } else {
                    lo += c * &hi_pow;
                    hi += c * &lo_pow;
                }
            }
            lo_pow *= &lo_rho;
            hi_pow *= &hi_rho;
        }
        (lo, hi)
    }

    /// Decimal rendering with `digits` digits after the point, rounded to
    /// nearest (ties may land either way at exact midpoints).
    pub fn to_decimal(&self, digits: u32) -> String {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut precision = digits + 10;
        loop {
            let (lo, hi) = self.interval(precision);
            let scale = BigInt::from(10u32).pow(digits);
            let round = |x: &BigRational| -> BigInt {
                (x * BigRational::from(scale.clone()) + &half).floor().to_integer()
            };
            let lo_scaled = round(&lo);
            let hi_scaled = round(&hi);
            if lo_scaled == hi_scaled {
                let negative = lo_scaled.is_negative();
                let mag = lo_scaled.abs();
                let whole = &mag / &scale;
                let frac = &mag % &scale;
                let frac_str = format!("{:0>width$}", frac.to_string(), width = digits as usize);
                return format!("{}{}.{}", if negative { "-" } else { "" }, whole, frac_str);
            }
            precision *= 2;
            assert!(precision <= 8000, "decimal refinement failed to converge");
        }
    }
}

/// Floor of the d-th root of a nonnegative big integer, by Newton iteration.
pub fn nth_root_floor(n: &BigUint, d: u32) -> BigUint {
    if n.is_zero() || d == 1 {
        return n.clone();
    }
    let bits = n.bits();
    let mut x = BigUint::one() << (bits / d as u64 + 1);
    loop {
        // x_{k+1} = ((d-1) x + n / x^{d-1}) / d
        let xd1 = x.pow(d - 1);
        let next = (&x * BigUint::from(d - 1) + n / xd1) / BigUint::from(d);
        if next >= x {
            break;
        }
        x = next;
    }
    while x.pow(d) > *n {
        x -= BigUint::one();
    }
    while (&x + BigUint::one()).pow(d) <= *n {
        x += BigUint::one();
    }
    x
}

/// Extended gcd of polynomials over Q (dense little-endian coefficients):
/// returns (g, s, t) with s*a + t*b = g.
fn ext_gcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut s0 = vec![BigRational::one()];
    let mut s1 = vec![BigRational::zero()];
    let mut t0 = vec![BigRational::zero()];
    let mut t1 = vec![BigRational::one()];
    while !is_zero_poly(&r1) {
        let (q, rem) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    (r0, s0, t0)
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

fn is_zero_poly(p: &[BigRational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut rem = a.to_vec();
    let mut quot = vec![BigRational::zero(); a.len().saturating_sub(db)];
    if quot.is_empty() {
        quot.push(BigRational::zero());
    }
    loop {
        let rem_t = trim(rem.clone());
        if is_zero_poly(&rem_t) || rem_t.len() - 1 < db {
            return (trim(quot), rem_t);
        }
        let da = rem_t.len() - 1;
        let c = &rem_t[da] / &lead;
        let shift = da - db;
        quot[shift] = &quot[shift] + &c;
        rem = rem_t;
        for i in 0..=db {
            let v = &rem[shift + i] - &c * &b[i];
            rem[shift + i] = v;
        }
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let v = &out[i + j] + x * y;
            out[i + j] = v;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        let v = &out[i] - y;
        out[i] = v;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn integer_roots() {
        assert_eq!(nth_root_floor(&BigUint::from(26u32), 3), BigUint::from(2u32));
        assert_eq!(nth_root_floor(&BigUint::from(27u32), 3), BigUint::from(3u32));
        assert_eq!(nth_root_floor(&BigUint::from(28u32), 3), BigUint::from(3u32));
        let huge = BigUint::from(10u32).pow(60) * BigUint::from(3u32);
        let r = nth_root_floor(&huge, 4);
        assert!(r.pow(4) <= huge);
        assert!((r + BigUint::one()).pow(4) > BigUint::from(10u32).pow(60) * BigUint::from(3u32));
    }

    #[test]
    fn field_relations() {
        let field = QRootField::new(3, 4);
        let rho = field.rho_pow(1);
        // rho^4 = 3
        let forth = rho.mul(&rho).mul(&rho).mul(&rho);
        assert_eq!(forth, field.from_rational(rat(3, 1)));
        // rho^-1 * rho = 1
        let inv = field.rho_pow(-1);
        assert_eq!(inv.mul(&rho), field.one());
        // Extended-Euclid inverse agrees.
        let e = field.rho_pow(3).add(&field.from_rational(rat(5, 7)));
        assert_eq!(e.mul(&e.inverse()), field.one());
    }

    #[test]
    fn signs_and_comparisons() {
        let field = QRootField::new(3, 2);
        // sqrt(3) - 12/7 > 0 since 3 > 144/49.
        let e = field.rho_pow(1).sub(&field.from_rational(rat(12, 7)));
        assert_eq!(e.sign(), Ordering::Greater);
        // sqrt(3) - 7/4 < 0 since 3 < 49/16.
        let e = field.rho_pow(1).sub(&field.from_rational(rat(7, 4)));
        assert_eq!(e.sign(), Ordering::Less);
        let zero = field.zero();
        assert_eq!(zero.sign(), Ordering::Equal);
    }

    #[test]
    fn decimal_rendering() {
        let field = QRootField::new(2, 2);
        let sqrt2 = field.rho_pow(1);
        // Rounded at 30 digits: ...209 | 698... rounds the last digit up.
        assert_eq!(sqrt2.to_decimal(30), "1.414213562373095048801688724210");
        assert_eq!(sqrt2.neg().to_decimal(5), "-1.41421");
        assert_eq!(field.from_rational(rat(1, 4)).to_decimal(3), "0.250");
    }

    #[test]
    fn q_pow_of_rational_exponent() {
        let field = QRootField::new(3, 4);
        // q^{-3/4} * q^{3/4} = 1
        let a = field.q_pow(&rat(-3, 4));
        let b = field.q_pow(&rat(3, 4));
        assert_eq!(a.mul(&b), field.one());
    }
}
