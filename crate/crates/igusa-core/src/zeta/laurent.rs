//! Multivariate Laurent polynomials with exact rational coefficients, the
//! expansion layer under the factored rational functions of this module.
//! Exponents may be negative; the variable count is fixed per value.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `q^k` as an exact rational, for integer `k` of either sign.
pub fn qpow(q: u64, k: i64) -> BigRational {
    let base = BigInt::from(q);
    let mag = base.pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, BigRational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<i64>, c: BigRational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, exps: Vec<i64>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
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
                let exps: Vec<i64> = ea
                    .iter()
                    .zip(eb)
                    .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
                    .collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    /// The binomial `1 - q^a t^b`.
    pub fn binomial(nvars: usize, q: u64, a: i64, b: &[i64]) -> Self {
        let mut p = Self::one(nvars);
        p.add_term(b.to_vec(), -qpow(q, a));
        p
    }

    /// Exact division by the binomial `1 - q^a t^b` with `b != 0`; `None`
    /// when not divisible. Terms are grouped into residue classes of the
    /// exponent lattice modulo `b`, and each class is divided as a
    /// univariate Laurent polynomial in `u = t^b`.
    pub fn divide_by_binomial(&self, q: u64, a: i64, b: &[i64]) -> Option<Self> {
        assert_eq!(b.len(), self.nvars);
        let j0 = b.iter().position(|&x| x != 0).expect("binomial direction nonzero");
        let step = b[j0];
        let mut classes: BTreeMap<Vec<i64>, BTreeMap<i64, BigRational>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[j0].div_euclid(step);
            let key: Vec<i64> = e.iter().zip(b).map(|(x, y)| x - k * y).collect();
            classes.entry(key).or_default().insert(k, c.clone());
        }
        let qa = qpow(q, a);
        let mut out = Self::zero(self.nvars);
        for (key, class) in classes {
            let kmin = *class.keys().next().unwrap();
            let kmax = *class.keys().last().unwrap();
            if kmin == kmax {
                return None; // a single term is never divisible
            }
            // Synthetic division of sum c_k u^k by (1 - q^a u).
            let mut prev = BigRational::zero();
            let mut quotient: Vec<(i64, BigRational)> = Vec::new();
            for k in kmin..kmax {
                let c = class.get(&k).cloned().unwrap_or_else(BigRational::zero);
                let d = c + &qa * &prev;
                if !d.is_zero() {
                    quotient.push((k, d.clone()));
                }
                prev = d;
            }
            let top = class.get(&kmax).cloned().unwrap_or_else(BigRational::zero);
            if top + &qa * &prev != BigRational::zero() {
                return None;
            }
            for (k, d) in quotient {
                let exps: Vec<i64> = key.iter().zip(b).map(|(x, y)| x + k * y).collect();
                out.add_term(exps, d);
            }
        }
        Some(out)
    }

    /// Substitute `t_i -> t^{weights[i]}`, collapsing to one variable.
    pub fn specialize(&self, weights: &[i64]) -> Self {
        assert_eq!(weights.len(), self.nvars);
        let mut out = Self::zero(1);
        for (e, c) in &self.terms {
            let k: i64 = e
                .iter()
                .zip(weights)
                .map(|(x, w)| x.checked_mul(*w).expect("specialization overflow"))
                .sum();
            out.add_term(vec![k], c.clone());
        }
        out
    }

    /// Evaluate at rational arguments, exactly. Arguments must be nonzero
    /// when the corresponding exponent is negative.
    pub fn eval_rational(&self, args: &[BigRational]) -> BigRational {
        assert_eq!(args.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in args.iter().zip(e) {
                term *= rational_pow(x, k);
            }
            acc += term;
        }
        acc
    }
}

pub fn rational_pow(x: &BigRational, k: i64) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    let mag = k.unsigned_abs() as u32;
    let p = BigRational::new(x.numer().pow(mag), x.denom().pow(mag));
    if k > 0 {
        p
    } else {
        p.recip()
    }
}

impl fmt::Display for LaurentPoly {
    /// Sorted t-power rendering with exact rational coefficients; one
    /// variable prints as `t`, several as `t1, t2, ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exps, coeff)) in self.terms.iter().enumerate() {
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
                let name = if self.nvars == 1 {
                    "t".to_string()
                } else {
                    format!("t{}", j + 1)
                };
                if e == 1 {
                    factors.push(name);
                } else if e != 0 {
                    factors.push(format!("{name}^{e}"));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self)
    }
}
