//! Exact rational functions in `t_i = q^{-s_i}` and assembly of the
//! explicit zeta formulas: unit-torus factors from stratum counts, cone
//! generating functions from fundamental parallelepipeds, and the full sum
//! over a subordinate fan, in both the multivariate and the single-variable
//! `f/g` specialization `s_1 = s, s_2 = -s`.

mod laurent;

pub use laurent::{qpow, rational_pow, LaurentPoly};

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fan::{fundamental_points, SimplicialCone, SubordinateFan};
use crate::polyhedra::NewtonPolyhedron;
use crate::polyring::{BaseField, PolyMapping};
use crate::torus::CountTable;

/// The binomial `1 - q^{qexp} * t^{texp}` kept factored in denominators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BinomialFactor {
    pub qexp: i64,
    pub texp: Vec<i64>,
}

/// A single exponential monomial `q^{qexp} * prod t_i^{sexps_i}`, i.e. the
/// value `q^{qexp - sum sexps_i s_i}` written in the `t` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpMonomial {
    pub qexp: i64,
    pub sexps: Vec<i64>,
}

/// An exact rational function of the `t` variables at a concrete prime
/// power `q`: a Laurent numerator over a multiset of binomial factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaRational {
    q: u64,
    num: LaurentPoly,
    den: BTreeMap<BinomialFactor, u32>,
}

impl ZetaRational {
    pub fn zero(q: u64, nvars: usize) -> Self {
        Self {
            q,
            num: LaurentPoly::zero(nvars),
            den: BTreeMap::new(),
        }
    }

    pub fn one(q: u64, nvars: usize) -> Self {
        Self {
            q,
            num: LaurentPoly::one(nvars),
            den: BTreeMap::new(),
        }
    }

    pub fn constant(q: u64, nvars: usize, c: BigRational) -> Self {
        Self {
            q,
            num: LaurentPoly::constant(nvars, c),
            den: BTreeMap::new(),
        }
    }

    pub fn from_monomial(q: u64, m: &ExpMonomial) -> Self {
        Self {
            q,
            num: LaurentPoly::monomial(m.sexps.len(), m.sexps.clone(), qpow(q, m.qexp)),
            den: BTreeMap::new(),
        }
    }

    /// A Laurent polynomial viewed as a rational function with trivial
    /// denominator.
    pub fn from_numerator(q: u64, num: LaurentPoly) -> Self {
        Self {
            q,
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<BinomialFactor, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Append one binomial factor to the denominator. A factor with zero
    /// `t`-exponent is a nonzero rational constant and is folded into the
    /// numerator instead of being stored.
    pub fn push_den_factor(&mut self, qexp: i64, texp: Vec<i64>) {
        if texp.iter().all(|&x| x == 0) {
            assert!(qexp != 0, "zero binomial in a denominator");
            let c = BigRational::one() - qpow(self.q, qexp);
            self.num = self.num.scale(&c.recip());
            return;
        }
        *self
            .den
            .entry(BinomialFactor { qexp, texp })
            .or_insert(0) += 1;
    }

    fn den_product_except(&self, skip: &BTreeMap<BinomialFactor, u32>) -> LaurentPoly {
        let mut acc = LaurentPoly::one(self.nvars());
        for (f, &mult) in &self.den {
            let skip_mult = skip.get(f).copied().unwrap_or(0);
            for _ in 0..mult.saturating_sub(skip_mult) {
                acc = acc.mul(&LaurentPoly::binomial(self.nvars(), self.q, f.qexp, &f.texp));
            }
        }
        acc
    }

    /// The expanded denominator as a Laurent polynomial.
    pub fn den_expanded(&self) -> LaurentPoly {
        self.den_product_except(&BTreeMap::new())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q);
        assert_eq!(self.nvars(), other.nvars());
        // Common denominator: per-factor maximum multiplicity.
        let mut den: BTreeMap<BinomialFactor, u32> = self.den.clone();
        for (f, &m) in &other.den {
            let e = den.entry(f.clone()).or_insert(0);
            *e = (*e).max(m);
        }
        let with_den = |side: &Self| -> LaurentPoly {
            let mut acc = side.num.clone();
            for (f, &m) in &den {
                let have = side.den.get(f).copied().unwrap_or(0);
                for _ in 0..m - have {
                    acc = acc.mul(&LaurentPoly::binomial(side.nvars(), side.q, f.qexp, &f.texp));
                }
            }
            acc
        };
        let num = with_den(self).add(&with_den(other));
        Self {
            q: self.q,
            num,
            den,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q);
        let mut den = self.den.clone();
        for (f, &m) in &other.den {
            *den.entry(f.clone()).or_insert(0) += m;
        }
        Self {
            q: self.q,
            num: self.num.mul(&other.num),
            den,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            q: self.q,
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Cancel denominator binomials that divide the numerator exactly,
    /// repeatedly, until none does. This is the canonical form used for
    /// reporting; mathematical equality is checked by `equivalent`.
    pub fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        loop {
            let factors: Vec<BinomialFactor> = self.den.keys().cloned().collect();
            let mut progressed = false;
            for f in factors {
                while self.den.get(&f).copied().unwrap_or(0) > 0 {
                    match self.num.divide_by_binomial(self.q, f.qexp, &f.texp) {
                        Some(quotient) => {
                            self.num = quotient;
                            let m = self.den.get_mut(&f).unwrap();
                            *m -= 1;
                            if *m == 0 {
                                self.den.remove(&f);
                            }
                            progressed = true;
                        }
                        None => break,
                    }
                }
            }
            if !progressed {
                break;
            }
        }
    }

    pub fn canonicalized(mut self) -> Self {
        self.cancel();
        self
    }

    /// Exact equality as rational functions, by cross-multiplied Laurent
    /// polynomial identity.
    pub fn equivalent(&self, other: &Self) -> bool {
        assert_eq!(self.q, other.q);
        assert_eq!(self.nvars(), other.nvars());
        let lhs = self.num.mul(&other.den_expanded());
        let rhs = other.num.mul(&self.den_expanded());
        lhs == rhs
    }

    /// Substitute `t_i -> t^{weights[i]}`: the `s`-side substitution
    /// `s_i -> weights[i] * s`. Factors whose direction collapses to zero
    /// become rational constants and are folded into the numerator.
    pub fn specialize(&self, weights: &[i64]) -> Self {
        let mut out = Self {
            q: self.q,
            num: self.num.specialize(weights),
            den: BTreeMap::new(),
        };
        for (f, &m) in &self.den {
            let b: i64 = f
                .texp
                .iter()
                .zip(weights)
                .map(|(x, w)| x * w)
                .sum();
            for _ in 0..m {
                out.push_den_factor(f.qexp, vec![b]);
            }
        }
        out
    }

    /// Evaluate at rational `t`-arguments; `None` when a denominator factor
    /// vanishes there.
    pub fn eval_rational(&self, args: &[BigRational]) -> Option<BigRational> {
        let den = self.den_expanded().eval_rational(args);
        if den.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(args) / den)
    }

    /// Canonical rendering: sorted numerator, then sorted factor list with
    /// multiplicities.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ZetaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / (", self.num)?;
        let mut first = true;
        for (fac, &m) in &self.den {
            for _ in 0..m {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                let texp = fac
                    .texp
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(j, &e)| {
                        let name = if fac.texp.len() == 1 {
                            "t".to_string()
                        } else {
                            format!("t{}", j + 1)
                        };
                        if e == 1 {
                            name
                        } else {
                            format!("{name}^{e}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*");
                write!(f, "(1 - q^{}*{})", fac.qexp, texp)?;
            }
        }
        write!(f, ")")
    }
}

/// Per-cone contribution to the zeta function: the unit-torus factor and
/// the cone generating function. The origin pseudo-cone has `cone = None`
/// and generating function 1.
#[derive(Clone, Debug)]
pub struct ConeTerm {
    pub cone: Option<usize>,
    pub l_part: ZetaRational,
    pub s_part: ZetaRational,
}

/// Unit-torus factor from a stratum count table: the weighted sum over
/// vanishing patterns `I` of `count(I) * prod_{i in I}
/// (q-1) q^{-1-s_i} / (1 - q^{-1-s_i})`, all over `q^n`, with the empty
/// product equal to 1.
pub fn l_factor(counts: &CountTable, field: &BaseField, r: usize, n: usize) -> ZetaRational {
    let q = field.q();
    assert_eq!(counts.counts.len(), 1 << r);
    let mut acc = ZetaRational::zero(q, r);
    for (mask, &count) in counts.counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let mut term = ZetaRational::constant(
            q,
            r,
            BigRational::from_integer(count.into()) * qpow(q, -(n as i64)),
        );
        for i in 0..r {
            if mask >> i & 1 == 0 {
                continue;
            }
            let mut exps = vec![0i64; r];
            exps[i] = 1;
            let factor_num = LaurentPoly::monomial(
                r,
                exps.clone(),
                BigRational::from_integer((q - 1).into()) * qpow(q, -1),
            );
            term = term.mul(&ZetaRational {
                q,
                num: factor_num,
                den: BTreeMap::new(),
            });
            term.push_den_factor(-1, exps);
        }
        acc = acc.add(&term);
    }
    acc
}

/// Unit-torus factor for a pair `(f, g)` under the specialization
/// `s_1 = s, s_2 = -s`, in the four-term closed form
/// `q^{-n} [ (q-1)^n - N_f (1-q^{-s})/(1-q^{-1-s})
///                   - N_g (1-q^{s})/(1-q^{-1+s})
///                   - N_fg (1-q^{-s})(1-q^{s})/(q (1-q^{-1-s})(1-q^{-1+s})) ]`.
pub fn l_factor_rational(counts: &CountTable, field: &BaseField, n: usize) -> ZetaRational {
    let q = field.q();
    assert_eq!(counts.counts.len(), 4, "pair counts required");
    let n_f = counts.counts[0b01];
    let n_g = counts.counts[0b10];
    let n_fg = counts.counts[0b11];
    let torus = {
        let mut t = BigRational::one();
        for _ in 0..n {
            t *= BigRational::from_integer((q - 1).into());
        }
        t
    };
    let one_minus = |exp: i64| -> LaurentPoly {
        // 1 - t^exp  (that is, 1 - q^{-exp s})
        LaurentPoly::binomial(1, q, 0, &[exp])
    };
    let mut acc = ZetaRational::constant(q, 1, torus);

    if n_f > 0 {
        let mut term = ZetaRational {
            q,
            num: one_minus(1).scale(&-BigRational::from_integer(n_f.into())),
            den: BTreeMap::new(),
        };
        term.push_den_factor(-1, vec![1]);
        acc = acc.add(&term);
    }
    if n_g > 0 {
        let mut term = ZetaRational {
            q,
            num: one_minus(-1).scale(&-BigRational::from_integer(n_g.into())),
            den: BTreeMap::new(),
        };
        term.push_den_factor(-1, vec![-1]);
        acc = acc.add(&term);
    }
    if n_fg > 0 {
        let num = one_minus(1)
            .mul(&one_minus(-1))
            .scale(&(-BigRational::from_integer(n_fg.into()) * qpow(q, -1)));
        let mut term = ZetaRational {
            q,
            num,
            den: BTreeMap::new(),
        };
        term.push_den_factor(-1, vec![1]);
        term.push_den_factor(-1, vec![-1]);
        acc = acc.add(&term);
    }
    acc.scale(&qpow(q, -(n as i64)))
}

fn sigma(v: &[i64]) -> i64 {
    v.iter().sum()
}

/// Exponential data of a lattice point against the component polyhedra:
/// `q^{-sigma(k)} * prod t_i^{d(k, Gamma_i)}`.
fn exp_monomial_of(k: &[i64], gammas: &[&NewtonPolyhedron]) -> ExpMonomial {
    ExpMonomial {
        qexp: -sigma(k),
        sexps: gammas.iter().map(|g| g.d_value(k)).collect(),
    }
}

/// Generating function of the lattice points in the relatively open cone:
/// numerator over the half-open fundamental parallelepiped, one binomial
/// factor per generator.
pub fn s_delta(cone: &SimplicialCone, gammas: &[&NewtonPolyhedron], field: &BaseField) -> ZetaRational {
    let q = field.q();
    let r = gammas.len();
    let mut acc = ZetaRational::zero(q, r);
    for t in fundamental_points(cone) {
        let m = exp_monomial_of(&t, gammas);
        acc = acc.add(&ZetaRational::from_monomial(q, &m));
    }
    for w in &cone.generators {
        let m = exp_monomial_of(w, gammas);
        acc.push_den_factor(m.qexp, m.sexps);
    }
    acc
}

/// Outcome of assembly: the zeta function plus whether the non-degeneracy
/// hypothesis behind the formula was verified.
#[derive(Clone, Debug)]
pub struct AssembledZeta {
    pub zeta: ZetaRational,
    pub terms: Vec<ConeTerm>,
    pub certified: bool,
}

fn origin_term(counts: &CountTable, field: &BaseField, r: usize, n: usize) -> ConeTerm {
    ConeTerm {
        cone: None,
        l_part: l_factor(counts, field, r, n),
        s_part: ZetaRational::one(field.q(), r),
    }
}

/// The multivariate zeta function of a non-degenerate mapping: the origin
/// term plus one product term per fan cone, canonicalized.
///
/// `counts` must list the origin table first and then one table per fan
/// cone in fan order, as produced by `torus::count_all_strata`. When the
/// non-degeneracy verdict is false the formula is still well-defined but
/// not certified to equal the integral; `allow_degenerate` decides whether
/// to proceed or refuse.
pub fn assemble_z(
    mapping: &PolyMapping,
    fan: &SubordinateFan,
    counts: &[CountTable],
    field: &BaseField,
    nondegenerate: bool,
    allow_degenerate: bool,
) -> Result<AssembledZeta> {
    if !nondegenerate && !allow_degenerate {
        return Err(Error::DegenerateMapping);
    }
    let r = mapping.len();
    let n = mapping.nvars();
    let gammas_owned: Vec<NewtonPolyhedron> = mapping
        .components()
        .iter()
        .map(NewtonPolyhedron::from_polynomial)
        .collect::<Result<_>>()?;
    let gammas: Vec<&NewtonPolyhedron> = gammas_owned.iter().collect();
    assert_eq!(counts.len(), fan.cones().len() + 1);

    let mut terms = vec![origin_term(&counts[0], field, r, n)];
    for (i, cone) in fan.cones().iter().enumerate() {
        terms.push(ConeTerm {
            cone: Some(i),
            l_part: l_factor(&counts[i + 1], field, r, n),
            s_part: s_delta(cone, &gammas, field),
        });
    }
    let mut zeta = ZetaRational::zero(field.q(), r);
    for term in &terms {
        zeta = zeta.add(&term.l_part.mul(&term.s_part));
    }
    zeta.cancel();
    Ok(AssembledZeta {
        zeta,
        terms,
        certified: nondegenerate,
    })
}

/// The single-variable zeta function of a rational function `f/g`: the sum
/// over the origin and all fan cones of the four-term torus factor times
/// the specialized cone generating function.
pub fn assemble_z_rational(
    f_gamma: &NewtonPolyhedron,
    g_gamma: &NewtonPolyhedron,
    fan: &SubordinateFan,
    counts: &[CountTable],
    field: &BaseField,
    nondegenerate: bool,
    allow_degenerate: bool,
) -> Result<AssembledZeta> {
    if !nondegenerate && !allow_degenerate {
        return Err(Error::DegenerateMapping);
    }
    let n = f_gamma.nvars();
    assert_eq!(counts.len(), fan.cones().len() + 1);
    let gammas = [f_gamma, g_gamma];
    let mut terms = vec![ConeTerm {
        cone: None,
        l_part: l_factor_rational(&counts[0], field, n),
        s_part: ZetaRational::one(field.q(), 1),
    }];
    for (i, cone) in fan.cones().iter().enumerate() {
        let s_multi = s_delta(cone, &gammas, field);
        terms.push(ConeTerm {
            cone: Some(i),
            l_part: l_factor_rational(&counts[i + 1], field, n),
            s_part: s_multi.specialize(&[1, -1]),
        });
    }
    let mut zeta = ZetaRational::zero(field.q(), 1);
    for term in &terms {
        zeta = zeta.add(&term.l_part.mul(&term.s_part));
    }
    zeta.cancel();
    Ok(AssembledZeta {
        zeta,
        terms,
        certified: nondegenerate,
    })
}
