//! Pole analysis for the single-variable zeta function of a rational
//! function: classification of facet normals by the sign of
//! `d(w, Gamma(g)) - d(w, Gamma(f))`, the extreme candidate real parts and
//! the clamped holomorphy band, and certification of actual poles and
//! multiplicities against the assembled rational function.
//!
//! Candidates come in vertical families `r0 + 2 pi i k / (c ln q)`; each is
//! certified on its real representative by exact binomial division, so no
//! algebraic numbers are ever manipulated.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::fan::SubordinateFan;
use crate::polyhedra::NewtonPolyhedron;
use crate::zeta::ZetaRational;

/// Where a pole candidate comes from.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PoleSource {
    /// A facet normal `w` with nonzero difference `c = d_g(w) - d_f(w)`;
    /// the family real part is `sigma(w) / c`.
    Normal(Vec<i64>),
    /// The family at real part 1 coming from the `1 - q^{-1+s}` factors.
    TrivialPlus,
    /// The family at real part -1 coming from the `1 - q^{-1-s}` factors.
    TrivialMinus,
}

/// One candidate family of poles: real part `real_part`, imaginary period
/// `2 pi / (c ln q)` encoded by the integer `c`, and the multiplicity
/// certified against the canonical rational function (0 when the candidate
/// is not actually a pole).
#[derive(Clone, Debug)]
pub struct PoleCandidate {
    pub real_part: BigRational,
    pub period_c: i64,
    pub source: PoleSource,
    pub certified_multiplicity: u32,
}

/// Band data: the normals split by sign, the extreme ratios, the clamped
/// holomorphy band `(beta_tilde, alpha_tilde)`, and the maximal numbers of
/// generators of a single fan cone realizing each extreme ratio.
#[derive(Clone, Debug)]
pub struct BandReport {
    pub t_plus: Vec<Vec<i64>>,
    pub t_minus: Vec<Vec<i64>>,
    /// `None` encodes +infinity (no positive-difference normal).
    pub alpha: Option<BigRational>,
    /// `None` encodes -infinity.
    pub beta: Option<BigRational>,
    pub alpha_tilde: BigRational,
    pub beta_tilde: BigRational,
    pub rho: u32,
    pub kappa: u32,
}

fn sigma(v: &[i64]) -> i64 {
    v.iter().sum()
}

fn diff(w: &[i64], f_gamma: &NewtonPolyhedron, g_gamma: &NewtonPolyhedron) -> i64 {
    g_gamma.d_value(w) - f_gamma.d_value(w)
}

/// Split the facet normals of `Gamma(fg)` by the sign of
/// `d(w, Gamma(g)) - d(w, Gamma(f))`; zero-difference normals belong to
/// neither side.
pub fn classify_normals(
    normals: &[Vec<i64>],
    f_gamma: &NewtonPolyhedron,
    g_gamma: &NewtonPolyhedron,
) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut t_plus = Vec::new();
    let mut t_minus = Vec::new();
    for w in normals {
        match diff(w, f_gamma, g_gamma).cmp(&0) {
            std::cmp::Ordering::Greater => t_plus.push(w.clone()),
            std::cmp::Ordering::Less => t_minus.push(w.clone()),
            std::cmp::Ordering::Equal => {}
        }
    }
    (t_plus, t_minus)
}

fn ratio(w: &[i64], f_gamma: &NewtonPolyhedron, g_gamma: &NewtonPolyhedron) -> BigRational {
    BigRational::new(BigInt::from(sigma(w)), BigInt::from(diff(w, f_gamma, g_gamma)))
}

/// Compute the band report from classified normals and the fan.
pub fn band(
    t_plus: &[Vec<i64>],
    t_minus: &[Vec<i64>],
    f_gamma: &NewtonPolyhedron,
    g_gamma: &NewtonPolyhedron,
    fan: &SubordinateFan,
) -> BandReport {
    let alpha = t_plus
        .iter()
        .map(|w| ratio(w, f_gamma, g_gamma))
        .min();
    let beta = t_minus
        .iter()
        .map(|w| ratio(w, f_gamma, g_gamma))
        .max();
    let one = BigRational::one();
    let alpha_tilde = match &alpha {
        Some(a) => a.min(&one).clone(),
        None => one.clone(),
    };
    let beta_tilde = match &beta {
        Some(b) => b.max(&-&one).clone(),
        None => -one,
    };
    let extremal_set = |target: &Option<BigRational>, side: &[Vec<i64>]| -> Vec<Vec<i64>> {
        match target {
            Some(v) => side
                .iter()
                .filter(|w| ratio(w, f_gamma, g_gamma) == *v)
                .cloned()
                .collect(),
            None => Vec::new(),
        }
    };
    // The extreme ratios are automatically signed: weights are nonnegative
    // with positive coordinate sum.
    debug_assert!(alpha.as_ref().map(|a| a.is_positive()).unwrap_or(true));
    debug_assert!(beta.as_ref().map(|b| b.is_negative()).unwrap_or(true));
    let p_alpha = extremal_set(&alpha, t_plus);
    let p_beta = extremal_set(&beta, t_minus);
    let max_generators_in = |set: &[Vec<i64>]| -> u32 {
        fan.cones()
            .iter()
            .map(|c| {
                c.generators
                    .iter()
                    .filter(|g| set.contains(g))
                    .count() as u32
            })
            .max()
            .unwrap_or(0)
    };
    BandReport {
        t_plus: t_plus.to_vec(),
        t_minus: t_minus.to_vec(),
        alpha,
        beta,
        alpha_tilde,
        beta_tilde,
        kappa: max_generators_in(&p_alpha),
        rho: max_generators_in(&p_beta),
    }
}

/// Candidate pole families for `Z(s, f/g)`: one per facet normal with
/// nonzero difference, plus the two trivial families at real parts 1 and -1.
pub fn pole_candidates(
    normals: &[Vec<i64>],
    f_gamma: &NewtonPolyhedron,
    g_gamma: &NewtonPolyhedron,
) -> Vec<(BigRational, i64, PoleSource)> {
    let mut out = vec![
        (BigRational::one(), 1, PoleSource::TrivialPlus),
        (-BigRational::one(), 1, PoleSource::TrivialMinus),
    ];
    for w in normals {
        let c = diff(w, f_gamma, g_gamma);
        if c == 0 {
            continue;
        }
        out.push((
            BigRational::new(BigInt::from(sigma(w)), BigInt::from(c)),
            c,
            PoleSource::Normal(w.clone()),
        ));
    }
    out
}

/// Certify each candidate family against the canonical rational function.
///
/// On the line `Re(s) = u/v` (lowest terms) every denominator binomial
/// `1 - q^a t^b` with `a v = u b` has a simple zero at the real point
/// `t0 = q^{-u/v}`, and the numerator's vanishing order there is the number
/// of times the primitive binomial `1 - q^u t^v` divides it exactly. The
/// certified multiplicity is the difference, floored at zero.
pub fn certify_poles(
    zeta: &ZetaRational,
    candidates: &[(BigRational, i64, PoleSource)],
) -> Vec<PoleCandidate> {
    candidates
        .iter()
        .map(|(real_part, c, source)| PoleCandidate {
            real_part: real_part.clone(),
            period_c: *c,
            source: source.clone(),
            certified_multiplicity: line_multiplicity(zeta, real_part),
        })
        .collect()
}

/// Vanishing order of the denominator minus the numerator at the real point
/// of the vertical line `Re(s) = r0`, floored at zero.
pub fn line_multiplicity(zeta: &ZetaRational, r0: &BigRational) -> u32 {
    assert_eq!(zeta.nvars(), 1, "single-variable zeta required");
    let u = r0.numer().clone();
    let v = r0.denom().clone(); // positive by normalization
    let den_order: u32 = zeta
        .denominator()
        .iter()
        .filter(|(f, _)| {
            let b = BigInt::from(f.texp[0]);
            let a = BigInt::from(f.qexp);
            !b.is_zero() && a * &v == &u * b
        })
        .map(|(_, &m)| m)
        .sum();
    if den_order == 0 {
        return 0;
    }
    // Primitive binomial of the line: 1 - q^(u') t^(v') in lowest terms.
    let g = u.gcd(&v);
    let (u, v) = (&u / &g, &v / &g);
    let a: i64 = i64::try_from(&u).expect("candidate numerator fits i64");
    let b: i64 = i64::try_from(&v).expect("candidate denominator fits i64");
    let mut num_order = 0u32;
    let mut num = zeta.numerator().clone();
    while num_order < den_order {
        match num.divide_by_binomial(zeta.q(), a, &[b]) {
            Some(q) => {
                num = q;
                num_order += 1;
            }
            None => break,
        }
    }
    den_order - num_order
}

/// Real parts that are genuine poles, deduplicated and sorted.
pub fn certified_pole_set(poles: &[PoleCandidate]) -> Vec<BigRational> {
    let mut parts: Vec<BigRational> = poles
        .iter()
        .filter(|p| p.certified_multiplicity > 0)
        .map(|p| p.real_part.clone())
        .collect();
    parts.sort();
    parts.dedup();
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{FanOrdering, SubordinateFan};
    use crate::polyring::{parse_polynomial, BaseField, PolyMapping};
    use crate::torus::{count_all_strata, DEFAULT_TORUS_BUDGET};
    use crate::zeta::assemble_z_rational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    struct Fixture {
        f_gamma: NewtonPolyhedron,
        g_gamma: NewtonPolyhedron,
        fan: SubordinateFan,
        zeta: ZetaRational,
    }

    fn fixture(f: &str, g: &str, q: u64) -> Fixture {
        let field = BaseField::new(q).unwrap();
        let pf = parse_polynomial(f, &["x", "y"]).unwrap();
        let pg = parse_polynomial(g, &["x", "y"]).unwrap();
        let mapping = PolyMapping::new(vec![pf.clone(), pg.clone()], &field, true).unwrap();
        let f_gamma = NewtonPolyhedron::from_polynomial(&pf).unwrap();
        let g_gamma = NewtonPolyhedron::from_polynomial(&pg).unwrap();
        let total = f_gamma.minkowski_sum(&g_gamma).unwrap();
        let fan = SubordinateFan::build(&total, FanOrdering::Lex).unwrap();
        let counts = count_all_strata(&mapping, &fan, &field, DEFAULT_TORUS_BUDGET).unwrap();
        let z = assemble_z_rational(&f_gamma, &g_gamma, &fan, &counts, &field, true, true)
            .unwrap();
        Fixture {
            f_gamma,
            g_gamma,
            fan,
            zeta: z.zeta,
        }
    }

    #[test]
    fn classification_of_worked_example() {
        let fx = fixture("x^2 - y", "x^2*y", 5);
        let total = fx.f_gamma.minkowski_sum(&fx.g_gamma).unwrap();
        let normals = total.facet_normals();
        let (t_plus, t_minus) = classify_normals(&normals, &fx.f_gamma, &fx.g_gamma);
        assert_eq!(t_plus.len(), 3);
        assert!(t_minus.is_empty());
        // Swapping the pair swaps the sides.
        let (p2, m2) = classify_normals(&normals, &fx.g_gamma, &fx.f_gamma);
        assert_eq!(p2, t_minus);
        assert_eq!(m2, t_plus);
        // Equal polyhedra give empty sides.
        let (p3, m3) = classify_normals(&normals, &fx.f_gamma, &fx.f_gamma);
        assert!(p3.is_empty() && m3.is_empty());
    }

    #[test]
    fn band_of_worked_example() {
        let fx = fixture("x^2 - y", "x^2*y", 5);
        let total = fx.f_gamma.minkowski_sum(&fx.g_gamma).unwrap();
        let normals = total.facet_normals();
        let (t_plus, t_minus) = classify_normals(&normals, &fx.f_gamma, &fx.g_gamma);
        let report = band(&t_plus, &t_minus, &fx.f_gamma, &fx.g_gamma, &fx.fan);
        assert_eq!(report.alpha, Some(rat(1, 2)));
        assert_eq!(report.beta, None);
        assert_eq!(report.alpha_tilde, rat(1, 2));
        assert_eq!(report.beta_tilde, rat(-1, 1));
        assert_eq!(report.kappa, 1);
        assert_eq!(report.rho, 0);
    }

    #[test]
    fn empty_plus_side_clamps_alpha() {
        // f/g with d_g <= d_f everywhere: swap the worked example.
        let fx = fixture("x^2*y", "x^2 - y", 5);
        let total = fx.f_gamma.minkowski_sum(&fx.g_gamma).unwrap();
        let normals = total.facet_normals();
        let (t_plus, t_minus) = classify_normals(&normals, &fx.f_gamma, &fx.g_gamma);
        assert!(t_plus.is_empty());
        let report = band(&t_plus, &t_minus, &fx.f_gamma, &fx.g_gamma, &fx.fan);
        assert_eq!(report.alpha, None);
        assert_eq!(report.alpha_tilde, rat(1, 1));
        assert_eq!(report.beta, Some(rat(-1, 2)));
        assert_eq!(report.beta_tilde, rat(-1, 2));
        assert!(report.rho >= 1);
    }

    #[test]
    fn certified_poles_of_worked_example() {
        let fx = fixture("x^2 - y", "x^2*y", 5);
        let total = fx.f_gamma.minkowski_sum(&fx.g_gamma).unwrap();
        let normals = total.facet_normals();
        let candidates = pole_candidates(&normals, &fx.f_gamma, &fx.g_gamma);
        let poles = certify_poles(&fx.zeta, &candidates);
        let parts = certified_pole_set(&poles);
        assert_eq!(
            parts,
            vec![rat(-1, 1), rat(1, 2), rat(1, 1), rat(3, 2)]
        );
        // The smallest positive pole has the multiplicity predicted from the
        // fan.
        let alpha_pole = poles
            .iter()
            .find(|p| p.real_part == rat(1, 2))
            .unwrap();
        assert_eq!(alpha_pole.certified_multiplicity, 1);
    }

    #[test]
    fn separable_power_quotient() {
        // f = x^2, g = y: by separable geometric series
        //   Z(s, x^2/y) = (1-q^{-1})^2 / ((1-q^{-1-2s})(1-q^{-1+s})),
        // so the only poles sit at -1/2 and 1; the trivial families at +-1
        // contribute no factor because no face ever vanishes on the torus.
        let q = 5;
        let fx = fixture("x^2", "y", q);
        let one_minus_qinv = BigRational::one() - crate::zeta::qpow(q, -1);
        let mut expected =
            ZetaRational::constant(q, 1, &one_minus_qinv * &one_minus_qinv);
        expected.push_den_factor(-1, vec![2]);
        expected.push_den_factor(-1, vec![-1]);
        assert!(fx.zeta.equivalent(&expected), "got {}", fx.zeta);

        let total = fx.f_gamma.minkowski_sum(&fx.g_gamma).unwrap();
        let normals = total.facet_normals();
        let (t_plus, t_minus) = classify_normals(&normals, &fx.f_gamma, &fx.g_gamma);
        let report = band(&t_plus, &t_minus, &fx.f_gamma, &fx.g_gamma, &fx.fan);
        assert_eq!(report.alpha, Some(rat(1, 1)));
        assert_eq!(report.beta, Some(rat(-1, 2)));
        assert_eq!(report.alpha_tilde, rat(1, 1));
        assert_eq!(report.beta_tilde, rat(-1, 2));
        assert_eq!(report.kappa, 1);
        assert_eq!(report.rho, 1);

        let candidates = pole_candidates(&normals, &fx.f_gamma, &fx.g_gamma);
        let poles = certify_poles(&fx.zeta, &candidates);
        assert_eq!(certified_pole_set(&poles), vec![rat(-1, 2), rat(1, 1)]);
        for p in &poles {
            if p.source == PoleSource::TrivialMinus {
                assert_eq!(p.certified_multiplicity, 0);
            }
            if p.real_part == rat(-1, 2) || p.real_part == rat(1, 1) {
                assert_eq!(p.certified_multiplicity, 1, "{:?}", p.source);
            }
        }
    }

    #[test]
    fn tied_negative_ratios_give_a_double_pole() {
        // f = x^4 y^4, g = x y: both coordinate normals have difference
        // 1 - 4 = -3 and ratio -1/3, and the full-dimensional cone contains
        // both, so rho = 2; with beta = -1/3 > -1 the smallest negative pole
        // is certified with multiplicity exactly rho.
        let fx = fixture("x^4*y^4", "x*y", 5);
        let total = fx.f_gamma.minkowski_sum(&fx.g_gamma).unwrap();
        let normals = total.facet_normals();
        let (t_plus, t_minus) = classify_normals(&normals, &fx.f_gamma, &fx.g_gamma);
        assert!(t_plus.is_empty());
        assert_eq!(t_minus.len(), 2);
        let report = band(&t_plus, &t_minus, &fx.f_gamma, &fx.g_gamma, &fx.fan);
        assert_eq!(report.beta, Some(rat(-1, 3)));
        assert_eq!(report.beta_tilde, rat(-1, 3));
        assert_eq!(report.rho, 2);
        let candidates = pole_candidates(&normals, &fx.f_gamma, &fx.g_gamma);
        let poles = certify_poles(&fx.zeta, &candidates);
        let beta_pole = poles
            .iter()
            .find(|p| p.real_part == rat(-1, 3))
            .expect("candidate at beta");
        assert_eq!(beta_pole.certified_multiplicity, 2);
    }

    #[test]
    fn multiplicities_do_not_depend_on_the_subdivision() {
        let lex = fixture("x^2 - y", "x^2*y", 5);
        let total = lex.f_gamma.minkowski_sum(&lex.g_gamma).unwrap();
        let normals = total.facet_normals();
        let candidates = pole_candidates(&normals, &lex.f_gamma, &lex.g_gamma);
        let base: Vec<u32> = certify_poles(&lex.zeta, &candidates)
            .iter()
            .map(|p| p.certified_multiplicity)
            .collect();
        // Rebuild over a different ordering and compare.
        let field = BaseField::new(5).unwrap();
        let fan = SubordinateFan::build(&total, FanOrdering::ReverseLex).unwrap();
        let pf = parse_polynomial("x^2 - y", &["x", "y"]).unwrap();
        let pg = parse_polynomial("x^2*y", &["x", "y"]).unwrap();
        let mapping = PolyMapping::new(vec![pf, pg], &field, true).unwrap();
        let counts = count_all_strata(&mapping, &fan, &field, DEFAULT_TORUS_BUDGET).unwrap();
        let z = assemble_z_rational(
            &lex.f_gamma,
            &lex.g_gamma,
            &fan,
            &counts,
            &field,
            true,
            false,
        )
        .unwrap();
        let other: Vec<u32> = certify_poles(&z.zeta, &candidates)
            .iter()
            .map(|p| p.certified_multiplicity)
            .collect();
        assert_eq!(base, other);
    }

    #[test]
    fn no_pole_inside_the_band() {
        let fx = fixture("x^2 - y", "x^2*y", 3);
        let total = fx.f_gamma.minkowski_sum(&fx.g_gamma).unwrap();
        let normals = total.facet_normals();
        let (t_plus, t_minus) = classify_normals(&normals, &fx.f_gamma, &fx.g_gamma);
        let report = band(&t_plus, &t_minus, &fx.f_gamma, &fx.g_gamma, &fx.fan);
        let candidates = pole_candidates(&normals, &fx.f_gamma, &fx.g_gamma);
        for p in certify_poles(&fx.zeta, &candidates) {
            if p.certified_multiplicity > 0 {
                assert!(
                    p.real_part <= report.beta_tilde || p.real_part >= report.alpha_tilde,
                    "pole {} strictly inside the band",
                    p.real_part
                );
            }
        }
    }

    #[test]
    fn cancelled_factor_is_not_a_pole() {
        // A candidate whose binomial disappears in canonical form gets
        // multiplicity zero: certify against a function with no such factor.
        let fx = fixture("x^2 - y", "x^2*y", 5);
        let fake = vec![(rat(7, 3), 3, PoleSource::TrivialPlus)];
        let poles = certify_poles(&fx.zeta, &fake);
        assert_eq!(poles[0].certified_multiplicity, 0);
    }
}
