//! Acceptance suite: one test per criterion, each printing a PASS line when
//! its assertions hold. Criteria cover the golden worked example (zeta
//! function, per-cone table, poles, fan), the non-degeneracy fixtures, the
//! randomized property suite, and the integration-oracle agreement.
//!
//! Run with `cargo test -p igusa-core --test acceptance -- --nocapture`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use igusa_core::fan::{fundamental_points, generator_determinant, FanOrdering, SubordinateFan};
use igusa_core::oracle::{
    eval_zeta_at, eval_zeta_multi_at, truncated_zeta_mapping, truncated_zeta_rational,
    DEFAULT_ORACLE_BUDGET,
};
use igusa_core::poles::{band, certified_pole_set, certify_poles, classify_normals, pole_candidates};
use igusa_core::polyhedra::NewtonPolyhedron;
use igusa_core::polyring::{parse_polynomial, BaseField, IntegerPolynomial, PolyMapping};
use igusa_core::torus::{check_nondegeneracy, count_all_strata, CountTable, DEFAULT_TORUS_BUDGET};
use igusa_core::zeta::{
    assemble_z, assemble_z_rational, qpow, AssembledZeta, LaurentPoly, ZetaRational,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn poly2(text: &str) -> IntegerPolynomial {
    parse_polynomial(text, &["x", "y"]).unwrap()
}

struct Pipeline {
    field: BaseField,
    mapping: PolyMapping,
    gammas: Vec<NewtonPolyhedron>,
    product: NewtonPolyhedron,
    fan: SubordinateFan,
    counts: Vec<CountTable>,
    nondegenerate: bool,
}

fn pipeline(texts: &[&str], vars: &[&str], q: u64, ordering: FanOrdering) -> Pipeline {
    let field = BaseField::new(q).unwrap();
    let components: Vec<IntegerPolynomial> = texts
        .iter()
        .map(|t| parse_polynomial(t, vars).unwrap())
        .collect();
    let mapping = PolyMapping::new(components, &field, true).unwrap();
    let gammas: Vec<NewtonPolyhedron> = mapping
        .components()
        .iter()
        .map(|h| NewtonPolyhedron::from_polynomial(h).unwrap())
        .collect();
    let mut product = gammas[0].clone();
    for g in &gammas[1..] {
        product = product.minkowski_sum(g).unwrap();
    }
    let fan = SubordinateFan::build(&product, ordering).unwrap();
    let counts = count_all_strata(&mapping, &fan, &field, DEFAULT_TORUS_BUDGET).unwrap();
    let nondegenerate = check_nondegeneracy(&mapping, &fan, &field, DEFAULT_TORUS_BUDGET)
        .unwrap()
        .verdict;
    Pipeline {
        field,
        mapping,
        gammas,
        product,
        fan,
        counts,
        nondegenerate,
    }
}

fn worked_example(q: u64, ordering: FanOrdering) -> (Pipeline, AssembledZeta) {
    let p = pipeline(&["x^2 - y", "x^2*y"], &["x", "y"], q, ordering);
    let z = assemble_z_rational(
        &p.gammas[0],
        &p.gammas[1],
        &p.fan,
        &p.counts,
        &p.field,
        p.nondegenerate,
        false,
    )
    .unwrap();
    (p, z)
}

/// The printed closed form of the worked example at a concrete q, as a
/// factored rational function: numerator (q-1) q^{-2} L(q^{-s}) with
/// L = q - q^{-1} - 2 - q^{2s-4} + q^{s-3} - q^{s-2} + q^{2s-2} + q^{3s-3}
///     + 2 q^{2s-1} - q^{3s-2} - q^{3s-1} + q^{-s-1},
/// denominator (1-q^{s-1})(1-q^{-1-s})(1-q^{2s-1})(1-q^{2s-3}).
fn printed_closed_form(q: u64) -> ZetaRational {
    // Terms of L as (coefficient, q-power, t-power), where q^{as+b} is
    // q^b t^{-a}.
    let terms: [(i64, i64, i64); 12] = [
        (1, 1, 0),    // q
        (-1, -1, 0),  // -q^{-1}
        (-2, 0, 0),   // -2
        (-1, -4, -2), // -q^{2s-4}
        (1, -3, -1),  // q^{s-3}
        (-1, -2, -1), // -q^{s-2}
        (1, -2, -2),  // q^{2s-2}
        (1, -3, -3),  // q^{3s-3}
        (2, -1, -2),  // 2 q^{2s-1}
        (-1, -2, -3), // -q^{3s-2}
        (-1, -1, -3), // -q^{3s-1}
        (1, -1, 1),   // q^{-s-1}
    ];
    let mut num = LaurentPoly::zero(1);
    for (c, qe, te) in terms {
        let coeff = BigRational::from(BigInt::from(c)) * qpow(q, qe);
        num = num.add(&LaurentPoly::monomial(1, vec![te], coeff));
    }
    let scale = BigRational::from(BigInt::from(q as i64 - 1)) * qpow(q, -2);
    let mut z = ZetaRational::from_numerator(q, num.scale(&scale));
    // Denominator factors: 1-q^{s-1} => (a,b) = (-1,-1); 1-q^{-1-s} => (-1,1);
    // 1-q^{2s-1} => (-1,-2); 1-q^{2s-3} => (-3,-2).
    z.push_den_factor(-1, vec![-1]);
    z.push_den_factor(-1, vec![1]);
    z.push_den_factor(-1, vec![-2]);
    z.push_den_factor(-3, vec![-2]);
    z
}

#[test]
fn criterion_1_golden_closed_form() {
    for q in [3u64, 5, 7] {
        let (_p, z) = worked_example(q, FanOrdering::Lex);
        assert!(z.certified);
        let expected = printed_closed_form(q);
        assert!(
            z.zeta.equivalent(&expected),
            "assembled zeta differs from the printed closed form at q = {q}:\n  got {}\n  want {}",
            z.zeta,
            expected
        );
    }
    println!("criterion 1: PASS - golden closed form matches exactly at q in {{3, 5, 7}}");
}

#[test]
fn criterion_2_golden_cone_table() {
    let q = 5u64;
    let (p, z) = worked_example(q, FanOrdering::Lex);

    // Identify rows by generator sets; ids are free to differ.
    let mut by_gens: BTreeMap<Vec<Vec<i64>>, (&ZetaRational, &ZetaRational)> = BTreeMap::new();
    let mut origin_row: Option<(&ZetaRational, &ZetaRational)> = None;
    for term in &z.terms {
        match term.cone {
            None => origin_row = Some((&term.l_part, &term.s_part)),
            Some(i) => {
                let mut gens = p.fan.cones()[i].generators.clone();
                gens.sort();
                by_gens.insert(gens, (&term.l_part, &term.s_part));
            }
        }
    }
    assert_eq!(by_gens.len() + 1, 6, "six rows expected");

    // L with N_f = q-1: q^{-2}((q-1)^2 - (q-1)(1-q^{-s})/(1-q^{-1-s})).
    let l_with_nf = {
        let counts = CountTable {
            cone: None,
            counts: vec![(q - 1) * (q - 1) - (q - 1), q - 1, 0, 0],
        };
        igusa_core::zeta::l_factor_rational(&counts, &BaseField::new(q).unwrap(), 2)
    };
    // L with empty strata: q^{-2}(q-1)^2.
    let l_plain = ZetaRational::constant(q, 1, rat(16, 25));

    let expect_s = |nums: &[(i64, i64)], dens: &[(i64, i64)]| -> ZetaRational {
        let mut num = LaurentPoly::zero(1);
        for &(qe, te) in nums {
            num = num.add(&LaurentPoly::monomial(1, vec![te], qpow(q, qe)));
        }
        let mut z = ZetaRational::from_numerator(q, num);
        for &(a, b) in dens {
            z.push_den_factor(a, vec![b]);
        }
        z
    };

    let (l0, s0) = origin_row.expect("origin row present");
    assert!(l0.equivalent(&l_with_nf), "origin L row");
    assert!(s0.equivalent(&ZetaRational::one(q, 1)), "origin S = 1");

    // Ray (1,0): L plain, S = q^{-1+2s}/(1-q^{-1+2s}).
    let (l, s) = by_gens[&vec![vec![1, 0]]];
    assert!(l.equivalent(&l_plain));
    assert!(s.equivalent(&expect_s(&[(-1, -2)], &[(-1, -2)])));

    // Cone (1,0),(1,2): L plain, S = (q^{-2+2s}+q^{-4+4s}) / product.
    let (l, s) = by_gens[&vec![vec![1, 0], vec![1, 2]]];
    assert!(l.equivalent(&l_plain));
    assert!(s.equivalent(&expect_s(
        &[(-2, -2), (-4, -4)],
        &[(-1, -2), (-3, -2)]
    )));
    // Exactly the two printed numerator terms, with the printed exponents.
    assert_eq!(s.numerator().num_terms(), 2);
    let monos: Vec<(Vec<i64>, BigRational)> = s
        .numerator()
        .terms()
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect();
    assert!(monos.contains(&(vec![-2], qpow(q, -2))));
    assert!(monos.contains(&(vec![-4], qpow(q, -4))));

    // Ray (1,2): L with N_f, S = q^{-3+2s}/(1-q^{-3+2s}).
    let (l, s) = by_gens[&vec![vec![1, 2]]];
    assert!(l.equivalent(&l_with_nf));
    assert!(s.equivalent(&expect_s(&[(-3, -2)], &[(-3, -2)])));

    // Cone (0,1),(1,2): L plain, S = q^{-4+3s}/((1-q^{-3+2s})(1-q^{-1+s})).
    let (l, s) = by_gens[&vec![vec![0, 1], vec![1, 2]]];
    assert!(l.equivalent(&l_plain));
    assert!(s.equivalent(&expect_s(&[(-4, -3)], &[(-3, -2), (-1, -1)])));

    // Ray (0,1): L plain, S = q^{-1+s}/(1-q^{-1+s}).
    let (l, s) = by_gens[&vec![vec![0, 1]]];
    assert!(l.equivalent(&l_plain));
    assert!(s.equivalent(&expect_s(&[(-1, -1)], &[(-1, -1)])));

    println!("criterion 2: PASS - per-cone table matches the printed rows at q = 5");
}

#[test]
fn criterion_3_pole_set_and_band() {
    let q = 5u64;
    let (p, z) = worked_example(q, FanOrdering::Lex);
    let normals = p.product.facet_normals();
    let (t_plus, t_minus) = classify_normals(&normals, &p.gammas[0], &p.gammas[1]);
    let report = band(&t_plus, &t_minus, &p.gammas[0], &p.gammas[1], &p.fan);
    let candidates = pole_candidates(&normals, &p.gammas[0], &p.gammas[1]);
    let poles = certify_poles(&z.zeta, &candidates);

    let parts = certified_pole_set(&poles);
    assert_eq!(parts, vec![rat(-1, 1), rat(1, 2), rat(1, 1), rat(3, 2)]);

    assert_eq!(report.alpha, Some(rat(1, 2)));
    assert_eq!(report.kappa, 1);
    let alpha_pole = poles.iter().find(|p| p.real_part == rat(1, 2)).unwrap();
    assert_eq!(alpha_pole.certified_multiplicity, 1);

    assert_eq!(report.beta_tilde, rat(-1, 1));
    assert_eq!(report.alpha_tilde, rat(1, 2));
    for pole in &poles {
        if pole.certified_multiplicity > 0 {
            assert!(
                pole.real_part <= report.beta_tilde || pole.real_part >= report.alpha_tilde,
                "certified pole {} inside the open band",
                pole.real_part
            );
        }
    }
    println!(
        "criterion 3: PASS - poles {{-1, 1/2, 1, 3/2}}, alpha = 1/2 with multiplicity 1, band clean"
    );
}

#[test]
fn criterion_4_fan_table() {
    let (p, _z) = worked_example(5, FanOrdering::Lex);
    let mut rows: Vec<(Vec<Vec<i64>>, String, String)> = p
        .fan
        .cones()
        .iter()
        .map(|cone| {
            let mut gens = cone.generators.clone();
            gens.sort();
            let f_face = p.mapping.components()[0]
                .face_function(&cone.barycenter)
                .unwrap()
                .to_string();
            let g_face = p.mapping.components()[1]
                .face_function(&cone.barycenter)
                .unwrap()
                .to_string();
            (gens, f_face, g_face)
        })
        .collect();
    rows.sort();
    let expected: Vec<(Vec<Vec<i64>>, String, String)> = vec![
        (vec![vec![0, 1]], "x^2", "x^2*y"),
        (vec![vec![0, 1], vec![1, 2]], "x^2", "x^2*y"),
        (vec![vec![1, 0]], "-y", "x^2*y"),
        (vec![vec![1, 0], vec![1, 2]], "-y", "x^2*y"),
        (vec![vec![1, 2]], "x^2 - y", "x^2*y"),
    ]
    .into_iter()
    .map(|(g, f, gg)| (g, f.to_string(), gg.to_string()))
    .collect();
    assert_eq!(rows, expected);
    println!("criterion 4: PASS - fan and face-function table reproduced (up to cone relabeling)");
}

#[test]
fn criterion_5_nondegeneracy_fixtures() {
    for q in [2u64, 3, 5] {
        let p = pipeline(&["x^2 - y", "x^2*y"], &["x", "y"], q, FanOrdering::Lex);
        assert!(p.nondegenerate, "worked example must pass at q = {q}");
    }
    for (f, g) in [("x*y", "x^2*y"), ("x^2", "y^3"), ("x*y^2", "x^3*y")] {
        let p = pipeline(&[f, g], &["x", "y"], 3, FanOrdering::Lex);
        assert!(p.nondegenerate, "monomial mapping ({f}, {g}) vacuously passes");
    }
    let field = BaseField::new(3).unwrap();
    let mapping = PolyMapping::new(vec![poly2("(x+y)^2"), poly2("x*y")], &field, true).unwrap();
    let gamma_f = NewtonPolyhedron::from_polynomial(&mapping.components()[0]).unwrap();
    let gamma_g = NewtonPolyhedron::from_polynomial(&mapping.components()[1]).unwrap();
    let product = gamma_f.minkowski_sum(&gamma_g).unwrap();
    let fan = SubordinateFan::build(&product, FanOrdering::Lex).unwrap();
    let report = check_nondegeneracy(&mapping, &fan, &field, DEFAULT_TORUS_BUDGET).unwrap();
    assert!(!report.verdict);
    assert!(!report.witnesses.is_empty());
    println!("criterion 5: PASS - non-degeneracy verdicts on all fixtures");
}

/// Deterministic pseudorandom stream for the instance generator.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// A random small polynomial: 1..=max_terms support points with exponents
/// in 0..=3 (origin excluded) and coefficients in {-2,-1,1,2}.
fn random_poly(rng: &mut Rng, nvars: usize, max_terms: usize) -> IntegerPolynomial {
    loop {
        let terms = 1 + rng.below(max_terms as u64) as usize;
        let mut pairs: Vec<(Vec<u32>, BigInt)> = Vec::new();
        for _ in 0..terms {
            let exps: Vec<u32> = (0..nvars).map(|_| rng.below(4) as u32).collect();
            if exps.iter().all(|&e| e == 0) {
                continue;
            }
            let c = [-2i64, -1, 1, 2][rng.below(4) as usize];
            pairs.push((exps, BigInt::from(c)));
        }
        let p = IntegerPolynomial::from_terms(nvars, pairs).unwrap();
        if !p.is_zero() && !p.is_constant() && p.vanishes_at_origin() {
            return p;
        }
    }
}

#[test]
fn criterion_6_property_suite() {
    let mut rng = Rng(0x1d_2026);
    let mut instances = 0;
    while instances < 24 {
        let q = [3u64, 5][rng.below(2) as usize];
        let nvars = [2usize, 3][rng.below(2) as usize];
        let field = BaseField::new(q).unwrap();
        let f = random_poly(&mut rng, nvars, 5);
        let g = random_poly(&mut rng, nvars, 5);
        let Ok(mapping) = PolyMapping::new(vec![f.clone(), g.clone()], &field, true) else {
            continue;
        };
        instances += 1;

        let gamma_f = NewtonPolyhedron::from_polynomial(&f).unwrap();
        let gamma_g = NewtonPolyhedron::from_polynomial(&g).unwrap();
        let product = gamma_f.minkowski_sum(&gamma_g).unwrap();

        // (b) additivity of the weight minimum and of faces under the sum.
        for _ in 0..6 {
            let a: Vec<i64> = (0..nvars).map(|_| rng.below(7) as i64).collect();
            assert_eq!(
                product.d_value(&a),
                gamma_f.d_value(&a) + gamma_g.d_value(&a),
                "weight additivity at {a:?}"
            );
            let face_sum = {
                let ff = product.first_meet_locus(&a);
                let mut pts: Vec<Vec<i64>> = ff
                    .vertex_indices
                    .iter()
                    .map(|&i| product.vertices()[i].clone())
                    .collect();
                pts.sort();
                pts
            };
            let mut pairwise: Vec<Vec<i64>> = Vec::new();
            let ffv = gamma_f.first_meet_locus(&a);
            let ggv = gamma_g.first_meet_locus(&a);
            for &i in &ffv.vertex_indices {
                for &j in &ggv.vertex_indices {
                    let s: Vec<i64> = gamma_f.vertices()[i]
                        .iter()
                        .zip(&gamma_g.vertices()[j])
                        .map(|(x, y)| x + y)
                        .collect();
                    pairwise.push(s);
                }
            }
            pairwise.sort();
            pairwise.dedup();
            // Vertices of the sum face are among pairwise sums of the
            // factor faces' vertices, and every pairwise sum lies on the
            // face (it attains the minimal weight).
            for v in &face_sum {
                assert!(pairwise.contains(v), "face additivity at {a:?}");
            }
            let d = product.d_value(&a);
            for s in &pairwise {
                assert_eq!(
                    s.iter().zip(&a).map(|(x, w)| x * w).sum::<i64>(),
                    d,
                    "pairwise sums attain the minimum at {a:?}"
                );
            }
        }

        let fan_a = SubordinateFan::build(&product, FanOrdering::Lex).unwrap();
        let fan_b = SubordinateFan::build(&product, FanOrdering::ReverseLex).unwrap();

        // (c) the fan partitions a lattice box.
        let bound = 6i64;
        let mut boxpt = vec![0i64; nvars];
        loop {
            if !boxpt.iter().all(|&x| x == 0) {
                let hits = fan_a
                    .cones()
                    .iter()
                    .filter(|c| c.contains_strictly(&boxpt))
                    .count();
                assert_eq!(hits, 1, "partition at {boxpt:?}");
            }
            let mut i = nvars;
            let mut done = true;
            while i > 0 {
                i -= 1;
                boxpt[i] += 1;
                if boxpt[i] <= bound {
                    done = false;
                    break;
                }
                boxpt[i] = 0;
            }
            if done {
                break;
            }
        }

        // (a) stratum counts sum to the torus size for every cone.
        let counts_a = count_all_strata(&mapping, &fan_a, &field, DEFAULT_TORUS_BUDGET).unwrap();
        let torus = (q - 1).pow(nvars as u32);
        for table in &counts_a {
            assert_eq!(table.total(), torus, "torus partition per cone");
        }

        // (e) simple full-dimensional cones produce one numerator term.
        for cone in fan_a.cones() {
            if cone.dim() == nvars {
                if let Some(det) = generator_determinant(cone) {
                    let points = fundamental_points(cone);
                    assert_eq!(BigInt::from(points.len()), det, "parallelepiped count");
                    if det == BigInt::one() {
                        assert_eq!(points.len(), 1);
                    }
                }
            }
        }

        // (d) + (f): the zeta function does not depend on the subdivision,
        // and the two assembly routes agree under specialization. The
        // identities are formula-level, so degenerate instances run with
        // the override and stay informative.
        let counts_b = count_all_strata(&mapping, &fan_b, &field, DEFAULT_TORUS_BUDGET).unwrap();
        let za = assemble_z_rational(
            &gamma_f, &gamma_g, &fan_a, &counts_a, &field, true, true,
        )
        .unwrap();
        let zb = assemble_z_rational(
            &gamma_f, &gamma_g, &fan_b, &counts_b, &field, true, true,
        )
        .unwrap();
        assert!(
            za.zeta.equivalent(&zb.zeta),
            "fan independence for f = {f}, g = {g}, q = {q}"
        );
        let multi = assemble_z(&mapping, &fan_a, &counts_a, &field, true, true).unwrap();
        assert!(
            multi.zeta.specialize(&[1, -1]).equivalent(&za.zeta),
            "specialization identity for f = {f}, g = {g}, q = {q}"
        );
    }
    println!("criterion 6: PASS - property suite on {instances} random instances");
}

#[test]
fn criterion_7_oracle_agreement() {
    let q = 3u64;
    let field = BaseField::new(q).unwrap();
    let level = 5;

    // Monomial fixture x*y in multivariate mode at s0 = 1: exact bracket.
    {
        let h = poly2("x*y");
        let mapping = PolyMapping::new(vec![h.clone()], &field, true).unwrap();
        let gamma = NewtonPolyhedron::from_polynomial(&h).unwrap();
        let fan = SubordinateFan::build(&gamma, FanOrdering::Lex).unwrap();
        let counts = count_all_strata(&mapping, &fan, &field, DEFAULT_TORUS_BUDGET).unwrap();
        let z = assemble_z(&mapping, &fan, &counts, &field, true, false).unwrap();
        let s0 = vec![rat(1, 1)];
        let value = eval_zeta_multi_at(&z.zeta, &s0).unwrap();
        let est = truncated_zeta_mapping(
            mapping.components(),
            &s0,
            &field,
            level,
            DEFAULT_ORACLE_BUDGET,
        )
        .unwrap();
        assert!(est.certified);
        assert!(est.contains(&value));
        // Width below 1e-2 of the value: exact tails make the width zero.
        let width_bound = value.scale(&rat(1, 100));
        assert!(est.width().le(&width_bound));
        assert!(est.width().is_zero());
    }

    // Monomial quotient x/y at s0 = 1/4: exact bracket again.
    {
        let f = poly2("x");
        let g = poly2("y");
        let p = pipeline(&["x", "y"], &["x", "y"], q, FanOrdering::Lex);
        let z = assemble_z_rational(
            &p.gammas[0],
            &p.gammas[1],
            &p.fan,
            &p.counts,
            &p.field,
            p.nondegenerate,
            false,
        )
        .unwrap();
        let s0 = rat(1, 4);
        let value = eval_zeta_at(&z.zeta, &s0).unwrap();
        let est = truncated_zeta_rational(
            &f,
            &g,
            &s0,
            (&rat(-1, 1), &rat(1, 1)),
            &field,
            level,
            DEFAULT_ORACLE_BUDGET,
        )
        .unwrap();
        assert!(est.certified);
        assert!(est.contains(&value));
        let width_bound = value.scale(&rat(1, 100));
        assert!(est.width().le(&width_bound));
        assert!(est.width().is_zero());
    }

    // The worked example at s0 = 1/4: certified bracket containing the
    // symbolic value.
    {
        let (p, z) = worked_example(q, FanOrdering::Lex);
        let s0 = rat(1, 4);
        let value = eval_zeta_at(&z.zeta, &s0).unwrap();
        let est = truncated_zeta_rational(
            &p.mapping.components()[0],
            &p.mapping.components()[1],
            &s0,
            (&rat(-1, 1), &rat(1, 2)),
            &field,
            level,
            DEFAULT_ORACLE_BUDGET,
        )
        .unwrap();
        assert!(est.certified, "monomial denominator gives certified tails");
        assert!(est.contains(&value), "symbolic value inside the bracket");
    }
    println!("criterion 7: PASS - oracle brackets agree with the symbolic values at level 5");
}
