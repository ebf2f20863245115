//! Run orchestration: from a validated problem spec to a structured report.
//! Deterministic for a fixed spec, including the fan seed.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use igusa_core::fan::{FanOrdering, SubordinateFan};
use igusa_core::oracle;
use igusa_core::poles;
use igusa_core::polyhedra::NewtonPolyhedron;
use igusa_core::polyring::{self, parse_polynomial, BaseField, IntegerPolynomial, PolyMapping};
use igusa_core::torus;
use igusa_core::zeta::{self, AssembledZeta};

use crate::report::*;
use crate::spec::{Mode, ProblemSpec};

/// Run failures that map to dedicated process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] igusa_core::Error),
    #[error("{0}")]
    Validation(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Core(igusa_core::Error::DegenerateMapping) => 2,
            RunError::Core(igusa_core::Error::BudgetExceeded { .. }) => 3,
            _ => 1,
        }
    }
}

fn dump_polyhedron(p: &NewtonPolyhedron) -> PolyhedronDump {
    PolyhedronDump {
        vertices: p.vertices().to_vec(),
        facets: p
            .facets()
            .iter()
            .map(|f| FacetDump {
                normal: f.normal.clone(),
                offset: f.offset,
            })
            .collect(),
    }
}

fn dump_zeta(z: &AssembledZeta) -> ZetaDump {
    ZetaDump {
        numerator: z.zeta.numerator().to_string(),
        denominator: z
            .zeta
            .denominator()
            .iter()
            .map(|(f, &m)| DenominatorFactorDump {
                qexp: f.qexp,
                texp: f.texp.clone(),
                multiplicity: m,
            })
            .collect(),
        certified: z.certified,
    }
}

fn mask_to_indices(mask: usize, r: usize) -> Vec<usize> {
    (0..r).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

fn ordering_label(o: FanOrdering) -> String {
    match o {
        FanOrdering::Lex => "lex".to_string(),
        FanOrdering::ReverseLex => "reverse-lex".to_string(),
        FanOrdering::Seeded(s) => format!("seeded({s})"),
    }
}

pub fn run(spec: &ProblemSpec) -> Result<RunReport, RunError> {
    let field = BaseField::new(spec.p)?;
    let var_refs: Vec<&str> = spec.variables.iter().map(|s| s.as_str()).collect();
    let components: Vec<IntegerPolynomial> = spec
        .polynomials
        .iter()
        .map(|text| parse_polynomial(text, &var_refs))
        .collect::<igusa_core::Result<_>>()?;
    let mapping = PolyMapping::new(components.clone(), &field, true)?;
    let r = mapping.len();

    let gammas: Vec<NewtonPolyhedron> = components
        .iter()
        .map(NewtonPolyhedron::from_polynomial)
        .collect::<igusa_core::Result<_>>()?;
    let mut product = gammas[0].clone();
    for g in &gammas[1..] {
        product = product.minkowski_sum(g)?;
    }

    let fan = SubordinateFan::build(&product, spec.fan_ordering)?;
    let counts = torus::count_all_strata(&mapping, &fan, &field, spec.torus_budget)?;
    let nondeg = torus::check_nondegeneracy(&mapping, &fan, &field, spec.torus_budget)?;

    let assembled = match spec.mode {
        Mode::Multivariate => zeta::assemble_z(
            &mapping,
            &fan,
            &counts,
            &field,
            nondeg.verdict,
            spec.override_degenerate,
        )?,
        Mode::Rational => zeta::assemble_z_rational(
            &gammas[0],
            &gammas[1],
            &fan,
            &counts,
            &field,
            nondeg.verdict,
            spec.override_degenerate,
        )?,
    };

    let fan_dump: Vec<ConeDump> = fan
        .cones()
        .iter()
        .enumerate()
        .map(|(id, cone)| ConeDump {
            id,
            generators: cone.generators.clone(),
            barycenter: cone.barycenter.clone(),
            face_functions: components
                .iter()
                .map(|h| {
                    let face = h
                        .face_function(&cone.barycenter)
                        .expect("barycenter dimension");
                    polyring::render_with_vars(&face, &spec.variables)
                })
                .collect(),
        })
        .collect();

    let cone_table: Vec<ConeTermDump> = assembled
        .terms
        .iter()
        .map(|t| ConeTermDump {
            cone: match t.cone {
                None => "origin".to_string(),
                Some(i) => i.to_string(),
            },
            l_factor: t.l_part.to_string(),
            s_factor: t.s_part.to_string(),
        })
        .collect();

    let (band_dump, poles_dump, band_interval) = match spec.mode {
        Mode::Multivariate => (None, None, None),
        Mode::Rational => {
            let normals = product.facet_normals();
            let (t_plus, t_minus) = poles::classify_normals(&normals, &gammas[0], &gammas[1]);
            let band = poles::band(&t_plus, &t_minus, &gammas[0], &gammas[1], &fan);
            let candidates = poles::pole_candidates(&normals, &gammas[0], &gammas[1]);
            let certified = poles::certify_poles(&assembled.zeta, &candidates);
            let band_interval = (band.beta_tilde.clone(), band.alpha_tilde.clone());
            let dump = BandDump {
                t_plus: band.t_plus.clone(),
                t_minus: band.t_minus.clone(),
                alpha: band
                    .alpha
                    .as_ref()
                    .map(|a| a.to_string())
                    .unwrap_or_else(|| "+inf".to_string()),
                beta: band
                    .beta
                    .as_ref()
                    .map(|b| b.to_string())
                    .unwrap_or_else(|| "-inf".to_string()),
                alpha_tilde: band.alpha_tilde.to_string(),
                beta_tilde: band.beta_tilde.to_string(),
                rho: band.rho,
                kappa: band.kappa,
            };
            let poles_dump: Vec<PoleDump> = certified
                .iter()
                .map(|p| PoleDump {
                    real_part: p.real_part.to_string(),
                    period_c: p.period_c,
                    source: match &p.source {
                        poles::PoleSource::Normal(w) => format!(
                            "normal ({})",
                            w.iter()
                                .map(|x| x.to_string())
                                .collect::<Vec<_>>()
                                .join(",")
                        ),
                        poles::PoleSource::TrivialPlus => "family at +1".to_string(),
                        poles::PoleSource::TrivialMinus => "family at -1".to_string(),
                    },
                    multiplicity: p.certified_multiplicity,
                })
                .collect();
            (Some(dump), Some(poles_dump), Some(band_interval))
        }
    };

    let oracle_dump = if spec.oracle_level > 0 {
        Some(run_oracle_rows(
            spec,
            &components,
            &field,
            &assembled,
            band_interval.as_ref(),
        )?)
    } else {
        None
    };

    Ok(RunReport {
        report_version: REPORT_VERSION,
        mode: match spec.mode {
            Mode::Multivariate => "multivariate".to_string(),
            Mode::Rational => "rational".to_string(),
        },
        variables: spec.variables.clone(),
        prime: spec.p,
        polynomials: components
            .iter()
            .map(|h| polyring::render_with_vars(h, &spec.variables))
            .collect(),
        fan_ordering: ordering_label(spec.fan_ordering),
        newton: NewtonSection {
            components: gammas.iter().map(dump_polyhedron).collect(),
            product: dump_polyhedron(&product),
        },
        fan: fan_dump,
        nondegeneracy: NondegeneracyDump {
            verdict: nondeg.verdict,
            witnesses: nondeg
                .witnesses
                .iter()
                .map(|w| WitnessDump {
                    cone: w.cone,
                    vanishing: mask_to_indices(w.vanishing, r),
                    point: w.point.clone(),
                    rank: w.rank,
                })
                .collect(),
        },
        cone_table,
        zeta: dump_zeta(&assembled),
        band: band_dump,
        poles: poles_dump,
        oracle: oracle_dump,
    })
}

const ORACLE_DIGITS: u32 = 50;

fn run_oracle_rows(
    spec: &ProblemSpec,
    components: &[IntegerPolynomial],
    field: &BaseField,
    assembled: &AssembledZeta,
    band: Option<&(BigRational, BigRational)>,
) -> Result<OracleDump, RunError> {
    let (s0_scalar, s_vector) = match spec.mode {
        Mode::Rational => {
            let (lo, hi) = band.expect("band computed in rational mode");
            let s0 = match &spec.oracle_s0 {
                Some(s) => s.clone(),
                None => {
                    // Default to the midpoint of the band, nudged off zero.
                    let mid = (lo + hi) / BigRational::from_integer(2.into());
                    if mid.is_zero() {
                        hi / BigRational::from_integer(2.into())
                    } else {
                        mid
                    }
                }
            };
            (s0.clone(), vec![s0.clone(), -s0])
        }
        Mode::Multivariate => {
            let s0 = spec
                .oracle_s0
                .clone()
                .unwrap_or_else(BigRational::one);
            if !s0.is_positive() {
                return Err(RunError::Validation(
                    "oracle point must be positive in multivariate mode".to_string(),
                ));
            }
            (s0.clone(), vec![s0; components.len()])
        }
    };

    let symbolic = match spec.mode {
        Mode::Rational => oracle::eval_zeta_at(&assembled.zeta, &s0_scalar),
        Mode::Multivariate => {
            let args: Vec<BigRational> = s_vector.clone();
            oracle::eval_zeta_multi_at(&assembled.zeta, &args)
        }
    };
    let symbolic = symbolic.ok_or_else(|| {
        RunError::Validation(format!(
            "symbolic zeta function has a pole at the oracle point {s0_scalar}"
        ))
    })?;

    let mut rows = Vec::new();
    for level in 1..=spec.oracle_level {
        let estimate = match spec.mode {
            Mode::Rational => {
                let (lo, hi) = band.expect("band in rational mode");
                oracle::truncated_zeta_rational(
                    &components[0],
                    &components[1],
                    &s0_scalar,
                    (lo, hi),
                    field,
                    level,
                    spec.oracle_budget,
                )?
            }
            Mode::Multivariate => oracle::truncated_zeta_mapping(
                components,
                &s_vector,
                field,
                level,
                spec.oracle_budget,
            )?,
        };
        rows.push(OracleRowDump {
            level,
            lower: estimate.lower.to_decimal(ORACLE_DIGITS),
            upper: estimate.upper.to_decimal(ORACLE_DIGITS),
            value: estimate.value().to_decimal(ORACLE_DIGITS),
            resolved_mass: estimate.resolved_mass.to_string(),
            certified: estimate.certified,
            contains_symbolic: estimate.contains(&symbolic),
        });
    }
    Ok(OracleDump {
        s0: s0_scalar.to_string(),
        symbolic_value: symbolic.to_decimal(ORACLE_DIGITS),
        rows,
    })
}
