//! Structured run report and its two renderings: a stable JSON tree (the
//! machine-readable golden format, version field included) and a
//! human-readable text layout with the fan and per-cone tables.

use serde::{Deserialize, Serialize};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub report_version: u32,
    pub mode: String,
    pub variables: Vec<String>,
    pub prime: u64,
    /// Canonical text of the inputs, in declaration order.
    pub polynomials: Vec<String>,
    pub fan_ordering: String,
    pub newton: NewtonSection,
    pub fan: Vec<ConeDump>,
    pub nondegeneracy: NondegeneracyDump,
    /// One row per cone plus the origin row, in report order.
    pub cone_table: Vec<ConeTermDump>,
    pub zeta: ZetaDump,
    /// Present in rational mode only.
    pub band: Option<BandDump>,
    pub poles: Option<Vec<PoleDump>>,
    pub oracle: Option<OracleDump>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NewtonSection {
    pub components: Vec<PolyhedronDump>,
    /// The Minkowski sum of the component polyhedra.
    pub product: PolyhedronDump,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolyhedronDump {
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<FacetDump>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FacetDump {
    pub normal: Vec<i64>,
    pub offset: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConeDump {
    pub id: usize,
    pub generators: Vec<Vec<i64>>,
    pub barycenter: Vec<i64>,
    /// Face function of each input polynomial at the barycenter.
    pub face_functions: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct NondegeneracyDump {
    pub verdict: bool,
    pub witnesses: Vec<WitnessDump>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct WitnessDump {
    /// Cone id, or null for the origin.
    pub cone: Option<usize>,
    /// 1-based indices of the vanishing components.
    pub vanishing: Vec<usize>,
    pub point: Vec<u64>,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConeTermDump {
    /// "origin" or the cone id as a string.
    pub cone: String,
    pub l_factor: String,
    pub s_factor: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ZetaDump {
    /// Sorted t-power rendering of the numerator.
    pub numerator: String,
    /// Sorted factor list; each entry is `1 - q^qexp * t^texp`.
    pub denominator: Vec<DenominatorFactorDump>,
    /// False when the degenerate override forced assembly.
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DenominatorFactorDump {
    pub qexp: i64,
    pub texp: Vec<i64>,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BandDump {
    pub t_plus: Vec<Vec<i64>>,
    pub t_minus: Vec<Vec<i64>>,
    /// Exact rationals as strings; "+inf" / "-inf" for empty sides.
    pub alpha: String,
    pub beta: String,
    pub alpha_tilde: String,
    pub beta_tilde: String,
    pub rho: u32,
    pub kappa: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PoleDump {
    pub real_part: String,
    /// Imaginary period `2*pi / (c ln q)` encoded by the integer c.
    pub period_c: i64,
    pub source: String,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OracleDump {
    pub s0: String,
    pub symbolic_value: String,
    pub rows: Vec<OracleRowDump>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OracleRowDump {
    pub level: u32,
    pub lower: String,
    pub upper: String,
    pub value: String,
    pub resolved_mass: String,
    pub certified: bool,
    pub contains_symbolic: bool,
}

pub fn to_json(report: &RunReport) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

fn vec_str(v: &[i64]) -> String {
    format!(
        "({})",
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    )
}

fn vecs_str(vs: &[Vec<i64>]) -> String {
    vs.iter().map(|v| vec_str(v)).collect::<Vec<_>>().join(" ")
}

fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let fmt_row = |cells: &[String], widths: &[usize]| -> String {
        cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join(" | ")
    };
    let head: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    out.push_str(&fmt_row(&head, &widths));
    out.push('\n');
    out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 3 * (widths.len() - 1)));
    out.push('\n');
    for row in rows {
        out.push_str(&fmt_row(row, &widths));
        out.push('\n');
    }
    out
}

pub fn to_text(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "problem: {} mode, p = {}, variables {}\n",
        report.mode,
        report.prime,
        report.variables.join(", ")
    ));
    for (i, poly) in report.polynomials.iter().enumerate() {
        let name = if report.mode == "rational" {
            ["f", "g"][i].to_string()
        } else {
            format!("h{}", i + 1)
        };
        out.push_str(&format!("  {name} = {poly}\n"));
    }
    out.push_str(&format!("fan ordering: {}\n", report.fan_ordering));

    out.push_str("\n== newton polyhedra ==\n");
    for (i, p) in report.newton.components.iter().enumerate() {
        out.push_str(&format!(
            "component {}: vertices {}\n",
            i + 1,
            vecs_str(&p.vertices)
        ));
        for f in &p.facets {
            out.push_str(&format!(
                "  facet <{}, x> >= {}\n",
                vec_str(&f.normal),
                f.offset
            ));
        }
    }
    out.push_str(&format!(
        "product: vertices {}\n",
        vecs_str(&report.newton.product.vertices)
    ));
    for f in &report.newton.product.facets {
        out.push_str(&format!(
            "  facet <{}, x> >= {}\n",
            vec_str(&f.normal),
            f.offset
        ));
    }

    out.push_str("\n== subordinate simplicial fan ==\n");
    let rows: Vec<Vec<String>> = report
        .fan
        .iter()
        .map(|c| {
            let mut row = vec![
                c.id.to_string(),
                vecs_str(&c.generators),
                vec_str(&c.barycenter),
            ];
            row.extend(c.face_functions.iter().cloned());
            row
        })
        .collect();
    let mut headers = vec!["cone", "generators", "barycenter"];
    let face_headers: Vec<String> = (0..report.polynomials.len())
        .map(|i| format!("face of #{}", i + 1))
        .collect();
    headers.extend(face_headers.iter().map(|s| s.as_str()));
    out.push_str(&table(&headers, &rows));

    out.push_str("\n== non-degeneracy ==\n");
    if report.nondegeneracy.verdict {
        out.push_str("verdict: non-degenerate (all cone barycenters and the origin)\n");
    } else {
        out.push_str(&format!(
            "verdict: DEGENERATE ({} witnesses)\n",
            report.nondegeneracy.witnesses.len()
        ));
        for w in report.nondegeneracy.witnesses.iter().take(10) {
            out.push_str(&format!(
                "  cone {:?}, vanishing {:?}, point {:?}, rank {}\n",
                w.cone, w.vanishing, w.point, w.rank
            ));
        }
    }

    out.push_str("\n== cone contributions ==\n");
    let rows: Vec<Vec<String>> = report
        .cone_table
        .iter()
        .map(|t| vec![t.cone.clone(), t.l_factor.clone(), t.s_factor.clone()])
        .collect();
    out.push_str(&table(&["cone", "L", "S"], &rows));

    out.push_str("\n== zeta function ==\n");
    out.push_str(&format!("numerator: {}\n", report.zeta.numerator));
    if report.zeta.denominator.is_empty() {
        out.push_str("denominator: 1\n");
    } else {
        out.push_str("denominator factors (1 - q^a t^b):\n");
        for f in &report.zeta.denominator {
            out.push_str(&format!(
                "  a = {}, b = {}, multiplicity {}\n",
                f.qexp,
                vec_str(&f.texp),
                f.multiplicity
            ));
        }
    }
    if !report.zeta.certified {
        out.push_str("NOTE: formula not certified by non-degeneracy (override used)\n");
    }

    if let Some(band) = &report.band {
        out.push_str("\n== band and poles ==\n");
        out.push_str(&format!(
            "T+ = {{{}}}, T- = {{{}}}\n",
            vecs_str(&band.t_plus),
            vecs_str(&band.t_minus)
        ));
        out.push_str(&format!(
            "alpha = {}, beta = {}, holomorphic band ({}, {}), kappa = {}, rho = {}\n",
            band.alpha, band.beta, band.beta_tilde, band.alpha_tilde, band.kappa, band.rho
        ));
    }
    if let Some(poles) = &report.poles {
        let certified: Vec<&PoleDump> = poles.iter().filter(|p| p.multiplicity > 0).collect();
        if certified.is_empty() {
            out.push_str("no poles outside trivial families\n");
        } else {
            let rows: Vec<Vec<String>> = poles
                .iter()
                .map(|p| {
                    vec![
                        p.real_part.clone(),
                        p.source.clone(),
                        p.period_c.to_string(),
                        p.multiplicity.to_string(),
                    ]
                })
                .collect();
            out.push_str(&table(
                &["real part", "source", "period c", "multiplicity"],
                &rows,
            ));
        }
    }

    if let Some(oracle) = &report.oracle {
        out.push_str("\n== integration oracle ==\n");
        out.push_str(&format!(
            "s0 = {}, symbolic value = {}\n",
            oracle.s0, oracle.symbolic_value
        ));
        let rows: Vec<Vec<String>> = oracle
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.level.to_string(),
                    r.lower.clone(),
                    r.upper.clone(),
                    r.resolved_mass.clone(),
                    if r.certified { "yes" } else { "heuristic" }.to_string(),
                    if r.contains_symbolic { "yes" } else { "NO" }.to_string(),
                ]
            })
            .collect();
        out.push_str(&table(
            &["level", "lower", "upper", "resolved", "certified", "contains Z"],
            &rows,
        ));
    }
    out
}
