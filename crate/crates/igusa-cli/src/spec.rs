//! Problem specification files: one TOML document per run, describing the
//! polynomials, the prime, and the run options. Command-line flags override
//! the corresponding options.

use std::str::FromStr;

use anyhow::{bail, Context};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Multivariate zeta function of a mapping (h_1, ..., h_r).
    Multivariate,
    /// Single-variable zeta function of a rational function f/g.
    Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    pub mode: Mode,
    pub variables: Vec<String>,
    pub polynomials: Vec<String>,
    pub p: u64,
    #[serde(default)]
    pub options: RawOptions,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RawOptions {
    /// "lex" (default) or "reverse-lex"; `fan_seed` switches to a seeded
    /// shuffle instead.
    pub fan_ordering: Option<String>,
    pub fan_seed: Option<u64>,
    /// Truncation level for the integration oracle; 0 or absent skips it.
    pub oracle_level: Option<u32>,
    /// Rational evaluation point for the oracle, e.g. "1/4".
    pub oracle_s0: Option<String>,
    pub override_degenerate: Option<bool>,
    pub format: Option<String>,
    pub torus_budget: Option<u64>,
    pub oracle_budget: Option<u64>,
}

/// Fully validated problem specification.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub mode: Mode,
    pub variables: Vec<String>,
    pub polynomials: Vec<String>,
    pub p: u64,
    pub fan_ordering: igusa_core::fan::FanOrdering,
    pub oracle_level: u32,
    pub oracle_s0: Option<BigRational>,
    pub override_degenerate: bool,
    pub format: OutputFormat,
    pub torus_budget: u128,
    pub oracle_budget: u128,
}

pub fn parse_rational(text: &str) -> anyhow::Result<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n = BigInt::from_str(num).with_context(|| format!("bad numerator in `{text}`"))?;
    let d = BigInt::from_str(den).with_context(|| format!("bad denominator in `{text}`"))?;
    if d == BigInt::from(0) {
        bail!("zero denominator in `{text}`");
    }
    Ok(BigRational::new(n, d))
}

impl ProblemSpec {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        let raw: RawSpec = toml::from_str(text).context("invalid spec file")?;
        Self::from_raw(raw)
    }

    pub fn from_raw(raw: RawSpec) -> anyhow::Result<Self> {
        if raw.variables.is_empty() {
            bail!("at least one variable is required");
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &raw.variables {
            if !seen.insert(v.clone()) {
                bail!("duplicate variable `{v}`");
            }
        }
        if raw.polynomials.is_empty() {
            bail!("at least one polynomial is required");
        }
        if raw.mode == Mode::Rational {
            if raw.polynomials.len() != 2 {
                bail!(
                    "rational mode requires exactly two polynomials (numerator and denominator), got {}",
                    raw.polynomials.len()
                );
            }
            if raw.variables.len() < 2 {
                bail!("rational mode requires at least two variables");
            }
        }
        if raw.polynomials.len() > raw.variables.len() {
            bail!(
                "at most n = {} polynomials are allowed, got {}",
                raw.variables.len(),
                raw.polynomials.len()
            );
        }
        let fan_ordering = match (&raw.options.fan_seed, raw.options.fan_ordering.as_deref()) {
            (Some(seed), _) => igusa_core::fan::FanOrdering::Seeded(*seed),
            (None, None | Some("lex")) => igusa_core::fan::FanOrdering::Lex,
            (None, Some("reverse-lex")) => igusa_core::fan::FanOrdering::ReverseLex,
            (None, Some(other)) => bail!("unknown fan ordering `{other}`"),
        };
        let format = match raw.options.format.as_deref() {
            None | Some("text") => OutputFormat::Text,
            Some("json") => OutputFormat::Json,
            Some(other) => bail!("unknown output format `{other}`"),
        };
        let oracle_s0 = raw
            .options
            .oracle_s0
            .as_deref()
            .map(parse_rational)
            .transpose()?;
        Ok(Self {
            mode: raw.mode,
            variables: raw.variables,
            polynomials: raw.polynomials,
            p: raw.p,
            fan_ordering,
            oracle_level: raw.options.oracle_level.unwrap_or(0),
            oracle_s0,
            override_degenerate: raw.options.override_degenerate.unwrap_or(false),
            format,
            torus_budget: raw
                .options
                .torus_budget
                .map(u128::from)
                .unwrap_or(igusa_core::torus::DEFAULT_TORUS_BUDGET),
            oracle_budget: raw
                .options
                .oracle_budget
                .map(u128::from)
                .unwrap_or(igusa_core::oracle::DEFAULT_ORACLE_BUDGET),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_rational_spec() {
        let spec = ProblemSpec::from_toml(
            r#"
mode = "rational"
variables = ["x", "y"]
polynomials = ["x^2 - y", "x^2*y"]
p = 5
"#,
        )
        .unwrap();
        assert_eq!(spec.mode, Mode::Rational);
        assert_eq!(spec.oracle_level, 0);
        assert_eq!(spec.format, OutputFormat::Text);
    }

    #[test]
    fn rational_mode_needs_two_polynomials() {
        let err = ProblemSpec::from_toml(
            r#"
mode = "rational"
variables = ["x", "y"]
polynomials = ["x^2 - y"]
p = 5
"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("exactly two"));
    }

    #[test]
    fn options_parse() {
        let spec = ProblemSpec::from_toml(
            r#"
mode = "multivariate"
variables = ["x", "y"]
polynomials = ["x*y"]
p = 3

[options]
fan-seed = 99
oracle-level = 4
oracle-s0 = "1/4"
format = "json"
"#,
        )
        .unwrap();
        assert_eq!(
            spec.fan_ordering,
            igusa_core::fan::FanOrdering::Seeded(99)
        );
        assert_eq!(spec.oracle_level, 4);
        assert_eq!(spec.oracle_s0, Some(parse_rational("1/4").unwrap()));
        assert_eq!(spec.format, OutputFormat::Json);
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("3").unwrap(), parse_rational("6/2").unwrap());
        assert_eq!(
            parse_rational("-1/4").unwrap(),
            -parse_rational("1/4").unwrap()
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
    }
}
