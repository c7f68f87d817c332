//! Deterministic output formatting: 10-significant-digit decimals, JSON
//! emitters with stable key order, RFC-4180 CSV tables, and exact-fraction
//! parsing for the rational backend.

use std::str::FromStr;

use num_rational::BigRational;
use serde_json::{Map, Number, Value};

use crate::analysis::{AlphaBoundary, EvolutionResult, MetricFamily, PositivityStatus};
use crate::banded::BandedSymmetricMatrix;
use crate::closed_form::ClosedFormTable;
use crate::dieudonne::PseudometricSet;
use crate::error::{Error, Result};
use crate::model::{ModelParams, TridiagonalHamiltonian};
use crate::scalar::Scalar;

/// Format a float with a fixed number of significant digits in plain decimal
/// notation (no exponent), the precision used by every table this crate
/// prints.
pub fn format_significant(x: f64, sig: u32) -> String {
    assert!(sig >= 1, "need at least one significant digit");
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let decimal_exponent = |v: f64| -> i32 {
        // `{:e}` renders as `d.dddde<exp>`; the exponent after 'e' is exact,
        // unlike floating-point log10 near powers of ten.
        let sci = format!("{v:e}");
        sci.split('e').nth(1).unwrap().parse().unwrap()
    };
    let exp = decimal_exponent(x);
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    let formatted = format!("{x:.decimals$}");
    // Rounding can bump the magnitude (9.99999999996 → "10.0000000000" has
    // eleven significant digits); reformat once with the new exponent.
    let exp_after = decimal_exponent(formatted.parse().unwrap());
    if exp_after > exp {
        let decimals = (sig as i32 - 1 - exp_after).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        formatted
    }
}

/// A float as a JSON number, rounded to 10 significant digits so that output
/// bytes are reproducible across runs and platforms.
pub fn json_f64(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    let rounded: f64 = format_significant(x, 10).parse().unwrap();
    Number::from_f64(rounded)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(x.to_string()))
}

/// Scalars that know their JSON rendering: rounded numbers in the float
/// backend, exact `"p/q"` strings in the rational backend.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        json_f64(*self)
    }
}

impl JsonScalar for BigRational {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

fn scalar_array<S: JsonScalar>(values: &[S]) -> Value {
    Value::Array(values.iter().map(JsonScalar::to_json).collect())
}

fn bands_value<S: JsonScalar>(m: &BandedSymmetricMatrix<S>) -> Value {
    Value::Array((0..=m.half_width()).map(|d| scalar_array(m.band(d))).collect())
}

/// `{"n":…, "diag":[…], "super":[…], "sub":[…]}`.
pub fn hamiltonian_json<S: JsonScalar>(h: &TridiagonalHamiltonian<S>) -> Value {
    let mut root = Map::new();
    root.insert("n".into(), Value::from(h.dim()));
    root.insert("diag".into(), scalar_array(h.diag()));
    root.insert("super".into(), scalar_array(h.superdiag()));
    root.insert("sub".into(), scalar_array(h.subdiag()));
    Value::Object(root)
}

/// `{"N":…, "a":…, "energies":[…]}`.
pub fn spectrum_json(params: &ModelParams<f64>, energies: &[f64]) -> Value {
    let mut root = Map::new();
    root.insert("N".into(), Value::from(params.n()));
    root.insert("a".into(), json_f64(*params.a()));
    root.insert(
        "energies".into(),
        Value::Array(energies.iter().map(|&e| json_f64(e)).collect()),
    );
    Value::Object(root)
}

fn dump_root<S: JsonScalar>(params: &ModelParams<S>, k: usize, p: Vec<Value>) -> Map<String, Value> {
    let mut root = Map::new();
    root.insert("N".into(), Value::from(params.n()));
    root.insert("a".into(), params.a().to_json());
    root.insert("k".into(), Value::from(k));
    root.insert("P".into(), Value::Array(p));
    root
}

fn attach_assembled<S: JsonScalar>(root: &mut Map<String, Value>, family: &MetricFamily<S>) {
    root.insert("alphas".into(), scalar_array(&family.alphas));
    let mut theta = Map::new();
    theta.insert("bands".into(), bands_value(&family.theta));
    root.insert("theta".into(), Value::Object(theta));
}

/// Dump of the closed-form tables P_0..P_k: each entry carries its bands and
/// a parallel per-element provenance grid; an assembled family adds the
/// coefficient vector and Θ itself.
pub fn closed_set_json<S: JsonScalar>(
    tables: &[ClosedFormTable<S>],
    assembled: Option<&MetricFamily<S>>,
) -> Result<Value> {
    let first = tables
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty pseudometric list".into()))?;
    let params = first.params();
    let p = tables
        .iter()
        .map(|table| {
            let j = table.degree();
            let provenance: Vec<Value> = (0..=j)
                .map(|d| {
                    Value::Array(
                        (0..table.matrix().band(d).len())
                            .map(|i| {
                                let label = table
                                    .provenance(i, i + d)
                                    .expect("in-band element has provenance")
                                    .label();
                                Value::String(label.into())
                            })
                            .collect(),
                    )
                })
                .collect();
            let mut entry = Map::new();
            entry.insert("j".into(), Value::from(j));
            entry.insert("bands".into(), bands_value(table.matrix()));
            entry.insert("provenance".into(), Value::Array(provenance));
            Value::Object(entry)
        })
        .collect();
    let mut root = dump_root(params, tables.len() - 1, p);
    if let Some(family) = assembled {
        attach_assembled(&mut root, family);
    }
    Ok(Value::Object(root))
}

/// Dump of solver-produced pseudometrics. Same shape as the closed-form dump
/// minus the provenance grids (the band solver derives everything from the
/// intertwining relation itself).
pub fn oracle_set_json<S: JsonScalar>(
    params: &ModelParams<S>,
    set: &PseudometricSet<S>,
    assembled: Option<&MetricFamily<S>>,
) -> Result<Value> {
    if set.dim() != params.n() {
        return Err(Error::InvalidParameter("dimension mismatch".into()));
    }
    let p = set
        .list()
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let mut entry = Map::new();
            entry.insert("j".into(), Value::from(j));
            entry.insert("bands".into(), bands_value(m));
            Value::Object(entry)
        })
        .collect();
    let mut root = dump_root(params, set.max_half_width(), p);
    if let Some(family) = assembled {
        attach_assembled(&mut root, family);
    }
    Ok(Value::Object(root))
}

/// Wire labels for the positivity verdict.
pub fn positivity_label(status: PositivityStatus) -> &'static str {
    match status {
        PositivityStatus::PositiveDefinite => "positive-definite",
        PositivityStatus::Indefinite => "indefinite",
        PositivityStatus::Unknown => "unknown",
    }
}

/// `{"positivity":…, "alpha_max":…, "kappa2":[…]}`; `alpha_max` is null when
/// no ray was searched, and a searched ray also reports whether the cap was
/// reached instead of a true boundary.
pub fn analysis_report_json(
    positivity: PositivityStatus,
    boundary: Option<&AlphaBoundary>,
    kappa2: &[f64],
) -> Value {
    let mut root = Map::new();
    root.insert(
        "positivity".into(),
        Value::String(positivity_label(positivity).into()),
    );
    root.insert(
        "alpha_max".into(),
        boundary.map_or(Value::Null, |b| json_f64(b.alpha_max)),
    );
    if let Some(b) = boundary {
        root.insert("alpha_max_capped".into(), Value::Bool(b.capped));
    }
    root.insert(
        "kappa2".into(),
        Value::Array(kappa2.iter().map(|&w| json_f64(w)).collect()),
    );
    Value::Object(root)
}

/// JSON with sorted keys, a trailing newline, and UTF-8 throughout.
pub fn to_json_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON serialization cannot fail");
    s.push('\n');
    s
}

/// Quote a CSV field per RFC 4180 when it contains a delimiter, quote, or
/// line break.
pub fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\r') || field.contains('\n')
    {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// One CRLF-terminated CSV record.
pub fn csv_line<I, T>(fields: I) -> String
where
    I: IntoIterator<Item = T>,
    T: AsRef<str>,
{
    let mut line = fields
        .into_iter()
        .map(|f| csv_escape(f.as_ref()))
        .collect::<Vec<_>>()
        .join(",");
    line.push_str("\r\n");
    line
}

/// One spectrum table row: dimension, coupling label, sorted energies.
#[derive(Clone, Debug)]
pub struct SpectrumRow {
    pub n: usize,
    pub a_label: String,
    pub energies: Vec<f64>,
}

/// Energy table in the reference layout: one row per (N, a) pair, columns
/// E0..E{N−1}, ragged rows padded with empty fields.
pub fn spectrum_csv(rows: &[SpectrumRow]) -> String {
    let width = rows.iter().map(|r| r.energies.len()).max().unwrap_or(0);
    let mut header = vec!["N".to_string(), "a".to_string()];
    header.extend((0..width).map(|i| format!("E{i}")));
    let mut out = csv_line(&header);
    for row in rows {
        let mut fields = vec![row.n.to_string(), row.a_label.clone()];
        fields.extend(row.energies.iter().map(|&e| format_significant(e, 10)));
        fields.resize(2 + width, String::new());
        out.push_str(&csv_line(&fields));
    }
    out
}

/// A site coordinate as a CSV label: integers print bare (the default grid
/// q_s = s reads as an index), anything else at full table precision.
fn site_label(q: f64) -> String {
    if q == q.trunc() && q.abs() < 1e15 {
        format!("{}", q as i64)
    } else {
        format_significant(q, 10)
    }
}

/// Trajectory table: columns `t,s,re_psi,im_psi,rho`, time-major with the
/// site coordinates q_1 < … < q_N labelling rows inside each time block.
pub fn trajectory_csv(evolution: &EvolutionResult, sites: &[f64]) -> String {
    let mut out = csv_line(["t", "s", "re_psi", "im_psi", "rho"]);
    for (idx, &t) in evolution.times.iter().enumerate() {
        let state = &evolution.states[idx];
        let rho = &evolution.site_probabilities[idx];
        for s in 0..state.len() {
            out.push_str(&csv_line([
                format_significant(t, 10),
                site_label(sites[s]),
                format_significant(state[s].re, 10),
                format_significant(state[s].im, 10),
                format_significant(rho[s], 10),
            ]));
        }
    }
    out
}

/// Parse an exact fraction: `"p/q"` or a plain integer. Decimal notation is
/// rejected — the rational backend never rounds.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    BigRational::from_str(text.trim()).map_err(|_| {
        Error::Parse(format!(
            "`{text}` is not an exact fraction; write it as p/q or an integer"
        ))
    })
}

/// Parse a float parameter, accepting both decimal notation and exact
/// fractions (`"2.5"` and `"5/2"` name the same coupling).
pub fn parse_f64_or_ratio(text: &str) -> Result<f64> {
    let trimmed = text.trim();
    if let Ok(x) = f64::from_str(trimmed) {
        if x.is_finite() {
            return Ok(x);
        }
        return Err(Error::Parse(format!("`{text}` is not finite")));
    }
    parse_rational(trimmed).map(|q| q.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form;
    use crate::model::laguerre_hamiltonian;

    #[test]
    fn significant_digit_formatting_covers_the_table_regimes() {
        assert_eq!(format_significant(0.52766812171234, 10), "0.5276681217");
        assert_eq!(format_significant(17.645963550012, 10), "17.64596355");
        assert_eq!(format_significant(2.0, 10), "2.000000000");
        assert_eq!(format_significant(-3.25, 3), "-3.25");
        assert_eq!(format_significant(0.0012345678901, 10), "0.001234567890");
        assert_eq!(format_significant(0.0, 10), "0");
        // rounding that bumps the magnitude re-targets the digit budget
        assert_eq!(format_significant(9.99999999996, 10), "10.00000000");
        assert_eq!(format_significant(0.99999999996, 10), "1.000000000");
    }

    #[test]
    fn json_numbers_serialize_to_the_rounded_form() {
        assert_eq!(
            serde_json::to_string(&json_f64(0.52766812171234)).unwrap(),
            "0.5276681217"
        );
        assert_eq!(
            serde_json::to_string(&json_f64(17.645963550012)).unwrap(),
            "17.64596355"
        );
    }

    #[test]
    fn hamiltonian_dump_uses_exact_strings_in_the_rational_backend() {
        let params = ModelParams::new(3, BigRational::from_int(2)).unwrap();
        let h = laguerre_hamiltonian(&params);
        let v = hamiltonian_json(&h);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"diag":["3","5","7"],"n":3,"sub":["-3","-4"],"super":["-1","-2"]}"#
        );
    }

    #[test]
    fn spectrum_record_has_the_contract_shape() {
        let params = ModelParams::new(2, 2.0).unwrap();
        let v = spectrum_json(&params, &[2.0, 6.0]);
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"N":2,"a":2.0,"energies":[2.0,6.0]}"#
        );
    }

    #[test]
    fn closed_dump_marks_exceptional_elements() {
        let params = ModelParams::new(5, BigRational::from_int(1)).unwrap();
        let tables = closed_form::closed_form_set(&params, 2).unwrap();
        let v = closed_set_json(&tables, None).unwrap();
        assert_eq!(v["N"], Value::from(5));
        assert_eq!(v["a"], Value::String("1".into()));
        assert_eq!(v["k"], Value::from(2));
        let p2 = &v["P"][2];
        assert_eq!(p2["j"], Value::from(2));
        // interior diagonal comes from the general formula, the last
        // diagonal element from its dimension-boundary exception
        assert_eq!(p2["provenance"][0][1], Value::String("lemma3".into()));
        assert_eq!(p2["provenance"][0][4], Value::String("conjecture1".into()));
        // bands are exact fractions rendered as strings
        assert_eq!(p2["bands"][2][0], Value::String("1".into()));
    }

    #[test]
    fn assembled_dump_appends_coefficients_and_theta() {
        let params = ModelParams::new(5, BigRational::from_int(1)).unwrap();
        let tables = closed_form::closed_form_set(&params, 1).unwrap();
        let family =
            closed_form::assemble_metric(&params, 1, &[BigRational::from_ratio(1, 10)]).unwrap();
        let v = closed_set_json(&tables, Some(&family)).unwrap();
        assert_eq!(v["alphas"][0], Value::String("1/10".into()));
        assert_eq!(v["theta"]["bands"][1][0], Value::String("1/10".into()));
        assert_eq!(v["theta"]["bands"][0][1], Value::String("2/5".into()));
    }

    #[test]
    fn oracle_dump_matches_the_closed_shape_without_provenance() {
        let params = ModelParams::new(4, BigRational::from_int(1)).unwrap();
        let set =
            crate::dieudonne::solve_band_pseudometrics(&laguerre_hamiltonian(&params), 1).unwrap();
        let v = oracle_set_json(&params, &set, None).unwrap();
        assert_eq!(v["k"], Value::from(1));
        assert_eq!(v["P"][1]["j"], Value::from(1));
        assert!(v["P"][1].get("provenance").is_none());
    }

    #[test]
    fn analysis_report_fields_depend_on_the_ray() {
        let report = analysis_report_json(PositivityStatus::PositiveDefinite, None, &[1.0, 0.5]);
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            r#"{"alpha_max":null,"kappa2":[1.0,0.5],"positivity":"positive-definite"}"#
        );
        let boundary = AlphaBoundary {
            alpha_max: 0.25,
            capped: false,
        };
        let report =
            analysis_report_json(PositivityStatus::Indefinite, Some(&boundary), &[]);
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            r#"{"alpha_max":0.25,"alpha_max_capped":false,"kappa2":[],"positivity":"indefinite"}"#
        );
    }

    #[test]
    fn csv_records_are_rfc4180() {
        assert_eq!(csv_escape("plain"), "plain");
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(csv_line(["x", "y,z"]), "x,\"y,z\"\r\n");
    }

    #[test]
    fn spectrum_table_layout() {
        let rows = vec![
            SpectrumRow {
                n: 2,
                a_label: "2".into(),
                energies: vec![2.0, 6.0],
            },
            SpectrumRow {
                n: 1,
                a_label: "2".into(),
                energies: vec![3.0],
            },
        ];
        let csv = spectrum_csv(&rows);
        assert_eq!(
            csv,
            "N,a,E0,E1\r\n2,2,2.000000000,6.000000000\r\n1,2,3.000000000,\r\n"
        );
    }

    #[test]
    fn trajectory_table_layout() {
        let params = ModelParams::new(3, 1.0).unwrap();
        let family = closed_form::assemble_metric(&params, 0, &[]).unwrap();
        let mut initial = vec![num_complex::Complex64::new(0.0, 0.0); 3];
        initial[0] = num_complex::Complex64::new(1.0, 0.0);
        let evo =
            crate::analysis::evolve(&params, &family.theta, &initial, &[0.0, 0.5]).unwrap();
        let csv = trajectory_csv(&evo, &crate::analysis::default_sites(3));
        let lines: Vec<&str> = csv.split("\r\n").collect();
        assert_eq!(lines[0], "t,s,re_psi,im_psi,rho");
        assert_eq!(lines.len(), 1 + 2 * 3 + 1); // header + rows + trailing empty
        assert!(lines[1].starts_with("0,1,1.000000000,0,"));
        assert!(lines[4].starts_with("0.5000000000,1,"));
    }

    #[test]
    fn rational_parsing_is_strict_and_float_parsing_is_lenient() {
        assert_eq!(parse_rational("3/4").unwrap(), BigRational::from_ratio(3, 4));
        assert_eq!(parse_rational(" 7 ").unwrap(), BigRational::from_int(7));
        assert!(parse_rational("2.5").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_f64_or_ratio("2.5").unwrap(), 2.5);
        assert_eq!(parse_f64_or_ratio("5/2").unwrap(), 2.5);
        assert!(parse_f64_or_ratio("inf").is_err());
        assert!(parse_f64_or_ratio("nope").is_err());
    }
}
