//! CSV reports. Every file starts with optional `#` provenance lines and
//! always carries a header row.

use std::fmt::Write as _;

use num_bigint::BigInt;
use shocknet_core::reliability::HazardCurve;
use shocknet_core::signature::SignatureEstimate;
use shocknet_core::{Rational, ReliabilityCurve, SignatureKind, SignatureVector};

use crate::{Error, Result};

pub const SIGNATURE_HEADER: [&str; 5] = ["kind", "index", "numerator", "denominator", "decimal"];
pub const CURVE_HEADER: [&str; 4] = ["t", "reliability", "stderr", "truncation_bound"];
pub const HAZARD_HEADER: [&str; 4] = ["t", "reliability", "hazard", "numeric_hazard"];

/// Shortest round-trip decimal, switching to exponent notation for very
/// small or large magnitudes.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn comment_block(comments: &[String]) -> String {
    let mut out = String::new();
    for line in comments {
        for part in line.lines() {
            writeln!(out, "# {part}").unwrap();
        }
    }
    out
}

fn finish(comments: &[String], writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let body = writer.into_inner().map_err(|e| Error::Usage(e.to_string()))?;
    let mut out = comment_block(comments);
    out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
    Ok(out)
}

fn parse_kind(name: &str) -> Option<SignatureKind> {
    match name {
        "classical" => Some(SignatureKind::Classical),
        "tie" => Some(SignatureKind::Tie),
        "fatal" => Some(SignatureKind::Fatal),
        _ => None,
    }
}

/// Exact signatures, each over its least common denominator.
pub fn write_signatures(comments: &[String], signatures: &[SignatureVector]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SIGNATURE_HEADER)?;
    for sig in signatures {
        let den = sig.common_denominator();
        let nums = sig.numerators_over(&den).expect("lcm is a common multiple");
        for (i, (num, value)) in nums.iter().zip(sig.to_f64()).enumerate() {
            w.write_record([
                sig.kind().name().to_string(),
                (i + 1).to_string(),
                num.to_string(),
                den.to_string(),
                fmt_f64(value),
            ])?;
        }
    }
    finish(comments, w)
}

/// Monte Carlo signatures: hit counts over trials plus a standard error
/// column.
pub fn write_signature_estimates(comments: &[String], estimates: &[SignatureEstimate]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = SIGNATURE_HEADER.to_vec();
    header.push("stderr");
    w.write_record(&header)?;
    for est in estimates {
        for i in 0..est.counts.len() {
            w.write_record([
                est.kind.name().to_string(),
                (i + 1).to_string(),
                est.counts[i].to_string(),
                est.trials.to_string(),
                fmt_f64(est.estimates[i]),
                fmt_f64(est.stderr[i]),
            ])?;
        }
    }
    finish(comments, w)
}

/// Reads signature rows back as exact vectors, in order of first
/// appearance of each kind. Extra columns (such as `stderr`) are ignored.
pub fn read_signatures(text: &str, source_name: &str) -> Result<Vec<SignatureVector>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    let column = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::parse(source_name, Some(1), format!("missing column `{name}`")))
    };
    let [kind_col, index_col, num_col, den_col] =
        [column("kind")?, column("index")?, column("numerator")?, column("denominator")?];

    let mut groups: Vec<(SignatureKind, Vec<Rational>)> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize);
        let err = |msg: String| Error::parse(source_name, line, msg);
        let field = |col: usize| record.get(col).unwrap_or("");
        let kind = parse_kind(field(kind_col)).ok_or_else(|| err(format!("unknown kind `{}`", field(kind_col))))?;
        let index: usize = field(index_col).parse().map_err(|_| err("index must be a positive integer".into()))?;
        let num: BigInt = field(num_col).parse().map_err(|_| err("numerator must be an integer".into()))?;
        let den: BigInt = field(den_col).parse().map_err(|_| err("denominator must be an integer".into()))?;
        if den <= BigInt::from(0) {
            return Err(err("denominator must be positive".into()));
        }
        let pos = match groups.iter().position(|(k, _)| *k == kind) {
            Some(pos) => pos,
            None => {
                groups.push((kind, Vec::new()));
                groups.len() - 1
            }
        };
        let entries = &mut groups[pos].1;
        if index != entries.len() + 1 {
            return Err(err(format!("expected {kind} index {}, got {index}", entries.len() + 1)));
        }
        entries.push(Rational::new(num, den));
    }
    if groups.is_empty() {
        return Err(Error::parse(source_name, None, "no signature rows"));
    }
    groups
        .into_iter()
        .map(|(kind, probs)| {
            SignatureVector::new(kind, probs).map_err(|e| Error::parse(source_name, None, format!("{kind} signature: {e}")))
        })
        .collect()
}

pub fn write_curve(comments: &[String], curve: &ReliabilityCurve) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CURVE_HEADER)?;
    for i in 0..curve.len() {
        let stderr = curve.stderr.as_ref().map(|s| fmt_f64(s[i])).unwrap_or_default();
        w.write_record([
            fmt_f64(curve.times[i]),
            fmt_f64(curve.reliability[i]),
            stderr,
            fmt_f64(curve.truncation_bound),
        ])?;
    }
    finish(comments, w)
}

pub fn read_curve(text: &str, source_name: &str) -> Result<ReliabilityCurve> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().ne(CURVE_HEADER) {
        return Err(Error::parse(source_name, Some(1), format!("expected header {}", CURVE_HEADER.join(","))));
    }
    let mut curve = ReliabilityCurve { times: Vec::new(), reliability: Vec::new(), stderr: None, truncation_bound: 0.0 };
    let mut stderr = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize);
        let number = |i: usize| {
            record[i].parse::<f64>().map_err(|_| Error::parse(source_name, line, format!("bad number `{}`", &record[i])))
        };
        curve.times.push(number(0)?);
        curve.reliability.push(number(1)?);
        if !record[2].is_empty() {
            stderr.push(number(2)?);
        }
        curve.truncation_bound = number(3)?;
    }
    if !stderr.is_empty() {
        if stderr.len() != curve.times.len() {
            return Err(Error::parse(source_name, None, "stderr column partially filled"));
        }
        curve.stderr = Some(stderr);
    }
    Ok(curve)
}

pub fn write_hazard(comments: &[String], curve: &HazardCurve) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HAZARD_HEADER)?;
    for p in &curve.points {
        w.write_record([fmt_f64(p.t), fmt_f64(p.reliability), fmt_f64(p.hazard), fmt_f64(p.numeric)])?;
    }
    finish(comments, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use shocknet_core::fixtures;
    use shocknet_core::signature::{classical_signature, fatal_signature, t_signature};

    #[test]
    fn signature_rows_use_common_denominator() {
        let sig = t_signature(&fixtures::series_parallel()).unwrap();
        let text = write_signatures(&["network: sp".into()], &[sig]).unwrap();
        assert_eq!(
            text,
            "# network: sp\nkind,index,numerator,denominator,decimal\n\
             tie,1,6,13,0.46153846153846156\ntie,2,7,13,0.5384615384615384\ntie,3,0,13,0\n"
        );
    }

    #[test]
    fn signatures_round_trip() {
        let net = fixtures::bridge();
        let sigs = vec![
            classical_signature(&net).unwrap(),
            t_signature(&net).unwrap(),
            fatal_signature(&net).unwrap(),
        ];
        let text = write_signatures(&[], &sigs).unwrap();
        assert_eq!(read_signatures(&text, "x").unwrap(), sigs);
    }

    #[test]
    fn signature_read_errors() {
        let bad = "kind,index,numerator,denominator,decimal\ntie,1,1,2,0.5\ntie,3,1,2,0.5\n";
        assert!(read_signatures(bad, "s").unwrap_err().to_string().contains("expected tie index 2"));
        let not_pmf = "kind,index,numerator,denominator\ntie,1,1,3\ntie,2,1,3\n";
        assert!(read_signatures(not_pmf, "s").unwrap_err().to_string().contains("sum to one"));
        assert!(read_signatures("kind,index\n", "s").is_err());
    }

    #[test]
    fn float_format() {
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(0.25), "0.25");
        assert_eq!(fmt_f64(1e-12), "1e-12");
        assert_eq!(fmt_f64(3.5e-130), "3.5e-130");
        for x in [1.0 / 3.0, 1e-7 / 3.0, 2e20 / 7.0] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn curve_round_trip() {
        let curve = ReliabilityCurve {
            times: vec![0.0, 0.5, 1.0],
            reliability: vec![1.0, 0.75, 0.125],
            stderr: Some(vec![0.0, 0.01, 0.02]),
            truncation_bound: 1e-12,
        };
        let text = write_curve(&["a".into(), "b".into()], &curve).unwrap();
        assert!(text.starts_with("# a\n# b\nt,reliability,stderr,truncation_bound\n0,1,0,1e-12\n"));
        assert_eq!(read_curve(&text, "c").unwrap(), curve);
        let exact = ReliabilityCurve { stderr: None, ..curve };
        assert_eq!(read_curve(&write_curve(&[], &exact).unwrap(), "c").unwrap(), exact);
    }
}
