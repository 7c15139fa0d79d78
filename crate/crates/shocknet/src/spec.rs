//! Model specification strings: laws, damage models and grids.
//!
//! ```text
//! exp:rate=1   weibull:shape=2,scale=1   linhaz:a=1,b=1   mvf:file=lambda.csv
//! binomial:p=0.1   binomial:q=0.9   one-per-shock   fatal
//! auto   0:5:200   0,0.5,1,2
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use shocknet_core::{DamageModel, FirstArrivalLaw, Grid};

use crate::{Error, Result};

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

/// Splits `name:k=v,k=v` into the name and its parameters.
fn split_spec<'a>(spec: &'a str, what: &str) -> Result<(&'a str, BTreeMap<&'a str, &'a str>)> {
    let spec = spec.trim();
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = BTreeMap::new();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("{what} `{spec}`: expected key=value, got `{item}`")))?;
        if params.insert(key.trim(), value.trim()).is_some() {
            return Err(usage(format!("{what} `{spec}`: parameter `{}` given twice", key.trim())));
        }
    }
    Ok((name.trim(), params))
}

struct Params<'a> {
    spec: &'a str,
    what: &'static str,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Params<'a> {
    fn number(&mut self, key: &str) -> Result<f64> {
        let raw = self
            .map
            .remove(key)
            .ok_or_else(|| usage(format!("{} `{}`: missing parameter `{key}`", self.what, self.spec)))?;
        raw.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| usage(format!("{} `{}`: `{key}` must be a number, got `{raw}`", self.what, self.spec)))
    }

    fn text(&mut self, key: &str) -> Result<&'a str> {
        self.map
            .remove(key)
            .ok_or_else(|| usage(format!("{} `{}`: missing parameter `{key}`", self.what, self.spec)))
    }

    fn finish(self) -> Result<()> {
        match self.map.keys().next() {
            Some(key) => Err(usage(format!("{} `{}`: unknown parameter `{key}`", self.what, self.spec))),
            None => Ok(()),
        }
    }
}

/// Parses a first-arrival law. Relative `mvf:file=` paths resolve against
/// `base_dir`.
pub fn parse_law(spec: &str, base_dir: &Path) -> Result<FirstArrivalLaw> {
    let (name, map) = split_spec(spec, "law")?;
    let mut p = Params { spec, what: "law", map };
    let law = match name {
        "exp" => FirstArrivalLaw::exponential(p.number("rate")?)?,
        "weibull" => {
            let shape = p.number("shape")?;
            FirstArrivalLaw::weibull(shape, p.number("scale")?)?
        }
        "linhaz" => {
            let a = p.number("a")?;
            FirstArrivalLaw::linear_hazard(a, p.number("b")?)?
        }
        "mvf" => {
            let path = base_dir.join(p.text("file")?);
            FirstArrivalLaw::piecewise(read_mvf(&path)?)?
        }
        other => {
            return Err(usage(format!(
                "unknown law `{other}`; expected exp, weibull, linhaz or mvf"
            )))
        }
    };
    p.finish()?;
    Ok(law)
}

/// Reads `t,Lambda` knots. A non-numeric first row is taken as a header;
/// `#` lines are comments.
pub fn read_mvf(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_mvf(&text, &path.display().to_string())
}

pub fn parse_mvf(text: &str, source_name: &str) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut knots = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize);
        let parsed: Option<Vec<f64>> = record.iter().map(|f| f.parse().ok()).collect();
        match parsed {
            Some(v) if v.len() == 2 => knots.push((v[0], v[1])),
            None if index == 0 => continue,
            _ => return Err(Error::parse(source_name, line, "expected two numbers `t,Lambda`")),
        }
    }
    if knots.is_empty() {
        return Err(Error::parse(source_name, None, "no knots"));
    }
    Ok(knots)
}

/// Parses a damage model.
pub fn parse_damage(spec: &str) -> Result<DamageModel> {
    let (name, map) = split_spec(spec, "damage")?;
    let mut p = Params { spec, what: "damage", map };
    let damage = match name {
        "binomial" => {
            let has_p = p.map.contains_key("p");
            let has_q = p.map.contains_key("q");
            match (has_p, has_q) {
                (true, false) => DamageModel::binomial(p.number("p")?)?,
                (false, true) => DamageModel::binomial(1.0 - p.number("q")?)?,
                _ => return Err(usage(format!("damage `{spec}`: give exactly one of p= or q="))),
            }
        }
        "one-per-shock" => DamageModel::OnePerShock,
        "fatal" => DamageModel::Fatal,
        other => {
            return Err(usage(format!(
                "unknown damage model `{other}`; expected binomial, one-per-shock or fatal"
            )))
        }
    };
    p.finish()?;
    Ok(damage)
}

/// A grid before it is resolved against a reliability function.
#[derive(Clone, Debug, PartialEq)]
pub enum GridSpec {
    /// Uniform points on `[0, t_max]` with `R(t_max)` below the auto target.
    Auto,
    Uniform { start: f64, end: f64, count: usize },
    Points(Vec<f64>),
}

impl GridSpec {
    pub fn resolve<F>(&self, reliability: F) -> Result<Grid>
    where
        F: FnMut(f64) -> shocknet_core::Result<f64>,
    {
        Ok(match self {
            GridSpec::Auto => Grid::auto(reliability)?,
            GridSpec::Uniform { start, end, count } => Grid::uniform(*start, *end, *count)?,
            GridSpec::Points(points) => Grid::new(points.clone())?,
        })
    }
}

/// Parses `auto`, `start:end:count` or a comma-separated list of times.
pub fn parse_grid(spec: &str) -> Result<GridSpec> {
    let spec = spec.trim();
    let bad = || usage(format!("grid `{spec}`: expected `auto`, `start:end:count` or `t1,t2,...`"));
    if spec == "auto" {
        return Ok(GridSpec::Auto);
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
        let [start, end, count] = parts[..] else { return Err(bad()) };
        return Ok(GridSpec::Uniform {
            start: start.parse().map_err(|_| bad())?,
            end: end.parse().map_err(|_| bad())?,
            count: count.parse().map_err(|_| bad())?,
        });
    }
    let points: Vec<f64> = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    Ok(GridSpec::Points(points))
}
