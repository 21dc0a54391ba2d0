//! Key-value parameters shared by flags and config files.

use fracsol::solvers::{DataKind, SourceDescriptor, TimeProfile};
use fracsol::symbols::{SpaceOperator, SpaceOperatorTerm};
use fracsol::{Complex64, Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    map: BTreeMap<String, String>,
}

fn invalid(msg: String) -> Error {
    Error::InvalidParams(msg)
}

impl Params {
    pub fn insert(&mut self, key: &str, value: String) {
        self.map.insert(key.replace('_', "-"), value);
    }

    /// Top-level scalars of the file, then those of a `[command]` table.
    pub fn from_toml(path: &Path, command: &str) -> Result<Params> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| invalid(format!("config {} is not valid TOML: {e}", path.display())))?;
        let mut p = Params::default();
        let mut take = |t: &toml::Table| -> Result<()> {
            for (k, v) in t {
                let s = match v {
                    toml::Value::String(s) => s.clone(),
                    toml::Value::Integer(i) => i.to_string(),
                    toml::Value::Float(f) => f.to_string(),
                    toml::Value::Boolean(b) => b.to_string(),
                    toml::Value::Table(_) => continue,
                    other => {
                        return Err(invalid(format!(
                            "config key {k}: unsupported value {other}"
                        )))
                    }
                };
                p.insert(k, s);
            }
            Ok(())
        };
        take(&table)?;
        if let Some(toml::Value::Table(sub)) = table.get(command) {
            take(sub)?;
        }
        Ok(p)
    }

    /// `other` wins on conflicts.
    pub fn merged(mut self, other: Params) -> Params {
        self.map.extend(other.map);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    pub fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| invalid(format!("missing required parameter --{key}")))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        parse_f64(key, self.required(key)?)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        self.get(key).map_or(Ok(default), |v| parse_f64(key, v))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        self.get(key).map_or(Ok(default), |v| {
            v.trim().parse().map_err(|_| {
                invalid(format!(
                    "--{key}: expected a non-negative integer, got {v:?}"
                ))
            })
        })
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).unwrap_or(default)
    }

    /// `re` or `re,im`.
    pub fn complex(&self, key: &str) -> Result<Complex64> {
        let v = self.required(key)?;
        let parts: Vec<&str> = v.split(',').collect();
        match parts.as_slice() {
            [re] => Ok(Complex64::new(parse_f64(key, re)?, 0.0)),
            [re, im] => Ok(Complex64::new(parse_f64(key, re)?, parse_f64(key, im)?)),
            _ => Err(invalid(format!("--{key}: expected re or re,im, got {v:?}"))),
        }
    }

    /// `lo:hi:n` or a single value.
    pub fn grid(&self, key: &str) -> Result<Vec<f64>> {
        let v = self.required(key)?;
        let parts: Vec<&str> = v.split(':').collect();
        match parts.as_slice() {
            [x] => Ok(vec![parse_f64(key, x)?]),
            [lo, hi, n] => {
                let lo = parse_f64(key, lo)?;
                let hi = parse_f64(key, hi)?;
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| invalid(format!("--{key}: bad point count in {v:?}")))?;
                if n == 0 || (n > 1 && hi <= lo) {
                    return Err(invalid(format!(
                        "--{key}: need n ≥ 1 and hi > lo, got {v:?}"
                    )));
                }
                Ok(fracsol::solvers::linspace(lo, hi, n))
            }
            _ => Err(invalid(format!("--{key}: expected lo:hi:n, got {v:?}"))),
        }
    }

    /// `mu:gamma:theta[,mu:gamma:theta...]`.
    pub fn terms(&self, key: &str) -> Result<SpaceOperator> {
        let v = self.required(key)?;
        let mut terms = Vec::new();
        for item in v.split(',') {
            let f: Vec<&str> = item.split(':').collect();
            if f.len() != 3 {
                return Err(invalid(format!(
                    "--{key}: expected mu:gamma:theta, got {item:?}"
                )));
            }
            terms.push(SpaceOperatorTerm::new(
                parse_f64(key, f[0])?,
                parse_f64(key, f[1])?,
                parse_f64(key, f[2])?,
            )?);
        }
        SpaceOperator::new(terms)
    }

    /// `dirac`, `zero` or `gaussian:center:width`.
    pub fn data(&self, key: &str, default: &str) -> Result<DataKind> {
        parse_data(key, self.str_or(key, default))
    }

    /// `none` or `<data>@exp:rate` / `<data>@const:c`.
    pub fn source(&self, key: &str) -> Result<SourceDescriptor> {
        let v = self.str_or(key, "none");
        if v == "none" {
            return Ok(SourceDescriptor::Zero);
        }
        let (space, time) = v.split_once('@').ok_or_else(|| {
            invalid(format!(
                "--{key}: expected <data>@exp:rate or <data>@const:c, got {v:?}"
            ))
        })?;
        let space = parse_data(key, space)?;
        let time = match time.split_once(':') {
            Some(("exp", r)) => TimeProfile::Exponential {
                rate: parse_f64(key, r)?,
            },
            Some(("const", c)) => TimeProfile::Constant(parse_f64(key, c)?),
            _ => return Err(invalid(format!("--{key}: unknown time profile {time:?}"))),
        };
        Ok(SourceDescriptor::Separable { space, time })
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| invalid(format!("--{key}: expected a number, got {v:?}")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(format!("--{key}: value must be finite, got {v:?}")))
    }
}

fn parse_data(key: &str, v: &str) -> Result<DataKind> {
    let f: Vec<&str> = v.split(':').collect();
    let kind = match f.as_slice() {
        ["dirac"] => DataKind::Dirac,
        ["zero"] => DataKind::Zero,
        ["gaussian", c, w] => DataKind::Gaussian {
            center: parse_f64(key, c)?,
            width: parse_f64(key, w)?,
        },
        _ => {
            return Err(invalid(format!(
                "--{key}: expected dirac, zero or gaussian:c:w, got {v:?}"
            )))
        }
    };
    kind.validate()?;
    Ok(kind)
}
