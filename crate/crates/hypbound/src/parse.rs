//! Text formats accepted on the command line.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{HypError, Result};
use crate::holomaps::HoloMap;
use crate::models::Model;

/// `key=value` parameters of a `name:k=v,k=v` spec, tracking which were read.
#[derive(Debug, Default)]
pub struct Params {
    values: BTreeMap<String, String>,
    used: std::cell::RefCell<Vec<String>>,
}

impl Params {
    pub fn get_or<V: FromStr>(&self, key: &str, default: V) -> Result<V> {
        match self.values.get(key) {
            None => Ok(default),
            Some(raw) => {
                self.used.borrow_mut().push(key.to_string());
                raw.parse().map_err(|_| HypError::Usage(format!("bad value `{raw}` for `{key}`")))
            }
        }
    }

    pub fn require<V: FromStr>(&self, key: &str) -> Result<V> {
        if !self.values.contains_key(key) {
            return Err(HypError::Usage(format!("missing parameter `{key}`")));
        }
        let raw = &self.values[key];
        self.used.borrow_mut().push(key.to_string());
        raw.parse().map_err(|_| HypError::Usage(format!("bad value `{raw}` for `{key}`")))
    }

    /// Fails if any parameter was never read.
    pub fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        match self.values.keys().find(|k| !used.contains(k)) {
            Some(k) => Err(HypError::Usage(format!("unknown parameter `{k}`"))),
            None => Ok(()),
        }
    }
}

/// Splits `name:k=v,k=v` into the lower-cased name and its parameters.
pub fn split_spec(s: &str) -> Result<(String, Params)> {
    let s = s.trim();
    let (name, rest) = match s.split_once(':') {
        Some((n, r)) => (n, r),
        None => (s, ""),
    };
    let mut values = BTreeMap::new();
    for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) =
            part.split_once('=').ok_or_else(|| HypError::Usage(format!("expected key=value, got `{part}`")))?;
        values.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
    }
    Ok((name.trim().to_ascii_lowercase(), Params { values, used: Default::default() }))
}

fn parse_real(s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|_| HypError::Usage(format!("cannot parse `{s}` as a real number")))
}

/// Parses `re+imi` style complex numbers: `0.3+0.5i`, `-1e-3-2i`, `0.5i`,
/// `i`, `-i`, `2`.
pub fn parse_complex(s: &str) -> Result<Complex<f64>> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(HypError::Usage("empty complex number".into()));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(Complex::new(parse_real(&t)?, 0.0));
    };
    // last sign that is neither leading nor part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other)?,
    };
    let re = if re_part.is_empty() { 0.0 } else { parse_real(re_part)? };
    Ok(Complex::new(re, im))
}

/// A map given either as the JSON serialization of [`HoloMap`] or as a
/// shorthand: `power:m=3[,theta=…]`, `exp:m=2,c=0.5[,theta=…]`,
/// `identity`, joined by `*` for composition (`power:m=2*power:m=3`).
pub fn parse_map_spec(s: &str) -> Result<HoloMap<f64>> {
    let s = s.trim();
    if s.starts_with('{') {
        let f: HoloMap<f64> = serde_json::from_str(s).map_err(|e| HypError::Usage(format!("invalid map JSON: {e}")))?;
        f.validate()?;
        return Ok(f);
    }
    let parts: Vec<&str> = s.split('*').collect();
    if parts.len() > 1 {
        let maps = parts.iter().map(|p| parse_map_spec(p)).collect::<Result<Vec<_>>>()?;
        return HoloMap::compose(maps);
    }
    let (name, params) = split_spec(s)?;
    let f = match name.as_str() {
        "identity" | "id" => HoloMap::identity(params.get_or("model", Model::PuncturedDisc)?),
        "power" => HoloMap::punctured_power(params.get_or("theta", 0.0)?, params.require("m")?)?,
        "exp" => HoloMap::punctured_exp(params.get_or("theta", 0.0)?, params.require("m")?, params.get_or("c", 0.0)?)?,
        "translate" => HoloMap::half_plane_translate(params.require("t")?)?,
        "real_part" => HoloMap::RealPart,
        other => return Err(HypError::Usage(format!("unknown map shorthand `{other}`"))),
    };
    params.finish()?;
    Ok(f)
}

/// Comma-separated list of positive integers.
pub fn parse_int_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<u64>().map_err(|_| HypError::Usage(format!("bad integer `{p}`"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let cases = [
            ("0.3+0.5i", (0.3, 0.5)),
            ("0.3-0.5i", (0.3, -0.5)),
            ("-0.3-0.5i", (-0.3, -0.5)),
            ("0.5i", (0.0, 0.5)),
            ("-0.5i", (0.0, -0.5)),
            ("i", (0.0, 1.0)),
            ("-i", (0.0, -1.0)),
            ("1+i", (1.0, 1.0)),
            ("2", (2.0, 0.0)),
            ("1e-3+2e-2i", (1e-3, 2e-2)),
            ("-1.5e+2-3E-1i", (-150.0, -0.3)),
            (" 0.1 + 0.2i ", (0.1, 0.2)),
        ];
        for (text, (re, im)) in cases {
            assert_eq!(parse_complex(text).unwrap(), Complex::new(re, im), "{text}");
        }
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
        assert!(parse_complex("1+2").is_err());
    }

    #[test]
    fn map_shorthands() {
        assert_eq!(parse_map_spec("power:m=3").unwrap().declared_degree(), Some(3));
        assert_eq!(parse_map_spec("exp:m=2,c=0.5").unwrap().declared_degree(), Some(2));
        assert_eq!(parse_map_spec("power:m=2*exp:m=3,c=1").unwrap().declared_degree(), Some(6));
        assert_eq!(parse_map_spec("identity").unwrap().declared_degree(), Some(1));
        assert!(parse_map_spec("power").is_err());
        assert!(parse_map_spec("power:m=2,q=1").is_err());
        assert!(parse_map_spec("exp:m=2,c=-1").is_err());
        let json = r#"{"kind":"punctured_power","rotation":0.0,"degree":4}"#;
        assert_eq!(parse_map_spec(json).unwrap().declared_degree(), Some(4));
    }
}
