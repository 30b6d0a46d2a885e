//! Geminal tensor files.
//!
//! Format: one header line `NEXT=n NOBS=n NOCC=n GAMMA=x`, optional
//! `# source: text` comment, then records `value a b i j` with 1-based
//! indices (`a`, `b` extended virtuals; `i`, `j` occupied).

use super::{IntegralError, DUPLICATE_TOL};
use crate::tensor::Tensor4;
use std::collections::HashMap;
use std::fmt::Write as _;

/// `r[[a, b, i, j]] = <ab|Q12 F12|ij>` over the extended space.
///
/// The first two indices run over the full extended space so that orbital
/// labels need no offset; rows with an occupied `a` or `b` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GeminalTensor {
    pub n_ext: usize,
    pub n_obs: usize,
    pub n_occ: usize,
    pub r: Tensor4,
    /// Slater exponent, inverse Bohr. Metadata only.
    pub gamma: f64,
    pub source: String,
}

impl GeminalTensor {
    pub fn zeros(n_ext: usize, n_obs: usize, n_occ: usize, gamma: f64) -> Self {
        Self {
            n_ext,
            n_obs,
            n_occ,
            r: Tensor4::zeros([n_ext, n_ext, n_occ, n_occ]),
            gamma,
            source: String::new(),
        }
    }

    pub fn is_obs_virtual(&self, p: usize) -> bool {
        p >= self.n_occ && p < self.n_obs
    }

    /// Whether `(a, b)` may carry a nonzero amplitude.
    pub fn allowed_pair(&self, a: usize, b: usize) -> bool {
        a >= self.n_occ && b >= self.n_occ && !(self.is_obs_virtual(a) && self.is_obs_virtual(b))
    }

    pub fn validate(&self) -> Result<(), IntegralError> {
        if !(self.n_occ <= self.n_obs && self.n_obs <= self.n_ext) {
            return Err(IntegralError::Invariant(format!(
                "need NOCC <= NOBS <= NEXT, got {} <= {} <= {}",
                self.n_occ, self.n_obs, self.n_ext
            )));
        }
        if self.r.dims() != [self.n_ext, self.n_ext, self.n_occ, self.n_occ] {
            return Err(IntegralError::Invariant("geminal tensor shape mismatch".into()));
        }
        for a in 0..self.n_ext {
            for b in 0..self.n_ext {
                if self.allowed_pair(a, b) {
                    continue;
                }
                for i in 0..self.n_occ {
                    for j in 0..self.n_occ {
                        if self.r[[a, b, i, j]] != 0.0 {
                            return Err(IntegralError::Invariant(format!(
                                "geminal element ({a},{b},{i},{j}) must vanish"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn header_value<'a>(fields: &HashMap<&'a str, &'a str>, key: &str, line: usize) -> Result<&'a str, IntegralError> {
    fields.get(key).copied().ok_or(IntegralError::Parse {
        line,
        msg: format!("header is missing {key}"),
    })
}

fn parse_int(s: &str, line: usize) -> Result<usize, IntegralError> {
    s.parse().map_err(|e| IntegralError::Parse {
        line,
        msg: format!("bad integer '{s}': {e}"),
    })
}

pub fn parse_geminal(text: &str) -> Result<GeminalTensor, IntegralError> {
    let mut out: Option<GeminalTensor> = None;
    let mut source = String::new();
    let mut seen: HashMap<[usize; 4], (f64, usize)> = HashMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(s) = comment.trim().strip_prefix("source:") {
                source = s.trim().to_string();
            }
            continue;
        }
        let Some(t) = out.as_mut() else {
            let fields: HashMap<&str, &str> = trimmed
                .split_whitespace()
                .filter_map(|tok| tok.split_once('='))
                .collect();
            let n_ext = parse_int(header_value(&fields, "NEXT", line)?, line)?;
            let n_obs = parse_int(header_value(&fields, "NOBS", line)?, line)?;
            let n_occ = parse_int(header_value(&fields, "NOCC", line)?, line)?;
            let gamma_s = header_value(&fields, "GAMMA", line)?;
            let gamma = gamma_s.parse().map_err(|e| IntegralError::Parse {
                line,
                msg: format!("bad GAMMA '{gamma_s}': {e}"),
            })?;
            if !(n_occ <= n_obs && n_obs <= n_ext) {
                return Err(IntegralError::Parse {
                    line,
                    msg: "need NOCC <= NOBS <= NEXT".into(),
                });
            }
            out = Some(GeminalTensor::zeros(n_ext, n_obs, n_occ, gamma));
            continue;
        };
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(IntegralError::Parse {
                line,
                msg: format!("expected 'value a b i j', got {} fields", fields.len()),
            });
        }
        let value: f64 = fields[0]
            .replace(['D', 'd'], "E")
            .parse()
            .map_err(|e| IntegralError::Parse {
                line,
                msg: format!("bad value '{}': {e}", fields[0]),
            })?;
        let mut idx = [0usize; 4];
        for (n, slot) in idx.iter_mut().enumerate() {
            let v = parse_int(fields[n + 1], line)?;
            let max = if n < 2 { t.n_ext } else { t.n_occ };
            if v == 0 || v > max {
                return Err(IntegralError::Bounds { line, index: v, max });
            }
            *slot = v - 1;
        }
        let [a, b, i, j] = idx;
        if !t.allowed_pair(a, b) && value != 0.0 {
            return Err(IntegralError::Invariant(format!(
                "line {line}: pair ({}, {}) must carry no amplitude",
                a + 1,
                b + 1
            )));
        }
        if let Some(&(old, old_line)) = seen.get(&idx) {
            if (old - value).abs() > DUPLICATE_TOL {
                return Err(IntegralError::Consistency {
                    line,
                    msg: format!("{value} conflicts with {old} on line {old_line}"),
                });
            }
        }
        seen.insert(idx, (value, line));
        t.r[[a, b, i, j]] = value;
    }
    let mut t = out.ok_or(IntegralError::Parse {
        line: 1,
        msg: "missing geminal header".into(),
    })?;
    t.source = source;
    Ok(t)
}

pub fn write_geminal(t: &GeminalTensor) -> String {
    let mut out = format!("NEXT={} NOBS={} NOCC={} GAMMA={}\n", t.n_ext, t.n_obs, t.n_occ, t.gamma);
    if !t.source.is_empty() {
        let _ = writeln!(out, "# source: {}", t.source);
    }
    for a in 0..t.n_ext {
        for b in 0..t.n_ext {
            for i in 0..t.n_occ {
                for j in 0..t.n_occ {
                    let v = t.r[[a, b, i, j]];
                    if v != 0.0 {
                        let _ = writeln!(out, "{v:24.16e} {} {} {} {}", a + 1, b + 1, i + 1, j + 1);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut t = GeminalTensor::zeros(5, 3, 1, 0.9);
        t.r[[1, 3, 0, 0]] = -0.25;
        t.r[[4, 4, 0, 0]] = 0.125;
        t.source = "hand made".into();
        let back = parse_geminal(&write_geminal(&t)).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn rejects_obs_virtual_pair() {
        let text = "NEXT=4 NOBS=3 NOCC=1 GAMMA=1.0\n 0.1 2 3 1 1\n";
        assert!(matches!(parse_geminal(text), Err(IntegralError::Invariant(_))));
    }

    #[test]
    fn rejects_bad_header_and_bounds() {
        assert!(matches!(
            parse_geminal("NEXT=4 NOBS=3 GAMMA=1.0\n"),
            Err(IntegralError::Parse { line: 1, .. })
        ));
        let text = "NEXT=4 NOBS=3 NOCC=1 GAMMA=1.0\n 0.1 2 4 2 1\n";
        assert!(matches!(
            parse_geminal(text),
            Err(IntegralError::Bounds {
                line: 2,
                index: 2,
                max: 1
            })
        ));
    }
}
