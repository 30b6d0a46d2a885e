//! FCIDUMP reader and writer, plus the 4-fold `SYM=4` variant (TCDUMP).
//!
//! Header: a Fortran namelist `&FCI NORB=n,NELEC=n,MS2=n, ... &END`.
//! Body: records `value i j k l` with 1-based orbital indices in chemists'
//! notation; `i j 0 0` is a one-body element, `0 0 0 0` the core energy.
//! Recognized extension keys: `SYM=4` (4-fold two-body symmetry),
//! `NFROZEN=n` (fold `n` core orbitals at load time), and `NOBS=`/`NOCC=`
//! for extended-space integral sets. `ORBSYM`/`ISYM` are read and ignored.

use super::{ExtendedIntegralSet, IntegralError, IntegralSet, Symmetry, DUPLICATE_TOL};
use crate::tensor::{Tensor2, Tensor4};
use std::collections::HashMap;
use std::fmt::Write as _;

/// Entries smaller than this are not written.
const WRITE_DROP: f64 = 1e-14;

#[derive(Debug, Default)]
struct Header {
    values: HashMap<String, Vec<String>>,
    body_start: usize,
}

impl Header {
    fn int(&self, key: &str) -> Option<Result<i64, String>> {
        self.values.get(key).map(|v| {
            v.first()
                .ok_or_else(|| format!("{key} has no value"))?
                .parse::<i64>()
                .map_err(|e| format!("{key}: {e}"))
        })
    }

    fn required(&self, key: &str) -> Result<i64, IntegralError> {
        match self.int(key) {
            Some(Ok(v)) => Ok(v),
            Some(Err(msg)) => Err(IntegralError::Parse { line: 1, msg }),
            None => Err(IntegralError::Parse {
                line: 1,
                msg: format!("header is missing {key}"),
            }),
        }
    }

    fn optional(&self, key: &str) -> Result<Option<i64>, IntegralError> {
        self.int(key)
            .transpose()
            .map_err(|msg| IntegralError::Parse { line: 1, msg })
    }
}

fn parse_header(lines: &[&str]) -> Result<Header, IntegralError> {
    let first = lines
        .iter()
        .position(|l| !l.trim().is_empty())
        .ok_or(IntegralError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
    if !lines[first].trim_start().to_ascii_uppercase().starts_with("&FCI") {
        return Err(IntegralError::Parse {
            line: first + 1,
            msg: "expected '&FCI' namelist header".into(),
        });
    }
    let mut text = String::new();
    let mut end = None;
    for (k, line) in lines.iter().enumerate().skip(first) {
        let upper = line.to_ascii_uppercase();
        if let Some(pos) = upper.find("&END") {
            text.push_str(&upper[..pos]);
            end = Some(k);
            break;
        }
        if upper.trim() == "/" {
            end = Some(k);
            break;
        }
        text.push_str(&upper);
        text.push(' ');
    }
    let end = end.ok_or(IntegralError::Parse {
        line: lines.len(),
        msg: "unterminated header (no &END)".into(),
    })?;
    let text = text.trim_start().trim_start_matches("&FCI");
    let mut header = Header {
        body_start: end + 1,
        ..Default::default()
    };
    let mut current: Option<String> = None;
    for token in text.split([',', ' ', '\t']).filter(|t| !t.is_empty()) {
        if let Some((key, value)) = token.split_once('=') {
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(IntegralError::Parse {
                    line: first + 1,
                    msg: format!("malformed header token '{token}'"),
                });
            }
            let entry = header.values.entry(key.clone()).or_default();
            if !value.is_empty() {
                entry.push(value.to_string());
            }
            current = Some(key);
        } else if let Some(key) = &current {
            header.values.get_mut(key).unwrap().push(token.to_string());
        } else {
            return Err(IntegralError::Parse {
                line: first + 1,
                msg: format!("unexpected header token '{token}'"),
            });
        }
    }
    Ok(header)
}

struct Body {
    e_core: f64,
    h: Tensor2,
    g: Tensor4,
}

fn parse_value(token: &str, line: usize) -> Result<f64, IntegralError> {
    token
        .replace(['D', 'd'], "E")
        .parse::<f64>()
        .map_err(|e| IntegralError::Parse {
            line,
            msg: format!("bad value '{token}': {e}"),
        })
}

fn check_duplicate(previous: Option<(f64, usize)>, value: f64, line: usize, what: &str) -> Result<(), IntegralError> {
    if let Some((old, old_line)) = previous {
        if (old - value).abs() > DUPLICATE_TOL {
            return Err(IntegralError::Consistency {
                line,
                msg: format!("{what} = {value} conflicts with {old} on line {old_line}"),
            });
        }
    }
    Ok(())
}

fn parse_body(lines: &[&str], start: usize, norb: usize, symmetry: Symmetry) -> Result<Body, IntegralError> {
    let mut body = Body {
        e_core: 0.0,
        h: Tensor2::square(norb),
        g: Tensor4::cube(norb),
    };
    let mut seen_core: Option<(f64, usize)> = None;
    let mut seen_one: HashMap<(usize, usize), (f64, usize)> = HashMap::new();
    let mut seen_two: HashMap<[usize; 4], (f64, usize)> = HashMap::new();
    for (k, raw) in lines.iter().enumerate().skip(start) {
        let line = k + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 5 {
            return Err(IntegralError::Parse {
                line,
                msg: format!("expected 'value i j k l', got {} fields", fields.len()),
            });
        }
        let value = parse_value(fields[0], line)?;
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip(&fields[1..]) {
            *slot = tok.parse::<usize>().map_err(|e| IntegralError::Parse {
                line,
                msg: format!("bad index '{tok}': {e}"),
            })?;
            if *slot > norb {
                return Err(IntegralError::Bounds {
                    line,
                    index: *slot,
                    max: norb,
                });
            }
        }
        match idx {
            [0, 0, 0, 0] => {
                check_duplicate(seen_core, value, line, "core energy")?;
                seen_core = Some((value, line));
                body.e_core = value;
            }
            // orbital energies; not needed
            [_, 0, 0, 0] => {}
            [i, j, 0, 0] if i > 0 && j > 0 => {
                let key = (i.max(j) - 1, i.min(j) - 1);
                check_duplicate(seen_one.get(&key).copied(), value, line, "one-body element")?;
                seen_one.insert(key, (value, line));
                body.h[[i - 1, j - 1]] = value;
                body.h[[j - 1, i - 1]] = value;
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                let zero_based = [i - 1, j - 1, k - 1, l - 1];
                let key = symmetry.canonical(zero_based);
                check_duplicate(seen_two.get(&key).copied(), value, line, "two-body element")?;
                seen_two.insert(key, (value, line));
                for o in symmetry.orbit(zero_based) {
                    body.g[o] = value;
                }
            }
            _ => {
                return Err(IntegralError::Parse {
                    line,
                    msg: format!("invalid index pattern {idx:?}"),
                })
            }
        }
    }
    Ok(body)
}

fn parse_with(text: &str, want: Option<Symmetry>) -> Result<(IntegralSet, Header), IntegralError> {
    let lines: Vec<&str> = text.lines().collect();
    let header = parse_header(&lines)?;
    let norb = header.required("NORB")?;
    let nelec = header.required("NELEC")?;
    let ms2 = header.required("MS2")?;
    if norb < 0 || nelec < 0 {
        return Err(IntegralError::Parse {
            line: 1,
            msg: "NORB and NELEC must be non-negative".into(),
        });
    }
    let declared = match header.optional("SYM")? {
        None | Some(8) => Symmetry::EightFold,
        Some(4) => Symmetry::FourFold,
        Some(other) => {
            return Err(IntegralError::Parse {
                line: 1,
                msg: format!("unsupported SYM={other}"),
            })
        }
    };
    if let Some(want) = want {
        if want != declared {
            return Err(IntegralError::Parse {
                line: 1,
                msg: format!("expected {want:?} dump, header declares {declared:?}"),
            });
        }
    }
    let norb = norb as usize;
    let body = parse_body(&lines, header.body_start, norb, declared)?;
    let set = IntegralSet {
        n_orb: norb,
        n_elec: nelec as usize,
        ms2: ms2 as i32,
        e_core: body.e_core,
        h: body.h,
        g: body.g,
        symmetry: declared,
        frozen_core: 0,
    };
    set.validate()?;
    let set = match header.optional("NFROZEN")? {
        Some(n) if n > 0 => set.freeze_core(n as usize)?,
        _ => set,
    };
    Ok((set, header))
}

/// Parses an 8-fold FCIDUMP, folding `NFROZEN` core orbitals if declared.
pub fn parse_fcidump(text: &str) -> Result<IntegralSet, IntegralError> {
    parse_with(text, Some(Symmetry::EightFold)).map(|(s, _)| s)
}

/// Parses a 4-fold dump (`SYM=4` in the header).
pub fn parse_tcdump(text: &str) -> Result<IntegralSet, IntegralError> {
    parse_with(text, Some(Symmetry::FourFold)).map(|(s, _)| s)
}

/// Parses either flavor, dispatching on the `SYM` header key.
pub fn parse_dump(text: &str) -> Result<IntegralSet, IntegralError> {
    parse_with(text, None).map(|(s, _)| s)
}

/// Parses an extended-space set; the header must carry `NOBS` and `NOCC`.
pub fn parse_extended(text: &str) -> Result<ExtendedIntegralSet, IntegralError> {
    let (base, header) = parse_with(text, None)?;
    let key = |k: &str| -> Result<usize, IntegralError> { Ok(header.required(k)? as usize) };
    let n_obs = key("NOBS")?;
    let n_occ = key("NOCC")?;
    if base.frozen_core > 0 {
        return Err(IntegralError::Invariant(
            "extended-space sets must not declare NFROZEN".into(),
        ));
    }
    ExtendedIntegralSet::new(base, n_obs, n_occ)
}

fn write_with(ints: &IntegralSet, symmetry: Symmetry, extra: &str) -> String {
    let n = ints.n_orb;
    let mut out = String::new();
    let _ = writeln!(out, " &FCI NORB={n},NELEC={},MS2={},", ints.n_elec, ints.ms2);
    let _ = writeln!(out, "  ORBSYM={}", "1,".repeat(n));
    let sym = if symmetry == Symmetry::FourFold { "SYM=4," } else { "" };
    let _ = writeln!(out, "  ISYM=1,{sym}{extra}");
    out.push_str(" &END\n");
    let mut records: Vec<(f64, [usize; 4])> = Vec::new();
    let mut record = |v: f64, i: usize, j: usize, k: usize, l: usize| records.push((v, [i, j, k, l]));
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let idx = [p, q, r, s];
                    if symmetry.canonical(idx) != idx {
                        continue;
                    }
                    let v = ints.g[idx];
                    if v.abs() >= WRITE_DROP {
                        record(v, p + 1, q + 1, r + 1, s + 1);
                    }
                }
            }
        }
    }
    for p in 0..n {
        for q in 0..=p {
            let v = ints.h[[p, q]];
            if v.abs() >= WRITE_DROP {
                record(v, p + 1, q + 1, 0, 0);
            }
        }
    }
    if ints.e_core.abs() >= WRITE_DROP || records.is_empty() {
        records.push((ints.e_core, [0; 4]));
    }
    for (v, [i, j, k, l]) in records {
        let _ = writeln!(out, "{v:24.16e} {i:3} {j:3} {k:3} {l:3}");
    }
    out
}

/// Writes a set with its own symmetry (adds `SYM=4` for 4-fold sets).
pub fn write_fcidump(ints: &IntegralSet) -> String {
    write_with(ints, ints.symmetry, "")
}

/// Writes a 4-fold dump: one record per 4-fold orbit, `SYM=4` in the header.
pub fn write_tcdump(ints: &IntegralSet) -> String {
    write_with(ints, Symmetry::FourFold, "")
}

/// Writes an extended-space set (`NOBS`/`NOCC` header keys).
pub fn write_extended(ext: &ExtendedIntegralSet) -> String {
    write_with(
        &ext.base,
        ext.base.symmetry,
        &format!("NOBS={},NOCC={},", ext.n_obs, ext.n_occ),
    )
}
