//! CSV point files and JSON helpers.
//!
//! Point files hold one point per line. An optional header names the
//! columns `x1,...,xd` and may end with a `weight` column; without a header
//! every column is a coordinate and the weights default to `1/n`. Lines
//! starting with `#` are comments.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{PointSet, WeightKind, WeightSet};

/// Reads a point file. `dim_hint` supplies the dimension when the file has
/// neither a header nor data rows; it must agree with the file otherwise.
pub fn load_points(path: impl AsRef<Path>, dim_hint: Option<usize>) -> Result<(PointSet, WeightSet)> {
    let file = std::fs::File::open(path.as_ref())?;
    read_points(file, dim_hint)
}

pub fn read_points<R: Read>(reader: R, dim_hint: Option<usize>) -> Result<(PointSet, WeightSet)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(reader);

    let mut header: Option<(usize, bool)> = None;
    let mut coords = Vec::new();
    let mut weights = Vec::new();
    let mut width: Option<usize> = None;
    let mut first = true;

    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::Parse {
                line,
                msg: e.to_string(),
            }
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if first {
            first = false;
            if record.iter().any(|f| f.parse::<f64>().is_err()) {
                header = Some(parse_header(&record, line)?);
                width = Some(record.len());
                continue;
            }
        }
        width.get_or_insert(record.len());
        let has_weight = header.is_some_and(|(_, w)| w);
        for (col, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("column {}: '{field}' is not a number", col + 1),
            })?;
            if has_weight && col + 1 == record.len() {
                weights.push(v);
            } else {
                if !(0.0..1.0).contains(&v) {
                    return Err(Error::invalid(format!(
                        "line {line}, column {}: coordinate {v} outside [0,1)",
                        col + 1
                    )));
                }
                coords.push(v);
            }
        }
    }

    let file_dim = match header {
        Some((d, _)) => Some(d),
        None => width,
    };
    let d = match (file_dim, dim_hint) {
        (Some(f), Some(h)) if f != h => {
            return Err(Error::invalid(format!(
                "file has dimension {f} but dimension {h} was requested"
            )))
        }
        (Some(f), _) => f,
        (None, Some(h)) => h,
        (None, None) => {
            return Err(Error::invalid(
                "cannot infer the dimension of an empty file without a header; pass it explicitly",
            ))
        }
    };
    let ps = PointSet::new(d, coords)?;
    let ws = if header.is_some_and(|(_, w)| w) {
        WeightSet::classify(weights)?
    } else {
        WeightSet::qmc(ps.len())
    };
    Ok((ps, ws))
}

fn parse_header(record: &csv::StringRecord, line: u64) -> Result<(usize, bool)> {
    let names: Vec<&str> = record.iter().collect();
    let has_weight = names.last().is_some_and(|&n| n.eq_ignore_ascii_case("weight"));
    let d = names.len() - usize::from(has_weight);
    for (j, name) in names[..d].iter().enumerate() {
        if *name != format!("x{}", j + 1) {
            return Err(Error::Parse {
                line,
                msg: format!("unexpected header column '{name}', expected 'x{}'", j + 1),
            });
        }
    }
    if d == 0 {
        return Err(Error::Parse {
            line,
            msg: "header names no coordinate columns".into(),
        });
    }
    Ok((d, has_weight))
}

/// Writes a point file with a header. The weight column is written unless
/// the weights are QMC, which the reader restores by default.
pub fn write_points<W: Write>(mut out: W, ps: &PointSet, ws: &WeightSet) -> Result<()> {
    if ps.len() != ws.len() {
        return Err(Error::invalid("point and weight counts differ"));
    }
    let with_weight = ws.kind() != WeightKind::Qmc;
    let mut header: Vec<String> = (1..=ps.dim()).map(|j| format!("x{j}")).collect();
    if with_weight {
        header.push("weight".into());
    }
    writeln!(out, "{}", header.join(","))?;
    for (x, w) in ps.points().zip(ws.as_slice()) {
        let mut row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        if with_weight {
            row.push(w.to_string());
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn save_points(path: impl AsRef<Path>, ps: &PointSet, ws: &WeightSet) -> Result<()> {
    let file = std::fs::File::create(path.as_ref())?;
    let mut buf = std::io::BufWriter::new(file);
    write_points(&mut buf, ps, ws)?;
    buf.flush()?;
    Ok(())
}

/// Serde adapter writing `p = inf` as the string `"inf"`.
pub mod exponent {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &f64, s: S) -> Result<S::Ok, S::Error> {
        if p.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*p)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Str(s) => Err(de::Error::custom(format!("bad exponent '{s}'"))),
        }
    }
}
