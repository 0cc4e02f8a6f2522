use std::fmt::Write as _;

use log::warn;

use crate::error::{Error, Result};
use crate::gap::{GapInstance, Metric, Point};

/// The EUC_2D subset of a TSPLIB `.tsp` file.
#[derive(Debug, Clone, PartialEq)]
pub struct TsplibFile {
    pub name: Option<String>,
    pub comment: Option<String>,
    pub dimension: usize,
    pub edge_weight_type: String,
    /// Indexed by node id minus one.
    pub coords: Vec<Point>,
}

impl TsplibFile {
    /// Exact euclidean costs, or TSPLIB's `nint` integer costs when
    /// `rounding` is set.
    pub fn to_instance(&self, rounding: bool) -> Result<GapInstance> {
        let inst = GapInstance::from_points(&self.coords, Metric::Euclidean)?;
        Ok(if rounding { inst.with_rounded_costs() } else { inst })
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Splits `KEY : value` (the colon is optional in the wild).
fn split_keyword(line: &str) -> (String, String) {
    let (key, value) = match line.find(':') {
        Some(at) => (&line[..at], &line[at + 1..]),
        None => line.split_once(char::is_whitespace).unwrap_or((line, "")),
    };
    (key.trim().to_ascii_uppercase(), value.trim().to_string())
}

pub fn parse_tsplib_file(text: &str) -> Result<TsplibFile> {
    let mut name = None;
    let mut comment = None;
    let mut dimension: Option<usize> = None;
    let mut weight_type: Option<String> = None;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut coords: Option<Vec<Option<Point>>> = None;

    for (ln, line) in lines.by_ref() {
        if line.is_empty() {
            continue;
        }
        let (key, value) = split_keyword(line);
        match key.as_str() {
            "NAME" => name = Some(value),
            "COMMENT" => comment = Some(value),
            "TYPE" => {
                if value != "TSP" {
                    warn!("line {ln}: TYPE {value} read as TSP");
                }
            }
            "DIMENSION" => {
                dimension = Some(value.parse().map_err(|_| parse_err(ln, format!("bad DIMENSION {value:?}")))?)
            }
            "EDGE_WEIGHT_TYPE" => {
                if value != "EUC_2D" {
                    return Err(parse_err(ln, format!("unsupported EDGE_WEIGHT_TYPE {value}, only EUC_2D is read")));
                }
                weight_type = Some(value);
            }
            "NODE_COORD_SECTION" => {
                let n = dimension.ok_or_else(|| parse_err(ln, "NODE_COORD_SECTION before DIMENSION"))?;
                coords = Some(vec![None; n]);
                break;
            }
            "EOF" => break,
            _ => warn!("line {ln}: ignoring keyword {key}"),
        }
    }

    let dimension = dimension.ok_or_else(|| parse_err(0, "missing DIMENSION"))?;
    let edge_weight_type = weight_type.ok_or_else(|| parse_err(0, "missing EDGE_WEIGHT_TYPE"))?;
    let mut slots = coords.ok_or_else(|| parse_err(0, "missing NODE_COORD_SECTION"))?;

    let mut seen = 0;
    for (ln, line) in lines {
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(ln, format!("expected `id x y`, got {line:?}")));
        }
        let id: usize = fields[0].parse().map_err(|_| parse_err(ln, format!("bad node id {:?}", fields[0])))?;
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(ln, format!("bad coordinate {s:?}")))
        };
        let (x, y) = (num(fields[1])?, num(fields[2])?);
        if id == 0 || id > dimension {
            return Err(parse_err(ln, format!("node id {id} outside 1..={dimension}")));
        }
        if slots[id - 1].replace(Point::new(x, y)).is_some() {
            return Err(parse_err(ln, format!("node id {id} repeated")));
        }
        seen += 1;
    }
    if seen != dimension {
        return Err(parse_err(0, format!("DIMENSION is {dimension} but {seen} coordinate lines were read")));
    }
    let coords = slots.into_iter().map(|p| p.expect("all ids seen")).collect();
    Ok(TsplibFile { name, comment, dimension, edge_weight_type, coords })
}

/// Parses an EUC_2D `.tsp` text into an instance.
pub fn parse_tsplib(text: &str, rounding: bool) -> Result<GapInstance> {
    parse_tsplib_file(text)?.to_instance(rounding)
}

/// Writes an EUC_2D `.tsp`; coordinates use the shortest representation
/// that parses back to the same `f64`.
pub fn write_tsplib(name: &str, points: &[Point]) -> Result<String> {
    if points.iter().any(|p| !p.is_planar()) {
        return Err(Error::NotPlanar);
    }
    let mut out = String::new();
    let _ = writeln!(out, "NAME : {name}");
    let _ = writeln!(out, "TYPE : TSP");
    let _ = writeln!(out, "DIMENSION : {}", points.len());
    let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D");
    let _ = writeln!(out, "NODE_COORD_SECTION");
    for (i, p) in points.iter().enumerate() {
        let _ = writeln!(out, "{} {:?} {:?}", i + 1, p.x, p.y);
    }
    out.push_str("EOF\n");
    Ok(out)
}

/// Reads a tour as 0-based vertex indices. With a `TOUR_SECTION` the 1-based
/// ids after it are read up to `-1` or `EOF`; otherwise the whole text is a
/// list of 1-based ids.
pub fn parse_tour(text: &str) -> Result<Vec<usize>> {
    let body: Vec<(usize, &str)> = match text.lines().position(|l| l.trim().eq_ignore_ascii_case("TOUR_SECTION")) {
        Some(at) => text.lines().enumerate().skip(at + 1).map(|(i, l)| (i + 1, l)).collect(),
        None => text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect(),
    };
    let mut order = Vec::new();
    'lines: for (ln, line) in body {
        for tok in line.split_whitespace() {
            if tok == "-1" || tok == "EOF" {
                break 'lines;
            }
            let id: usize = tok.parse().map_err(|_| parse_err(ln, format!("bad tour entry {tok:?}")))?;
            if id == 0 {
                return Err(parse_err(ln, "tour ids are 1-based"));
            }
            order.push(id - 1);
        }
    }
    Ok(order)
}
