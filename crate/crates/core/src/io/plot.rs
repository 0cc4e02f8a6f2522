//! SVG plots. Output is byte-deterministic: coordinates are written with
//! six decimals and elements in a fixed order.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gap::{check_permutation, Point, Tour};
use crate::ktp::Board;

const CANVAS: f64 = 800.0;
const PAD: f64 = 20.0;

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.6}" height="{h:.6}" viewBox="0 0 {w:.6} {h:.6}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{w:.6}" height="{h:.6}" fill="white"/>"#);
}

/// Maps plane coordinates to the canvas, `y` pointing up.
struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
    w: f64,
    h: f64,
}

impl Frame {
    fn fit(points: &[Point]) -> Frame {
        let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in points {
            min_x = min_x.min(p.x);
            max_x = max_x.max(p.x);
            min_y = min_y.min(p.y);
            max_y = max_y.max(p.y);
        }
        let span = (max_x - min_x).max(max_y - min_y);
        let scale = if span > 0.0 { (CANVAS - 2.0 * PAD) / span } else { 1.0 };
        let w = (max_x - min_x) * scale + 2.0 * PAD;
        let h = (max_y - min_y) * scale + 2.0 * PAD;
        Frame { min_x, max_y, scale, w, h }
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        (PAD + (p.x - self.min_x) * self.scale, PAD + (self.max_y - p.y) * self.scale)
    }
}

fn planar(points: &[Point]) -> Result<()> {
    if points.is_empty() || points.iter().any(|p| !p.is_planar()) {
        return Err(Error::NotPlanar);
    }
    Ok(())
}

/// Tour edges, vertex markers and 0-based labels.
pub fn tour_svg(tour: &Tour, points: &[Point]) -> Result<String> {
    planar(points)?;
    check_permutation(tour.order(), points.len())?;
    let f = Frame::fit(points);
    let mut out = String::new();
    header(&mut out, f.w, f.h);
    let _ = writeln!(out, r#"<g stroke="black" stroke-width="1">"#);
    for (a, b) in tour.edges() {
        let ((x1, y1), (x2, y2)) = (f.map(&points[a]), f.map(&points[b]));
        let _ = writeln!(out, r#"<line x1="{x1:.6}" y1="{y1:.6}" x2="{x2:.6}" y2="{y2:.6}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g fill="red">"#);
    for p in points {
        let (x, y) = f.map(p);
        let _ = writeln!(out, r#"<circle cx="{x:.6}" cy="{y:.6}" r="2.000000"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g font-size="8" fill="blue">"#);
    for (i, p) in points.iter().enumerate() {
        let (x, y) = f.map(p);
        let _ = writeln!(out, r#"<text x="{:.6}" y="{:.6}">{i}</text>"#, x + 3.0, y - 3.0);
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

/// Board squares plus one segment per move, between square centres.
pub fn board_svg(tour: &Tour, board: &Board) -> Result<String> {
    check_permutation(tour.order(), board.area())?;
    let cell = 40.0;
    let (w, h) = (board.cols() as f64 * cell + 2.0 * PAD, board.rows() as f64 * cell + 2.0 * PAD);
    let centre = |v: usize| {
        let s = board.square(v);
        (PAD + (s.col as f64 - 0.5) * cell, PAD + (s.row as f64 - 0.5) * cell)
    };
    let mut out = String::new();
    header(&mut out, w, h);
    let _ = writeln!(out, r##"<g stroke="#888888">"##);
    for s in board.squares() {
        let fill = if (s.row + s.col) % 2 == 0 { "#f0d9b5" } else { "#b58863" };
        let (x, y) = (PAD + (s.col - 1) as f64 * cell, PAD + (s.row - 1) as f64 * cell);
        let _ = writeln!(out, r#"<rect x="{x:.6}" y="{y:.6}" width="{cell:.6}" height="{cell:.6}" fill="{fill}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g stroke="black" stroke-width="2">"#);
    for (a, b) in tour.edges() {
        let ((x1, y1), (x2, y2)) = (centre(a), centre(b));
        let _ = writeln!(out, r#"<line x1="{x1:.6}" y1="{y1:.6}" x2="{x2:.6}" y2="{y2:.6}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

/// Sorted-cost-row diagnostic: row `i` is vertex `i`, a dot at column `r`
/// marks a tour edge of rank `r` in that vertex's sorted cost row.
pub fn rank_profile_svg(profile: &[[usize; 2]]) -> Result<String> {
    let n = profile.len();
    if n == 0 {
        return Err(Error::TooFewVertices(0));
    }
    let cell = ((CANVAS - 2.0 * PAD) / n as f64).clamp(1.0, 12.0);
    let side = n as f64 * cell + 2.0 * PAD;
    let mut out = String::new();
    header(&mut out, side, side);
    let _ = writeln!(
        out,
        r#"<rect x="{PAD:.6}" y="{PAD:.6}" width="{:.6}" height="{:.6}" fill="none" stroke="gray"/>"#,
        n as f64 * cell,
        n as f64 * cell
    );
    let _ = writeln!(out, r#"<g fill="red">"#);
    for (v, ranks) in profile.iter().enumerate() {
        for &r in ranks {
            let x = PAD + (r as f64 - 0.5) * cell;
            let y = PAD + (v as f64 + 0.5) * cell;
            let _ = writeln!(out, r#"<circle cx="{x:.6}" cy="{y:.6}" r="{:.6}"/>"#, (cell / 2.0).max(0.75));
        }
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap::{build_instance, Metric};

    #[test]
    fn unit_square_svg() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].map(Point::from);
        let inst = build_instance(&pts, Metric::Euclidean).unwrap();
        let t = Tour::new(vec![0, 1, 2, 3], &inst).unwrap();
        let svg = tour_svg(&t, &pts).unwrap();
        assert_eq!(svg.matches("<circle").count(), 4);
        assert_eq!(svg.matches("<line").count(), 4);
        assert_eq!(svg, tour_svg(&t, &pts).unwrap());
    }

    #[test]
    fn rejects_3d() {
        let pts = [Point::new3(0.0, 0.0, 0.0), Point::new3(1.0, 0.0, 1.0), Point::new3(0.0, 1.0, 0.0)];
        let inst = build_instance(&pts, Metric::Euclidean).unwrap();
        let t = Tour::new(vec![0, 1, 2], &inst).unwrap();
        assert_eq!(tour_svg(&t, &pts), Err(Error::NotPlanar));
    }

    #[test]
    fn rank_dots() {
        let svg = rank_profile_svg(&[[1, 2], [1, 1], [2, 1]]).unwrap();
        assert_eq!(svg.matches("<circle").count(), 6);
    }
}
