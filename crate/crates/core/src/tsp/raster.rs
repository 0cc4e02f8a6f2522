//! Image-based crossing check: draw the cycle, flood the outside green and
//! the inner side of an edge red, then inspect each city's surroundings.
//! A city on a simple closed curve touches the curve, the outside and the
//! inside; on a crossed curve some city misses the red region.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gap::{check_permutation, GapInstance, Tour};

/// Canvases above this many pixels are refused.
pub const MAX_CANVAS_PIXELS: usize = 64 * 1024 * 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Pixel {
    White,
    Black,
    Green,
    Red,
}

impl Pixel {
    pub fn rgb(self) -> [u8; 3] {
        match self {
            Pixel::White => [255, 255, 255],
            Pixel::Black => [0, 0, 0],
            Pixel::Green => [0, 200, 0],
            Pixel::Red => [220, 0, 0],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    width: usize,
    height: usize,
    pixels: Vec<Pixel>,
}

impl Raster {
    pub fn new(width: usize, height: usize) -> Self {
        Raster { width, height, pixels: vec![Pixel::White; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Pixel {
        self.pixels[y * self.width + x]
    }

    #[inline]
    fn set(&mut self, x: usize, y: usize, p: Pixel) {
        self.pixels[y * self.width + x] = p;
    }

    pub fn count(&self, p: Pixel) -> usize {
        self.pixels.iter().filter(|&&q| q == p).count()
    }

    /// Bresenham segment; 8-connected, so a 4-connected fill cannot leak
    /// through it.
    fn draw_line(&mut self, (x0, y0): (i64, i64), (x1, y1): (i64, i64)) {
        let dx = (x1 - x0).abs();
        let dy = -(y1 - y0).abs();
        let sx = if x0 < x1 { 1 } else { -1 };
        let sy = if y0 < y1 { 1 } else { -1 };
        let (mut x, mut y, mut err) = (x0, y0, dx + dy);
        loop {
            self.set(x as usize, y as usize, Pixel::Black);
            if x == x1 && y == y1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x += sx;
            }
            if e2 <= dx {
                err += dx;
                y += sy;
            }
        }
    }

    /// 4-connected fill of the white region containing the seed.
    fn flood(&mut self, seed: (usize, usize), color: Pixel) -> usize {
        if self.get(seed.0, seed.1) != Pixel::White {
            return 0;
        }
        let mut stack = vec![seed];
        self.set(seed.0, seed.1, color);
        let mut filled = 0;
        while let Some((x, y)) = stack.pop() {
            filled += 1;
            let mut push = |nx: usize, ny: usize, r: &mut Raster| {
                if r.get(nx, ny) == Pixel::White {
                    r.set(nx, ny, color);
                    stack.push((nx, ny));
                }
            };
            if x > 0 {
                push(x - 1, y, self);
            }
            if x + 1 < self.width {
                push(x + 1, y, self);
            }
            if y > 0 {
                push(x, y - 1, self);
            }
            if y + 1 < self.height {
                push(x, y + 1, self);
            }
        }
        filled
    }

    /// Binary PPM (P6).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(self.pixels.len() * 3);
        for p in &self.pixels {
            out.extend_from_slice(&p.rgb());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RasterVerdict {
    Simple,
    /// Cities (vertex ids, ascending) whose surroundings lack a colour.
    Crossed { marked: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct RasterCheck {
    pub verdict: RasterVerdict,
    /// Red pixel count; the enclosed area in pixels for a simple curve.
    pub interior_pixels: usize,
    /// Pixels per coordinate unit.
    pub scale: f64,
    /// Radius, in pixels, of the neighbourhood inspected around each city.
    pub vicinity: usize,
    pub image: Raster,
}

/// Rasterises the cycle at `k` pixels per coordinate unit and two-colours it.
///
/// Each city's neighbourhood is the disc of radius `max(1, d/4)` pixels,
/// `d` being the closest city pair distance in pixels, so neighbourhoods
/// never overlap and reach into acute wedges.
pub fn two_color_raster(tour: &Tour, instance: &GapInstance, k: u32) -> Result<RasterCheck> {
    let pts = instance.planar_coords()?;
    let n = instance.n();
    check_permutation(tour.order(), n)?;
    if k == 0 {
        return Err(Error::InvalidConfig("resolution factor must be positive".into()));
    }
    for (a, b) in tour.edges() {
        if pts[a].x == pts[b].x && pts[a].y == pts[b].y {
            return Err(Error::DegenerateEdge(a, b));
        }
    }
    let scale = k as f64;
    let mut d_min = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            d_min = d_min.min(((pts[i].x - pts[j].x).powi(2) + (pts[i].y - pts[j].y).powi(2)).sqrt());
        }
    }
    let d_px = d_min * scale;
    if d_px < 3.0 {
        return Err(Error::ResolutionTooCoarse(d_px));
    }
    let vicinity = ((d_px / 4.0).floor() as usize).max(1);
    let margin = vicinity + 2;

    let min_x = pts.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let max_y = pts.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    let (width, height) = canvas_size(pts, d_min, k);
    if width.saturating_mul(height) > MAX_CANVAS_PIXELS {
        return Err(Error::CanvasTooLarge(width.saturating_mul(height)));
    }
    // Image rows grow downwards; flip y.
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        ((x - min_x) * scale + margin as f64, (max_y - y) * scale + margin as f64)
    };
    let pixel_of = |v: usize| -> (i64, i64) {
        let (x, y) = to_px(pts[v].x, pts[v].y);
        (x.round() as i64, y.round() as i64)
    };

    let mut image = Raster::new(width, height);
    for (a, b) in tour.edges() {
        image.draw_line(pixel_of(a), pixel_of(b));
    }
    image.flood((0, 0), Pixel::Green);

    let interior_pixels = match inside_seed(tour, pts, &image, &to_px, vicinity) {
        Some(seed) => image.flood(seed, Pixel::Red),
        None => 0,
    };

    let mut marked = Vec::new();
    for v in 0..n {
        let (cx, cy) = pixel_of(v);
        let (mut red, mut green, mut black) = (false, false, false);
        let r = vicinity as i64;
        for dy in -r..=r {
            for dx in -r..=r {
                if dx * dx + dy * dy > r * r {
                    continue;
                }
                let (x, y) = (cx + dx, cy + dy);
                if x < 0 || y < 0 || x as usize >= width || y as usize >= height {
                    continue;
                }
                match image.get(x as usize, y as usize) {
                    Pixel::Red => red = true,
                    Pixel::Green => green = true,
                    Pixel::Black => black = true,
                    Pixel::White => {}
                }
            }
        }
        if !(red && green && black) {
            marked.push(v);
        }
    }
    let verdict = if marked.is_empty() { RasterVerdict::Simple } else { RasterVerdict::Crossed { marked } };
    Ok(RasterCheck { verdict, interior_pixels, scale, vicinity, image })
}

/// A white pixel just off an edge midpoint, walking along the normal that
/// points into the curve (by signed area), then the opposite one. Edges are
/// tried in tour order.
fn inside_seed(
    tour: &Tour,
    pts: &[crate::gap::Point],
    image: &Raster,
    to_px: &dyn Fn(f64, f64) -> (f64, f64),
    reach: usize,
) -> Option<(usize, usize)> {
    let order = tour.order();
    let n = order.len();
    let area2: f64 = (0..n)
        .map(|k| {
            let (p, q) = (&pts[order[k]], &pts[order[(k + 1) % n]]);
            p.x * q.y - q.x * p.y
        })
        .sum();
    (0..n).find_map(|k| {
        let (a, b) = (&pts[order[k]], &pts[order[(k + 1) % n]]);
        let (mx, my) = to_px((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
        let (ax, ay) = to_px(a.x, a.y);
        let (bx, by) = to_px(b.x, b.y);
        let len = ((bx - ax).powi(2) + (by - ay).powi(2)).sqrt();
        // Left of the edge in image coordinates (y down) is (dy, -dx).
        let (lx, ly) = ((by - ay) / len, -(bx - ax) / len);
        let inward = if area2 >= 0.0 { (lx, ly) } else { (-lx, -ly) };
        [inward, (-inward.0, -inward.1)].into_iter().find_map(|dir| {
            for step in 1..=reach.max(1) {
                let x = (mx + dir.0 * step as f64).round();
                let y = (my + dir.1 * step as f64).round();
                if x < 0.0 || y < 0.0 || x as usize >= image.width() || y as usize >= image.height() {
                    return None;
                }
                match image.get(x as usize, y as usize) {
                    Pixel::Black => continue,
                    Pixel::White => return Some((x as usize, y as usize)),
                    _ => return None,
                }
            }
            None
        })
    })
}

fn canvas_size(pts: &[crate::gap::Point], d_min: f64, k: u32) -> (usize, usize) {
    let scale = k as f64;
    let margin = (((d_min * scale) / 4.0).floor() as usize).max(1) + 2;
    let (min_x, max_x) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)));
    let (min_y, max_y) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.y), hi.max(p.y)));
    let width = ((max_x - min_x) * scale).round() as usize + 2 * margin + 1;
    let height = ((max_y - min_y) * scale).round() as usize + 2 * margin + 1;
    (width, height)
}

/// Smallest `k` at which the raster check resolves this drawing: the
/// neighbourhood of every city is wide enough to hold pixels on both sides of
/// its sharpest corner, and every city stays at least 4 pixels clear of
/// the edges not incident to it. The result is clamped to the largest `k`
/// whose canvas fits in [`MAX_CANVAS_PIXELS`].
///
/// Fails when two cities coincide, a corner folds back on itself or a city
/// lies on a foreign edge.
pub fn adequate_resolution(tour: &Tour, instance: &GapInstance) -> Result<u32> {
    const CORNER_PX: f64 = 4.0;
    const CLEARANCE_PX: f64 = 4.0;
    let pts = instance.planar_coords()?;
    let n = instance.n();
    check_permutation(tour.order(), n)?;
    let dist = |a: &crate::gap::Point, b: &crate::gap::Point| (a.x - b.x).hypot(a.y - b.y);

    let mut d_min = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            d_min = d_min.min(dist(&pts[i], &pts[j]));
        }
    }
    if d_min == 0.0 {
        return Err(Error::ResolutionTooCoarse(0.0));
    }

    let order = tour.order();
    let mut sin_half = f64::INFINITY;
    let mut clearance = f64::INFINITY;
    for k in 0..n {
        let (p, v, q) = (&pts[order[(k + n - 1) % n]], &pts[order[k]], &pts[order[(k + 1) % n]]);
        let (ux, uy, wx, wy) = (p.x - v.x, p.y - v.y, q.x - v.x, q.y - v.y);
        let angle = (ux * wy - uy * wx).abs().atan2(ux * wx + uy * wy);
        sin_half = sin_half.min((angle / 2.0).sin());
        for e in 0..n {
            let (a, b) = (order[e], order[(e + 1) % n]);
            if a == order[k] || b == order[k] {
                continue;
            }
            clearance = clearance.min(point_segment_distance(v, &pts[a], &pts[b]));
        }
    }
    if sin_half <= 0.0 || clearance <= 0.0 {
        return Err(Error::ResolutionTooCoarse(0.0));
    }
    // vicinity = k * d_min / 4; the corner opening at that radius is 2 r sin(angle / 2)
    let need = (3.0 / d_min)
        .max(4.0 * (CORNER_PX + 1.0) / (2.0 * d_min * sin_half))
        .max(CLEARANCE_PX / clearance);
    let fits = |k: u32| {
        let (w, h) = canvas_size(pts, d_min, k);
        w.saturating_mul(h) <= MAX_CANVAS_PIXELS
    };
    let (mut lo, mut hi) = (1u32, need.ceil().min(u32::MAX as f64) as u32);
    if !fits(lo) {
        let (w, h) = canvas_size(pts, d_min, 1);
        return Err(Error::CanvasTooLarge(w.saturating_mul(h)));
    }
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let d_px = d_min * f64::from(lo);
    if d_px < 3.0 {
        return Err(Error::ResolutionTooCoarse(d_px));
    }
    Ok(lo)
}

fn point_segment_distance(p: &crate::gap::Point, a: &crate::gap::Point, b: &crate::gap::Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0) };
    (p.x - (a.x + t * dx)).hypot(p.y - (a.y + t * dy))
}
