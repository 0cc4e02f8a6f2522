//! Instances of the general assignment problem: a complete graph with an
//! extended-real cost matrix and a Hamiltonian-cycle objective.
//!
//! `f64::INFINITY` is the extended-real +∞. Every instance carries it on the
//! diagonal, and sums involving it stay infinite.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest instance the exhaustive oracles accept unless told otherwise.
pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    /// `max(|dx|, |dy|)`.
    Max,
    /// `|dx| + |dy|`.
    Abs,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Euclidean, Metric::Max, Metric::Abs];

    pub fn distance(self, a: &Point, b: &Point) -> f64 {
        let dx = (a.x - b.x).abs();
        let dy = (a.y - b.y).abs();
        let dz = match (a.z, b.z) {
            (Some(za), Some(zb)) => (za - zb).abs(),
            _ => 0.0,
        };
        match self {
            Metric::Euclidean => (dx * dx + dy * dy + dz * dz).sqrt(),
            Metric::Max => dx.max(dy).max(dz),
            Metric::Abs => dx + dy + dz,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Euclidean => "euclidean",
            Metric::Max => "max",
            Metric::Abs => "abs",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "euc" | "euc_2d" => Ok(Metric::Euclidean),
            "max" => Ok(Metric::Max),
            "abs" | "manhattan" => Ok(Metric::Abs),
            other => Err(Error::InvalidConfig(format!("unknown metric {other:?}"))),
        }
    }
}

/// A city location. `z` is set for the 3D instances that only need costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub z: Option<f64>,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y, z: None }
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        Point { x, y, z: Some(z) }
    }

    pub fn is_planar(&self) -> bool {
        self.z.is_none()
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapInstance {
    n: usize,
    cost: Vec<f64>,
    coords: Option<Vec<Point>>,
    metric: Option<Metric>,
    rounded: bool,
}

impl GapInstance {
    /// Builds the symmetric cost matrix of `metric` over `points`.
    pub fn from_points(points: &[Point], metric: Metric) -> Result<Self> {
        let n = points.len();
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        let planar = points[0].is_planar();
        for (i, p) in points.iter().enumerate() {
            if p.is_planar() != planar {
                return Err(Error::MixedDimensions);
            }
            let coords = [Some(p.x), Some(p.y), p.z];
            for (c, v) in coords.iter().enumerate() {
                if let Some(v) = v {
                    if !v.is_finite() {
                        return Err(Error::NonFiniteCoordinate { point: i, coord: c });
                    }
                }
            }
        }
        let mut cost = vec![f64::INFINITY; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = metric.distance(&points[i], &points[j]);
                cost[i * n + j] = d;
                cost[j * n + i] = d;
            }
        }
        Ok(GapInstance {
            n,
            cost,
            coords: Some(points.to_vec()),
            metric: Some(metric),
            rounded: false,
        })
    }

    /// Wraps an explicit cost matrix. The diagonal is forced to +∞; the
    /// matrix need not be symmetric.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        let mut cost = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { row: i, len: row.len(), n });
            }
            for (j, &c) in row.iter().enumerate() {
                if i == j {
                    cost.push(f64::INFINITY);
                } else if c.is_nan() || c < 0.0 {
                    return Err(Error::InvalidCost(i, j));
                } else {
                    cost.push(c);
                }
            }
        }
        Ok(GapInstance { n, cost, coords: None, metric: None, rounded: false })
    }

    /// Rounds every finite cost to the nearest integer (the TSPLIB `nint`
    /// convention). Coordinates and the declared metric are kept.
    pub fn with_rounded_costs(mut self) -> Self {
        for c in self.cost.iter_mut().filter(|c| c.is_finite()) {
            *c = (*c + 0.5).floor();
        }
        self.rounded = true;
        self
    }

    /// Attaches display coordinates to a matrix instance (board squares).
    pub(crate) fn with_coords(mut self, coords: Vec<Point>) -> Self {
        debug_assert_eq!(coords.len(), self.n);
        self.coords = Some(coords);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> f64 {
        self.cost[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.cost[i * self.n..(i + 1) * self.n]
    }

    pub fn coords(&self) -> Option<&[Point]> {
        self.coords.as_deref()
    }

    pub fn metric(&self) -> Option<Metric> {
        self.metric
    }

    pub fn is_rounded(&self) -> bool {
        self.rounded
    }

    pub fn is_planar(&self) -> bool {
        self.coords.as_ref().is_some_and(|c| c.iter().all(Point::is_planar))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.cost(i, j) == self.cost(j, i)))
    }

    /// Planar coordinates, or `NotPlanar`.
    pub fn planar_coords(&self) -> Result<&[Point]> {
        match self.coords.as_deref() {
            Some(c) if c.iter().all(Point::is_planar) => Ok(c),
            _ => Err(Error::NotPlanar),
        }
    }
}

/// Convenience alias for [`GapInstance::from_points`].
pub fn build_instance(points: &[Point], metric: Metric) -> Result<GapInstance> {
    GapInstance::from_points(points, metric)
}

/// A Hamiltonian cycle. The closing edge from the last vertex back to the
/// first is implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    order: Vec<usize>,
    cost: f64,
}

impl Tour {
    pub fn new(order: Vec<usize>, instance: &GapInstance) -> Result<Self> {
        let cost = tour_cost(&order, instance)?;
        Ok(Tour { order, cost })
    }

    /// Caller guarantees `order` is a permutation and `cost` its cost.
    pub(crate) fn from_parts(order: Vec<usize>, cost: f64) -> Self {
        Tour { order, cost }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Consecutive vertex pairs including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.order.len();
        (0..n).map(move |k| (self.order[k], self.order[(k + 1) % n]))
    }
}

pub(crate) fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::NotAPermutation {
            n,
            reason: format!("length {} != {n}", order.len()),
        });
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n {
            return Err(Error::NotAPermutation { n, reason: format!("vertex {v} out of range") });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::NotAPermutation { n, reason: format!("vertex {v} repeated") });
        }
    }
    Ok(())
}

#[inline]
pub(crate) fn cycle_cost_unchecked(order: &[usize], instance: &GapInstance) -> f64 {
    let n = order.len();
    let mut total = 0.0;
    for k in 0..n {
        total += instance.cost(order[k], order[(k + 1) % n]);
    }
    total
}

/// Sum of the `n` edge costs along the cycle, closing edge included.
pub fn tour_cost(order: &[usize], instance: &GapInstance) -> Result<f64> {
    check_permutation(order, instance.n())?;
    Ok(cycle_cost_unchecked(order, instance))
}

/// Rotates so vertex 0 comes first, then orients so the second entry is
/// smaller than the last.
pub fn canonicalize(tour: &Tour) -> Tour {
    Tour::from_parts(canonical_order(&tour.order), tour.cost)
}

pub(crate) fn canonical_order(order: &[usize]) -> Vec<usize> {
    let n = order.len();
    let start = order.iter().position(|&v| v == 0).unwrap_or(0);
    let mut out: Vec<usize> = (0..n).map(|k| order[(start + k) % n]).collect();
    if n > 2 && out[1] > out[n - 1] {
        out[1..].reverse();
    }
    out
}

fn better(candidate: f64, best: f64, maximize: bool) -> bool {
    let tol = 1e-9 * best.abs().max(1.0);
    if maximize {
        candidate > best + tol || (best == f64::NEG_INFINITY && candidate > best)
    } else {
        candidate < best - tol || (best == f64::INFINITY && candidate < best)
    }
}

/// Lexicographic successor of `a`; false when `a` was the last permutation.
fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Exact optimum over all `(n-1)!/2` undirected cycles with vertex 0 fixed
/// first. Costs within a relative 1e-9 of each other tie, and ties go to the
/// lexicographically smallest order.
pub fn brute_force_optimum(instance: &GapInstance, maximize: bool) -> Result<Tour> {
    brute_force_optimum_limited(instance, maximize, DEFAULT_BRUTE_FORCE_LIMIT)
}

pub fn brute_force_optimum_limited(
    instance: &GapInstance,
    maximize: bool,
    limit: usize,
) -> Result<Tour> {
    let n = instance.n();
    if n > limit {
        return Err(Error::OverBruteForceLimit { n, limit });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut best_order = order.clone();
    let mut best = if maximize { f64::NEG_INFINITY } else { f64::INFINITY };
    loop {
        // Reversed duplicates have order[1] > order[n-1].
        if order[1] < order[n - 1] {
            let c = cycle_cost_unchecked(&order, instance);
            if better(c, best, maximize) {
                best = c;
                best_order.copy_from_slice(&order);
            }
        }
        if !next_permutation(&mut order[1..]) {
            break;
        }
    }
    Ok(Tour::from_parts(best_order, best))
}

/// For each vertex `v`, the 1-based ranks of its two tour edges
/// (`[to predecessor, to successor]`) within row `v` of the cost matrix
/// sorted ascending. Rank is one plus the number of strictly cheaper
/// entries, so tied edges share a rank. The +∞ diagonal is excluded.
pub fn edge_rank_profile(tour: &Tour, instance: &GapInstance) -> Result<Vec<[usize; 2]>> {
    let n = instance.n();
    check_permutation(&tour.order, n)?;
    let rank = |v: usize, c: f64| {
        1 + instance
            .row(v)
            .iter()
            .enumerate()
            .filter(|&(j, &x)| j != v && x < c)
            .count()
    };
    let mut ranks = vec![[0usize; 2]; n];
    for k in 0..n {
        let v = tour.order[k];
        let prev = tour.order[(k + n - 1) % n];
        let next = tour.order[(k + 1) % n];
        ranks[v] = [rank(v, instance.cost(v, prev)), rank(v, instance.cost(v, next))];
    }
    Ok(ranks)
}
