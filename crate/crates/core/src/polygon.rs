//! Regular polygons: the O(n) minimum tour and, for odd `n`, the star that
//! maximises the euclidean tour length.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gap::{brute_force_optimum_limited, build_instance, Metric, Point, Tour, DEFAULT_BRUTE_FORCE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolygonSpec {
    n: usize,
    radius: f64,
}

impl PolygonSpec {
    pub fn new(n: usize, radius: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("need at least 3 vertices, got {n}")));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidPolygon(format!("radius must be finite and positive, got {radius}")));
        }
        Ok(PolygonSpec { n, radius })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Vertex `i` sits at angle `2πi/n` on the circle of the given radius.
pub fn regular_polygon(spec: &PolygonSpec) -> Vec<Point> {
    (0..spec.n)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / spec.n as f64;
            Point::new(spec.radius * a.cos(), spec.radius * a.sin())
        })
        .collect()
}

fn cycle_length(points: &[Point], order: &[usize], metric: Metric) -> f64 {
    let n = order.len();
    (0..n).map(|k| metric.distance(&points[order[k]], &points[order[(k + 1) % n]])).sum()
}

/// The polygon itself, `0, 1, ..., n-1`, priced under `metric`.
pub fn min_polygon_tour(spec: &PolygonSpec, metric: Metric) -> Tour {
    let points = regular_polygon(spec);
    let order: Vec<usize> = (0..spec.n).collect();
    let cost = cycle_length(&points, &order, metric);
    Tour::from_parts(order, cost)
}

/// Visiting order `(1 + (i-1)(n-1)/2) mod n` for `i = 1..n`.
///
/// Consecutive entries differ by `(n-1)/2`, which is coprime to odd `n`, so
/// every residue appears once. Vertex 0 is the one the 1-based labelling
/// calls `n`.
pub fn star_order(n: usize) -> Result<Vec<usize>> {
    if n % 2 == 0 || n < 5 {
        return Err(Error::InvalidPolygon(format!("a star needs odd n >= 5, got {n}")));
    }
    let step = (n - 1) / 2;
    Ok((1..=n).map(|i| (1 + (i - 1) * step) % n).collect())
}

pub fn star_tour(spec: &PolygonSpec, metric: Metric) -> Result<Tour> {
    let order = star_order(spec.n)?;
    let cost = cycle_length(&regular_polygon(spec), &order, metric);
    Ok(Tour::from_parts(order, cost))
}

/// 1-based labels with the closing vertex repeated, e.g. `1 7 13 ... 8 1`.
pub fn one_based_labels(order: &[usize]) -> Vec<usize> {
    let n = order.len();
    let label = |v: usize| if v == 0 { n } else { v };
    order.iter().chain(order.first()).map(|&v| label(v)).collect()
}

/// Exhaustive maximum-cost cycle (lexicographic tie-break).
pub fn max_tour_bruteforce(points: &[Point], metric: Metric) -> Result<Tour> {
    max_tour_bruteforce_limited(points, metric, DEFAULT_BRUTE_FORCE_LIMIT)
}

pub fn max_tour_bruteforce_limited(points: &[Point], metric: Metric, limit: usize) -> Result<Tour> {
    let instance = build_instance(points, metric)?;
    brute_force_optimum_limited(&instance, true, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap::{brute_force_optimum, canonicalize, check_permutation};

    fn spec(n: usize) -> PolygonSpec {
        PolygonSpec::new(n, 1.0).unwrap()
    }

    /// `Some(step)` when the order walks the polygon with a constant index
    /// step (in either direction).
    fn constant_step(order: &[usize]) -> Option<usize> {
        let n = order.len();
        let step = (order[1] + n - order[0]) % n;
        (0..n).all(|k| (order[(k + 1) % n] + n - order[k]) % n == step).then_some(step)
    }

    #[test]
    fn square_vertices() {
        let pts = regular_polygon(&spec(4));
        let expect = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (p, (x, y)) in pts.iter().zip(expect) {
            assert!((p.x - x).abs() < 1e-12 && (p.y - y).abs() < 1e-12);
        }
    }

    #[test]
    fn points_on_circle_and_chords() {
        for n in 3..30 {
            for p in regular_polygon(&PolygonSpec::new(n, 2.5).unwrap()) {
                assert!(((p.x * p.x + p.y * p.y).sqrt() - 2.5).abs() < 1e-12);
            }
        }
        let pts = regular_polygon(&spec(5));
        let side = Metric::Euclidean.distance(&pts[0], &pts[1]);
        assert!((side - 2.0 * (PI / 5.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn spec_validation() {
        assert!(PolygonSpec::new(2, 1.0).is_err());
        assert!(PolygonSpec::new(5, 0.0).is_err());
        assert!(PolygonSpec::new(5, f64::INFINITY).is_err());
        assert!(PolygonSpec::new(5, -1.0).is_err());
    }

    #[test]
    fn min_tour_costs() {
        let t = min_polygon_tour(&spec(5), Metric::Euclidean);
        assert_eq!(t.order(), &[0, 1, 2, 3, 4]);
        assert!((t.cost() - 10.0 * (PI / 5.0).sin()).abs() < 1e-12);
        let sq = min_polygon_tour(&spec(4), Metric::Euclidean);
        assert!((sq.cost() - 4.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn min_tour_matches_oracle_for_small_n() {
        for n in 4..=8 {
            for metric in Metric::ALL {
                let pts = regular_polygon(&spec(n));
                let inst = build_instance(&pts, metric).unwrap();
                let best = brute_force_optimum(&inst, false).unwrap();
                let t = min_polygon_tour(&spec(n), metric);
                assert!((best.cost() - t.cost()).abs() < 1e-9, "n={n} {metric}");
                assert_eq!(best.order(), t.order(), "n={n} {metric}");
            }
        }
    }

    #[test]
    fn star_13_sequence() {
        let order = star_order(13).unwrap();
        assert_eq!(one_based_labels(&order), vec![1, 7, 13, 6, 12, 5, 11, 4, 10, 3, 9, 2, 8, 1]);
    }

    #[test]
    fn star_5_is_the_pentagram() {
        assert_eq!(star_order(5).unwrap(), vec![1, 3, 0, 2, 4]);
        assert_eq!(constant_step(&star_order(5).unwrap()), Some(2));
    }

    #[test]
    fn star_rejects_even_and_small() {
        for n in [3, 4, 6, 14] {
            assert!(star_tour(&spec(n.max(3)), Metric::Euclidean).is_err(), "n={n}");
        }
    }

    #[test]
    fn star_is_permutation_with_equal_chords() {
        for n in (5..60).step_by(2) {
            let t = star_tour(&spec(n), Metric::Euclidean).unwrap();
            check_permutation(t.order(), n).unwrap();
            let pts = regular_polygon(&spec(n));
            let lens: Vec<f64> = t.edges().map(|(a, b)| Metric::Euclidean.distance(&pts[a], &pts[b])).collect();
            assert!(lens.iter().all(|l| (l - lens[0]).abs() < 1e-9));
            assert!(t.cost() > min_polygon_tour(&spec(n), Metric::Euclidean).cost());
        }
    }

    #[test]
    fn star_matches_oracle_maximum() {
        for n in [5, 7, 9] {
            let pts = regular_polygon(&spec(n));
            let max = max_tour_bruteforce(&pts, Metric::Euclidean).unwrap();
            let star = star_tour(&spec(n), Metric::Euclidean).unwrap();
            assert!((max.cost() - star.cost()).abs() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn even_maximum_is_not_a_star_pattern() {
        for n in [6, 8] {
            let pts = regular_polygon(&spec(n));
            let max = max_tour_bruteforce(&pts, Metric::Euclidean).unwrap();
            assert_eq!(constant_step(max.order()), None, "n={n}");
            assert_eq!(constant_step(canonicalize(&max).order()), None);
        }
    }

    #[test]
    fn pentagon_maximisers_under_max_and_euclidean() {
        let pts = regular_polygon(&spec(5));
        let e = max_tour_bruteforce(&pts, Metric::Euclidean).unwrap();
        let m = max_tour_bruteforce(&pts, Metric::Max).unwrap();
        // Each is the exact maximum under its own metric.
        let star_m = star_tour(&spec(5), Metric::Max).unwrap();
        assert!(m.cost() >= star_m.cost() - 1e-9);
        assert!(e.cost() > m.cost());
    }
}
