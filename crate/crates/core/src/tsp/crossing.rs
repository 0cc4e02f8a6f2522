use robust::{orient2d, Coord};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gap::{check_permutation, GapInstance, Point, Tour};

/// Two intersecting tour edges: `(order[i], order[i+1])` and
/// `(order[j], order[(j+1) % n])`, with `i + 2 <= j` and not the pair that
/// shares the closing vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Crossing {
    pub i: usize,
    pub j: usize,
}

impl Crossing {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.i + 2 > self.j || self.j >= n || (self.i == 0 && self.j == n - 1) {
            return Err(Error::InvalidCrossing { i: self.i, j: self.j, n });
        }
        Ok(())
    }
}

fn coord(p: &Point) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

/// Sign of the exact orientation of `c` relative to the directed line `ab`.
pub fn orientation(a: &Point, b: &Point, c: &Point) -> i8 {
    let d = orient2d(coord(a), coord(b), coord(c));
    if d > 0.0 {
        1
    } else if d < 0.0 {
        -1
    } else {
        0
    }
}

/// `c` is collinear with `ab` and inside its bounding box.
fn on_segment(a: &Point, b: &Point, c: &Point) -> bool {
    c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
}

/// Closed-segment intersection test with exact predicates.
pub fn segments_intersect(p1: &Point, p2: &Point, q1: &Point, q2: &Point) -> bool {
    let d1 = orientation(q1, q2, p1);
    let d2 = orientation(q1, q2, p2);
    let d3 = orientation(p1, p2, q1);
    let d4 = orientation(p1, p2, q2);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(q1, q2, p1))
        || (d2 == 0 && on_segment(q1, q2, p2))
        || (d3 == 0 && on_segment(p1, p2, q1))
        || (d4 == 0 && on_segment(p1, p2, q2))
}

/// True when the two segments cross at a single interior point of both.
pub fn segments_cross_properly(p1: &Point, p2: &Point, q1: &Point, q2: &Point) -> bool {
    orientation(q1, q2, p1) * orientation(q1, q2, p2) < 0 && orientation(p1, p2, q1) * orientation(p1, p2, q2) < 0
}

fn edge_pair_intersects(order: &[usize], pts: &[Point], i: usize, j: usize) -> bool {
    let n = order.len();
    let (a, b) = (&pts[order[i]], &pts[order[i + 1]]);
    let (c, d) = (&pts[order[j]], &pts[order[(j + 1) % n]]);
    segments_intersect(a, b, c, d)
}

fn crossing_pairs(n: usize) -> impl Iterator<Item = Crossing> {
    (0..n.saturating_sub(2)).flat_map(move |i| {
        let last = if i == 0 { n - 2 } else { n - 1 };
        ((i + 2)..=last).map(move |j| Crossing { i, j })
    })
}

fn prepared<'a>(tour: &Tour, instance: &'a GapInstance) -> Result<&'a [Point]> {
    let pts = instance.planar_coords()?;
    check_permutation(tour.order(), instance.n())?;
    Ok(pts)
}

/// The lexicographically first `(i, j)` whose edges intersect, or `None`
/// when the drawn cycle is a simple closed curve.
pub fn find_crossing(tour: &Tour, instance: &GapInstance) -> Result<Option<Crossing>> {
    let pts = prepared(tour, instance)?;
    let order = tour.order();
    Ok(crossing_pairs(order.len()).find(|c| edge_pair_intersects(order, pts, c.i, c.j)))
}

/// Every intersecting pair of non-adjacent edges, in lexicographic order.
pub fn all_crossings(tour: &Tour, instance: &GapInstance) -> Result<Vec<Crossing>> {
    let pts = prepared(tour, instance)?;
    let order = tour.order();
    Ok(crossing_pairs(order.len()).filter(|c| edge_pair_intersects(order, pts, c.i, c.j)).collect())
}

/// Intersecting edge pairs of a cycle drawn over the given points.
pub(crate) fn crossings_among(order: &[usize], pts: &[Point]) -> Vec<Crossing> {
    crossing_pairs(order.len()).filter(|c| edge_pair_intersects(order, pts, c.i, c.j)).collect()
}

/// Whether the crossing is a proper interior intersection (as opposed to a
/// touching or collinear-overlap configuration).
pub fn is_proper(tour: &Tour, crossing: Crossing, instance: &GapInstance) -> Result<bool> {
    let pts = prepared(tour, instance)?;
    let o = tour.order();
    let n = o.len();
    crossing.validate(n)?;
    let (a, b) = (&pts[o[crossing.i]], &pts[o[crossing.i + 1]]);
    let (c, d) = (&pts[o[crossing.j]], &pts[o[(crossing.j + 1) % n]]);
    Ok(segments_cross_properly(a, b, c, d))
}

/// Cost change of the reversal, `removed - added`; positive means cheaper.
pub fn uncross_gain(tour: &Tour, crossing: Crossing, instance: &GapInstance) -> Result<f64> {
    let n = instance.n();
    check_permutation(tour.order(), n)?;
    crossing.validate(n)?;
    let o = tour.order();
    let (a, b, c, d) = (o[crossing.i], o[crossing.i + 1], o[crossing.j], o[(crossing.j + 1) % n]);
    Ok(instance.cost(a, b) + instance.cost(c, d) - instance.cost(a, c) - instance.cost(b, d))
}

/// Reverses positions `i+1..=j`, reconnecting `v_i -> v_j` and
/// `v_{i+1} -> v_{j+1}`.
pub fn uncross(tour: &Tour, crossing: Crossing, instance: &GapInstance) -> Result<Tour> {
    let n = instance.n();
    check_permutation(tour.order(), n)?;
    crossing.validate(n)?;
    let mut order = tour.order().to_vec();
    order[crossing.i + 1..=crossing.j].reverse();
    Tour::new(order, instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap::{build_instance, Metric};

    pub(crate) fn square() -> GapInstance {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].map(Point::from);
        build_instance(&pts, Metric::Euclidean).unwrap()
    }

    /// Eight points on a circle whose cyclic order is v1 v2 v6 v5 v4 v3 v7 v8,
    /// so the identity tour crosses only at v2 v3 / v6 v7.
    pub(crate) fn eight_city() -> GapInstance {
        let circle_order = [0usize, 1, 5, 4, 3, 2, 6, 7];
        let mut pts = vec![Point::new(0.0, 0.0); 8];
        for (slot, &v) in circle_order.iter().enumerate() {
            let a = 2.0 * std::f64::consts::PI * slot as f64 / 8.0;
            pts[v] = Point::new(a.cos(), a.sin());
        }
        build_instance(&pts, Metric::Euclidean).unwrap()
    }

    #[test]
    fn square_perimeter_has_no_crossing() {
        let inst = square();
        let t = Tour::new(vec![0, 1, 2, 3], &inst).unwrap();
        assert_eq!(find_crossing(&t, &inst).unwrap(), None);
    }

    #[test]
    fn crossed_square() {
        let inst = square();
        let t = Tour::new(vec![0, 2, 1, 3], &inst).unwrap();
        let c = find_crossing(&t, &inst).unwrap().unwrap();
        assert_eq!(c, Crossing { i: 0, j: 2 });
        assert!(is_proper(&t, c, &inst).unwrap());
        let fixed = uncross(&t, c, &inst).unwrap();
        assert_eq!(fixed.order(), &[0, 1, 2, 3]);
        assert!((t.cost() - (2.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(fixed.cost(), 4.0);
        assert!((uncross_gain(&t, c, &inst).unwrap() - (t.cost() - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn eight_city_topology() {
        let inst = eight_city();
        let t = Tour::new((0..8).collect(), &inst).unwrap();
        assert_eq!(all_crossings(&t, &inst).unwrap(), vec![Crossing { i: 1, j: 5 }]);
        let c = find_crossing(&t, &inst).unwrap().unwrap();
        let fixed = uncross(&t, c, &inst).unwrap();
        // 1-based: v1 v2 v6 v5 v4 v3 v7 v8
        assert_eq!(fixed.order(), &[0, 1, 5, 4, 3, 2, 6, 7]);
        assert!(fixed.cost() < t.cost());
        assert_eq!(find_crossing(&fixed, &inst).unwrap(), None);
    }

    #[test]
    fn uncross_is_an_involution() {
        let inst = eight_city();
        let t = Tour::new((0..8).collect(), &inst).unwrap();
        let c = Crossing { i: 1, j: 5 };
        let twice = uncross(&uncross(&t, c, &inst).unwrap(), c, &inst).unwrap();
        assert_eq!(twice.order(), t.order());
    }

    #[test]
    fn invalid_crossings_rejected() {
        let inst = square();
        let t = Tour::new(vec![0, 1, 2, 3], &inst).unwrap();
        for (i, j) in [(0, 1), (0, 3), (1, 4), (2, 1)] {
            assert!(matches!(uncross(&t, Crossing { i, j }, &inst), Err(Error::InvalidCrossing { .. })));
        }
    }

    #[test]
    fn touching_and_collinear_cases() {
        let p = |x, y| Point::new(x, y);
        // vertex on the interior of another segment
        assert!(segments_intersect(&p(0.0, 0.0), &p(2.0, 0.0), &p(1.0, 0.0), &p(1.0, 1.0)));
        assert!(!segments_cross_properly(&p(0.0, 0.0), &p(2.0, 0.0), &p(1.0, 0.0), &p(1.0, 1.0)));
        // collinear overlap
        assert!(segments_intersect(&p(0.0, 0.0), &p(2.0, 0.0), &p(1.0, 0.0), &p(3.0, 0.0)));
        // collinear disjoint
        assert!(!segments_intersect(&p(0.0, 0.0), &p(1.0, 0.0), &p(2.0, 0.0), &p(3.0, 0.0)));
        // parallel
        assert!(!segments_intersect(&p(0.0, 0.0), &p(1.0, 0.0), &p(0.0, 1.0), &p(1.0, 1.0)));
    }

    #[test]
    fn orientation_is_exact_near_degeneracy() {
        // The naive f64 determinant mis-signs points this close to a line.
        let a = Point::new(0.5, 0.5);
        let b = Point::new(12.0, 12.0);
        let c = Point::new(24.0, 24.0);
        assert_eq!(orientation(&a, &b, &c), 0);
        let c2 = Point::new(24.0, 24.000000000000004);
        assert_eq!(orientation(&a, &b, &c2), 1);
    }

    #[test]
    fn requires_planar_coordinates() {
        let m = GapInstance::from_matrix(&[vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]]).unwrap();
        let t = Tour::new(vec![0, 1, 2], &m).unwrap();
        assert_eq!(find_crossing(&t, &m), Err(Error::NotPlanar));
    }
}
