//! Elementary 2-D primitives: points, polylines, polygons, distances,
//! areas and resampling.
//!
//! Everything here is double precision in pixel units, pure and
//! deterministic. Values are immutable once constructed and safe to share
//! across threads.

use crate::{Error, Result};

/// A 2-D point in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: Point) -> f64 {
        let dx = other.x - self.x;
        let dy = other.y - self.y;
        (dx * dx + dy * dy).sqrt()
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// An ordered point sequence, open or closed.
///
/// A closed polyline stores the closing duplicate explicitly:
/// `points[0] == points[len - 1]` (exact equality). No two consecutive
/// points may be identical except that closing duplicate.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Point>,
    closed: bool,
}

impl Polyline {
    /// Build an open polyline.
    pub fn open(points: Vec<Point>) -> Result<Self> {
        Self::new(points, false)
    }

    /// Build a closed polyline. The closing duplicate must already be
    /// present as the last point.
    pub fn closed(points: Vec<Point>) -> Result<Self> {
        Self::new(points, true)
    }

    /// Build a closed polyline from distinct ring points, appending the
    /// closing duplicate.
    pub fn closed_from_distinct(mut points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::TooFewPoints { min: 2, got: 0 });
        }
        points.push(points[0]);
        Self::new(points, true)
    }

    pub fn new(points: Vec<Point>, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints { min: 2, got: points.len() });
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        if closed && points[0] != points[points.len() - 1] {
            return Err(Error::NotClosed);
        }
        for i in 1..points.len() {
            if points[i] == points[i - 1] {
                // A two-point closed polyline is its own closing duplicate.
                if !(closed && points.len() == 2) {
                    return Err(Error::DuplicatePoint(i));
                }
            }
        }
        Ok(Polyline { points, closed })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Total number of stored points, including the closing duplicate.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of distinct points: `len()` for open polylines, `len() - 1`
    /// for closed ones.
    pub fn distinct_len(&self) -> usize {
        if self.closed {
            self.points.len() - 1
        } else {
            self.points.len()
        }
    }

    /// The distinct points (closing duplicate stripped for closed inputs).
    pub fn distinct_points(&self) -> &[Point] {
        &self.points[..self.distinct_len()]
    }

    /// Total arc length over all segments (the seam segment of a closed
    /// polyline is included via the stored duplicate).
    pub fn arc_length(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[0].distance(w[1]))
            .sum()
    }
}

/// One anti-clockwise exterior ring plus zero or more clockwise interior
/// rings (holes).
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    exterior: Polyline,
    interiors: Vec<Polyline>,
}

impl Polygon {
    pub fn new(exterior: Polyline, interiors: Vec<Polyline>) -> Result<Self> {
        if signed_area(&exterior)? <= 0.0 {
            return Err(Error::ExteriorNotCcw);
        }
        for ring in &interiors {
            if signed_area(ring)? >= 0.0 {
                return Err(Error::InteriorNotCw);
            }
        }
        Ok(Polygon { exterior, interiors })
    }

    pub fn exterior(&self) -> &Polyline {
        &self.exterior
    }

    pub fn interiors(&self) -> &[Polyline] {
        &self.interiors
    }

    /// All rings, exterior first.
    pub fn rings(&self) -> impl Iterator<Item = &Polyline> {
        std::iter::once(&self.exterior).chain(self.interiors.iter())
    }

    /// Distinct vertex count over all rings (closing duplicates counted
    /// once).
    pub fn distinct_vertex_count(&self) -> usize {
        self.rings().map(Polyline::distinct_len).sum()
    }
}

/// Perpendicular distance from `q` to the infinite line through `a` and
/// `b`. Degenerate `a == b` falls back to the point distance.
pub fn point_to_line(q: Point, a: Point, b: Point) -> f64 {
    let vx = b.x - a.x;
    let vy = b.y - a.y;
    let len = (vx * vx + vy * vy).sqrt();
    if len == 0.0 {
        return q.distance(a);
    }
    let cross = vx * (q.y - a.y) - vy * (q.x - a.x);
    cross.abs() / len
}

/// Distance from `q` to the segment `a`-`b`.
pub fn point_to_segment(q: Point, a: Point, b: Point) -> f64 {
    q.distance(closest_point_on_segment(q, a, b))
}

/// The point of segment `a`-`b` closest to `q`.
pub fn closest_point_on_segment(q: Point, a: Point, b: Point) -> Point {
    let vx = b.x - a.x;
    let vy = b.y - a.y;
    let len2 = vx * vx + vy * vy;
    if len2 == 0.0 {
        return a;
    }
    let t = ((q.x - a.x) * vx + (q.y - a.y) * vy) / len2;
    let t = t.clamp(0.0, 1.0);
    Point::new(a.x + t * vx, a.y + t * vy)
}

/// The point of `line` closest to `q` (ties go to the earliest segment).
pub fn closest_point_on_polyline(line: &Polyline, q: Point) -> Point {
    let pts = line.points();
    let mut best = pts[0];
    let mut best_d = f64::INFINITY;
    for w in pts.windows(2) {
        let c = closest_point_on_segment(q, w[0], w[1]);
        let d = q.distance(c);
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

/// Shoelace signed area of a closed ring; positive iff anti-clockwise.
pub fn signed_area(ring: &Polyline) -> Result<f64> {
    if !ring.is_closed() {
        return Err(Error::RingNotClosed);
    }
    let mut acc = 0.0;
    for w in ring.points().windows(2) {
        acc += w[0].x * w[1].y - w[1].x * w[0].y;
    }
    Ok(0.5 * acc)
}

/// Resample `line` at a fixed arc-length step.
///
/// Output points lie on the input polyline at consecutive arc-length
/// spacing exactly `step`; the final gap may be shorter (the last input
/// point closes an open polyline, the starting point closes a closed one).
/// The first input point is always preserved.
pub fn resample_uniform(line: &Polyline, step: f64) -> Result<Polyline> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidStep(step));
    }
    let pts = line.points();
    let mut cum = Vec::with_capacity(pts.len());
    cum.push(0.0f64);
    for w in pts.windows(2) {
        let last = *cum.last().unwrap();
        cum.push(last + w[0].distance(w[1]));
    }
    let total = *cum.last().unwrap();
    if total <= 0.0 {
        return Err(Error::ZeroArcLength);
    }

    // Keep the last regular sample clear of the final point so the output
    // never carries a consecutive duplicate.
    let guard = total - f64::max(1e-9, total * 1e-12);
    let mut out = vec![pts[0]];
    let mut seg = 0usize;
    let mut k = 1u64;
    loop {
        let s = k as f64 * step;
        if s >= guard {
            break;
        }
        while cum[seg + 1] < s {
            seg += 1;
        }
        let a = pts[seg];
        let b = pts[seg + 1];
        let t = (s - cum[seg]) / (cum[seg + 1] - cum[seg]);
        out.push(Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        k += 1;
    }
    if line.is_closed() {
        out.push(pts[0]);
        Polyline::closed(out)
    } else {
        out.push(pts[pts.len() - 1]);
        Polyline::open(out)
    }
}

/// Uniformly downsample `line` to at most `limit` points.
///
/// Identity when already within the limit; otherwise keeps indices
/// `round(i * (T - 1) / (limit - 1))`, preserving endpoints and closure.
pub fn downsample_to(line: &Polyline, limit: usize) -> Result<Polyline> {
    if limit < 2 {
        return Err(Error::InvalidLimit(limit));
    }
    let t = line.len();
    if t <= limit {
        return Ok(line.clone());
    }
    let ratio = (t - 1) as f64 / (limit - 1) as f64;
    let pts: Vec<Point> = (0..limit)
        .map(|i| line.points()[(i as f64 * ratio).round() as usize])
        .collect();
    Polyline::new(pts, line.is_closed())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn point_to_line_unit_offset() {
        assert_eq!(point_to_line(pt(0.0, 1.0), pt(0.0, 0.0), pt(1.0, 0.0)), 1.0);
    }

    #[test]
    fn point_to_line_on_line() {
        assert_eq!(point_to_line(pt(5.0, 5.0), pt(0.0, 0.0), pt(10.0, 10.0)), 0.0);
    }

    #[test]
    fn point_to_line_diagonal() {
        let d = point_to_line(pt(2.0, 0.0), pt(0.0, 0.0), pt(2.0, 2.0));
        assert!((d - 2.0f64.sqrt()).abs() < 1e-12, "got {d}");
    }

    #[test]
    fn point_to_line_degenerate_chord() {
        let d = point_to_line(pt(3.0, 4.0), pt(0.0, 0.0), pt(0.0, 0.0));
        assert_eq!(d, 5.0);
    }

    #[test]
    fn signed_area_unit_square() {
        let sq = Polyline::closed(vec![
            pt(0.0, 0.0),
            pt(1.0, 0.0),
            pt(1.0, 1.0),
            pt(0.0, 1.0),
            pt(0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(signed_area(&sq).unwrap(), 1.0);

        let rev = Polyline::closed(vec![
            pt(0.0, 0.0),
            pt(0.0, 1.0),
            pt(1.0, 1.0),
            pt(1.0, 0.0),
            pt(0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(signed_area(&rev).unwrap(), -1.0);
    }

    #[test]
    fn signed_area_collinear_ring_is_zero() {
        let ring = Polyline::closed(vec![
            pt(0.0, 0.0),
            pt(1.0, 0.0),
            pt(2.0, 0.0),
            pt(0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(signed_area(&ring).unwrap(), 0.0);
    }

    #[test]
    fn signed_area_rejects_open() {
        let open = Polyline::open(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0)]).unwrap();
        assert!(matches!(signed_area(&open), Err(Error::RingNotClosed)));
    }

    #[test]
    fn resample_segment_with_remainder() {
        let line = Polyline::open(vec![pt(0.0, 0.0), pt(10.0, 0.0)]).unwrap();
        let out = resample_uniform(&line, 4.0).unwrap();
        let expect = [pt(0.0, 0.0), pt(4.0, 0.0), pt(8.0, 0.0), pt(10.0, 0.0)];
        assert_eq!(out.points(), expect);
    }

    #[test]
    fn resample_closed_square_exact_step() {
        let sq = Polyline::closed(vec![
            pt(0.0, 0.0),
            pt(1.0, 0.0),
            pt(1.0, 1.0),
            pt(0.0, 1.0),
            pt(0.0, 0.0),
        ])
        .unwrap();
        let out = resample_uniform(&sq, 1.0).unwrap();
        assert!(out.is_closed());
        assert_eq!(out.points(), sq.points());
    }

    #[test]
    fn resample_l_shape() {
        let line =
            Polyline::open(vec![pt(0.0, 0.0), pt(3.0, 0.0), pt(3.0, 3.0)]).unwrap();
        let out = resample_uniform(&line, 2.0).unwrap();
        let expect = [pt(0.0, 0.0), pt(2.0, 0.0), pt(3.0, 1.0), pt(3.0, 3.0)];
        assert_eq!(out.len(), 4);
        for (got, want) in out.points().iter().zip(expect.iter()) {
            assert!(got.distance(*want) < 1e-12, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn resample_zero_length_errors() {
        let line = Polyline::closed(vec![pt(1.0, 1.0), pt(1.0, 1.0)]).unwrap();
        assert!(matches!(resample_uniform(&line, 1.0), Err(Error::ZeroArcLength)));
    }

    #[test]
    fn downsample_identity_at_cap() {
        let pts: Vec<Point> = (0..5).map(|i| pt(i as f64, 0.0)).collect();
        let line = Polyline::open(pts).unwrap();
        assert_eq!(downsample_to(&line, 5).unwrap(), line);

        let pts: Vec<Point> = (0..512).map(|i| pt(i as f64, (i % 2) as f64)).collect();
        let line = Polyline::open(pts).unwrap();
        assert_eq!(downsample_to(&line, 512).unwrap(), line);
    }

    #[test]
    fn downsample_picks_rounded_indices() {
        let pts: Vec<Point> = (0..9).map(|i| pt(i as f64, (i % 2) as f64)).collect();
        let line = Polyline::open(pts).unwrap();
        let out = downsample_to(&line, 3).unwrap();
        assert_eq!(
            out.points(),
            [pt(0.0, 0.0), pt(4.0, 0.0), pt(8.0, 0.0)]
        );
    }

    #[test]
    fn closed_polyline_requires_duplicate() {
        let r = Polyline::closed(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0)]);
        assert!(matches!(r, Err(Error::NotClosed)));
    }

    #[test]
    fn consecutive_duplicates_rejected() {
        let r = Polyline::open(vec![pt(0.0, 0.0), pt(0.0, 0.0), pt(1.0, 0.0)]);
        assert!(matches!(r, Err(Error::DuplicatePoint(1))));
    }

    #[test]
    fn polygon_orientation_enforced() {
        let ccw = Polyline::closed(vec![
            pt(0.0, 0.0),
            pt(4.0, 0.0),
            pt(4.0, 4.0),
            pt(0.0, 4.0),
            pt(0.0, 0.0),
        ])
        .unwrap();
        let cw_hole = Polyline::closed(vec![
            pt(1.0, 1.0),
            pt(1.0, 2.0),
            pt(2.0, 2.0),
            pt(2.0, 1.0),
            pt(1.0, 1.0),
        ])
        .unwrap();
        assert!(Polygon::new(ccw.clone(), vec![cw_hole.clone()]).is_ok());
        assert!(matches!(
            Polygon::new(cw_hole, vec![]),
            Err(Error::ExteriorNotCcw)
        ));
        assert!(matches!(
            Polygon::new(ccw.clone(), vec![ccw]),
            Err(Error::InteriorNotCw)
        ));
    }
}
