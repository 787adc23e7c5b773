//! Alignment losses between polylines as pure numeric functions:
//! Hungarian vertex matching, smooth-L1 vertex loss, angular loss, and the
//! global collinearity loss with its analytic gradient.

use crate::geometry::{Point, Polyline};
use crate::simplify::{objective_value, validate_indices};
use crate::{Error, Result};

/// A one-to-one assignment between prediction and ground-truth vertices,
/// restricted to pairs closer than `threshold` pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// `(pred index, gt index)` pairs, sorted by the prediction index.
    pub pairs: Vec<(usize, usize)>,
    pub threshold: f64,
}

impl Matching {
    /// Extract the matched coordinates, ordered by prediction index.
    pub fn matched_points(&self, pred: &Polyline, gt: &Polyline) -> (Vec<Point>, Vec<Point>) {
        let p = self.pairs.iter().map(|&(i, _)| pred.points()[i]).collect();
        let g = self.pairs.iter().map(|&(_, j)| gt.points()[j]).collect();
        (p, g)
    }
}

/// Minimum-total-Euclidean-cost one-to-one matching of `pred` against `gt`
/// vertices, keeping only pairs with distance strictly below `eps_match`.
///
/// A rectangular instance leaves the surplus side unmatched. An empty
/// matching is a valid result.
pub fn hungarian_match(pred: &Polyline, gt: &Polyline, eps_match: f64) -> Matching {
    let p = pred.points();
    let g = gt.points();
    let n = p.len().max(g.len());
    // Dummy rows/columns absorb the surplus side at zero cost.
    let assignment = solve_assignment(n, |i, j| {
        if i < p.len() && j < g.len() {
            p[i].distance(g[j])
        } else {
            0.0
        }
    });

    let mut pairs = Vec::new();
    for (i, &j) in assignment.iter().enumerate().take(p.len()) {
        if j < g.len() && p[i].distance(g[j]) < eps_match {
            pairs.push((i, j));
        }
    }
    Matching { pairs, threshold: eps_match }
}

/// O(n^3) Hungarian algorithm with potentials on an implicit square cost
/// matrix; returns the column assigned to each row.
fn solve_assignment(n: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    // 1-based arrays; p[j] is the row matched to column j, column 0 is the
    // staging slot for the row currently being inserted.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![usize::MAX; n];
    for j in 1..=n {
        assignment[p[j] - 1] = j - 1;
    }
    assignment
}

fn smooth_l1(d: f64, beta: f64) -> f64 {
    let a = d.abs();
    if a < beta {
        0.5 * a * a / beta
    } else {
        a - 0.5 * beta
    }
}

/// Smooth-L1 loss between matched vertices, averaged over all matched
/// coordinate components. Zero for an empty matching.
pub fn vertex_loss(pred_matched: &[Point], gt_matched: &[Point], beta: f64) -> Result<f64> {
    if pred_matched.len() != gt_matched.len() {
        return Err(Error::MatchedLengthMismatch {
            pred: pred_matched.len(),
            gt: gt_matched.len(),
        });
    }
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::InvalidBeta(beta));
    }
    if pred_matched.is_empty() {
        return Ok(0.0);
    }
    let sum: f64 = pred_matched
        .iter()
        .zip(gt_matched)
        .map(|(p, g)| smooth_l1(p.x - g.x, beta) + smooth_l1(p.y - g.y, beta))
        .sum();
    Ok(sum / (2 * pred_matched.len()) as f64)
}

/// Interior angle at `v` between the edges to `u` and `w`, in `[0, pi]`.
fn interior_angle(u: Point, v: Point, w: Point) -> f64 {
    let ax = u.x - v.x;
    let ay = u.y - v.y;
    let bx = w.x - v.x;
    let by = w.y - v.y;
    (ax * by - ay * bx).abs().atan2(ax * bx + ay * by)
}

/// Maximum absolute interior-angle difference over every run of three
/// consecutive matched points, in radians within `[0, pi]`. Zero when
/// fewer than three points are matched.
pub fn angular_loss(pred_matched: &[Point], gt_matched: &[Point]) -> f64 {
    let n = pred_matched.len().min(gt_matched.len());
    if n < 3 {
        return 0.0;
    }
    (0..n - 2)
        .map(|i| {
            let a = interior_angle(pred_matched[i], pred_matched[i + 1], pred_matched[i + 2]);
            let b = interior_angle(gt_matched[i], gt_matched[i + 1], gt_matched[i + 2]);
            (a - b).abs()
        })
        .fold(0.0, f64::max)
}

/// The collinearity objective's distance term at a selection: the summed
/// point-to-line deviation of every skipped point against its covering
/// chord. Shares its implementation with the simplifier's re-scoring.
pub fn collinearity_loss(line: &Polyline, indices: &[usize]) -> Result<f64> {
    Ok(objective_value(line, indices, 0.0)?.distance_sum)
}

/// Analytic gradient of [`collinearity_loss`] with respect to every
/// coordinate of `line`, covering both the skipped points and the selected
/// chord endpoints.
///
/// Summands with deviation below 1e-9, or with a degenerate chord, follow
/// the subgradient convention and contribute zero.
pub fn collinearity_loss_grad(line: &Polyline, indices: &[usize]) -> Result<Vec<(f64, f64)>> {
    validate_indices(line, indices)?;
    let pts = line.points();
    let mut grad = vec![(0.0f64, 0.0f64); pts.len()];

    for w in indices.windows(2) {
        let (s, e) = (w[0], w[1]);
        let a = pts[s];
        let b = pts[e];
        let vx = b.x - a.x;
        let vy = b.y - a.y;
        let len2 = vx * vx + vy * vy;
        let len = len2.sqrt();
        if len <= 1e-12 {
            continue;
        }
        let inv = 1.0 / len;
        for l in s + 1..e {
            let q = pts[l];
            let cross = vx * (q.y - a.y) - vy * (q.x - a.x);
            let d = cross.abs() * inv;
            if d <= 1e-9 {
                continue;
            }
            let sign = cross.signum();

            // d = |cross| / len with cross = (b - a) x (q - a):
            // d_q d = sign * perp(b - a) / len
            grad[l].0 += sign * -vy * inv;
            grad[l].1 += sign * vx * inv;
            // d_a d = sign * perp(q - b) / len - d * (a - b) / len^2
            grad[s].0 += sign * -(q.y - b.y) * inv - d * (a.x - b.x) / len2;
            grad[s].1 += sign * (q.x - b.x) * inv - d * (a.y - b.y) / len2;
            // d_b d = -sign * perp(q - a) / len - d * (b - a) / len^2
            grad[e].0 += -sign * -(q.y - a.y) * inv - d * vx / len2;
            grad[e].1 += -sign * (q.x - a.x) * inv - d * vy / len2;
        }
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn open(coords: &[(f64, f64)]) -> Polyline {
        Polyline::open(coords.iter().map(|&(x, y)| pt(x, y)).collect()).unwrap()
    }

    /// Enumerate every injective assignment of rows to columns and return
    /// the minimal total cost; factorial oracle for small instances.
    fn brute_force_assignment_cost(cost: &[Vec<f64>]) -> f64 {
        fn recurse(cost: &[Vec<f64>], row: usize, used: &mut Vec<bool>, acc: f64, best: &mut f64) {
            if row == cost.len() {
                if acc < *best {
                    *best = acc;
                }
                return;
            }
            for col in 0..used.len() {
                if !used[col] {
                    used[col] = true;
                    recurse(cost, row + 1, used, acc + cost[row][col], best);
                    used[col] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        let mut used = vec![false; cost[0].len()];
        recurse(cost, 0, &mut used, 0.0, &mut best);
        best
    }

    #[test]
    fn match_identical_polylines() {
        let p = open(&[(0.0, 0.0), (3.0, 1.0), (7.0, 2.0)]);
        let m = hungarian_match(&p, &p, 15.0);
        assert_eq!(m.pairs, vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn match_threshold_filters_far_pairs() {
        let pred = open(&[(0.0, 0.0), (100.0, 0.0)]);
        let gt = open(&[(1.0, 0.0), (300.0, 300.0)]);
        let m = hungarian_match(&pred, &gt, 15.0);
        assert_eq!(m.pairs, vec![(0, 0)]);
    }

    #[test]
    fn match_crossing_assignment_is_optimal() {
        let pred = open(&[(0.0, 0.0), (10.0, 0.0), (20.0, 0.0)]);
        let gt = open(&[(10.5, 0.0), (0.2, 0.0), (19.0, 0.0)]);
        let m = hungarian_match(&pred, &gt, 1e9);
        let total: f64 = m
            .pairs
            .iter()
            .map(|&(i, j)| pred.points()[i].distance(gt.points()[j]))
            .sum();
        let cost: Vec<Vec<f64>> = pred
            .points()
            .iter()
            .map(|p| gt.points().iter().map(|g| p.distance(*g)).collect())
            .collect();
        let expected = brute_force_assignment_cost(&cost);
        assert!((total - expected).abs() < 1e-9, "{total} vs {expected}");
        assert_eq!(m.pairs, vec![(0, 1), (1, 0), (2, 2)]);
    }

    #[test]
    fn vertex_loss_zero_on_identical() {
        let pts = [pt(1.0, 2.0), pt(3.0, 4.0)];
        assert_eq!(vertex_loss(&pts, &pts, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn vertex_loss_boundary_of_quadratic_zone() {
        let pred = [pt(1.0, 0.0)];
        let gt = [pt(0.0, 0.0)];
        let loss = vertex_loss(&pred, &gt, 1.0).unwrap();
        assert!((loss - 0.25).abs() < 1e-12);
    }

    #[test]
    fn vertex_loss_empty_and_mismatch() {
        assert_eq!(vertex_loss(&[], &[], 1.0).unwrap(), 0.0);
        assert!(matches!(
            vertex_loss(&[pt(0.0, 0.0)], &[], 1.0),
            Err(Error::MatchedLengthMismatch { .. })
        ));
    }

    #[test]
    fn angular_loss_zero_on_identical() {
        let pts = [pt(0.0, 0.0), pt(1.0, 0.0), pt(2.0, 1.0), pt(3.0, 0.0)];
        assert_eq!(angular_loss(&pts, &pts), 0.0);
    }

    #[test]
    fn angular_loss_right_angle_vs_straight() {
        let pred = [pt(0.0, 0.0), pt(1.0, 0.0), pt(2.0, 0.0)];
        let gt = [pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0)];
        let loss = angular_loss(&pred, &gt);
        assert!((loss - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn angular_loss_matches_triple_enumeration() {
        let pred = [
            pt(0.0, 0.0),
            pt(1.0, 0.5),
            pt(2.0, -0.3),
            pt(3.0, 0.8),
            pt(4.0, 0.0),
        ];
        let gt = [
            pt(0.0, 0.1),
            pt(1.1, 0.0),
            pt(1.9, 0.4),
            pt(3.2, 0.0),
            pt(4.0, 0.6),
        ];
        let mut expect = 0.0f64;
        for i in 0..3 {
            let a = interior_angle(pred[i], pred[i + 1], pred[i + 2]);
            let b = interior_angle(gt[i], gt[i + 1], gt[i + 2]);
            expect = expect.max((a - b).abs());
        }
        assert_eq!(angular_loss(&pred, &gt), expect);
        assert!(angular_loss(&pred[..2], &gt[..2]) == 0.0);
    }

    #[test]
    fn collinearity_loss_examples() {
        let collinear = open(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]);
        assert_eq!(collinearity_loss(&collinear, &[0, 3]).unwrap(), 0.0);

        let corner = open(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (2.0, 1.0), (2.0, 2.0)]);
        let loss = collinearity_loss(&corner, &[0, 4]).unwrap();
        assert!((loss - 2.828_427_124_746_190_3).abs() < 1e-9);
        assert_eq!(collinearity_loss(&corner, &[0, 2, 4]).unwrap(), 0.0);
    }

    #[test]
    fn grad_zero_on_collinear() {
        let collinear = open(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]);
        let g = collinearity_loss_grad(&collinear, &[0, 3]).unwrap();
        assert!(g.iter().all(|&(x, y)| x == 0.0 && y == 0.0));
    }

    #[test]
    fn grad_single_interior_point() {
        let p = open(&[(0.0, 0.0), (0.0, 1.0), (2.0, 0.0)]);
        let g = collinearity_loss_grad(&p, &[0, 2]).unwrap();
        // Interior point: unit normal of the chord.
        assert!((g[1].0 - 0.0).abs() < 1e-12);
        assert!((g[1].1 - 1.0).abs() < 1e-12);
        // Endpoint gradients sum to the opposing force.
        let ex = g[0].0 + g[2].0;
        let ey = g[0].1 + g[2].1;
        assert!((ex - 0.0).abs() < 1e-12 && (ey + 1.0).abs() < 1e-12);
    }

    #[test]
    fn grad_matches_finite_differences() {
        let p = open(&[
            (0.0, 0.0),
            (1.3, 2.1),
            (2.7, -0.8),
            (4.2, 1.5),
            (5.0, 0.3),
            (6.4, 2.2),
        ]);
        let sel = [0usize, 2, 5];
        let analytic = collinearity_loss_grad(&p, &sel).unwrap();
        let h = 1e-6;
        for i in 0..p.len() {
            for axis in 0..2 {
                let mut plus = p.points().to_vec();
                let mut minus = p.points().to_vec();
                if axis == 0 {
                    plus[i].x += h;
                    minus[i].x -= h;
                } else {
                    plus[i].y += h;
                    minus[i].y -= h;
                }
                let lp = collinearity_loss(&Polyline::open(plus).unwrap(), &sel).unwrap();
                let lm = collinearity_loss(&Polyline::open(minus).unwrap(), &sel).unwrap();
                let fd = (lp - lm) / (2.0 * h);
                let an = if axis == 0 { analytic[i].0 } else { analytic[i].1 };
                let denom = fd.abs().max(1e-3);
                assert!(
                    (an - fd).abs() / denom < 1e-4,
                    "point {i} axis {axis}: analytic {an} vs fd {fd}"
                );
            }
        }
    }
}
