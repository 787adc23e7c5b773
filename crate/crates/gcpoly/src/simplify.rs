//! Globally optimal collinearity-aware polyline simplification.
//!
//! A simplification selects a subsequence of the input points, endpoints
//! always included, minimizing the sum of point-to-line deviations of the
//! skipped points plus `lambda` per retained vertex. The minimum is found
//! exactly by dynamic programming over sub-polylines; a brute-force
//! enumerator and the classic Douglas-Peucker splitter are provided as an
//! optimality oracle and a baseline.
//!
//! Indices are 0-based throughout. Closed inputs are simplified over their
//! distinct points (the closing duplicate is dropped before the DP and its
//! index is re-appended to the result), so the start vertex of a ring is
//! always retained and no start-point rotation is searched.

use crate::geometry::{point_to_line, point_to_segment, Point, Polyline};
use crate::{Error, Result};

/// Parameters of the collinearity-aware simplifier.
///
/// `lambda` is the per-vertex regularization weight in pixels; `k_max`
/// bounds how many consecutive source points one simplified edge may span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplifyParams {
    pub lambda: f64,
    pub k_max: usize,
}

impl SimplifyParams {
    pub fn new(lambda: f64, k_max: usize) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidLambda(lambda));
        }
        if k_max < 2 {
            return Err(Error::InvalidKMax(k_max));
        }
        Ok(SimplifyParams { lambda, k_max })
    }
}

impl Default for SimplifyParams {
    fn default() -> Self {
        SimplifyParams { lambda: 2.0, k_max: 64 }
    }
}

/// A strictly increasing index subsequence into a source polyline,
/// endpoints included, with its objective breakdown.
///
/// `total_cost = distance_sum + lambda * vertex_count` for the `lambda` the
/// selection was produced with (`lambda = 0` for the Douglas-Peucker
/// baseline, which has no vertex charge).
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub indices: Vec<usize>,
    pub distance_sum: f64,
    pub vertex_count: usize,
    pub total_cost: f64,
}

impl Selection {
    /// The selected coordinates of `line`.
    pub fn points(&self, line: &Polyline) -> Vec<Point> {
        self.indices.iter().map(|&i| line.points()[i]).collect()
    }

    /// The simplified polyline itself (closed iff the source is closed).
    pub fn to_polyline(&self, line: &Polyline) -> Result<Polyline> {
        Polyline::new(self.points(line), line.is_closed())
    }
}

/// Dense square matrix of `f64`, row-major.
#[derive(Debug, Clone)]
pub struct Matrix {
    size: usize,
    data: Vec<f64>,
}

impl Matrix {
    fn zeros(size: usize) -> Self {
        Matrix { size, data: vec![0.0; size * size] }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.size + j] = v;
    }
}

/// Dense square matrix of `u32` indices/counts, row-major.
#[derive(Debug, Clone)]
pub struct IndexMatrix {
    size: usize,
    data: Vec<u32>,
}

impl IndexMatrix {
    fn zeros(size: usize) -> Self {
        IndexMatrix { size, data: vec![0; size * size] }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.size + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.size + j] = v;
    }
}

/// The dense tables of one simplification call, over the DP point sequence
/// (distinct points for closed inputs).
#[derive(Debug, Clone)]
pub struct DpWorkspace {
    /// Banded deviation sums: `distance[i][j]` is the summed point-to-line
    /// deviation of the points strictly between `i` and `j`, populated for
    /// `0 < j - i <= k_max`.
    pub distance: Matrix,
    /// `distance + lambda`, the per-transition cost.
    pub cost: Matrix,
    /// Optimal sub-problem values: `best[i][e]` is the minimal transition
    /// cost of simplifying the sub-polyline from `i` to `e`.
    pub best: Matrix,
    /// Backtracking successors: the first hop of the optimal plan for
    /// `(i, e)`.
    pub successor: IndexMatrix,
    /// Vertex counts of the optimal plans, used for tie-breaking.
    pub best_count: IndexMatrix,
}

/// Deviation-sum matrix of `line` under the `k_max` band.
///
/// `D[i][j] = sum of point_to_line(p_l, p_i, p_j)` over `i < l < j`, for
/// `0 < j - i <= k_max`; adjacent pairs cost zero.
pub fn build_distance_matrix(line: &Polyline, k_max: usize) -> Matrix {
    distance_matrix(line.points(), k_max)
}

fn distance_matrix(pts: &[Point], k_max: usize) -> Matrix {
    let n = pts.len();
    let mut d = Matrix::zeros(n);
    for i in 0..n {
        let a = pts[i];
        let hi = (i + k_max).min(n - 1);
        for j in (i + 2)..=hi {
            let b = pts[j];
            let vx = b.x - a.x;
            let vy = b.y - a.y;
            let len = (vx * vx + vy * vy).sqrt();
            let mut acc = 0.0;
            if len == 0.0 {
                for p in &pts[i + 1..j] {
                    acc += p.distance(a);
                }
            } else {
                let inv = 1.0 / len;
                for p in &pts[i + 1..j] {
                    let cross = vx * (p.y - a.y) - vy * (p.x - a.x);
                    acc += cross.abs() * inv;
                }
            }
            d.set(i, j, acc);
        }
    }
    d
}

/// The DP point sequence: all points for open inputs, the distinct points
/// for closed ones.
fn dp_points(line: &Polyline) -> &[Point] {
    line.distinct_points()
}

/// Globally optimal simplification of `line` under `params`.
///
/// Ties on cost are broken by smaller vertex count, then by the
/// lexicographically smallest index sequence.
pub fn gcp_simplify(line: &Polyline, params: &SimplifyParams) -> Result<Selection> {
    Ok(run_gcp(line, params).0)
}

/// As [`gcp_simplify`], also returning the DP tables.
pub fn gcp_simplify_with_workspace(
    line: &Polyline,
    params: &SimplifyParams,
) -> Result<(Selection, DpWorkspace)> {
    let (sel, tables) = run_gcp(line, params);
    let n = tables.best_t.size();
    // The sweep stores its value and count tables transposed so the inner
    // scan stays row-contiguous; present them in (start, end) orientation.
    let mut best = Matrix::zeros(n);
    let mut best_count = IndexMatrix::zeros(n);
    for i in 0..n {
        for e in 0..n {
            best.set(i, e, tables.best_t.get(e, i));
            best_count.set(i, e, tables.count_t.get(e, i));
        }
    }
    let ws = DpWorkspace {
        distance: tables.distance,
        cost: tables.cost,
        best,
        successor: tables.successor,
        best_count,
    };
    Ok((sel, ws))
}

struct DpTables {
    distance: Matrix,
    cost: Matrix,
    /// `best_t[e][i]`: optimal value of the sub-problem from `i` to `e`.
    best_t: Matrix,
    /// `count_t[e][i]`: vertex count of that optimal plan.
    count_t: IndexMatrix,
    successor: IndexMatrix,
}

fn run_gcp(line: &Polyline, params: &SimplifyParams) -> (Selection, DpTables) {
    let pts = dp_points(line);
    let n = pts.len();
    if n < 2 {
        // A closed two-point polyline has a single distinct point.
        let sel = finish_selection(line, vec![0], 0.0, params.lambda);
        return (sel, empty_tables(n, params.lambda));
    }

    let distance = distance_matrix(pts, params.k_max);
    let mut cost = distance.clone();
    for v in &mut cost.data {
        *v += params.lambda;
    }

    let mut best_t = Matrix::zeros(n);
    let mut count_t = IndexMatrix::zeros(n);
    let mut successor = IndexMatrix::zeros(n);
    for i in 0..n {
        count_t.set(i, i, 1);
    }

    for span in 1..n {
        for i in 0..n - span {
            let e = i + span;
            let mut b_cost = f64::INFINITY;
            let mut b_m = u32::MAX;
            let mut b_j = 0u32;
            let hi = i + span.min(params.k_max);
            for j in i + 1..=hi {
                let cand = best_t.get(e, j) + cost.get(i, j);
                let cand_m = count_t.get(e, j) + 1;
                // Strict improvement only: ascending j keeps the smallest
                // first hop among (cost, count) ties, which is the
                // lexicographically smallest sequence.
                if cand < b_cost || (cand == b_cost && cand_m < b_m) {
                    b_cost = cand;
                    b_m = cand_m;
                    b_j = j as u32;
                }
            }
            best_t.set(e, i, b_cost);
            count_t.set(e, i, b_m);
            successor.set(i, e, b_j);
        }
    }

    let mut indices = vec![0usize];
    let mut j = 0usize;
    while j < n - 1 {
        j = successor.get(j, n - 1) as usize;
        indices.push(j);
    }

    let mut distance_sum = 0.0;
    for w in indices.windows(2) {
        distance_sum += distance.get(w[0], w[1]);
    }

    let sel = finish_selection(line, indices, distance_sum, params.lambda);
    (sel, DpTables { distance, cost, best_t, count_t, successor })
}

fn empty_tables(n: usize, lambda: f64) -> DpTables {
    let distance = Matrix::zeros(n);
    let mut cost = distance.clone();
    for v in &mut cost.data {
        *v += lambda;
    }
    DpTables {
        distance,
        cost,
        best_t: Matrix::zeros(n),
        count_t: IndexMatrix::zeros(n),
        successor: IndexMatrix::zeros(n),
    }
}

/// Re-append the closing duplicate of a closed source and assemble the
/// final selection record.
fn finish_selection(
    line: &Polyline,
    mut indices: Vec<usize>,
    distance_sum: f64,
    lambda: f64,
) -> Selection {
    if line.is_closed() {
        indices.push(line.len() - 1);
    }
    let vertex_count = indices.len();
    Selection {
        total_cost: distance_sum + lambda * vertex_count as f64,
        indices,
        distance_sum,
        vertex_count,
    }
}

/// Exhaustive optimality oracle: enumerates every endpoint-containing
/// subsequence respecting the `k_max` gap bound and returns the minimum
/// under the same tie-breaking as [`gcp_simplify`].
///
/// Deviations are recomputed directly from [`point_to_line`], independent
/// of the DP tables. Capped at 20 points.
pub fn brute_force_simplify(line: &Polyline, params: &SimplifyParams) -> Result<Selection> {
    let pts = dp_points(line);
    let n = pts.len();
    if n > 20 {
        return Err(Error::BruteForceTooLong(n));
    }
    if n < 2 {
        return Ok(finish_selection(line, vec![0], 0.0, params.lambda));
    }

    struct Search<'a> {
        pts: &'a [Point],
        lambda: f64,
        k_max: usize,
        current: Vec<usize>,
        best: Option<(f64, usize, Vec<usize>)>,
    }

    impl Search<'_> {
        fn run(&mut self, last: usize) {
            let n = self.pts.len();
            if last == n - 1 {
                let dist: f64 = self
                    .current
                    .windows(2)
                    .map(|w| segment_deviation(self.pts, w[0], w[1]))
                    .sum();
                let m = self.current.len();
                let total = dist + self.lambda * m as f64;
                // DFS extends by ascending indices, so sequences arrive in
                // lexicographic order; strict improvement keeps the first.
                let better = match &self.best {
                    None => true,
                    Some((bt, bm, _)) => total < *bt || (total == *bt && m < *bm),
                };
                if better {
                    self.best = Some((total, m, self.current.clone()));
                }
                return;
            }
            let hi = (last + self.k_max).min(n - 1);
            for next in last + 1..=hi {
                self.current.push(next);
                self.run(next);
                self.current.pop();
            }
        }
    }

    let mut search = Search {
        pts,
        lambda: params.lambda,
        k_max: params.k_max,
        current: vec![0],
        best: None,
    };
    search.run(0);
    let (total, m, indices) = search.best.expect("adjacent steps are always allowed");
    let distance_sum = total - params.lambda * m as f64;
    Ok(finish_selection(line, indices, distance_sum, params.lambda))
}

fn segment_deviation(pts: &[Point], i: usize, j: usize) -> f64 {
    pts[i + 1..j]
        .iter()
        .map(|&q| point_to_line(q, pts[i], pts[j]))
        .sum()
}

/// Classic Douglas-Peucker baseline: recursively keeps the interior point
/// of maximal deviation to the current chord while that deviation exceeds
/// `tolerance`. Deviation is measured to the segment chord. The returned
/// selection is scored with `lambda = 0`.
pub fn douglas_peucker(line: &Polyline, tolerance: f64) -> Result<Selection> {
    if !tolerance.is_finite() || tolerance < 0.0 {
        return Err(Error::InvalidTolerance(tolerance));
    }
    let pts = dp_points(line);
    let n = pts.len();
    if n < 2 {
        return Ok(finish_selection(line, vec![0], 0.0, 0.0));
    }
    let mut indices = vec![0usize];
    rdp_recurse(pts, 0, n - 1, tolerance, &mut indices);
    indices.push(n - 1);

    let distance_sum: f64 = indices
        .windows(2)
        .map(|w| segment_deviation(pts, w[0], w[1]))
        .sum();
    Ok(finish_selection(line, indices, distance_sum, 0.0))
}

fn rdp_recurse(pts: &[Point], lo: usize, hi: usize, tolerance: f64, out: &mut Vec<usize>) {
    if hi <= lo + 1 {
        return;
    }
    let mut split = lo + 1;
    let mut max_dev = f64::NEG_INFINITY;
    for l in lo + 1..hi {
        let d = point_to_segment(pts[l], pts[lo], pts[hi]);
        if d > max_dev {
            max_dev = d;
            split = l;
        }
    }
    if max_dev > tolerance {
        rdp_recurse(pts, lo, split, tolerance, out);
        out.push(split);
        rdp_recurse(pts, split, hi, tolerance, out);
    }
}

/// Objective breakdown of a selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objective {
    pub distance_sum: f64,
    pub vertex_count: usize,
    pub total: f64,
}

/// Re-score a selection from scratch: the summed point-to-line deviation of
/// every skipped point against its covering chord, with no DP tables, plus
/// `lambda` per retained vertex.
pub fn objective_value(line: &Polyline, indices: &[usize], lambda: f64) -> Result<Objective> {
    validate_indices(line, indices)?;
    let pts = line.points();
    let distance_sum: f64 = indices
        .windows(2)
        .map(|w| segment_deviation(pts, w[0], w[1]))
        .sum();
    Ok(Objective {
        distance_sum,
        vertex_count: indices.len(),
        total: distance_sum + lambda * indices.len() as f64,
    })
}

pub(crate) fn validate_indices(line: &Polyline, indices: &[usize]) -> Result<()> {
    let n = line.len();
    let mut prev: Option<usize> = None;
    for &idx in indices {
        if idx >= n {
            return Err(Error::IndexOutOfRange(idx, n));
        }
        if let Some(p) = prev {
            if idx <= p {
                return Err(Error::IndicesNotIncreasing);
            }
        }
        prev = Some(idx);
    }
    Ok(())
}
