//! Binary raster masks, border tracing and fixed-length polyline windows.
//!
//! Contours live on pixel corners: pixel `(row, col)` covers the unit
//! square `x in [col, col+1], y in [row, row+1]`, so a traced polygon
//! rasterized back onto the same grid reproduces the mask exactly.
//! Foreground is 4-connected, holes (background) 8-connected, the standard
//! border-following convention.

use std::collections::HashMap;

use crate::geometry::{signed_area, Point, Polygon, Polyline};
use crate::{Error, Result};

/// A binary H x W pixel grid, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterMask {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RasterMask {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyMaskDimensions);
        }
        if data.len() != width * height {
            return Err(Error::MaskSizeMismatch { width, height, got: data.len() });
        }
        if let Some(&bad) = data.iter().find(|&&v| v > 1) {
            return Err(Error::MaskValueOutOfRange(bad));
        }
        Ok(RasterMask { width, height, data })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![0; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut data = vec![0u8; width * height];
        for r in 0..height {
            for c in 0..width {
                data[r * width + c] = f(r, c) as u8;
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.width + col] != 0
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: bool) {
        self.data[row * self.width + col] = v as u8;
    }

    /// Foreground test tolerating out-of-range coordinates.
    fn fg(&self, row: i64, col: i64) -> bool {
        row >= 0
            && col >= 0
            && (row as usize) < self.height
            && (col as usize) < self.width
            && self.get(row as usize, col as usize)
    }

    pub fn foreground_count(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }
}

/// Keep only the largest 4-connected foreground component.
///
/// Ties on pixel count go to the component whose first pixel comes
/// earliest in row-major scan order.
pub fn largest_component(mask: &RasterMask) -> Result<RasterMask> {
    let (w, h) = (mask.width, mask.height);
    let mut label = vec![0u32; w * h];
    let mut next = 0u32;
    let mut best: Option<(usize, usize, u32)> = None; // (count, first_idx, label)

    let mut queue = Vec::new();
    for start in 0..w * h {
        if mask.data[start] == 0 || label[start] != 0 {
            continue;
        }
        next += 1;
        let mut count = 0usize;
        queue.clear();
        queue.push(start);
        label[start] = next;
        while let Some(idx) = queue.pop() {
            count += 1;
            let (r, c) = (idx / w, idx % w);
            let mut visit = |nr: usize, nc: usize| {
                let nidx = nr * w + nc;
                if mask.data[nidx] != 0 && label[nidx] == 0 {
                    label[nidx] = next;
                    queue.push(nidx);
                }
            };
            if r > 0 {
                visit(r - 1, c);
            }
            if r + 1 < h {
                visit(r + 1, c);
            }
            if c > 0 {
                visit(r, c - 1);
            }
            if c + 1 < w {
                visit(r, c + 1);
            }
        }
        let candidate = (count, start, next);
        best = Some(match best {
            None => candidate,
            Some(b) => {
                if count > b.0 {
                    candidate
                } else {
                    b
                }
            }
        });
    }

    let (_, _, keep) = best.ok_or(Error::EmptyMask)?;
    let data = label.iter().map(|&l| (l == keep) as u8).collect();
    RasterMask::new(w, h, data)
}

// Boundary directions in (dx, dy) = (dcol, drow) order E, S, W, N. A
// positively oriented (shoelace > 0) traversal keeps foreground on its
// left, so at a crossing vertex the left turn hugs the current pixel,
// which keeps diagonal background 8-connected.
const DIRS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

fn left_of(dir: u8) -> u8 {
    (dir + 1) % 4
}

fn right_of(dir: u8) -> u8 {
    (dir + 3) % 4
}

/// Trace the borders of a single-component mask into a polygon.
///
/// The exterior ring is anti-clockwise (positive shoelace), holes are
/// clockwise, all on pixel-corner coordinates with collinear runs merged.
pub fn trace_contours(mask: &RasterMask) -> Result<Polygon> {
    if mask.foreground_count() == 0 {
        return Err(Error::EmptyMask);
    }

    // Oriented boundary edges keyed by their start vertex.
    let mut edges: HashMap<(i64, i64), [bool; 4]> = HashMap::new();
    let mut add = |v: (i64, i64), dir: u8| {
        edges.entry(v).or_insert([false; 4])[dir as usize] = true;
    };
    for r in 0..mask.height as i64 {
        for c in 0..mask.width as i64 {
            if !mask.fg(r, c) {
                continue;
            }
            if !mask.fg(r - 1, c) {
                add((c, r), 0); // top side, +x
            }
            if !mask.fg(r, c + 1) {
                add((c + 1, r), 1); // right side, +y
            }
            if !mask.fg(r + 1, c) {
                add((c + 1, r + 1), 2); // bottom side, -x
            }
            if !mask.fg(r, c - 1) {
                add((c, r + 1), 3); // left side, -y
            }
        }
    }

    let mut used: HashMap<(i64, i64), [bool; 4]> = HashMap::new();
    let mut rings: Vec<Polyline> = Vec::new();

    // Deterministic ring discovery: scan pixels row-major, edge kinds in
    // the order they were generated.
    for r in 0..mask.height as i64 {
        for c in 0..mask.width as i64 {
            if !mask.fg(r, c) {
                continue;
            }
            let candidates = [
                ((c, r), 0u8),
                ((c + 1, r), 1u8),
                ((c + 1, r + 1), 2u8),
                ((c, r + 1), 3u8),
            ];
            for (v0, d0) in candidates {
                let present = edges.get(&v0).map_or(false, |e| e[d0 as usize]);
                let consumed = used.get(&v0).map_or(false, |e| e[d0 as usize]);
                if present && !consumed {
                    rings.push(follow_ring(&edges, &mut used, v0, d0));
                }
            }
        }
    }

    let mut exterior = None;
    let mut interiors = Vec::new();
    let mut exterior_count = 0usize;
    for ring in rings {
        let area = signed_area(&ring)?;
        if area > 0.0 {
            exterior_count += 1;
            exterior = Some(ring);
        } else {
            interiors.push(ring);
        }
    }
    if exterior_count != 1 {
        return Err(Error::MultipleComponents(exterior_count));
    }
    Polygon::new(exterior.unwrap(), interiors)
}

fn follow_ring(
    edges: &HashMap<(i64, i64), [bool; 4]>,
    used: &mut HashMap<(i64, i64), [bool; 4]>,
    v0: (i64, i64),
    d0: u8,
) -> Polyline {
    let mut vertices = Vec::new();
    let mut dirs = Vec::new();
    let mut v = v0;
    let mut d = d0;
    loop {
        used.entry(v).or_insert([false; 4])[d as usize] = true;
        vertices.push(v);
        dirs.push(d);
        let step = DIRS[d as usize];
        let next = (v.0 + step.0, v.1 + step.1);
        // The continuation is decided by the local edge configuration:
        // prefer the left turn (pinch vertices), then straight, then right.
        let out = edges.get(&next).copied().unwrap_or([false; 4]);
        let nd = [left_of(d), d, right_of(d)]
            .into_iter()
            .find(|&cand| out[cand as usize])
            .expect("boundary edges always chain into cycles");
        if next == v0 && nd == d0 {
            break;
        }
        v = next;
        d = nd;
    }

    // Merge collinear runs: keep only vertices where the direction turns.
    let n = vertices.len();
    let mut corners = Vec::new();
    for i in 0..n {
        let prev_dir = dirs[(i + n - 1) % n];
        if dirs[i] != prev_dir {
            corners.push(vertices[i]);
        }
    }
    // Start the ring at its smallest (row, col) corner.
    let start = corners
        .iter()
        .enumerate()
        .min_by_key(|(_, v)| (v.1, v.0))
        .map(|(i, _)| i)
        .unwrap_or(0);
    corners.rotate_left(start);

    let pts = corners
        .iter()
        .map(|&(x, y)| Point::new(x as f64, y as f64))
        .collect();
    Polyline::closed_from_distinct(pts).expect("traced rings have at least 4 corners")
}

/// Per-window provenance: which source polyline it came from, the offset
/// of its first point in that polyline's distinct points, and whether it
/// wraps past the ring start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowOrigin {
    pub source: usize,
    pub start: usize,
    pub wrapped: bool,
}

/// A fixed-length window of `K` points; slots past `valid_len` repeat the
/// last valid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub points: Vec<Point>,
    pub valid_len: usize,
    pub origin: WindowOrigin,
}

/// Shape of a windowed source polyline: its distinct point count and
/// closure flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceShape {
    pub distinct_len: usize,
    pub closed: bool,
}

/// The result of cutting polylines into overlapping fixed-length windows.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedPolylines {
    pub window_size: usize,
    pub windows: Vec<Window>,
    pub sources: Vec<SourceShape>,
}

/// Cut each polyline into sliding windows of `window_size` points.
///
/// Consecutive windows share exactly one point. A polyline of length `L`
/// yields `ceil((L - 1) / (K - 1))` windows; closed polylines wrap, so
/// their final window reuses leading points instead of being padded.
pub fn segment_windows(lines: &[Polyline], window_size: usize) -> Result<WindowedPolylines> {
    if window_size < 2 {
        return Err(Error::InvalidWindowSize(window_size));
    }
    let k = window_size;
    let mut windows = Vec::new();
    let mut sources = Vec::new();

    for (source, line) in lines.iter().enumerate() {
        let distinct = line.distinct_points();
        let n = distinct.len();
        sources.push(SourceShape { distinct_len: n, closed: line.is_closed() });

        if line.is_closed() && n + 1 <= k {
            // The whole ring fits one window, closing duplicate included.
            let mut points: Vec<Point> = distinct.to_vec();
            points.push(distinct[0]);
            let valid_len = points.len();
            points.resize(k, *points.last().unwrap());
            windows.push(Window {
                points,
                valid_len,
                origin: WindowOrigin { source, start: 0, wrapped: true },
            });
        } else if line.is_closed() {
            let count = n.div_ceil(k - 1);
            for w in 0..count {
                let start = w * (k - 1);
                let points: Vec<Point> = (0..k).map(|i| distinct[(start + i) % n]).collect();
                windows.push(Window {
                    points,
                    valid_len: k,
                    origin: WindowOrigin { source, start, wrapped: start + k - 1 >= n },
                });
            }
        } else {
            let count = (n - 1).div_ceil(k - 1);
            for w in 0..count {
                let start = w * (k - 1);
                let valid_len = k.min(n - start);
                let mut points: Vec<Point> = distinct[start..start + valid_len].to_vec();
                points.resize(k, *points.last().unwrap());
                windows.push(Window {
                    points,
                    valid_len,
                    origin: WindowOrigin { source, start, wrapped: false },
                });
            }
        }
    }

    Ok(WindowedPolylines { window_size: k, windows, sources })
}

/// Invert [`segment_windows`]: points sampled into several windows are
/// merged by averaging their positions, padding is ignored.
pub fn reassemble(w: &WindowedPolylines) -> Result<Vec<Polyline>> {
    if w.window_size < 2 {
        return Err(Error::InvalidWindowSize(w.window_size));
    }
    let mut sums: Vec<Vec<(f64, f64, usize)>> = w
        .sources
        .iter()
        .map(|s| vec![(0.0, 0.0, 0usize); s.distinct_len])
        .collect();

    for win in &w.windows {
        let origin = win.origin;
        let shape = w
            .sources
            .get(origin.source)
            .ok_or_else(|| Error::InconsistentWindows(format!("unknown source {}", origin.source)))?;
        if win.valid_len < 2 || win.valid_len > w.window_size || win.points.len() != w.window_size
        {
            return Err(Error::InconsistentWindows(format!(
                "window of source {} has invalid shape",
                origin.source
            )));
        }
        let n = shape.distinct_len;
        for (i, p) in win.points[..win.valid_len].iter().enumerate() {
            let idx = if shape.closed {
                (origin.start + i) % n
            } else {
                let idx = origin.start + i;
                if idx >= n {
                    return Err(Error::InconsistentWindows(format!(
                        "window of source {} runs past its end",
                        origin.source
                    )));
                }
                idx
            };
            let slot = &mut sums[origin.source][idx];
            slot.0 += p.x;
            slot.1 += p.y;
            slot.2 += 1;
        }
    }

    let mut out = Vec::with_capacity(w.sources.len());
    for (sid, (shape, acc)) in w.sources.iter().zip(sums).enumerate() {
        let mut pts = Vec::with_capacity(shape.distinct_len);
        for (sx, sy, count) in acc {
            if count == 0 {
                return Err(Error::InconsistentWindows(format!(
                    "source {sid} has uncovered points"
                )));
            }
            pts.push(Point::new(sx / count as f64, sy / count as f64));
        }
        let line = if shape.closed {
            Polyline::closed_from_distinct(pts)?
        } else {
            Polyline::open(pts)?
        };
        out.push(line);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::signed_area;

    fn mask_from_rows(rows: &[&str]) -> RasterMask {
        let h = rows.len();
        let w = rows[0].len();
        RasterMask::from_fn(w, h, |r, c| rows[r].as_bytes()[c] == b'#').unwrap()
    }

    #[test]
    fn largest_component_identity_on_single_blob() {
        let m = mask_from_rows(&["..##", "..##", "...."]);
        assert_eq!(largest_component(&m).unwrap(), m);
    }

    #[test]
    fn largest_component_picks_strict_majority() {
        let m = mask_from_rows(&["##..#", "###.#", "....#"]);
        let big = largest_component(&m).unwrap();
        assert_eq!(big, mask_from_rows(&["##...", "###..", "....."]));
    }

    #[test]
    fn largest_component_tie_breaks_on_scan_order() {
        // Two 2-pixel blobs; the one whose first pixel scans earlier wins.
        let m = mask_from_rows(&[".#.#", ".#.#", "...."]);
        let best = largest_component(&m).unwrap();
        assert_eq!(best, mask_from_rows(&[".#..", ".#..", "...."]));
    }

    #[test]
    fn largest_component_empty_mask_errors() {
        let m = RasterMask::zeros(3, 3).unwrap();
        assert!(matches!(largest_component(&m), Err(Error::EmptyMask)));
    }

    #[test]
    fn trace_single_pixel() {
        let m = mask_from_rows(&["...", ".#.", "..."]);
        let poly = trace_contours(&m).unwrap();
        assert!(poly.interiors().is_empty());
        let pts = poly.exterior().points();
        assert_eq!(
            pts,
            [
                Point::new(1.0, 1.0),
                Point::new(2.0, 1.0),
                Point::new(2.0, 2.0),
                Point::new(1.0, 2.0),
                Point::new(1.0, 1.0),
            ]
        );
        assert_eq!(signed_area(poly.exterior()).unwrap(), 1.0);
    }

    #[test]
    fn trace_solid_square_gives_four_corners() {
        let m = mask_from_rows(&["###", "###", "###"]);
        let poly = trace_contours(&m).unwrap();
        assert_eq!(poly.exterior().len(), 5);
        assert_eq!(signed_area(poly.exterior()).unwrap(), 9.0);
        assert!(poly.interiors().is_empty());
    }

    #[test]
    fn trace_square_with_center_hole() {
        let m = mask_from_rows(&["#####", "#####", "##.##", "#####", "#####"]);
        let poly = trace_contours(&m).unwrap();
        assert_eq!(poly.exterior().len(), 5);
        assert_eq!(poly.interiors().len(), 1);
        let hole = &poly.interiors()[0];
        assert_eq!(hole.len(), 5);
        assert_eq!(signed_area(hole).unwrap(), -1.0);
        assert_eq!(signed_area(poly.exterior()).unwrap(), 25.0);
    }

    #[test]
    fn trace_rejects_multiple_components() {
        let m = mask_from_rows(&["#.#"]);
        assert!(matches!(trace_contours(&m), Err(Error::MultipleComponents(2))));
    }

    #[test]
    fn trace_pinched_diagonal_is_one_component() {
        // Background pockets touching diagonally stay connected to the
        // outside, so this is a single exterior with no hole.
        let m = mask_from_rows(&["##.", "#.#", "###"]);
        let poly = trace_contours(&m).unwrap();
        assert!(poly.interiors().is_empty());
        assert_eq!(signed_area(poly.exterior()).unwrap(), 7.0);
    }

    fn line_of(n: usize) -> Polyline {
        Polyline::open((0..n).map(|i| Point::new(i as f64, 0.0)).collect()).unwrap()
    }

    #[test]
    fn windows_single_exact_fit() {
        let w = segment_windows(&[line_of(64)], 64).unwrap();
        assert_eq!(w.windows.len(), 1);
        assert_eq!(w.windows[0].valid_len, 64);
        assert!(!w.windows[0].origin.wrapped);
    }

    #[test]
    fn windows_two_sharing_one_point() {
        let w = segment_windows(&[line_of(127)], 64).unwrap();
        assert_eq!(w.windows.len(), 2);
        assert_eq!(w.windows[0].origin.start, 0);
        assert_eq!(w.windows[1].origin.start, 63);
        assert_eq!(w.windows[0].points[63], w.windows[1].points[0]);
        assert_eq!(w.windows[1].valid_len, 64);
    }

    #[test]
    fn windows_padding_repeats_last_point() {
        let w = segment_windows(&[line_of(100)], 64).unwrap();
        assert_eq!(w.windows.len(), 2);
        assert_eq!(w.windows[1].valid_len, 37);
        let last_valid = w.windows[1].points[36];
        for p in &w.windows[1].points[37..] {
            assert_eq!(*p, last_valid);
        }
    }

    fn ring_of(n: usize) -> Polyline {
        // n distinct points on a circle.
        let pts = (0..n)
            .map(|i| {
                let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                Point::new(50.0 + 30.0 * a.cos(), 50.0 + 30.0 * a.sin())
            })
            .collect();
        Polyline::closed_from_distinct(pts).unwrap()
    }

    #[test]
    fn windows_closed_ring_wraps() {
        // 100 stored points = 99 distinct; two windows, the second wraps.
        let w = segment_windows(&[ring_of(99)], 64).unwrap();
        assert_eq!(w.windows.len(), 2);
        assert!(!w.windows[0].origin.wrapped);
        assert!(w.windows[1].origin.wrapped);
        assert_eq!(w.windows[1].valid_len, 64);
        // The wrap reuses leading points of the ring.
        assert_eq!(w.windows[1].points[63 - 27], w.windows[0].points[0]);
    }

    #[test]
    fn reassemble_round_trips_exactly() {
        let ring = ring_of(99);
        let open = line_of(127);
        let w = segment_windows(&[ring.clone(), open.clone()], 64).unwrap();
        let back = reassemble(&w).unwrap();
        assert_eq!(back, vec![ring, open]);
    }

    #[test]
    fn reassemble_averages_shared_points() {
        let mut w = segment_windows(&[line_of(127)], 64).unwrap();
        // Perturb the shared point differently in each window.
        w.windows[0].points[63] = Point::new(1.0, 0.0);
        w.windows[1].points[0] = Point::new(0.0, 1.0);
        let back = reassemble(&w).unwrap();
        assert_eq!(back[0].points()[63], Point::new(0.5, 0.5));
    }

    #[test]
    fn reassemble_rejects_uncovered_points() {
        let mut w = segment_windows(&[line_of(127)], 64).unwrap();
        w.windows.pop();
        assert!(matches!(reassemble(&w), Err(Error::InconsistentWindows(_))));
    }

    #[test]
    fn reassemble_small_ring_single_window() {
        let ring = ring_of(10);
        let w = segment_windows(&[ring.clone()], 64).unwrap();
        assert_eq!(w.windows.len(), 1);
        assert_eq!(w.windows[0].valid_len, 11);
        let back = reassemble(&w).unwrap();
        assert_eq!(back, vec![ring]);
    }
}
