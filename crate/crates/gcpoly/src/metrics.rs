//! Polygon-set evaluation: raster IoU, vertex-count metrics and the
//! maximum tangent angle error.

use crate::contour::RasterMask;
use crate::geometry::{closest_point_on_polyline, resample_uniform, Point, Polygon};
use crate::{Error, Result};

/// Default cap on `width * height * supersample^2`.
pub const DEFAULT_SAMPLE_CAP: usize = 1 << 28;

/// Arc-length spacing at which predicted contours are sampled for the
/// tangent angle error.
pub const MTA_SAMPLING_STEP: f64 = 0.1;

/// Projected steps stretched or shrunk beyond this factor of the sampling
/// step span a ground-truth corner or a collapsing projection and carry no
/// tangent information.
const MTA_MAX_STRETCH: f64 = 2.0;

/// Rasterization target: a pixel grid plus a supersampling factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalCanvas {
    width: usize,
    height: usize,
    supersample: usize,
}

impl EvalCanvas {
    pub fn new(width: usize, height: usize, supersample: usize) -> Result<Self> {
        Self::with_sample_cap(width, height, supersample, DEFAULT_SAMPLE_CAP)
    }

    pub fn with_sample_cap(
        width: usize,
        height: usize,
        supersample: usize,
        cap: usize,
    ) -> Result<Self> {
        if width == 0 || height == 0 || supersample == 0 {
            return Err(Error::InvalidCanvas);
        }
        let samples = width
            .checked_mul(height)
            .and_then(|v| v.checked_mul(supersample * supersample));
        match samples {
            Some(s) if s <= cap => Ok(EvalCanvas { width, height, supersample }),
            _ => Err(Error::CanvasTooLarge { width, height, supersample, cap }),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn supersample(&self) -> usize {
        self.supersample
    }
}

/// Rasterize a polygon set onto the canvas.
///
/// Each polygon is filled with the even-odd rule over all of its rings
/// (holes subtract); the polygons of the set are unioned. Samples are
/// taken at supersampled pixel centers and reduced by strict majority.
pub fn rasterize(polys: &[Polygon], canvas: &EvalCanvas) -> RasterMask {
    let ss = canvas.supersample;
    let sw = canvas.width * ss;
    let sh = canvas.height * ss;
    let mut super_grid = vec![0u8; sw * sh];

    for poly in polys {
        fill_even_odd(poly, sw, sh, ss, &mut super_grid);
    }

    let mut mask = RasterMask::zeros(canvas.width, canvas.height)
        .expect("canvas dimensions are validated positive");
    let majority = (ss * ss) / 2;
    for r in 0..canvas.height {
        for c in 0..canvas.width {
            let mut count = 0usize;
            for sr in 0..ss {
                for sc in 0..ss {
                    count += super_grid[(r * ss + sr) * sw + (c * ss + sc)] as usize;
                }
            }
            mask.set(r, c, count > majority);
        }
    }
    mask
}

fn fill_even_odd(poly: &Polygon, sw: usize, sh: usize, ss: usize, grid: &mut [u8]) {
    let inv_ss = 1.0 / ss as f64;
    let mut crossings: Vec<f64> = Vec::new();
    for row in 0..sh {
        let y = (row as f64 + 0.5) * inv_ss;
        crossings.clear();
        for ring in poly.rings() {
            for w in ring.points().windows(2) {
                let (p, q) = (w[0], w[1]);
                if p.y == q.y {
                    continue;
                }
                let (lo, hi) = if p.y < q.y { (p.y, q.y) } else { (q.y, p.y) };
                // Half-open rule keeps vertex hits unambiguous.
                if lo <= y && y < hi {
                    crossings.push(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y));
                }
            }
        }
        crossings.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        for pair in crossings.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            let mut col = (a * ss as f64 - 0.5).ceil().max(0.0) as usize;
            // First sample strictly right of the entry crossing.
            while (col as f64 + 0.5) * inv_ss <= a {
                col += 1;
            }
            while col < sw && (col as f64 + 0.5) * inv_ss < b {
                grid[row * sw + col] = 1;
                col += 1;
            }
        }
    }
}

fn mask_counts(a: &RasterMask, b: &RasterMask) -> (usize, usize) {
    let mut inter = 0usize;
    let mut union = 0usize;
    for (x, y) in a.data().iter().zip(b.data()) {
        inter += (*x != 0 && *y != 0) as usize;
        union += (*x != 0 || *y != 0) as usize;
    }
    (inter, union)
}

/// Raster IoU of two polygon sets. Two empty masks compare as 1.0, one
/// empty mask as 0.0.
pub fn iou(pred: &[Polygon], gt: &[Polygon], canvas: &EvalCanvas) -> f64 {
    let a = rasterize(pred, canvas);
    let b = rasterize(gt, canvas);
    mask_iou(&a, &b)
}

pub fn mask_iou(a: &RasterMask, b: &RasterMask) -> f64 {
    let (inter, union) = mask_counts(a, b);
    if union == 0 {
        return 1.0;
    }
    inter as f64 / union as f64
}

fn vertex_count(polys: &[Polygon]) -> usize {
    polys.iter().map(Polygon::distinct_vertex_count).sum()
}

/// Ratio of predicted to ground-truth vertex counts, closing duplicates
/// counted once, interior rings included.
pub fn n_ratio(pred: &[Polygon], gt: &[Polygon]) -> Result<f64> {
    let g = vertex_count(gt);
    if g == 0 {
        return Err(Error::NoGtVertices);
    }
    Ok(vertex_count(pred) as f64 / g as f64)
}

/// IoU discounted by the relative vertex-count mismatch:
/// `iou * (1 - |Np - Ng| / (Np + Ng))`; zero when both sets are empty.
pub fn c_iou(pred: &[Polygon], gt: &[Polygon], canvas: &EvalCanvas) -> f64 {
    let np = vertex_count(pred);
    let ng = vertex_count(gt);
    if np + ng == 0 {
        return 0.0;
    }
    let scale = 1.0 - (np as f64 - ng as f64).abs() / (np + ng) as f64;
    iou(pred, gt, canvas) * scale
}

/// Maximum tangent angle error between a predicted and a ground-truth
/// contour, in degrees within `[0, 180]`.
///
/// The predicted exterior is resampled at 0.1 px arc length and each
/// sample projected to its closest point on the ground-truth exterior;
/// the result is the largest tangent-angle difference between consecutive
/// sampled and projected points. Projected steps outside half to twice
/// the sampling step are degenerate correspondences (corner clustering,
/// corner crossings, collapsing projections) and are skipped.
pub fn mta(pred: &Polygon, gt: &Polygon) -> Result<f64> {
    mta_with_step(pred, gt, MTA_SAMPLING_STEP)
}

/// [`mta`] with an explicit sampling step (finer steps serve as a
/// convergence check).
pub fn mta_with_step(pred: &Polygon, gt: &Polygon, step: f64) -> Result<f64> {
    let pe = pred.exterior();
    let ge = gt.exterior();
    if pe.arc_length() <= 0.0 || ge.arc_length() <= 0.0 {
        return Err(Error::DegenerateContour);
    }
    let sampled = resample_uniform(pe, step)?;
    let projected: Vec<Point> = sampled
        .points()
        .iter()
        .map(|&q| closest_point_on_polyline(ge, q))
        .collect();

    let pts = sampled.points();
    let mut worst = 0.0f64;
    for i in 0..pts.len() - 1 {
        let p1 = pts[i];
        let p2 = pts[i + 1];
        let r1 = projected[i];
        let r2 = projected[i + 1];
        let proj_len = r1.distance(r2);
        if proj_len < step / MTA_MAX_STRETCH || proj_len > MTA_MAX_STRETCH * step {
            continue;
        }
        let ta = (p2.y - p1.y).atan2(p2.x - p1.x);
        let tb = (r2.y - r1.y).atan2(r2.x - r1.x);
        let mut d = (ta - tb).abs();
        if d > std::f64::consts::PI {
            d = 2.0 * std::f64::consts::PI - d;
        }
        worst = worst.max(d);
    }
    Ok(worst.to_degrees())
}

/// Vertex and matching counts behind a metric report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexCounts {
    pub pred: usize,
    pub gt: usize,
    pub matched_pairs: usize,
}

/// Aggregate metrics over a polygon-set comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub iou: f64,
    pub c_iou: f64,
    pub n_ratio: f64,
    pub mta_deg: f64,
    pub counts: VertexCounts,
}

/// Per-image metrics; `n_ratio`/`c_iou` are absent for images without
/// ground truth, `mta_deg` when no contour pair matched.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageMetrics {
    pub iou: f64,
    pub c_iou: Option<f64>,
    pub n_ratio: Option<f64>,
    pub mta_deg: Option<f64>,
    pub counts: VertexCounts,
}

/// Per-image metrics plus dataset means.
#[derive(Debug, Clone, PartialEq)]
pub struct SetReport {
    pub images: Vec<ImageMetrics>,
    pub aggregate: MetricReport,
    pub images_without_gt: usize,
}

/// Greedy one-to-one contour matching by pairwise IoU above 0.5.
fn match_pairs(pred: &[Polygon], gt: &[Polygon], canvas: &EvalCanvas) -> Vec<(usize, usize)> {
    let pred_masks: Vec<RasterMask> =
        pred.iter().map(|p| rasterize(std::slice::from_ref(p), canvas)).collect();
    let gt_masks: Vec<RasterMask> =
        gt.iter().map(|g| rasterize(std::slice::from_ref(g), canvas)).collect();

    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (pi, pm) in pred_masks.iter().enumerate() {
        for (gi, gm) in gt_masks.iter().enumerate() {
            let v = mask_iou(pm, gm);
            if v > 0.5 {
                candidates.push((v, pi, gi));
            }
        }
    }
    candidates.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut used_pred = vec![false; pred.len()];
    let mut used_gt = vec![false; gt.len()];
    let mut pairs = Vec::new();
    for (_, pi, gi) in candidates {
        if !used_pred[pi] && !used_gt[gi] {
            used_pred[pi] = true;
            used_gt[gi] = true;
            pairs.push((pi, gi));
        }
    }
    pairs
}

/// Evaluate parallel per-image polygon sets.
///
/// Dataset `iou`, `c_iou` and `n_ratio` are the means of per-image values
/// (images without ground truth skipped and counted); the dataset MTA is
/// the mean over all matched contour pairs.
pub fn evaluate_set(
    preds: &[Vec<Polygon>],
    gts: &[Vec<Polygon>],
    canvas: &EvalCanvas,
) -> Result<SetReport> {
    if preds.len() != gts.len() {
        return Err(Error::ImageCountMismatch { pred: preds.len(), gt: gts.len() });
    }

    let mut images = Vec::with_capacity(preds.len());
    let mut mta_sum = 0.0f64;
    let mut mta_count = 0usize;
    let mut totals = VertexCounts { pred: 0, gt: 0, matched_pairs: 0 };

    for (pred, gt) in preds.iter().zip(gts) {
        let image_iou = iou(pred, gt, canvas);
        let np = vertex_count(pred);
        let ng = vertex_count(gt);
        let (image_c_iou, image_n_ratio) = if ng > 0 {
            (Some(c_iou(pred, gt, canvas)), Some(np as f64 / ng as f64))
        } else {
            (None, None)
        };

        let pairs = match_pairs(pred, gt, canvas);
        let mut pair_sum = 0.0;
        for &(pi, gi) in &pairs {
            let v = mta(&pred[pi], &gt[gi])?;
            pair_sum += v;
            mta_sum += v;
        }
        mta_count += pairs.len();

        totals.pred += np;
        totals.gt += ng;
        totals.matched_pairs += pairs.len();

        images.push(ImageMetrics {
            iou: image_iou,
            c_iou: image_c_iou,
            n_ratio: image_n_ratio,
            mta_deg: if pairs.is_empty() { None } else { Some(pair_sum / pairs.len() as f64) },
            counts: VertexCounts { pred: np, gt: ng, matched_pairs: pairs.len() },
        });
    }

    let mean = |values: Vec<f64>| {
        if values.is_empty() {
            0.0
        } else {
            values.iter().sum::<f64>() / values.len() as f64
        }
    };
    let aggregate = MetricReport {
        iou: mean(images.iter().map(|m| m.iou).collect()),
        c_iou: mean(images.iter().filter_map(|m| m.c_iou).collect()),
        n_ratio: mean(images.iter().filter_map(|m| m.n_ratio).collect()),
        mta_deg: if mta_count == 0 { 0.0 } else { mta_sum / mta_count as f64 },
        counts: totals,
    };
    let images_without_gt = images.iter().filter(|m| m.n_ratio.is_none()).count();
    Ok(SetReport { images, aggregate, images_without_gt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contour::trace_contours;
    use crate::geometry::Polyline;

    fn square(x0: f64, y0: f64, side: f64) -> Polygon {
        let ring = Polyline::closed_from_distinct(vec![
            Point::new(x0, y0),
            Point::new(x0 + side, y0),
            Point::new(x0 + side, y0 + side),
            Point::new(x0, y0 + side),
        ])
        .unwrap();
        Polygon::new(ring, vec![]).unwrap()
    }

    #[test]
    fn rasterize_round_trips_traced_mask() {
        let mask = RasterMask::from_fn(8, 6, |r, c| (2..5).contains(&r) && (1..7).contains(&c))
            .unwrap();
        let poly = trace_contours(&mask).unwrap();
        let canvas = EvalCanvas::new(8, 6, 1).unwrap();
        assert_eq!(rasterize(&[poly], &canvas), mask);
    }

    #[test]
    fn rasterize_empty_set_is_all_zero() {
        let canvas = EvalCanvas::new(4, 4, 1).unwrap();
        assert_eq!(rasterize(&[], &canvas).foreground_count(), 0);
    }

    #[test]
    fn rasterize_square_with_hole() {
        let outer = Polyline::closed_from_distinct(vec![
            Point::new(0.0, 0.0),
            Point::new(5.0, 0.0),
            Point::new(5.0, 5.0),
            Point::new(0.0, 5.0),
        ])
        .unwrap();
        let hole = Polyline::closed_from_distinct(vec![
            Point::new(2.0, 2.0),
            Point::new(2.0, 3.0),
            Point::new(3.0, 3.0),
            Point::new(3.0, 2.0),
        ])
        .unwrap();
        let poly = Polygon::new(outer, vec![hole]).unwrap();
        let canvas = EvalCanvas::new(5, 5, 1).unwrap();
        let mask = rasterize(&[poly], &canvas);
        assert_eq!(mask.foreground_count(), 24);
        assert!(!mask.get(2, 2));
    }

    #[test]
    fn iou_identical_and_disjoint() {
        let canvas = EvalCanvas::new(32, 32, 1).unwrap();
        let a = [square(2.0, 2.0, 10.0)];
        let b = [square(20.0, 20.0, 10.0)];
        assert_eq!(iou(&a, &a, &canvas), 1.0);
        assert_eq!(iou(&a, &b, &canvas), 0.0);
        assert_eq!(iou(&[], &[], &canvas), 1.0);
        assert_eq!(iou(&a, &[], &canvas), 0.0);
    }

    #[test]
    fn iou_shifted_squares_is_one_seventh() {
        let canvas = EvalCanvas::new(16, 16, 4).unwrap();
        let a = [square(0.0, 0.0, 10.0)];
        let b = [square(5.0, 5.0, 10.0)];
        let v = iou(&a, &b, &canvas);
        assert!((v - 1.0 / 7.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn n_ratio_and_c_iou() {
        let sq = [square(0.0, 0.0, 8.0)];
        let oct = {
            let ring = Polyline::closed_from_distinct(vec![
                Point::new(2.0, 0.0),
                Point::new(6.0, 0.0),
                Point::new(8.0, 2.0),
                Point::new(8.0, 6.0),
                Point::new(6.0, 8.0),
                Point::new(2.0, 8.0),
                Point::new(0.0, 6.0),
                Point::new(0.0, 2.0),
            ])
            .unwrap();
            [Polygon::new(ring, vec![]).unwrap()]
        };
        assert_eq!(n_ratio(&sq, &sq).unwrap(), 1.0);
        assert_eq!(n_ratio(&sq, &oct).unwrap(), 0.5);
        assert!(n_ratio(&sq, &[]).is_err());

        let canvas = EvalCanvas::new(10, 10, 1).unwrap();
        assert_eq!(c_iou(&sq, &sq, &canvas), iou(&sq, &sq, &canvas));
        // Different counts scale the IoU down.
        let scaled = c_iou(&sq, &oct, &canvas);
        let raw = iou(&sq, &oct, &canvas);
        assert!((scaled - raw * (1.0 - 4.0 / 12.0)).abs() < 1e-12);
        assert!(scaled <= raw);
        assert_eq!(c_iou(&[], &[], &canvas), 0.0);
    }

    #[test]
    fn mta_zero_on_identical() {
        let p = square(1.0, 1.0, 9.0);
        assert!(mta(&p, &p).unwrap() < 1e-9);
    }

    #[test]
    fn mta_detects_bent_edge() {
        let gt = square(0.0, 0.0, 10.0);
        // Bend the top edge by inserting a midpoint raised by 1 px:
        // the bent half meets the flat edge at atan(1/5).
        let ring = Polyline::closed_from_distinct(vec![
            Point::new(0.0, 0.0),
            Point::new(10.0, 0.0),
            Point::new(10.0, 10.0),
            Point::new(5.0, 11.0),
            Point::new(0.0, 10.0),
        ])
        .unwrap();
        let pred = Polygon::new(ring, vec![]).unwrap();
        let got = mta(&pred, &gt).unwrap();
        let expect = (1.0f64 / 5.0).atan().to_degrees();
        assert!((got - expect).abs() < 0.5, "got {got}, expect {expect}");
    }

    #[test]
    fn evaluate_set_identity_image() {
        let canvas = EvalCanvas::new(16, 16, 1).unwrap();
        let polys = vec![square(2.0, 2.0, 10.0)];
        let report = evaluate_set(&[polys.clone()], &[polys], &canvas).unwrap();
        let agg = report.aggregate;
        assert_eq!(agg.iou, 1.0);
        assert_eq!(agg.c_iou, 1.0);
        assert_eq!(agg.n_ratio, 1.0);
        assert!(agg.mta_deg < 1e-9);
        assert_eq!(agg.counts.matched_pairs, 1);
    }

    #[test]
    fn evaluate_set_averages_images() {
        let canvas = EvalCanvas::new(32, 32, 1).unwrap();
        let a = vec![square(0.0, 0.0, 10.0)];
        let b = vec![square(5.0, 5.0, 10.0)];
        let identical = evaluate_set(&[a.clone()], &[a.clone()], &canvas).unwrap();
        let shifted = evaluate_set(&[a.clone()], &[b.clone()], &canvas).unwrap();
        let both = evaluate_set(&[a.clone(), a.clone()], &[a, b], &canvas).unwrap();
        let expect = (identical.aggregate.iou + shifted.aggregate.iou) / 2.0;
        assert!((both.aggregate.iou - expect).abs() < 1e-12);
    }

    #[test]
    fn evaluate_set_skips_images_without_gt() {
        let canvas = EvalCanvas::new(16, 16, 1).unwrap();
        let pred = vec![square(2.0, 2.0, 10.0)];
        let report = evaluate_set(&[pred.clone(), pred.clone()], &[pred, vec![]], &canvas).unwrap();
        assert_eq!(report.images_without_gt, 1);
        assert_eq!(report.aggregate.n_ratio, 1.0);
        assert_eq!(report.images[1].n_ratio, None);
        assert_eq!(report.images[1].iou, 0.0);
    }

    #[test]
    fn canvas_cap_enforced() {
        assert!(EvalCanvas::with_sample_cap(100, 100, 2, 1000).is_err());
        assert!(EvalCanvas::new(0, 5, 1).is_err());
    }
}
