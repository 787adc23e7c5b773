//! Seeded synthetic inputs for the oracle, benchmark and acceptance
//! harnesses: random polyline families and rectilinear building masks.

use gcpoly::contour::RasterMask;
use gcpoly::geometry::{Point, Polyline};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Polyline families exercised by the oracle harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineFamily {
    /// Points uniform in [0, 100]^2, open.
    Uniform,
    /// Axis-aligned staircase with integer steps of varying size.
    Rectilinear,
    /// Exactly collinear integer points (zero-deviation ties everywhere).
    Collinear,
    /// Closed ring of distinct points around a center.
    ClosedRing,
}

pub const ALL_FAMILIES: [LineFamily; 4] = [
    LineFamily::Uniform,
    LineFamily::Rectilinear,
    LineFamily::Collinear,
    LineFamily::ClosedRing,
];

pub fn sample_polyline(rng: &mut ChaCha8Rng, family: LineFamily, len: usize) -> Polyline {
    match family {
        LineFamily::Uniform => uniform_open(rng, len),
        LineFamily::Rectilinear => rectilinear_open(rng, len),
        LineFamily::Collinear => collinear_open(rng, len),
        LineFamily::ClosedRing => closed_ring(rng, len.max(3)),
    }
}

pub fn uniform_open(rng: &mut ChaCha8Rng, len: usize) -> Polyline {
    loop {
        let pts: Vec<Point> = (0..len)
            .map(|_| Point::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
            .collect();
        if let Ok(line) = Polyline::open(pts) {
            return line;
        }
    }
}

pub fn rectilinear_open(rng: &mut ChaCha8Rng, len: usize) -> Polyline {
    let mut x = rng.gen_range(0..40) as f64;
    let mut y = rng.gen_range(0..40) as f64;
    let mut horizontal = rng.gen_bool(0.5);
    let mut pts = vec![Point::new(x, y)];
    for _ in 1..len {
        // Varying step sizes avoid mirror-symmetric cost ties.
        let step = rng.gen_range(1..=5) as f64 * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        if horizontal {
            x += step;
        } else {
            y += step;
        }
        horizontal = !horizontal;
        pts.push(Point::new(x, y));
    }
    Polyline::open(pts).expect("axis steps never repeat a point")
}

pub fn collinear_open(rng: &mut ChaCha8Rng, len: usize) -> Polyline {
    let dir = loop {
        let d = (rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3));
        if d != (0, 0) {
            break d;
        }
    };
    let ox = rng.gen_range(0i64..20);
    let oy = rng.gen_range(0i64..20);
    let mut t = 0i64;
    let pts = (0..len)
        .map(|_| {
            let p = Point::new((ox + t * dir.0) as f64, (oy + t * dir.1) as f64);
            t += rng.gen_range(1..=3);
            p
        })
        .collect();
    Polyline::open(pts).expect("strictly increasing parameters never repeat")
}

pub fn closed_ring(rng: &mut ChaCha8Rng, distinct: usize) -> Polyline {
    let mut angles: Vec<f64> = Vec::with_capacity(distinct);
    let mut a = 0.0f64;
    for _ in 0..distinct {
        angles.push(a);
        a += rng.gen_range(0.2..1.0);
    }
    let scale = std::f64::consts::TAU / a;
    let pts = angles
        .iter()
        .map(|&ang| {
            let r = rng.gen_range(10.0..40.0);
            let (s, c) = (ang * scale).sin_cos();
            Point::new(50.0 + r * c, 50.0 + r * s)
        })
        .collect();
    Polyline::closed_from_distinct(pts).expect("distinct angles never repeat")
}

/// A random rectilinear building mask on a `size` x `size` grid with every
/// feature at least 8 px wide.
///
/// Alternates between a single rectangle with arbitrary sides and a union
/// of rectangles snapped to multiples of eight, so unions never grow
/// ledges or necks narrower than 8 px.
pub fn building_mask(rng: &mut ChaCha8Rng, size: usize) -> RasterMask {
    let mut mask = RasterMask::zeros(size, size).expect("positive dims");
    if rng.gen_bool(0.5) {
        let w = rng.gen_range(16..=33);
        let h = rng.gen_range(16..=33);
        let r0 = rng.gen_range(2..size - h - 2);
        let c0 = rng.gen_range(2..size - w - 2);
        fill_rect(&mut mask, r0, c0, h, w);
    } else {
        let snap = |v: usize| v / 8 * 8;
        let w = snap(rng.gen_range(16..=32));
        let h = snap(rng.gen_range(16..=32));
        let r0 = snap(rng.gen_range(8..size - h - 8));
        let c0 = snap(rng.gen_range(8..size - w - 8));
        fill_rect(&mut mask, r0, c0, h, w);
        for _ in 0..rng.gen_range(1..=2) {
            // Anchor inside the previous rectangle with at least 8 px of
            // overlap in both axes so the union stays one fat component.
            let w2 = snap(rng.gen_range(16..=32));
            let h2 = snap(rng.gen_range(16..=32));
            let r1 = snap(rng.gen_range(r0.saturating_sub(h2 - 8).max(8)..=(r0 + h - 8)))
                .min(size - h2 - 8);
            let c1 = snap(rng.gen_range(c0.saturating_sub(w2 - 8).max(8)..=(c0 + w - 8)))
                .min(size - w2 - 8);
            fill_rect(&mut mask, r1, c1, h2, w2);
        }
    }
    mask
}

fn fill_rect(mask: &mut RasterMask, r0: usize, c0: usize, h: usize, w: usize) {
    for r in r0..r0 + h {
        for c in c0..c0 + w {
            mask.set(r, c, true);
        }
    }
}

/// Random salt-and-pepper mask; useful for exact trace/rasterize
/// round-trip checks on gnarly components.
pub fn noise_mask(rng: &mut ChaCha8Rng, width: usize, height: usize, density: f64) -> RasterMask {
    RasterMask::from_fn(width, height, |_, _| rng.gen_bool(density)).expect("positive dims")
}
