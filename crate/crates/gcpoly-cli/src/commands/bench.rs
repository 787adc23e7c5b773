//! `bench`: wall-time scaling of the simplifier over polyline length,
//! with a log-log slope fit and a bounded-vs-unbounded equivalence check.

use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gcpoly::simplify::{gcp_simplify, SimplifyParams};

use super::{emit, EXIT_OK};
use crate::config::RunConfig;
use crate::fixtures::uniform_open;
use crate::CliError;

pub fn run(
    sizes: &[usize],
    k_max_list: &[usize],
    repetitions: usize,
    cfg: &RunConfig,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    if sizes.is_empty() || k_max_list.is_empty() || repetitions == 0 {
        return Err(CliError::Input("need at least one size, one kmax and one repetition".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Input("sizes must be strictly ascending".into()));
    }

    let config_line = serde_json::to_string(cfg).expect("RunConfig serializes");
    let mut csv = format!("# config: {config_line}\nt,k_max,median_ms,reps\n");

    for &k_max in k_max_list {
        let mut points = Vec::new();
        for &t in sizes {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ t as u64);
            let line = uniform_open(&mut rng, t);
            let params = SimplifyParams::new(cfg.lambda, k_max)
                .map_err(|e| CliError::Input(e.to_string()))?;
            let mut times = Vec::with_capacity(repetitions);
            for _ in 0..repetitions {
                let start = Instant::now();
                let sel = gcp_simplify(&line, &params).map_err(|e| CliError::Input(e.to_string()))?;
                times.push(start.elapsed().as_secs_f64() * 1e3);
                std::hint::black_box(sel);
            }
            times.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let median = times[times.len() / 2];
            points.push((t as f64, median));
            csv.push_str(&format!("{t},{k_max},{median:.4},{repetitions}\n"));
        }
        if points.len() >= 2 {
            println!("slope(k_max={k_max}) = {:.3}", log_log_slope(&points));
        }
    }

    // Bounded k_max = T must match a wider bound exactly.
    let t = *sizes.last().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ t as u64);
    let line = uniform_open(&mut rng, t);
    let at_t = gcp_simplify(&line, &SimplifyParams::new(cfg.lambda, t).unwrap())
        .map_err(|e| CliError::Input(e.to_string()))?;
    let wide = gcp_simplify(&line, &SimplifyParams::new(cfg.lambda, 2 * t).unwrap())
        .map_err(|e| CliError::Input(e.to_string()))?;
    println!(
        "kmax-equivalence(t={t}): {}",
        if at_t.indices == wide.indices { "ok" } else { "MISMATCH" }
    );

    emit(out, &csv)?;
    Ok(EXIT_OK)
}

/// Least-squares slope of ln(time) against ln(size).
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(t, ms) in points {
        let x = t.ln();
        let y = ms.max(1e-9).ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
