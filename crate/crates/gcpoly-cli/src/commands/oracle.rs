//! `oracle-check`: the DP simplifier against exhaustive enumeration on
//! seeded random polylines.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use gcpoly::simplify::{brute_force_simplify, gcp_simplify, SimplifyParams};

use super::{emit, EXIT_FAIL, EXIT_OK};
use crate::config::{config_value, RunConfig};
use crate::fixtures::{sample_polyline, ALL_FAMILIES};
use crate::geojson::{feature, jnum, line_geometry, to_output_string};
use crate::CliError;

pub const LAMBDA_SET: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 4.0];
const TOLERANCE: f64 = 1e-9;

pub fn run(
    trials: usize,
    max_len: usize,
    cfg: &RunConfig,
    perturb: bool,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    if max_len < 3 || max_len > 20 {
        return Err(CliError::Input(format!(
            "max-len must be in 3..=20 (brute force cap), got {max_len}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = 0usize;
    let mut failures = 0usize;
    let mut max_deviation = 0.0f64;
    let mut first_failure: Option<Value> = None;

    for trial in 0..trials {
        let family = ALL_FAMILIES[trial % ALL_FAMILIES.len()];
        let len = rng.gen_range(3..=max_len);
        let line = sample_polyline(&mut rng, family, len);

        for lambda in LAMBDA_SET {
            for k_max in [3usize, line.len().max(3)] {
                let params = SimplifyParams::new(lambda, k_max)
                    .map_err(|e| CliError::Input(e.to_string()))?;
                let mut got = gcp_simplify(&line, &params)
                    .map_err(|e| CliError::Input(e.to_string()))?;
                if perturb {
                    // Deliberate fault injection: bias the DP result so the
                    // harness demonstrably catches deviations.
                    got.total_cost += 1e-6;
                }
                let want = brute_force_simplify(&line, &params)
                    .map_err(|e| CliError::Input(e.to_string()))?;

                checks += 1;
                let deviation = (got.total_cost - want.total_cost).abs();
                max_deviation = max_deviation.max(deviation);
                if deviation > TOLERANCE || got.indices != want.indices {
                    failures += 1;
                    if first_failure.is_none() {
                        let mut props = Map::new();
                        props.insert("trial".into(), Value::from(trial));
                        props.insert("lambda".into(), jnum(lambda));
                        props.insert("k_max".into(), Value::from(k_max));
                        props.insert("dp_total".into(), jnum(got.total_cost));
                        props.insert("oracle_total".into(), jnum(want.total_cost));
                        first_failure = Some(feature(line_geometry(&line), props));
                    }
                }
            }
        }
    }

    let mut doc = Map::new();
    doc.insert("config".into(), config_value(cfg));
    doc.insert("trials".into(), Value::from(trials));
    doc.insert("checks".into(), Value::from(checks));
    doc.insert("failures".into(), Value::from(failures));
    doc.insert("max_deviation".into(), jnum(max_deviation));
    doc.insert("tolerance".into(), jnum(TOLERANCE));
    if let Some(f) = first_failure {
        doc.insert("first_failure".into(), f);
    }
    emit(out, &to_output_string(&Value::Object(doc)))?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_FAIL })
}
