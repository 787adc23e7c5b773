//! `polygonize`: binary masks to simplified GeoJSON polygons.
//!
//! Per mask: keep the largest 4-connected component, trace its borders,
//! resample every ring at the configured step, cap the length, and run the
//! collinearity-aware simplifier ring by ring.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{Map, Value};

use gcpoly::contour::{largest_component, trace_contours, RasterMask};
use gcpoly::geometry::{downsample_to, resample_uniform, Polygon, Polyline};
use gcpoly::simplify::{gcp_simplify, SimplifyParams};

use super::{emit, EXIT_INPUT, EXIT_OK};
use crate::config::{config_value, RunConfig};
use crate::geojson::{feature, feature_collection, jnum, polygon_geometry};
use crate::{pgm, CliError};

/// The simplified rings of one mask, exterior first.
#[derive(Debug, Clone)]
pub struct PolygonizeResult {
    pub rings: Vec<Polyline>,
    pub distance_sum: f64,
    pub vertex_count: usize,
}

impl PolygonizeResult {
    pub fn to_polygon(&self) -> gcpoly::Result<Polygon> {
        let mut rings = self.rings.clone();
        let exterior = rings.remove(0);
        Polygon::new(exterior, rings)
    }
}

/// The full mask-to-polygon pipeline on an in-memory mask.
pub fn polygonize_mask(mask: &RasterMask, cfg: &RunConfig) -> gcpoly::Result<PolygonizeResult> {
    let component = largest_component(mask)?;
    let traced = trace_contours(&component)?;
    let params = SimplifyParams::new(cfg.lambda, cfg.k_max)?;

    let mut rings = Vec::new();
    let mut distance_sum = 0.0;
    let mut vertex_count = 0usize;
    for ring in traced.rings() {
        let resampled = resample_uniform(ring, cfg.step)?;
        // Sub-step features collapse under resampling; fall back to the
        // traced corners for such rings.
        let resampled = if resampled.len() < 4 { ring.clone() } else { resampled };
        let capped = downsample_to(&resampled, cfg.l_max)?;
        let sel = gcp_simplify(&capped, &params)?;
        distance_sum += sel.distance_sum;
        vertex_count += sel.vertex_count;
        rings.push(sel.to_polyline(&capped)?);
    }
    Ok(PolygonizeResult { rings, distance_sum, vertex_count })
}

pub fn run(files: &[PathBuf], cfg: &RunConfig, out: Option<&Path>) -> Result<i32, CliError> {
    let results: Vec<Result<Value, String>> = files
        .par_iter()
        .map(|path| {
            let mask = pgm::read_mask(path).map_err(|e| e)?;
            let result = polygonize_mask(&mask, cfg).map_err(|e| e.to_string())?;
            let poly = result.to_polygon().map_err(|e| e.to_string())?;

            let mut props = Map::new();
            props.insert("source".into(), Value::String(path.display().to_string()));
            props.insert("lambda".into(), jnum(cfg.lambda));
            props.insert("k_max".into(), Value::from(cfg.k_max));
            props.insert("distance_sum".into(), jnum(result.distance_sum));
            props.insert("vertex_count".into(), Value::from(result.vertex_count));
            Ok(feature(polygon_geometry(&poly), props))
        })
        .collect();

    let mut features = Vec::new();
    let mut errors = Vec::new();
    for (path, result) in files.iter().zip(results) {
        match result {
            Ok(f) => features.push(f),
            Err(message) => {
                eprintln!("error: {}: {message}", path.display());
                let mut entry = Map::new();
                entry.insert("source".into(), Value::String(path.display().to_string()));
                entry.insert("error".into(), Value::String(message));
                errors.push(Value::Object(entry));
            }
        }
    }

    let mut doc = feature_collection(features, config_value(cfg));
    if !errors.is_empty() {
        doc.as_object_mut().unwrap().insert("errors".into(), Value::Array(errors.clone()));
    }
    emit(out, &crate::geojson::to_output_string(&doc))?;
    Ok(if errors.is_empty() { EXIT_OK } else { EXIT_INPUT })
}
