//! `evaluate`: polygon metrics between prediction and ground-truth
//! GeoJSON collections keyed by the `image_id` property.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{Map, Value};

use gcpoly::geometry::Polygon;
use gcpoly::metrics::{evaluate_set, EvalCanvas, ImageMetrics, SetReport};

use super::{emit, EXIT_OK};
use crate::config::{config_value, RunConfig};
use crate::geojson::{jnum, parse_document, to_output_string, Geom};
use crate::CliError;

fn load_polygon_sets(path: &Path) -> Result<BTreeMap<String, Vec<Polygon>>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut sets: BTreeMap<String, Vec<Polygon>> = BTreeMap::new();
    for f in parse_document(&text)? {
        let id = f.image_id.clone().unwrap_or_default();
        let bucket = sets.entry(id).or_default();
        match f.geom {
            Geom::Polygon(p) => bucket.push(p),
            Geom::MultiPolygon(ps) => bucket.extend(ps),
            Geom::Line(_) => {
                return Err(CliError::Input(format!(
                    "{}: evaluate expects Polygon/MultiPolygon geometries",
                    path.display()
                )))
            }
        }
    }
    Ok(sets)
}

fn opt(v: Option<f64>) -> Value {
    v.map(jnum).unwrap_or(Value::Null)
}

fn image_entry(id: &str, m: &ImageMetrics) -> Value {
    let mut e = Map::new();
    e.insert("image_id".into(), Value::String(id.into()));
    e.insert("iou".into(), jnum(m.iou));
    e.insert("c_iou".into(), opt(m.c_iou));
    e.insert("n_ratio".into(), opt(m.n_ratio));
    e.insert("mta_deg".into(), opt(m.mta_deg));
    e.insert("pred_vertices".into(), Value::from(m.counts.pred));
    e.insert("gt_vertices".into(), Value::from(m.counts.gt));
    e.insert("matched_pairs".into(), Value::from(m.counts.matched_pairs));
    Value::Object(e)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into())
}

fn print_table(ids: &[String], report: &SetReport) {
    println!(
        "{:<16} {:>8} {:>8} {:>8} {:>9} {:>6}",
        "image", "iou", "c_iou", "n_ratio", "mta_deg", "pairs"
    );
    for (id, m) in ids.iter().zip(&report.images) {
        println!(
            "{:<16} {:>8.4} {:>8} {:>8} {:>9} {:>6}",
            id,
            m.iou,
            fmt_opt(m.c_iou),
            fmt_opt(m.n_ratio),
            fmt_opt(m.mta_deg),
            m.counts.matched_pairs
        );
    }
    let a = &report.aggregate;
    println!(
        "{:<16} {:>8.4} {:>8.4} {:>8.4} {:>9.4} {:>6}",
        "mean", a.iou, a.c_iou, a.n_ratio, a.mta_deg, a.counts.matched_pairs
    );
}

pub fn run(
    pred_path: &Path,
    gt_path: &Path,
    cfg: &RunConfig,
    allow_missing: bool,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    let pred_sets = load_polygon_sets(pred_path)?;
    let gt_sets = load_polygon_sets(gt_path)?;

    let mut skipped: Vec<String> = Vec::new();
    let mut ids: Vec<String> = Vec::new();
    for id in pred_sets.keys().chain(gt_sets.keys()) {
        if ids.contains(id) || skipped.contains(id) {
            continue;
        }
        if pred_sets.contains_key(id) && gt_sets.contains_key(id) {
            ids.push(id.clone());
        } else {
            skipped.push(id.clone());
        }
    }
    ids.sort();
    skipped.sort();
    if !skipped.is_empty() && !allow_missing {
        return Err(CliError::Input(format!(
            "image ids missing from one side: {} (pass --allow-missing to skip)",
            skipped.join(", ")
        )));
    }

    let preds: Vec<Vec<Polygon>> = ids.iter().map(|id| pred_sets[id].clone()).collect();
    let gts: Vec<Vec<Polygon>> = ids.iter().map(|id| gt_sets[id].clone()).collect();
    let canvas = EvalCanvas::new(cfg.canvas.width, cfg.canvas.height, cfg.canvas.supersample)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let report = evaluate_set(&preds, &gts, &canvas).map_err(|e| CliError::Input(e.to_string()))?;

    let mut doc = Map::new();
    doc.insert("config".into(), config_value(cfg));
    doc.insert(
        "images".into(),
        Value::Array(ids.iter().zip(&report.images).map(|(id, m)| image_entry(id, m)).collect()),
    );
    let mut agg = Map::new();
    agg.insert("iou".into(), jnum(report.aggregate.iou));
    agg.insert("c_iou".into(), jnum(report.aggregate.c_iou));
    agg.insert("n_ratio".into(), jnum(report.aggregate.n_ratio));
    agg.insert("mta_deg".into(), jnum(report.aggregate.mta_deg));
    agg.insert("pred_vertices".into(), Value::from(report.aggregate.counts.pred));
    agg.insert("gt_vertices".into(), Value::from(report.aggregate.counts.gt));
    agg.insert("matched_pairs".into(), Value::from(report.aggregate.counts.matched_pairs));
    agg.insert("images_without_gt".into(), Value::from(report.images_without_gt));
    doc.insert("aggregate".into(), Value::Object(agg));
    doc.insert(
        "skipped_ids".into(),
        Value::Array(skipped.iter().map(|s| Value::String(s.clone())).collect()),
    );

    if out.is_some() {
        print_table(&ids, &report);
    }
    emit(out, &to_output_string(&Value::Object(doc)))?;
    Ok(EXIT_OK)
}
