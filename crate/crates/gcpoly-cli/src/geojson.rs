//! GeoJSON reading and writing on top of `serde_json` values.
//!
//! Coordinates are pixel units with no CRS. Written polygons carry
//! anti-clockwise exteriors and clockwise holes; read polygons are
//! normalized to that orientation. All numbers are rounded to 9
//! significant digits before serialization so outputs are byte-identical
//! across runs and platforms.

use serde_json::{json, Map, Value};

use gcpoly::geometry::{signed_area, Point, Polygon, Polyline};

use crate::CliError;

/// Round to 9 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = 9.0 - x.abs().log10().ceil();
    let mag = 10f64.powf(digits);
    (x * mag).round() / mag
}

/// A JSON number rounded to 9 significant digits.
pub fn jnum(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig(x)).map(Value::Number).unwrap_or(Value::Null)
}

/// Geometry kinds the tools consume and produce.
#[derive(Debug, Clone)]
pub enum Geom {
    Line(Polyline),
    Polygon(Polygon),
    MultiPolygon(Vec<Polygon>),
}

/// One parsed feature: id property, free-form properties, geometry.
#[derive(Debug, Clone)]
pub struct FeatureIn {
    pub image_id: Option<String>,
    pub properties: Map<String, Value>,
    pub geom: Geom,
}

pub fn parse_document(text: &str) -> Result<Vec<FeatureIn>, CliError> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("malformed GeoJSON: {e}")))?;
    let kind = value
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Input("GeoJSON object lacks a \"type\"".into()))?;
    match kind {
        "FeatureCollection" => {
            let features = value
                .get("features")
                .and_then(Value::as_array)
                .ok_or_else(|| CliError::Input("FeatureCollection lacks \"features\"".into()))?;
            features.iter().map(parse_feature).collect()
        }
        "Feature" => Ok(vec![parse_feature(&value)?]),
        _ => Ok(vec![FeatureIn {
            image_id: None,
            properties: Map::new(),
            geom: parse_geometry(&value)?,
        }]),
    }
}

fn parse_feature(value: &Value) -> Result<FeatureIn, CliError> {
    let geometry = value
        .get("geometry")
        .ok_or_else(|| CliError::Input("feature lacks a geometry".into()))?;
    let properties = value
        .get("properties")
        .and_then(Value::as_object)
        .cloned()
        .unwrap_or_default();
    let image_id = properties.get("image_id").map(|v| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    });
    Ok(FeatureIn { image_id, properties, geom: parse_geometry(geometry)? })
}

fn parse_geometry(value: &Value) -> Result<Geom, CliError> {
    let kind = value
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Input("geometry lacks a \"type\"".into()))?;
    let coords = value
        .get("coordinates")
        .ok_or_else(|| CliError::Input("geometry lacks \"coordinates\"".into()))?;
    match kind {
        "LineString" => Ok(Geom::Line(parse_line(coords)?)),
        "Polygon" => Ok(Geom::Polygon(parse_polygon(coords)?)),
        "MultiPolygon" => {
            let parts = coords
                .as_array()
                .ok_or_else(|| CliError::Input("MultiPolygon coordinates must be an array".into()))?;
            Ok(Geom::MultiPolygon(
                parts.iter().map(parse_polygon).collect::<Result<_, _>>()?,
            ))
        }
        other => Err(CliError::Input(format!("unsupported geometry type {other:?}"))),
    }
}

fn parse_positions(value: &Value) -> Result<Vec<Point>, CliError> {
    let arr = value
        .as_array()
        .ok_or_else(|| CliError::Input("coordinates must be an array".into()))?;
    arr.iter()
        .map(|pos| {
            let pair = pos
                .as_array()
                .filter(|p| p.len() >= 2)
                .ok_or_else(|| CliError::Input("position must be [x, y]".into()))?;
            let x = pair[0].as_f64().ok_or_else(|| CliError::Input("x must be a number".into()))?;
            let y = pair[1].as_f64().ok_or_else(|| CliError::Input("y must be a number".into()))?;
            Ok(Point::new(x, y))
        })
        .collect()
}

fn parse_line(coords: &Value) -> Result<Polyline, CliError> {
    let pts = parse_positions(coords)?;
    let closed = pts.len() > 2 && pts.first() == pts.last();
    Polyline::new(pts, closed).map_err(|e| CliError::Input(format!("bad LineString: {e}")))
}

/// Parse a polygon, normalizing ring orientations (anti-clockwise
/// exterior, clockwise holes).
fn parse_polygon(coords: &Value) -> Result<Polygon, CliError> {
    let rings = coords
        .as_array()
        .ok_or_else(|| CliError::Input("Polygon coordinates must be an array of rings".into()))?;
    if rings.is_empty() {
        return Err(CliError::Input("Polygon needs at least one ring".into()));
    }
    let mut parsed = Vec::with_capacity(rings.len());
    for (i, ring) in rings.iter().enumerate() {
        let mut pts = parse_positions(ring)?;
        if pts.first() != pts.last() {
            return Err(CliError::Input(format!("ring {i} is not closed")));
        }
        let ring = Polyline::closed(pts.clone())
            .or_else(|_| {
                // Tolerate consecutive duplicates from sloppy writers.
                pts.dedup();
                Polyline::closed(pts)
            })
            .map_err(|e| CliError::Input(format!("bad ring {i}: {e}")))?;
        let area = signed_area(&ring).map_err(|e| CliError::Input(e.to_string()))?;
        let want_ccw = i == 0;
        let ring = if (area > 0.0) == want_ccw || area == 0.0 {
            ring
        } else {
            let mut rev = ring.points().to_vec();
            rev.reverse();
            Polyline::closed(rev).map_err(|e| CliError::Input(e.to_string()))?
        };
        parsed.push(ring);
    }
    let exterior = parsed.remove(0);
    Polygon::new(exterior, parsed).map_err(|e| CliError::Input(format!("bad polygon: {e}")))
}

fn position(p: &Point) -> Value {
    json!([jnum(p.x), jnum(p.y)])
}

fn ring_coords(ring: &Polyline) -> Value {
    Value::Array(ring.points().iter().map(position).collect())
}

pub fn line_geometry(line: &Polyline) -> Value {
    let mut geom = Map::new();
    geom.insert("type".into(), "LineString".into());
    geom.insert(
        "coordinates".into(),
        Value::Array(line.points().iter().map(position).collect()),
    );
    Value::Object(geom)
}

pub fn polygon_geometry(poly: &Polygon) -> Value {
    let mut geom = Map::new();
    geom.insert("type".into(), "Polygon".into());
    geom.insert(
        "coordinates".into(),
        Value::Array(poly.rings().map(ring_coords).collect()),
    );
    Value::Object(geom)
}

pub fn multi_polygon_geometry(polys: &[Polygon]) -> Value {
    let mut geom = Map::new();
    geom.insert("type".into(), "MultiPolygon".into());
    geom.insert(
        "coordinates".into(),
        Value::Array(
            polys
                .iter()
                .map(|p| Value::Array(p.rings().map(ring_coords).collect()))
                .collect(),
        ),
    );
    Value::Object(geom)
}

pub fn feature(geometry: Value, properties: Map<String, Value>) -> Value {
    let mut f = Map::new();
    f.insert("type".into(), "Feature".into());
    f.insert("geometry".into(), geometry);
    f.insert("properties".into(), Value::Object(properties));
    Value::Object(f)
}

pub fn feature_collection(features: Vec<Value>, config: Value) -> Value {
    let mut fc = Map::new();
    fc.insert("type".into(), "FeatureCollection".into());
    fc.insert("config".into(), config);
    fc.insert("features".into(), Value::Array(features));
    Value::Object(fc)
}

/// Serialize a report deterministically (object keys sort, numbers are
/// pre-rounded) with a trailing newline.
pub fn to_output_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON serializes");
    s.push('\n');
    s
}
