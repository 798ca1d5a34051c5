//! Country lookup from a GeoJSON boundary file.
//!
//! The file must be a FeatureCollection of Polygon/MultiPolygon features
//! carrying an ISO 3166-1 alpha-2 code in a configurable property
//! (`iso_a2` by default). Point-in-polygon uses the even-odd rule over all
//! rings, so holes are handled without caring about winding order. Points
//! exactly on a boundary edge follow the even-odd crossing convention;
//! assignment is deterministic either way.

use std::path::Path;

use serde_json::Value;
use thiserror::Error;

/// Default feature property holding the country code.
pub const DEFAULT_COUNTRY_PROPERTY: &str = "iso_a2";

#[derive(Debug, Error)]
pub enum BoundaryError {
    #[error("cannot read boundary file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("boundary file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("boundary file is not a FeatureCollection")]
    NotFeatureCollection,
    #[error("feature {index}: missing or non-string property `{property}`")]
    MissingProperty { index: usize, property: String },
    #[error("feature {index} ({code}): {reason}")]
    BadGeometry {
        index: usize,
        code: String,
        reason: String,
    },
}

/// `(lon, lat)` vertices of one linear ring.
type Ring = Vec<(f64, f64)>;

#[derive(Debug, Clone)]
struct CountryShape {
    code: String,
    /// Each polygon is its outer ring plus any holes.
    polygons: Vec<Vec<Ring>>,
}

/// Boundary index over the features of one GeoJSON file, in file order.
#[derive(Debug, Clone)]
pub struct CountryIndex {
    shapes: Vec<CountryShape>,
}

impl CountryIndex {
    pub fn from_file(path: &Path, property: &str) -> Result<Self, BoundaryError> {
        let raw = std::fs::read_to_string(path).map_err(|source| BoundaryError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_geojson_str(&raw, property)
    }

    pub fn from_geojson_str(raw: &str, property: &str) -> Result<Self, BoundaryError> {
        let root: Value = serde_json::from_str(raw)?;
        if root.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
            return Err(BoundaryError::NotFeatureCollection);
        }
        let features = root
            .get("features")
            .and_then(Value::as_array)
            .ok_or(BoundaryError::NotFeatureCollection)?;

        let mut shapes = Vec::with_capacity(features.len());
        for (index, feature) in features.iter().enumerate() {
            let code = feature
                .get("properties")
                .and_then(|p| p.get(property))
                .and_then(Value::as_str)
                .ok_or_else(|| BoundaryError::MissingProperty {
                    index,
                    property: property.to_string(),
                })?
                .to_string();

            let geometry = feature.get("geometry").unwrap_or(&Value::Null);
            let geom_type = geometry.get("type").and_then(Value::as_str).unwrap_or("");
            let coords = geometry.get("coordinates").unwrap_or(&Value::Null);
            let polygons = match geom_type {
                "Polygon" => vec![parse_polygon(coords).map_err(|reason| {
                    BoundaryError::BadGeometry { index, code: code.clone(), reason }
                })?],
                "MultiPolygon" => {
                    let outer = coords.as_array().ok_or_else(|| BoundaryError::BadGeometry {
                        index,
                        code: code.clone(),
                        reason: "MultiPolygon coordinates must be an array".into(),
                    })?;
                    outer
                        .iter()
                        .map(parse_polygon)
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|reason| BoundaryError::BadGeometry {
                            index,
                            code: code.clone(),
                            reason,
                        })?
                }
                other => {
                    return Err(BoundaryError::BadGeometry {
                        index,
                        code,
                        reason: format!("unsupported geometry type `{other}`"),
                    })
                }
            };
            shapes.push(CountryShape { code, polygons });
        }
        Ok(CountryIndex { shapes })
    }

    /// Code of the first feature (file order) containing the point, if any.
    pub fn locate(&self, lat: f64, lon: f64) -> Option<&str> {
        self.shapes
            .iter()
            .find(|shape| {
                shape
                    .polygons
                    .iter()
                    .any(|rings| polygon_contains(rings, lon, lat))
            })
            .map(|shape| shape.code.as_str())
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }
}

fn parse_polygon(coords: &Value) -> Result<Vec<Ring>, String> {
    let rings = coords.as_array().ok_or("Polygon coordinates must be an array")?;
    if rings.is_empty() {
        return Err("polygon has no rings".into());
    }
    rings
        .iter()
        .map(|ring| {
            let points = ring.as_array().ok_or("ring must be an array")?;
            if points.len() < 4 {
                return Err(format!("ring has {} positions, need at least 4", points.len()));
            }
            points
                .iter()
                .map(|point| {
                    let pair = point.as_array().filter(|p| p.len() >= 2);
                    let lon = pair.and_then(|p| p[0].as_f64());
                    let lat = pair.and_then(|p| p[1].as_f64());
                    match (lon, lat) {
                        (Some(lon), Some(lat)) => Ok((lon, lat)),
                        _ => Err("position must be [lon, lat]".to_string()),
                    }
                })
                .collect()
        })
        .collect()
}

/// Even-odd containment over all rings: inside the outer ring and outside
/// an even number of holes.
fn polygon_contains(rings: &[Ring], x: f64, y: f64) -> bool {
    let mut inside = false;
    for ring in rings {
        if ring_contains(ring, x, y) {
            inside = !inside;
        }
    }
    inside
}

/// Standard even-odd ray cast (PNPOLY formulation).
fn ring_contains(ring: &[(f64, f64)], x: f64, y: f64) -> bool {
    let mut inside = false;
    let mut j = ring.len() - 1;
    for i in 0..ring.len() {
        let (xi, yi) = ring[i];
        let (xj, yj) = ring[j];
        if (yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi {
            inside = !inside;
        }
        j = i;
    }
    inside
}
