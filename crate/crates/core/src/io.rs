//! JSON polygon documents.
//!
//! ```json
//! {"name": "triangle", "vertices": [[0, 0], [1, 0], [0, 1]], "metadata": {}}
//! ```
//!
//! Only `vertices` is required; no other top-level keys are accepted.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::geom::{polygon_signed_area, Point};
use crate::polygon::Polygon;

/// Metadata key set when a clockwise input was reversed on read.
pub const REVERSED_KEY: &str = "reversed_from_clockwise";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Map<String, Value>>,
}

impl PolygonDocument {
    pub fn from_points(name: Option<String>, points: &[Point]) -> Self {
        PolygonDocument {
            name,
            vertices: points.iter().map(|p| [p.x, p.y]).collect(),
            metadata: None,
        }
    }

    pub fn points(&self) -> Vec<Point> {
        self.vertices
            .iter()
            .map(|[x, y]| Point::new(*x, *y))
            .collect()
    }

    pub fn to_polygon(&self) -> Result<Polygon> {
        Polygon::new(self.points())
    }

    pub fn set_meta(&mut self, key: &str, value: impl Into<Value>) {
        self.metadata
            .get_or_insert_with(Map::new)
            .insert(key.to_owned(), value.into());
    }

    pub fn was_reversed(&self) -> bool {
        self.metadata
            .as_ref()
            .and_then(|m| m.get(REVERSED_KEY))
            .and_then(Value::as_bool)
            .unwrap_or(false)
    }
}

/// Parses a document, reversing clockwise vertex lists (and flagging that in
/// the metadata).
pub fn read_polygon(bytes: &[u8]) -> Result<PolygonDocument> {
    let mut doc: PolygonDocument =
        serde_json::from_slice(bytes).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    if doc.vertices.len() < 3 {
        return Err(Error::MalformedDocument(format!(
            "need at least 3 vertices, got {}",
            doc.vertices.len()
        )));
    }
    if doc.vertices.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::MalformedDocument("non-finite coordinate".into()));
    }
    if polygon_signed_area(&doc.points()) < 0.0 {
        doc.vertices.reverse();
        doc.set_meta(REVERSED_KEY, true);
    }
    Ok(doc)
}

/// JSON with one vertex per line and a trailing newline. Floats use the
/// shortest representation that parses back to the same value.
pub fn write_polygon(doc: &PolygonDocument) -> Vec<u8> {
    let mut out = String::from("{\n");
    if let Some(name) = &doc.name {
        out += &format!("  \"name\": {},\n", enc(name));
    }
    out += "  \"vertices\": [\n";
    for (k, [x, y]) in doc.vertices.iter().enumerate() {
        let sep = if k + 1 < doc.vertices.len() { "," } else { "" };
        out += &format!("    [{}, {}]{sep}\n", enc(x), enc(y));
    }
    out += "  ]";
    if let Some(meta) = &doc.metadata {
        out += &format!(",\n  \"metadata\": {}", enc(meta));
    }
    out += "\n}\n";
    out.into_bytes()
}

fn enc<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("documents always serialize")
}
