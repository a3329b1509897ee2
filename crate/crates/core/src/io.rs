//! JSON encoding of bodies:
//! `{"dim": n, "expr": {"kind": "point_hull" | "ball" | "ball_intersection"
//! | "mink_comb" | "sim_image" | "reflected", ...}}`.
//!
//! Decoding errors carry a JSON pointer to the offending field.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::body::{Body, BodyExpr};
use crate::error::{Error, Result};
use crate::similarity::Similarity;
use crate::vector::Vector;

fn schema(pointer: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        pointer: if pointer.is_empty() { "/".into() } else { pointer.into() },
        message: message.into(),
    }
}

fn vector_json(v: &Vector) -> Value {
    json!(v.as_slice())
}

fn expr_json(body: &Body) -> Value {
    match body.expr() {
        BodyExpr::PointHull(points) => json!({
            "kind": "point_hull",
            "points": points.iter().map(vector_json).collect::<Vec<_>>(),
        }),
        BodyExpr::Ball { center, radius } => json!({
            "kind": "ball",
            "center": vector_json(center),
            "radius": radius,
        }),
        BodyExpr::BallIntersection(bi) => json!({
            "kind": "ball_intersection",
            "centers": bi.centers().iter().map(vector_json).collect::<Vec<_>>(),
            "radii": bi.radii(),
        }),
        BodyExpr::MinkComb(terms) => json!({
            "kind": "mink_comb",
            "terms": terms
                .iter()
                .map(|(coef, b)| json!({"coef": coef, "expr": expr_json(b)}))
                .collect::<Vec<_>>(),
        }),
        BodyExpr::SimImage { map, inner } => json!({
            "kind": "sim_image",
            "map": {
                "translation": vector_json(map.translation_vector()),
                "ratio": map.ratio(),
                "rotation": map.rotation_rows(),
            },
            "inner": expr_json(inner),
        }),
        BodyExpr::Reflected(inner) => json!({
            "kind": "reflected",
            "inner": expr_json(inner),
        }),
    }
}

pub fn body_to_json(body: &Body) -> Value {
    json!({"dim": body.dim(), "expr": expr_json(body)})
}

pub fn body_to_string(body: &Body) -> String {
    serde_json::to_string_pretty(&body_to_json(body)).expect("body JSON is always serializable")
}

pub fn body_from_json(value: &Value) -> Result<Body> {
    let obj = object(value, "")?;
    let dim = field(obj, "", "dim")?
        .as_u64()
        .filter(|&d| d >= 1)
        .ok_or_else(|| schema("/dim", "expected a positive integer"))? as usize;
    parse_expr(field(obj, "", "expr")?, "/expr", dim)
}

pub fn body_from_str(text: &str) -> Result<Body> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| schema("", format!("malformed JSON: {e}")))?;
    body_from_json(&value)
}

pub fn load_body(path: impl AsRef<Path>) -> Result<Body> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    body_from_str(&text)
}

pub fn save_body(body: &Body, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = body_to_string(body);
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}

fn object<'a>(value: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>> {
    value.as_object().ok_or_else(|| schema(ptr, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, ptr: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(&format!("{ptr}/{key}"), "missing field"))
}

fn number(value: &Value, ptr: &str) -> Result<f64> {
    value
        .as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| schema(ptr, "expected a finite number"))
}

fn array<'a>(value: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    value.as_array().ok_or_else(|| schema(ptr, "expected an array"))
}

fn vector(value: &Value, ptr: &str, dim: usize) -> Result<Vector> {
    let items = array(value, ptr)?;
    if items.len() != dim {
        return Err(schema(ptr, format!("expected {dim} coordinates, found {}", items.len())));
    }
    let coords = items
        .iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{ptr}/{i}")))
        .collect::<Result<Vec<_>>>()?;
    Vector::new(coords).map_err(|e| schema(ptr, e.to_string()))
}

fn vectors(value: &Value, ptr: &str, dim: usize) -> Result<Vec<Vector>> {
    let items = array(value, ptr)?;
    if items.is_empty() {
        return Err(schema(ptr, "expected at least one entry"));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| vector(x, &format!("{ptr}/{i}"), dim))
        .collect()
}

fn radius(value: &Value, ptr: &str) -> Result<f64> {
    let r = number(value, ptr)?;
    if r < 0.0 {
        return Err(schema(ptr, format!("radius must be non-negative, got {r}")));
    }
    Ok(r)
}

fn parse_expr(value: &Value, ptr: &str, dim: usize) -> Result<Body> {
    let obj = object(value, ptr)?;
    let kind = field(obj, ptr, "kind")?
        .as_str()
        .ok_or_else(|| schema(&format!("{ptr}/kind"), "expected a string"))?;
    let at = |key: &str| format!("{ptr}/{key}");
    let built = match kind {
        "point_hull" => Body::point_hull(vectors(field(obj, ptr, "points")?, &at("points"), dim)?),
        "ball" => {
            let center = vector(field(obj, ptr, "center")?, &at("center"), dim)?;
            let r = radius(field(obj, ptr, "radius")?, &at("radius"))?;
            Body::ball(center, r)
        }
        "ball_intersection" => {
            let centers = vectors(field(obj, ptr, "centers")?, &at("centers"), dim)?;
            let radii_ptr = at("radii");
            let radii_json = array(field(obj, ptr, "radii")?, &radii_ptr)?;
            if radii_json.len() != centers.len() {
                return Err(schema(&radii_ptr, "expected one radius per center"));
            }
            let radii = radii_json
                .iter()
                .enumerate()
                .map(|(i, r)| radius(r, &format!("{radii_ptr}/{i}")))
                .collect::<Result<Vec<_>>>()?;
            Body::ball_intersection(centers, radii)
        }
        "mink_comb" => {
            let terms_ptr = at("terms");
            let items = array(field(obj, ptr, "terms")?, &terms_ptr)?;
            if items.is_empty() {
                return Err(schema(&terms_ptr, "expected at least one term"));
            }
            let mut terms = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let tp = format!("{terms_ptr}/{i}");
                let term = object(item, &tp)?;
                let coef = number(field(term, &tp, "coef")?, &format!("{tp}/coef"))?;
                if coef < 0.0 {
                    return Err(schema(&format!("{tp}/coef"), "coefficient must be non-negative"));
                }
                terms.push((coef, parse_expr(field(term, &tp, "expr")?, &format!("{tp}/expr"), dim)?));
            }
            Body::minkowski(terms)
        }
        "sim_image" => {
            let map = parse_similarity(field(obj, ptr, "map")?, &at("map"), dim)?;
            let inner = parse_expr(field(obj, ptr, "inner")?, &at("inner"), dim)?;
            inner.apply_similarity(&map)
        }
        "reflected" => Ok(parse_expr(field(obj, ptr, "inner")?, &at("inner"), dim)?.reflected()),
        other => return Err(schema(&at("kind"), format!("unknown kind {other:?}"))),
    };
    built.map_err(|e| match e {
        Error::Schema { .. } => e,
        other => schema(ptr, other.to_string()),
    })
}

fn parse_similarity(value: &Value, ptr: &str, dim: usize) -> Result<Similarity> {
    let obj = object(value, ptr)?;
    let translation = vector(field(obj, ptr, "translation")?, &format!("{ptr}/translation"), dim)?;
    let ratio_ptr = format!("{ptr}/ratio");
    let ratio = number(field(obj, ptr, "ratio")?, &ratio_ptr)?;
    if ratio <= 0.0 {
        return Err(schema(&ratio_ptr, "ratio must be positive"));
    }
    let rot_ptr = format!("{ptr}/rotation");
    let rows_json = array(field(obj, ptr, "rotation")?, &rot_ptr)?;
    if rows_json.len() != dim {
        return Err(schema(&rot_ptr, format!("expected {dim} rows")));
    }
    let rows = rows_json
        .iter()
        .enumerate()
        .map(|(i, r)| vector(r, &format!("{rot_ptr}/{i}"), dim).map(Vector::into_inner))
        .collect::<Result<Vec<_>>>()?;
    Similarity::new(translation, ratio, rows).map_err(|e| schema(&rot_ptr, e.to_string()))
}
