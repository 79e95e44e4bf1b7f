//! Text formats: complex numbers as `a+bi`, polynomials as comma-separated
//! coefficients (low to high), and JSON region / condenser documents.
//!
//! ```text
//! {"type": "disc", "center": "0+0i", "radius": 1}
//! {"type": "annulus", "center": "0+0i", "r_in": 1, "r_out": 2}
//! {"type": "polygon", "vertices": ["0+0i", "1+0i", "1+1i", "0+1i"]}
//! {"type": "sublevel", "g": "-1+0i,0+0i,1+0i", "x": 1}
//! {"type": "preimage", "p": "0+0i,0+0i,1+0i", "inner": {...}}
//! {"type": "union", "parts": [{...}, {...}]}
//! {"type": "mask", "origin": "0+0i", "h": 0.1, "rows": ["0110", "1111"]}
//! {"E": {...}, "B": {...}}
//! ```
//! Mask rows are listed bottom to top.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::capacity::Condenser;
use crate::error::{Error, Result};
use crate::polynomial::Polynomial;
use crate::region::{PixelMask, Region};

type C = Complex64;

pub fn format_complex(z: C) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

fn parse_real(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse::<f64>().ok(),
    }
}

/// Parses `a+bi`, `a-bi`, `a`, `bi` (whitespace ignored).
pub fn parse_complex(text: &str) -> Option<C> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().ok().map(|re| C::new(re, 0.0));
    };
    // Split at the last sign that is not the leading one and not part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().ok()?;
            let im = parse_real(&body[k..])?;
            Some(C::new(re, im))
        }
        None => parse_real(body).map(|im| C::new(0.0, im)),
    }
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let coeffs = text
        .split(',')
        .enumerate()
        .map(|(k, part)| {
            parse_complex(part)
                .ok_or_else(|| Error::parse(format!("coefficient {k}"), format!("cannot parse `{}`", part.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::new(coeffs))
}

fn field<'a>(obj: &'a Value, path: &str, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::parse(format!("{path}.{name}"), "missing field"))
}

fn complex_field(obj: &Value, path: &str, name: &str) -> Result<C> {
    let v = field(obj, path, name)?;
    let parsed = match v {
        Value::String(s) => parse_complex(s),
        Value::Number(n) => n.as_f64().map(|re| C::new(re, 0.0)),
        _ => None,
    };
    parsed.ok_or_else(|| Error::parse(format!("{path}.{name}"), format!("expected complex `a+bi`, got {v}")))
}

fn real_field(obj: &Value, path: &str, name: &str) -> Result<f64> {
    let v = field(obj, path, name)?;
    v.as_f64()
        .ok_or_else(|| Error::parse(format!("{path}.{name}"), format!("expected number, got {v}")))
}

fn poly_field(obj: &Value, path: &str, name: &str) -> Result<Polynomial> {
    let v = field(obj, path, name)?;
    let s = v
        .as_str()
        .ok_or_else(|| Error::parse(format!("{path}.{name}"), "expected coefficient string"))?;
    parse_polynomial(s).map_err(|e| match e {
        Error::Parse { field, message } => Error::parse(format!("{path}.{name}.{field}"), message),
        other => other,
    })
}

fn rewrap(path: &str, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::parse(path, other.to_string()),
    }
}

pub fn region_from_value(v: &Value, path: &str) -> Result<Region> {
    let kind = field(v, path, "type")?
        .as_str()
        .ok_or_else(|| Error::parse(format!("{path}.type"), "expected string"))?;
    let region = match kind {
        "disc" => Region::disc(complex_field(v, path, "center")?, real_field(v, path, "radius")?),
        "annulus" => Region::annulus(
            complex_field(v, path, "center")?,
            real_field(v, path, "r_in")?,
            real_field(v, path, "r_out")?,
        ),
        "polygon" => {
            let list = field(v, path, "vertices")?
                .as_array()
                .ok_or_else(|| Error::parse(format!("{path}.vertices"), "expected array"))?;
            let vertices = list
                .iter()
                .enumerate()
                .map(|(k, item)| {
                    item.as_str().and_then(parse_complex).ok_or_else(|| {
                        Error::parse(format!("{path}.vertices[{k}]"), format!("expected complex, got {item}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Region::polygon(vertices)
        }
        "sublevel" => crate::region::sublevel_region(&poly_field(v, path, "g")?, real_field(v, path, "x")?),
        "preimage" => {
            let inner = region_from_value(field(v, path, "inner")?, &format!("{path}.inner"))?;
            crate::region::preimage_region(&poly_field(v, path, "p")?, &inner)
        }
        "union" => {
            let list = field(v, path, "parts")?
                .as_array()
                .ok_or_else(|| Error::parse(format!("{path}.parts"), "expected array"))?;
            let parts = list
                .iter()
                .enumerate()
                .map(|(k, item)| region_from_value(item, &format!("{path}.parts[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            Region::union(parts)
        }
        "mask" => {
            let origin = complex_field(v, path, "origin")?;
            let h = real_field(v, path, "h")?;
            let rows = field(v, path, "rows")?
                .as_array()
                .ok_or_else(|| Error::parse(format!("{path}.rows"), "expected array of strings"))?;
            let rows: Vec<&str> = rows
                .iter()
                .enumerate()
                .map(|(k, r)| {
                    r.as_str()
                        .ok_or_else(|| Error::parse(format!("{path}.rows[{k}]"), "expected string"))
                })
                .collect::<Result<_>>()?;
            let nx = rows.first().map_or(0, |r| r.len());
            let mut bits = Vec::with_capacity(nx * rows.len());
            for (k, row) in rows.iter().enumerate() {
                if row.len() != nx {
                    return Err(Error::parse(format!("{path}.rows[{k}]"), "rows must have equal length"));
                }
                for ch in row.chars() {
                    bits.push(match ch {
                        '1' | '#' => true,
                        '0' | '.' => false,
                        _ => return Err(Error::parse(format!("{path}.rows[{k}]"), format!("unexpected `{ch}`"))),
                    });
                }
            }
            Region::mask(PixelMask {
                origin,
                h,
                nx,
                ny: rows.len(),
                bits,
            })
        }
        other => {
            return Err(Error::parse(
                format!("{path}.type"),
                format!("unknown region type `{other}`"),
            ))
        }
    };
    region.map_err(|e| rewrap(path, e))
}

pub fn parse_region(text: &str) -> Result<Region> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::parse("region", e.to_string()))?;
    region_from_value(&v, "region")
}

pub fn region_to_json(region: &Region) -> Value {
    match region {
        Region::Disc { center, radius } => {
            json!({"type": "disc", "center": format_complex(*center), "radius": radius})
        }
        Region::Annulus { center, r_in, r_out } => {
            json!({"type": "annulus", "center": format_complex(*center), "r_in": r_in, "r_out": r_out})
        }
        Region::Polygon { vertices } => json!({
            "type": "polygon",
            "vertices": vertices.iter().map(|v| format_complex(*v)).collect::<Vec<_>>(),
        }),
        Region::Sublevel { g, x } => json!({"type": "sublevel", "g": g.to_string(), "x": x}),
        Region::Preimage { p, inner } => {
            json!({"type": "preimage", "p": p.to_string(), "inner": region_to_json(inner)})
        }
        Region::Union { parts } => json!({
            "type": "union",
            "parts": parts.iter().map(region_to_json).collect::<Vec<_>>(),
        }),
        Region::Mask(m) => {
            let rows: Vec<String> = (0..m.ny)
                .map(|j| (0..m.nx).map(|i| if m.get(i, j) { '1' } else { '0' }).collect())
                .collect();
            json!({"type": "mask", "origin": format_complex(m.origin), "h": m.h, "rows": rows})
        }
    }
}

pub fn parse_condenser(text: &str) -> Result<Condenser> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::parse("condenser", e.to_string()))?;
    let field_region = region_from_value(field(&v, "condenser", "E")?, "condenser.E")?;
    let plate = region_from_value(field(&v, "condenser", "B")?, "condenser.B")?;
    Condenser::new(field_region, plate)
}

pub fn condenser_to_json(c: &Condenser) -> Value {
    json!({"E": region_to_json(&c.field), "B": region_to_json(&c.plate)})
}

/// `center,radius` as used on the command line for discs.
pub fn parse_disc(text: &str) -> Result<Region> {
    let (center, radius) = text
        .rsplit_once(',')
        .ok_or_else(|| Error::parse("disc", "expected `center,radius`"))?;
    let center =
        parse_complex(center).ok_or_else(|| Error::parse("disc.center", format!("cannot parse `{center}`")))?;
    let radius: f64 = radius
        .trim()
        .parse()
        .map_err(|_| Error::parse("disc.radius", format!("cannot parse `{radius}`")))?;
    Region::disc(center, radius).map_err(|e| rewrap("disc", e))
}
