use std::collections::BTreeMap;
use std::path::Path;

use super::{BaseDomain, PolytopeBase};
use crate::error::{Error, Result};
use crate::linalg::RVec;

const NAMES: [&str; 7] = ["ball2", "ball3", "disc", "ellipsoid2", "ellipsoid3", "superellipse2", "square"];

pub fn catalog_names() -> &'static [&'static str] {
    &NAMES
}

/// Built-in bases, all normalised to unit bounding radius.
pub fn from_catalog(name: &str) -> Result<BaseDomain> {
    let dom = match name {
        "ball2" | "disc" => BaseDomain::unit_ball(2),
        "ball3" => BaseDomain::unit_ball(3),
        "ellipsoid2" => BaseDomain::ellipsoid(&[0.0, 0.0], &[1.0, 0.6])?,
        "ellipsoid3" => BaseDomain::ellipsoid(&[0.0, 0.0, 0.0], &[1.0, 0.7, 0.5])?,
        "superellipse2" => BaseDomain::superellipse(&[0.0, 0.0], &[0.8, 0.6], 4.0)?,
        "square" => BaseDomain::interval_product(&[0.0, 0.0], &[1.0, 1.0])?,
        _ => return Err(Error::Parse(format!("unknown catalog domain '{}'", name))),
    };
    Ok(dom.with_label(name))
}

/// A catalog name, or a path to a key=value domain file.
pub fn load_domain(name_or_path: &str) -> Result<BaseDomain> {
    if NAMES.contains(&name_or_path) {
        return from_catalog(name_or_path);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(Error::Parse(format!("'{}' is neither a catalog domain nor a readable file", name_or_path)));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {}", name_or_path, e)))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("file");
    Ok(parse_domain(&text)?.with_label(stem))
}

fn numbers(key: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{}' in {}", t, key))))
        .collect()
}

/// Parses the key=value domain description:
///
/// ```text
/// kind = ellipsoid        # ball | ellipsoid | superellipse | polytope | interval-product
/// n = 2
/// axes = 1.0, 0.6
/// center = 0, 0
/// ```
///
/// Other keys: `radius` (ball), `exponent` (superellipse), `halfspaces`
/// (rows `u_1, …, u_n, c` separated by `;`), `lower` / `upper` (interval product).
pub fn parse_domain(text: &str) -> Result<BaseDomain> {
    let mut kv = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
        kv.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
    }
    let kind = kv.get("kind").ok_or_else(|| Error::Parse("missing 'kind'".into()))?.to_ascii_lowercase();
    let n: Option<usize> = match kv.get("n") {
        Some(s) => Some(s.parse().map_err(|_| Error::Parse(format!("bad dimension '{}'", s)))?),
        None => None,
    };
    let get = |key: &str| -> Result<Option<Vec<f64>>> { kv.get(key).map(|s| numbers(key, s)).transpose() };
    let axes = get("axes")?;
    let dim = n
        .or(axes.as_ref().map(|a| a.len()))
        .or(get("lower")?.map(|l| l.len()))
        .or(get("center")?.map(|c| c.len()));
    let center = match get("center")? {
        Some(c) => c,
        None => vec![0.0; dim.unwrap_or(0)],
    };
    let check_len = |what: &str, v: &[f64]| -> Result<()> {
        match dim {
            Some(d) if d != v.len() => Err(Error::Parse(format!("{} has {} entries, expected n = {}", what, v.len(), d))),
            _ => Ok(()),
        }
    };
    check_len("center", &center)?;
    match kind.as_str() {
        "ball" => {
            let r = match kv.get("radius") {
                Some(s) => s.parse().map_err(|_| Error::Parse(format!("bad radius '{}'", s)))?,
                None => 1.0,
            };
            if center.is_empty() {
                return Err(Error::Parse("ball needs 'n' or 'center'".into()));
            }
            BaseDomain::ball(&center, r)
        }
        "ellipsoid" | "superellipse" => {
            let axes = axes.ok_or_else(|| Error::Parse(format!("{} needs 'axes'", kind)))?;
            check_len("axes", &axes)?;
            if kind == "ellipsoid" {
                BaseDomain::ellipsoid(&center, &axes)
            } else {
                let p = kv
                    .get("exponent")
                    .ok_or_else(|| Error::Parse("superellipse needs 'exponent'".into()))?
                    .parse()
                    .map_err(|_| Error::Parse("bad exponent".into()))?;
                BaseDomain::superellipse(&center, &axes, p)
            }
        }
        "interval-product" | "interval_product" | "box" => {
            let lower = get("lower")?.ok_or_else(|| Error::Parse("interval product needs 'lower'".into()))?;
            let upper = get("upper")?.ok_or_else(|| Error::Parse("interval product needs 'upper'".into()))?;
            check_len("lower", &lower)?;
            check_len("upper", &upper)?;
            BaseDomain::interval_product(&lower, &upper)
        }
        "polytope" => {
            let rows = kv.get("halfspaces").ok_or_else(|| Error::Parse("polytope needs 'halfspaces'".into()))?;
            let mut normals = Vec::new();
            let mut offsets = Vec::new();
            for row in rows.split(';').map(str::trim).filter(|r| !r.is_empty()) {
                let v = numbers("halfspaces", row)?;
                if v.len() < 2 {
                    return Err(Error::Parse(format!("half-space row '{}' too short", row)));
                }
                let (u, c) = v.split_at(v.len() - 1);
                check_len("half-space normal", u)?;
                normals.push(RVec::from_column_slice(u));
                offsets.push(c[0]);
            }
            Ok(BaseDomain::polytope(PolytopeBase::new(normals, offsets)?))
        }
        other => Err(Error::Parse(format!("unknown domain kind '{}'", other))),
    }
}
