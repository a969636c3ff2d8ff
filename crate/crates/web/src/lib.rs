//! WebAssembly bindings for the demo page in `www/`. Every function takes the four
//! polynomials as one `;`-separated string and returns a JSON document; errors come back
//! as `{"error": "..."}` so the page never has to catch exceptions.

use fibratrix::error::Error;
use fibratrix::fiber::{self, PointSpace, ProjPoint};
use fibratrix::field::Field;
use fibratrix::matrix_rep::Parameterization;
use fibratrix::poly::{DegIndex, RingSpec};
use fibratrix::report;
use fibratrix::surface::Surface;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn surface(ring: &str, polys: &str) -> Result<Surface, Error> {
    let ring: RingSpec = ring.parse()?;
    let texts: Vec<&str> = polys.split(';').map(str::trim).collect();
    let texts: [&str; 4] = texts.try_into().map_err(|v: Vec<&str>| Error::Arity {
        expected: 4,
        got: v.len(),
    })?;
    Surface::new(Parameterization::parse(ring, Field::Rational, &texts)?)
}

fn wrap(r: Result<Value, Error>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Classifies the fiber over a target point `a:b:c:d`.
pub fn classify_json(ring: &str, polys: &str, point: &str) -> String {
    wrap((|| {
        let s = surface(ring, polys)?;
        let p = ProjPoint::parse(point, PointSpace::Target, Field::Rational)?;
        let r = fiber::classify(&s, &p)?;
        let mut out = report::fiber(&p, &r, Field::Rational);
        out["label"] = json!(report::fiber_label(&r));
        out["nu0"] = json!(s.nu0());
        if r.finite_degree() == Some(1) {
            if let Ok(pre) = fiber::unique_preimage(&s, &p) {
                out["preimage"] = json!(pre.to_string());
            }
        }
        Ok(out)
    })())
}

/// Maps a source point (`a:b:c`, or `a:b;c:d` for tensor maps) and classifies the
/// fiber over its image.
pub fn classify_source_json(ring: &str, polys: &str, source: &str) -> String {
    wrap((|| {
        let s = surface(ring, polys)?;
        let space = PointSpace::source_of(s.parameterization().ring());
        let src = ProjPoint::parse(source, space, Field::Rational)?;
        let (p, r) = fiber::pullback_classify(&s, &src)?;
        let mut out = report::fiber(&p, &r, Field::Rational);
        out["source"] = json!(src.to_string());
        out["label"] = json!(report::fiber_label(&r));
        Ok(out)
    })())
}

/// `M(phi)_nu`; `nu` is `"1"` or `"0,1"`, empty for the default index.
pub fn matrix_json(ring: &str, polys: &str, nu: &str) -> String {
    wrap((|| {
        let s = surface(ring, polys)?;
        let nu = parse_index(nu)?.unwrap_or(s.working_index());
        if nu.ring() != s.parameterization().ring() {
            return Err(Error::RingMismatch(format!("index {nu} does not fit the ring")));
        }
        Ok(report::matrix_rep(&s.rep(nu), s.is_admissible(nu)))
    })())
}

fn parse_index(text: &str) -> Result<Option<DegIndex>, Error> {
    let text = text.trim().trim_matches(|c| c == '(' || c == ')');
    if text.is_empty() {
        return Ok(None);
    }
    let bad = || Error::BadPoint(format!("bad index `{text}`"));
    let parts: Vec<u32> = text
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [n] => Ok(Some(DegIndex::Single(n))),
        [a, b] => Ok(Some(DegIndex::Pair(a, b))),
        _ => Err(bad()),
    }
}

/// Labels of the fibers through a `size x size` grid of source points. Triangular maps use
/// the affine chart `(1 : u : v)`, tensor maps `((1 : u), (1 : v))`, with
/// `u, v = k / scale` for `k` in `-size/2 .. size/2`.
pub fn stratify_json(ring: &str, polys: &str, size: u32, scale: u32) -> String {
    wrap((|| {
        let s = surface(ring, polys)?;
        let phi = s.parameterization();
        let space = PointSpace::source_of(phi.ring());
        let q = Field::Rational;
        let half = size as i64 / 2;
        let scale = scale.max(1) as i64;
        let coord = |k: i64| q.from_ratio(&k.into(), &scale.into()).unwrap();
        let mut points = Vec::new();
        for j in 0..size as i64 {
            for i in 0..size as i64 {
                let (u, v) = (coord(i - half), coord(half - j));
                let c = match space {
                    PointSpace::Plane => vec![q.one(), u, v],
                    _ => vec![q.one(), u, q.one(), v],
                };
                points.push(ProjPoint::new(space, c)?);
            }
        }
        let labels: Vec<String> = fiber::stratify(&s, points)
            .into_iter()
            .map(|r| match r {
                Ok((_, rep)) => Ok(report::fiber_label(&rep)),
                Err(Error::BasePoint(_)) => Ok("base_point".into()),
                Err(e) => Err(e),
            })
            .collect::<Result<_, _>>()?;
        Ok(json!({ "size": size, "scale": scale, "nu0": s.nu0(), "labels": labels }))
    })())
}

#[wasm_bindgen]
pub fn classify(ring: &str, polys: &str, point: &str) -> String {
    classify_json(ring, polys, point)
}

#[wasm_bindgen]
pub fn classify_source(ring: &str, polys: &str, source: &str) -> String {
    classify_source_json(ring, polys, source)
}

#[wasm_bindgen]
pub fn matrix(ring: &str, polys: &str, nu: &str) -> String {
    matrix_json(ring, polys, nu)
}

#[wasm_bindgen]
pub fn stratify(ring: &str, polys: &str, size: u32, scale: u32) -> String {
    stratify_json(ring, polys, size, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPHERE: &str = "s0^2+s1^2+s2^2; 2*s0*s2; 2*s0*s1; s0^2-s1^2-s2^2";

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn classify_line_point() {
        let v = parse(classify_json("triangular", SPHERE, "1:0:0:-1"));
        assert_eq!(v["label"], "curve:1");
        assert_eq!(v["curve_equation"], "s0");
        let v = parse(classify_json("triangular", SPHERE, "3:2:2:-1"));
        assert_eq!(v["preimage"], "(1:1:1)");
    }

    #[test]
    fn classify_from_source() {
        let v = parse(classify_source_json("triangular", SPHERE, "0:1:1"));
        assert_eq!(v["point"], "(1:0:0:-1)");
        assert_eq!(v["label"], "curve:1");
        let v = parse(classify_source_json("tensor", "s0*t0; s0*t1; s1*t0; s1*t1", "1:2;1:3"));
        assert_eq!(v["point"], "(1:3:2:6)");
        assert!(parse(classify_source_json("triangular", SPHERE, "0:1:0")).get("error").is_none());
    }

    #[test]
    fn matrix_shapes() {
        let v = parse(matrix_json("triangular", SPHERE, ""));
        assert_eq!((v["rows"].as_u64(), v["cols"].as_u64()), (Some(3), Some(4)));
        let v = parse(matrix_json("tensor", "s0*t0; s0*t1; s1*t0; s1*t1", "0,1"));
        assert_eq!(v["cols"], 2);
        assert!(parse(matrix_json("tensor", "s0*t0; s0*t1; s1*t0; s1*t1", "2")).get("error").is_some());
    }

    #[test]
    fn grid_labels() {
        let v = parse(stratify_json("triangular", SPHERE, 6, 2));
        let labels = v["labels"].as_array().unwrap();
        assert_eq!(labels.len(), 36);
        assert!(labels.iter().all(|l| l == "finite:1"));
        let plane = "s1*s2; s0*(s0+s1+s2); s0*s1; s0*s1";
        let v = parse(stratify_json("triangular", plane, 5, 1));
        // The column u = 0 of the chart (1:u:v) lies on the contracted line s1 = 0.
        assert!(v["labels"].as_array().unwrap().iter().any(|l| l == "curve:1"));
    }

    #[test]
    fn errors_are_reported() {
        assert!(parse(classify_json("triangular", "s0; s1", "1:0:0:0")).get("error").is_some());
        assert!(parse(classify_json("triangular", SPHERE, "1:0")).get("error").is_some());
    }
}
