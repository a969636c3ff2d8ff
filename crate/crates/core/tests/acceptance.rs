//! End-to-end checks on the reference surfaces. Prints one line per criterion and
//! exits nonzero if any of them fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{plane, quadric, random_cubic, sphere, steiner, surface, triangular, Q};
use fibratrix::error::Error;
use fibratrix::fiber::{
    classify, classify_fiber, classify_fiber_bigraded, corank_at, evaluate_rep, fiber_curve, membership,
    pullback_classify, unique_preimage, CurveDegree, FiberReport, PointSpace, ProjPoint,
};
use fibratrix::fitting::{fitting_generators, pullback_fitting, FittingGenerators, MinorRequest};
use fibratrix::linalg::{rank, ExactMatrix};
use fibratrix::matrix_rep::{build_matrix_rep, compute_nu0, region_admissible, Parameterization};
use fibratrix::poly::{monomial_basis, multivariate_gcd, parse_poly, DegIndex, MultiPoly, RingSpec};
use fibratrix::sample;
use fibratrix::surface::Surface;
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn target(c: &[i64]) -> ProjPoint {
    ProjPoint::from_i64(PointSpace::Target, Q, c).unwrap()
}

fn x(text: &str) -> MultiPoly {
    parse_poly(text, RingSpec::Target, Q).unwrap()
}

/// Rank of the span of a family of forms of one degree, through their coefficients.
fn span_rank(polys: &[MultiPoly], ring: RingSpec, deg: u32) -> usize {
    let basis = monomial_basis(ring, DegIndex::Single(deg));
    let rows = polys.iter().map(|p| basis.iter().map(|m| p.coeff(m)).collect()).collect();
    rank(&ExactMatrix::from_rows(Q, basis.len(), rows))
}

fn same_up_to_scalar(a: &MultiPoly, b: &MultiPoly) -> bool {
    !a.is_zero() && !b.is_zero() && a.monic() == b.monic()
}

/// The sphere's matrix at index 1 as displayed in the literature, entries in X0..X3.
fn displayed_sphere_matrix() -> Vec<Vec<MultiPoly>> {
    [
        ["0", "X1", "X2", "-X0+X3"],
        ["X1", "0", "-X0-X3", "X2"],
        ["-X2", "-X0-X3", "0", "X1"],
    ]
    .iter()
    .map(|row| row.iter().map(|e| x(e)).collect())
    .collect()
}

fn corank_of_polys(m: &[Vec<MultiPoly>], p: &ProjPoint) -> usize {
    let rows = m
        .iter()
        .map(|row| row.iter().map(|e| e.eval(p.coords()).unwrap()).collect())
        .collect();
    m.len() - rank(&ExactMatrix::from_rows(Q, m[0].len(), rows))
}

fn criterion_1() -> Outcome {
    let rep = build_matrix_rep(&sphere(), DegIndex::Single(1));
    ensure!(rep.rows() == 3 && rep.cols() == 4, "shape {}x{}", rep.rows(), rep.cols());
    let s = surface(&sphere());
    let displayed = displayed_sphere_matrix();
    let mut got = Vec::new();
    for (p, want) in [([0, 0, 0, 1], 0), ([1, 0, 0, 1], 1), ([1, 0, 0, -1], 2)] {
        let p = target(&p);
        let c = corank_at(&s, DegIndex::Single(1), &p).map_err(|e| e.to_string())?;
        let reference = corank_of_polys(&displayed, &p);
        ensure!(c == want && reference == want, "corank at {p}: {c}, displayed matrix {reference}, want {want}");
        got.push(c);
    }
    Ok(format!("3x4 matrix, coranks {got:?}"))
}

fn criterion_2() -> Outcome {
    let sat = compute_nu0(&sphere()).map_err(|e| e.to_string())?;
    let got = (sat.indeg_sat, sat.nu0, sat.base_locus_degree);
    ensure!(got == (1, 1, Some(2)), "got {got:?}");
    Ok("indeg_sat=1 nu0=1 base_locus_degree=2".into())
}

fn criterion_3() -> Outcome {
    let phi = sphere();
    let s = surface(&phi);
    let p = target(&[1, 0, 0, -1]);
    let r = classify_fiber(&s, &p).map_err(|e| e.to_string())?;
    let c = r.curve().ok_or("fiber is not a curve")?;
    ensure!(c.degree == CurveDegree::Degree(1), "delta {:?}", c.degree);
    ensure!(c.hilbert_constant == 1, "c = {}", c.hilbert_constant);
    ensure!(c.residual_finite_degree == Some(0), "N_res = {:?}", c.residual_finite_degree);
    let h = fiber_curve(&phi, &p).map_err(|e| e.to_string())?.to_multi(Q);
    ensure!(same_up_to_scalar(&h, &parse_poly("s0", RingSpec::Triangular, Q).unwrap()), "h = {h}");
    Ok("curve, delta=1, c=1, N_res=0, h=s0".into())
}

fn criterion_4() -> Outcome {
    let rep = build_matrix_rep(&sphere(), DegIndex::Single(1));
    let g = fitting_generators(&MinorRequest::new(&rep, 0)).map_err(|e| e.to_string())?;
    let minors = g.polys();
    let gcd = multivariate_gcd(&minors).map_err(|e| e.to_string())?;
    ensure!(same_up_to_scalar(&gcd, &x("X0^2-X1^2-X2^2-X3^2")), "gcd = {gcd}");
    Ok(format!("{} nonzero maximal minors, gcd = {}", minors.len(), gcd.monic()))
}

fn criterion_5() -> Outcome {
    let phi = sphere();
    let rep = build_matrix_rep(&phi, DegIndex::Single(1));
    let bottom = pullback_fitting(&phi, &MinorRequest::new(&rep, 0)).map_err(|e| e.to_string())?;
    ensure!(bottom.polys().is_empty(), "i=0 pulled back to {} nonzero polys", bottom.polys().len());
    let top = pullback_fitting(&phi, &MinorRequest::new(&rep, rep.rows() - 1)).map_err(|e| e.to_string())?;
    let pulled = top.polys();
    ensure!(matches!(top, FittingGenerators::Minors { .. }), "unexpected unit ideal");
    let forms = phi.forms().to_vec();
    let r_pulled = span_rank(&pulled, RingSpec::Triangular, 2);
    let r_forms = span_rank(&forms, RingSpec::Triangular, 2);
    let mut both = pulled.clone();
    both.extend(forms.iter().cloned());
    let r_both = span_rank(&both, RingSpec::Triangular, 2);
    ensure!(
        r_pulled == r_forms && r_both == r_forms,
        "span ranks: pulled {r_pulled}, I_2 {r_forms}, together {r_both}"
    );
    Ok(format!("i=0 gives [], i={} spans I_2 (rank {r_forms})", rep.rows() - 1))
}

/// Round trip on `n` seeded source points; returns (checked, skipped).
fn round_trip(phi: &Parameterization, n: usize, seed: u64) -> Result<(usize, usize), String> {
    let s = surface(phi);
    let mut skipped = 0;
    let mut checked = 0;
    for src in sample::source_points(phi.ring(), Q, n, seed, 30) {
        let (p, report) = match pullback_classify(&s, &src) {
            Err(Error::BasePoint(_)) => {
                skipped += 1;
                continue;
            }
            other => other.map_err(|e| e.to_string())?,
        };
        match report.finite_degree() {
            Some(1) => {
                let pre = unique_preimage(&s, &p).map_err(|e| format!("{src}: {e}"))?;
                ensure!(pre == src, "preimage of {p} is {pre}, expected {src}");
                checked += 1;
            }
            Some(k) if k >= 2 => skipped += 1,
            _ => {
                if report.curve().is_some() {
                    skipped += 1;
                } else {
                    return Err(format!("{src} maps to {p}, classified {:?}", report.kind));
                }
            }
        }
    }
    Ok((checked, skipped))
}

fn criterion_6() -> Outcome {
    let (c1, s1) = round_trip(&sphere(), 100, 6)?;
    let (c2, s2) = round_trip(&random_cubic(60), 100, 61)?;
    ensure!(s1 < 10 && s2 < 10, "skipped {s1} sphere and {s2} cubic points");
    Ok(format!("sphere {c1} round trips ({s1} skipped), cubic {c2} round trips ({s2} skipped)"))
}

fn criterion_7() -> Outcome {
    let non_birational = triangular(["s0^2", "s1^2", "s2^2", "s0*s1"]);
    let mut cases: Vec<(&str, Parameterization, Vec<ProjPoint>)> = Vec::new();
    for (name, phi, seed) in [
        ("sphere", sphere(), 70u64),
        ("steiner", steiner(), 71),
        ("cubic", random_cubic(72), 73),
        ("double cover", non_birational, 74),
    ] {
        let images = sample::source_points(RingSpec::Triangular, Q, 5, seed, 6)
            .into_iter()
            .filter_map(|src| {
                let v = phi.eval(src.coords()).ok()?;
                ProjPoint::new(PointSpace::Target, v.to_vec()).ok()
            })
            .collect();
        cases.push((name, phi, images));
    }
    let mut special = vec![target(&[1, 0, 0, 0])];
    for (a, b) in [(1, 2), (2, 3), (1, 3)] {
        special.push(target(&[a * a + b * b, 0, 0, a * b]));
    }
    cases.push(("steiner special", steiner(), special));

    let mut compared = 0;
    let mut degrees = std::collections::BTreeMap::new();
    for (name, phi, points) in &cases {
        let s = surface(phi);
        for (k, p) in points.iter().enumerate() {
            let report = classify(&s, p).map_err(|e| e.to_string())?;
            let Some(deg) = report.finite_degree() else {
                continue;
            };
            let oracle = common::resultant::fiber_degree(phi, p, 700 + k as u64);
            ensure!(deg == oracle, "{name} at {p}: classified {deg}, oracle {oracle}");
            *degrees.entry(deg).or_insert(0) += 1;
            compared += 1;
        }
    }
    ensure!(compared >= 20, "only {compared} finite fibers compared");
    Ok(format!("{compared} fibers agree, degree counts {degrees:?}"))
}

fn criterion_8() -> Outcome {
    let phi = plane();
    let s = surface(&phi);
    for (p, h) in [([1, 0, 0, 0], "s0"), ([0, 1, 0, 0], "s1")] {
        let p = target(&p);
        let r = classify_fiber(&s, &p).map_err(|e| e.to_string())?;
        let c = r.curve().ok_or_else(|| format!("{p} is not a curve fiber"))?;
        ensure!(c.degree == CurveDegree::Degree(1), "{p}: {:?}", c.degree);
        let got = fiber_curve(&phi, &p).map_err(|e| e.to_string())?.to_multi(Q);
        ensure!(
            same_up_to_scalar(&got, &parse_poly(h, RingSpec::Triangular, Q).unwrap()),
            "{p}: h = {got}"
        );
    }
    // The image is the plane X2 = X3.
    let mut rng = sample::rng(8);
    let mut finite = 0;
    while finite < 50 {
        let (a, b, c): (i64, i64, i64) = (rng.gen_range(-20..=20), rng.gen_range(-20..=20), rng.gen_range(-20..=20));
        if (b == 0 && c == 0) || (a == 0 && c == 0) || (a, b, c) == (0, 0, 0) {
            continue;
        }
        let p = target(&[a, b, c, c]);
        let r = classify_fiber(&s, &p).map_err(|e| e.to_string())?;
        ensure!(r.finite_degree().is_some(), "{p}: {:?}", r.kind);
        finite += 1;
    }
    Ok("curve fibers s0, s1; 50 random plane points finite".into())
}

fn criterion_9() -> Outcome {
    ensure!(!region_admissible((1, 1), (0, 0)), "(0,0) admitted");
    for nu in [(0, 1), (1, 0), (1, 1)] {
        ensure!(region_admissible((1, 1), nu), "{nu:?} rejected");
    }
    let s = surface(&quadric());
    let p = target(&[1, 0, 0, 0]);
    let r = classify_fiber_bigraded(&s, &p).map_err(|e| e.to_string())?;
    ensure!(r.finite_degree() == Some(1), "{:?}", r.kind);
    let pre = unique_preimage(&s, &p).map_err(|e| e.to_string())?;
    let want = ProjPoint::from_i64(PointSpace::P1xP1, Q, &[1, 0, 1, 0]).unwrap();
    ensure!(pre == want, "preimage {pre}");
    ensure!(!membership(&s, &target(&[1, 0, 0, 1])).map_err(|e| e.to_string())?, "(1:0:0:1) on the quadric");
    Ok(format!("region checks, preimage {pre}, (1:0:0:1) off surface"))
}

fn syzygy_identity(phi: &Parameterization, nu: DegIndex) -> Result<usize, String> {
    let rep = build_matrix_rep(phi, nu);
    for c in 0..rep.cols() {
        let g = rep.syzygy(c);
        let sum = (0..4).fold(MultiPoly::zero(phi.ring(), Q), |acc, i| acc.add(&g[i].mul(&phi.forms()[i])));
        ensure!(sum.is_zero(), "column {c} at {nu} is not a syzygy");
    }
    Ok(rep.cols())
}

fn report_of(s: &Surface, p: &ProjPoint) -> Result<FiberReport, String> {
    classify(s, p).map_err(|e| e.to_string())
}

fn criterion_10() -> Outcome {
    let triangular_maps = [sphere(), steiner(), plane(), random_cubic(100)];
    let mut columns = 0;
    for phi in &triangular_maps {
        for nu in 0..=phi.d() * 2 {
            columns += syzygy_identity(phi, DegIndex::Single(nu))?;
        }
    }
    for nu in [(0, 1), (1, 0), (1, 1), (2, 1)] {
        columns += syzygy_identity(&quadric(), DegIndex::Pair(nu.0, nu.1))?;
    }

    // Corank constancy and left-kernel membership at images of random source points.
    let mut constancy = 0;
    let mut kernel = 0;
    for (k, phi) in [sphere(), steiner(), random_cubic(100)].iter().enumerate() {
        let s = surface(phi);
        let nu = s.working_index().total();
        for src in sample::source_points(RingSpec::Triangular, Q, 10, 1000 + k as u64, 10) {
            let (p, report) = match pullback_classify(&s, &src) {
                Err(Error::BasePoint(_)) => continue,
                other => other.map_err(|e| e.to_string())?,
            };
            if let Some(deg) = report.finite_degree() {
                for extra in 0..3 {
                    let c = corank_at(&s, DegIndex::Single(nu + extra), &p).map_err(|e| e.to_string())?;
                    ensure!(c == deg, "corank {c} at nu={} for {p}, degree {deg}", nu + extra);
                }
                constancy += 1;
            }
            for m in nu..nu + 2 {
                let rep = s.rep(DegIndex::Single(m));
                let at_p = evaluate_rep(&rep, p.coords()).map_err(|e| e.to_string())?;
                let v: Vec<_> = rep.row_labels.iter().map(|mono| mono.eval(src.coords())).collect();
                let prod = at_p.transpose().mul_vec(&v);
                ensure!(prod.iter().all(|e| e.is_zero()), "monomial vector of {src} not in the left kernel at {p}");
                kernel += 1;
            }
        }
    }
    let qs = surface(&quadric());
    for src in sample::source_points(RingSpec::Tensor, Q, 10, 1010, 10) {
        let (p, _) = pullback_classify(&qs, &src).map_err(|e| e.to_string())?;
        let rep = qs.rep(qs.working_index());
        let at_p = evaluate_rep(&rep, p.coords()).map_err(|e| e.to_string())?;
        let v: Vec<_> = rep.row_labels.iter().map(|mono| mono.eval(src.coords())).collect();
        ensure!(at_p.transpose().mul_vec(&v).iter().all(|e| e.is_zero()), "quadric kernel at {src}");
        kernel += 1;
    }

    // Affine corank growth on the sphere's line fiber.
    let s = surface(&sphere());
    let line = target(&[1, 0, 0, -1]);
    for nu in 0..=3u32 {
        let c = corank_at(&s, DegIndex::Single(nu), &line).map_err(|e| e.to_string())?;
        ensure!(c == nu as usize + 1, "line fiber corank {c} at nu={nu}");
    }

    // No full corank on fuzzed target points.
    let mut rng = sample::rng(200);
    let fuzz_surfaces = [
        surface(&sphere()),
        surface(&steiner()),
        surface(&triangular(["s0^2", "s1^2", "s2^2", "s0*s1"])),
        surface(&quadric()),
    ];
    for k in 0..200 {
        let s = &fuzz_surfaces[k % fuzz_surfaces.len()];
        let coords: Vec<i64> = loop {
            let c: Vec<i64> = (0..4).map(|_| rng.gen_range(-6..=6)).collect();
            if c.iter().any(|&v| v != 0) {
                break c;
            }
        };
        let p = target(&coords);
        let nu = s.working_index();
        let c = corank_at(s, nu, &p).map_err(|e| e.to_string())?;
        ensure!(c < s.rep(nu).rows(), "full corank at {p}");
    }

    // Curve fibers against the base locus degree.
    let mut curves = 0;
    for (phi, pts) in [
        (sphere(), vec![target(&[1, 0, 0, -1])]),
        (plane(), vec![target(&[1, 0, 0, 0]), target(&[0, 1, 0, 0])]),
    ] {
        let s = surface(&phi);
        let base = s.sat_info().and_then(|i| i.base_locus_degree).ok_or("no base locus")?;
        for p in pts {
            let r = report_of(&s, &p)?;
            let c = r.curve().ok_or_else(|| format!("{p} not a curve fiber"))?;
            let h = c.curve_equation.as_ref().ok_or("missing curve equation")?;
            let deg_h = h.to_multi(Q).total_degree().unwrap_or(0);
            ensure!(phi.d() * deg_h <= base as u32, "d*deg(h) = {} > {base}", phi.d() * deg_h);
            curves += 1;
        }
    }
    Ok(format!(
        "{columns} syzygies, {constancy} constant coranks, {kernel} kernel vectors, 200 fuzzed points, {curves} curve fibers"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("sphere matrix coranks", criterion_1),
        ("sphere threshold", criterion_2),
        ("sphere line fiber", criterion_3),
        ("implicit equation from minors", criterion_4),
        ("pullback identities", criterion_5),
        ("preimage round trip", criterion_6),
        ("resultant oracle", criterion_7),
        ("plane with contracted lines", criterion_8),
        ("bi-graded quadric", criterion_9),
        ("property suites", criterion_10),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|n| n != k + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({ms} ms): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({ms} ms): {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
