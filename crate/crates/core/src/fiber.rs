//! Fibers of the graph projection: coranks of evaluated matrix representations,
//! classification, preimage recovery and 1-dimensional fiber curves.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::field::{Field, FieldElem};
use crate::linalg::{left_kernel, rank, ExactMatrix};
use crate::matrix_rep::{MatrixRep, Parameterization};
use crate::poly::{basis_index, multivariate_gcd, DegIndex, GradedPoly, Monomial, MultiPoly, RingSpec};
use crate::surface::Surface;

/// Which projective space a point lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointSpace {
    /// Target `P^3`.
    Target,
    /// Source `P^2`.
    Plane,
    /// Source `P^1 x P^1`, stored as `(s0, s1, t0, t1)`.
    P1xP1,
}

impl PointSpace {
    pub fn arity(&self) -> usize {
        match self {
            PointSpace::Plane => 3,
            _ => 4,
        }
    }

    pub fn source_of(ring: RingSpec) -> PointSpace {
        match ring {
            RingSpec::Triangular => PointSpace::Plane,
            RingSpec::Tensor => PointSpace::P1xP1,
            RingSpec::Target => PointSpace::Target,
        }
    }

    fn factors(&self) -> &'static [std::ops::Range<usize>] {
        match self {
            PointSpace::Target => &[0..4],
            PointSpace::Plane => &[0..3],
            PointSpace::P1xP1 => &[0..2, 2..4],
        }
    }
}

/// Homogeneous coordinates, normalized so the first nonzero coordinate of each
/// projective factor is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    space: PointSpace,
    coords: Vec<FieldElem>,
}

impl ProjPoint {
    pub fn new(space: PointSpace, mut coords: Vec<FieldElem>) -> Result<Self, Error> {
        if coords.len() != space.arity() {
            return Err(Error::Arity {
                expected: space.arity(),
                got: coords.len(),
            });
        }
        let field = coords[0].field();
        if coords.iter().any(|c| c.field() != field) {
            return Err(Error::BadPoint("coordinates from different fields".into()));
        }
        for range in space.factors() {
            let part = &mut coords[range.clone()];
            let Some(lead) = part.iter().find(|c| !c.is_zero()).cloned() else {
                return Err(Error::BadPoint("all coordinates of a factor are zero".into()));
            };
            let inv = lead.inv();
            for c in part.iter_mut() {
                *c = &*c * &inv;
            }
        }
        Ok(ProjPoint { space, coords })
    }

    pub fn from_i64(space: PointSpace, field: Field, coords: &[i64]) -> Result<Self, Error> {
        Self::new(space, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Parses `a:b:c:d` (coordinates may be `p/q`); for `P^1 x P^1` the two factors are
    /// separated by `;` or `,`, e.g. `1:0;1:0`.
    pub fn parse(text: &str, space: PointSpace, field: Field) -> Result<Self, Error> {
        let parts: Vec<&str> = text
            .split([':', ';', ','])
            .map(str::trim)
            .map(|p| p.trim_matches(|c| c == '(' || c == ')').trim())
            .collect();
        let coords = parts
            .iter()
            .map(|p| parse_scalar(p, field))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(space, coords)
    }

    pub fn space(&self) -> PointSpace {
        self.space
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .space
            .factors()
            .iter()
            .map(|r| {
                let c: Vec<String> = self.coords[r.clone()].iter().map(|c| c.to_string()).collect();
                c.join(":")
            })
            .collect();
        if parts.len() == 1 {
            write!(f, "({})", parts[0])
        } else {
            write!(f, "({}),({})", parts[0], parts[1])
        }
    }
}

/// Parses an integer or `p/q` into the field.
pub fn parse_scalar(text: &str, field: Field) -> Result<FieldElem, Error> {
    let bad = || Error::BadPoint(format!("`{text}` is not a rational number"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    field.from_ratio(&num, &den)
}

/// Degree data of the 1-dimensional part of a fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveDegree {
    Degree(u32),
    Bidegree(u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFiber {
    pub degree: CurveDegree,
    /// Constant term `c` of the fiber's Hilbert polynomial (`delta t + c`, or
    /// `e1 t1 + e2 t2 + c`).
    pub hilbert_constant: i64,
    /// Degree of the residual finite part (triangular only).
    pub residual_finite_degree: Option<i64>,
    /// Equation `h_p` of the unmixed curve component.
    pub curve_equation: Option<GradedPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberKind {
    OffSurface,
    Finite { degree: usize },
    Curve(CurveFiber),
}

/// Result of fiber classification at one target point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub kind: FiberKind,
    /// Coranks used, in the order they were computed.
    pub coranks: Vec<(DegIndex, usize)>,
    /// Set when some index used lies below the admissibility threshold.
    pub below_threshold: bool,
    pub notes: Vec<String>,
}

impl FiberReport {
    pub fn finite_degree(&self) -> Option<usize> {
        match self.kind {
            FiberKind::Finite { degree } => Some(degree),
            _ => None,
        }
    }

    pub fn curve(&self) -> Option<&CurveFiber> {
        match &self.kind {
            FiberKind::Curve(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_off_surface(&self) -> bool {
        self.kind == FiberKind::OffSurface
    }
}

/// `p0 A0 + p1 A1 + p2 A2 + p3 A3`.
pub fn evaluate_rep(m: &MatrixRep, point: &[FieldElem]) -> Result<ExactMatrix, Error> {
    if point.len() != 4 {
        return Err(Error::Arity {
            expected: 4,
            got: point.len(),
        });
    }
    let field = m.parameterization.field();
    if let Some(bad) = point.iter().find(|c| c.field() != field) {
        return Err(Error::BadField(format!("coordinate {bad} is not in {field}")));
    }
    let mut acc = ExactMatrix::zeros(field, m.rows(), m.cols());
    for (a, p) in m.coefficients.iter().zip(point) {
        if p.is_zero() {
            continue;
        }
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let e = a.get(r, c);
                if !e.is_zero() {
                    let v = acc.get(r, c) + &(e * p);
                    acc.set(r, c, v);
                }
            }
        }
    }
    Ok(acc)
}

fn check_target(surface: &Surface, p: &ProjPoint) -> Result<(), Error> {
    if p.space != PointSpace::Target {
        return Err(Error::BadPoint("expected a point of P^3".into()));
    }
    if p.field() != surface.parameterization().field() {
        return Err(Error::BadField(format!(
            "point over {} but parameterization over {}",
            p.field(),
            surface.parameterization().field()
        )));
    }
    Ok(())
}

/// Coordinates of `p` scaled to coprime integers over `Q`; rank and kernels of the
/// evaluated matrix only depend on the point up to scalar, and integer entries keep the
/// elimination small.
fn primitive_coords(p: &ProjPoint) -> Vec<FieldElem> {
    let rats: Option<Vec<&BigRational>> = p.coords().iter().map(FieldElem::as_rational).collect();
    let Some(rats) = rats else {
        return p.coords().to_vec();
    };
    let lcm = rats.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    ints.iter().map(|v| p.field().from_bigint(&(v / &g))).collect()
}

/// `rows - rank` of `M(phi)_nu` evaluated at `p`.
pub fn corank_at(surface: &Surface, nu: DegIndex, p: &ProjPoint) -> Result<usize, Error> {
    check_target(surface, p)?;
    let m = surface.rep(nu);
    let e = evaluate_rep(&m, &primitive_coords(p))?;
    Ok(m.rows() - rank(&e))
}

/// Whether `p` lies on the surface: the corank at the working index is positive.
pub fn membership(surface: &Surface, p: &ProjPoint) -> Result<bool, Error> {
    Ok(corank_at(surface, surface.working_index(), p)? > 0)
}

/// Classifies the fiber over `p`, dispatching on the source ring.
pub fn classify(surface: &Surface, p: &ProjPoint) -> Result<FiberReport, Error> {
    match surface.parameterization().ring() {
        RingSpec::Tensor => classify_fiber_bigraded(surface, p),
        _ => classify_fiber(surface, p),
    }
}

fn binom2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// Fiber characters over `p` for a map from `P^2`, from the coranks at `nu` and `nu + 1`.
pub fn classify_fiber(surface: &Surface, p: &ProjPoint) -> Result<FiberReport, Error> {
    let phi = surface.parameterization();
    if phi.ring() != RingSpec::Triangular {
        return Err(Error::Unsupported("classify_fiber needs a triangular map".into()));
    }
    let DegIndex::Single(nu) = surface.working_index() else {
        unreachable!()
    };
    let below_threshold = !surface.is_admissible(DegIndex::Single(nu));
    let r = corank_at(surface, DegIndex::Single(nu), p)?;
    let mut report = FiberReport {
        kind: FiberKind::OffSurface,
        coranks: vec![(DegIndex::Single(nu), r)],
        below_threshold,
        notes: Vec::new(),
    };
    if r == 0 {
        return Ok(report);
    }
    if r <= nu as usize {
        report.kind = FiberKind::Finite { degree: r };
        return Ok(report);
    }
    let r_next = corank_at(surface, DegIndex::Single(nu + 1), p)?;
    report.coranks.push((DegIndex::Single(nu + 1), r_next));
    if r_next == r {
        report.kind = FiberKind::Finite { degree: r };
        return Ok(report);
    }
    if r_next < r {
        report
            .notes
            .push(format!("corank decreased from {r} to {r_next}; hypotheses (H) likely violated"));
        report.kind = FiberKind::Finite { degree: r };
        return Ok(report);
    }
    let delta = (r_next - r) as i64;
    let c = r as i64 - delta * nu as i64;
    let n_res = binom2(delta - 1) + c - 1;
    if n_res < 0 {
        report.notes.push(format!(
            "negative residual degree {n_res}; hypotheses (H) likely violated"
        ));
    }
    let curve_equation = match fiber_curve(phi, p) {
        Ok(h) => Some(h),
        Err(e) => {
            report.notes.push(format!("fiber curve unavailable: {e}"));
            None
        }
    };
    report.kind = FiberKind::Curve(CurveFiber {
        degree: CurveDegree::Degree(delta as u32),
        hilbert_constant: c,
        residual_finite_degree: Some(n_res),
        curve_equation,
    });
    Ok(report)
}

/// Bi-graded analogue: compares the coranks at `(d1-1, 2d2-1)`, `(d1, 2d2-1)` and
/// `(d1-1, 2d2)`.
pub fn classify_fiber_bigraded(surface: &Surface, p: &ProjPoint) -> Result<FiberReport, Error> {
    let phi = surface.parameterization();
    let DegIndex::Pair(d1, d2) = phi.degree() else {
        return Err(Error::Unsupported("classify_fiber_bigraded needs a tensor map".into()));
    };
    let DegIndex::Pair(n1, n2) = surface.working_index() else {
        unreachable!()
    };
    let _ = (d1, d2);
    let base = DegIndex::Pair(n1, n2);
    let step1 = DegIndex::Pair(n1 + 1, n2);
    let step2 = DegIndex::Pair(n1, n2 + 1);
    let r = corank_at(surface, base, p)?;
    let r1 = corank_at(surface, step1, p)?;
    let r2 = corank_at(surface, step2, p)?;
    let below_threshold = ![base, step1, step2].iter().all(|&nu| surface.is_admissible(nu));
    let mut report = FiberReport {
        kind: FiberKind::OffSurface,
        coranks: vec![(base, r), (step1, r1), (step2, r2)],
        below_threshold,
        notes: Vec::new(),
    };
    if r1 < r || r2 < r {
        report
            .notes
            .push("corank decreased along an index step; hypotheses (H) likely violated".into());
    }
    let e1 = r1.saturating_sub(r) as u32;
    let e2 = r2.saturating_sub(r) as u32;
    if e1 == 0 && e2 == 0 {
        if r > 0 {
            report.kind = FiberKind::Finite { degree: r };
        }
        return Ok(report);
    }
    let c = r as i64 - e1 as i64 * n1 as i64 - e2 as i64 * n2 as i64;
    let curve_equation = match fiber_curve(phi, p) {
        Ok(h) => Some(h),
        Err(e) => {
            report.notes.push(format!("fiber curve unavailable: {e}"));
            None
        }
    };
    report.kind = FiberKind::Curve(CurveFiber {
        degree: CurveDegree::Bidegree(e1, e2),
        hilbert_constant: c,
        residual_finite_degree: None,
        curve_equation,
    });
    Ok(report)
}

/// Index at which a unique preimage is read off: `2d - 2` (at least 1) for triangular
/// maps, `(d1, 2 d2 - 1)` for tensor maps.
pub fn preimage_index(phi: &Parameterization) -> DegIndex {
    match phi.degree() {
        DegIndex::Single(d) => DegIndex::Single((2 * d).saturating_sub(2).max(1)),
        DegIndex::Pair(d1, d2) => DegIndex::Pair(d1, 2 * d2 - 1),
    }
}

/// The unique preimage of `p`, read from the left kernel of the evaluated matrix.
pub fn unique_preimage(surface: &Surface, p: &ProjPoint) -> Result<ProjPoint, Error> {
    check_target(surface, p)?;
    let phi = surface.parameterization();
    if phi.ring() == RingSpec::Tensor {
        let report = classify_fiber_bigraded(surface, p)?;
        if report.finite_degree() != Some(1) {
            let (nu, corank) = report
                .coranks
                .iter()
                .find(|(_, c)| *c != 1)
                .copied()
                .unwrap_or(report.coranks[0]);
            return Err(Error::NotUnique {
                corank,
                nu: nu.to_string(),
            });
        }
    }
    let nu = preimage_index(phi);
    let m = surface.rep(nu);
    let e = evaluate_rep(&m, &primitive_coords(p))?;
    let kernel = left_kernel(&e);
    if kernel.cols() != 1 {
        return Err(Error::NotUnique {
            corank: kernel.cols(),
            nu: nu.to_string(),
        });
    }
    let v = kernel.column(0);
    let s = extract_preimage(&m, &v)?;
    let image = phi.eval(s.coords())?;
    if !proportional(&image, p.coords()) {
        return Err(Error::Internal(format!("recovered {s} does not map to {p}")));
    }
    Ok(s)
}

/// Reads source coordinates from a vector proportional to `(m(s))_m`.
fn extract_preimage(m: &MatrixRep, v: &[FieldElem]) -> Result<ProjPoint, Error> {
    let idx = basis_index(&m.row_labels);
    let at = |e: Vec<u32>| v[idx[&Monomial(e)]].clone();
    match m.index {
        DegIndex::Single(nu) => {
            for i in 0..3 {
                let mut pure = vec![0; 3];
                pure[i] = nu;
                if at(pure.clone()).is_zero() {
                    continue;
                }
                let coords = (0..3)
                    .map(|a| {
                        let mut e = pure.clone();
                        e[i] -= 1;
                        e[a] += 1;
                        at(e)
                    })
                    .collect();
                return ProjPoint::new(PointSpace::Plane, coords);
            }
        }
        DegIndex::Pair(n1, n2) => {
            for i in 0..2 {
                for j in 0..2 {
                    let mut pure = vec![0; 4];
                    pure[i] = n1;
                    pure[2 + j] = n2;
                    if at(pure.clone()).is_zero() {
                        continue;
                    }
                    let mut coords = Vec::with_capacity(4);
                    for a in 0..2 {
                        let mut e = pure.clone();
                        e[i] -= 1;
                        e[a] += 1;
                        coords.push(at(e));
                    }
                    for b in 0..2 {
                        let mut e = pure.clone();
                        e[2 + j] -= 1;
                        e[2 + b] += 1;
                        coords.push(at(e));
                    }
                    return ProjPoint::new(PointSpace::P1xP1, coords);
                }
            }
        }
    }
    Err(Error::Internal("kernel vector has no nonzero pure-power entry".into()))
}

/// `a` and `b` are nonzero and define the same projective point.
pub fn proportional(a: &[FieldElem], b: &[FieldElem]) -> bool {
    if a.len() != b.len() || a.iter().all(FieldElem::is_zero) || b.iter().all(FieldElem::is_zero) {
        return false;
    }
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

/// Equation of the unmixed 1-dimensional part of the fiber over `p`:
/// `gcd(f_i - p_i f_j)` where `j` is the first index with `p_j != 0`.
/// Returns the constant 1 when the gcd is trivial.
pub fn fiber_curve(phi: &Parameterization, p: &ProjPoint) -> Result<GradedPoly, Error> {
    if p.space != PointSpace::Target {
        return Err(Error::BadPoint("expected a point of P^3".into()));
    }
    let j = p.coords().iter().position(|c| !c.is_zero()).unwrap();
    let mut ell = vec![phi.field().zero(); 4];
    ell[j] = p.coords()[j].inv();
    fiber_curve_with_form(phi, p, &ell)
}

/// As [`fiber_curve`], with an explicit linear form `ell` satisfying `ell(p) = 1`.
pub fn fiber_curve_with_form(
    phi: &Parameterization,
    p: &ProjPoint,
    ell: &[FieldElem],
) -> Result<GradedPoly, Error> {
    let field = phi.field();
    let pc = p.coords();
    let ell_p = ell
        .iter()
        .zip(pc)
        .fold(field.zero(), |acc, (a, b)| &acc + &(a * b));
    if !ell_p.is_one() {
        return Err(Error::BadPoint("the linear form must take value 1 at the point".into()));
    }
    let f = phi.forms();
    let ell_f = (0..4).fold(MultiPoly::zero(phi.ring(), field), |acc, i| {
        acc.add(&f[i].scalar_mul(&ell[i]))
    });
    let shifted: Vec<MultiPoly> = (0..4).map(|i| f[i].sub(&ell_f.scalar_mul(&pc[i]))).collect();
    let h = match multivariate_gcd(&shifted) {
        Ok(h) => h,
        Err(Error::AllZero) => {
            return Err(Error::Internal("all shifted forms vanish; forms are dependent".into()))
        }
        Err(e) => return Err(e),
    };
    let degree = h.homogeneous_degree().ok_or_else(|| Error::Internal("gcd is not a form".into()))?;
    GradedPoly::from_multi(&h, degree)
}

/// Saturation elements of degree below `d`; every fiber curve divides each of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LowDegreeSat {
    /// `V(I)` is empty, so no fiber can be 1-dimensional.
    NoCurveFibers,
    Elements(Vec<(u32, Vec<GradedPoly>)>),
}

pub fn low_degree_sat_elements(surface: &Surface) -> Result<LowDegreeSat, Error> {
    let sat = surface
        .sat_info()
        .ok_or_else(|| Error::Unsupported("saturation data needs a triangular map".into()))?;
    if sat.indeg_sat == 0 {
        return Ok(LowDegreeSat::NoCurveFibers);
    }
    Ok(LowDegreeSat::Elements(
        sat.sat_pieces
            .iter()
            .filter(|(_, basis)| !basis.is_empty())
            .cloned()
            .collect(),
    ))
}

/// Maps a source point to `P^3` and classifies the fiber there.
pub fn pullback_classify(surface: &Surface, s: &ProjPoint) -> Result<(ProjPoint, FiberReport), Error> {
    let phi = surface.parameterization();
    if s.space != PointSpace::source_of(phi.ring()) {
        return Err(Error::BadPoint("point is not in the source space".into()));
    }
    let image = phi.eval(s.coords())?;
    if image.iter().all(FieldElem::is_zero) {
        return Err(Error::BasePoint(s.to_string()));
    }
    let p = ProjPoint::new(PointSpace::Target, image.to_vec())?;
    let report = classify(surface, &p)?;
    Ok((p, report))
}

/// Pulls back and classifies every source point, in parallel when enabled; results
/// keep the input order.
pub fn stratify(surface: &Surface, points: Vec<ProjPoint>) -> Vec<Result<(ProjPoint, FiberReport), Error>> {
    crate::par::map(points, |s| pullback_classify(surface, &s))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn sphere() -> Surface {
        Surface::new(
            Parameterization::parse(
                RingSpec::Triangular,
                Q,
                &["s0^2+s1^2+s2^2", "2*s0*s2", "2*s0*s1", "s0^2-s1^2-s2^2"],
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn quadric() -> Surface {
        Surface::new(
            Parameterization::parse(RingSpec::Tensor, Q, &["s0*t0", "s0*t1", "s1*t0", "s1*t1"])
                .unwrap(),
        )
        .unwrap()
    }

    fn target(c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(PointSpace::Target, Q, c).unwrap()
    }

    #[test]
    fn point_normalization() {
        let p = ProjPoint::from_i64(PointSpace::Target, Q, &[0, 2, -4, 6]).unwrap();
        assert_eq!(p.to_string(), "(0:1:-2:3)");
        let t = ProjPoint::parse("0:3;2:1", PointSpace::P1xP1, Q).unwrap();
        assert_eq!(t.to_string(), "(0:1),(1:1/2)");
        assert!(ProjPoint::from_i64(PointSpace::Target, Q, &[0, 0, 0, 0]).is_err());
        assert!(ProjPoint::from_i64(PointSpace::P1xP1, Q, &[1, 0, 0, 0]).is_err());
        assert!(ProjPoint::parse("1:i:0", PointSpace::Plane, Q).is_err());
    }

    #[test]
    fn sphere_coranks() {
        let s = sphere();
        let nu = DegIndex::Single(1);
        assert_eq!(corank_at(&s, nu, &target(&[0, 0, 0, 1])).unwrap(), 0);
        assert_eq!(corank_at(&s, nu, &target(&[1, 0, 0, 1])).unwrap(), 1);
        assert_eq!(corank_at(&s, nu, &target(&[1, 0, 0, -1])).unwrap(), 2);
    }

    #[test]
    fn sphere_membership() {
        let s = sphere();
        assert!(!membership(&s, &target(&[0, 0, 0, 1])).unwrap());
        assert!(membership(&s, &target(&[1, 0, 0, 1])).unwrap());
        assert!(membership(&s, &target(&[1, 0, 0, -1])).unwrap());
    }

    #[test]
    fn sphere_classification() {
        let s = sphere();
        assert!(classify_fiber(&s, &target(&[0, 0, 0, 1])).unwrap().is_off_surface());
        assert_eq!(
            classify_fiber(&s, &target(&[1, 0, 0, 1])).unwrap().finite_degree(),
            Some(1)
        );
        let line = classify_fiber(&s, &target(&[1, 0, 0, -1])).unwrap();
        let c = line.curve().unwrap();
        assert_eq!(c.degree, CurveDegree::Degree(1));
        assert_eq!(c.hilbert_constant, 1);
        assert_eq!(c.residual_finite_degree, Some(0));
        assert_eq!(c.curve_equation.as_ref().unwrap().to_multi(Q).render(), "s0");
        assert_eq!(line.coranks, vec![(DegIndex::Single(1), 2), (DegIndex::Single(2), 3)]);
    }

    #[test]
    fn sphere_preimages() {
        let s = sphere();
        let pre = unique_preimage(&s, &target(&[1, 0, 0, 1])).unwrap();
        assert_eq!(pre, ProjPoint::from_i64(PointSpace::Plane, Q, &[1, 0, 0]).unwrap());
        assert!(matches!(
            unique_preimage(&s, &target(&[1, 0, 0, -1])),
            Err(Error::NotUnique { corank: 3, .. })
        ));
    }

    #[test]
    fn fiber_curve_examples() {
        let s = sphere();
        let phi = s.parameterization();
        let h = fiber_curve(phi, &target(&[1, 0, 0, -1])).unwrap();
        assert_eq!(h.to_multi(Q).render(), "s0");
        let one = fiber_curve(phi, &target(&[1, 0, 0, 1])).unwrap();
        assert_eq!(one.degree, DegIndex::Single(0));
        // Another admissible linear form gives the same curve.
        let ell = [Q.zero(), Q.zero(), Q.zero(), Q.from_i64(-1)];
        let h2 = fiber_curve_with_form(phi, &target(&[1, 0, 0, -1]), &ell).unwrap();
        assert_eq!(h, h2);
    }

    #[test]
    fn sphere_sat_elements() {
        match low_degree_sat_elements(&sphere()).unwrap() {
            LowDegreeSat::Elements(e) => {
                assert_eq!(e.len(), 1);
                assert_eq!(e[0].0, 1);
                assert_eq!(e[0].1[0].to_multi(Q).render(), "s0");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sphere_pullbacks() {
        let s = sphere();
        let (p, r) =
            pullback_classify(&s, &ProjPoint::from_i64(PointSpace::Plane, Q, &[1, 1, 0]).unwrap()).unwrap();
        assert_eq!(p, target(&[2, 0, 2, 0]));
        assert_eq!(r.finite_degree(), Some(1));
        let (p, r) =
            pullback_classify(&s, &ProjPoint::from_i64(PointSpace::Plane, Q, &[0, 1, 1]).unwrap()).unwrap();
        assert_eq!(p, target(&[1, 0, 0, -1]));
        assert!(r.curve().is_some());
    }

    #[test]
    fn quadric_fibers() {
        let q = quadric();
        let r = classify_fiber_bigraded(&q, &target(&[1, 0, 0, 0])).unwrap();
        assert_eq!(r.finite_degree(), Some(1));
        assert!(!r.below_threshold);
        let r = classify_fiber_bigraded(&q, &target(&[0, 0, 0, 1])).unwrap();
        assert_eq!(r.finite_degree(), Some(1));
        assert!(classify_fiber_bigraded(&q, &target(&[1, 0, 0, 1])).unwrap().is_off_surface());
        let pre = unique_preimage(&q, &target(&[1, 1, 1, 1])).unwrap();
        assert_eq!(pre, ProjPoint::from_i64(PointSpace::P1xP1, Q, &[1, 1, 1, 1]).unwrap());
        let pre = unique_preimage(&q, &target(&[1, 0, 0, 0])).unwrap();
        assert_eq!(pre, ProjPoint::from_i64(PointSpace::P1xP1, Q, &[1, 0, 1, 0]).unwrap());
    }

    #[test]
    fn evaluation_is_linear() {
        let s = sphere();
        let m = s.rep(DegIndex::Single(2));
        let p = [Q.from_i64(1), Q.from_i64(-2), Q.from_i64(3), Q.from_i64(5)];
        let q = [Q.from_i64(7), Q.from_i64(0), Q.from_i64(-1), Q.from_i64(2)];
        let sum: Vec<FieldElem> = p.iter().zip(&q).map(|(a, b)| a + b).collect();
        assert_eq!(
            evaluate_rep(&m, &sum).unwrap(),
            evaluate_rep(&m, &p).unwrap().add(&evaluate_rep(&m, &q).unwrap())
        );
        assert!(evaluate_rep(&m, &[Q.zero(), Q.zero(), Q.zero(), Q.zero()]).unwrap().is_zero());
        let f7 = Field::prime(7).unwrap();
        assert!(evaluate_rep(&m, &[f7.one(), f7.one(), f7.one(), f7.one()]).is_err());
    }

    #[test]
    fn base_point_is_reported() {
        let s = sphere();
        // (0:1:i) is not rational; use the plane example instead.
        let plane = Surface::new(
            Parameterization::parse(
                RingSpec::Triangular,
                Q,
                &["s1*s2", "s0*(s0+s1+s2)", "s0*s1", "s0*s1"],
            )
            .unwrap(),
        )
        .unwrap();
        let s01 = ProjPoint::from_i64(PointSpace::Plane, Q, &[0, 0, 1]).unwrap();
        assert!(matches!(pullback_classify(&plane, &s01), Err(Error::BasePoint(_))));
        let _ = s;
    }

    #[test]
    fn stratify_keeps_order() {
        let s = sphere();
        let pts = crate::sample::source_points(RingSpec::Triangular, Q, 12, 9, 5);
        let out = stratify(&s, pts.clone());
        assert_eq!(out.len(), 12);
        for (pt, r) in pts.iter().zip(&out) {
            let (img, _) = r.as_ref().unwrap();
            assert_eq!(img, &pullback_classify(&s, pt).unwrap().0);
        }
    }

    fn plane() -> Surface {
        Surface::new(
            Parameterization::parse(
                RingSpec::Triangular,
                Q,
                &["s1*s2", "s0*(s0+s1+s2)", "s0*s1", "s0*s1"],
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn plane_curve_fibers() {
        let s = plane();
        assert_eq!(s.nu0(), Some(0));
        for (p, h) in [([1, 0, 0, 0], "s0"), ([0, 1, 0, 0], "s1")] {
            let r = classify_fiber(&s, &target(&p)).unwrap();
            let c = r.curve().unwrap();
            assert_eq!(c.degree, CurveDegree::Degree(1));
            assert_eq!(c.curve_equation.as_ref().unwrap().to_multi(Q).render(), h);
        }
        assert_eq!(low_degree_sat_elements(&s).unwrap(), LowDegreeSat::Elements(vec![]));
    }

    #[test]
    fn base_point_free_has_no_curve_fibers() {
        let s = Surface::new(
            Parameterization::parse(RingSpec::Triangular, Q, &["s0^2", "s1^2", "s2^2", "s0*s1+s1*s2"]).unwrap(),
        )
        .unwrap();
        assert_eq!(low_degree_sat_elements(&s).unwrap(), LowDegreeSat::NoCurveFibers);
    }
}
