//! Parameterizations, graded syzygies and the matrix representations built from them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::field::{Field, FieldElem};
use crate::linalg::{left_kernel, rank, right_kernel, ExactMatrix};
use crate::poly::{
    basis_index, monomial_basis, parse_poly, DegIndex, GradedPoly, Monomial,
    MultiPoly, RingSpec,
};

/// Four forms of a common (bi)degree defining a rational map to `P^3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parameterization {
    ring: RingSpec,
    field: Field,
    degree: DegIndex,
    forms: [MultiPoly; 4],
}

impl Parameterization {
    /// Checks that the forms share a ring, a field and one homogeneous (bi)degree.
    /// Zero forms are allowed here; [`validate`] reports them as a dependency.
    pub fn new(forms: [MultiPoly; 4]) -> Result<Self, Error> {
        let ring = forms[0].ring();
        let field = forms[0].field();
        if ring == RingSpec::Target {
            return Err(Error::RingMismatch("forms must be in the source ring".into()));
        }
        let mut degree = None;
        for (i, f) in forms.iter().enumerate() {
            if f.ring() != ring || f.field() != field {
                return Err(Error::RingMismatch(format!("f{i} is in a different ring or field")));
            }
            if f.is_zero() {
                continue;
            }
            let d = f
                .homogeneous_degree()
                .ok_or_else(|| Error::DegreeMismatch(format!("f{i} is not homogeneous")))?;
            match degree {
                None => degree = Some(d),
                Some(e) if e != d => {
                    return Err(Error::DegreeMismatch(format!("f{i} has degree {d}, expected {e}")))
                }
                _ => {}
            }
        }
        let degree = degree.ok_or_else(|| Error::DegreeMismatch("all forms are zero".into()))?;
        if degree.total() == 0 {
            return Err(Error::DegreeMismatch("forms must have positive degree".into()));
        }
        if let DegIndex::Pair(a, b) = degree {
            if a == 0 || b == 0 {
                return Err(Error::DegreeMismatch(format!(
                    "bidegree {degree} must be positive in both factors"
                )));
            }
        }
        Ok(Parameterization {
            ring,
            field,
            degree,
            forms,
        })
    }

    pub fn parse(ring: RingSpec, field: Field, texts: &[&str; 4]) -> Result<Self, Error> {
        let forms = [
            parse_poly(texts[0], ring, field)?,
            parse_poly(texts[1], ring, field)?,
            parse_poly(texts[2], ring, field)?,
            parse_poly(texts[3], ring, field)?,
        ];
        Self::new(forms)
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> DegIndex {
        self.degree
    }

    /// Total degree `d` for triangular maps.
    pub fn d(&self) -> u32 {
        match self.degree {
            DegIndex::Single(d) => d,
            DegIndex::Pair(..) => panic!("bi-graded parameterization has no single degree"),
        }
    }

    pub fn forms(&self) -> &[MultiPoly; 4] {
        &self.forms
    }

    /// `(f0(s), ..., f3(s))`.
    pub fn eval(&self, s: &[FieldElem]) -> Result<[FieldElem; 4], Error> {
        Ok([
            self.forms[0].eval(s)?,
            self.forms[1].eval(s)?,
            self.forms[2].eval(s)?,
            self.forms[3].eval(s)?,
        ])
    }

    /// 4 x dim(S_d) matrix of coefficients over the canonical basis.
    pub fn coefficient_matrix(&self) -> ExactMatrix {
        let rows = self
            .forms
            .iter()
            .map(|f| GradedPoly::from_multi(f, self.degree).expect("homogeneous").coeffs)
            .collect();
        ExactMatrix::from_rows(self.field, self.degree.piece_dim(), rows)
    }
}

impl fmt::Display for Parameterization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} : {} : {} : {})",
            self.forms[0], self.forms[1], self.forms[2], self.forms[3]
        )
    }
}

/// Matrix of the k-linear map `(S_mu)^k -> S_{mu + deg}` sending `(g_i)` to `sum g_i h_i`.
/// Columns are ordered block by block (one block per `h_i`), then by the basis of `S_mu`.
fn multiplication_matrix(hs: &[MultiPoly], ring: RingSpec, field: Field, deg: DegIndex, mu: DegIndex) -> ExactMatrix {
    let source = monomial_basis(ring, mu);
    let target = monomial_basis(ring, mu.add(deg));
    let index = basis_index(&target);
    let mut m = ExactMatrix::zeros(field, target.len(), hs.len() * source.len());
    for (i, h) in hs.iter().enumerate() {
        for (j, mono) in source.iter().enumerate() {
            let col = i * source.len() + j;
            for (t, c) in h.terms() {
                let r = index[&t.mul(mono)];
                m.set(r, col, c.clone());
            }
        }
    }
    m
}

/// Basis of the degree-`nu` syzygies `(g0..g3)`, `g_i in S_nu`, with `sum g_i f_i = 0`.
///
/// Each column stacks the four coefficient vectors of `g0..g3` over `monomial_basis(nu)`.
/// Columns come from the reduced echelon kernel basis; over `Q` each is then scaled to
/// coprime integers.
pub fn syzygy_graded_basis(phi: &Parameterization, nu: DegIndex) -> ExactMatrix {
    assert_eq!(nu.ring(), phi.ring, "grading does not match the ring");
    let map = multiplication_matrix(&phi.forms, phi.ring, phi.field, phi.degree, nu);
    let kernel = right_kernel(&map);
    if phi.field != Field::Rational {
        return kernel;
    }
    let columns: Vec<Vec<FieldElem>> = (0..kernel.cols()).map(|c| primitive(&kernel.column(c))).collect();
    ExactMatrix::from_columns(phi.field, kernel.rows(), &columns)
}

/// `v` scaled by a positive rational to coprime integers.
fn primitive(v: &[FieldElem]) -> Vec<FieldElem> {
    let rats: Vec<&BigRational> = v.iter().map(|e| e.as_rational().expect("rational vector")).collect();
    let lcm = rats.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.iter().map(|x| Field::Rational.from_bigint(&(x / &g))).collect()
}

/// `M(phi)_nu = x0 A0 + x1 A1 + x2 A2 + x3 A3`; rows indexed by `monomial_basis(nu)`,
/// one column per syzygy of degree `nu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRep {
    pub index: DegIndex,
    pub coefficients: [ExactMatrix; 4],
    pub row_labels: Vec<Monomial>,
    pub parameterization: Parameterization,
}

impl MatrixRep {
    pub fn rows(&self) -> usize {
        self.coefficients[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.coefficients[0].cols()
    }

    /// Entry `(r, c)` as a linear form in `X0..X3`.
    pub fn entry(&self, r: usize, c: usize) -> MultiPoly {
        let field = self.parameterization.field();
        MultiPoly::from_terms(
            RingSpec::Target,
            field,
            (0..4).map(|i| (Monomial::var(4, i), self.coefficients[i].get(r, c).clone())),
        )
    }

    /// The syzygy `(g0..g3)` behind column `c`.
    pub fn syzygy(&self, c: usize) -> [MultiPoly; 4] {
        let phi = &self.parameterization;
        let g = |i: usize| {
            MultiPoly::from_terms(
                phi.ring(),
                phi.field(),
                self.row_labels
                    .iter()
                    .cloned()
                    .zip(self.coefficients[i].column(c)),
            )
        };
        [g(0), g(1), g(2), g(3)]
    }
}

pub fn build_matrix_rep(phi: &Parameterization, nu: DegIndex) -> MatrixRep {
    let basis = monomial_basis(phi.ring, nu);
    let n = basis.len();
    let syz = syzygy_graded_basis(phi, nu);
    let k = syz.cols();
    let coefficients = std::array::from_fn(|i| {
        let mut a = ExactMatrix::zeros(phi.field, n, k);
        for r in 0..n {
            for c in 0..k {
                a.set(r, c, syz.get(i * n + r, c).clone());
            }
        }
        a
    });
    MatrixRep {
        index: nu,
        coefficients,
        row_labels: basis,
        parameterization: phi.clone(),
    }
}

/// Saturation data of the base ideal `I = (f0..f3)` of a triangular map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatInfo {
    /// Smallest degree of a nonzero element of `I^sat`; 0 when `V(I)` is empty.
    pub indeg_sat: u32,
    /// `2d - 2 - indeg_sat`. May be negative for `d = 1`.
    pub nu0: i64,
    /// Degree of the base scheme, when `V(I)` is nonempty.
    pub base_locus_degree: Option<usize>,
    /// Bases of `I^sat_mu` for `mu < d` (empty pieces included).
    pub sat_pieces: Vec<(u32, Vec<GradedPoly>)>,
}

/// Linear-algebra saturation of `I` with respect to `(s0, s1, s2)`.
///
/// With `reg(S/I) <= 3d-3`, `I` and `I^sat` agree from degree `D = 3d-2` on, so `F` of
/// degree `mu <= D` lies in `I^sat` iff `m F` lies in `I_D` for every monomial `m` of
/// degree `D - mu`. Membership in `I_D` is tested against a basis of its annihilator.
pub struct Saturator<'a> {
    phi: &'a Parameterization,
    top: u32,
    /// Rows are linear functionals on `S_top` vanishing on `I_top`.
    annihilator: ExactMatrix,
    top_index: std::collections::HashMap<Monomial, usize>,
}

impl<'a> Saturator<'a> {
    pub fn new(phi: &'a Parameterization) -> Result<Self, Error> {
        let DegIndex::Single(d) = phi.degree else {
            return Err(Error::Unsupported("saturation is implemented for the triangular ring only".into()));
        };
        Self::with_top(phi, 3 * d.max(1) - 2)
    }

    fn with_top(phi: &'a Parameterization, top: u32) -> Result<Self, Error> {
        if phi.ring != RingSpec::Triangular {
            return Err(Error::Unsupported("saturation is implemented for the triangular ring only".into()));
        }
        let d = phi.d();
        let top = top.max(d);
        let gens = multiplication_matrix(
            &phi.forms,
            phi.ring,
            phi.field,
            phi.degree,
            DegIndex::Single(top - d),
        );
        let annihilator = left_kernel(&gens).transpose();
        let top_index = basis_index(&monomial_basis(phi.ring, DegIndex::Single(top)));
        Ok(Saturator {
            phi,
            top,
            annihilator,
            top_index,
        })
    }

    /// `dim S_top - dim I_top`.
    pub fn codim_at_top(&self) -> usize {
        self.annihilator.rows()
    }

    /// Basis of `I^sat_mu`.
    pub fn piece(&self, mu: u32) -> Vec<GradedPoly> {
        if mu > self.top {
            return Saturator::with_top(self.phi, mu).expect("triangular").piece(mu);
        }
        let field = self.phi.field;
        let source = monomial_basis(RingSpec::Triangular, DegIndex::Single(mu));
        if self.annihilator.rows() == 0 {
            // I_top = S_top: every form of degree mu is saturated.
            return (0..source.len())
                .map(|j| {
                    let mut coeffs = vec![field.zero(); source.len()];
                    coeffs[j] = field.one();
                    GradedPoly {
                        ring: RingSpec::Triangular,
                        degree: DegIndex::Single(mu),
                        coeffs,
                    }
                })
                .collect();
        }
        let shifts = monomial_basis(RingSpec::Triangular, DegIndex::Single(self.top - mu));
        let mut rows = Vec::with_capacity(shifts.len() * self.annihilator.rows());
        for n in &shifts {
            let cols: Vec<usize> = source.iter().map(|m| self.top_index[&n.mul(m)]).collect();
            for q in 0..self.annihilator.rows() {
                let row = self.annihilator.row(q);
                rows.push(cols.iter().map(|&c| row[c].clone()).collect());
            }
        }
        let system = ExactMatrix::from_rows(field, source.len(), rows);
        let kernel = right_kernel(&system);
        (0..kernel.cols())
            .map(|c| GradedPoly {
                ring: RingSpec::Triangular,
                degree: DegIndex::Single(mu),
                coeffs: kernel.column(c),
            })
            .collect()
    }
}

/// Basis of `I^sat_mu` for a triangular parameterization.
pub fn saturation_piece(phi: &Parameterization, mu: i64) -> Result<Vec<GradedPoly>, Error> {
    if mu < 0 {
        return Err(Error::DegreeMismatch(format!("negative degree {mu}")));
    }
    Ok(Saturator::new(phi)?.piece(mu as u32))
}

/// `indeg(I^sat)`, the threshold `nu0 = 2d - 2 - indeg(I^sat)` and the base-locus degree.
pub fn compute_nu0(phi: &Parameterization) -> Result<SatInfo, Error> {
    if phi.ring != RingSpec::Triangular {
        return Err(Error::Unsupported(
            "nu0 is defined for triangular maps; use default_index for the bi-graded case".into(),
        ));
    }
    let span = rank(&phi.coefficient_matrix());
    if span <= 2 {
        return Err(Error::NotASurface(format!(
            "the forms span a {span}-dimensional space (complete intersection or less)"
        )));
    }
    let d = phi.d();
    let sat = Saturator::new(phi)?;
    let mut sat_pieces = Vec::new();
    let mut indeg = None;
    for mu in 0..=d {
        let piece = sat.piece(mu);
        if indeg.is_none() && !piece.is_empty() {
            indeg = Some(mu);
        }
        if mu < d {
            sat_pieces.push((mu, piece));
        }
    }
    let indeg_sat = indeg.ok_or_else(|| Error::Internal("I_d is not saturated-nonzero".into()))?;
    let base_locus_degree = (indeg_sat > 0).then(|| sat.codim_at_top());
    Ok(SatInfo {
        indeg_sat,
        nu0: 2 * d as i64 - 2 - indeg_sat as i64,
        base_locus_degree,
        sat_pieces,
    })
}

/// Whether `nu` lies outside the excluded region for bidegree `d`.
pub fn region_admissible(d: (u32, u32), nu: (u32, u32)) -> bool {
    let (d1, d2) = (d.0 as i64, d.1 as i64);
    let (n1, n2) = (nu.0 as i64, nu.1 as i64);
    let excluded = n1 <= d1 - 2 || n2 <= d2 - 2 || (n1 <= 2 * d1 - 2 && n2 <= 2 * d2 - 2);
    !excluded
}

/// Starting index for fiber computations: `max(nu0, 1)` (triangular) or
/// `(d1 - 1, 2 d2 - 1)` (tensor).
pub fn default_index(phi: &Parameterization, sat: Option<&SatInfo>) -> DegIndex {
    match phi.degree {
        DegIndex::Single(_) => {
            let nu0 = sat.map(|s| s.nu0).unwrap_or(2 * phi.d() as i64 - 2);
            DegIndex::Single(nu0.max(1) as u32)
        }
        DegIndex::Pair(d1, d2) => DegIndex::Pair(d1 - 1, 2 * d2 - 1),
    }
}

/// Outcome of one validation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    /// Passed on a random sample only.
    ProbabilisticPass,
    Fail(String),
    /// Failed, but not fatal.
    Warning(String),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<(&'static str, CheckStatus)>,
    /// The first fatal failure, if any.
    pub error: Option<Error>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.error.is_none()
    }

    pub fn warnings(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter_map(|(name, c)| match c {
                CheckStatus::Warning(w) => Some(format!("{name}: {w}")),
                _ => None,
            })
            .collect()
    }
}

/// Number of random parameter points used by the birationality check.
pub const BIRATIONALITY_SAMPLES: usize = 5;

/// Checks, in order: common degree, linear independence, constant gcd, and a sampled
/// birationality test (finite fiber degree 1 over the image of random points).
pub fn validate(phi: &Parameterization, seed: u64) -> ValidationReport {
    let mut checks = vec![("degree", CheckStatus::Pass)];
    let mut error = None;
    let span = rank(&phi.coefficient_matrix());
    if span < 4 {
        checks.push(("linear_independence", CheckStatus::Fail(format!("rank {span} < 4"))));
        error = Some(Error::DependentForms { rank: span });
    } else {
        checks.push(("linear_independence", CheckStatus::Pass));
    }
    let g = crate::poly::multivariate_gcd(&phi.forms).expect("some form is nonzero");
    if g.is_constant() {
        checks.push(("constant_gcd", CheckStatus::Pass));
    } else {
        checks.push(("constant_gcd", CheckStatus::Fail(format!("gcd = {g}"))));
        error.get_or_insert(Error::BaseCurve { gcd: g.render() });
    }
    checks.push(("birationality", birationality_check(phi, seed)));
    ValidationReport { checks, error }
}

fn birationality_check(phi: &Parameterization, seed: u64) -> CheckStatus {
    use crate::fiber::{classify, PointSpace, ProjPoint};
    let surface = match crate::surface::Surface::new(phi.clone()) {
        Ok(s) => s,
        Err(e) => return CheckStatus::Skipped(e.to_string()),
    };
    let mut rng = crate::sample::rng(seed);
    let mut done = 0;
    let mut attempts = 0;
    while done < BIRATIONALITY_SAMPLES {
        attempts += 1;
        if attempts > 20 * BIRATIONALITY_SAMPLES {
            return CheckStatus::Warning("could not sample points off the base locus".into());
        }
        let s = crate::sample::random_source_coords(&mut rng, phi.ring, phi.field, 20);
        let image = match phi.eval(&s) {
            Ok(v) if v.iter().any(|c| !c.is_zero()) => v,
            _ => continue,
        };
        let p = ProjPoint::new(PointSpace::Target, image.to_vec()).expect("nonzero image");
        match classify(&surface, &p) {
            Ok(r) if r.finite_degree() == Some(1) => done += 1,
            Ok(r) => {
                let s = ProjPoint::new(PointSpace::source_of(phi.ring), s).expect("nonzero factors");
                return CheckStatus::Warning(format!(
                    "fiber over phi{s} = {p} is {:?}, not a single point",
                    r.kind
                ));
            }
            Err(e) => return CheckStatus::Warning(e.to_string()),
        }
    }
    CheckStatus::ProbabilisticPass
}
