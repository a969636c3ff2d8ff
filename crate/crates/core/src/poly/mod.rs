//! Polynomials over an exact field: monomial bases of graded pieces, sparse arithmetic,
//! evaluation, substitution and gcd.

mod gcd;
mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub use gcd::{div_rem, exact_div, multivariate_gcd};
pub use parse::parse_poly;

use crate::error::Error;
use crate::field::{Field, FieldElem};

/// The variables a polynomial lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    /// `k[s0, s1, s2]`, source `P^2`.
    Triangular,
    /// `k[s0, s1, t0, t1]`, bi-graded, source `P^1 x P^1`.
    Tensor,
    /// `k[X0, X1, X2, X3]`, coordinates of the target `P^3`.
    Target,
}

impl RingSpec {
    pub fn nvars(&self) -> usize {
        match self {
            RingSpec::Triangular => 3,
            RingSpec::Tensor | RingSpec::Target => 4,
        }
    }

    pub fn var_names(&self) -> &'static [&'static str] {
        match self {
            RingSpec::Triangular => &["s0", "s1", "s2"],
            RingSpec::Tensor => &["s0", "s1", "t0", "t1"],
            RingSpec::Target => &["X0", "X1", "X2", "X3"],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RingSpec::Triangular => "triangular",
            RingSpec::Tensor => "tensor",
            RingSpec::Target => "target",
        }
    }

    /// (Bi)degree of a monomial in this ring.
    pub fn degree_of(&self, m: &Monomial) -> DegIndex {
        match self {
            RingSpec::Tensor => DegIndex::Pair(m.0[0] + m.0[1], m.0[2] + m.0[3]),
            _ => DegIndex::Single(m.total_degree()),
        }
    }
}

impl std::str::FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "triangular" | "p2" | "P2" => Ok(RingSpec::Triangular),
            "tensor" | "p1xp1" | "P1xP1" => Ok(RingSpec::Tensor),
            other => Err(Error::RingMismatch(format!("unknown ring kind `{other}`"))),
        }
    }
}

/// Grading index: `nu` for the standard grading, `(nu1, nu2)` for the bi-grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DegIndex {
    Single(u32),
    Pair(u32, u32),
}

impl DegIndex {
    pub fn add(self, other: DegIndex) -> DegIndex {
        match (self, other) {
            (DegIndex::Single(a), DegIndex::Single(b)) => DegIndex::Single(a + b),
            (DegIndex::Pair(a, b), DegIndex::Pair(c, d)) => DegIndex::Pair(a + c, b + d),
            _ => panic!("mixed grading"),
        }
    }

    pub fn total(self) -> u32 {
        match self {
            DegIndex::Single(a) => a,
            DegIndex::Pair(a, b) => a + b,
        }
    }

    /// Dimension of the graded piece: `C(nu+2, 2)` or `(nu1+1)(nu2+1)`.
    pub fn piece_dim(self) -> usize {
        match self {
            DegIndex::Single(n) => {
                let n = n as usize;
                (n + 1) * (n + 2) / 2
            }
            DegIndex::Pair(a, b) => (a as usize + 1) * (b as usize + 1),
        }
    }

    pub fn ring(self) -> RingSpec {
        match self {
            DegIndex::Single(_) => RingSpec::Triangular,
            DegIndex::Pair(..) => RingSpec::Tensor,
        }
    }
}

impl fmt::Display for DegIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegIndex::Single(n) => write!(f, "{n}"),
            DegIndex::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// Exponent vector. Ordered graded-lexicographically: total degree first, then
/// lexicographically with the first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn eval(&self, point: &[FieldElem]) -> FieldElem {
        let field = point[0].field();
        self.0
            .iter()
            .zip(point)
            .filter(|(e, _)| **e > 0)
            .fold(field.one(), |acc, (e, x)| &acc * &x.pow(*e))
    }

    pub fn render(&self, names: &[&str]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Monomials spanning the graded piece of degree `deg`, in the canonical row order.
///
/// Triangular: exponents `(a0,a1,a2)` with sum `nu`, lexicographically descending.
/// Tensor: `(a0,a1,b0,b1)` with `a0+a1 = nu1`, `b0+b1 = nu2`, descending on `(a0, b0)`.
pub fn monomial_basis(ring: RingSpec, deg: DegIndex) -> Vec<Monomial> {
    match (ring, deg) {
        (RingSpec::Triangular, DegIndex::Single(n)) => {
            let mut out = Vec::with_capacity(deg.piece_dim());
            for a0 in (0..=n).rev() {
                for a1 in (0..=n - a0).rev() {
                    out.push(Monomial(vec![a0, a1, n - a0 - a1]));
                }
            }
            out
        }
        (RingSpec::Target, DegIndex::Single(n)) => {
            let mut out = Vec::new();
            for a0 in (0..=n).rev() {
                for a1 in (0..=n - a0).rev() {
                    for a2 in (0..=n - a0 - a1).rev() {
                        out.push(Monomial(vec![a0, a1, a2, n - a0 - a1 - a2]));
                    }
                }
            }
            out
        }
        (RingSpec::Tensor, DegIndex::Pair(n1, n2)) => {
            let mut out = Vec::with_capacity(deg.piece_dim());
            for a0 in (0..=n1).rev() {
                for b0 in (0..=n2).rev() {
                    out.push(Monomial(vec![a0, n1 - a0, b0, n2 - b0]));
                }
            }
            out
        }
        _ => panic!("grading {deg} does not match ring {}", ring.name()),
    }
}

/// Position of each monomial of a basis.
pub fn basis_index(basis: &[Monomial]) -> HashMap<Monomial, usize> {
    basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    ring: RingSpec,
    field: Field,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl MultiPoly {
    pub fn zero(ring: RingSpec, field: Field) -> Self {
        MultiPoly {
            ring,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: RingSpec, c: FieldElem) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: RingSpec, field: Field) -> Self {
        Self::constant(ring, field.one())
    }

    pub fn var(ring: RingSpec, field: Field, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i), field.one())
    }

    pub fn monomial(ring: RingSpec, m: Monomial, c: FieldElem) -> Self {
        assert_eq!(m.0.len(), ring.nvars(), "exponent arity");
        let field = c.field();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { ring, field, terms }
    }

    /// Builds from arbitrary `(monomial, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(ring: RingSpec, field: Field, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, FieldElem)>,
    {
        let mut p = Self::zero(ring, field);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Leading term under the graded lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &FieldElem)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.total_degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// The common (bi)degree of all terms, or `None` when inhomogeneous or zero.
    pub fn homogeneous_degree(&self) -> Option<DegIndex> {
        let mut it = self.terms.keys().map(|m| self.ring.degree_of(m));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    fn add_term(&mut self, m: Monomial, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn check(&self, other: &MultiPoly) -> Result<(), Error> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring.name(),
                other.ring.name()
            )));
        }
        if self.field != other.field {
            return Err(Error::BadField(format!("{} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, Error> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, Error> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, Error> {
        self.check(other)?;
        let mut out = MultiPoly::zero(self.ring, self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Panicking variants for internal use where rings are known to agree.
    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.try_add(other).expect("ring mismatch")
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.try_sub(other).expect("ring mismatch")
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.try_mul(other).expect("ring mismatch")
    }

    pub fn scalar_mul(&self, c: &FieldElem) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.ring, self.field);
        }
        MultiPoly {
            ring: self.ring,
            field: self.field,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            ring: self.ring,
            field: self.field,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.ring, self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scales so that the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            Some((_, c)) => self.scalar_mul(&c.inv()),
            None => self.clone(),
        }
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem, Error> {
        if point.len() != self.ring.nvars() {
            return Err(Error::Arity {
                expected: self.ring.nvars(),
                got: point.len(),
            });
        }
        if let Some(bad) = point.iter().find(|x| x.field() != self.field) {
            return Err(Error::BadField(format!("coordinate {bad} not in {}", self.field)));
        }
        Ok(self
            .terms
            .iter()
            .fold(self.field.zero(), |acc, (m, c)| &acc + &(c * &m.eval(point))))
    }

    /// Composes a polynomial in `X0..X3` with `Xi -> images[i]`.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly, Error> {
        if self.ring != RingSpec::Target {
            return Err(Error::RingMismatch("substitute expects a polynomial in X0..X3".into()));
        }
        if images.len() != 4 {
            return Err(Error::Arity {
                expected: 4,
                got: images.len(),
            });
        }
        let ring = images[0].ring;
        for g in images {
            if g.ring != ring || g.field != self.field {
                return Err(Error::RingMismatch("images must share one ring and field".into()));
            }
        }
        // Cache powers per variable.
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|g| vec![MultiPoly::one(ring, self.field), g.clone()])
            .collect();
        let mut out = MultiPoly::zero(ring, self.field);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(ring, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Views the polynomial as univariate in `var`: entry `k` is the coefficient of `var^k`
    /// (with `var` removed from its monomials).
    pub(crate) fn univariate_coeffs(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::zero(self.ring, self.field); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut rest = m.clone();
            rest.0[var] = 0;
            out[k].terms.insert(rest, c.clone());
        }
        out
    }

    pub(crate) fn from_univariate(ring: RingSpec, field: Field, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero(ring, field);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut e = m.clone();
                e.0[var] += k as u32;
                out.add_term(e, v);
            }
        }
        out
    }

    /// Renders with the ring's variable names, highest term first.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = self.ring.var_names();
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render(names);
            if m.total_degree() == 0 {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{abs}*{mono}"));
            }
        }
        s
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Dense element of one graded piece, indexed by [`monomial_basis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoly {
    pub ring: RingSpec,
    pub degree: DegIndex,
    pub coeffs: Vec<FieldElem>,
}

impl GradedPoly {
    /// Fails when `p` has a term outside the graded piece.
    pub fn from_multi(p: &MultiPoly, degree: DegIndex) -> Result<GradedPoly, Error> {
        let basis = monomial_basis(p.ring, degree);
        let idx = basis_index(&basis);
        let mut coeffs = vec![p.field.zero(); basis.len()];
        for (m, c) in p.terms() {
            let i = idx.get(m).ok_or_else(|| {
                Error::DegreeMismatch(format!("term {} is not of degree {degree}", m.render(p.ring.var_names())))
            })?;
            coeffs[*i] = c.clone();
        }
        Ok(GradedPoly {
            ring: p.ring,
            degree,
            coeffs,
        })
    }

    pub fn to_multi(&self, field: Field) -> MultiPoly {
        let basis = monomial_basis(self.ring, self.degree);
        MultiPoly::from_terms(self.ring, field, basis.into_iter().zip(self.coeffs.iter().cloned()))
    }
}
