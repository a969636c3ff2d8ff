//! Generators of Fitting ideals of a matrix representation, as polynomials in `X0..X3`,
//! and their pull-backs along the parameterization.

use std::collections::{BTreeSet, HashMap};

use rand::seq::index;

use crate::error::Error;
use crate::matrix_rep::{MatrixRep, Parameterization};
use crate::poly::MultiPoly;
use crate::sample;

/// Largest minor size expanded unless the caller raises it.
pub const DEFAULT_MAX_MINOR_SIZE: usize = 6;

/// Most minors enumerated when no limit is given.
pub const UNLIMITED_CAP: u128 = 1_000_000;

#[derive(Clone, Debug)]
pub struct MinorRequest<'a> {
    pub rep: &'a MatrixRep,
    pub fitting_index: usize,
    /// At most this many minors are computed; a seeded sample is drawn when the full
    /// count is larger.
    pub limit: Option<usize>,
    pub seed: u64,
    pub max_size: usize,
}

impl<'a> MinorRequest<'a> {
    pub fn new(rep: &'a MatrixRep, fitting_index: usize) -> Self {
        MinorRequest {
            rep,
            fitting_index,
            limit: None,
            seed: sample::DEFAULT_SEED,
            max_size: DEFAULT_MAX_MINOR_SIZE,
        }
    }

    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// A nonzero minor and the submatrix it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub poly: MultiPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FittingGenerators {
    /// `i >= rows`: the ideal is the whole ring.
    UnitIdeal,
    Minors {
        size: usize,
        /// Number of submatrices of this size.
        total: u128,
        /// Set when only a sample of the submatrices was expanded.
        truncated: bool,
        /// Submatrices examined (zero minors included), sorted.
        examined: usize,
        /// Nonzero minors, sorted by index sets.
        minors: Vec<Minor>,
    },
}

impl FittingGenerators {
    pub fn polys(&self) -> Vec<MultiPoly> {
        match self {
            FittingGenerators::UnitIdeal => Vec::new(),
            FittingGenerators::Minors { minors, .. } => minors.iter().map(|m| m.poly.clone()).collect(),
        }
    }
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Determinant of a square matrix of polynomials by row expansion, memoized on the set
/// of columns still available.
pub fn symbolic_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    assert!(n > 0 && n < 32 && m.iter().all(|r| r.len() == n));
    let mut memo: HashMap<u32, MultiPoly> = HashMap::new();
    det_rec(m, 0, (1u32 << n) - 1, &mut memo)
}

fn det_rec(m: &[Vec<MultiPoly>], row: usize, cols: u32, memo: &mut HashMap<u32, MultiPoly>) -> MultiPoly {
    if row == m.len() {
        return MultiPoly::one(m[0][0].ring(), m[0][0].field());
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let mut acc = MultiPoly::zero(m[0][0].ring(), m[0][0].field());
    let mut sign_positive = true;
    for c in 0..m.len() {
        if cols & (1 << c) == 0 {
            continue;
        }
        let entry = &m[row][c];
        if !entry.is_zero() {
            let sub = det_rec(m, row + 1, cols & !(1 << c), memo);
            let term = entry.mul(&sub);
            acc = if sign_positive { acc.add(&term) } else { acc.sub(&term) };
        }
        sign_positive = !sign_positive;
    }
    memo.insert(cols, acc.clone());
    acc
}

/// Minors of size `rows - i` of `M(phi)_nu`, zero ones pruned.
pub fn fitting_generators(req: &MinorRequest) -> Result<FittingGenerators, Error> {
    let rep = req.rep;
    let (rows, cols) = (rep.rows(), rep.cols());
    if req.fitting_index >= rows {
        return Ok(FittingGenerators::UnitIdeal);
    }
    if req.limit == Some(0) {
        return Err(Error::Minors("limit must be at least 1".into()));
    }
    let size = rows - req.fitting_index;
    if size > req.max_size {
        return Err(Error::Minors(format!(
            "minor size {size} exceeds the maximum {}",
            req.max_size
        )));
    }
    let total = binomial(rows, size)
        .zip(binomial(cols, size))
        .and_then(|(a, b)| a.checked_mul(b));
    let pairs = match (total, req.limit) {
        (Some(t), None) if t <= UNLIMITED_CAP => all_pairs(rows, cols, size),
        (_, None) => {
            return Err(Error::Minors(format!(
                "{} minors of size {size}; set a limit",
                total.map_or("too many".to_string(), |t| t.to_string())
            )))
        }
        (Some(t), Some(l)) if t <= l as u128 => all_pairs(rows, cols, size),
        (t, Some(l)) => sample_pairs(rows, cols, size, l, t, req.seed),
    };
    let truncated = total.is_none_or(|t| (pairs.len() as u128) < t);
    let entries: Vec<Vec<MultiPoly>> = (0..rows)
        .map(|r| (0..cols).map(|c| rep.entry(r, c)).collect())
        .collect();
    let examined = pairs.len();
    let minors = crate::par::map(pairs, |(rs, cs)| {
        let sub: Vec<Vec<MultiPoly>> = rs
            .iter()
            .map(|&r| cs.iter().map(|&c| entries[r][c].clone()).collect())
            .collect();
        let poly = symbolic_det(&sub);
        Minor { rows: rs, cols: cs, poly }
    });
    let minors = minors.into_iter().filter(|m| !m.poly.is_zero()).collect();
    Ok(FittingGenerators::Minors {
        size,
        total: total.unwrap_or(u128::MAX),
        truncated,
        examined,
        minors,
    })
}

type Pair = (Vec<usize>, Vec<usize>);

fn all_pairs(rows: usize, cols: usize, size: usize) -> Vec<Pair> {
    let rs = subsets(rows, size);
    let cs = subsets(cols, size);
    rs.iter()
        .flat_map(|r| cs.iter().map(move |c| (r.clone(), c.clone())))
        .collect()
}

/// `limit` distinct uniformly random submatrices, sorted.
fn sample_pairs(rows: usize, cols: usize, size: usize, limit: usize, total: Option<u128>, seed: u64) -> Vec<Pair> {
    let mut rng = sample::rng(seed);
    if let Some(t) = total.filter(|&t| t <= 2 * limit as u128) {
        // Dense case: pick indices into the full enumeration.
        let all = all_pairs(rows, cols, size);
        let mut picked = index::sample(&mut rng, t as usize, limit).into_vec();
        picked.sort_unstable();
        return picked.into_iter().map(|i| all[i].clone()).collect();
    }
    let mut chosen = BTreeSet::new();
    while chosen.len() < limit {
        let mut r = index::sample(&mut rng, rows, size).into_vec();
        let mut c = index::sample(&mut rng, cols, size).into_vec();
        r.sort_unstable();
        c.sort_unstable();
        chosen.insert((r, c));
    }
    chosen.into_iter().collect()
}

/// Fitting generators composed with `Xi -> fi`, zero results pruned.
pub fn pullback_fitting(phi: &Parameterization, req: &MinorRequest) -> Result<FittingGenerators, Error> {
    match fitting_generators(req)? {
        FittingGenerators::UnitIdeal => Ok(FittingGenerators::UnitIdeal),
        FittingGenerators::Minors {
            size,
            total,
            truncated,
            examined,
            minors,
        } => {
            let pulled = minors
                .into_iter()
                .map(|m| {
                    Ok(Minor {
                        poly: m.poly.substitute(phi.forms())?,
                        ..m
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(FittingGenerators::Minors {
                size,
                total,
                truncated,
                examined,
                minors: pulled.into_iter().filter(|m| !m.poly.is_zero()).collect(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::linalg::{rank, ExactMatrix};
    use crate::matrix_rep::build_matrix_rep;
    use crate::poly::{multivariate_gcd, parse_poly, DegIndex, RingSpec};

    const Q: Field = Field::Rational;

    fn sphere() -> Parameterization {
        Parameterization::parse(
            RingSpec::Triangular,
            Q,
            &["s0^2+s1^2+s2^2", "2*s0*s2", "2*s0*s1", "s0^2-s1^2-s2^2"],
        )
        .unwrap()
    }

    fn x(text: &str) -> MultiPoly {
        parse_poly(text, RingSpec::Target, Q).unwrap()
    }

    #[test]
    fn subsets_and_binomials() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(subsets(2, 3).len(), 0);
        assert_eq!(binomial(10, 3), Some(120));
        assert_eq!(binomial(3, 5), Some(0));
    }

    #[test]
    fn determinant_of_symbolic_matrix() {
        let m = vec![vec![x("X0"), x("X1")], vec![x("X2"), x("X3")]];
        assert_eq!(symbolic_det(&m), x("X0*X3 - X1*X2"));
        let m = vec![
            vec![x("X0"), x("0"), x("0")],
            vec![x("0"), x("X1"), x("0")],
            vec![x("X3"), x("0"), x("X2")],
        ];
        assert_eq!(symbolic_det(&m), x("X0*X1*X2"));
    }

    #[test]
    fn sphere_maximal_minors() {
        let rep = build_matrix_rep(&sphere(), DegIndex::Single(1));
        let g = fitting_generators(&MinorRequest::new(&rep, 0)).unwrap();
        let FittingGenerators::Minors { size, total, truncated, minors, .. } = &g else {
            panic!()
        };
        assert_eq!((*size, *total, *truncated), (3, 4, false));
        for m in minors {
            assert_eq!(m.poly.homogeneous_degree(), Some(DegIndex::Single(3)));
        }
        let h = multivariate_gcd(&g.polys()).unwrap();
        assert_eq!(h, x("X0^2 - X1^2 - X2^2 - X3^2").monic());

        // Column operations do not change the span of the maximal minors, so it must
        // agree with the span for the hand-written matrix of the sphere.
        let reference = [
            ["0", "X1", "X2", "-X0+X3"],
            ["X1", "0", "-X0-X3", "X2"],
            ["-X2", "-X0-X3", "0", "X1"],
        ];
        let hand: Vec<MultiPoly> = subsets(4, 3)
            .into_iter()
            .map(|cs| {
                let sub: Vec<Vec<MultiPoly>> =
                    (0..3).map(|r| cs.iter().map(|&c| x(reference[r][c])).collect()).collect();
                symbolic_det(&sub)
            })
            .collect();
        assert_eq!(span_rank(&hand), span_rank(&g.polys()));
        let mut both = hand.clone();
        both.extend(g.polys());
        assert_eq!(span_rank(&both), span_rank(&hand));
    }

    fn span_rank(polys: &[MultiPoly]) -> usize {
        let basis = crate::poly::monomial_basis(RingSpec::Target, DegIndex::Single(3));
        let rows = polys.iter().map(|p| basis.iter().map(|m| p.coeff(m)).collect()).collect();
        rank(&ExactMatrix::from_rows(Q, basis.len(), rows))
    }

    #[test]
    fn sphere_entries_span_linear_forms() {
        let rep = build_matrix_rep(&sphere(), DegIndex::Single(1));
        let g = fitting_generators(&MinorRequest::new(&rep, 2)).unwrap();
        let rows: Vec<Vec<_>> = g
            .polys()
            .iter()
            .map(|p| (0..4).map(|i| p.coeff(&crate::poly::Monomial::var(4, i))).collect())
            .collect();
        assert_eq!(rank(&ExactMatrix::from_rows(Q, 4, rows)), 4);
        assert_eq!(fitting_generators(&MinorRequest::new(&rep, 3)).unwrap(), FittingGenerators::UnitIdeal);
    }

    #[test]
    fn pullbacks() {
        let phi = sphere();
        let rep = build_matrix_rep(&phi, DegIndex::Single(1));
        assert!(pullback_fitting(&phi, &MinorRequest::new(&rep, 0)).unwrap().polys().is_empty());
        assert!(!pullback_fitting(&phi, &MinorRequest::new(&rep, 1)).unwrap().polys().is_empty());
    }

    #[test]
    fn sampling_is_seeded_and_sorted() {
        let phi = sphere();
        let rep = build_matrix_rep(&phi, DegIndex::Single(2));
        let req = MinorRequest::new(&rep, 4).limit(10).seed(7);
        let a = fitting_generators(&req).unwrap();
        let b = fitting_generators(&req).unwrap();
        assert_eq!(a, b);
        let FittingGenerators::Minors { truncated, examined, minors, .. } = a else { panic!() };
        assert!(truncated);
        assert_eq!(examined, 10);
        let keys: Vec<_> = minors.iter().map(|m| (m.rows.clone(), m.cols.clone())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn oversized_minors_rejected() {
        let rep = build_matrix_rep(&sphere(), DegIndex::Single(3));
        assert!(matches!(
            fitting_generators(&MinorRequest::new(&rep, 0)),
            Err(Error::Minors(_))
        ));
    }
}
