//! Fiber degrees by elimination, independent of the syzygy machinery.
//!
//! The fiber over `p` is cut out by the equations `f_i p_j - f_j p_i`. After a random
//! change of coordinates `s = M (1, u1, u2)`, eliminate `u1` from random combinations of
//! these equations with Sylvester resultants, take the gcd of two such resultants, and
//! strip the factor contributed by base points (computed the same way from the `f_i`).
//! The degree of what remains counts the fiber with multiplicity when the fiber is a
//! local complete intersection.

use fibratrix::field::FieldElem;
use fibratrix::fiber::ProjPoint;
use fibratrix::matrix_rep::Parameterization;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

type Coeffs = Vec<BigRational>;

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn to_rat(e: &FieldElem) -> BigRational {
    e.as_rational().expect("oracle works over Q").clone()
}

fn trim(mut p: Coeffs) -> Coeffs {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn degree(p: &Coeffs) -> Option<usize> {
    let p = trim(p.clone());
    (!p.is_empty()).then(|| p.len() - 1)
}

fn rem(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &f * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn quo(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    let lb = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lb;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &f * c;
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    trim(q)
}

fn gcd(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        for c in a.iter_mut() {
            *c = &*c / &l;
        }
    }
    a
}

/// Determinant by Gaussian elimination over Q.
fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    d
}

/// Sylvester resultant of `a` and `b` with formal degrees `da`, `db`.
fn sylvester(a: &Coeffs, da: usize, b: &Coeffs, db: usize) -> BigRational {
    let n = da + db;
    let mut m = vec![vec![BigRational::zero(); n]; n];
    let at = |p: &Coeffs, i: usize| p.get(i).cloned().unwrap_or_else(BigRational::zero);
    for r in 0..db {
        for i in 0..=da {
            m[r][r + i] = at(a, da - i);
        }
    }
    for r in 0..da {
        for i in 0..=db {
            m[db + r][r + i] = at(b, db - i);
        }
    }
    det(m)
}

/// Coefficients of the polynomial of degree at most `n` through `(x_k, y_k)`, `x_k = k`.
fn interpolate(ys: &[BigRational]) -> Coeffs {
    let n = ys.len();
    let mut out = vec![BigRational::zero(); n];
    for (k, yk) in ys.iter().enumerate() {
        // Basis polynomial prod_{j != k} (x - j) / (k - j).
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..n {
            if j == k {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (i, c) in basis.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * rat(j as i64);
            }
            basis = next;
            denom *= rat(k as i64 - j as i64);
        }
        for (i, c) in basis.iter().enumerate() {
            out[i] += c * yk / &denom;
        }
    }
    trim(out)
}

struct Chart {
    m: [[i64; 3]; 3],
}

impl Chart {
    fn point(&self, u1: &BigRational, u2: &BigRational) -> Vec<BigRational> {
        (0..3)
            .map(|r| rat(self.m[r][0]) + u1 * rat(self.m[r][1]) + u2 * rat(self.m[r][2]))
            .collect()
    }
}

/// Random linear combinations of a family of forms, evaluated on the chart.
struct Combination {
    weights: Vec<Vec<BigRational>>,
}

impl Combination {
    /// Values of each combination at the point.
    fn eval(&self, values: &[BigRational]) -> Vec<BigRational> {
        self.weights
            .iter()
            .map(|w| w.iter().zip(values).map(|(a, b)| a * b).sum())
            .collect()
    }
}

fn eval_forms(phi: &Parameterization, s: &[BigRational]) -> Vec<BigRational> {
    let field = phi.field();
    let pt: Vec<FieldElem> = s
        .iter()
        .map(|c| field.from_ratio(c.numer(), c.denom()).unwrap())
        .collect();
    phi.eval(&pt).unwrap().iter().map(to_rat).collect()
}

/// `gcd(Res_u1(g1, g2), Res_u1(g1, g3))` as a polynomial in `u2`, where `g_k` are the
/// combinations of `family(s)`; `None` for a degenerate draw.
fn eliminate(
    d: usize,
    chart: &Chart,
    comb: &Combination,
    family: &dyn Fn(&[BigRational]) -> Vec<BigRational>,
) -> Option<Coeffs> {
    // Every g has total degree d in (u1, u2); resultants have degree at most d^2 in u2.
    let samples_u2 = d * d + 1;
    let mut res = [Vec::new(), Vec::new()];
    for t in 0..samples_u2 {
        let u2 = rat(t as i64);
        // Coefficients of each g in u1 by interpolation through u1 = 0..=d.
        let vals: Vec<Vec<BigRational>> = (0..=d)
            .map(|k| comb.eval(&family(&chart.point(&rat(k as i64), &u2))))
            .collect();
        let g: Vec<Coeffs> = (0..3)
            .map(|i| interpolate(&vals.iter().map(|v| v[i].clone()).collect::<Vec<_>>()))
            .collect();
        // The u1^d coefficient is a constant in generic coordinates; require it.
        if g.iter().any(|gi| gi.get(d).is_none_or(|c| c.is_zero())) {
            return None;
        }
        res[0].push(sylvester(&g[0], d, &g[1], d));
        res[1].push(sylvester(&g[0], d, &g[2], d));
    }
    let r1 = interpolate(&res[0]);
    let r2 = interpolate(&res[1]);
    if r1.is_empty() || r2.is_empty() {
        return None;
    }
    Some(gcd(&r1, &r2))
}

fn random_chart<R: Rng>(rng: &mut R) -> Chart {
    loop {
        let m: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-4..=4)));
        let det3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det3 != 0 {
            return Chart { m };
        }
    }
}

fn random_combination<R: Rng>(rng: &mut R, n: usize) -> Combination {
    Combination {
        weights: (0..3)
            .map(|_| (0..n).map(|_| rat(rng.gen_range(-9..=9))).collect())
            .collect(),
    }
}

/// Degree of the fiber of a triangular map over `p`, by elimination. Draws are retried
/// until three non-degenerate draws are found and the median is returned.
pub fn fiber_degree(phi: &Parameterization, p: &ProjPoint, seed: u64) -> usize {
    let d = phi.degree().total() as usize;
    let pc: Vec<BigRational> = p.coords().iter().map(to_rat).collect();
    let fiber_eqs = |s: &[BigRational]| {
        let f = eval_forms(phi, s);
        let mut out = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                out.push(&f[i] * &pc[j] - &f[j] * &pc[i]);
            }
        }
        out
    };
    let base_eqs = |s: &[BigRational]| eval_forms(phi, s);
    let mut rng = fibratrix::sample::rng(seed);
    let mut answers = Vec::new();
    let mut attempts = 0;
    while answers.len() < 3 {
        attempts += 1;
        assert!(attempts < 100, "oracle: no non-degenerate draw");
        let chart = random_chart(&mut rng);
        let Some(h) = eliminate(d, &chart, &random_combination(&mut rng, 6), &fiber_eqs) else {
            continue;
        };
        let Some(b) = eliminate(d, &chart, &random_combination(&mut rng, 4), &base_eqs) else {
            continue;
        };
        // Remove every root shared with the base locus, with its full multiplicity.
        let mut h = h;
        loop {
            let g = gcd(&h, &b);
            if degree(&g).unwrap_or(0) == 0 {
                break;
            }
            h = quo(&h, &g);
        }
        answers.push(degree(&h).unwrap_or(0));
    }
    answers.sort_unstable();
    // Median of three: one unlucky draw cannot change the answer.
    answers[1]
}
