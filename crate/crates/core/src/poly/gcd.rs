//! Multivariate gcd by recursive content / primitive-part reduction.
//!
//! A polynomial is viewed as univariate in its highest-index variable with coefficients
//! in the remaining ones. Contents are computed recursively and the primitive parts are
//! run through a primitive pseudo-remainder sequence. Constants bottom out the recursion.

use super::MultiPoly;
use crate::error::Error;

/// Monic gcd of the nonzero inputs. Zero inputs are skipped.
pub fn multivariate_gcd(polys: &[MultiPoly]) -> Result<MultiPoly, Error> {
    let mut nonzero = polys.iter().filter(|p| !p.is_zero());
    let first = nonzero.next().ok_or(Error::AllZero)?;
    for p in polys {
        first.check(p)?;
    }
    let mut g = first.clone();
    for p in nonzero {
        if g.is_constant() {
            break;
        }
        g = gcd2(&g, p);
    }
    let g = g.monic();
    if polys.iter().all(|p| p.homogeneous_degree().is_some() || p.is_zero()) {
        debug_assert!(g.homogeneous_degree().is_some(), "gcd of forms must be a form");
    }
    Ok(g)
}

/// Division by a single divisor under the graded lexicographic order.
/// Returns `(quotient, remainder)`; the remainder is zero iff `b` divides `a`.
pub fn div_rem(a: &MultiPoly, b: &MultiPoly) -> (MultiPoly, MultiPoly) {
    assert!(!b.is_zero(), "division by zero polynomial");
    let (lm, lc) = b.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
    let lc_inv = lc.inv();
    let mut q = MultiPoly::zero(a.ring, a.field);
    let mut r = MultiPoly::zero(a.ring, a.field);
    let mut rest = a.clone();
    while let Some((m, c)) = rest.leading().map(|(m, c)| (m.clone(), c.clone())) {
        if lm.divides(&m) {
            let t = MultiPoly::monomial(a.ring, lm.quotient_of(&m), &c * &lc_inv);
            rest = rest.sub(&b.mul(&t));
            q = q.add(&t);
        } else {
            rest.terms.remove(&m);
            r.terms.insert(m, c);
        }
    }
    (q, r)
}

/// `a / b`, or `None` if `b` does not divide `a`.
pub fn exact_div(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    let (q, r) = div_rem(a, b);
    r.is_zero().then_some(q)
}

fn top_var(p: &MultiPoly) -> Option<usize> {
    (0..p.ring.nvars()).rev().find(|&v| p.degree_in(v) > 0)
}

/// Unnormalized gcd of two nonzero polynomials.
fn gcd2(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let va = top_var(a);
    let vb = top_var(b);
    let var = match (va, vb) {
        (None, _) | (_, None) => return MultiPoly::one(a.ring, a.field),
        (Some(x), Some(y)) => x.max(y),
    };
    // Only one side involves `var`: the gcd divides the other side's content.
    if va != Some(var) {
        return gcd2(a, &content(b, var));
    }
    if vb != Some(var) {
        return gcd2(&content(a, var), b);
    }
    let ca = content(a, var);
    let cb = content(b, var);
    let c = gcd2(&ca, &cb);
    let mut f = primitive(a, &ca, var);
    let mut g = primitive(b, &cb, var);
    if f.degree_in(var) < g.degree_in(var) {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_zero() {
        if g.degree_in(var) == 0 {
            // A nonzero remainder free of `var` makes the primitive gcd trivial.
            f = MultiPoly::one(a.ring, a.field);
            break;
        }
        let r = pseudo_rem(&f, &g, var);
        f = g;
        g = if r.is_zero() {
            r
        } else {
            let cr = content(&r, var);
            primitive(&r, &cr, var)
        };
    }
    let f = if f.degree_in(var) > 0 {
        let cf = content(&f, var);
        primitive(&f, &cf, var)
    } else {
        MultiPoly::one(a.ring, a.field)
    };
    c.mul(&f)
}

/// Gcd of the coefficients of `p` viewed as univariate in `var`.
fn content(p: &MultiPoly, var: usize) -> MultiPoly {
    let coeffs = p.univariate_coeffs(var);
    let mut g = MultiPoly::zero(p.ring, p.field);
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = if g.is_zero() { c.clone() } else { gcd2(&g, c) };
        if g.is_constant() {
            return MultiPoly::one(p.ring, p.field);
        }
    }
    g.monic()
}

/// `p / content`, scaled monic to keep rational coefficients small.
fn primitive(p: &MultiPoly, content: &MultiPoly, _var: usize) -> MultiPoly {
    if content.is_constant() {
        return p.monic();
    }
    exact_div(p, content).expect("content divides").monic()
}

/// `lc(g)^(deg f - deg g + 1) * f mod g`, as polynomials in `var`.
fn pseudo_rem(f: &MultiPoly, g: &MultiPoly, var: usize) -> MultiPoly {
    let ring = f.ring;
    let field = f.field;
    let gc = g.univariate_coeffs(var);
    let dg = gc.len() - 1;
    let lc = gc[dg].clone();
    let mut r = f.univariate_coeffs(var);
    while r.len() > dg && !r.is_empty() {
        let dr = r.len() - 1;
        let lead = r[dr].clone();
        if lead.is_zero() {
            r.pop();
            continue;
        }
        let shift = dr - dg;
        for c in r.iter_mut() {
            *c = c.mul(&lc);
        }
        for (k, gk) in gc.iter().enumerate() {
            r[k + shift] = r[k + shift].sub(&lead.mul(gk));
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
    }
    while r.last().is_some_and(MultiPoly::is_zero) {
        r.pop();
    }
    MultiPoly::from_univariate(ring, field, var, &r)
}
