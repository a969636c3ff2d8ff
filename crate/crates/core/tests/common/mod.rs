#![allow(dead_code)]

pub mod resultant;

use fibratrix::field::{Field, FieldElem};
use fibratrix::matrix_rep::{validate, Parameterization};
use fibratrix::poly::{monomial_basis, DegIndex, MultiPoly, RingSpec};
use fibratrix::sample;
use fibratrix::surface::Surface;
use rand::Rng;

pub const Q: Field = Field::Rational;

pub fn triangular(forms: [&str; 4]) -> Parameterization {
    Parameterization::parse(RingSpec::Triangular, Q, &forms).unwrap()
}

pub fn sphere() -> Parameterization {
    triangular(["s0^2+s1^2+s2^2", "2*s0*s2", "2*s0*s1", "s0^2-s1^2-s2^2"])
}

pub fn steiner() -> Parameterization {
    triangular(["s0^2+s1^2+s2^2", "s1*s2", "s0*s2", "s0*s1"])
}

pub fn plane() -> Parameterization {
    triangular(["s1*s2", "s0*(s0+s1+s2)", "s0*s1", "s0*s1"])
}

pub fn quadric() -> Parameterization {
    Parameterization::parse(RingSpec::Tensor, Q, &["s0*t0", "s0*t1", "s1*t0", "s1*t1"]).unwrap()
}

/// Four random cubics with small integer coefficients that pass validation.
pub fn random_cubic(seed: u64) -> Parameterization {
    let basis = monomial_basis(RingSpec::Triangular, DegIndex::Single(3));
    let mut rng = sample::rng(seed);
    loop {
        let forms: [MultiPoly; 4] = std::array::from_fn(|_| {
            MultiPoly::from_terms(
                RingSpec::Triangular,
                Q,
                basis.iter().map(|m| (m.clone(), Q.from_i64(rng.gen_range(-3..=3)))),
            )
        });
        if let Ok(phi) = Parameterization::new(forms) {
            if validate(&phi, seed).passed() {
                return phi;
            }
        }
    }
}

pub fn surface(phi: &Parameterization) -> Surface {
    Surface::new(phi.clone()).unwrap()
}

pub fn q(v: i64) -> FieldElem {
    Q.from_i64(v)
}
