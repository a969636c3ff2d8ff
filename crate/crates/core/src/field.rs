//! Exact scalars: arbitrary-precision rationals and residues modulo a prime.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Base field of a computation. Chosen once per parameterization and never mixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// An element of the active [`Field`].
///
/// Rationals are kept in lowest terms with a positive denominator (guaranteed by
/// `BigRational`); residues are kept in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rat(BigRational),
    Mod { value: u64, modulus: u64 },
}

impl Field {
    /// Builds `F_p`, rejecting composite or too-large moduli.
    pub fn prime(p: u64) -> Result<Field, Error> {
        if !(2..1 << 62).contains(&p) || !is_prime(p) {
            return Err(Error::BadField(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        match *self {
            Field::Rational => FieldElem::Rat(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => FieldElem::Mod {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElem {
        match *self {
            Field::Rational => FieldElem::Rat(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                FieldElem::Mod {
                    value: r.to_u64().expect("residue fits"),
                    modulus: p,
                }
            }
        }
    }

    /// Maps the rational `num/den` into the field. Fails when `den` vanishes in it.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<FieldElem, Error> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(Error::BadField(format!(
                "denominator {den} is zero in {self}"
            )));
        }
        Ok(self.from_bigint(num).div(&d))
    }

    pub fn contains(&self, e: &FieldElem) -> bool {
        matches!(
            (self, e),
            (Field::Rational, FieldElem::Rat(_))
        ) || matches!((self, e), (Field::Prime(p), FieldElem::Mod { modulus, .. }) if p == modulus)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    /// Accepts `q` (also `Q`, `rational`) or `fp:P`.
    fn from_str(s: &str) -> Result<Field, Error> {
        let s = s.trim();
        match s {
            "q" | "Q" | "qq" | "QQ" | "rational" | "rationals" => Ok(Field::Rational),
            _ => {
                let rest = s
                    .strip_prefix("fp:")
                    .or_else(|| s.strip_prefix("Fp:"))
                    .ok_or_else(|| Error::BadField(format!("unknown field `{s}`")))?;
                let p: u64 = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::BadField(format!("bad prime `{rest}`")))?;
                Field::prime(p)
            }
        }
    }
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Rat(_) => Field::Rational,
            FieldElem::Mod { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_zero(),
            FieldElem::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_one(),
            FieldElem::Mod { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> FieldElem {
        match self {
            FieldElem::Rat(r) => {
                assert!(!r.is_zero(), "inverse of zero");
                FieldElem::Rat(r.recip())
            }
            FieldElem::Mod { value, modulus } => {
                assert!(*value != 0, "inverse of zero");
                FieldElem::Mod {
                    value: pow_mod(*value, modulus - 2, *modulus),
                    modulus: *modulus,
                }
            }
        }
    }

    pub fn div(&self, other: &FieldElem) -> FieldElem {
        self * &other.inv()
    }

    pub fn pow(&self, mut e: u32) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Rational value, if this is a rational element.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Rat(r) => Some(r),
            FieldElem::Mod { .. } => None,
        }
    }

    /// Sign for rationals; residues are treated as nonnegative.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_negative(),
            FieldElem::Mod { .. } => false,
        }
    }

    fn mismatch(&self, other: &FieldElem) -> ! {
        panic!(
            "field mismatch: {} vs {}",
            self.field(),
            other.field()
        )
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a + b),
            (
                FieldElem::Mod { value: a, modulus },
                FieldElem::Mod { value: b, modulus: m2 },
            ) if modulus == m2 => FieldElem::Mod {
                value: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => self.mismatch(rhs),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a - b),
            (
                FieldElem::Mod { value: a, modulus },
                FieldElem::Mod { value: b, modulus: m2 },
            ) if modulus == m2 => FieldElem::Mod {
                value: ((*a as u128 + *modulus as u128 - *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            },
            _ => self.mismatch(rhs),
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a * b),
            (
                FieldElem::Mod { value: a, modulus },
                FieldElem::Mod { value: b, modulus: m2 },
            ) if modulus == m2 => FieldElem::Mod {
                value: mul_mod(*a, *b, *modulus),
                modulus: *modulus,
            },
            _ => self.mismatch(rhs),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Rat(a) => FieldElem::Rat(-a),
            FieldElem::Mod { value, modulus } => FieldElem::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        &self + &rhs
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: FieldElem) -> FieldElem {
        &self - &rhs
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: FieldElem) -> FieldElem {
        &self * &rhs
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order used only for canonical sorting; not the field's (nonexistent) order over `F_p`.
impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => a.cmp(b),
            (FieldElem::Mod { value: a, .. }, FieldElem::Mod { value: b, .. }) => a.cmp(b),
            (FieldElem::Rat(_), FieldElem::Mod { .. }) => Ordering::Less,
            (FieldElem::Mod { .. }, FieldElem::Rat(_)) => Ordering::Greater,
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
