//! Exact field scalars: arbitrary-precision rationals and prime fields.
//!
//! Every coefficient in the engine is either an element of `Q` (backed by
//! [`num_rational::BigRational`]) or of `F_p` for a machine-word prime `p`
//! (residues stored as `u64`, reduced after every operation). No floating
//! point exists anywhere downstream of this module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// The coefficient field a structure is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    /// The rationals.
    Q,
    /// The prime field with `p` elements, `p` a machine-word prime.
    Fp(u64),
}

impl Field {
    /// Parse the textual form used in JSON spec files: `"Q"` or `"Fp:<p>"`.
    pub fn parse(s: &str) -> Result<Field> {
        if s == "Q" {
            return Ok(Field::Q);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("invalid prime in field tag `{s}`")))?;
            if p < 2 || !is_prime(p) {
                return Err(Error::Parse(format!("{p} is not prime")));
            }
            return Ok(Field::Fp(p));
        }
        Err(Error::Parse(format!("unknown field tag `{s}` (expected `Q` or `Fp:<p>`)")))
    }

    /// Textual form accepted by [`Field::parse`].
    pub fn tag(&self) -> String {
        match self {
            Field::Q => "Q".to_string(),
            Field::Fp(p) => format!("Fp:{p}"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

/// Deterministic trial-division primality check; `p` fits in a machine word
/// and validation happens once per structure, so speed is irrelevant.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact scalar in one of the supported fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u64, val: u64 },
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        match field {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { p, val: 0 },
        }
    }

    pub fn one(field: Field) -> Scalar {
        match field {
            Field::Q => Scalar::Q(BigRational::one()),
            Field::Fp(p) => Scalar::Fp { p, val: 1 },
        }
    }

    pub fn from_i64(field: Field, n: i64) -> Scalar {
        match field {
            Field::Q => Scalar::Q(BigRational::from(BigInt::from(n))),
            Field::Fp(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                Scalar::Fp { p, val: r % p }
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { val, .. } => *val == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { p: q, val: b }) if p == q => Scalar::Fp {
                p: *p,
                val: mod_add(*a, *b, *p),
            },
            _ => panic!("scalar field mismatch: {:?} vs {:?}", self.field(), other.field()),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { p: q, val: b }) if p == q => Scalar::Fp {
                p: *p,
                val: mod_mul(*a, *b, *p),
            },
            _ => panic!("scalar field mismatch: {:?} vs {:?}", self.field(), other.field()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, val } => Scalar::Fp {
                p: *p,
                val: if *val == 0 { 0 } else { p - val },
            },
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::Arithmetic("division by zero".into()));
        }
        Ok(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { p, val } => Scalar::Fp {
                p: *p,
                val: mod_pow(*val, *p - 2, *p),
            },
        })
    }

    /// Multiply by the sign `±1`.
    pub fn signed(&self, sign: i64) -> Scalar {
        debug_assert!(sign == 1 || sign == -1);
        if sign == 1 {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Reduce a rational scalar modulo `p`. Errors if the denominator
    /// vanishes mod `p` or the scalar already lives in a prime field.
    pub fn reduce_mod(&self, p: u64) -> Result<Scalar> {
        match self {
            Scalar::Q(r) => {
                let pb = BigInt::from(p);
                let num = r.numer().mod_floor_u64(&pb);
                let den = r.denom().mod_floor_u64(&pb);
                if den == 0 {
                    return Err(Error::Arithmetic(format!(
                        "denominator of {r} is not invertible mod {p}"
                    )));
                }
                let den_inv = mod_pow(den, p - 2, p);
                Ok(Scalar::Fp { p, val: mod_mul(num, den_inv, p) })
            }
            Scalar::Fp { .. } => Err(Error::Arithmetic(
                "cannot reduce a prime-field scalar to another prime field".into(),
            )),
        }
    }

    /// Parse the textual form used in JSON files: `"3"`, `"-1/2"` over `Q`,
    /// or a (possibly signed) integer reduced mod `p` over `F_p`.
    pub fn parse(field: Field, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num_s, den_s) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let num: BigInt = num_s
            .parse()
            .map_err(|_| Error::Parse(format!("invalid coefficient `{s}`")))?;
        let den: BigInt = match den_s {
            Some(d) => d
                .parse()
                .map_err(|_| Error::Parse(format!("invalid coefficient `{s}`")))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        let q = BigRational::new(num, den);
        match field {
            Field::Q => Ok(Scalar::Q(q)),
            Field::Fp(p) => Scalar::Q(q).reduce_mod(p),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: &BigInt) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: &BigInt) -> u64 {
        use num_integer::Integer;
        let r = self.mod_floor(p);
        // The remainder is in [0, p) and p fits in u64.
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    }
}

fn mod_add(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_tags_round_trip() {
        for f in [Field::Q, Field::Fp(2), Field::Fp(7)] {
            assert_eq!(Field::parse(&f.tag()).unwrap(), f);
        }
        assert!(Field::parse("Fp:4").is_err());
        assert!(Field::parse("R").is_err());
    }

    #[test]
    fn rational_parsing_and_arithmetic() {
        let half = Scalar::parse(Field::Q, "1/2").unwrap();
        let third = Scalar::parse(Field::Q, "-1/3").unwrap();
        let sum = half.add(&third);
        assert_eq!(sum, Scalar::parse(Field::Q, "1/6").unwrap());
        assert_eq!(sum.to_string(), "1/6");
        assert!(half.mul(&half.inv().unwrap()).is_one());
    }

    #[test]
    fn prime_field_arithmetic() {
        let a = Scalar::parse(Field::Fp(7), "-3").unwrap();
        assert_eq!(a, Scalar::Fp { p: 7, val: 4 });
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).is_one());
        // 1/2 mod 7 = 4
        let half = Scalar::parse(Field::Fp(7), "1/2").unwrap();
        assert_eq!(half, Scalar::Fp { p: 7, val: 4 });
    }

    #[test]
    fn reduction_rejects_bad_denominators() {
        let half = Scalar::parse(Field::Q, "1/2").unwrap();
        assert!(half.reduce_mod(2).is_err());
        assert!(half.reduce_mod(7).is_ok());
    }
}
