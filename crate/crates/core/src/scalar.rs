//! Exact scalars: big rationals, elements of Q(sqrt n) and their complexifications.
//!
//! Every predicate in this crate (isotropy, positivity, wall membership) is decided
//! exactly, so the scalar layer never touches floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Shorthand for n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

fn isqrt_u64(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

/// An element a + b*sqrt(n) of Q(sqrt n), with the radicand carried along.
///
/// The representation is always the pair (a, b), even when n is a perfect square;
/// in that case arithmetic and comparisons use the exact value a + b*m with
/// m = sqrt(n). Mixing scalars with different radicands is a hard error at the
/// API boundary and a panic inside the crate (it would be a bug, not user input).
#[derive(Clone, Debug)]
pub struct ExtScalar {
    a: Rat,
    b: Rat,
    n: u64,
}

impl ExtScalar {
    pub fn new(a: Rat, b: Rat, n: u64) -> Self {
        assert!(n >= 1, "radicand must be a positive integer");
        ExtScalar { a, b, n }
    }

    pub fn from_rat(a: Rat, n: u64) -> Self {
        ExtScalar::new(a, Rat::zero(), n)
    }

    pub fn from_int(k: i64, n: u64) -> Self {
        ExtScalar::from_rat(rat_int(k), n)
    }

    pub fn zero(n: u64) -> Self {
        ExtScalar::from_rat(Rat::zero(), n)
    }

    pub fn one(n: u64) -> Self {
        ExtScalar::from_rat(Rat::one(), n)
    }

    /// The element sqrt(n) itself.
    pub fn sqrt_n(n: u64) -> Self {
        ExtScalar::new(Rat::zero(), Rat::one(), n)
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.n
    }

    /// Some(m) iff n = m^2.
    pub fn square_root_of_radicand(&self) -> Option<u64> {
        let m = isqrt_u64(self.n);
        (m * m == self.n).then_some(m)
    }

    fn check(&self, other: &ExtScalar) {
        assert_eq!(
            self.n, other.n,
            "mixed radicands in ExtScalar arithmetic: {} vs {}",
            self.n, other.n
        );
    }

    pub fn compatible(&self, other: &ExtScalar) -> Result<()> {
        if self.n != other.n {
            return Err(Error::MixedRadicand {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ExtScalar) -> ExtScalar {
        self.check(other);
        ExtScalar::new(&self.a + &other.a, &self.b + &other.b, self.n)
    }

    pub fn sub(&self, other: &ExtScalar) -> ExtScalar {
        self.check(other);
        ExtScalar::new(&self.a - &other.a, &self.b - &other.b, self.n)
    }

    pub fn neg(&self) -> ExtScalar {
        ExtScalar::new(-self.a.clone(), -self.b.clone(), self.n)
    }

    pub fn mul(&self, other: &ExtScalar) -> ExtScalar {
        self.check(other);
        let n = Rat::from_integer(Int::from(self.n));
        ExtScalar::new(
            &self.a * &other.a + &self.b * &other.b * n,
            &self.a * &other.b + &self.b * &other.a,
            self.n,
        )
    }

    pub fn scale(&self, c: &Rat) -> ExtScalar {
        ExtScalar::new(&self.a * c, &self.b * c, self.n)
    }

    pub fn scale_int(&self, c: &Int) -> ExtScalar {
        let c = Rat::from_integer(c.clone());
        self.scale(&c)
    }

    /// Exact sign of the real number a + b*sqrt(n): -1, 0 or +1.
    pub fn sign(&self) -> i32 {
        let sgn = |r: &Rat| -> i32 {
            if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }
        };
        if let Some(m) = self.square_root_of_radicand() {
            let val = &self.a + &self.b * Rat::from_integer(Int::from(m));
            return sgn(&val);
        }
        let (sa, sb) = (sgn(&self.a), sgn(&self.b));
        match (sa, sb) {
            (0, s) => s,
            (s, 0) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            _ => {
                // opposite signs: compare a^2 against n * b^2; equality is
                // impossible since n is not a perfect square and b != 0
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * Rat::from_integer(Int::from(self.n));
                if lhs > rhs {
                    sa
                } else {
                    sb
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self) -> Result<ExtScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(m) = self.square_root_of_radicand() {
            // collapse to the exact rational value; the representation of the
            // result is (value^-1, 0)
            let val = &self.a + &self.b * Rat::from_integer(Int::from(m));
            return Ok(ExtScalar::from_rat(val.recip(), self.n));
        }
        let norm = &self.a * &self.a - &self.b * &self.b * Rat::from_integer(Int::from(self.n));
        Ok(ExtScalar::new(&self.a / &norm, -(&self.b / &norm), self.n))
    }

    pub fn div(&self, other: &ExtScalar) -> Result<ExtScalar> {
        Ok(self.mul(&other.inv()?))
    }
}

impl PartialEq for ExtScalar {
    fn eq(&self, other: &Self) -> bool {
        self.check(other);
        self.sub(other).is_zero()
    }
}
impl Eq for ExtScalar {}

impl std::fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + ({})*sqrt({})", self.a, self.b, self.n)
        }
    }
}

/// A complex number over Q(sqrt n): re + i*im with re, im in Q(sqrt n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CScalar {
    pub re: ExtScalar,
    pub im: ExtScalar,
}

impl CScalar {
    pub fn new(re: ExtScalar, im: ExtScalar) -> Self {
        re.check(&im);
        CScalar { re, im }
    }

    pub fn from_ext(re: ExtScalar) -> Self {
        let n = re.radicand();
        CScalar::new(re, ExtScalar::zero(n))
    }

    pub fn zero(n: u64) -> Self {
        CScalar::new(ExtScalar::zero(n), ExtScalar::zero(n))
    }

    pub fn radicand(&self) -> u64 {
        self.re.radicand()
    }

    pub fn add(&self, other: &CScalar) -> CScalar {
        CScalar::new(self.re.add(&other.re), self.im.add(&other.im))
    }

    pub fn sub(&self, other: &CScalar) -> CScalar {
        CScalar::new(self.re.sub(&other.re), self.im.sub(&other.im))
    }

    pub fn neg(&self) -> CScalar {
        CScalar::new(self.re.neg(), self.im.neg())
    }

    pub fn mul(&self, other: &CScalar) -> CScalar {
        CScalar::new(
            self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        )
    }

    pub fn mul_ext(&self, c: &ExtScalar) -> CScalar {
        CScalar::new(self.re.mul(c), self.im.mul(c))
    }

    pub fn div_ext(&self, c: &ExtScalar) -> Result<CScalar> {
        let inv = c.inv()?;
        Ok(self.mul_ext(&inv))
    }

    pub fn conj(&self) -> CScalar {
        CScalar::new(self.re.clone(), self.im.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}
