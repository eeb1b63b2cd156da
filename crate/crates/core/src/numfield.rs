//! Scalars: exact elements of Q(ω) with ω a primitive cube root of unity,
//! and a double-precision complex backend sharing the same contract.

use std::fmt;
use crate::linalg::{eisenstein_eliminate, Matrix};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Relative tolerance used by default when comparing float scalars.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Absolute threshold below which a float scalar counts as zero (pole and pivot tests).
pub const FLOAT_ZERO: f64 = 1e-13;

pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// True for backends where `==` is exact field equality.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    /// The primitive cube root of unity e^{2πi/3}.
    fn omega() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn to_complex(&self) -> Complex64;
    /// Size used for pivot selection; smaller is preferred for exact scalars,
    /// larger for float ones (see `linalg`).
    fn pivot_score(&self) -> f64;

    /// Determinant of `m`; exact backends override this with a ring-specific path.
    fn determinant_of(m: &Matrix<Self>) -> Self {
        m.determinant_generic()
    }

    /// Solution of `m · x = b`, `None` if `m` is singular.
    fn solve_in(m: &Matrix<Self>, b: &[Self]) -> Option<Vec<Self>> {
        m.solve_generic(b)
    }

    /// Equality: exact for exact backends, relative tolerance otherwise.
    fn close_to(&self, other: &Self, rel_tol: f64) -> bool {
        if Self::EXACT {
            return self == other;
        }
        let (a, b) = (self.to_complex(), other.to_complex());
        let scale = a.norm().max(b.norm()).max(1.0);
        (a - b).norm() <= rel_tol * scale
    }

    fn mul_int(&self, n: i64) -> Self {
        self.clone() * Self::from_int(n)
    }

    /// Integer power; negative exponents need an invertible base.
    fn powi(&self, e: i64) -> Self {
        let mut base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc *= &base;
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }

    fn checked_div(&self, den: &Self, what: &str) -> Result<Self> {
        let inv = den.inv().ok_or_else(|| Error::Pole(what.to_string()))?;
        Ok(self.clone() * inv)
    }
}

// ---------------------------------------------------------------- CycloNum

/// `a + bω` with rational `a`, `b` and `ω² = −1 − ω`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CycloNum {
    pub a: Rational,
    pub b: Rational,
}

impl CycloNum {
    pub fn new(a: Rational, b: Rational) -> Self {
        CycloNum { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        CycloNum::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()))
    }

    pub fn from_fracs(a: (i64, i64), b: (i64, i64)) -> Self {
        CycloNum::new(
            Rational::new(a.0.into(), a.1.into()),
            Rational::new(b.0.into(), b.1.into()),
        )
    }

    /// Galois conjugate `a + bω²`.
    pub fn conj(&self) -> Self {
        CycloNum::new(&self.a - &self.b, -self.b.clone())
    }

    /// Field norm `a² − ab + b²`, zero iff the value is zero.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Bit length of the largest numerator/denominator, a cheap size measure.
    pub fn height(&self) -> u64 {
        [self.a.numer(), self.a.denom(), self.b.numer(), self.b.denom()]
            .iter()
            .map(|x| x.bits())
            .max()
            .unwrap_or(0)
    }
}

fn cyclo_mul(x: &CycloNum, y: &CycloNum) -> CycloNum {
    let bd = &x.b * &y.b;
    CycloNum::new(&x.a * &y.a - &bd, &x.a * &y.b + &x.b * &y.a - bd)
}

fn cyclo_inv(x: &CycloNum) -> Option<CycloNum> {
    let n = x.norm();
    if n.is_zero() {
        return None;
    }
    let c = x.conj();
    Some(CycloNum::new(c.a / &n, c.b / &n))
}

macro_rules! cyclo_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $m(self, o: &CycloNum) -> CycloNum {
                let f: fn(&CycloNum, &CycloNum) -> CycloNum = $body;
                f(self, o)
            }
        }
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, o: CycloNum) -> CycloNum {
                (&self).$m(&o)
            }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, o: &CycloNum) -> CycloNum {
                (&self).$m(o)
            }
        }
    };
}

cyclo_binop!(Add, add, |x, y| CycloNum::new(&x.a + &y.a, &x.b + &y.b));
cyclo_binop!(Sub, sub, |x, y| CycloNum::new(&x.a - &y.a, &x.b - &y.b));
cyclo_binop!(Mul, mul, cyclo_mul);
cyclo_binop!(Div, div, |x, y| cyclo_mul(x, &cyclo_inv(y).expect("division by zero")));

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum::new(-self.a, -self.b)
    }
}

impl AddAssign<&CycloNum> for CycloNum {
    fn add_assign(&mut self, o: &CycloNum) {
        self.a += &o.a;
        self.b += &o.b;
    }
}

impl SubAssign<&CycloNum> for CycloNum {
    fn sub_assign(&mut self, o: &CycloNum) {
        self.a -= &o.a;
        self.b -= &o.b;
    }
}

impl MulAssign<&CycloNum> for CycloNum {
    fn mul_assign(&mut self, o: &CycloNum) {
        *self = cyclo_mul(self, o);
    }
}

impl Scalar for CycloNum {
    const EXACT: bool = true;

    fn zero() -> Self {
        CycloNum::default()
    }
    fn one() -> Self {
        CycloNum::from_ints(1, 0)
    }
    fn omega() -> Self {
        CycloNum::from_ints(0, 1)
    }
    fn from_rational(r: &Rational) -> Self {
        CycloNum::new(r.clone(), Rational::zero())
    }
    fn from_int(n: i64) -> Self {
        CycloNum::from_ints(n, 0)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        cyclo_inv(self)
    }
    fn to_complex(&self) -> Complex64 {
        let a = rat_to_f64(&self.a);
        let b = rat_to_f64(&self.b);
        Complex64::new(a - 0.5 * b, b * 3f64.sqrt() / 2.0)
    }
    fn pivot_score(&self) -> f64 {
        self.height() as f64
    }
    fn mul_int(&self, n: i64) -> Self {
        let n = BigInt::from(n);
        CycloNum::new(&self.a * &n, &self.b * &n)
    }
    fn determinant_of(m: &Matrix<Self>) -> Self {
        eisenstein_eliminate(m, None).0
    }
    fn solve_in(m: &Matrix<Self>, b: &[Self]) -> Option<Vec<Self>> {
        eisenstein_eliminate(m, Some(b)).1
    }
}

fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back for huge numerators/denominators
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900) as usize;
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn fmt_rat(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.a)),
            (true, false) => write!(f, "{}ω", fmt_rat(&self.b)),
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}ω", fmt_rat(&self.a), sign, fmt_rat(&self.b.abs()))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    a: String,
    b: String,
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloRepr { a: fmt_rat(&self.a), b: fmt_rat(&self.b) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CycloRepr::deserialize(d)?;
        let a = parse_rational(&r.a).map_err(serde::de::Error::custom)?;
        let b = parse_rational(&r.b).map_err(serde::de::Error::custom)?;
        Ok(CycloNum::new(a, b))
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    Rational::from_str(t).map_err(|e| Error::Parse { input: s.to_string(), reason: e.to_string() })
}

/// Parses `p/q`, `r/sω`, `p/q+r/sω` (also `w` or `*w` for ω).
impl FromStr for CycloNum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        let t = t.replace('ω', "w");
        let bad = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
        if t.is_empty() {
            return Err(bad("empty"));
        }
        let Some(body) = t.strip_suffix('w') else {
            return Ok(CycloNum::new(parse_rational(&t)?, Rational::zero()));
        };
        // split off the ω coefficient at the last sign that is not leading
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .last();
        let (a, b) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let b = match b {
            "" | "+" => "1",
            "-" => "-1",
            other => other.strip_prefix('+').unwrap_or(other),
        };
        Ok(CycloNum::new(parse_rational(a)?, parse_rational(b).map_err(|_| bad("bad ω coefficient"))?))
    }
}

// ----------------------------------------------------------- ComplexApprox

/// Double precision complex scalar.
#[derive(Clone, Copy, PartialEq, Debug, Default, Serialize, Deserialize)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
}

impl ComplexApprox {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexApprox { re, im }
    }
    pub fn c(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
    pub fn from_polar(r: f64, theta: f64) -> Self {
        Complex64::from_polar(r, theta).into()
    }
    pub fn abs(self) -> f64 {
        self.c().norm()
    }
    pub fn sqrt(self) -> Self {
        self.c().sqrt().into()
    }
}

impl From<Complex64> for ComplexApprox {
    fn from(z: Complex64) -> Self {
        ComplexApprox::new(z.re, z.im)
    }
}

impl From<&CycloNum> for ComplexApprox {
    fn from(x: &CycloNum) -> Self {
        x.to_complex().into()
    }
}

macro_rules! complex_binop {
    ($tr:ident, $m:ident, $as_tr:ident, $as_m:ident) => {
        impl $tr for ComplexApprox {
            type Output = ComplexApprox;
            fn $m(self, o: ComplexApprox) -> ComplexApprox {
                self.c().$m(o.c()).into()
            }
        }
        impl $tr<&ComplexApprox> for ComplexApprox {
            type Output = ComplexApprox;
            fn $m(self, o: &ComplexApprox) -> ComplexApprox {
                self.c().$m(o.c()).into()
            }
        }
        impl $as_tr<&ComplexApprox> for ComplexApprox {
            fn $as_m(&mut self, o: &ComplexApprox) {
                *self = self.c().$m(o.c()).into();
            }
        }
    };
}

complex_binop!(Add, add, AddAssign, add_assign);
complex_binop!(Sub, sub, SubAssign, sub_assign);
complex_binop!(Mul, mul, MulAssign, mul_assign);

impl Div for ComplexApprox {
    type Output = ComplexApprox;
    fn div(self, o: ComplexApprox) -> ComplexApprox {
        (self.c() / o.c()).into()
    }
}

impl Div<&ComplexApprox> for ComplexApprox {
    type Output = ComplexApprox;
    fn div(self, o: &ComplexApprox) -> ComplexApprox {
        (self.c() / o.c()).into()
    }
}

impl Neg for ComplexApprox {
    type Output = ComplexApprox;
    fn neg(self) -> ComplexApprox {
        ComplexApprox::new(-self.re, -self.im)
    }
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im)
    }
}

/// Parses `re`, `re+imi`, `re-imi` or `imi`.
impl FromStr for ComplexApprox {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse { input: s.to_string(), reason: "expected re+imi".into() };
        let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
        let Some(body) = t.strip_suffix('i') else {
            return Ok(ComplexApprox::new(num(&t)?, 0.0));
        };
        let split = body
            .char_indices()
            .filter(|&(i, c)| {
                i > 0 && (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E')
            })
            .map(|(i, _)| i)
            .last();
        let (re, im) = match split {
            Some(i) => (num(&body[..i])?, &body[i..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => num(x)?,
        };
        Ok(ComplexApprox::new(re, im))
    }
}

impl Scalar for ComplexApprox {
    const EXACT: bool = false;

    fn zero() -> Self {
        ComplexApprox::new(0.0, 0.0)
    }
    fn one() -> Self {
        ComplexApprox::new(1.0, 0.0)
    }
    fn omega() -> Self {
        ComplexApprox::new(-0.5, 3f64.sqrt() / 2.0)
    }
    fn from_rational(r: &Rational) -> Self {
        ComplexApprox::new(rat_to_f64(r), 0.0)
    }
    fn from_int(n: i64) -> Self {
        ComplexApprox::new(n as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.abs() < FLOAT_ZERO
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.c().inv().into())
        }
    }
    fn to_complex(&self) -> Complex64 {
        self.c()
    }
    fn pivot_score(&self) -> f64 {
        -self.abs()
    }
    fn powi(&self, e: i64) -> Self {
        self.c().powi(e as i32).into()
    }
}

// ------------------------------------------------------------ functions

/// `[x] = x − 1/x`.
pub fn bracket<S: Scalar>(x: &S) -> Result<S> {
    let inv = x.inv().ok_or_else(|| Error::Domain("bracket of zero".into()))?;
    Ok(x.clone() - inv)
}

/// `k(a,b) = [q/(ab)][qb/a]` at the critical point `q = ω`.
pub fn kfunc<S: Scalar>(a: &S, b: &S) -> Result<S> {
    kfunc_q(&S::omega(), a, b)
}

/// `k(a,b)` for an explicit deformation parameter `q`.
pub fn kfunc_q<S: Scalar>(q: &S, a: &S, b: &S) -> Result<S> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("kfunc of zero".into()));
    }
    let ab = a.clone() * b;
    let x = q.clone() / &ab;
    let y = q.clone() * b / a;
    Ok(bracket(&x)? * bracket(&y)?)
}

/// `c_L = (−1)^L i√3/2 = (−1)^L (ω + 1/2)`.
pub fn c_const<S: Scalar>(size: usize) -> S {
    let half = S::from_rational(&Rational::new(1.into(), 2.into()));
    let c = S::omega() + half;
    if size % 2 == 0 {
        c
    } else {
        -c
    }
}

/// A named acceptance test on a whole candidate list.
pub struct Predicate<'a> {
    pub name: String,
    pub holds: Box<dyn Fn(&[CycloNum]) -> bool + Send + Sync + 'a>,
}

impl<'a> Predicate<'a> {
    pub fn new(name: impl Into<String>, f: impl Fn(&[CycloNum]) -> bool + Send + Sync + 'a) -> Self {
        Predicate { name: name.into(), holds: Box::new(f) }
    }
}

/// Number of candidate lists drawn before giving up.
pub const SAMPLE_BUDGET: usize = 2000;

/// Deterministic nonzero values `a + bω` with small numerators and denominators,
/// redrawn until every predicate holds.
pub fn sample_generic(seed: u64, count: usize, forbidden: &[Predicate<'_>]) -> Result<Vec<CycloNum>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_failure = String::from("none");
    for _ in 0..SAMPLE_BUDGET {
        let vals: Vec<CycloNum> = (0..count).map(|_| draw(&mut rng)).collect();
        match forbidden.iter().find(|p| !(p.holds)(&vals)) {
            None => return Ok(vals),
            Some(p) => last_failure = p.name.clone(),
        }
    }
    Err(Error::Sampling { predicate: last_failure, budget: SAMPLE_BUDGET })
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let p: i64 = rng.gen_range(-6..=6);
    let q: i64 = rng.gen_range(1..=4);
    Rational::new(p.into(), q.into())
}

fn draw(rng: &mut ChaCha8Rng) -> CycloNum {
    loop {
        let a = small_rational(rng);
        let b = if rng.gen_bool(0.5) { small_rational(rng) } else { Rational::zero() };
        let x = CycloNum::new(a, b);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Image of an exact value in any backend.
pub fn embed<S: Scalar>(x: &CycloNum) -> S {
    S::from_rational(&x.a) + S::from_rational(&x.b) * S::omega()
}

/// True when `x` is a sixth root of unity, i.e. a power of `−ω`.
pub fn is_root_of_unity(x: &CycloNum) -> bool {
    let x3 = x.clone() * x * x;
    x3 == CycloNum::one() || x3 == -CycloNum::one()
}

/// Float sample near the unit circle region, for generic-q and float-only checks.
pub fn sample_complex(seed: u64, count: usize) -> Vec<ComplexApprox> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| ComplexApprox::from_polar(rng.gen_range(0.6..1.6), rng.gen_range(-3.0..3.0)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w() -> CycloNum {
        CycloNum::omega()
    }

    #[test]
    fn omega_is_cube_root() {
        let w = w();
        assert_eq!(w.clone() * &w * &w, CycloNum::one());
        assert_eq!(w.clone() * &w, CycloNum::from_ints(-1, -1));
        let c = ComplexApprox::omega();
        assert!((c * c * c).close_to(&ComplexApprox::one(), 1e-15));
    }

    #[test]
    fn bracket_examples() {
        assert!(bracket(&CycloNum::one()).unwrap().is_zero());
        assert_eq!(bracket(&w()).unwrap(), CycloNum::from_ints(1, 2));
        assert_eq!(bracket(&CycloNum::from_int(2)).unwrap(), CycloNum::from_fracs((3, 2), (0, 1)));
        assert!(matches!(bracket(&CycloNum::zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn kfunc_is_not_symmetric_under_plain_inversion() {
        // k(a, b) = k(1/b, 1/a) fails: at a = b = ω the sides are 3 and 0
        assert_eq!(kfunc(&w(), &w()).unwrap(), CycloNum::from_int(3));
        assert!(kfunc(&w().inv().unwrap(), &w().inv().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn kfunc_examples() {
        let one = CycloNum::one();
        assert_eq!(kfunc(&one, &one).unwrap(), CycloNum::from_int(-3));
        let b = CycloNum::from_fracs((2, 3), (-1, 2));
        assert!(kfunc(&(w() * &b), &b).unwrap().is_zero());
        // k(2,1) = [ω/2][ω/2] and ω/2 − 2ω² = 2 + 5ω/2, squared = −9/4 + 15ω/4
        assert_eq!(
            kfunc(&CycloNum::from_int(2), &one).unwrap(),
            CycloNum::from_fracs((-9, 4), (15, 4))
        );
    }

    #[test]
    fn c_const_values() {
        assert_eq!(c_const::<CycloNum>(2), CycloNum::from_fracs((1, 2), (1, 1)));
        assert_eq!(c_const::<CycloNum>(3), CycloNum::from_fracs((-1, 2), (-1, 1)));
        for l in 1..6 {
            let c = c_const::<CycloNum>(l);
            assert_eq!(c.clone() * &c, CycloNum::from_fracs((-3, 4), (0, 1)));
        }
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["3/2", "-1/3ω", "1/2+5/3ω", "2-ω", "-4/5-7ω"] {
            let x: CycloNum = s.parse().unwrap();
            let y: CycloNum = x.to_string().parse().unwrap();
            assert_eq!(x, y, "{s}");
        }
        assert_eq!("1+2*w".parse::<CycloNum>().unwrap(), CycloNum::from_ints(1, 2));
        assert!("x/2".parse::<CycloNum>().is_err());
        let c: ComplexApprox = "1.5-2e-3i".parse().unwrap();
        assert_eq!(c, ComplexApprox::new(1.5, -2e-3));
        assert_eq!("-i".parse::<ComplexApprox>().unwrap(), ComplexApprox::new(0.0, -1.0));
    }

    #[test]
    fn json_forms() {
        let x = CycloNum::from_fracs((1, 2), (-3, 1));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"1/2","b":"-3"}"#);
        assert_eq!(serde_json::from_str::<CycloNum>(&s).unwrap(), x);
        let c = ComplexApprox::new(0.5, -1.0);
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"re":0.5,"im":-1.0}"#);
    }

    #[test]
    fn sampling_is_deterministic_and_rejects() {
        let a = sample_generic(1, 3, &[]).unwrap();
        assert_eq!(a, sample_generic(1, 3, &[]).unwrap());
        assert!(a.iter().all(|x| !x.is_zero()));
        let first = a.clone();
        let not_first = Predicate::new("differs from first draw", move |v: &[CycloNum]| v != first.as_slice());
        let b = sample_generic(1, 3, &[not_first]).unwrap();
        assert_ne!(a, b);
        let never = Predicate::new("impossible", |_: &[CycloNum]| false);
        match sample_generic(1, 1, &[never]) {
            Err(Error::Sampling { predicate, .. }) => assert_eq!(predicate, "impossible"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sixth_roots() {
        assert!(is_root_of_unity(&w()));
        assert!(is_root_of_unity(&-w()));
        assert!(!is_root_of_unity(&CycloNum::from_int(2)));
    }

    fn cyclo() -> impl Strategy<Value = CycloNum> {
        (-20i64..20, 1i64..9, -20i64..20, 1i64..9).prop_map(|(a, b, c, d)| CycloNum::from_fracs((a, b), (c, d)))
    }

    fn nonzero() -> impl Strategy<Value = CycloNum> {
        cyclo().prop_filter("nonzero", |x| !x.is_zero())
    }

    proptest! {
        #[test]
        fn inverse_cancels(x in nonzero(), y in cyclo()) {
            prop_assert_eq!((x.clone() * &y) * x.inv().unwrap(), y);
        }

        #[test]
        fn embedding_is_homomorphism(x in cyclo(), y in nonzero()) {
            let (cx, cy) = (ComplexApprox::from(&x), ComplexApprox::from(&y));
            let pairs = [
                (ComplexApprox::from(&(x.clone() + &y)), cx + cy),
                (ComplexApprox::from(&(x.clone() - &y)), cx - cy),
                (ComplexApprox::from(&(x.clone() * &y)), cx * cy),
                (ComplexApprox::from(&(x.clone() / &y)), cx / cy),
            ];
            for (exact, float) in pairs {
                prop_assert!(exact.close_to(&float, 1e-12));
            }
        }

        #[test]
        fn bracket_is_odd(x in nonzero()) {
            prop_assert_eq!(bracket(&x.inv().unwrap()).unwrap(), -bracket(&x).unwrap());
        }

        #[test]
        fn kfunc_double_inversion(a in nonzero(), b in nonzero()) {
            // both bracket arguments invert, so the two sign flips cancel
            let a_dual = (w() * &a).inv().unwrap();
            prop_assert_eq!(kfunc(&a, &b).unwrap(), kfunc(&a_dual, &b.inv().unwrap()).unwrap());
        }

        #[test]
        fn powers_agree(x in nonzero(), e in -5i64..6) {
            let mut acc = CycloNum::one();
            for _ in 0..e.unsigned_abs() { acc *= &x; }
            if e < 0 { acc = acc.inv().unwrap(); }
            prop_assert_eq!(x.powi(e), acc);
        }
    }
}
