//! Scalar abstraction shared by the float, exact-rational and forward-mode
//! differentiation paths.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arbitrary-precision rational.
pub type Q = BigRational;

/// Field element usable by every generic routine in the crate.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n) / Self::from_i64(d)
    }
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    /// Square root; `None` for negative input, or in exact mode when the
    /// value is not a perfect square.
    fn sqrt(&self) -> Option<Self>;

    /// Zero test that is exact in exact mode and tolerance-based otherwise.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_f64().abs() <= tol
        }
    }

    fn powi(&self, n: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..n {
            r = r * self.clone();
        }
        r
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    /// JSON rendering: numbers for floats, `"p/q"` strings for rationals.
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Option<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        n as f64 / d as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(f64::sqrt(*self))
        }
    }
    fn powi(&self, n: u32) -> Self {
        f64::powi(*self, n as i32)
    }
    fn to_json(&self) -> serde_json::Value {
        round_f64(*self)
    }
    fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::Number(n) => n.as_f64(),
            serde_json::Value::String(s) => parse_rational(s).map(|r| Scalar::to_f64(&r)),
            _ => None,
        }
    }
}

fn bigint_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

impl Scalar for Q {
    const EXACT: bool = true;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        Q::from_integer(BigInt::from(n))
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Q::new(BigInt::from(n), BigInt::from(d))
    }
    fn to_f64(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => {
                // Shift both parts down to a representable range.
                let bits = self.numer().bits().max(self.denom().bits()) as i64 - 900;
                let shift = bits.max(0) as usize;
                let n = (self.numer() >> shift).to_f64().unwrap_or(0.0);
                let d = (self.denom() >> shift).to_f64().unwrap_or(1.0);
                n / d
            }
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn sqrt(&self) -> Option<Self> {
        let n = bigint_sqrt_exact(self.numer())?;
        let d = bigint_sqrt_exact(self.denom())?;
        Some(Q::new(n, d))
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "num": self.numer().to_string(),
            "den": self.denom().to_string(),
            "decimal": round_f64(Scalar::to_f64(self)),
        })
    }
    fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Object(o) => {
                let part = |k: &str| -> Option<BigInt> {
                    match o.get(k)? {
                        serde_json::Value::String(s) => s.parse().ok(),
                        serde_json::Value::Number(n) => n.to_string().parse().ok(),
                        _ => None,
                    }
                };
                let d = part("den")?;
                if d.is_zero() {
                    return None;
                }
                Some(Q::new(part("num")?, d))
            }
            serde_json::Value::Number(n) => parse_rational(&n.to_string()),
            _ => None,
        }
    }
}

/// Forward-mode dual number `v + d·ε` with `ε² = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<S> {
    pub v: S,
    pub d: S,
}

impl<S: Scalar> Dual<S> {
    pub fn new(v: S, d: S) -> Self {
        Dual { v, d }
    }
    pub fn constant(v: S) -> Self {
        Dual { v, d: S::zero() }
    }
    pub fn variable(v: S) -> Self {
        Dual { v, d: S::one() }
    }
}

impl<S: Scalar> PartialOrd for Dual<S> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.v.partial_cmp(&other.v)
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual::new(self.v + o.v, self.d + o.d)
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual::new(self.v - o.v, self.d - o.d)
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = self.v.clone() * o.d + self.d * o.v.clone();
        Dual::new(self.v * o.v, d)
    }
}

impl<S: Scalar> Div for Dual<S> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let v = self.v.clone() / o.v.clone();
        let d = (self.d - v.clone() * o.d) / o.v;
        Dual::new(v, d)
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.v, -self.d)
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    const EXACT: bool = S::EXACT;
    fn zero() -> Self {
        Dual::constant(S::zero())
    }
    fn one() -> Self {
        Dual::constant(S::one())
    }
    fn from_i64(n: i64) -> Self {
        Dual::constant(S::from_i64(n))
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        Dual::constant(S::from_ratio(n, d))
    }
    fn to_f64(&self) -> f64 {
        self.v.to_f64()
    }
    fn is_zero(&self) -> bool {
        self.v.is_zero() && self.d.is_zero()
    }
    fn abs(&self) -> Self {
        if self.v < S::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn sqrt(&self) -> Option<Self> {
        let s = self.v.sqrt()?;
        if s.is_zero() {
            return if self.d.is_zero() { Some(Self::zero()) } else { None };
        }
        let d = self.d.clone() / (S::from_i64(2) * s.clone());
        Some(Dual::new(s, d))
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "value": self.v.to_json(), "derivative": self.d.to_json() })
    }
    fn from_json(v: &serde_json::Value) -> Option<Self> {
        S::from_json(v).map(Dual::constant)
    }
}

/// JSON number with 13 significant digits, so output is stable across
/// platforms; non-finite values become strings.
pub fn round_f64(x: f64) -> serde_json::Value {
    if !x.is_finite() {
        return serde_json::Value::String(x.to_string());
    }
    let r: f64 = format!("{x:.12e}").parse().unwrap_or(x);
    serde_json::json!(if r == 0.0 { 0.0 } else { r })
}

/// Convenience constructor for exact rationals.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Best rational approximation with bounded denominator (continued fractions).
/// Used only for display of float constants.
pub fn approx_rational(x: f64, max_den: i64) -> (i64, i64) {
    if !x.is_finite() {
        return (0, 1);
    }
    let sign = if x < 0.0 { -1 } else { 1 };
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..64 {
        let a = v.floor();
        if a > i64::MAX as f64 / 4.0 {
            break;
        }
        let a = a as i64;
        let p2 = a.saturating_mul(p1).saturating_add(p0);
        let q2 = a.saturating_mul(q1).saturating_add(q0);
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a as f64;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return (0, 1);
    }
    (sign * p1, q1)
}

/// Parses `"p/q"`, an integer, or a decimal into an exact rational.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(Q::from_integer(n));
    }
    let (int, frac) = s.split_once('.')?;
    let neg = int.starts_with('-');
    let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
    let n: BigInt = digits.parse().ok()?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let r = Q::new(n, d);
    Some(if neg { -r } else { r })
}
