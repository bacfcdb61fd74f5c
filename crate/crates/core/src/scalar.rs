//! Scalar abstraction shared by every algorithm in the crate.
//!
//! Exact rationals compare with zero tolerance; floats use an absolute/relative
//! tolerance so that density ties and zero-connectivity tests stay meaningful.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Number type an oracle evaluates to.
pub trait Scalar: Clone + Debug + Display + PartialOrd + Num + Signed + Sum + Send + Sync + 'static {
    /// True when arithmetic is exact and comparisons need no tolerance.
    const EXACT: bool;

    /// Name used in instance files (`"rational"` or `"float"`).
    const MODE: &'static str;

    /// Comparison slack. Zero for exact types.
    fn tolerance() -> Self;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// Lossy conversion used by float-only code paths (h compositions, fictitious play).
    fn to_f64(&self) -> f64;

    /// `None` for non-finite input or when an exact type cannot represent it.
    fn from_f64(v: f64) -> Option<Self>;

    /// Parses `"p/q"`, an integer, or a decimal literal.
    fn parse_value(s: &str) -> Option<Self>;

    /// Canonical JSON representation: `"p/q"` strings for rationals, numbers for floats.
    fn to_json(&self) -> serde_json::Value;

    fn approx_eq(&self, other: &Self) -> bool {
        if Self::EXACT {
            return self == other;
        }
        let scale = [Self::one(), self.abs(), other.abs()]
            .into_iter()
            .fold(Self::zero(), |m, v| if v > m { v } else { m });
        (self.clone() - other.clone()).abs() <= Self::tolerance() * scale
    }

    /// `self <= other` up to tolerance.
    fn approx_le(&self, other: &Self) -> bool {
        self <= other || self.approx_eq(other)
    }

    /// `self < other` and not within tolerance.
    fn definitely_lt(&self, other: &Self) -> bool {
        self < other && !self.approx_eq(other)
    }

    /// Absolute-tolerance zero test.
    fn is_negligible(&self) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs() <= Self::tolerance()
        }
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

macro_rules! impl_float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;
            const MODE: &'static str = "float";

            fn tolerance() -> Self {
                $tol
            }

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn from_f64(v: f64) -> Option<Self> {
                v.is_finite().then_some(v as $t)
            }

            fn parse_value(s: &str) -> Option<Self> {
                let s = s.trim();
                if let Some((p, q)) = s.split_once('/') {
                    let p: $t = p.trim().parse().ok()?;
                    let q: $t = q.trim().parse().ok()?;
                    return (q != 0.0).then(|| p / q);
                }
                s.parse::<$t>().ok().filter(|v| v.is_finite())
            }

            fn to_json(&self) -> serde_json::Value {
                serde_json::Number::from_f64(*self as f64)
                    .map(serde_json::Value::Number)
                    .unwrap_or(serde_json::Value::Null)
            }
        }
    };
}

impl_float_scalar!(f64, 1e-9);
impl_float_scalar!(f32, 1e-5);

impl Scalar for BigRational {
    const EXACT: bool = true;
    const MODE: &'static str = "rational";

    fn tolerance() -> Self {
        Self::zero()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(v: f64) -> Option<Self> {
        <BigRational as FromPrimitive>::from_f64(v)
    }

    fn parse_value(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            return (!q.is_zero()).then(|| BigRational::new(p, q));
        }
        parse_decimal(s)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

/// Exact parse of `[-]digits[.digits][e[+-]digits]`.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let mut num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut den = BigInt::one();
    if scale >= 0 {
        num *= num_traits::pow(ten, scale as usize);
    } else {
        den = num_traits::pow(ten, (-scale) as usize);
    }
    if neg {
        num = -num;
    }
    Some(BigRational::new(num, den))
}

/// `num / den` for `T`, convenience for tests and fixtures.
pub fn ratio<T: Scalar>(num: i64, den: i64) -> T {
    T::from_ratio(num, den)
}

/// Maximum of a non-empty iterator under `PartialOrd`.
pub(crate) fn max_of<T: Scalar>(it: impl IntoIterator<Item = T>) -> Option<T> {
    it.into_iter().fold(None, |best, v| match best {
        Some(b) if b >= v => Some(b),
        _ => Some(v),
    })
}

/// Minimum of a non-empty iterator under `PartialOrd`.
pub(crate) fn min_of<T: Scalar>(it: impl IntoIterator<Item = T>) -> Option<T> {
    it.into_iter().fold(None, |best, v| match best {
        Some(b) if b <= v => Some(b),
        _ => Some(v),
    })
}
