//! Scalars used throughout the crate.
//!
//! Two scalar families are needed. [`Real`] is additive and carries the
//! log-domain quantities (quadratic forms, additive maps, coset constants).
//! [`Value`] is multiplicative and carries function values. Both have an exact
//! variant and an approximate floating variant; exact values stay exact under
//! every operation that does not mix in an approximate operand.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// Exact rational number.
pub type Rational = Ratio<i128>;

/// Default absolute tolerance for approximate comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Denominator cap used when an approximate phase is converted to a
/// rational fraction of a turn.
pub const MAX_TURN_DENOMINATOR: i128 = 1_000_000;

pub fn rat(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

/// Reduces a turn into `[0, 1)`.
pub fn wrap_turn(t: Rational) -> Rational {
    let f = t.floor();
    t - f
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().ok()?;
            let d: i128 = d.trim().parse().ok()?;
            if d == 0 {
                None
            } else {
                Some(rat(n, d))
            }
        }
        None => s.parse::<i128>().ok().map(int),
    }
}

/// Rounds to 12 significant digits so printed output is diff-stable.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.11e}", x).parse().unwrap_or(x)
}

/// Best rational approximation with a bounded denominator (continued fractions).
pub fn approximate_rational(x: f64, max_den: i128) -> Rational {
    if !x.is_finite() {
        return Rational::zero();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut frac = x;
    loop {
        let a = frac.floor();
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let rem = frac - a;
        if rem.abs() < 1e-15 || q1 == 0 {
            break;
        }
        frac = 1.0 / rem;
        if !frac.is_finite() || frac.abs() > 1e15 {
            break;
        }
    }
    if q1 == 0 {
        return int(x.round() as i128);
    }
    rat(p1, q1)
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i128 {
    values
        .into_iter()
        .fold(1i128, |acc, q| acc.lcm(q.denom()))
}

/// A real number, exact or approximate.
#[derive(Clone, Debug)]
pub enum Real {
    Exact(Rational),
    Approx(f64),
}

impl Real {
    pub fn zero() -> Self {
        Real::Exact(Rational::zero())
    }

    pub fn from_int(n: i128) -> Self {
        Real::Exact(int(n))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Real::Exact(q) => Some(q),
            Real::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(q) => rational_to_f64(q),
            Real::Approx(x) => *x,
        }
    }

    pub fn scale(&self, q: &Rational) -> Real {
        match self {
            Real::Exact(a) => Real::Exact(a * q),
            Real::Approx(x) => Real::Approx(x * rational_to_f64(q)),
        }
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        match self {
            Real::Exact(q) => q.is_zero(),
            Real::Approx(x) => x.abs() <= tol,
        }
    }

    /// Exact equality when both sides are exact, absolute tolerance otherwise.
    pub fn close_to(&self, other: &Real, tol: f64) -> bool {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tol,
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a == b,
            (Real::Approx(a), Real::Approx(b)) => a == b,
            _ => false,
        }
    }
}

impl From<Rational> for Real {
    fn from(q: Rational) -> Self {
        Real::Exact(q)
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real::Approx(x)
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                match (self, rhs) {
                    (Real::Exact(a), Real::Exact(b)) => Real::Exact(a $op b),
                    _ => Real::Approx(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
    };
}

real_binop!(Add, add, +);
real_binop!(Sub, sub, -);
real_binop!(Mul, mul, *);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        match self {
            Real::Exact(q) => Real::Exact(-q),
            Real::Approx(x) => Real::Approx(-x),
        }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(q) => f.write_str(&format_rational(q)),
            Real::Approx(x) => write!(f, "{}", round_sig(*x)),
        }
    }
}

/// Exact reals serialize as `"p/q"` strings, approximate ones as numbers.
impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Real::Exact(q) => s.serialize_str(&format_rational(q)),
            Real::Approx(x) => s.serialize_f64(round_sig(*x)),
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        real_from_json(&v).map_err(de::Error::custom)
    }
}

pub fn real_from_json(v: &serde_json::Value) -> Result<Real, String> {
    match v {
        serde_json::Value::String(s) => parse_rational(s)
            .map(Real::Exact)
            .ok_or_else(|| format!("invalid rational literal {s:?}")),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Real::Exact(int(i as i128)))
            } else {
                n.as_f64()
                    .map(Real::Approx)
                    .ok_or_else(|| "invalid number".to_string())
            }
        }
        _ => Err(format!("expected a real number, got {v}")),
    }
}

/// A complex function value.
///
/// Exact nonzero values are kept in polar form `exp(log_modulus) * e^{2πi·turn}`
/// with rational `log_modulus` and `turn ∈ [0, 1)`; products are then exact sums.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Zero,
    Polar {
        log_modulus: Rational,
        turn: Rational,
    },
    Approx(Complex64),
}

impl Value {
    pub fn one() -> Self {
        Value::Polar {
            log_modulus: Rational::zero(),
            turn: Rational::zero(),
        }
    }

    pub fn sign(negative: bool) -> Self {
        Value::Polar {
            log_modulus: Rational::zero(),
            turn: if negative { rat(1, 2) } else { Rational::zero() },
        }
    }

    pub fn polar(log_modulus: Rational, turn: Rational) -> Self {
        Value::Polar {
            log_modulus,
            turn: wrap_turn(turn),
        }
    }

    /// `exp(log) · e^{2πi·turn}`, exact if `log` is.
    pub fn from_log_turn(log: &Real, turn: &Rational) -> Self {
        match log {
            Real::Exact(q) => Value::polar(*q, *turn),
            Real::Approx(x) => {
                let angle = 2.0 * std::f64::consts::PI * rational_to_f64(turn);
                Value::Approx(Complex64::from_polar(x.exp(), angle))
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Value::Approx(_))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Value::Zero => Complex64::new(0.0, 0.0),
            Value::Polar { log_modulus, turn } => {
                let angle = 2.0 * std::f64::consts::PI * rational_to_f64(turn);
                Complex64::from_polar(rational_to_f64(log_modulus).exp(), angle)
            }
            Value::Approx(z) => *z,
        }
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        match self {
            Value::Zero => true,
            Value::Polar { .. } => false,
            Value::Approx(z) => z.norm() <= tol,
        }
    }

    pub fn conj(&self) -> Value {
        match self {
            Value::Zero => Value::Zero,
            Value::Polar { log_modulus, turn } => Value::polar(*log_modulus, -turn),
            Value::Approx(z) => Value::Approx(z.conj()),
        }
    }

    pub fn mul(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Zero, _) | (_, Value::Zero) => Value::Zero,
            (
                Value::Polar {
                    log_modulus: la,
                    turn: ta,
                },
                Value::Polar {
                    log_modulus: lb,
                    turn: tb,
                },
            ) => Value::polar(la + lb, ta + tb),
            _ => Value::Approx(self.to_complex() * other.to_complex()),
        }
    }

    /// `log |v|`; `None` for zero.
    pub fn log_modulus(&self) -> Option<Real> {
        match self {
            Value::Zero => None,
            Value::Polar { log_modulus, .. } => Some(Real::Exact(*log_modulus)),
            Value::Approx(z) => {
                let n = z.norm();
                (n > 0.0).then(|| Real::Approx(n.ln()))
            }
        }
    }

    /// Phase as a fraction of a turn; approximate phases are rounded to a
    /// rational with denominator at most [`MAX_TURN_DENOMINATOR`].
    pub fn turn(&self) -> Option<Rational> {
        match self {
            Value::Zero => None,
            Value::Polar { turn, .. } => Some(*turn),
            Value::Approx(z) => {
                if z.norm() == 0.0 {
                    return None;
                }
                let t = z.arg() / (2.0 * std::f64::consts::PI);
                Some(wrap_turn(approximate_rational(t, MAX_TURN_DENOMINATOR)))
            }
        }
    }

    /// Exact equality when both are exact, `|a-b| <= tol` otherwise.
    pub fn close_to(&self, other: &Value, tol: f64) -> bool {
        if self.is_exact() && other.is_exact() {
            return self == other;
        }
        (self.to_complex() - other.to_complex()).norm() <= tol
    }

    /// `Some(false)` for +1, `Some(true)` for -1, `None` otherwise.
    pub fn as_sign(&self, tol: f64) -> Option<bool> {
        match self {
            Value::Polar { log_modulus, turn } if log_modulus.is_zero() => {
                if turn.is_zero() {
                    Some(false)
                } else if *turn == rat(1, 2) {
                    Some(true)
                } else {
                    None
                }
            }
            Value::Approx(z) => {
                if (z - Complex64::new(1.0, 0.0)).norm() <= tol {
                    Some(false)
                } else if (z + Complex64::new(1.0, 0.0)).norm() <= tol {
                    Some(true)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Value::Zero => json!(0),
            Value::Polar { log_modulus, turn } if log_modulus.is_zero() && turn.is_zero() => {
                json!(1)
            }
            Value::Polar { log_modulus, turn } if log_modulus.is_zero() && *turn == rat(1, 2) => {
                json!(-1)
            }
            Value::Polar { log_modulus, turn } => json!({
                "log": format_rational(log_modulus),
                "turn": format_rational(turn),
            }),
            Value::Approx(z) if z.im == 0.0 => json!(round_sig(z.re)),
            Value::Approx(z) => json!([round_sig(z.re), round_sig(z.im)]),
        }
    }

    /// Accepts `0`, `±1` (exact), other numbers (approximate reals),
    /// `[re, im]` pairs, and exact `{"log": "p/q", "turn": "p/q"}` objects.
    pub fn from_json(v: &serde_json::Value) -> Result<Value, String> {
        use serde_json::Value as J;
        match v {
            J::Number(n) => match n.as_i64() {
                Some(0) => Ok(Value::Zero),
                Some(1) => Ok(Value::one()),
                Some(-1) => Ok(Value::sign(true)),
                _ => n
                    .as_f64()
                    .map(|x| Value::Approx(Complex64::new(x, 0.0)))
                    .ok_or_else(|| "invalid number".into()),
            },
            J::Array(parts) if parts.len() == 2 => {
                let re = parts[0].as_f64().ok_or("complex re must be a number")?;
                let im = parts[1].as_f64().ok_or("complex im must be a number")?;
                Ok(Value::Approx(Complex64::new(re, im)))
            }
            J::Object(map) => {
                let field = |k: &str| -> Result<Rational, String> {
                    match map.get(k) {
                        None => Ok(Rational::zero()),
                        Some(J::String(s)) => {
                            parse_rational(s).ok_or_else(|| format!("invalid rational {s:?}"))
                        }
                        Some(J::Number(n)) => n
                            .as_i64()
                            .map(|i| int(i as i128))
                            .ok_or_else(|| format!("{k} must be an integer or \"p/q\"")),
                        Some(other) => Err(format!("invalid {k}: {other}")),
                    }
                };
                Ok(Value::polar(field("log")?, field("turn")?))
            }
            other => Err(format!("unsupported value encoding: {other}")),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Zero => f.write_str("0"),
            Value::Polar { log_modulus, turn } => write!(
                f,
                "exp({})·e^(2πi·{})",
                format_rational(log_modulus),
                format_rational(turn)
            ),
            Value::Approx(z) => write!(f, "{}{:+}i", round_sig(z.re), round_sig(z.im)),
        }
    }
}

/// Turns compared modulo 1; exact when `exact`, else within `tol`.
pub fn turns_close(a: &Rational, b: &Rational, exact: bool, tol: f64) -> bool {
    let d = wrap_turn(a - b);
    if exact {
        d.is_zero()
    } else {
        let x = rational_to_f64(&d);
        x.min(1.0 - x) <= tol
    }
}

pub fn abs_rational(q: &Rational) -> Rational {
    q.abs()
}

pub fn is_one(q: &Rational) -> bool {
    q.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_turn_lands_in_unit_interval() {
        assert_eq!(wrap_turn(rat(-1, 4)), rat(3, 4));
        assert_eq!(wrap_turn(rat(9, 4)), rat(1, 4));
        assert_eq!(wrap_turn(int(3)), int(0));
    }

    #[test]
    fn polar_products_are_exact() {
        let i = Value::polar(int(0), rat(1, 4));
        assert_eq!(i.mul(&i), Value::sign(true));
        assert_eq!(i.mul(&i.conj()), Value::one());
        assert_eq!(Value::Zero.mul(&i), Value::Zero);
    }

    #[test]
    fn value_json_round_trip_keeps_exactness() {
        for v in [
            Value::Zero,
            Value::one(),
            Value::sign(true),
            Value::polar(rat(-3, 2), rat(1, 8)),
        ] {
            assert_eq!(Value::from_json(&v.to_json()).unwrap(), v);
        }
        let z = Value::from_json(&serde_json::json!([0.5, -0.25])).unwrap();
        assert_eq!(z.to_complex(), Complex64::new(0.5, -0.25));
    }

    #[test]
    fn continued_fraction_recovers_simple_fractions() {
        assert_eq!(approximate_rational(1.0 / 3.0, 1000), rat(1, 3));
        assert_eq!(approximate_rational(0.125, 1000), rat(1, 8));
        assert_eq!(approximate_rational(-0.75, 1000), rat(-3, 4));
    }

    #[test]
    fn round_sig_keeps_twelve_digits() {
        assert_eq!(round_sig(std::f64::consts::E), 2.71828182846);
        assert_eq!(round_sig(0.0), 0.0);
    }

    #[test]
    fn mixed_real_arithmetic_degrades_to_approx() {
        let a = Real::Exact(rat(1, 2));
        let b = Real::Approx(0.25);
        assert!(matches!(&a + &a, Real::Exact(_)));
        assert!(matches!(&a + &b, Real::Approx(x) if (x - 0.75).abs() < 1e-15));
        assert!(a.close_to(&Real::Approx(0.5), 1e-12));
    }
}
