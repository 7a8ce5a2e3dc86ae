//! ℓp exponents and exactly accumulated p-norms.
//!
//! For integer p the p-th powers are summed in exact rational arithmetic and
//! only the final root is rounded (to the nearest `f64`). For p = ∞ the maximum
//! is exact. Non-integer p falls back to `f64` accumulation.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::grade::{format_rational, parse_rational, rational_to_f64, Rational};
use crate::{Error, Result};

/// An exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PExponent {
    Finite(Rational),
    Infinity,
}

impl PExponent {
    pub fn new(p: Rational) -> Result<PExponent> {
        if p < Rational::one() {
            return Err(Error::Invalid(format!("p = {} is below 1", format_rational(&p))));
        }
        Ok(PExponent::Finite(p))
    }

    pub fn integer(p: u32) -> PExponent {
        assert!(p >= 1, "p must be at least 1");
        PExponent::Finite(Rational::from_integer(p.into()))
    }

    /// Accepts `inf`, `infinity`, decimals and fractions.
    pub fn parse(s: &str) -> Result<PExponent> {
        let t = s.trim().to_ascii_lowercase();
        if t == "inf" || t == "infinity" || t == "∞" {
            return Ok(PExponent::Infinity);
        }
        let r = parse_rational(&t).ok_or_else(|| Error::Invalid(format!("cannot parse p = {s:?}")))?;
        PExponent::new(r)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PExponent::Infinity)
    }

    /// `Some(p)` when p is a finite integer that fits in `u32`.
    pub fn as_integer(&self) -> Option<u32> {
        match self {
            PExponent::Finite(r) if r.is_integer() => r.to_integer().to_u32(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            PExponent::Finite(r) => rational_to_f64(r),
            PExponent::Infinity => f64::INFINITY,
        }
    }

    /// `1/p` with the convention `1/∞ = 0`.
    pub fn reciprocal(&self) -> f64 {
        match self {
            PExponent::Finite(r) => 1.0 / rational_to_f64(r),
            PExponent::Infinity => 0.0,
        }
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExponent::Finite(r) => write!(f, "{}", format_rational(r)),
            PExponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for PExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PExponent::Finite(r) => s.serialize_f64(rational_to_f64(r)),
            PExponent::Infinity => s.serialize_str("inf"),
        }
    }
}

/// The value of a p-norm (or a p-cost), kept exact whenever possible.
#[derive(Debug, Clone, PartialEq)]
pub enum NormValue {
    Infinite,
    /// Exact sum of p-th powers for integer p; the value is `sum^(1/p)`.
    PowerSum { p: u32, sum: Rational },
    /// Exact maximum, p = ∞.
    Max(Rational),
    /// Floating-point sum of p-th powers for non-integer p.
    FloatPowerSum { p: f64, sum: f64 },
}

impl NormValue {
    pub fn zero(p: &PExponent) -> NormValue {
        NormAccumulator::new(p).finish()
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, NormValue::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            NormValue::Infinite => false,
            NormValue::PowerSum { sum, .. } => sum.is_zero(),
            NormValue::Max(m) => m.is_zero(),
            NormValue::FloatPowerSum { sum, .. } => *sum == 0.0,
        }
    }

    /// The norm itself, rounded to the nearest `f64` for exact variants.
    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Infinite => f64::INFINITY,
            NormValue::PowerSum { p, sum } => nearest_root(sum, *p),
            NormValue::Max(m) => nearest_root(m, 1),
            NormValue::FloatPowerSum { p, sum } => sum.powf(1.0 / p),
        }
    }

    /// The exact value when it is rational (p = 1, p = ∞, or a zero norm).
    pub fn exact(&self) -> Option<Rational> {
        match self {
            NormValue::PowerSum { p: 1, sum } => Some(sum.clone()),
            NormValue::PowerSum { sum, .. } if sum.is_zero() => Some(Rational::zero()),
            NormValue::Max(m) => Some(m.clone()),
            _ => None,
        }
    }

    /// The exact p-th power (the value itself for p = ∞), if available.
    pub fn exact_power(&self) -> Option<&Rational> {
        match self {
            NormValue::PowerSum { sum, .. } => Some(sum),
            NormValue::Max(m) => Some(m),
            _ => None,
        }
    }

    /// Combines two disjoint partial norms of the same exponent.
    pub fn combine(&self, other: &NormValue) -> NormValue {
        match (self, other) {
            (NormValue::Infinite, _) | (_, NormValue::Infinite) => NormValue::Infinite,
            (NormValue::PowerSum { p, sum: a }, NormValue::PowerSum { p: q, sum: b }) if p == q => {
                NormValue::PowerSum { p: *p, sum: a + b }
            }
            (NormValue::Max(a), NormValue::Max(b)) => NormValue::Max(a.max(b).clone()),
            (NormValue::FloatPowerSum { p, sum: a }, NormValue::FloatPowerSum { p: q, sum: b }) if p == q => {
                NormValue::FloatPowerSum { p: *p, sum: a + b }
            }
            _ => panic!("combining norm values of different exponents"),
        }
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (NormValue::Infinite, NormValue::Infinite) => Some(Ordering::Equal),
            (NormValue::Infinite, _) => Some(Ordering::Greater),
            (_, NormValue::Infinite) => Some(Ordering::Less),
            (NormValue::PowerSum { p, sum: a }, NormValue::PowerSum { p: q, sum: b }) if p == q => a.partial_cmp(b),
            (NormValue::Max(a), NormValue::Max(b)) => a.partial_cmp(b),
            (NormValue::FloatPowerSum { p, sum: a }, NormValue::FloatPowerSum { p: q, sum: b }) if p == q => {
                a.partial_cmp(b)
            }
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact() {
            Some(r) => write!(f, "{}", format_rational(&r)),
            None => write!(f, "{}", self.to_f64()),
        }
    }
}

/// Accumulates `‖(x_1, …, x_k)‖_p` from nonnegative terms.
#[derive(Debug, Clone)]
pub struct NormAccumulator {
    state: NormValue,
}

impl NormAccumulator {
    pub fn new(p: &PExponent) -> Self {
        let state = match p {
            PExponent::Infinity => NormValue::Max(Rational::zero()),
            PExponent::Finite(_) => match p.as_integer() {
                Some(k) => NormValue::PowerSum { p: k, sum: Rational::zero() },
                None => NormValue::FloatPowerSum { p: p.to_f64(), sum: 0.0 },
            },
        };
        NormAccumulator { state }
    }

    /// Adds the term `|x|`.
    pub fn push(&mut self, x: &Rational) {
        let ax = x.abs();
        match &mut self.state {
            NormValue::Infinite => {}
            NormValue::PowerSum { p, sum } => *sum += num_traits::pow(ax, *p as usize),
            NormValue::Max(m) => {
                if ax > *m {
                    *m = ax;
                }
            }
            NormValue::FloatPowerSum { p, sum } => *sum += rational_to_f64(&ax).powf(*p),
        }
    }

    /// Adds `count` copies of `|x|`.
    pub fn push_times(&mut self, x: &Rational, count: usize) {
        match &mut self.state {
            NormValue::PowerSum { p, sum } => {
                *sum += num_traits::pow(x.abs(), *p as usize) * Rational::from_integer(count.into())
            }
            _ => {
                if count > 0 {
                    self.push(x)
                }
                if let NormValue::FloatPowerSum { p, sum } = &mut self.state {
                    *sum += (count.saturating_sub(1)) as f64 * rational_to_f64(&x.abs()).powf(*p);
                }
            }
        }
    }

    pub fn push_infinite(&mut self) {
        self.state = NormValue::Infinite;
    }

    pub fn finish(self) -> NormValue {
        self.state
    }
}

/// The `f64` nearest to `sum^(1/p)` for `sum >= 0`, found by exact comparison
/// of p-th powers of neighbouring floats.
pub fn nearest_root(sum: &Rational, p: u32) -> f64 {
    assert!(!sum.is_negative(), "root of a negative number");
    if sum.is_zero() {
        return 0.0;
    }
    let approx = rational_to_f64(sum).powf(1.0 / p as f64);
    if !approx.is_finite() || approx == 0.0 {
        return approx;
    }
    let pow = |x: f64| num_traits::pow(Rational::from_float(x).expect("finite"), p as usize);
    let mut c = approx;
    while c > 0.0 && pow(c) > *sum {
        c = c.next_down();
    }
    loop {
        let n = c.next_up();
        if !n.is_finite() || pow(n) > *sum {
            break;
        }
        c = n;
    }
    let n = c.next_up();
    if !n.is_finite() {
        return c;
    }
    let mid = (Rational::from_float(c).unwrap() + Rational::from_float(n).unwrap()) / Rational::from_integer(2.into());
    match num_traits::pow(mid, p as usize).cmp(sum) {
        Ordering::Less => n,
        Ordering::Greater => c,
        Ordering::Equal => {
            if c.to_bits() & 1 == 0 {
                c
            } else {
                n
            }
        }
    }
}
