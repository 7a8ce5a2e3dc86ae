//! Exact rational grades in Q^n, n ∈ {1, 2}.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Parses an exact rational from a decimal literal (`-1.25`, `3`, `.5`, `2e-3`)
/// or a fraction (`7/3`). Decimal literals are converted exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Formats a rational as a terminating decimal when possible, otherwise as `p/q`.
/// The output always parses back to the same value with [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut d = r.denom().clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = twos.max(fives);
    let scaled = r * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let digits = if digits.len() <= places {
        format!("{}{}", "0".repeat(places - digits.len() + 1), digits)
    } else {
        digits
    };
    let (ip, fp) = digits.split_at(digits.len() - places);
    format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite `f64` to a rational.
pub fn rational_from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A point of Q^n with the product partial order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Grade {
    coords: Vec<Rational>,
}

impl Grade {
    pub fn new(coords: Vec<Rational>) -> Self {
        Grade { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Grade { coords: coords.iter().map(|&c| rat(c)).collect() }
    }

    pub fn xy(x: Rational, y: Rational) -> Self {
        Grade { coords: vec![x, y] }
    }

    pub fn scalar(x: Rational) -> Self {
        Grade { coords: vec![x] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    #[inline]
    pub fn x(&self) -> &Rational {
        &self.coords[0]
    }

    #[inline]
    pub fn y(&self) -> &Rational {
        &self.coords[1]
    }

    /// Product order: `self <= other` in every coordinate.
    pub fn leq(&self, other: &Grade) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Grade) -> Grade {
        Grade {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.max(b).clone())
                .collect(),
        }
    }

    pub fn meet(&self, other: &Grade) -> Grade {
        Grade {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.min(b).clone())
                .collect(),
        }
    }

    pub fn translate(&self, by: &[Rational]) -> Grade {
        Grade { coords: self.coords.iter().zip(by).map(|(a, b)| a + b).collect() }
    }

    /// Colexicographic comparison: last coordinate first.
    pub fn colex_cmp(&self, other: &Grade) -> std::cmp::Ordering {
        self.coords.iter().rev().cmp(other.coords.iter().rev())
    }

    /// Lexicographic comparison: first coordinate first.
    pub fn lex_cmp(&self, other: &Grade) -> std::cmp::Ordering {
        self.coords.cmp(&other.coords)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(rational_to_f64).collect()
    }
}

impl fmt::Debug for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}
