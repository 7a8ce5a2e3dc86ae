//! Barcodes of 1-parameter modules: multisets of half-open intervals `[b, d)`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::grade::{format_rational, Rational};
use crate::{Error, Result};

/// An extended rational: a finite value or +∞.
///
/// Differences follow the extended-real conventions with `∞ - ∞ = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Death {
    Finite(Rational),
    Infinite,
}

impl Death {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Death::Infinite)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Death::Finite(r) => Some(r),
            Death::Infinite => None,
        }
    }

    /// `|self - other|`, `None` standing for ∞. Uses `∞ - ∞ = 0`.
    pub fn abs_diff(&self, other: &Death) -> Option<Rational> {
        match (self, other) {
            (Death::Finite(a), Death::Finite(b)) => Some(if a >= b { a - b } else { b - a }),
            (Death::Infinite, Death::Infinite) => Some(Rational::zero()),
            _ => None,
        }
    }
}

impl PartialOrd for Death {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Death {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Death::Finite(a), Death::Finite(b)) => a.cmp(b),
            (Death::Finite(_), Death::Infinite) => Ordering::Less,
            (Death::Infinite, Death::Finite(_)) => Ordering::Greater,
            (Death::Infinite, Death::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::Finite(r) => write!(f, "{}", format_rational(r)),
            Death::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bar {
    pub birth: Rational,
    pub death: Death,
}

impl Bar {
    pub fn new(birth: Rational, death: Death) -> Result<Bar> {
        if let Death::Finite(d) = &death {
            if d <= &birth {
                return Err(Error::Invalid(format!(
                    "empty bar [{}, {})",
                    format_rational(&birth),
                    format_rational(d)
                )));
            }
        }
        Ok(Bar { birth, death })
    }

    pub fn finite(birth: Rational, death: Rational) -> Result<Bar> {
        Bar::new(birth, Death::Finite(death))
    }

    pub fn essential(birth: Rational) -> Bar {
        Bar { birth, death: Death::Infinite }
    }

    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    /// True when `[s, t] ⊆ [birth, death)`.
    pub fn contains_segment(&self, s: &Rational, t: &Rational) -> bool {
        &self.birth <= s
            && match &self.death {
                Death::Finite(d) => t < d,
                Death::Infinite => true,
            }
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", format_rational(&self.birth), self.death)
    }
}

/// A finite multiset of bars. Equality is multiset equality.
#[derive(Debug, Clone, Default)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>) -> Barcode {
        bars.sort();
        Barcode { bars }
    }

    pub fn empty() -> Barcode {
        Barcode { bars: Vec::new() }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn essential_count(&self) -> usize {
        self.bars.iter().filter(|b| b.is_essential()).count()
    }

    /// Number of bars containing `[s, t]`; equals the rank of `M_s -> M_t`.
    pub fn rank_between(&self, s: &Rational, t: &Rational) -> usize {
        self.bars.iter().filter(|b| b.contains_segment(s, t)).count()
    }

    /// Translates every endpoint by `shift` (∞ stays ∞).
    pub fn shift(&self, shift: &Rational) -> Barcode {
        Barcode::new(
            self.bars
                .iter()
                .map(|b| Bar {
                    birth: &b.birth + shift,
                    death: match &b.death {
                        Death::Finite(d) => Death::Finite(d + shift),
                        Death::Infinite => Death::Infinite,
                    },
                })
                .collect(),
        )
    }
}

impl PartialEq for Barcode {
    fn eq(&self, other: &Self) -> bool {
        self.bars == other.bars
    }
}

impl Eq for Barcode {}

impl FromIterator<Bar> for Barcode {
    fn from_iter<I: IntoIterator<Item = Bar>>(iter: I) -> Self {
        Barcode::new(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grade::rat;

    #[test]
    fn infinity_minus_infinity_is_zero() {
        assert_eq!(Death::Infinite.abs_diff(&Death::Infinite), Some(rat(0)));
        assert_eq!(Death::Infinite.abs_diff(&Death::Finite(rat(1))), None);
        assert_eq!(Death::Finite(rat(1)).abs_diff(&Death::Finite(rat(4))), Some(rat(3)));
    }

    #[test]
    fn rejects_empty_bars() {
        assert!(Bar::finite(rat(1), rat(1)).is_err());
        assert!(Bar::finite(rat(2), rat(1)).is_err());
    }

    #[test]
    fn multiset_equality_ignores_order() {
        let a = Barcode::new(vec![Bar::essential(rat(0)), Bar::finite(rat(0), rat(2)).unwrap()]);
        let b = Barcode::new(vec![Bar::finite(rat(0), rat(2)).unwrap(), Bar::essential(rat(0))]);
        assert_eq!(a, b);
        assert_eq!(a.rank_between(&rat(1), &rat(1)), 2);
        assert_eq!(a.rank_between(&rat(1), &rat(2)), 1);
    }
}
