//! p-Wasserstein and bottleneck distances between barcodes.
//!
//! A bar `[a1, a2)` is treated as the point `(a1, a2)`. A matched pair costs
//! the ℓp distance of the points (with `∞ - ∞ = 0`); an unmatched bar costs
//! its ℓp distance to the diagonal point `((a1+a2)/2, (a1+a2)/2)`.

use std::collections::HashSet;

use num_traits::Zero;

use crate::assignment;
use crate::barcode::{Bar, Barcode};
use crate::grade::{rational_to_f64, Rational};
use crate::norm::{NormAccumulator, NormValue, PExponent};
use crate::{Error, Result};

/// A partial matching between two barcodes, as pairs of indices into
/// `B.bars()` and `C.bars()`. Indices not listed are unmatched.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Matching {
        pairs.sort();
        Matching { pairs }
    }

    pub fn validate(&self, b: &Barcode, c: &Barcode) -> Result<()> {
        let mut left = HashSet::new();
        let mut right = HashSet::new();
        for &(i, j) in &self.pairs {
            if i >= b.len() || j >= c.len() {
                return Err(Error::InvalidMatching(format!("pair ({i}, {j}) out of range")));
            }
            if !left.insert(i) || !right.insert(j) {
                return Err(Error::InvalidMatching(format!("index repeated in pair ({i}, {j})")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct WassersteinResult {
    pub value: NormValue,
    pub matching: Matching,
}

fn half_length(a: &Bar) -> Option<Rational> {
    a.death.finite().map(|d| (d - &a.birth) / Rational::from_integer(2.into()))
}

fn push_pair(acc: &mut NormAccumulator, a: &Bar, b: &Bar) {
    let db = if a.birth >= b.birth { &a.birth - &b.birth } else { &b.birth - &a.birth };
    acc.push(&db);
    match a.death.abs_diff(&b.death) {
        Some(dd) => acc.push(&dd),
        None => acc.push_infinite(),
    }
}

fn push_unmatched(acc: &mut NormAccumulator, a: &Bar) {
    match half_length(a) {
        Some(h) => acc.push_times(&h, 2),
        None => acc.push_infinite(),
    }
}

/// Exact cost of a matching: an ℓp-norm over all coordinate differences.
pub fn matching_cost(b: &Barcode, c: &Barcode, sigma: &Matching, p: &PExponent) -> Result<NormValue> {
    sigma.validate(b, c)?;
    let mut acc = NormAccumulator::new(p);
    let mut used_b = vec![false; b.len()];
    let mut used_c = vec![false; c.len()];
    for &(i, j) in &sigma.pairs {
        used_b[i] = true;
        used_c[j] = true;
        push_pair(&mut acc, &b.bars()[i], &c.bars()[j]);
    }
    for (bar, used) in b.bars().iter().zip(&used_b).chain(c.bars().iter().zip(&used_c)) {
        if !used {
            push_unmatched(&mut acc, bar);
        }
    }
    Ok(acc.finish())
}

fn abs(x: Rational) -> Rational {
    if x < Rational::zero() {
        -x
    } else {
        x
    }
}

/// Builds the `(n+m) x (n+m)` assignment matrix. Rows: bars of `b`, then
/// ghosts of `c`. Columns: bars of `c`, then ghosts of `b`.
fn ghost_matrix<T: Clone + Zero>(
    b: &[&Bar],
    c: &[&Bar],
    pair: impl Fn(&Bar, &Bar) -> T,
    diag: impl Fn(&Bar) -> T,
) -> Vec<Vec<T>> {
    let (n, m) = (b.len(), c.len());
    let mut out = Vec::with_capacity(n + m);
    for bi in b {
        let mut row: Vec<T> = c.iter().map(|cj| pair(bi, cj)).collect();
        let d = diag(bi);
        row.extend(std::iter::repeat_n(d, n));
        out.push(row);
    }
    let cdiag: Vec<T> = c.iter().map(|cj| diag(cj)).collect();
    for _ in 0..m {
        let mut row = cdiag.clone();
        row.extend(std::iter::repeat_n(T::zero(), n));
        out.push(row);
    }
    out
}

fn finite_pair_terms(a: &Bar, b: &Bar) -> (Rational, Rational) {
    let da = a.death.finite().expect("finite bar");
    let db = b.death.finite().expect("finite bar");
    (abs(&a.birth - &b.birth), abs(da - db))
}

/// Optimal matching of the finite bars, as pairs of indices into `fb`, `fc`.
fn match_finite(fb: &[&Bar], fc: &[&Bar], p: &PExponent) -> Vec<(usize, usize)> {
    if fb.is_empty() || fc.is_empty() {
        return Vec::new();
    }
    let assignment = match (p, p.as_integer()) {
        (PExponent::Infinity, _) => {
            let cost = ghost_matrix(
                fb,
                fc,
                |a, b| {
                    let (x, y) = finite_pair_terms(a, b);
                    x.max(y)
                },
                |a| half_length(a).expect("finite bar"),
            );
            assignment::min_max(&cost)
        }
        (_, Some(k)) => {
            let k = k as usize;
            let two = Rational::from_integer(2.into());
            let cost = ghost_matrix(
                fb,
                fc,
                |a, b| {
                    let (x, y) = finite_pair_terms(a, b);
                    num_traits::pow(x, k) + num_traits::pow(y, k)
                },
                |a| &two * num_traits::pow(half_length(a).expect("finite bar"), k),
            );
            assignment::min_sum(&cost)
        }
        (_, None) => {
            let pf = p.to_f64();
            let cost = ghost_matrix(
                fb,
                fc,
                |a, b| {
                    let (x, y) = finite_pair_terms(a, b);
                    rational_to_f64(&x).powf(pf) + rational_to_f64(&y).powf(pf)
                },
                |a| 2.0 * rational_to_f64(&half_length(a).expect("finite bar")).powf(pf),
            );
            assignment::min_sum(&cost)
        }
    };
    assignment
        .iter()
        .enumerate()
        .filter(|&(i, &j)| i < fb.len() && j < fc.len())
        .map(|(i, &j)| (i, j))
        .collect()
}

/// Exact p-Wasserstein distance (bottleneck distance for `p = ∞`) with an
/// optimal matching.
///
/// Essential bars can only be matched among themselves; for those the cost
/// reduces to the birth difference and the sorted pairing is optimal. The
/// finite bars are matched by solving an assignment problem.
pub fn wasserstein(b: &Barcode, c: &Barcode, p: &PExponent) -> WassersteinResult {
    let split = |x: &Barcode| -> (Vec<usize>, Vec<usize>) {
        (0..x.len()).partition(|&i| !x.bars()[i].is_essential())
    };
    let (fin_b, ess_b) = split(b);
    let (fin_c, ess_c) = split(c);

    let mut pairs = Vec::new();
    // Bars are sorted by birth, so essential bars already come in birth order.
    for (&i, &j) in ess_b.iter().zip(&ess_c) {
        pairs.push((i, j));
    }
    let fb: Vec<&Bar> = fin_b.iter().map(|&i| &b.bars()[i]).collect();
    let fc: Vec<&Bar> = fin_c.iter().map(|&j| &c.bars()[j]).collect();
    for (i, j) in match_finite(&fb, &fc, p) {
        pairs.push((fin_b[i], fin_c[j]));
    }
    let matching = Matching::new(pairs);
    let value = matching_cost(b, c, &matching, p).expect("constructed matching is valid");
    WassersteinResult { value, matching }
}

/// Limit on `|B| + |C|` for [`brute_force_wasserstein`].
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Minimum cost over every partial matching, by exhaustive enumeration.
/// Branches whose partial cost already reaches the best complete cost are
/// cut, which is safe because every term is nonnegative.
pub fn brute_force_wasserstein(b: &Barcode, c: &Barcode, p: &PExponent) -> Result<NormValue> {
    let size = b.len() + c.len();
    if size > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { size, limit: BRUTE_FORCE_LIMIT });
    }
    let single = |f: &dyn Fn(&mut NormAccumulator)| {
        let mut acc = NormAccumulator::new(p);
        f(&mut acc);
        acc.finish()
    };
    let pair: Vec<Vec<NormValue>> = b
        .bars()
        .iter()
        .map(|x| c.bars().iter().map(|y| single(&|acc| push_pair(acc, x, y))).collect())
        .collect();
    let lone_b: Vec<NormValue> = b.bars().iter().map(|x| single(&|acc| push_unmatched(acc, x))).collect();
    let lone_c: Vec<NormValue> = c.bars().iter().map(|y| single(&|acc| push_unmatched(acc, y))).collect();

    struct Search<'a> {
        pair: &'a [Vec<NormValue>],
        lone_b: &'a [NormValue],
        lone_c: &'a [NormValue],
        used: Vec<bool>,
        best: Option<NormValue>,
    }
    impl Search<'_> {
        fn rec(&mut self, i: usize, partial: NormValue) {
            if self.best.as_ref().is_some_and(|b| partial >= *b) {
                return;
            }
            if i == self.lone_b.len() {
                let total = self
                    .lone_c
                    .iter()
                    .zip(&self.used)
                    .filter(|(_, &u)| !u)
                    .fold(partial, |acc, (v, _)| acc.combine(v));
                if self.best.as_ref().is_none_or(|b| total < *b) {
                    self.best = Some(total);
                }
                return;
            }
            self.rec(i + 1, partial.combine(&self.lone_b[i]));
            for j in 0..self.lone_c.len() {
                if !self.used[j] {
                    self.used[j] = true;
                    self.rec(i + 1, partial.combine(&self.pair[i][j]));
                    self.used[j] = false;
                }
            }
        }
    }
    let mut search = Search { pair: &pair, lone_b: &lone_b, lone_c: &lone_c, used: vec![false; c.len()], best: None };
    search.rec(0, NormValue::zero(p));
    Ok(search.best.expect("the empty matching is always enumerated"))
}

/// `|{essential bars}|` must agree for a finite distance.
pub fn is_finite_pair(b: &Barcode, c: &Barcode) -> bool {
    b.essential_count() == c.essential_count()
}
