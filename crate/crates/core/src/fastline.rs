//! Floating-point evaluation of line distances and local bounds, used to
//! steer the matching-distance search.
//!
//! Results carry a rounding margin (see [`Prepared::margin`]); callers add it
//! to upper bounds and recompute exactly whenever a value may raise the lower
//! bound. The barcode along a line depends on labels only through their
//! order, and barcodes are 1-Lipschitz in the labels, so rounding the pushes
//! moves the distance by at most the rounding error of the pushes.

use std::cmp::Ordering;

use crate::assignment;
use crate::field::PrimeField;
use crate::grade::rational_to_f64;
use crate::linalg;
use crate::presentation::{Presentation, SparseColumn};

/// A line `t·v + w` in floating point; one coordinate of `v` may be infinite.
#[derive(Debug, Clone, Copy)]
pub struct FLine {
    pub v: [f64; 2],
    pub w: [f64; 2],
}

impl FLine {
    /// Chart point `(s, μ)`, following the exact chart.
    pub fn from_chart(s: f64, mu: f64) -> FLine {
        let w = if s >= 0.0 { [s, 0.0] } else { [0.0, -s] };
        let v = if mu >= 0.0 { [1.0, 1.0 / (1.0 - mu)] } else { [1.0 / (1.0 + mu), 1.0] };
        FLine { v, w }
    }

    #[inline]
    pub fn push(&self, a: [f64; 2]) -> f64 {
        let t = |i: usize| {
            let r = (a[i] - self.w[i]) / self.v[i];
            // Collapse -0.0 from the infinite direction.
            r + 0.0
        };
        t(0).max(t(1))
    }
}

/// A 2-parameter presentation with labels converted to floats.
#[derive(Debug, Clone)]
pub struct Prepared {
    field: PrimeField,
    rows: Vec<[f64; 2]>,
    cols: Vec<[f64; 2]>,
    columns: Vec<SparseColumn>,
}

impl Prepared {
    pub fn new(p: &Presentation) -> Prepared {
        let conv = |g: &crate::Grade| [rational_to_f64(g.x()), rational_to_f64(g.y())];
        Prepared {
            field: p.field(),
            rows: p.row_labels().iter().map(conv).collect(),
            cols: p.col_labels().iter().map(conv).collect(),
            columns: p.columns().to_vec(),
        }
    }

    pub fn labels(&self) -> impl Iterator<Item = &[f64; 2]> {
        self.rows.iter().chain(&self.cols)
    }

    pub fn len(&self) -> usize {
        self.rows.len() + self.cols.len()
    }

    /// Bars `(birth, death)` along `l`, `death = ∞` for essential bars.
    pub fn barcode(&self, l: &FLine) -> Vec<(f64, f64)> {
        let rv: Vec<f64> = self.rows.iter().map(|&a| l.push(a)).collect();
        let cv: Vec<f64> = self.cols.iter().map(|&a| l.push(a)).collect();
        let order = |xs: &[f64]| {
            let mut o: Vec<usize> = (0..xs.len()).collect();
            o.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]).then(a.cmp(&b)));
            o
        };
        let ro = order(&rv);
        let co = order(&cv);
        let mut rank_of_row = vec![0; ro.len()];
        for (k, &r) in ro.iter().enumerate() {
            rank_of_row[r] = k;
        }
        let f = &self.field;
        let mut cols: Vec<SparseColumn> = co
            .iter()
            .map(|&j| {
                let mut c: SparseColumn = self.columns[j].iter().map(|&(r, x)| (rank_of_row[r], x)).collect();
                c.sort_unstable_by_key(|&(r, _)| r);
                c
            })
            .collect();
        let mut pivot_of_row: Vec<Option<usize>> = vec![None; ro.len()];
        for j in 0..cols.len() {
            while let Some(&(low, x)) = cols[j].last() {
                match pivot_of_row[low] {
                    Some(i) => {
                        let pv = cols[i].last().expect("pivot column is nonzero").1;
                        let alpha = f.neg(f.div(x, pv));
                        cols[j] = linalg::axpy(f, &cols[j], alpha, &cols[i]);
                    }
                    None => {
                        pivot_of_row[low] = Some(j);
                        break;
                    }
                }
            }
        }
        let mut bars = Vec::with_capacity(ro.len());
        for (k, piv) in pivot_of_row.iter().enumerate() {
            let b = rv[ro[k]];
            match piv {
                Some(j) => {
                    let d = cv[co[*j]];
                    if d > b {
                        bars.push((b, d));
                    }
                }
                None => bars.push((b, f64::INFINITY)),
            }
        }
        bars
    }

    /// Bound on the rounding error of any push value or distance computed
    /// from this presentation and `other` along lines with base points in
    /// `[-scale, scale]²`.
    pub fn margin(&self, other: &Prepared, scale: f64) -> f64 {
        let z = (self.len() + other.len()) as f64;
        1e-10 * (1.0 + scale) * (1.0 + z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
struct Total(f64);

impl Eq for Total {}

impl Ord for Total {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// p-Wasserstein distance of float barcodes; `p = ∞` for the bottleneck distance.
pub fn wasserstein(b: &[(f64, f64)], c: &[(f64, f64)], p: f64) -> f64 {
    let ess = |x: &[(f64, f64)]| {
        let mut e: Vec<f64> = x.iter().filter(|y| y.1.is_infinite()).map(|y| y.0).collect();
        e.sort_by(f64::total_cmp);
        e
    };
    let (eb, ec) = (ess(b), ess(c));
    if eb.len() != ec.len() {
        return f64::INFINITY;
    }
    let fb: Vec<(f64, f64)> = b.iter().copied().filter(|y| y.1.is_finite()).collect();
    let fc: Vec<(f64, f64)> = c.iter().copied().filter(|y| y.1.is_finite()).collect();
    let (n, m) = (fb.len(), fc.len());
    let half = |x: &(f64, f64)| (x.1 - x.0) / 2.0;

    if p.is_infinite() {
        let mut worst = eb.iter().zip(&ec).fold(0.0f64, |w, (x, y)| w.max((x - y).abs()));
        if n + m > 0 {
            let mut cost = vec![vec![Total(0.0); n + m]; n + m];
            for i in 0..n {
                for j in 0..m {
                    cost[i][j] = Total((fb[i].0 - fc[j].0).abs().max((fb[i].1 - fc[j].1).abs()));
                }
                for j in m..n + m {
                    cost[i][j] = Total(half(&fb[i]));
                }
            }
            for i in n..n + m {
                for j in 0..m {
                    cost[i][j] = Total(half(&fc[j]));
                }
            }
            let a = assignment::min_max(&cost);
            worst = a.iter().enumerate().fold(worst, |w, (i, &j)| w.max(cost[i][j].0));
        }
        return worst;
    }

    let pw = |x: f64| x.abs().powf(p);
    let mut total: f64 = eb.iter().zip(&ec).map(|(x, y)| pw(x - y)).sum();
    if n + m > 0 {
        let mut cost = vec![vec![0.0f64; n + m]; n + m];
        for i in 0..n {
            for j in 0..m {
                cost[i][j] = pw(fb[i].0 - fc[j].0) + pw(fb[i].1 - fc[j].1);
            }
            for j in m..n + m {
                cost[i][j] = 2.0 * pw(half(&fb[i]));
            }
        }
        for i in n..n + m {
            for j in 0..m {
                cost[i][j] = 2.0 * pw(half(&fc[j]));
            }
        }
        let a = assignment::min_sum(&cost);
        total += a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum::<f64>();
    }
    total.powf(1.0 / p)
}

/// ℓp-norm of nonnegative terms; `p = ∞` takes the maximum.
pub fn pnorm(xs: impl Iterator<Item = f64>, p: f64) -> f64 {
    if p.is_infinite() {
        xs.fold(0.0, f64::max)
    } else {
        xs.map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}
