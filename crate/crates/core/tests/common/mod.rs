//! Fixtures and independent oracles shared by the integration tests.
//!
//! The oracles use dense Gaussian elimination and plain `f64` arithmetic so
//! that they share no code with the library routines they check.

#![allow(dead_code)]

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use mpm_core::cellular::{CellComplex, FilteredComplex};
use mpm_core::grade::{frac, rat, rational_to_f64};
use mpm_core::presentation::SparseColumn;
use mpm_core::{Grade, PrimeField, Presentation, Rational};

pub fn g(x: i64, y: i64) -> Grade {
    Grade::from_ints(&[x, y])
}

pub fn gh(x2: i64, y2: i64) -> Grade {
    Grade::xy(frac(x2, 2), frac(y2, 2))
}

pub fn pres(rows: Vec<Grade>, cols: Vec<Grade>, columns: Vec<SparseColumn>) -> Presentation {
    let n = rows.first().or(cols.first()).map_or(2, |x| x.dim());
    Presentation::new(PrimeField::f2(), n, rows, cols, columns).unwrap()
}

/// `H_0` presentation of the theta complex for `f`: two generators at the
/// origin, three relations with a single 1 in the second row.
pub fn p_f() -> Presentation {
    pres(vec![g(0, 0), g(0, 0)], vec![g(1, 4), g(3, 3), g(4, 1)], vec![vec![(1, 1)]; 3])
}

/// As [`p_f`] with the middle relation moved to `(2, 2)`.
pub fn p_g() -> Presentation {
    pres(vec![g(0, 0), g(0, 0)], vec![g(1, 4), g(2, 2), g(4, 1)], vec![vec![(1, 1)]; 3])
}

/// Two vertices joined by three edges.
pub fn theta_complex() -> CellComplex {
    CellComplex::new(
        PrimeField::f2(),
        vec!["a".into(), "b".into(), "e1".into(), "e2".into(), "e3".into()],
        vec![0, 0, 1, 1, 1],
        vec![vec![], vec![], vec![(0, 1), (1, 1)], vec![(0, 1), (1, 1)], vec![(0, 1), (1, 1)]],
    )
    .unwrap()
}

pub fn theta(middle: Grade) -> FilteredComplex {
    FilteredComplex::new(theta_complex(), 2, vec![g(0, 0), g(0, 0), g(1, 4), middle, g(4, 1)]).unwrap()
}

pub fn theta_f() -> FilteredComplex {
    theta(g(3, 3))
}

pub fn theta_g() -> FilteredComplex {
    theta(g(2, 2))
}

/// The module that is 1-dimensional above `(0,-1)` or `(-1,0)`, presented by
/// the column `[1; -1]` at the origin. Over F_2 the sign disappears.
pub fn triangle_m() -> Presentation {
    pres(vec![g(0, -1), g(-1, 0)], vec![g(0, 0)], vec![vec![(0, 1), (1, 1)]])
}

/// `Q^(0,0)` written with the matrix of [`triangle_m`].
pub fn free_origin_as_m() -> Presentation {
    pres(vec![g(0, 0), g(0, 0)], vec![g(0, 0)], vec![vec![(0, 1), (1, 1)]])
}

/// The free module with one generator at `(r, r)`.
pub fn free_at(r: i64) -> Presentation {
    Presentation::free(PrimeField::f2(), 2, vec![g(r, r)]).unwrap()
}

// ---------------------------------------------------------------- oracles

/// Rank of a dense matrix over F_q, given as a list of columns.
pub fn dense_rank(q: u32, cols: &[Vec<u32>]) -> usize {
    let q = q as u64;
    let mut m: Vec<Vec<u64>> = cols.iter().map(|c| c.iter().map(|&x| x as u64 % q).collect()).collect();
    let n_rows = m.first().map_or(0, |c| c.len());
    let inv = |a: u64| {
        let mut r = 1u64;
        let (mut b, mut e) = (a, q - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % q;
            }
            b = b * b % q;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for row in 0..n_rows {
        let Some(piv) = (rank..m.len()).find(|&c| m[c][row] != 0) else { continue };
        m.swap(rank, piv);
        let s = inv(m[rank][row]);
        for x in m[rank].iter_mut() {
            *x = *x * s % q;
        }
        for c in 0..m.len() {
            if c != rank && m[c][row] != 0 {
                let f = m[c][row];
                for k in 0..n_rows {
                    m[c][k] = (m[c][k] + q * q - f * m[rank][k]) % q;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn densify(col: &SparseColumn, n: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    for &(i, x) in col {
        v[i] = x;
    }
    v
}

/// `dim coker(P)_a` by dense elimination.
pub fn hilbert_oracle(p: &Presentation, a: &Grade) -> usize {
    let rows = p.row_labels().iter().filter(|r| r.leq(a)).count();
    let cols: Vec<Vec<u32>> = p
        .col_labels()
        .iter()
        .zip(p.columns())
        .filter(|(c, _)| c.leq(a))
        .map(|(_, c)| densify(c, p.n_rows()))
        .collect();
    rows - dense_rank(p.field().order(), &cols)
}

/// Rank of `M_s -> M_t`, as `dim M_s` minus the generators below `s` that die by `t`.
pub fn rank_invariant_oracle(p: &Presentation, s: &Grade, t: &Grade) -> usize {
    let q = p.field().order();
    let n = p.n_rows();
    let rel: Vec<Vec<u32>> = p
        .col_labels()
        .iter()
        .zip(p.columns())
        .filter(|(c, _)| c.leq(t))
        .map(|(_, c)| densify(c, n))
        .collect();
    let mut with_gens = rel.clone();
    for (i, r) in p.row_labels().iter().enumerate() {
        if r.leq(s) {
            let mut e = vec![0; n];
            e[i] = 1;
            with_gens.push(e);
        }
    }
    dense_rank(q, &with_gens) - dense_rank(q, &rel)
}

/// `dim ker(γ)_a` for the matrix `γ` with the given codomain size and domain grades.
pub fn nullity_oracle(q: u32, n_codomain: usize, domain: &[Grade], cols: &[SparseColumn], a: &Grade) -> usize {
    let live: Vec<Vec<u32>> =
        domain.iter().zip(cols).filter(|(d, _)| d.leq(a)).map(|(_, c)| densify(c, n_codomain)).collect();
    live.len() - dense_rank(q, &live)
}

/// Chart line `(s, μ)` as `(v, w)` in floating point. `|μ| = 1` gives an
/// infinite direction coordinate.
pub fn chart_line_f64(s: f64, mu: f64) -> ([f64; 2], [f64; 2]) {
    let w = if s >= 0.0 { [s, 0.0] } else { [0.0, -s] };
    let v = if mu >= 0.0 { [1.0, 1.0 / (1.0 - mu)] } else { [1.0 / (1.0 + mu), 1.0] };
    (v, w)
}

pub fn push_f64(v: [f64; 2], w: [f64; 2], a: [f64; 2]) -> f64 {
    let t = |i: usize| {
        let r = (a[i] - w[i]) / v[i];
        if r == 0.0 { 0.0 } else { r }
    };
    t(0).max(t(1))
}

pub fn pnorm_f64(xs: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        xs.iter().fold(0.0, |m, x| m.max(x.abs()))
    } else {
        xs.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

pub fn grade_f64(a: &Grade) -> [f64; 2] {
    [rational_to_f64(a.x()), rational_to_f64(a.y())]
}

pub fn rpow(x: &Rational, p: u32) -> Rational {
    (0..p).fold(rat(1), |acc, _| acc * x)
}

// ------------------------------------------------------------- reporting

/// Runs one acceptance criterion, prints a single pass/fail line and panics
/// on failure or when the wall-clock cap is exceeded. Criteria take turns
/// so that their wall-clock caps are not shared.
pub fn criterion<F: FnOnce() -> Result<String, String>>(id: u32, title: &str, cap: Duration, body: F) {
    static SERIAL: Mutex<()> = Mutex::new(());
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let verdict = match outcome {
        Ok(Ok(detail)) if elapsed <= cap => Ok(detail),
        Ok(Ok(_)) => Err(format!("took {elapsed:.2?}, cap {cap:?}")),
        Ok(Err(msg)) => Err(msg),
        Err(panic) => Err(panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into())),
    };
    match verdict {
        Ok(detail) => println!("criterion {id:>2} PASS  {title} ({elapsed:.2?}) {detail}"),
        Err(msg) => {
            println!("criterion {id:>2} FAIL  {title} ({elapsed:.2?}) {msg}");
            panic!("criterion {id} failed: {msg}");
        }
    }
}

/// `Err(msg)` unless `cond` holds.
pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}
