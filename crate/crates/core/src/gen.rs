//! Random instances for tests, benchmarks and the `gen` command.
//!
//! Coordinates are multiples of 1/2 so that ties, crossings and non-integer
//! values all show up with reasonable probability.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::barcode::{Bar, Barcode};
use crate::cellular::CellComplex;
use crate::field::PrimeField;
use crate::grade::{Grade, Rational};
use crate::presentation::Presentation;

fn half<R: Rng + ?Sized>(rng: &mut R, max: i64) -> Rational {
    Rational::new(rng.gen_range(0..=2 * max).into(), 2.into())
}

pub fn random_grade<R: Rng + ?Sized>(rng: &mut R, n_params: usize, max: i64) -> Grade {
    Grade::new((0..n_params).map(|_| half(rng, max)).collect())
}

/// A random grade `>= base`, at most `spread` above it in every coordinate.
pub fn random_grade_above<R: Rng + ?Sized>(rng: &mut R, base: &Grade, spread: i64) -> Grade {
    Grade::new(base.coords().iter().map(|c| c + half(rng, spread)).collect())
}

fn random_column<R: Rng + ?Sized>(
    rng: &mut R,
    field: &PrimeField,
    rows: &[Grade],
    label: &Grade,
    density: f64,
) -> Vec<(usize, u32)> {
    let mut col = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if r.leq(label) && rng.gen_bool(density) {
            col.push((i, rng.gen_range(1..field.order())));
        }
    }
    col
}

/// A random presentation with `rows` generators and `cols` relations. Each
/// column label sits above a few randomly chosen rows, which then may carry
/// nonzero entries.
pub fn random_presentation<R: Rng + ?Sized>(
    rng: &mut R,
    field: PrimeField,
    n_params: usize,
    rows: usize,
    cols: usize,
    max: i64,
) -> Presentation {
    let row_labels: Vec<Grade> = (0..rows).map(|_| random_grade(rng, n_params, max)).collect();
    let mut col_labels = Vec::with_capacity(cols);
    let mut columns = Vec::with_capacity(cols);
    for _ in 0..cols {
        let mut label = random_grade(rng, n_params, max);
        if !row_labels.is_empty() {
            for _ in 0..rng.gen_range(1..=2) {
                label = label.join(row_labels.choose(rng).expect("nonempty"));
            }
        }
        let col = random_column(rng, &field, &row_labels, &label, 0.6);
        col_labels.push(label);
        columns.push(col);
    }
    Presentation::new(field, n_params, row_labels, col_labels, columns).expect("labels respect the order")
}

/// New labels for the same matrix: every row label moves freely, and column
/// labels are chosen above the rows they touch.
pub fn random_relabel<R: Rng + ?Sized>(rng: &mut R, p: &Presentation, max: i64) -> Presentation {
    let n = p.n_params();
    let rows: Vec<Grade> = (0..p.n_rows()).map(|_| random_grade(rng, n, max)).collect();
    let cols: Vec<Grade> = p
        .columns()
        .iter()
        .map(|c| {
            let floor = c.iter().fold(random_grade(rng, n, max), |g, &(i, _)| g.join(&rows[i]));
            random_grade_above(rng, &floor, 1)
        })
        .collect();
    p.relabel(rows, cols).expect("labels respect the order")
}

/// Two presentations with a common random matrix and independent labels.
pub fn random_pair<R: Rng + ?Sized>(
    rng: &mut R,
    field: PrimeField,
    n_params: usize,
    rows: usize,
    cols: usize,
    max: i64,
) -> (Presentation, Presentation) {
    let p = random_presentation(rng, field, n_params, rows, cols, max);
    let q = random_relabel(rng, &p, max);
    (p, q)
}

pub fn random_barcode<R: Rng + ?Sized>(rng: &mut R, bars: usize, max: i64, essential: f64) -> Barcode {
    (0..bars)
        .map(|_| {
            let b = half(rng, max);
            if rng.gen_bool(essential) {
                Bar::essential(b)
            } else {
                let len = Rational::new(rng.gen_range(1..=2 * max.max(1)).into(), 2.into());
                Bar::finite(b.clone(), b + len).expect("positive length")
            }
        })
        .collect()
}

/// A random simplicial complex on `vertices` vertices with roughly `edges`
/// edges and every triangle of the resulting graph kept with probability
/// `triangles`. Cells are listed by dimension; the total is capped at `max_cells`.
pub fn random_simplicial<R: Rng + ?Sized>(
    rng: &mut R,
    field: PrimeField,
    vertices: usize,
    edges: usize,
    triangles: f64,
    max_cells: usize,
) -> CellComplex {
    let mut simplices: Vec<Vec<usize>> = (0..vertices).map(|v| vec![v]).collect();
    let mut all_edges: Vec<(usize, usize)> =
        (0..vertices).flat_map(|a| (a + 1..vertices).map(move |b| (a, b))).collect();
    all_edges.shuffle(rng);
    all_edges.truncate(edges.min(max_cells.saturating_sub(simplices.len())));
    all_edges.sort_unstable();
    let has = |a: usize, b: usize, es: &[(usize, usize)]| es.binary_search(&(a.min(b), a.max(b))).is_ok();
    simplices.extend(all_edges.iter().map(|&(a, b)| vec![a, b]));
    'outer: for a in 0..vertices {
        for b in a + 1..vertices {
            for c in b + 1..vertices {
                if simplices.len() >= max_cells {
                    break 'outer;
                }
                if has(a, b, &all_edges) && has(a, c, &all_edges) && has(b, c, &all_edges) && rng.gen_bool(triangles) {
                    simplices.push(vec![a, b, c]);
                }
            }
        }
    }
    CellComplex::simplicial(field, &simplices).expect("faces are listed")
}

/// Monotone grades: each cell sits at the join of its faces plus a random
/// nonnegative offset. Assumes faces precede cells, as in [`random_simplicial`].
pub fn random_filtration<R: Rng + ?Sized>(rng: &mut R, cx: &CellComplex, n_params: usize, max: i64) -> Vec<Grade> {
    let mut grades: Vec<Grade> = Vec::with_capacity(cx.len());
    for k in 0..cx.len() {
        let g = if cx.boundary(k).is_empty() {
            random_grade(rng, n_params, max)
        } else {
            let floor = cx.boundary(k).iter().fold(grades[cx.boundary(k)[0].0].clone(), |g, &(f, _)| g.join(&grades[f]));
            random_grade_above(rng, &floor, (max / 2).max(1))
        };
        grades.push(g);
    }
    grades
}

/// Moves each grade of a monotone filtration by a small random amount while
/// keeping it monotone.
pub fn perturb_filtration<R: Rng + ?Sized>(rng: &mut R, cx: &CellComplex, f: &[Grade], amount: i64) -> Vec<Grade> {
    let mut out: Vec<Grade> = Vec::with_capacity(f.len());
    for k in 0..cx.len() {
        let moved = Grade::new(
            f[k].coords()
                .iter()
                .map(|c| c + Rational::new(rng.gen_range(-2 * amount..=2 * amount).into(), 2.into()))
                .collect(),
        );
        let g = cx.boundary(k).iter().fold(moved, |g, &(face, _)| g.join(&out[face]));
        out.push(g);
    }
    out
}
