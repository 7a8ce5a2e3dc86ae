//! One-parameter presentations: admissible operations, graded normal form and
//! barcodes.

use crate::barcode::{Bar, Barcode, Death};
use crate::field::FieldElem;
use crate::grade::Rational;
use crate::linalg;
use crate::presentation::{LabelVector, Presentation};
use crate::{Error, Result};

/// An elementary operation `dst += alpha * src` on rows or columns.
///
/// Column additions need `label(src) <= label(dst)`; row additions need
/// `label(dst) <= label(src)`. Both keep the module up to isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibleOp {
    AddColumn { src: usize, dst: usize, alpha: FieldElem },
    AddRow { src: usize, dst: usize, alpha: FieldElem },
}

impl AdmissibleOp {
    pub fn is_admissible(&self, p: &Presentation) -> bool {
        match *self {
            AdmissibleOp::AddColumn { src, dst, .. } => {
                src != dst && src < p.n_cols() && dst < p.n_cols() && p.col_labels()[src].leq(&p.col_labels()[dst])
            }
            AdmissibleOp::AddRow { src, dst, .. } => {
                src != dst && src < p.n_rows() && dst < p.n_rows() && p.row_labels()[dst].leq(&p.row_labels()[src])
            }
        }
    }
}

/// Applies an admissible operation, rejecting inadmissible ones.
pub fn apply_admissible_op(p: &Presentation, op: AdmissibleOp) -> Result<Presentation> {
    if !op.is_admissible(p) {
        return Err(Error::Invalid(format!("{op:?} is not admissible")));
    }
    let f = p.field();
    let mut cols: Vec<Vec<(usize, FieldElem)>> = p.columns().to_vec();
    match op {
        AdmissibleOp::AddColumn { src, dst, alpha } => {
            cols[dst] = linalg::axpy(&f, &cols[dst], alpha, &cols[src]);
        }
        AdmissibleOp::AddRow { src, dst, alpha } => add_row(&f, &mut cols, src, dst, alpha),
    }
    Presentation::new(f, p.n_params(), p.row_labels().to_vec(), p.col_labels().to_vec(), cols)
}

fn add_row(f: &crate::PrimeField, cols: &mut [Vec<(usize, FieldElem)>], src: usize, dst: usize, alpha: FieldElem) {
    for c in cols.iter_mut() {
        let v = linalg::coefficient(c, src);
        if v != 0 {
            *c = linalg::axpy(f, c, f.mul(alpha, v), &linalg::unit(dst));
        }
    }
}

/// A presentation with at most one nonzero entry per row and column,
/// obtained from the input by admissible operations.
#[derive(Debug, Clone)]
pub struct NormalForm {
    /// Rows and columns sorted by (label, original index), matrix reduced.
    pub base: Presentation,
    /// `(row, column)` positions of the nonzero entries of `base`.
    pub pivots: Vec<(usize, usize)>,
    /// `base` row `k` is input row `row_order[k]`; likewise for columns.
    pub row_order: Vec<usize>,
    pub col_order: Vec<usize>,
    /// Operations, in terms of `base` indices, applied after sorting.
    pub ops: Vec<AdmissibleOp>,
}

fn sorted_order(labels: &[crate::Grade]) -> Vec<usize> {
    let mut ord: Vec<usize> = (0..labels.len()).collect();
    ord.sort_by(|&a, &b| labels[a].coords()[0].cmp(&labels[b].coords()[0]).then(a.cmp(&b)));
    ord
}

/// Column reduction with lowest-nonzero pivots, then row operations clearing
/// every entry above a pivot.
pub fn reduce_to_normal_form(p: &Presentation) -> Result<NormalForm> {
    if p.n_params() != 1 {
        return Err(Error::ParamCount { expected: 1, found: p.n_params() });
    }
    let f = p.field();
    let row_order = sorted_order(p.row_labels());
    let col_order = sorted_order(p.col_labels());
    let sorted = p.permute(&row_order, &col_order);
    let mut cols: Vec<Vec<(usize, FieldElem)>> = sorted.columns().to_vec();
    let mut ops = Vec::new();

    let mut pivot_of_row: Vec<Option<usize>> = vec![None; p.n_rows()];
    for j in 0..cols.len() {
        while let Some(&(low, v)) = cols[j].last() {
            match pivot_of_row[low] {
                Some(i) => {
                    let pv = cols[i].last().expect("pivot column is nonzero").1;
                    let alpha = f.neg(f.div(v, pv));
                    cols[j] = linalg::axpy(&f, &cols[j], alpha, &cols[i]);
                    ops.push(AdmissibleOp::AddColumn { src: i, dst: j, alpha });
                }
                None => {
                    pivot_of_row[low] = Some(j);
                    break;
                }
            }
        }
    }

    let mut pivots: Vec<(usize, usize)> =
        pivot_of_row.iter().enumerate().filter_map(|(r, c)| c.map(|c| (r, c))).collect();
    for &(r, j) in &pivots {
        let pv = linalg::coefficient(&cols[j], r);
        let above: Vec<(usize, FieldElem)> = cols[j].iter().copied().filter(|&(i, _)| i != r).collect();
        for (i, v) in above {
            let alpha = f.neg(f.div(v, pv));
            add_row(&f, &mut cols, r, i, alpha);
            ops.push(AdmissibleOp::AddRow { src: r, dst: i, alpha });
        }
    }
    pivots.sort_by_key(|&(_, c)| c);

    let base = Presentation::new(f, 1, sorted.row_labels().to_vec(), sorted.col_labels().to_vec(), cols)?;
    Ok(NormalForm { base, pivots, row_order, col_order, ops })
}

impl NormalForm {
    pub fn barcode(&self) -> Barcode {
        let rows = self.base.row_labels();
        let cols = self.base.col_labels();
        let mut has_pivot = vec![false; rows.len()];
        let mut bars = Vec::new();
        for &(r, c) in &self.pivots {
            has_pivot[r] = true;
            let (b, d) = (&rows[r].coords()[0], &cols[c].coords()[0]);
            if b != d {
                bars.push(Bar::finite(b.clone(), d.clone()).expect("row label <= column label"));
            }
        }
        for (r, used) in has_pivot.iter().enumerate() {
            if !used {
                bars.push(Bar { birth: rows[r].coords()[0].clone(), death: Death::Infinite });
            }
        }
        Barcode::new(bars)
    }
}

/// Barcode of the module presented by a 1-parameter presentation.
pub fn barcode_of(p: &Presentation) -> Result<Barcode> {
    Ok(reduce_to_normal_form(p)?.barcode())
}

/// Parameters `t ∈ (0, 1)` at which two labels of the interpolation
/// `(1-t) L0 + t L1` cross, sorted and without repetition.
pub fn interpolation_breakpoints(l0: &LabelVector, l1: &LabelVector) -> Result<Vec<Rational>> {
    if l0.len() != l1.len() {
        return Err(Error::MatrixMismatch("label vectors differ in length".into()));
    }
    let scalar = |v: &LabelVector| -> Result<Vec<Rational>> {
        v.values
            .iter()
            .map(|g| if g.dim() == 1 { Ok(g.coords()[0].clone()) } else { Err(Error::ParamCount { expected: 1, found: g.dim() }) })
            .collect()
    };
    let (a, b) = (scalar(l0)?, scalar(l1)?);
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    let mut out = Vec::new();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let d0 = &a[i] - &a[j];
            let d1 = &b[i] - &b[j];
            if d0 == d1 {
                continue;
            }
            let t = &d0 / (&d0 - &d1);
            if t > zero && t < one {
                out.push(t);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grade::{frac, rat};
    use crate::{Grade, PrimeField};

    fn p1(rows: &[i64], cols: &[i64], entries: Vec<Vec<(usize, FieldElem)>>) -> Presentation {
        Presentation::new(
            PrimeField::f2(),
            1,
            rows.iter().map(|&r| Grade::from_ints(&[r])).collect(),
            cols.iter().map(|&c| Grade::from_ints(&[c])).collect(),
            entries,
        )
        .unwrap()
    }

    #[test]
    fn two_generators_one_relation() {
        let p = p1(&[0, 0], &[2], vec![vec![(0, 1), (1, 1)]]);
        let nf = reduce_to_normal_form(&p).unwrap();
        assert_eq!(nf.pivots.len(), 1);
        for c in nf.base.columns() {
            assert!(c.len() <= 1);
        }
        let expected = Barcode::new(vec![Bar::finite(rat(0), rat(2)).unwrap(), Bar::essential(rat(0))]);
        assert_eq!(nf.barcode(), expected);
    }

    #[test]
    fn trivial_barcodes() {
        assert_eq!(barcode_of(&p1(&[3], &[], vec![])).unwrap(), Barcode::new(vec![Bar::essential(rat(3))]));
        assert!(barcode_of(&p1(&[1], &[1], vec![vec![(0, 1)]])).unwrap().is_empty());
        assert!(barcode_of(&p1(&[], &[], vec![])).unwrap().is_empty());
    }

    #[test]
    fn diagonal_input_is_unchanged() {
        let p = p1(&[0, 1], &[2, 3], vec![vec![(0, 1)], vec![(1, 1)]]);
        let nf = reduce_to_normal_form(&p).unwrap();
        assert!(nf.ops.is_empty());
        assert_eq!(nf.base, p);
    }

    #[test]
    fn reduction_uses_only_admissible_ops() {
        let p = p1(&[0, 1, 1, 2], &[2, 3, 3], vec![vec![(0, 1), (1, 1)], vec![(1, 1), (2, 1)], vec![(0, 1), (2, 1), (3, 1)]]);
        let nf = reduce_to_normal_form(&p).unwrap();
        let mut cur = p.permute(&nf.row_order, &nf.col_order);
        for op in &nf.ops {
            cur = apply_admissible_op(&cur, *op).unwrap();
        }
        assert_eq!(cur, nf.base);
    }

    #[test]
    fn breakpoints() {
        let lv = |v: &[i64]| LabelVector { values: v.iter().map(|&x| Grade::from_ints(&[x])).collect() };
        assert_eq!(interpolation_breakpoints(&lv(&[0, 1]), &lv(&[1, 0])).unwrap(), vec![frac(1, 2)]);
        assert!(interpolation_breakpoints(&lv(&[0, 2]), &lv(&[0, 2])).unwrap().is_empty());
        // All three pairs cross at the same time: 0→3, 2→2 and 4→1 meet at t = 2/3.
        assert_eq!(interpolation_breakpoints(&lv(&[0, 2, 4]), &lv(&[3, 2, 1])).unwrap(), vec![frac(2, 3)]);
    }
}
