//! Graded presentation matrices.

use crate::field::{FieldElem, PrimeField};
use crate::grade::{Grade, Rational};
use crate::{Error, Result};

/// A sparse column: `(row, coefficient)` pairs, sorted by row, no zeros.
pub type SparseColumn = Vec<(usize, FieldElem)>;

/// A presentation matrix over a prime field with a grade label on every row
/// (generator) and column (relation). It presents the cokernel of the
/// induced morphism of free modules.
///
/// Invariant: a nonzero entry `(i, j)` implies `row_labels[i] <= col_labels[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    field: PrimeField,
    n_params: usize,
    row_labels: Vec<Grade>,
    col_labels: Vec<Grade>,
    columns: Vec<SparseColumn>,
}

/// Labels of a presentation flattened as rows first, then columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVector {
    pub values: Vec<Grade>,
}

impl LabelVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn normalize_column(field: &PrimeField, col: Vec<(usize, FieldElem)>) -> SparseColumn {
    let mut col: Vec<(usize, FieldElem)> = col.into_iter().map(|(r, v)| (r, v % field.order())).collect();
    col.sort_by_key(|&(r, _)| r);
    let mut out: SparseColumn = Vec::with_capacity(col.len());
    for (r, v) in col {
        match out.last_mut() {
            Some((lr, lv)) if *lr == r => *lv = field.add(*lv, v),
            _ => out.push((r, v)),
        }
    }
    out.retain(|&(_, v)| v != 0);
    out
}

impl Presentation {
    /// Builds and validates a presentation. Duplicate row indices within a column are summed.
    pub fn new(
        field: PrimeField,
        n_params: usize,
        row_labels: Vec<Grade>,
        col_labels: Vec<Grade>,
        columns: Vec<Vec<(usize, FieldElem)>>,
    ) -> Result<Self> {
        if !(1..=2).contains(&n_params) {
            return Err(Error::Invalid(format!("unsupported parameter count {n_params}")));
        }
        if columns.len() != col_labels.len() {
            return Err(Error::Invalid(format!(
                "{} columns but {} column labels",
                columns.len(),
                col_labels.len()
            )));
        }
        for g in row_labels.iter().chain(&col_labels) {
            if g.dim() != n_params {
                return Err(Error::GradeArity { expected: n_params, found: g.dim() });
            }
        }
        let columns: Vec<SparseColumn> = columns.into_iter().map(|c| normalize_column(&field, c)).collect();
        for (j, col) in columns.iter().enumerate() {
            for &(i, _) in col {
                if i >= row_labels.len() {
                    return Err(Error::Invalid(format!("row index {i} out of range in column {j}")));
                }
                if !row_labels[i].leq(&col_labels[j]) {
                    return Err(Error::LabelOrder {
                        row: i,
                        col: j,
                        row_label: row_labels[i].to_string(),
                        col_label: col_labels[j].to_string(),
                    });
                }
            }
        }
        Ok(Presentation { field, n_params, row_labels, col_labels, columns })
    }

    /// Presentation of a free module: rows only.
    pub fn free(field: PrimeField, n_params: usize, generators: Vec<Grade>) -> Result<Self> {
        Presentation::new(field, n_params, generators, vec![], vec![])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn n_rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[Grade] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[Grade] {
        &self.col_labels
    }

    pub fn columns(&self) -> &[SparseColumn] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &SparseColumn {
        &self.columns[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElem {
        self.columns[j]
            .binary_search_by_key(&i, |&(r, _)| r)
            .map(|k| self.columns[j][k].1)
            .unwrap_or(0)
    }

    pub fn is_free(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn labels(&self) -> LabelVector {
        LabelVector { values: self.row_labels.iter().chain(&self.col_labels).cloned().collect() }
    }

    /// True when the unlabeled matrices (field, shape and entries) agree.
    pub fn same_matrix(&self, other: &Presentation) -> bool {
        self.field == other.field
            && self.n_rows() == other.n_rows()
            && self.columns == other.columns
    }

    /// Same underlying matrix with new labels; the label order invariant is rechecked.
    pub fn relabel(&self, row_labels: Vec<Grade>, col_labels: Vec<Grade>) -> Result<Presentation> {
        if row_labels.len() != self.n_rows() || col_labels.len() != self.n_cols() {
            return Err(Error::MatrixMismatch("label count differs from matrix shape".into()));
        }
        let n = row_labels.first().or(col_labels.first()).map_or(self.n_params, |g| g.dim());
        Presentation::new(self.field, n, row_labels, col_labels, self.columns.clone())
    }

    pub fn relabel_vector(&self, labels: &LabelVector) -> Result<Presentation> {
        let r = self.n_rows();
        if labels.len() != r + self.n_cols() {
            return Err(Error::MatrixMismatch("label vector length differs from r + c".into()));
        }
        self.relabel(labels.values[..r].to_vec(), labels.values[r..].to_vec())
    }

    /// Translates every label by the same vector.
    pub fn translate(&self, by: &[Rational]) -> Presentation {
        Presentation {
            field: self.field,
            n_params: self.n_params,
            row_labels: self.row_labels.iter().map(|g| g.translate(by)).collect(),
            col_labels: self.col_labels.iter().map(|g| g.translate(by)).collect(),
            columns: self.columns.clone(),
        }
    }

    /// Reorders rows and columns: new row `k` is old row `row_order[k]`, likewise for columns.
    pub fn permute(&self, row_order: &[usize], col_order: &[usize]) -> Presentation {
        let mut inverse_row = vec![0; row_order.len()];
        for (new, &old) in row_order.iter().enumerate() {
            inverse_row[old] = new;
        }
        let columns = col_order
            .iter()
            .map(|&j| {
                let mut c: SparseColumn = self.columns[j].iter().map(|&(i, v)| (inverse_row[i], v)).collect();
                c.sort_by_key(|&(i, _)| i);
                c
            })
            .collect();
        Presentation {
            field: self.field,
            n_params: self.n_params,
            row_labels: row_order.iter().map(|&i| self.row_labels[i].clone()).collect(),
            col_labels: col_order.iter().map(|&j| self.col_labels[j].clone()).collect(),
            columns,
        }
    }

    /// Dense copy of the matrix, row-major.
    pub fn dense(&self) -> Vec<Vec<FieldElem>> {
        let mut m = vec![vec![0; self.n_cols()]; self.n_rows()];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                m[i][j] = v;
            }
        }
        m
    }

    /// Componentwise minimum and maximum over all labels, if any.
    pub fn label_bounds(&self) -> Option<(Grade, Grade)> {
        let mut it = self.row_labels.iter().chain(&self.col_labels);
        let first = it.next()?.clone();
        Some(it.fold((first.clone(), first), |(lo, hi), g| (lo.meet(g), hi.join(g))))
    }
}
