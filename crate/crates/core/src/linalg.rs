//! Sparse column arithmetic over prime fields.

use std::collections::HashMap;

use crate::field::{FieldElem, PrimeField};
use crate::presentation::SparseColumn;

/// Returns `a + alpha * b`.
pub fn axpy(field: &PrimeField, a: &SparseColumn, alpha: FieldElem, b: &SparseColumn) -> SparseColumn {
    if alpha == 0 {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, field.mul(alpha, b[j].1)));
            j += 1;
        } else {
            let v = field.add(a[i].1, field.mul(alpha, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(field: &PrimeField, a: &SparseColumn, alpha: FieldElem) -> SparseColumn {
    if alpha == 0 {
        return Vec::new();
    }
    a.iter().map(|&(i, v)| (i, field.mul(alpha, v))).collect()
}

pub fn unit(i: usize) -> SparseColumn {
    vec![(i, 1)]
}

pub fn coefficient(col: &SparseColumn, i: usize) -> FieldElem {
    col.binary_search_by_key(&i, |&(r, _)| r).map(|k| col[k].1).unwrap_or(0)
}

/// Incremental column echelon form keyed by lowest nonzero (largest row index),
/// tracking for every stored column the combination of inputs that produced it.
#[derive(Debug, Clone)]
pub struct Reducer {
    field: PrimeField,
    pivots: HashMap<usize, (SparseColumn, SparseColumn)>,
}

impl Reducer {
    pub fn new(field: PrimeField) -> Self {
        Reducer { field, pivots: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` (with bookkeeping `combo`) against the stored pivots until
    /// its lowest entry is not a stored pivot or it vanishes.
    pub fn reduce(&self, mut v: SparseColumn, mut combo: SparseColumn) -> (SparseColumn, SparseColumn) {
        while let Some(&(low, val)) = v.last() {
            match self.pivots.get(&low) {
                Some((pv, pc)) => {
                    let pval = pv.last().expect("stored pivot column is nonzero").1;
                    let alpha = self.field.neg(self.field.div(val, pval));
                    v = axpy(&self.field, &v, alpha, pv);
                    combo = axpy(&self.field, &combo, alpha, pc);
                }
                None => break,
            }
        }
        (v, combo)
    }

    /// Reduces and stores `v`; returns `Some(combo)` when `v` was dependent
    /// (then `combo` is a relation among the inserted columns).
    pub fn insert(&mut self, v: SparseColumn, combo: SparseColumn) -> Option<SparseColumn> {
        let (v, combo) = self.reduce(v, combo);
        match v.last() {
            Some(&(low, _)) => {
                self.pivots.insert(low, (v, combo));
                None
            }
            None => Some(combo),
        }
    }

    pub fn is_in_span(&self, v: &SparseColumn) -> bool {
        self.reduce(v.clone(), Vec::new()).0.is_empty()
    }
}

/// Rank of a set of sparse columns.
pub fn rank<'a>(field: &PrimeField, cols: impl IntoIterator<Item = &'a SparseColumn>) -> usize {
    let mut red = Reducer::new(*field);
    for c in cols {
        red.insert(c.clone(), Vec::new());
    }
    red.rank()
}
