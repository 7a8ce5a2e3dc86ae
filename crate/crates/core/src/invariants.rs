//! Pointwise invariants of finitely presented modules: the Hilbert function
//! and the rank invariant.

use crate::grade::Grade;
use crate::linalg::{self, Reducer};
use crate::presentation::Presentation;
use crate::{Error, Result};

/// `dim coker(P)_g = #{rows <= g} - rank(columns <= g)`.
pub fn hilbert_dim(p: &Presentation, g: &Grade) -> usize {
    let generators = p.row_labels().iter().filter(|r| r.leq(g)).count();
    let relations = p
        .col_labels()
        .iter()
        .zip(p.columns())
        .filter(|(c, _)| c.leq(g))
        .map(|(_, col)| col);
    generators - linalg::rank(&p.field(), relations)
}

/// Rank of the structure map `M_s -> M_t`, computed as
/// `rank([E_s | R_t]) - rank(R_t)` with `E_s` the unit columns of generators
/// below `s` and `R_t` the relation columns below `t`.
pub fn rank_invariant(p: &Presentation, s: &Grade, t: &Grade) -> Result<usize> {
    if !s.leq(t) {
        return Err(Error::NotComparable);
    }
    let mut red = Reducer::new(p.field());
    for (c, col) in p.col_labels().iter().zip(p.columns()) {
        if c.leq(t) {
            red.insert(col.clone(), Vec::new());
        }
    }
    let base = red.rank();
    for (i, r) in p.row_labels().iter().enumerate() {
        if r.leq(s) {
            red.insert(linalg::unit(i), Vec::new());
        }
    }
    Ok(red.rank() - base)
}

/// All grid points `(x_i, y_j)` over the label coordinates of the given
/// presentations. Hilbert functions of the presentations are constant on the
/// half-open cells of this grid, so agreement on the grid is agreement everywhere.
pub fn label_grid(ps: &[&Presentation]) -> Vec<Grade> {
    let n = ps.first().map_or(1, |p| p.n_params());
    let mut axes: Vec<Vec<crate::Rational>> = vec![Vec::new(); n];
    for p in ps {
        for g in p.row_labels().iter().chain(p.col_labels()) {
            for (k, c) in g.coords().iter().enumerate() {
                axes[k].push(c.clone());
            }
        }
    }
    for a in axes.iter_mut() {
        a.sort();
        a.dedup();
    }
    match n {
        1 => axes[0].iter().map(|x| Grade::scalar(x.clone())).collect(),
        _ => {
            let mut out = Vec::with_capacity(axes[0].len() * axes[1].len());
            for y in &axes[1] {
                for x in &axes[0] {
                    out.push(Grade::xy(x.clone(), y.clone()));
                }
            }
            out
        }
    }
}

/// Exact equality of Hilbert functions, checked on the joint label grid.
pub fn same_hilbert_function(a: &Presentation, b: &Presentation) -> bool {
    a.n_params() == b.n_params() && label_grid(&[a, b]).iter().all(|g| hilbert_dim(a, g) == hilbert_dim(b, g))
}
