//! Bifiltered cell complexes, their chains of free modules, and homology
//! presentations.
//!
//! Kernels of morphisms of free 2-parameter modules are free; a basis is
//! found by processing the domain basis in colexicographic grade order and
//! recording, for every basis element `b`, the cheapest relation whose
//! colex-largest term is `b`. The resulting basis has pairwise distinct
//! leading terms, so membership and coordinates are computed by lead reduction.

use std::collections::HashMap;

use crate::field::{FieldElem, PrimeField};
use crate::grade::Grade;
use crate::linalg::{self, Reducer};
use crate::norm::{NormAccumulator, NormValue, PExponent};
use crate::presentation::{Presentation, SparseColumn};
use crate::{Error, Result};

/// An unfiltered CW complex given by its cells and cellular boundary
/// coefficients. Cells are referred to by their index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    field: PrimeField,
    ids: Vec<String>,
    dims: Vec<usize>,
    boundaries: Vec<SparseColumn>,
}

impl CellComplex {
    /// Validates face dimensions and `∂∂ = 0`. `ids` are display names.
    pub fn new(
        field: PrimeField,
        ids: Vec<String>,
        dims: Vec<usize>,
        boundaries: Vec<Vec<(usize, FieldElem)>>,
    ) -> Result<Self> {
        let n = dims.len();
        if ids.len() != n || boundaries.len() != n {
            return Err(Error::InvalidComplex("ids, dims and boundaries differ in length".into()));
        }
        let mut clean = Vec::with_capacity(n);
        for (k, b) in boundaries.into_iter().enumerate() {
            let mut col = Vec::new();
            for (face, v) in b {
                if face >= n {
                    return Err(Error::InvalidComplex(format!("cell {} has unknown face {face}", ids[k])));
                }
                if dims[face] + 1 != dims[k] {
                    return Err(Error::InvalidComplex(format!(
                        "cell {} of dimension {} has face {} of dimension {}",
                        ids[k], dims[k], ids[face], dims[face]
                    )));
                }
                col = linalg::axpy(&field, &col, v % field.order(), &linalg::unit(face));
            }
            clean.push(col);
        }
        let cx = CellComplex { field, ids, dims, boundaries: clean };
        for k in 0..n {
            let mut dd: SparseColumn = Vec::new();
            for &(face, v) in &cx.boundaries[k] {
                dd = linalg::axpy(&field, &dd, v, &cx.boundaries[face]);
            }
            if !dd.is_empty() {
                return Err(Error::BoundarySquare(k));
            }
        }
        Ok(cx)
    }

    /// A simplicial complex from vertex lists. Every face of every simplex
    /// must itself be listed; boundaries get the usual alternating signs.
    pub fn simplicial(field: PrimeField, simplices: &[Vec<usize>]) -> Result<Self> {
        let keys: Vec<Vec<usize>> = simplices
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.sort_unstable();
                s
            })
            .collect();
        let mut index = HashMap::new();
        for (k, s) in keys.iter().enumerate() {
            if s.is_empty() || s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex(format!("simplex {k} has repeated or no vertices")));
            }
            if index.insert(s.clone(), k).is_some() {
                return Err(Error::InvalidComplex(format!("simplex {k} listed twice")));
            }
        }
        let mut boundaries = Vec::with_capacity(keys.len());
        for s in &keys {
            let mut b = Vec::new();
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(i);
                    let f = *index
                        .get(&face)
                        .ok_or_else(|| Error::InvalidComplex(format!("missing face {face:?} of {s:?}")))?;
                    let sign = if i % 2 == 0 { 1 } else { field.neg(1) };
                    b.push((f, sign));
                }
            }
            boundaries.push(b);
        }
        let ids = (0..keys.len()).map(|k| k.to_string()).collect();
        let dims = keys.iter().map(|s| s.len() - 1).collect();
        CellComplex::new(field, ids, dims, boundaries)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self, k: usize) -> &SparseColumn {
        &self.boundaries[k]
    }

    /// Indices of the `j`-cells in increasing order.
    pub fn cells_of_dim(&self, j: usize) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.dims[k] == j).collect()
    }
}

/// A cell complex with a monotone grade on every cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    complex: CellComplex,
    n_params: usize,
    grades: Vec<Grade>,
}

impl FilteredComplex {
    pub fn new(complex: CellComplex, n_params: usize, grades: Vec<Grade>) -> Result<Self> {
        if grades.len() != complex.len() {
            return Err(Error::InvalidComplex("one grade per cell is required".into()));
        }
        for g in &grades {
            if g.dim() != n_params {
                return Err(Error::GradeArity { expected: n_params, found: g.dim() });
            }
        }
        for k in 0..complex.len() {
            for &(face, _) in complex.boundary(k) {
                if !grades[face].leq(&grades[k]) {
                    return Err(Error::NotMonotone { cell: k, face });
                }
            }
        }
        Ok(FilteredComplex { complex, n_params, grades })
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn grades(&self) -> &[Grade] {
        &self.grades
    }

    pub fn field(&self) -> PrimeField {
        self.complex.field
    }
}

/// `‖f - g‖_p` over all cells and coordinates of two filtrations of one complex.
pub fn filtration_distance(f: &FilteredComplex, g: &FilteredComplex, p: &PExponent) -> Result<NormValue> {
    if f.complex != g.complex {
        return Err(Error::InvalidComplex("filtrations live on different complexes".into()));
    }
    let mut acc = NormAccumulator::new(p);
    for (a, b) in f.grades.iter().zip(&g.grades) {
        for (x, y) in a.coords().iter().zip(b.coords()) {
            acc.push(&(x - y));
        }
    }
    Ok(acc.finish())
}

/// A morphism of free modules given by its matrix in graded bases. Entry
/// `(i, j)` nonzero requires `codomain[i] <= domain[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeMorphism {
    matrix: Presentation,
}

impl FreeMorphism {
    pub fn new(
        field: PrimeField,
        n_params: usize,
        codomain: Vec<Grade>,
        domain: Vec<Grade>,
        columns: Vec<SparseColumn>,
    ) -> Result<Self> {
        Ok(FreeMorphism { matrix: Presentation::new(field, n_params, codomain, domain, columns)? })
    }

    pub fn field(&self) -> PrimeField {
        self.matrix.field()
    }

    pub fn n_params(&self) -> usize {
        self.matrix.n_params()
    }

    pub fn domain(&self) -> &[Grade] {
        self.matrix.col_labels()
    }

    pub fn codomain(&self) -> &[Grade] {
        self.matrix.row_labels()
    }

    pub fn columns(&self) -> &[SparseColumn] {
        self.matrix.columns()
    }

    /// The same matrix read as a presentation of the cokernel.
    pub fn as_presentation(&self) -> &Presentation {
        &self.matrix
    }
}

/// Matrix of `∂_j` from `j`-cells to `(j-1)`-cells, both in index order.
pub fn boundary_morphism(x: &FilteredComplex, j: usize) -> FreeMorphism {
    let cx = &x.complex;
    let cols = cx.cells_of_dim(j);
    let rows = if j == 0 { Vec::new() } else { cx.cells_of_dim(j - 1) };
    let pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let columns = cols
        .iter()
        .map(|&k| {
            let mut c: SparseColumn = cx.boundary(k).iter().map(|&(f, v)| (pos[&f], v)).collect();
            c.sort_by_key(|&(i, _)| i);
            c
        })
        .collect();
    FreeMorphism::new(
        cx.field,
        x.n_params,
        rows.iter().map(|&k| x.grades[k].clone()).collect(),
        cols.iter().map(|&k| x.grades[k].clone()).collect(),
        columns,
    )
    .expect("monotone filtrations give valid boundary morphisms")
}

/// A free basis of a kernel, as coordinate vectors over the domain basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelBasis {
    pub columns: Vec<SparseColumn>,
    pub grades: Vec<Grade>,
    /// Colex-leading domain index of each column; pairwise distinct.
    pub leads: Vec<usize>,
}

impl KernelBasis {
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }
}

fn colex_order(grades: &[Grade]) -> Vec<usize> {
    let mut ord: Vec<usize> = (0..grades.len()).collect();
    ord.sort_by(|&a, &b| grades[a].colex_cmp(&grades[b]).then(a.cmp(&b)));
    ord
}

fn first(g: &Grade) -> &crate::Rational {
    &g.coords()[0]
}

/// Kernel basis with distinct colex leading terms. Each element's grade is
/// the join of the grades in its support.
pub fn kernel_basis(gamma: &FreeMorphism) -> KernelBasis {
    let field = gamma.field();
    let dom = gamma.domain();
    let ord = colex_order(dom);
    let mut out = KernelBasis { columns: Vec::new(), grades: Vec::new(), leads: Vec::new() };
    for (t, &b) in ord.iter().enumerate() {
        let target = gamma.columns()[b].clone();
        let mut earlier: Vec<usize> = ord[..t].to_vec();
        earlier.sort_by(|&a, &c| first(&dom[a]).cmp(first(&dom[c])).then(a.cmp(&c)));
        let mut red = Reducer::new(field);
        let mut k = 0;
        // Add all candidates not exceeding b in x first, then one x-value at a time.
        while k < earlier.len() && first(&dom[earlier[k]]) <= first(&dom[b]) {
            red.insert(gamma.columns()[earlier[k]].clone(), linalg::unit(earlier[k]));
            k += 1;
        }
        loop {
            let (rest, combo) = red.reduce(target.clone(), linalg::unit(b));
            if rest.is_empty() {
                let grade = combo.iter().fold(dom[b].clone(), |g, &(i, _)| g.join(&dom[i]));
                out.columns.push(combo);
                out.grades.push(grade);
                out.leads.push(b);
                break;
            }
            if k == earlier.len() {
                break;
            }
            let x = first(&dom[earlier[k]]).clone();
            while k < earlier.len() && *first(&dom[earlier[k]]) == x {
                red.insert(gamma.columns()[earlier[k]].clone(), linalg::unit(earlier[k]));
                k += 1;
            }
        }
    }
    out
}

/// Coordinates of a kernel vector in the basis, by repeated removal of the
/// colex-leading term. `None` if the vector is not in the span.
pub fn kernel_coordinates(
    field: &PrimeField,
    domain: &[Grade],
    basis: &KernelBasis,
    v: &SparseColumn,
) -> Option<SparseColumn> {
    let ord = colex_order(domain);
    let mut rank = vec![0; domain.len()];
    for (r, &i) in ord.iter().enumerate() {
        rank[i] = r;
    }
    let by_lead: HashMap<usize, usize> = basis.leads.iter().enumerate().map(|(k, &b)| (b, k)).collect();
    let mut v = v.clone();
    let mut coords: SparseColumn = Vec::new();
    while let Some(&(lead, val)) = v.iter().max_by_key(|&&(i, _)| rank[i]) {
        let k = *by_lead.get(&lead)?;
        let col = &basis.columns[k];
        let lead_val = linalg::coefficient(col, lead);
        let alpha = field.div(val, lead_val);
        v = linalg::axpy(field, &v, field.neg(alpha), col);
        coords = linalg::axpy(field, &coords, alpha, &linalg::unit(k));
    }
    Some(coords)
}

/// Presentation of `H_j` of the filtered complex.
///
/// Rows are a kernel basis of `∂_j`, columns are images of `(j+1)`-cells
/// written in that basis. With one parameter the boundary columns are first
/// reduced in grade order and only the nonzero reduced columns are kept.
pub fn homology_presentation(x: &FilteredComplex, j: usize) -> Presentation {
    let field = x.field();
    let dj = boundary_morphism(x, j);
    let kernel = kernel_basis(&dj);
    let dj1 = boundary_morphism(x, j + 1);

    let mut rel_cols: Vec<(Grade, SparseColumn)> = Vec::new();
    if x.n_params == 1 {
        let mut order: Vec<usize> = (0..dj1.domain().len()).collect();
        order.sort_by(|&a, &b| dj1.domain()[a].colex_cmp(&dj1.domain()[b]).then(a.cmp(&b)));
        let mut red = Reducer::new(field);
        for k in order {
            let (v, _) = red.reduce(dj1.columns()[k].clone(), Vec::new());
            if !v.is_empty() {
                red.insert(v.clone(), Vec::new());
                rel_cols.push((dj1.domain()[k].clone(), v));
            }
        }
    } else {
        for (g, c) in dj1.domain().iter().zip(dj1.columns()) {
            rel_cols.push((g.clone(), c.clone()));
        }
    }
    let mut col_labels = Vec::with_capacity(rel_cols.len());
    let mut columns = Vec::with_capacity(rel_cols.len());
    for (g, c) in rel_cols {
        let coords = kernel_coordinates(&field, dj.domain(), &kernel, &c).expect("boundaries are cycles");
        col_labels.push(g);
        columns.push(coords);
    }
    Presentation::new(field, x.n_params, kernel.grades.clone(), col_labels, columns)
        .expect("boundaries of cells of grade g lie in the kernel at g")
}

/// Injective maps `j_x`, `j_y` from the kernel basis to the domain basis,
/// preserving the x-grade and the y-grade respectively.
pub fn grade_injections(gamma: &FreeMorphism, basis: &KernelBasis) -> Result<(Vec<usize>, Vec<usize>)> {
    let dom = gamma.domain();
    if gamma.n_params() != 2 {
        return Err(Error::ParamCount { expected: 2, found: gamma.n_params() });
    }
    let jy = basis.leads.clone();
    // Preferred choice: lex-largest support element sharing the x-grade.
    let preferred: Vec<Option<usize>> = basis
        .columns
        .iter()
        .zip(&basis.grades)
        .map(|(c, g)| {
            c.iter()
                .map(|&(i, _)| i)
                .filter(|&i| dom[i].x() == g.x())
                .max_by(|&a, &b| dom[a].lex_cmp(&dom[b]).then(a.cmp(&b)))
        })
        .collect();
    let mut seen = std::collections::HashSet::new();
    if preferred.iter().all(|o| o.is_some_and(|i| seen.insert(i))) {
        return Ok((preferred.into_iter().map(|o| o.unwrap()).collect(), jy));
    }
    // Otherwise match kernel elements to domain elements with equal x-grade.
    let candidates: Vec<Vec<usize>> = basis
        .grades
        .iter()
        .map(|g| (0..dom.len()).filter(|&i| dom[i].x() == g.x()).collect())
        .collect();
    let jx = bipartite(&candidates, dom.len())
        .ok_or_else(|| Error::Invalid("no x-grade preserving injection exists".into()))?;
    Ok((jx, jy))
}

fn bipartite(candidates: &[Vec<usize>], n_right: usize) -> Option<Vec<usize>> {
    fn augment(i: usize, cand: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &j in &cand[i] {
            if !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|o| augment(o, cand, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; n_right];
    for i in 0..candidates.len() {
        if !augment(i, candidates, &mut vec![false; n_right], &mut owner) {
            return None;
        }
    }
    let mut out = vec![0; candidates.len()];
    for (j, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            out[*i] = j;
        }
    }
    Some(out)
}

/// A complex realizing a pair of presentations with a common matrix `T`:
/// one vertex, a 1-cell per row and a 2-cell per column with boundary given
/// by that column. `H_1` of the two filtrations recovers the two modules.
#[derive(Debug, Clone)]
pub struct Lift {
    pub f: FilteredComplex,
    pub g: FilteredComplex,
}

pub fn lift_presentations(pm: &Presentation, pn: &Presentation) -> Result<Lift> {
    if !pm.same_matrix(pn) || pm.n_params() != pn.n_params() {
        return Err(Error::MatrixMismatch("lifting needs a common matrix".into()));
    }
    let field = pm.field();
    let (r, c) = (pm.n_rows(), pm.n_cols());
    let mut ids = vec!["v".to_string()];
    let mut dims = vec![0];
    let mut boundaries = vec![Vec::new()];
    for i in 0..r {
        ids.push(format!("e{i}"));
        dims.push(1);
        boundaries.push(Vec::new());
    }
    for j in 0..c {
        ids.push(format!("d{j}"));
        dims.push(2);
        boundaries.push(pm.column(j).iter().map(|&(i, v)| (1 + i, v)).collect());
    }
    let cx = CellComplex::new(field, ids, dims, boundaries)?;
    let bottom = match (pm.label_bounds(), pn.label_bounds()) {
        (Some((a, _)), Some((b, _))) => a.meet(&b),
        _ => Grade::new(vec![crate::Rational::from_integer(0.into()); pm.n_params()]),
    };
    let filt = |p: &Presentation| {
        let mut grades = vec![bottom.clone()];
        grades.extend(p.row_labels().iter().cloned());
        grades.extend(p.col_labels().iter().cloned());
        FilteredComplex::new(cx.clone(), p.n_params(), grades)
    };
    Ok(Lift { f: filt(pm)?, g: filt(pn)? })
}
