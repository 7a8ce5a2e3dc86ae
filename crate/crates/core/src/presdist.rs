//! Label distances between presentations that share a matrix, and the upper
//! bounds on the presentation distance they give.
//!
//! Only bounds are computed: a pairing heuristic yields one feasible pair of
//! presentations, and chains of pairs give sums of label distances.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::field::PrimeField;
use crate::grade::{rational_to_f64, Grade, Rational};
use crate::invariants::same_hilbert_function;
use crate::linalg::{self, Reducer};
use crate::matchdist::{self, DistanceReport};
use crate::norm::{NormAccumulator, NormValue, PExponent};
use crate::presentation::{Presentation, SparseColumn};
use crate::{Error, Result};

/// Two presentations with the same matrix; only their labels differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairedPresentations {
    p: Presentation,
    q: Presentation,
}

impl PairedPresentations {
    pub fn new(p: Presentation, q: Presentation) -> Result<Self> {
        if !p.same_matrix(&q) || p.n_params() != q.n_params() {
            return Err(Error::MatrixMismatch(format!(
                "{}x{} and {}x{} matrices differ",
                p.n_rows(),
                p.n_cols(),
                q.n_rows(),
                q.n_cols()
            )));
        }
        Ok(PairedPresentations { p, q })
    }

    pub fn first(&self) -> &Presentation {
        &self.p
    }

    pub fn second(&self) -> &Presentation {
        &self.q
    }
}

/// `‖labels(P) - labels(P')‖_p`, each label difference measured in ℓp and the
/// results aggregated in ℓp (so: ℓp over all coordinates).
pub fn label_distance(pp: &PairedPresentations, p: &PExponent) -> NormValue {
    let mut acc = NormAccumulator::new(p);
    for (a, b) in pp.p.labels().values.iter().zip(&pp.q.labels().values) {
        for (x, y) in a.coords().iter().zip(b.coords()) {
            acc.push(&(x - y));
        }
    }
    acc.finish()
}

/// How a pairing was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingMethod {
    /// The two matrices already agree.
    Direct,
    /// Both modules are free with equally many generators, aligned in sorted order.
    SortedFree,
    /// One module is free; it is re-presented with the other one's matrix.
    FreeEmbedding,
    /// Block matrix holding both matrices and gluing their cokernels.
    Block,
}

impl fmt::Display for PairingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PairingMethod::Direct => "direct",
            PairingMethod::SortedFree => "sorted-free",
            PairingMethod::FreeEmbedding => "free-embedding",
            PairingMethod::Block => "block",
        };
        f.write_str(s)
    }
}

/// `r - rank(T)`: the dimension of the module at grades above every label.
pub fn generic_dimension(p: &Presentation) -> usize {
    p.n_rows() - linalg::rank(&p.field(), p.columns())
}

/// Rows whose unit vectors complete the column space to everything, tried in
/// the given order.
fn cokernel_rows(p: &Presentation, order: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut red = Reducer::new(p.field());
    for c in p.columns() {
        red.insert(c.clone(), Vec::new());
    }
    let mut out = Vec::new();
    for i in order {
        if red.insert(linalg::unit(i), Vec::new()).is_none() {
            out.push(i);
        }
    }
    out
}

fn join_all(gs: &[Grade]) -> Option<Grade> {
    let (first, rest) = gs.split_first()?;
    Some(rest.iter().fold(first.clone(), |a, b| a.join(b)))
}

fn sorted_indices(gs: &[Grade]) -> Vec<usize> {
    let mut ord: Vec<usize> = (0..gs.len()).collect();
    ord.sort_by(|&a, &b| gs[a].lex_cmp(&gs[b]).then(a.cmp(&b)));
    ord
}

/// Re-presents the free module on `gens` with the matrix of `m`, sending the
/// free generators to the rows `basis` (a cokernel basis) and every other
/// row and column to the join of the generators.
fn free_embedding(m: &Presentation, gens: &[Grade], basis: &[usize]) -> Result<Presentation> {
    let top = join_all(gens).expect("at least one generator");
    let mut rows = vec![top.clone(); m.n_rows()];
    let by_label = {
        let mut b = basis.to_vec();
        b.sort_by(|&a, &c| m.row_labels()[a].lex_cmp(&m.row_labels()[c]).then(a.cmp(&c)));
        b
    };
    for (&row, &g) in by_label.iter().zip(sorted_indices(gens).iter()) {
        rows[row] = gens[g].clone();
    }
    m.relabel(rows, vec![top; m.n_cols()])
}

fn block_pairing(m: &Presentation, n: &Presentation) -> Result<PairedPresentations> {
    let f: PrimeField = m.field();
    let sm = cokernel_rows(m, 0..m.n_rows());
    let sn = cokernel_rows(n, 0..n.n_rows());
    let (rm, rn) = (m.n_rows(), n.n_rows());
    let mut columns: Vec<SparseColumn> = m.columns().to_vec();
    columns.extend(n.columns().iter().map(|c| c.iter().map(|&(i, v)| (rm + i, v)).collect()));
    for (&a, &b) in sm.iter().zip(&sn) {
        columns.push(vec![(a, 1), (rm + b, f.neg(1))]);
    }
    let zero = Grade::new(vec![Rational::zero(); m.n_params()]);
    let top_m = join_all(&m.labels().values).unwrap_or_else(|| zero.clone());
    let top_n = join_all(&n.labels().values).unwrap_or(zero);
    let d = sm.len();

    let side = |own: &Presentation, own_first: bool, top: &Grade| -> Result<Presentation> {
        let mut rows = Vec::with_capacity(rm + rn);
        let mut cols = Vec::with_capacity(columns.len());
        if own_first {
            rows.extend(own.row_labels().iter().cloned());
            rows.extend(std::iter::repeat_n(top.clone(), rn));
            cols.extend(own.col_labels().iter().cloned());
            cols.extend(std::iter::repeat_n(top.clone(), n.n_cols() + d));
        } else {
            rows.extend(std::iter::repeat_n(top.clone(), rm));
            rows.extend(own.row_labels().iter().cloned());
            cols.extend(std::iter::repeat_n(top.clone(), m.n_cols()));
            cols.extend(own.col_labels().iter().cloned());
            cols.extend(std::iter::repeat_n(top.clone(), d));
        }
        Presentation::new(f, own.n_params(), rows, cols, columns.clone())
    };
    PairedPresentations::new(side(m, true, &top_m)?, side(n, false, &top_n)?)
}

/// A feasible pairing of two presentations, chosen as the best (smallest
/// label distance for `p`) among a few constructions. Fails when no pairing
/// exists, which happens exactly when the generic dimensions differ.
pub fn pad_and_pair(m: &Presentation, n: &Presentation, p: &PExponent) -> Result<(PairedPresentations, PairingMethod)> {
    if m.field() != n.field() || m.n_params() != n.n_params() {
        return Err(Error::MatrixMismatch("different fields or parameter counts".into()));
    }
    let (dm, dn) = (generic_dimension(m), generic_dimension(n));
    if dm != dn {
        return Err(Error::NoPairing(format!("generic dimensions {dm} and {dn} differ")));
    }
    let mut candidates: Vec<(PairedPresentations, PairingMethod)> = Vec::new();
    if m.same_matrix(n) {
        candidates.push((PairedPresentations::new(m.clone(), n.clone())?, PairingMethod::Direct));
    }
    if m.is_free() && n.is_free() && m.n_rows() == n.n_rows() && m.n_cols() == 0 && n.n_cols() == 0 {
        let a = m.permute(&sorted_indices(m.row_labels()), &[]);
        let b = n.permute(&sorted_indices(n.row_labels()), &[]);
        candidates.push((PairedPresentations::new(a, b)?, PairingMethod::SortedFree));
    }
    for (free, other, free_first) in [(n, m, false), (m, n, true)] {
        if free.n_cols() == 0 && free.n_rows() > 0 && !other.is_free() {
            let orders: [Vec<usize>; 2] = [(0..other.n_rows()).collect(), (0..other.n_rows()).rev().collect()];
            for order in orders {
                let basis = cokernel_rows(other, order.into_iter());
                let emb = free_embedding(other, free.row_labels(), &basis)?;
                let pair = if free_first {
                    PairedPresentations::new(emb, other.clone())?
                } else {
                    PairedPresentations::new(other.clone(), emb)?
                };
                candidates.push((pair, PairingMethod::FreeEmbedding));
            }
        }
    }
    candidates.push((block_pairing(m, n)?, PairingMethod::Block));

    let mut best: Option<(NormValue, usize)> = None;
    for (k, (pp, _)) in candidates.iter().enumerate() {
        let d = label_distance(pp, p);
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, k));
        }
    }
    let k = best.expect("the block pairing always exists").1;
    Ok(candidates.swap_remove(k))
}

/// Sum of link label distances; exact when every link is rational.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainBound {
    pub value: f64,
    pub exact: Option<Rational>,
}

/// Upper bound for the presentation distance between the ends of a chain of
/// pairings. Consecutive links must present the same module in between,
/// which is checked through Hilbert functions.
pub fn chain_upper_bound(chain: &[PairedPresentations], p: &PExponent) -> Result<ChainBound> {
    for (k, w) in chain.windows(2).enumerate() {
        if !same_hilbert_function(&w[0].q, &w[1].p) {
            return Err(Error::ChainMismatch(format!("links {k} and {} do not meet", k + 1)));
        }
    }
    let mut value = 0.0;
    let mut exact = Some(Rational::zero());
    for link in chain {
        let d = label_distance(link, p);
        value += d.to_f64();
        exact = match (exact, d.exact()) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
    }
    if let Some(e) = &exact {
        value = rational_to_f64(e);
    }
    Ok(ChainBound { value, exact })
}

/// As [`chain_upper_bound`], additionally checking that the chain starts at
/// `start` and ends at `end`. An empty chain is only valid when they agree.
pub fn chain_upper_bound_between(
    start: &Presentation,
    end: &Presentation,
    chain: &[PairedPresentations],
    p: &PExponent,
) -> Result<ChainBound> {
    let (a, b) = match (chain.first(), chain.last()) {
        (Some(f), Some(l)) => (&f.p, &l.q),
        _ => (end, end),
    };
    if !same_hilbert_function(start, a) || !same_hilbert_function(end, b) {
        return Err(Error::ChainMismatch("chain endpoints differ from the given modules".into()));
    }
    chain_upper_bound(chain, p)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub p: PExponent,
    pub epsilon: f64,
    /// Certified lower bound from the matching distance.
    pub lower: f64,
    /// Label distance of the best pairing found; infinite when none exists.
    pub upper: f64,
    pub upper_method: Option<PairingMethod>,
    pub matching: DistanceReport,
}

pub fn bounds(m: &Presentation, n: &Presentation, p: &PExponent, epsilon: f64) -> Result<BoundsReport> {
    let matching = matchdist::approx_matching_distance(m, n, p, epsilon)?;
    let (upper, upper_method) = match pad_and_pair(m, n, p) {
        Ok((pp, method)) => (label_distance(&pp, p).to_f64(), Some(method)),
        Err(Error::NoPairing(_)) => (f64::INFINITY, None),
        Err(e) => return Err(e),
    };
    Ok(BoundsReport { p: p.clone(), epsilon, lower: matching.lower, upper, upper_method, matching })
}
