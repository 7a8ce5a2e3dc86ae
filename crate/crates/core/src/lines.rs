//! Admissible lines `l(t) = t·v + w` in the plane, push maps onto them, and
//! restriction of 2-parameter presentations to 1-parameter ones.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::barcode::Barcode;
use crate::grade::{format_rational, parse_rational, Grade, Rational};
use crate::onepar;
use crate::presentation::Presentation;
use crate::{Error, Result};

/// Anything that sends a grade in the plane to a line parameter, monotonically.
pub trait PushMap {
    fn push(&self, a: &Grade) -> Rational;
}

/// A line with direction `v > 0`, `min(v) = 1`, and base point `w`, `min(w) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdmissibleLine {
    v: [Rational; 2],
    w: [Rational; 2],
}

impl AdmissibleLine {
    /// Rescales `v` so its smaller coordinate is 1, and slides `w` along the
    /// line until its smaller coordinate is 0.
    pub fn canonicalize(v_raw: [Rational; 2], w_raw: [Rational; 2]) -> Result<AdmissibleLine> {
        if !v_raw[0].is_positive() || !v_raw[1].is_positive() {
            return Err(Error::InvalidLine(format!(
                "direction ({}, {}) is not positive",
                format_rational(&v_raw[0]),
                format_rational(&v_raw[1])
            )));
        }
        let m = v_raw[0].clone().min(v_raw[1].clone());
        let v = [&v_raw[0] / &m, &v_raw[1] / &m];
        let shift = (&w_raw[0] / &v[0]).min(&w_raw[1] / &v[1]);
        let w = [&w_raw[0] - &shift * &v[0], &w_raw[1] - &shift * &v[1]];
        Ok(AdmissibleLine { v, w })
    }

    pub fn diagonal() -> AdmissibleLine {
        let one = Rational::from_integer(1.into());
        AdmissibleLine { v: [one.clone(), one], w: [Rational::zero(), Rational::zero()] }
    }

    /// Parses `"v1,v2;w1,w2"`.
    pub fn parse(s: &str) -> Result<AdmissibleLine> {
        let bad = || Error::InvalidLine(format!("expected \"v1,v2;w1,w2\", got {s:?}"));
        let (vs, ws) = s.split_once(';').ok_or_else(bad)?;
        let pair = |t: &str| -> Result<[Rational; 2]> {
            let (a, b) = t.split_once(',').ok_or_else(bad)?;
            Ok([parse_rational(a).ok_or_else(bad)?, parse_rational(b).ok_or_else(bad)?])
        };
        AdmissibleLine::canonicalize(pair(vs)?, pair(ws)?)
    }

    pub fn v(&self) -> &[Rational; 2] {
        &self.v
    }

    pub fn w(&self) -> &[Rational; 2] {
        &self.w
    }

    pub fn point(&self, t: &Rational) -> Grade {
        Grade::xy(t * &self.v[0] + &self.w[0], t * &self.v[1] + &self.w[1])
    }
}

impl PushMap for AdmissibleLine {
    /// The least `t` with `l(t) >= a`.
    fn push(&self, a: &Grade) -> Rational {
        let t1 = (a.x() - &self.w[0]) / &self.v[0];
        let t2 = (a.y() - &self.w[1]) / &self.v[1];
        t1.max(t2)
    }
}

impl fmt::Display for AdmissibleLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{};{},{}",
            format_rational(&self.v[0]),
            format_rational(&self.v[1]),
            format_rational(&self.w[0]),
            format_rational(&self.w[1])
        )
    }
}

/// Limit of admissible lines whose direction becomes parallel to an axis.
/// Only the coordinate `axis` still matters; the push value is
/// `max(a[axis] - w[axis], 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitLine {
    pub axis: usize,
    pub w: [Rational; 2],
}

impl PushMap for LimitLine {
    fn push(&self, a: &Grade) -> Rational {
        let t = &a.coords()[self.axis] - &self.w[self.axis];
        t.max(Rational::zero())
    }
}

/// Either an honest admissible line or a boundary limit line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChartLine {
    Admissible(AdmissibleLine),
    Limit(LimitLine),
}

impl PushMap for ChartLine {
    fn push(&self, a: &Grade) -> Rational {
        match self {
            ChartLine::Admissible(l) => l.push(a),
            ChartLine::Limit(l) => l.push(a),
        }
    }
}

/// Same matrix, every label replaced by its push value.
pub fn restrict_presentation<L: PushMap + ?Sized>(p: &Presentation, l: &L) -> Result<Presentation> {
    if p.n_params() != 2 {
        return Err(Error::ParamCount { expected: 2, found: p.n_params() });
    }
    let push = |gs: &[Grade]| gs.iter().map(|g| Grade::scalar(l.push(g))).collect::<Vec<_>>();
    Presentation::new(p.field(), 1, push(p.row_labels()), push(p.col_labels()), p.columns().to_vec())
}

pub fn barcode_along_line<L: PushMap + ?Sized>(p: &Presentation, l: &L) -> Result<Barcode> {
    onepar::barcode_of(&restrict_presentation(p, l)?)
}

/// Embeds a 1-parameter presentation on the diagonal, `x ↦ (x, x)`.
pub fn embed_diagonal(p: &Presentation) -> Result<Presentation> {
    if p.n_params() != 1 {
        return Err(Error::ParamCount { expected: 1, found: p.n_params() });
    }
    let lift = |gs: &[Grade]| gs.iter().map(|g| Grade::xy(g.x().clone(), g.x().clone())).collect::<Vec<_>>();
    Presentation::new(p.field(), 2, lift(p.row_labels()), lift(p.col_labels()), p.columns().to_vec())
}
