//! Certified approximation of the p-matching distance between 2-parameter
//! modules by branch-and-bound over a compact square of line parameters.
//!
//! Lines are charted by `(s, μ)`:
//!
//! * base point `w = (s, 0)` for `s >= 0` and `w = (0, -s)` for `s < 0`;
//! * direction `v = (1, 1/(1-μ))` for `μ >= 0` and `v = (1/(1+μ), 1)` for `μ < 0`.
//!
//! At `μ = ±1` the lines degenerate to axis-parallel limits, where the push
//! value is `max(a_i - w_i, 0)` for the one coordinate still seen. On each of
//! the four quadrants cut out by `s = 0` and `μ = 0`, the push of a fixed
//! grade is a maximum of a constant, monotone single-variable terms and at
//! most one bilinear term, so its extremes over a box lie at box corners.
//! The local bound is therefore computed exactly from corner evaluations.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::fastline::{self, FLine, Prepared};
use crate::grade::{format_rational, rational_to_f64, Grade, Rational};
use crate::lines::{self, AdmissibleLine, ChartLine, LimitLine, PushMap};
use crate::norm::{NormAccumulator, NormValue, PExponent};
use crate::presentation::{LabelVector, Presentation};
use crate::wasserstein;
use crate::{Error, Result};

/// A point `(s, μ)` of the line chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineParam {
    pub s: Rational,
    pub mu: Rational,
}

impl LineParam {
    pub fn new(s: Rational, mu: Rational) -> Result<LineParam> {
        if mu.abs() > Rational::one() {
            return Err(Error::InvalidLine(format!("μ = {} outside [-1, 1]", format_rational(&mu))));
        }
        Ok(LineParam { s, mu })
    }
}

/// The line described by a chart point; `|μ| = 1` gives a limit line.
pub fn line_of_param(q: &LineParam) -> ChartLine {
    let zero = Rational::zero();
    let one = Rational::one();
    let w = if q.s >= zero { [q.s.clone(), zero.clone()] } else { [zero.clone(), -q.s.clone()] };
    if q.mu == one {
        return ChartLine::Limit(LimitLine { axis: 0, w });
    }
    if q.mu == -one.clone() {
        return ChartLine::Limit(LimitLine { axis: 1, w });
    }
    let v = if q.mu >= zero { [one.clone(), &one / (&one - &q.mu)] } else { [&one / (&one + &q.mu), one.clone()] };
    ChartLine::Admissible(AdmissibleLine::canonicalize(v, w).expect("chart directions are positive"))
}

/// A closed box `[s_lo, s_hi] × [μ_lo, μ_hi]` inside the parameter square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamBox {
    pub s: (Rational, Rational),
    pub mu: (Rational, Rational),
}

impl ParamBox {
    pub fn new(s: (Rational, Rational), mu: (Rational, Rational)) -> Result<ParamBox> {
        if s.0 > s.1 || mu.0 > mu.1 || mu.0 < -Rational::one() || mu.1 > Rational::one() {
            return Err(Error::Invalid("empty box or μ outside [-1, 1]".into()));
        }
        Ok(ParamBox { s, mu })
    }

    pub fn center(&self) -> LineParam {
        let two = Rational::from_integer(2.into());
        LineParam { s: (&self.s.0 + &self.s.1) / &two, mu: (&self.mu.0 + &self.mu.1) / &two }
    }

    /// The four quarters, in a fixed order.
    pub fn split(&self) -> [ParamBox; 4] {
        let c = self.center();
        let (s0, s1) = ((self.s.0.clone(), c.s.clone()), (c.s.clone(), self.s.1.clone()));
        let (m0, m1) = ((self.mu.0.clone(), c.mu.clone()), (c.mu.clone(), self.mu.1.clone()));
        [
            ParamBox { s: s0.clone(), mu: m0.clone() },
            ParamBox { s: s1.clone(), mu: m0 },
            ParamBox { s: s0, mu: m1.clone() },
            ParamBox { s: s1, mu: m1 },
        ]
    }

    /// Corners of the pieces cut by `s = 0` and `μ = 0`.
    fn extreme_candidates(&self) -> Vec<LineParam> {
        let cut = |(lo, hi): &(Rational, Rational)| {
            let mut v = vec![lo.clone()];
            if lo.is_negative() && hi.is_positive() {
                v.push(Rational::zero());
            }
            if hi != lo {
                v.push(hi.clone());
            }
            v
        };
        let ss = cut(&self.s);
        let ms = cut(&self.mu);
        ss.iter()
            .flat_map(|s| ms.iter().map(move |m| LineParam { s: s.clone(), mu: m.clone() }))
            .collect()
    }
}

/// `v(a, B) = max over lines in B of |push_l(a) - push_center(a)|`.
pub fn label_deviation(a: &Grade, bx: &ParamBox) -> Rational {
    let pc = line_of_param(&bx.center()).push(a);
    let mut dev = Rational::zero();
    for q in bx.extreme_candidates() {
        let d = (line_of_param(&q).push(a) - &pc).abs();
        if d > dev {
            dev = d;
        }
    }
    dev
}

/// `v_p(L, B)`: the ℓp-norm of the deviations of all labels over the box.
pub fn local_bound(labels: &LabelVector, bx: &ParamBox, p: &PExponent) -> NormValue {
    let mut acc = NormAccumulator::new(p);
    for a in &labels.values {
        acc.push(&label_deviation(a, bx));
    }
    acc.finish()
}

/// p-Wasserstein distance between the barcodes along a line.
pub fn line_distance<L: PushMap + ?Sized>(pm: &Presentation, pn: &Presentation, l: &L, p: &PExponent) -> Result<NormValue> {
    let bm = lines::barcode_along_line(pm, l)?;
    let bn = lines::barcode_along_line(pn, l)?;
    Ok(wasserstein::wasserstein(&bm, &bn, p).value)
}

/// The largest distance along any of the given lines; each is a lower bound
/// on the matching distance.
pub fn sampled_lower_bound(
    pm: &Presentation,
    pn: &Presentation,
    p: &PExponent,
    lines: &[AdmissibleLine],
) -> Result<NormValue> {
    let mut best = NormValue::zero(p);
    for l in lines {
        let d = line_distance(pm, pn, l, p)?;
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// A line as reported: direction and base point in input coordinates.
/// Limit lines report an infinite direction coordinate (`null` in JSON).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportLine {
    pub v: [f64; 2],
    pub w: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceReport {
    pub p: PExponent,
    pub epsilon: f64,
    pub lower: f64,
    pub upper: f64,
    pub lines_evaluated: u64,
    pub argmax_line: ReportLine,
    /// The chart point attaining `lower`, in translated coordinates.
    #[serde(skip)]
    pub argmax_param: LineParam,
    /// Exact value of the lower bound, as far as the exponent allows.
    #[serde(skip)]
    pub lower_value: NormValue,
}

#[derive(Debug, Clone)]
pub struct MatchOptions {
    pub max_depth: usize,
    /// Boxes refined per round; results do not depend on the thread count.
    pub batch: usize,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions { max_depth: 24, batch: 64 }
    }
}

struct Node {
    upper: f64,
    id: u64,
    depth: usize,
    bx: ParamBox,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper).then(other.id.cmp(&self.id))
    }
}

struct Eval {
    value: f64,
    upper: f64,
}

fn chart_f64(q: &LineParam) -> FLine {
    FLine::from_chart(rational_to_f64(&q.s), rational_to_f64(&q.mu))
}

/// Floating-point counterpart of [`local_bound`] relative to the float
/// center line; callers add the rounding margin.
fn local_bound_f64(labels: &Prepared, center: &FLine, corners: &[FLine], p: f64) -> f64 {
    fastline::pnorm(
        labels.labels().map(|&a| {
            let c = center.push(a);
            corners.iter().fold(0.0f64, |m, l| m.max((l.push(a) - c).abs()))
        }),
        p,
    )
}

fn round_up(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        x
    } else {
        x * (1.0 + 4.0 * f64::EPSILON)
    }
}

fn report_line(q: &LineParam, offset: &[Rational; 2]) -> ReportLine {
    match line_of_param(q) {
        ChartLine::Admissible(l) => {
            let back = AdmissibleLine::canonicalize(
                l.v().clone(),
                [&l.w()[0] + &offset[0], &l.w()[1] + &offset[1]],
            )
            .expect("positive direction");
            ReportLine {
                v: [rational_to_f64(&back.v()[0]), rational_to_f64(&back.v()[1])],
                w: [rational_to_f64(&back.w()[0]), rational_to_f64(&back.w()[1])],
            }
        }
        ChartLine::Limit(l) => {
            let mut v = [1.0, 1.0];
            v[1 - l.axis] = f64::INFINITY;
            ReportLine {
                v,
                w: [rational_to_f64(&(&l.w[0] + &offset[0])), rational_to_f64(&(&l.w[1] + &offset[1]))],
            }
        }
    }
}

pub fn approx_matching_distance(
    pm: &Presentation,
    pn: &Presentation,
    p: &PExponent,
    epsilon: f64,
) -> Result<DistanceReport> {
    approx_matching_distance_with(pm, pn, p, epsilon, &MatchOptions::default())
}

/// Best-first branch-and-bound. Every evaluated line contributes to the lower
/// bound; a box's upper bound is its center value plus the local bounds of
/// both inputs. Stops once the largest live upper bound is within `epsilon`
/// of the lower bound.
pub fn approx_matching_distance_with(
    pm: &Presentation,
    pn: &Presentation,
    p: &PExponent,
    epsilon: f64,
    opts: &MatchOptions,
) -> Result<DistanceReport> {
    for q in [pm, pn] {
        if q.n_params() != 2 {
            return Err(Error::ParamCount { expected: 2, found: q.n_params() });
        }
    }
    if !(epsilon > 0.0) {
        return Err(Error::Invalid("epsilon must be positive".into()));
    }

    // Translate jointly so all labels lie in [0, C]^2.
    let bounds: Vec<(Grade, Grade)> = [pm, pn].iter().filter_map(|q| q.label_bounds()).collect();
    let (lo, hi) = match bounds.split_first() {
        Some((first, rest)) => rest.iter().fold(first.clone(), |(a, b), (c, d)| (a.meet(c), b.join(d))),
        None => (Grade::from_ints(&[0, 0]), Grade::from_ints(&[0, 0])),
    };
    let offset = [lo.x().clone(), lo.y().clone()];
    let shift = [-offset[0].clone(), -offset[1].clone()];
    let m = pm.translate(&shift);
    let n = pn.translate(&shift);
    let mut c = (hi.x() - lo.x()).max(hi.y() - lo.y());
    if c.is_zero() {
        c = Rational::one();
    }
    let (fm, fn_) = (Prepared::new(&m), Prepared::new(&n));
    let pf = p.to_f64();
    let margin = fm.margin(&fn_, rational_to_f64(&c));

    let root = ParamBox { s: (-c.clone(), c.clone()), mu: (-Rational::one(), Rational::one()) };
    let evaluate = |bx: &ParamBox| -> Eval {
        let center = chart_f64(&bx.center());
        let corners: Vec<FLine> = bx.extreme_candidates().iter().map(chart_f64).collect();
        let value = fastline::wasserstein(&fm.barcode(&center), &fn_.barcode(&center), pf);
        let slack = local_bound_f64(&fm, &center, &corners, pf) + local_bound_f64(&fn_, &center, &corners, pf);
        Eval { upper: round_up(value + slack + 3.0 * margin), value }
    };
    let exact_at = |q: &LineParam| line_distance(&m, &n, &line_of_param(q), p);

    let root_eval = evaluate(&root);
    let mut lines_evaluated = 1u64;
    let mut lower_value = exact_at(&root.center())?;
    let mut argmax = root.center();
    let mut lower = lower_value.to_f64();

    let report = |lower: f64, upper: f64, lines: u64, arg: &LineParam, lv: &NormValue| DistanceReport {
        p: p.clone(),
        epsilon,
        lower,
        upper: upper.max(lower),
        lines_evaluated: lines,
        argmax_line: report_line(arg, &offset),
        argmax_param: arg.clone(),
        lower_value: lv.clone(),
    };

    if m == n {
        return Ok(report(0.0, 0.0, lines_evaluated, &argmax, &lower_value));
    }

    let mut heap = BinaryHeap::new();
    let mut next_id = 0u64;
    heap.push(Node { upper: root_eval.upper, id: next_id, depth: 0, bx: root });
    next_id += 1;

    loop {
        let top = match heap.peek() {
            Some(t) => t.upper,
            None => return Ok(report(lower, lower, lines_evaluated, &argmax, &lower_value)),
        };
        if top - lower <= epsilon {
            return Ok(report(lower, top, lines_evaluated, &argmax, &lower_value));
        }
        let mut batch = Vec::with_capacity(opts.batch);
        while batch.len() < opts.batch {
            match heap.pop() {
                Some(node) if node.upper > lower => batch.push(node),
                Some(_) => {}
                None => break,
            }
        }
        if batch.iter().any(|b| b.depth >= opts.max_depth) {
            let top = batch.iter().map(|b| b.upper).fold(top, f64::max);
            return Err(Error::MaxDepth(Box::new(report(lower, top, lines_evaluated, &argmax, &lower_value))));
        }
        let children: Vec<(usize, ParamBox)> =
            batch.iter().enumerate().flat_map(|(k, node)| node.bx.split().into_iter().map(move |b| (k, b))).collect();
        let evals: Vec<Eval> = children.par_iter().map(|(_, b)| evaluate(b)).collect();
        // Exact values only where the float value may beat the current lower bound.
        let mut hopeful: Vec<usize> = (0..evals.len()).filter(|&i| evals[i].value > lower + margin).collect();
        hopeful.sort_by(|&a, &b| evals[b].value.total_cmp(&evals[a].value).then(a.cmp(&b)));
        for &i in &hopeful {
            if evals[i].value <= lower + margin {
                continue;
            }
            let q = children[i].1.center();
            let exact = exact_at(&q)?;
            if exact > lower_value {
                lower = exact.to_f64();
                lower_value = exact;
                argmax = q;
            }
        }
        for ((k, bx), ev) in children.into_iter().zip(evals) {
            lines_evaluated += 1;
            let parent = &batch[k];
            assert!(
                ev.value <= parent.upper + margin,
                "line value {} exceeds the upper bound {} of its enclosing box",
                ev.value,
                parent.upper
            );
            // A sub-box can never exceed the bound of the box containing it.
            let upper = ev.upper.min(parent.upper);
            heap.push(Node { upper, id: next_id, depth: parent.depth + 1, bx });
            next_id += 1;
        }
    }
}
