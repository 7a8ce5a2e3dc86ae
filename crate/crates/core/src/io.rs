//! Text formats.
//!
//! `.fpm` (presentations):
//!
//! ```text
//! fpm 1
//! field 2          # optional, defaults to 2
//! params 2
//! rows 2
//! 0 0
//! 0 0
//! cols 1
//! 1 4 : 0 1 1 1    # label, then (row, coefficient) pairs
//! ```
//!
//! `.bc` (barcodes): one `<birth> <death|inf>` per line.
//!
//! `.cwf` (filtered cell complexes): `cwf 1`, `field q`, `params n`, then one
//! cell per line, `<id> <dim> <grade…> : <face-id> <coeff> …`. A line of the
//! form `<id> <dim> <grade…> = <vertex-id> …` declares a simplex instead; its
//! faces must already be declared and signs are implied.

use std::collections::HashMap;

use crate::barcode::{Bar, Barcode, Death};
use crate::cellular::{CellComplex, FilteredComplex};
use crate::field::PrimeField;
use crate::grade::{format_rational, parse_rational, Grade};
use crate::presentation::Presentation;
use crate::{Error, Result};

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, msg: msg.into() }
}

/// Non-empty lines with comments removed, paired with 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

struct Cursor<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { lines: content_lines(text), pos: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let last = self.lines.last().map_or(1, |l| l.0);
        let l = self.peek().ok_or_else(|| syntax(last, format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok(l)
    }

    /// Reads `<keyword> <value>`.
    fn keyword(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (n, l) = self.next(key)?;
        let mut it = l.split_whitespace();
        match (it.next(), it.next(), it.next()) {
            (Some(k), Some(v), None) if k == key => Ok((n, v)),
            _ => Err(syntax(n, format!("expected `{key} <value>`"))),
        }
    }

    fn has_keyword(&self, key: &str) -> bool {
        self.peek().is_some_and(|(_, l)| l.split_whitespace().next() == Some(key))
    }
}

fn parse_usize(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| syntax(line, format!("expected a nonnegative integer, got {s:?}")))
}

fn parse_grade(line: usize, toks: &[&str], n: usize) -> Result<Grade> {
    if toks.len() != n {
        return Err(syntax(line, format!("expected {n} coordinates, got {}", toks.len())));
    }
    let coords = toks
        .iter()
        .map(|t| parse_rational(t).ok_or_else(|| syntax(line, format!("not a number: {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Grade::new(coords))
}

fn parse_header(c: &mut Cursor, magic: &str) -> Result<(PrimeField, usize)> {
    let (n, v) = c.keyword(magic)?;
    if v != "1" {
        return Err(syntax(n, format!("unsupported {magic} version {v}")));
    }
    let field = if c.has_keyword("field") {
        let (n, q) = c.keyword("field")?;
        let q: u32 = q.parse().map_err(|_| syntax(n, "field order must be an integer"))?;
        PrimeField::new(q).map_err(|e| syntax(n, e.to_string()))?
    } else {
        PrimeField::f2()
    };
    let (n, p) = c.keyword("params")?;
    let params = parse_usize(n, p)?;
    if !(1..=2).contains(&params) {
        return Err(syntax(n, "params must be 1 or 2"));
    }
    Ok((field, params))
}

fn parse_coeff(field: &PrimeField, line: usize, s: &str) -> Result<u32> {
    let v: i64 = s.parse().map_err(|_| syntax(line, format!("not an integer coefficient: {s:?}")))?;
    field.from_i64(v)
}

pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut c = Cursor::new(text);
    let (field, n) = parse_header(&mut c, "fpm")?;
    let (ln, r) = c.keyword("rows")?;
    let r = parse_usize(ln, r)?;
    let mut rows = Vec::with_capacity(r);
    for _ in 0..r {
        let (ln, l) = c.next("a row label")?;
        rows.push(parse_grade(ln, &l.split_whitespace().collect::<Vec<_>>(), n)?);
    }
    let (ln, k) = c.keyword("cols")?;
    let k = parse_usize(ln, k)?;
    let mut col_labels = Vec::with_capacity(k);
    let mut columns = Vec::with_capacity(k);
    for _ in 0..k {
        let (ln, l) = c.next("a column")?;
        let (lab, ent) = l.split_once(':').ok_or_else(|| syntax(ln, "expected `<label> : <row> <coeff> ...`"))?;
        col_labels.push(parse_grade(ln, &lab.split_whitespace().collect::<Vec<_>>(), n)?);
        let toks: Vec<&str> = ent.split_whitespace().collect();
        if toks.len() % 2 != 0 {
            return Err(syntax(ln, "entries must be (row, coefficient) pairs"));
        }
        let mut col = Vec::with_capacity(toks.len() / 2);
        for pair in toks.chunks(2) {
            let row = parse_usize(ln, pair[0])?;
            if row >= r {
                return Err(syntax(ln, format!("row index {row} out of range")));
            }
            col.push((row, parse_coeff(&field, ln, pair[1])?));
        }
        columns.push(col);
    }
    if let Some((ln, _)) = c.peek() {
        return Err(syntax(ln, "trailing content after the last column"));
    }
    Presentation::new(field, n, rows, col_labels, columns)
}

fn grade_text(g: &Grade) -> String {
    g.coords().iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

pub fn write_presentation(p: &Presentation) -> String {
    let mut out = format!("fpm 1\nfield {}\nparams {}\nrows {}\n", p.field().order(), p.n_params(), p.n_rows());
    for g in p.row_labels() {
        out.push_str(&grade_text(g));
        out.push('\n');
    }
    out.push_str(&format!("cols {}\n", p.n_cols()));
    for (g, col) in p.col_labels().iter().zip(p.columns()) {
        out.push_str(&grade_text(g));
        out.push_str(" :");
        for (i, v) in col {
            out.push_str(&format!(" {i} {v}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_barcode(text: &str) -> Result<Barcode> {
    let mut bars = Vec::new();
    for (ln, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(syntax(ln, "expected `<birth> <death|inf>`"));
        }
        let birth = parse_rational(toks[0]).ok_or_else(|| syntax(ln, format!("not a number: {:?}", toks[0])))?;
        let death = match toks[1].to_ascii_lowercase().as_str() {
            "inf" | "infinity" => Death::Infinite,
            t => Death::Finite(parse_rational(t).ok_or_else(|| syntax(ln, format!("not a number: {t:?}")))?),
        };
        bars.push(Bar::new(birth, death).map_err(|e| syntax(ln, e.to_string()))?);
    }
    Ok(Barcode::new(bars))
}

pub fn write_barcode(b: &Barcode) -> String {
    b.bars().iter().map(|bar| format!("{bar}\n")).collect()
}

pub fn parse_complex(text: &str) -> Result<FilteredComplex> {
    let mut c = Cursor::new(text);
    let (field, n) = parse_header(&mut c, "cwf")?;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut ids = Vec::new();
    let mut dims = Vec::new();
    let mut grades = Vec::new();
    let mut boundaries = Vec::new();
    // Sorted vertex sets of simplices declared with `=`, for face lookup.
    let mut simplices: HashMap<Vec<usize>, usize> = HashMap::new();
    while let Some((ln, l)) = c.peek() {
        c.pos += 1;
        let (head, tail, simplex) = match (l.split_once(':'), l.split_once('=')) {
            (Some((h, t)), None) => (h, t, false),
            (None, Some((h, t))) => (h, t, true),
            _ => return Err(syntax(ln, "expected `<id> <dim> <grade> : <faces>` or `... = <vertices>`")),
        };
        let htoks: Vec<&str> = head.split_whitespace().collect();
        if htoks.len() != 2 + n {
            return Err(syntax(ln, format!("expected an id, a dimension and {n} coordinates")));
        }
        let id = htoks[0].to_string();
        if index.contains_key(&id) {
            return Err(syntax(ln, format!("duplicate cell id {id}")));
        }
        let dim = parse_usize(ln, htoks[1])?;
        let grade = parse_grade(ln, &htoks[2..], n)?;
        let toks: Vec<&str> = tail.split_whitespace().collect();
        let lookup = |t: &str| index.get(t).copied().ok_or_else(|| syntax(ln, format!("unknown cell id {t}")));
        let k = ids.len();
        let (bd, vs) = if simplex {
            let mut verts = Vec::new();
            for t in &toks {
                let v = lookup(t)?;
                if dims[v] != 0 {
                    return Err(syntax(ln, format!("{t} is not a vertex")));
                }
                verts.push(v);
            }
            if verts.is_empty() {
                verts.push(k);
            }
            verts.sort_unstable();
            if verts.len() != dim + 1 {
                return Err(syntax(ln, format!("a {dim}-simplex needs {} vertices", dim + 1)));
            }
            let mut bd = Vec::new();
            if dim > 0 {
                for i in 0..verts.len() {
                    let mut face = verts.clone();
                    face.remove(i);
                    let f = *simplices.get(&face).ok_or_else(|| syntax(ln, format!("missing face {face:?}")))?;
                    bd.push((f, if i % 2 == 0 { 1 } else { field.neg(1) }));
                }
            }
            (bd, Some(verts))
        } else {
            if toks.len() % 2 != 0 {
                return Err(syntax(ln, "faces must be (id, coefficient) pairs"));
            }
            let mut bd = Vec::new();
            for pair in toks.chunks(2) {
                bd.push((lookup(pair[0])?, parse_coeff(&field, ln, pair[1])?));
            }
            (bd, None)
        };
        if let Some(v) = &vs {
            simplices.insert(v.clone(), k);
        }
        index.insert(id.clone(), k);
        ids.push(id);
        dims.push(dim);
        grades.push(grade);
        boundaries.push(bd);
    }
    let cx = CellComplex::new(field, ids, dims, boundaries)?;
    FilteredComplex::new(cx, n, grades)
}

pub fn write_complex(x: &FilteredComplex) -> String {
    let cx = x.complex();
    let mut out = format!("cwf 1\nfield {}\nparams {}\n", cx.field().order(), x.n_params());
    for k in 0..cx.len() {
        out.push_str(&format!("{} {} {} :", cx.ids()[k], cx.dims()[k], grade_text(&x.grades()[k])));
        for (f, v) in cx.boundary(k) {
            out.push_str(&format!(" {} {}", cx.ids()[*f], v));
        }
        out.push('\n');
    }
    out
}
