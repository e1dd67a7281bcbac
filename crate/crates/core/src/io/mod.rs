//! Model files and result files.
//!
//! Model grammar (one record per line, `#` starts a comment):
//!
//! ```text
//! format: equihom-model 1
//! name: bur
//! group: C2                      # or `p=2 n=1`
//! coeff: z                       # z | f2
//! cells: additive                # additive | orbits
//! gen a1 under=2 degree=1*rho[C2] weyl=-a1
//! rel y1^2 = a_s*y3
//! dlbound 16
//! dl 2 a1 = a3
//! coproduct a1 = a1|1 + 1|a1
//! ```

pub mod result_file;

use crate::coefficients::{CoeffRing, PointMonomial};
use crate::error::{Diagnostic, Error, Result};
use crate::grading::RepDegree;
use crate::freebasis::{Basis, Cell};
use crate::groups::CyclicGroup;
use crate::purering::model::split_signed;
use crate::purering::{CellRule, Monomial, PureRingModel};

pub use result_file::{emit_result, parse_result, OutputFormat, ResultFile, Section};

pub const MODEL_FORMAT: &str = "equihom-model 1";

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn diag(&self, needle: &str, message: impl Into<String>) -> Diagnostic {
        let column = self.text.find(needle).map_or(1, |c| self.text[..c].chars().count() + 1);
        Diagnostic {
            line: self.number,
            column,
            message: message.into(),
        }
    }
}

#[derive(Default)]
struct Header {
    format: Option<String>,
    name: Option<String>,
    group: Option<CyclicGroup>,
    coeff: Option<CoeffRing>,
    cells: Option<CellRule>,
}

fn parse_group(value: &str) -> Result<CyclicGroup> {
    if let Some(rest) = value.strip_prefix("p=") {
        let mut parts = rest.split_whitespace();
        let p = parts.next().and_then(|s| s.parse().ok());
        let n = parts
            .next()
            .and_then(|s| s.strip_prefix("n="))
            .and_then(|s| s.parse().ok());
        return match (p, n) {
            (Some(p), Some(n)) => CyclicGroup::new(p, n),
            _ => Err(Error::InvalidGroup(value.to_string())),
        };
    }
    CyclicGroup::parse(value)
}

/// Parses a model file into a validated model, or positioned diagnostics.
pub fn parse_model(text: &str) -> Result<PureRingModel> {
    let mut diags = Vec::new();
    let lines: Vec<Line> = text
        .lines()
        .enumerate()
        .map(|(i, t)| Line {
            number: i + 1,
            text: t,
        })
        .collect();
    let strip = |t: &str| t.split('#').next().unwrap_or("").trim().to_string();
    let mut header = Header::default();
    let mut body: Vec<(&Line, String)> = Vec::new();
    for line in &lines {
        let content = strip(line.text);
        if content.is_empty() {
            continue;
        }
        if let Some((key, value)) = content.split_once(':') {
            let key = key.trim();
            let value = value.trim();
            if !body.is_empty() {
                diags.push(line.diag(key, format!("header field `{key}` after the first record")));
                continue;
            }
            let dup = |set: bool| set.then(|| line.diag(key, format!("duplicate field `{key}`")));
            let d = match key {
                "format" => {
                    let d = dup(header.format.is_some());
                    if value != MODEL_FORMAT {
                        diags.push(line.diag(value, format!("unsupported format `{value}`, expected `{MODEL_FORMAT}`")));
                    }
                    header.format = Some(value.to_string());
                    d
                }
                "name" => {
                    let d = dup(header.name.is_some());
                    header.name = Some(value.to_string());
                    d
                }
                "group" => {
                    let d = dup(header.group.is_some());
                    match parse_group(value) {
                        Ok(g) => header.group = Some(g),
                        Err(e) => diags.push(line.diag(value, e.to_string())),
                    }
                    d
                }
                "coeff" => {
                    let d = dup(header.coeff.is_some());
                    match CoeffRing::parse(value) {
                        Ok(c) => header.coeff = Some(c),
                        Err(e) => diags.push(line.diag(value, e.to_string())),
                    }
                    d
                }
                "cells" => {
                    let d = dup(header.cells.is_some());
                    match value {
                        "additive" => header.cells = Some(CellRule::Additive),
                        "orbits" => header.cells = Some(CellRule::Orbits),
                        _ => diags.push(line.diag(value, format!("unknown cell rule `{value}`"))),
                    }
                    d
                }
                _ => Some(line.diag(key, format!("unknown field `{key}`"))),
            };
            diags.extend(d);
        } else {
            body.push((line, content));
        }
    }
    if header.format.is_none() {
        diags.push(Diagnostic {
            line: 1,
            column: 1,
            message: format!("missing `format: {MODEL_FORMAT}` header"),
        });
    }
    for (field, present) in [("group", header.group.is_some()), ("coeff", header.coeff.is_some())] {
        if !present && !diags.iter().any(|d| d.message.contains(field)) {
            diags.push(Diagnostic {
                line: 1,
                column: 1,
                message: format!("missing `{field}:` header"),
            });
        }
    }
    if header.group.is_none() || header.coeff.is_none() {
        return Err(Error::Parse(diags));
    }
    let mut model = PureRingModel::new(
        header.name.unwrap_or_else(|| "model".into()),
        header.group.expect("checked"),
        header.coeff.expect("checked"),
        header.cells.unwrap_or(CellRule::Additive),
    )
    .map_err(|e| Error::parse_at(1, 1, e.to_string()))?;

    let mut weyl: Vec<(&Line, usize, String)> = Vec::new();
    // generators first, so that later records may refer to any of them
    for (line, content) in &body {
        let mut words = content.split_whitespace();
        if words.next() != Some("gen") {
            continue;
        }
        let Some(name) = words.next() else {
            diags.push(line.diag("gen", "generator name missing"));
            continue;
        };
        let mut under = None;
        let mut degree = None;
        let mut w = None;
        let mut ok = true;
        for word in words {
            let Some((k, v)) = word.split_once('=') else {
                diags.push(line.diag(word, format!("expected key=value, found `{word}`")));
                ok = false;
                continue;
            };
            match k {
                "under" => match v.parse::<i64>() {
                    Ok(n) => under = Some(n),
                    Err(_) => {
                        diags.push(line.diag(v, format!("bad underlying degree `{v}`")));
                        ok = false;
                    }
                },
                "degree" => match RepDegree::parse(v, model.top()) {
                    Ok(d) => degree = Some(d),
                    Err(e) => {
                        diags.push(line.diag(v, e.to_string()));
                        ok = false;
                    }
                },
                "weyl" => w = Some(v.to_string()),
                _ => {
                    diags.push(line.diag(k, format!("unknown generator field `{k}`")));
                    ok = false;
                }
            }
        }
        let Some(under) = under else {
            diags.push(line.diag(name, format!("generator {name} needs under=")));
            continue;
        };
        if !ok {
            continue;
        }
        match model.add_generator(name, under, degree) {
            Ok(i) => {
                if let Some(w) = w {
                    weyl.push((line, i, w));
                }
            }
            Err(e) => diags.push(line.diag(name, e.to_string())),
        }
    }
    for (line, i, w) in weyl {
        let (sign, target) = match w.strip_prefix('-') {
            Some(t) => (-1, t),
            None => (1, w.trim_start_matches('+')),
        };
        match model.generator_index(target) {
            Some(t) => {
                if let Err(e) = model.set_weyl(i, t, sign) {
                    diags.push(line.diag(&w, e.to_string()));
                }
            }
            None => diags.push(line.diag(&w, format!("unknown Weyl target `{target}`"))),
        }
    }
    for (line, content) in &body {
        let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let rest = rest.trim();
        let result = match keyword {
            "gen" => Ok(()),
            "rel" => parse_relation(&mut model, rest),
            "dlbound" => rest
                .parse::<i64>()
                .map(|b| model.set_dl_bound(b))
                .map_err(|_| Error::Model(format!("bad bound `{rest}`"))),
            "dl" => parse_dl(&mut model, rest),
            "coproduct" => parse_coproduct(&mut model, rest),
            _ => Err(Error::Model(format!("unknown record `{keyword}`"))),
        };
        if let Err(e) = result {
            let anchor = if rest.is_empty() { keyword } else { rest };
            diags.push(line.diag(anchor, e.to_string()));
        }
    }
    if diags.is_empty() {
        if let Err(e) = model.validate() {
            diags.push(Diagnostic {
                line: 1,
                column: 1,
                message: e.to_string(),
            });
        }
    }
    if diags.is_empty() {
        Ok(model)
    } else {
        diags.sort_by_key(|d| (d.line, d.column));
        Err(Error::Parse(diags))
    }
}

fn parse_relation(model: &mut PureRingModel, rest: &str) -> Result<()> {
    let (lhs, rhs) = rest
        .split_once('=')
        .ok_or_else(|| Error::Model("relation needs `=`".into()))?;
    let (c, p, m) = model.parse_factors(lhs.trim())?;
    if c != 1 || !p.is_one() {
        return Err(Error::Model("left side must be a monic monomial".into()));
    }
    let mut terms = Vec::new();
    if rhs.trim() != "0" {
        for (sign, t) in split_signed(rhs.trim())? {
            let (c, p, m) = model.parse_factors(&t)?;
            terms.push((sign * c, p, m));
        }
    }
    model.add_relation(m, terms)
}

fn parse_dl(model: &mut PureRingModel, rest: &str) -> Result<()> {
    let (lhs, rhs) = rest
        .split_once('=')
        .ok_or_else(|| Error::Model("Dyer-Lashof row needs `=`".into()))?;
    let mut words = lhs.split_whitespace();
    let i = words
        .next()
        .and_then(|w| w.parse::<i64>().ok())
        .ok_or_else(|| Error::Model("Dyer-Lashof row needs an index".into()))?;
    let name = words
        .next()
        .ok_or_else(|| Error::Model("Dyer-Lashof row needs a generator".into()))?;
    let g = model
        .generator_index(name)
        .ok_or_else(|| Error::Model(format!("unknown generator `{name}`")))?;
    let mut terms = Vec::new();
    if rhs.trim() != "0" {
        for (sign, t) in split_signed(rhs.trim())? {
            let (c, p, m) = model.parse_factors(&t)?;
            if !p.is_one() {
                return Err(Error::Model("Dyer-Lashof rows take plain monomials".into()));
            }
            terms.push((sign * c, m));
        }
    }
    model.add_dl_row(i, g, terms)
}

fn parse_coproduct(model: &mut PureRingModel, rest: &str) -> Result<()> {
    let (lhs, rhs) = rest
        .split_once('=')
        .ok_or_else(|| Error::Model("coproduct needs `=`".into()))?;
    let name = lhs.trim();
    let g = model
        .generator_index(name)
        .ok_or_else(|| Error::Model(format!("unknown generator `{name}`")))?;
    let mut terms = Vec::new();
    for (sign, t) in split_signed(rhs.trim())? {
        let (left, right) = t
            .split_once('|')
            .ok_or_else(|| Error::Model(format!("tensor term `{t}` needs `|`")))?;
        let (c, p, a) = model.parse_factors(left)?;
        let (c2, p2, b) = model.parse_factors(right)?;
        if !p.is_one() || !p2.is_one() {
            return Err(Error::Model("coproduct terms take plain monomials".into()));
        }
        terms.push((sign * c * c2, a, b));
    }
    model.add_coproduct(g, terms)
}

fn group_text(g: CyclicGroup) -> String {
    format!("p={} n={}", g.prime(), g.exponent())
}

fn term_text(model: &PureRingModel, c: i64, p: &PointMonomial, m: &Monomial) -> String {
    let mut factors = Vec::new();
    if c.abs() != 1 {
        factors.push(c.abs().to_string());
    }
    if !p.is_one() {
        factors.push(p.to_string());
    }
    if !m.is_one() || factors.is_empty() {
        factors.push(model.format_monomial(m));
    }
    factors.join("*")
}

fn sum_text(items: Vec<(i64, String)>) -> String {
    if items.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (c, t)) in items.into_iter().enumerate() {
        match (i, c < 0) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&t);
    }
    out
}

/// Serializes a model in the grammar accepted by [`parse_model`].
pub fn emit_model(model: &PureRingModel) -> String {
    let mut out = String::new();
    out.push_str(&format!("format: {MODEL_FORMAT}\n"));
    out.push_str(&format!("name: {}\n", model.name));
    out.push_str(&format!("group: {}\n", group_text(model.group)));
    out.push_str(&format!("coeff: {}\n", model.coeff.tag()));
    out.push_str(&format!("cells: {}\n", model.cells.tag()));
    for (i, g) in model.generators.iter().enumerate() {
        out.push_str(&format!("gen {} under={}", g.name, g.under));
        if let Some(d) = &g.degree {
            out.push_str(&format!(" degree={d}"));
        }
        if g.weyl.target != i || g.weyl.sign != 1 {
            let sign = if g.weyl.sign < 0 { "-" } else { "" };
            out.push_str(&format!(" weyl={sign}{}", model.generators[g.weyl.target].name));
        }
        out.push('\n');
    }
    for r in &model.relations {
        let rhs = r
            .rhs
            .iter()
            .map(|(c, p, m)| (*c, term_text(model, *c, p, m)))
            .collect();
        out.push_str(&format!("rel {} = {}\n", model.format_monomial(&r.lhs), sum_text(rhs)));
    }
    if let Some(dl) = &model.dl {
        out.push_str(&format!("dlbound {}\n", dl.bound));
        for ((i, g), rhs) in &dl.rows {
            let rhs = rhs
                .iter()
                .map(|(c, m)| (*c, term_text(model, *c, &PointMonomial::ONE, m)))
                .collect();
            out.push_str(&format!("dl {i} {} = {}\n", model.generators[*g].name, sum_text(rhs)));
        }
    }
    if let Some(table) = &model.coproduct {
        for (g, terms) in table {
            let rhs = terms
                .iter()
                .map(|(c, a, b)| {
                    let left = term_text(model, *c, &PointMonomial::ONE, a);
                    (*c, format!("{left}|{}", model.format_monomial(b)))
                })
                .collect();
            out.push_str(&format!("coproduct {} = {}\n", model.generators[*g].name, sum_text(rhs)));
        }
    }
    out
}

pub const BASIS_FORMAT: &str = "equihom-basis 1";

/// Basis files: `format:`, `group:`, `coeff:` headers, then one
/// `cell LABEL STABILIZER DEGREE` line per cell.
pub fn parse_basis(text: &str) -> Result<Basis> {
    let mut group = None;
    let mut coeff = None;
    let mut cells = Vec::new();
    let mut diags = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = Line {
            number: i + 1,
            text: raw,
        };
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some((key, value)) = body.split_once(':') {
            let value = value.trim();
            match key.trim() {
                "format" if value == BASIS_FORMAT => {}
                "format" => diags.push(line.diag(value, format!("unsupported format `{value}`"))),
                "group" => match parse_group(value) {
                    Ok(g) => group = Some(g),
                    Err(e) => diags.push(line.diag(value, e.to_string())),
                },
                "coeff" => match CoeffRing::parse(value) {
                    Ok(c) => coeff = Some(c),
                    Err(e) => diags.push(line.diag(value, e.to_string())),
                },
                other => diags.push(line.diag(other, format!("unknown field `{other}`"))),
            }
            continue;
        }
        let parts: Vec<&str> = body.split_whitespace().collect();
        let Some(g) = group else {
            diags.push(line.diag(body, "cell before the `group:` header"));
            continue;
        };
        match parts.as_slice() {
            ["cell", label, stab, degree] => {
                let cell = g
                    .parse_subgroup(stab)
                    .and_then(|h| RepDegree::parse(degree, h))
                    .map(|d| Cell::new(*label, d));
                match cell {
                    Ok(c) => cells.push(c),
                    Err(e) => diags.push(line.diag(stab, e.to_string())),
                }
            }
            _ => diags.push(line.diag(body, "expected `cell LABEL STABILIZER DEGREE`")),
        }
    }
    if !diags.is_empty() {
        return Err(Error::Parse(diags));
    }
    let group = group.ok_or_else(|| Error::parse_at(1, 1, "missing `group:`"))?;
    Basis::new(group, coeff.unwrap_or(CoeffRing::Z), cells)
}

pub fn emit_basis(b: &Basis) -> String {
    let mut out = format!(
        "format: {BASIS_FORMAT}\ngroup: {}\ncoeff: {}\n",
        group_text(b.group()),
        b.coeff().tag()
    );
    for c in b.cells() {
        out.push_str(&format!("cell {} {} {}\n", c.label, c.stabilizer(), c.degree));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn messages(text: &str) -> Vec<(usize, usize, String)> {
        match parse_model(text) {
            Err(Error::Parse(d)) => d.into_iter().map(|d| (d.line, d.column, d.message)).collect(),
            other => panic!("expected diagnostics, got {other:?}"),
        }
    }

    #[test]
    fn unit_model() {
        let m = parse_model("format: equihom-model 1\ngroup: C2\ncoeff: f2\n").unwrap();
        assert!(m.generators.is_empty());
    }

    #[test]
    fn dimension_mismatch_is_positioned() {
        let text = "format: equihom-model 1\ngroup: C2\ncoeff: z\ngen a1 under=3 degree=2*rho[C2] weyl=a1\n";
        let d = messages(text);
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].0, d[0].1), (4, 5));
        assert!(d[0].2.contains("underlying dimension 4"));
    }

    #[test]
    fn unknown_fields_rejected() {
        let d = messages("format: equihom-model 1\ngroup: C2\ncoeff: z\ncolour: red\ngen a1 under=2 degree=1*rho[C2] hue=1\n");
        assert_eq!(d.len(), 2);
        assert_eq!((d[0].0, d[0].1), (4, 1));
        assert_eq!((d[1].0, d[1].1), (5, 33));
        let d = messages("group: C2\ncoeff: z\n");
        assert!(d[0].2.contains("format"));
    }

    #[test]
    fn duplicate_generator() {
        let d = messages("format: equihom-model 1\ngroup: C2\ncoeff: z\ngen a1 under=2 degree=1*rho[C2] weyl=-a1\ngen a1 under=2 degree=1*rho[C2]\n");
        assert_eq!(d[0].0, 5);
        assert!(d[0].2.contains("duplicate"));
    }

    #[test]
    fn shipped_models_round_trip() {
        for m in [crate::purering::bur_model(), crate::purering::dual_steenrod_model()] {
            let text = emit_model(&m);
            let back = parse_model(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(emit_model(&back), text);
        }
    }

    #[test]
    fn basis_round_trip() {
        let text = "format: equihom-basis 1\ngroup: C4\ncoeff: f2\ncell x C2 1*rho[C2]\ncell y e 3\n";
        let b = parse_basis(text).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(parse_basis(&emit_basis(&b)).unwrap(), b);
        let err = parse_basis("group: C2\ncell x C4 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse(d) if d[0].line == 2));
    }
}
