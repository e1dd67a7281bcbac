//! Collapse of a bar page with generators in filtration −1, and the
//! multiplicative extension `ȳ² = a_σ Q^{(n+1)ρ₂}(ā_n)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::coefficients::point::PointMonomial;
use crate::coefficients::CoeffRing;
use crate::error::{Error, Result};
use crate::freebasis::{generalized_isotropic, geometric_fixed_basis, isotropy_witness, norm_basis, Basis, Cell};
use crate::grading::RepDegree;
use crate::groups::{CyclicGroup, Subgroup};
use crate::purering::{dyer_lashof, CellRule, Element, Monomial, PureRingModel};

use super::{PageKind, TorPage};

/// Largest `[G:C₂]` accepted by [`coinduce_result`].
pub const MAX_COINDUCE_INDEX: u64 = 8;
const MAX_COINDUCE_MAPS: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationGenerator {
    pub name: String,
    /// The E₂ class it comes from, e.g. `[a1]`.
    pub source: String,
    pub degree: RepDegree,
}

impl PresentationGenerator {
    pub fn under(&self) -> i64 {
        self.degree.underlying_dim()
    }
}

/// `generator² = Σ c · point · monomial`, monomials in generator indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationRelation {
    pub square: usize,
    pub rhs: Vec<(i64, PointMonomial, Monomial)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    pub name: String,
    pub group: CyclicGroup,
    pub coeff: CoeffRing,
    pub truncation: i64,
    pub generators: Vec<PresentationGenerator>,
    pub relations: Vec<PresentationRelation>,
    /// Squares whose value lies beyond the truncation.
    pub omitted: Vec<String>,
    pub certificate: String,
}

fn suspension_name(name: &str) -> String {
    match name.strip_prefix('a') {
        Some(rest) if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) => format!("y{rest}"),
        _ => format!("s{name}"),
    }
}

fn strip_brackets(label: &str) -> Option<&str> {
    let inner = label.strip_prefix('[')?.strip_suffix(']')?;
    (!inner.contains('[')).then_some(inner)
}

pub fn collapse_and_extend(page: &TorPage, model: &PureRingModel) -> Result<RingPresentation> {
    if page.kind != PageKind::Bar && page.kind != PageKind::Tor {
        return Err(Error::Model(format!("collapse needs a bar page, got {}", page.kind.tag())));
    }
    if page.coeff != model.coeff {
        return Err(Error::Model("page and model have different coefficients".into()));
    }
    let top = model.top();
    if let Some(k) = page.entries.keys().find(|k| k.degree.stabilizer() != top) {
        return Err(Error::Degree(format!("entry in degree {} is not over {}", k.degree, model.group)));
    }
    if !page.is_exterior() {
        return Err(Error::CollapseNotCertified(
            "the page is not exterior on its filtration -1 classes".into(),
        ));
    }

    let mut generators = Vec::new();
    let mut source_index: BTreeMap<usize, usize> = BTreeMap::new();
    // the page is cut on internal degree, the presentation on total degree
    let within = |k: &super::PageKey| k.total_degree().underlying_dim().abs() <= page.truncation;
    for (key, entry) in page.filtration_one().filter(|(k, _)| within(k)) {
        if !key.degree.is_regular() {
            return Err(Error::Degree(format!("generator degree {} is not regular", key.degree.pretty())));
        }
        for label in &entry.labels {
            let name = strip_brackets(label)
                .ok_or_else(|| Error::Model(format!("filtration -1 class {label} is not a single bar generator")))?;
            let g = model
                .generator_index(name)
                .ok_or_else(|| Error::Model(format!("page generator {name} is not in model {}", model.name)))?;
            source_index.insert(g, generators.len());
            generators.push(PresentationGenerator {
                name: suspension_name(name),
                source: label.clone(),
                degree: key.total_degree(),
            });
        }
    }

    let mut cells = Vec::new();
    for (key, entry) in page.entries.iter().filter(|(k, _)| within(k)) {
        for label in &entry.labels {
            cells.push(Cell::new(label.clone(), key.total_degree()));
        }
    }
    let total = cells.len();
    let basis = Basis::new(model.group, model.coeff, cells)?;
    if !generalized_isotropic(&basis) {
        let (x, y) = isotropy_witness(&basis).unwrap_or_default();
        return Err(Error::CollapseNotCertified(format!(
            "cells {x} and {y} sit in adjacent dimensions with a free orbit in their product"
        )));
    }
    let certificate = format!("generalized isotropic: {total} cells, all stabilizers {top}");

    let mut relations = Vec::new();
    let mut omitted = Vec::new();
    if model.group.order() == 2 {
        let table_bound = model.dl.as_ref().map(|t| t.bound);
        for (&g, &y) in &source_index {
            let n = model.weight(&Monomial::generator(g))?;
            let square = format!("{}^2", generators[y].name);
            let out_under = 2 * (2 * n + 1) + 1;
            if out_under > page.truncation || table_bound.is_some_and(|b| 2 * n + 1 > b) {
                omitted.push(format!("{square} (lands in underlying degree {})", 2 * generators[y].under()));
                continue;
            }
            let x = Element::monomial(top, Monomial::generator(g));
            let q = dyer_lashof(model, n + 1, 0, &x)?;
            let mut rhs = Vec::new();
            for (c, p, m) in q.value.terms() {
                let mut e = vec![0u32; generators.len()];
                for (i, &k) in m.exponents().iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let j = *source_index.get(&i).ok_or_else(|| {
                        Error::MissingData(format!("{} has no suspension on the page", model.generators[i].name))
                    })?;
                    e[j] += k;
                }
                rhs.push((c, p.mul(&PointMonomial::new(1, 0)), Monomial::from_exponents(e)));
            }
            relations.push(PresentationRelation { square: y, rhs });
        }
    }

    Ok(RingPresentation {
        name: format!("B{}", model.name),
        group: model.group,
        coeff: model.coeff,
        truncation: page.truncation,
        generators,
        relations,
        omitted,
        certificate,
    })
}

impl RingPresentation {
    fn monomial_text(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| {
                let name = &self.generators[i].name;
                if k == 1 {
                    name.clone()
                } else {
                    format!("{name}^{k}")
                }
            })
            .collect();
        parts.join("*")
    }

    pub fn relation_text(&self, r: &PresentationRelation) -> String {
        let mut rhs = String::new();
        for (i, (c, p, m)) in r.rhs.iter().enumerate() {
            let mut factors = Vec::new();
            if c.abs() != 1 {
                factors.push(c.abs().to_string());
            }
            if !p.is_one() {
                factors.push(p.to_string());
            }
            if !m.is_one() {
                factors.push(self.monomial_text(m));
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            let body = factors.join("*");
            match (i, *c < 0) {
                (0, true) => rhs.push('-'),
                (0, false) => {}
                (_, true) => rhs.push_str(" - "),
                (_, false) => rhs.push_str(" + "),
            }
            rhs.push_str(&body);
        }
        if rhs.is_empty() {
            rhs.push('0');
        }
        format!("{}^2 = {rhs}", self.generators[r.square].name)
    }

    /// The presentation as an additive pure ring model.
    pub fn to_model(&self) -> Result<PureRingModel> {
        let mut m = PureRingModel::new(self.name.clone(), self.group, self.coeff, CellRule::Additive)?;
        for g in &self.generators {
            let i = m.add_generator(&g.name, g.under(), Some(g.degree.clone()))?;
            let sign = if (g.under() - g.degree.fixed_dim()) % 2 == 0 { 1 } else { -1 };
            m.set_weyl(i, i, sign)?;
        }
        for r in &self.relations {
            let lhs = Monomial::from_exponents({
                let mut e = vec![0; r.square + 1];
                e[r.square] = 2;
                e
            });
            m.add_relation(lhs, r.rhs.clone())?;
        }
        m.validate()?;
        Ok(m)
    }

    /// The free basis: square-free monomials in the generators.
    pub fn basis(&self) -> Result<Basis> {
        let top = self.group.full();
        let mut cells: Vec<(Vec<usize>, RepDegree)> = vec![(vec![], RepDegree::zero(top))];
        for (i, g) in self.generators.iter().enumerate() {
            let extra: Vec<(Vec<usize>, RepDegree)> = cells
                .iter()
                .filter_map(|(s, d)| {
                    let nd = d.add(&g.degree).ok()?;
                    let mut s = s.clone();
                    s.push(i);
                    (nd.underlying_dim() <= self.truncation).then_some((s, nd))
                })
                .collect();
            cells.extend(extra);
        }
        let cells = cells
            .into_iter()
            .map(|(s, d)| {
                let label = if s.is_empty() {
                    "1".to_string()
                } else {
                    s.iter().map(|&i| self.generators[i].name.as_str()).collect::<Vec<_>>().join("*")
                };
                Cell::new(label, d)
            })
            .collect();
        Ok(Basis::new(self.group, self.coeff, cells)?.sorted())
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} over {} with {} coefficients, truncation {}", self.name, self.group, self.coeff.tag(), self.truncation)?;
        for g in &self.generators {
            writeln!(f, "gen {}\t{}\tfrom {}", g.name, g.degree.pretty(), g.source)?;
        }
        for r in &self.relations {
            writeln!(f, "rel {}", self.relation_text(r))?;
        }
        for o in &self.omitted {
            writeln!(f, "beyond truncation {o}")?;
        }
        writeln!(f, "collapse {}", self.certificate)
    }
}

/// Geometric fixed points of a presentation over C₂.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiPresentation {
    pub generators: Vec<(String, i64)>,
    pub relations: Vec<(String, String)>,
    /// Generators not hit by a square.
    pub polynomial: Vec<String>,
    /// Fixed degrees in which the truncated basis is complete.
    pub verified_through: i64,
    /// `(degree, fixed cells, monomials in the polynomial generators)`.
    pub counts: Vec<(i64, usize, usize)>,
}

impl PhiPresentation {
    pub fn is_polynomial(&self) -> bool {
        self.counts.iter().all(|&(_, a, b)| a == b)
    }
}

/// `a_σ` becomes a unit and `u_σ` vanishes, so `ȳ_n² = a_σ ȳ_{2n+1}`
/// turns into `z_n² = z_{2n+1}`.
pub fn phi_presentation(pres: &RingPresentation) -> Result<PhiPresentation> {
    if pres.group.order() != 2 {
        return Err(Error::GroupMismatch(format!("geometric fixed points of a presentation over {}", pres.group)));
    }
    let name = |i: usize| {
        let n = &pres.generators[i].name;
        match n.strip_prefix('y') {
            Some(rest) => format!("z{rest}"),
            None => format!("z({n})"),
        }
    };
    let generators: Vec<(String, i64)> = (0..pres.generators.len())
        .map(|i| (name(i), pres.generators[i].degree.fixed_dim()))
        .collect();
    let mut relations = Vec::new();
    let mut hit = vec![false; generators.len()];
    for r in &pres.relations {
        let mut parts = Vec::new();
        for (c, p, m) in &r.rhs {
            if p.u > 0 {
                continue;
            }
            let mono: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { name(i) } else { format!("{}^{k}", name(i)) })
                .collect();
            if let (1, [i]) = (m.length(), m.exponents().iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, _)| i).collect::<Vec<_>>().as_slice()) {
                hit[*i] = true;
            }
            let body = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
            parts.push(if c.abs() == 1 { body } else { format!("{}*{body}", c.abs()) });
        }
        let rhs = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        relations.push((format!("{}^2", name(r.square)), rhs));
    }
    let polynomial: Vec<usize> = (0..generators.len()).filter(|&i| !hit[i]).collect();

    let verified_through = (pres.truncation + 1) / 2;
    let mut fixed = vec![0usize; verified_through as usize + 1];
    for c in geometric_fixed_basis(&pres.basis()?) {
        if (0..=verified_through).contains(&c.degree) {
            fixed[c.degree as usize] += 1;
        }
    }
    let mut poly = vec![0usize; verified_through as usize + 1];
    poly[0] = 1;
    for &i in &polynomial {
        let d = generators[i].1;
        if d <= 0 {
            return Err(Error::Degree(format!("{} has fixed degree {d}", generators[i].0)));
        }
        for k in d as usize..poly.len() {
            poly[k] += poly[k - d as usize];
        }
    }
    let counts = (0..=verified_through as usize).map(|d| (d as i64, fixed[d], poly[d])).collect();
    Ok(PhiPresentation {
        polynomial: polynomial.iter().map(|&i| generators[i].0.clone()).collect(),
        generators,
        relations,
        verified_through,
        counts,
    })
}

/// `N_{C₂}^G` of the free basis of a presentation over C₂, cut at
/// underlying dimension `truncation`.
pub fn coinduce_result(pres: &RingPresentation, g: CyclicGroup, truncation: i64) -> Result<Basis> {
    let c2 = Subgroup::of_order(2);
    if pres.group.order() != 2 || !g.contains(c2) {
        return Err(Error::GroupMismatch(format!("coinduction from {} to {g}", pres.group)));
    }
    let index = g.index(c2);
    if index > MAX_COINDUCE_INDEX {
        return Err(Error::Guard(format!("[{g}:C2] = {index} exceeds {MAX_COINDUCE_INDEX}")));
    }
    if truncation > pres.truncation {
        return Err(Error::Guard(format!(
            "presentation computed through {}, asked for {truncation}",
            pres.truncation
        )));
    }
    let full = pres.basis()?;
    let cells: Vec<Cell> = full.cells().iter().filter(|c| c.underlying_dim() <= truncation).cloned().collect();
    let maps = (cells.len() as u64).checked_pow(index as u32).unwrap_or(u64::MAX);
    if maps > MAX_COINDUCE_MAPS {
        return Err(Error::Guard(format!("{maps} maps to enumerate; lower the truncation")));
    }
    let base = Basis::new(pres.group, pres.coeff, cells)?;
    if index == 1 {
        return Ok(base);
    }
    let normed = norm_basis(c2, g, &base)?;
    let kept = normed.cells().iter().filter(|c| c.underlying_dim() <= truncation).cloned().collect();
    Ok(Basis::new(g, pres.coeff, kept)?.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::purering::bur_model;
    use crate::specseq::{bar_e2, GradedPolyAlgebra, Module};

    fn bbur(t: i64) -> RingPresentation {
        let m = bur_model();
        let a = GradedPolyAlgebra::from_model(&m, t).unwrap();
        let k = Module::trivial(&a);
        let page = bar_e2(&a, &k, &k, t).unwrap();
        collapse_and_extend(&page, &m).unwrap()
    }

    #[test]
    fn bbur_presentation() {
        let p = bbur(12);
        let names: Vec<&str> = p.generators.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["y1", "y2", "y3", "y4", "y5"]);
        assert_eq!(p.generators[1].degree.pretty(), "2ρ₂+1");
        let rels: Vec<String> = p.relations.iter().map(|r| p.relation_text(r)).collect();
        assert_eq!(rels, ["y1^2 = a_s*y3", "y2^2 = a_s*y5"]);
        let m = p.to_model().unwrap();
        assert_eq!(m.generators[1].weyl.sign, 1);
        assert_eq!(m.generators[0].weyl.sign, -1);
    }

    #[test]
    fn truncation_ten_omits() {
        let p = bbur(10);
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.omitted.len(), 3);
    }

    #[test]
    fn trivial_page() {
        let m = bur_model();
        let a = GradedPolyAlgebra::from_model(&m, 1).unwrap();
        let k = Module::trivial(&a);
        let page = bar_e2(&a, &k, &k, 1).unwrap();
        let p = collapse_and_extend(&page, &m).unwrap();
        assert!(p.generators.is_empty() && p.relations.is_empty());
        assert_eq!(p.basis().unwrap().len(), 1);
    }

    #[test]
    fn phi_is_polynomial() {
        let phi = phi_presentation(&bbur(12)).unwrap();
        assert_eq!(phi.polynomial, ["z1", "z2", "z4"]);
        assert_eq!(phi.relations[0], ("z1^2".to_string(), "z3".to_string()));
        assert!(phi.is_polynomial(), "{:?}", phi.counts);
    }

    #[test]
    fn coinduction() {
        let p = bbur(6);
        let c2 = coinduce_result(&p, CyclicGroup::c2(), 6).unwrap();
        assert_eq!(c2, p.basis().unwrap());
        let c4 = coinduce_result(&p, CyclicGroup::two_power(2), 6).unwrap();
        assert_eq!(c4.len(), 4);
        assert!(matches!(
            coinduce_result(&p, CyclicGroup::two_power(5), 6),
            Err(Error::Guard(_))
        ));
    }
}
