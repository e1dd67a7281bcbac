//! Homologically pure ring models. Equivariant products, norms, conorms and
//! Dyer–Lashof operations are computed on the underlying ring and lifted
//! along the (injective) restriction to the trivial group.

pub mod model;

use std::collections::BTreeMap;

use crate::coefficients::{CoeffRing, PointMonomial};
use crate::error::{Error, Result};
use crate::freebasis::{Basis, Cell, FixedCell};
use crate::grading::RepDegree;
use crate::groups::Subgroup;

pub use model::{CellRule, Generator, Monomial, PureRingModel, Relation, Term, WeylImage};

/// A formal sum of `c · p · m` at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub level: Subgroup,
    terms: BTreeMap<(Monomial, PointMonomial), i64>,
}

impl Element {
    pub fn zero(level: Subgroup) -> Self {
        Element {
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(level: Subgroup, m: Monomial) -> Self {
        let mut e = Element::zero(level);
        e.terms.insert((m, PointMonomial::ONE), 1);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &PointMonomial, &Monomial)> {
        self.terms.iter().map(|((m, p), &c)| (c, p, m))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, c: i64, p: PointMonomial, m: Monomial) {
        let e = self.terms.entry((m, p)).or_insert(0);
        *e += c;
    }

    /// Drops zero coefficients and reduces them in the model's coefficients.
    fn settle(mut self, model: &PureRingModel) -> Result<Self> {
        let top = self.level == model.top() && model.group.order() == 2;
        let mut out = Element::zero(self.level);
        for ((m, p), c) in std::mem::take(&mut self.terms) {
            if let Some((c, p)) = model.reduce_coefficient(top, c, &p)? {
                out.push(c, p, m);
            }
        }
        out.terms.retain(|_, c| *c != 0);
        Ok(out)
    }

    /// Base change of the coefficients to 𝔽₂.
    pub fn mod2(&self) -> Element {
        let mut out = self.clone();
        out.terms.retain(|_, c| c.rem_euclid(2) == 1);
        out.terms.values_mut().for_each(|c| *c = 1);
        out
    }
}

/// A sum of tensor monomials `c · p · m₁ ⊗ … ⊗ m_k` at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    pub level: Subgroup,
    pub arity: usize,
    terms: BTreeMap<(Vec<Monomial>, PointMonomial), i64>,
}

impl TensorElement {
    pub fn terms(&self) -> impl Iterator<Item = (i64, &PointMonomial, &[Monomial])> {
        self.terms.iter().map(|((m, p), &c)| (c, p, m.as_slice()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl PureRingModel {
    fn is_top(&self, level: Subgroup) -> bool {
        level == self.top() && self.group.order() == 2
    }

    fn check_level(&self, level: Subgroup) -> Result<()> {
        if level != self.top() && level != self.bottom() {
            return Err(Error::GroupMismatch(format!("level {level} in a model over {}", self.group)));
        }
        Ok(())
    }

    /// Parses `a1^2 - 3*a_s*a3 + 1`. Point classes are only allowed at the
    /// top level of a C₂ model.
    pub fn parse_element(&self, text: &str, level: Subgroup) -> Result<Element> {
        self.check_level(level)?;
        let mut out = Element::zero(level);
        if text.trim() == "0" {
            return Ok(out);
        }
        for (sign, term) in model::split_signed(text)? {
            let (c, p, m) = self.parse_factors(&term)?;
            if !p.is_one() && !self.is_top(level) {
                return Err(Error::Model(format!("point class in `{term}` below the top level")));
            }
            if self.coeff == CoeffRing::Z {
                self.point_ring().check(&p)?;
            }
            for (c2, p2, m2) in self.normal_form(self.is_top(level), &m)? {
                out.push(sign * c * c2, p.mul(&p2), m2);
            }
        }
        out.settle(self)
    }

    pub fn format_element(&self, x: &Element) -> String {
        let mut terms: Vec<(i64, &PointMonomial, &Monomial)> = x.terms().collect();
        terms.sort_by(|a, b| self.graded_cmp(a.2, b.2).then(a.1.cmp(b.1)));
        join_terms(terms.into_iter().map(|(c, p, m)| (c, factor_text(p, &self.format_monomial(m)))))
    }

    pub fn format_tensor(&self, x: &TensorElement) -> String {
        let mut terms: Vec<(i64, &PointMonomial, &[Monomial])> = x.terms().collect();
        terms.sort_by(|a, b| {
            let by_factor = a
                .2
                .iter()
                .zip(b.2)
                .map(|(l, r)| self.graded_cmp(r, l))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal);
            by_factor.then(a.1.cmp(b.1))
        });
        join_terms(terms.into_iter().map(|(c, p, ms)| {
            let body: Vec<String> = ms.iter().map(|m| self.format_monomial(m)).collect();
            (c, factor_text(p, &body.join("|")))
        }))
    }

    /// Equivariant degree of a top-level element on an additive model, if
    /// all its terms agree.
    pub fn element_degree(&self, x: &Element) -> Result<Option<RepDegree>> {
        let mut out: Option<RepDegree> = None;
        for (_, p, m) in x.terms() {
            let d = match self.monomial_degree(m) {
                Some(d) if self.is_top(x.level) => d.add(&RepDegree::from(p.degree()))?,
                _ => RepDegree::integer(self.under(m)),
            };
            match &out {
                None => out = Some(d),
                Some(o) if *o == d => {}
                Some(o) => {
                    return Err(Error::Degree(format!(
                        "terms of degrees {} and {} in one element",
                        o.pretty(),
                        d.pretty()
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Underlying product of two level-e elements.
    fn underlying_product(&self, x: &Element, y: &Element) -> Result<Element> {
        let mut out = Element::zero(self.bottom());
        for (c1, _, m1) in x.terms() {
            for (c2, _, m2) in y.terms() {
                let (s, m) = self.mul_monomials(m1, m2);
                for (c3, _, m3) in self.normal_form(false, &m)? {
                    out.push(s * c1 * c2 * c3, PointMonomial::ONE, m3);
                }
            }
        }
        out.settle(self)
    }

    /// Restriction from the top level to the trivial group.
    pub fn restrict(&self, x: &Element) -> Result<Element> {
        if !self.is_top(x.level) {
            return Ok(x.clone());
        }
        let mut out = Element::zero(self.bottom());
        for (c, p, m) in x.terms() {
            if p.a > 0 {
                continue;
            }
            match self.cells {
                CellRule::Additive => out.push(c, PointMonomial::ONE, m.clone()),
                CellRule::Orbits => {
                    let (s, w) = self.weyl_monomial(m);
                    out.push(c, PointMonomial::ONE, m.clone());
                    if w != *m {
                        out.push(c * s, PointMonomial::ONE, w);
                    }
                }
            }
        }
        out.settle(self)
    }

    /// The unique top-level element restricting to `u`.
    pub fn lift(&self, u: &Element) -> Result<Element> {
        if u.level != self.bottom() {
            return Err(Error::GroupMismatch("only underlying elements are lifted".into()));
        }
        if self.group.order() == 1 {
            return Ok(u.clone());
        }
        let mut out = Element::zero(self.top());
        match self.cells {
            CellRule::Additive => {
                for (c, _, m) in u.terms() {
                    out.push(c, PointMonomial::ONE, m.clone());
                }
            }
            CellRule::Orbits => {
                let coeff: BTreeMap<&Monomial, i64> = u.terms().map(|(c, _, m)| (m, c)).collect();
                for (&m, &c) in &coeff {
                    let (s, w) = self.weyl_monomial(m);
                    if w == *m {
                        out.push(c, PointMonomial::ONE, m.clone());
                        continue;
                    }
                    let partner = coeff.get(&w).copied().unwrap_or(0);
                    let agree = match self.coeff.modulus() {
                        Some(n) => (partner - s * c).rem_euclid(n) == 0,
                        None => partner == s * c,
                    };
                    if !agree {
                        return Err(Error::NotLiftable(self.format_element(u)));
                    }
                    if *m > w {
                        out.push(c, PointMonomial::ONE, m.clone());
                    }
                }
            }
        }
        let out = out.settle(self)?;
        debug_assert_eq!(self.restrict(&out)?, *u);
        Ok(out)
    }

    /// The Weyl action on underlying elements.
    pub fn weyl(&self, x: &Element) -> Result<Element> {
        let mut out = Element::zero(self.bottom());
        for (c, _, m) in x.terms() {
            let (s, w) = self.weyl_monomial(m);
            for (c2, _, m2) in self.normal_form(false, &w)? {
                out.push(c * s * c2, PointMonomial::ONE, m2);
            }
        }
        out.settle(self)
    }
}

fn factor_text(p: &PointMonomial, body: &str) -> String {
    match (p.is_one(), body) {
        (true, b) => b.to_string(),
        (false, "1") => p.to_string(),
        (false, b) => format!("{p}*{b}"),
    }
}

fn join_terms(terms: impl Iterator<Item = (i64, String)>) -> String {
    let mut out = String::new();
    for (c, body) in terms {
        let mag = c.abs();
        let text = match (mag, body.as_str()) {
            (1, b) => b.to_string(),
            (n, "1") => n.to_string(),
            (n, b) => format!("{n}*{b}"),
        };
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        out.push_str(&text);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// The product `x·y`, computed at the top level through the model's
/// relations (additive cells) or by lifting the underlying product
/// (orbit cells), and checked against the underlying product.
pub fn lift_product(model: &PureRingModel, x: &Element, y: &Element) -> Result<Element> {
    if x.level != y.level {
        return Err(Error::GroupMismatch(format!("levels {} and {}", x.level, y.level)));
    }
    if !model.is_top(x.level) {
        return model.underlying_product(x, y);
    }
    let expected = model.underlying_product(&model.restrict(x)?, &model.restrict(y)?)?;
    let out = match model.cells {
        CellRule::Orbits => {
            if x.terms().chain(y.terms()).any(|(_, p, _)| !p.is_one()) {
                return Err(Error::UnsupportedCone("point coefficients on orbit cells".into()));
            }
            model.lift(&expected)?
        }
        CellRule::Additive => {
            let ring = model.point_ring();
            let mut out = Element::zero(x.level);
            for (c1, p1, m1) in x.terms() {
                for (c2, p2, m2) in y.terms() {
                    let p = ring.multiply(p1, p2)?;
                    let (s, m) = model.mul_monomials(m1, m2);
                    for (c3, p3, m3) in model.normal_form(true, &m)? {
                        out.push(s * c1 * c2 * c3, p.mul(&p3), m3);
                    }
                }
            }
            out.settle(model)?
        }
    };
    if model.restrict(&out)? != expected {
        return Err(Error::NotLiftable(format!(
            "product restricts to {}, expected {}",
            model.format_element(&model.restrict(&out)?),
            model.format_element(&expected)
        )));
    }
    Ok(out)
}

/// `N_e^{C₂}(x)`: the lift of `x · γ(x)`.
pub fn norm_element(model: &PureRingModel, x: &Element) -> Result<Element> {
    if model.group.order() != 2 {
        return Err(Error::Model("norms need a model over C2".into()));
    }
    if x.level != model.bottom() {
        return Err(Error::GroupMismatch("norms start at the underlying level".into()));
    }
    let product = model.underlying_product(x, &model.weyl(x)?)?;
    model.lift(&product)
}

/// Targets of the conorm maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConormTarget {
    /// Along the identity: `x` itself.
    Identity,
    /// The coproduct `ψ`, lifted factorwise.
    Diagonal,
    /// Along the fold map: `ψ` of the restriction.
    Fold,
    /// Into `Map(C₂, X)`: `(1 ⊗ γ)ψ` of the restriction.
    Free,
}

impl ConormTarget {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(match text {
            "identity" => ConormTarget::Identity,
            "diagonal" => ConormTarget::Diagonal,
            "fold" => ConormTarget::Fold,
            "free" => ConormTarget::Free,
            _ => return Err(Error::Model(format!("unknown conorm target `{text}`"))),
        })
    }
}

type TensorTerms = BTreeMap<(Vec<Monomial>, PointMonomial), i64>;

fn tensor_mul(model: &PureRingModel, a: &TensorTerms, b: &TensorTerms) -> TensorTerms {
    let mut out = TensorTerms::new();
    for ((ma, pa), ca) in a {
        for ((mb, pb), cb) in b {
            // (x⊗y)(z⊗w) = ± xz⊗yw
            let swap = model.under(&ma[1]) * model.under(&mb[0]);
            let mut sign = if swap % 2 == 0 { 1 } else { -1 };
            let (s0, left) = model.mul_monomials(&ma[0], &mb[0]);
            let (s1, right) = model.mul_monomials(&ma[1], &mb[1]);
            sign *= s0 * s1;
            *out.entry((vec![left, right], pa.mul(pb))).or_insert(0) += sign * ca * cb;
        }
    }
    out
}

fn coproduct_terms(model: &PureRingModel, x: &Element) -> Result<TensorTerms> {
    let table = model
        .coproduct
        .as_ref()
        .ok_or_else(|| Error::MissingData(format!("model {} has no coproduct table", model.name)))?;
    let mut out = TensorTerms::new();
    for (c, p, m) in x.terms() {
        let mut acc = TensorTerms::from([((vec![Monomial::one(), Monomial::one()], *p), c)]);
        for (i, &e) in m.exponents().iter().enumerate() {
            let psi = table.get(&i).ok_or_else(|| {
                Error::MissingData(format!("no coproduct for {}", model.generators[i].name))
            })?;
            let psi: TensorTerms = psi
                .iter()
                .map(|(c, a, b)| ((vec![a.clone(), b.clone()], PointMonomial::ONE), *c))
                .collect();
            for _ in 0..e {
                acc = tensor_mul(model, &acc, &psi);
            }
        }
        for (k, v) in acc {
            *out.entry(k).or_insert(0) += v;
        }
    }
    Ok(out)
}

fn settle_tensor(model: &PureRingModel, level: Subgroup, terms: TensorTerms) -> Result<TensorElement> {
    let top = model.is_top(level);
    let mut out = TensorTerms::new();
    for ((ms, p), c) in terms {
        let mut expanded: Vec<(i64, PointMonomial, Vec<Monomial>)> = vec![(c, p, vec![])];
        for m in &ms {
            let nf = model.normal_form(top, m)?;
            expanded = expanded
                .into_iter()
                .flat_map(|(c, p, prefix)| {
                    nf.iter().map(move |(c2, p2, m2)| {
                        let mut v = prefix.clone();
                        v.push(m2.clone());
                        (c * c2, p.mul(p2), v)
                    })
                })
                .collect();
        }
        for (c, p, v) in expanded {
            *out.entry((v, p)).or_insert(0) += c;
        }
    }
    let mut terms = TensorTerms::new();
    for ((v, p), c) in out {
        if let Some((c, p)) = model.reduce_coefficient(top, c, &p)? {
            terms.insert((v, p), c);
        }
    }
    Ok(TensorElement {
        level,
        arity: 2,
        terms,
    })
}

/// Conorm / coproduct structure maps.
pub fn conorm_element(model: &PureRingModel, x: &Element, target: ConormTarget) -> Result<TensorElement> {
    match target {
        ConormTarget::Identity => Ok(TensorElement {
            level: x.level,
            arity: 1,
            terms: x.terms().map(|(c, p, m)| ((vec![m.clone()], *p), c)).collect(),
        }),
        ConormTarget::Diagonal => {
            if model.cells == CellRule::Orbits && model.is_top(x.level) {
                return Err(Error::Model("factorwise lifts need additive cells".into()));
            }
            settle_tensor(model, x.level, coproduct_terms(model, x)?)
        }
        ConormTarget::Fold => settle_tensor(model, model.bottom(), coproduct_terms(model, &model.restrict(x)?)?),
        ConormTarget::Free => {
            let psi = coproduct_terms(model, &model.restrict(x)?)?;
            let mut twisted = TensorTerms::new();
            for ((ms, p), c) in psi {
                let (s, w) = model.weyl_monomial(&ms[1]);
                *twisted.entry((vec![ms[0].clone(), w], p)).or_insert(0) += s * c;
            }
            settle_tensor(model, model.bottom(), twisted)
        }
    }
}

/// A Dyer–Lashof value; `mod_decomposables` marks values read from the
/// table, which are only known modulo decomposables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlValue {
    pub value: Element,
    pub mod_decomposables: bool,
}

/// `Q^{iρ₂−ε}(x)` for a top-level basis monomial `x`, over 𝔽₂.
pub fn dyer_lashof(model: &PureRingModel, i: i64, eps: u8, x: &Element) -> Result<DlValue> {
    let table = model
        .dl
        .as_ref()
        .ok_or_else(|| Error::MissingData(format!("model {} has no Dyer-Lashof table", model.name)))?;
    if !model.is_top(x.level) || model.cells != CellRule::Additive {
        return Err(Error::Model("Dyer-Lashof operations act on top-level classes of additive C2 models".into()));
    }
    let x = x.mod2();
    let zero = || DlValue {
        value: Element::zero(model.top()),
        mod_decomposables: false,
    };
    let (_, p, m) = match x.terms().collect::<Vec<_>>().as_slice() {
        [] => return Ok(zero()),
        [t] => *t,
        _ => return Err(Error::Model("Dyer-Lashof input must be a single basis monomial".into())),
    };
    if !p.is_one() {
        return Err(Error::Model("Dyer-Lashof input must be a basis monomial".into()));
    }
    let k = model.weight(m)?;
    match eps {
        // every cell is induced from the whole group, so nothing lands in
        // cells induced from the trivial group
        1 => return Ok(zero()),
        0 => {}
        _ => return Err(Error::Degree(format!("eps must be 0 or 1, got {eps}"))),
    }
    if i < k {
        return Ok(zero());
    }
    if i == k {
        return Ok(DlValue {
            value: lift_product(model, &x, &x)?.mod2(),
            mod_decomposables: false,
        });
    }
    if m.length() != 1 {
        return Err(Error::MissingData(format!(
            "Q^{i} of the decomposable {} needs Cartan data",
            model.format_monomial(m)
        )));
    }
    if i + k > table.bound {
        return Err(Error::MissingData(format!(
            "the Dyer-Lashof table stops at weight {}",
            table.bound
        )));
    }
    let g = m.exponents().len() - 1;
    let mut value = Element::zero(model.top());
    for (c, mono) in table.rows.get(&(i, g)).into_iter().flatten() {
        value.push(*c, PointMonomial::ONE, mono.clone());
    }
    Ok(DlValue {
        value: value.mod2(),
        mod_decomposables: true,
    })
}

/// A row of the operation table induced on geometric fixed points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedOperation {
    pub r: i64,
    pub source: FixedCell,
    pub value: Vec<FixedCell>,
    pub mod_decomposables: bool,
}

/// Applies `Q^{rρ₂}` to each generator of weight at most `max_n` and reads
/// the result on geometric fixed points, where `Q^{rρ₂}` becomes `Q^r`.
pub fn fixed_point_operations(model: &PureRingModel, max_n: i64, max_r: i64) -> Result<Vec<FixedOperation>> {
    let fixed = |m: &Monomial| -> Result<FixedCell> {
        let d = model
            .monomial_degree(m)
            .ok_or_else(|| Error::Model("fixed points need equivariant degrees".into()))?;
        Ok(FixedCell {
            label: format!("Φ({})", model.format_monomial(m)),
            degree: d.fixed_dim(),
            odd: d.as_regular().is_some_and(|r| r.eps == 1),
        })
    };
    let mut out = Vec::new();
    for g in 0..model.generators.len() {
        let m = Monomial::generator(g);
        if model.weight(&m)? > max_n {
            continue;
        }
        for r in 0..=max_r {
            let dl = dyer_lashof(model, r, 0, &Element::monomial(model.top(), m.clone()))?;
            let value = dl
                .value
                .terms()
                .map(|(_, _, v)| fixed(v))
                .collect::<Result<Vec<_>>>()?;
            out.push(FixedOperation {
                r,
                source: fixed(&m)?,
                value,
                mod_decomposables: dl.mod_decomposables,
            });
        }
    }
    Ok(out)
}

/// Largest underlying degree accepted by [`expand_basis`].
pub const MAX_EXPAND_DIM: i64 = 32;

/// All normal monomials up to an underlying degree, as cells.
pub fn expand_basis(model: &PureRingModel, bound: i64) -> Result<Basis> {
    if bound > MAX_EXPAND_DIM {
        return Err(Error::Guard(format!(
            "expansion bound {bound} exceeds {MAX_EXPAND_DIM}"
        )));
    }
    let mut cells = Vec::new();
    for m in model.normal_monomials(bound) {
        let label = model.format_monomial(&m);
        match model.cells {
            CellRule::Additive => {
                let degree = model
                    .monomial_degree(&m)
                    .unwrap_or_else(|| RepDegree::integer(model.under(&m)));
                cells.push(Cell::new(label, degree));
            }
            CellRule::Orbits => {
                let (_, w) = model.weyl_monomial(&m);
                let n = model.under(&m);
                if w == m {
                    if n % 2 != 0 {
                        return Err(Error::Model(format!("fixed monomial {label} of odd degree")));
                    }
                    cells.push(Cell::new(label, RepDegree::regular(model.top(), n / 2, 0)));
                } else if m > w {
                    cells.push(Cell::new(label, RepDegree::integer(n)));
                }
            }
        }
    }
    Basis::new(model.group, model.coeff, cells)
}

impl PureRingModel {
    /// The norm of a model over the trivial group: generators `g` and `g'`
    /// swapped by the Weyl action, with orbit cells.
    pub fn norm_model(&self) -> Result<PureRingModel> {
        if self.group.order() != 1 {
            return Err(Error::Model("norm models start from a model over e".into()));
        }
        let c2 = crate::groups::CyclicGroup::c2();
        let mut out = PureRingModel::new(format!("N({})", self.name), c2, self.coeff, CellRule::Orbits)?;
        let n = self.generators.len();
        for copy in ["", "'"] {
            for g in &self.generators {
                out.add_generator(&format!("{}{copy}", g.name), g.under, None)?;
            }
        }
        for i in 0..n {
            out.set_weyl(i, i + n, 1)?;
            out.set_weyl(i + n, i, 1)?;
        }
        let shift = |m: &Monomial| {
            let mut e = vec![0; n];
            e.extend_from_slice(m.exponents());
            Monomial::from_exponents(e)
        };
        for r in &self.relations {
            out.add_relation(r.lhs.clone(), r.rhs.clone())?;
            let rhs = r.rhs.iter().map(|(c, p, m)| (*c, *p, shift(m))).collect();
            out.add_relation(shift(&r.lhs), rhs)?;
        }
        out.validate()?;
        Ok(out)
    }
}

/// The Real BU model: `ā_i` in degree `iρ₂` for `i ≤ 16`.
pub fn bur_model() -> PureRingModel {
    crate::io::parse_model(include_str!("../../models/bur.model")).expect("shipped model parses")
}

/// `𝔽₂[ξ₁] ⊗ E(τ₀)` over the trivial group.
pub fn dual_steenrod_model() -> PureRingModel {
    crate::io::parse_model(include_str!("../../models/dual_steenrod.model")).expect("shipped model parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bur() -> PureRingModel {
        bur_model()
    }

    fn top(m: &PureRingModel, s: &str) -> Element {
        m.parse_element(s, m.top()).unwrap()
    }

    fn under(m: &PureRingModel, s: &str) -> Element {
        m.parse_element(s, m.bottom()).unwrap()
    }

    #[test]
    fn products() {
        let m = bur();
        let p = lift_product(&m, &top(&m, "a1"), &top(&m, "a1")).unwrap();
        assert_eq!(m.format_element(&p), "a1^2");
        let p = lift_product(&m, &top(&m, "a_s*a1"), &top(&m, "a2")).unwrap();
        assert_eq!(m.format_element(&p), "a_s*a1*a2");
        let p = lift_product(&m, &top(&m, "3*a_s*a1"), &top(&m, "a2")).unwrap();
        assert_eq!(m.format_element(&p), "a_s*a1*a2");
        assert!(matches!(
            m.parse_element("u_s*a1", m.top()),
            Err(Error::UnsupportedCone(_))
        ));
    }

    #[test]
    fn norms() {
        let m = bur();
        assert_eq!(m.format_element(&norm_element(&m, &under(&m, "a1")).unwrap()), "-a1^2");
        assert_eq!(m.format_element(&norm_element(&m, &under(&m, "a2")).unwrap()), "a2^2");
        assert_eq!(m.format_element(&norm_element(&m, &under(&m, "1")).unwrap()), "1");
        let n = norm_element(&m, &under(&m, "a1 + a1")).unwrap();
        assert_eq!(m.format_element(&n), "-4*a1^2");
    }

    #[test]
    fn conorms() {
        let m = bur();
        let one = conorm_element(&m, &top(&m, "1"), ConormTarget::Diagonal).unwrap();
        assert_eq!(m.format_tensor(&one), "1|1");
        let psi = conorm_element(&m, &top(&m, "a1"), ConormTarget::Diagonal).unwrap();
        assert_eq!(m.format_tensor(&psi), "a1|1 + 1|a1");
        let fold = conorm_element(&m, &top(&m, "a1"), ConormTarget::Fold).unwrap();
        assert_eq!(fold.level, m.bottom());
        assert_eq!(m.format_tensor(&fold), "a1|1 + 1|a1");
        let free = conorm_element(&m, &top(&m, "a1"), ConormTarget::Free).unwrap();
        assert_eq!(m.format_tensor(&free), "a1|1 - 1|a1");
    }

    #[test]
    fn dyer_lashof_examples() {
        let m = bur();
        for n in 1..=5 {
            let x = top(&m, &format!("a{n}"));
            let q = dyer_lashof(&m, n + 1, 0, &x).unwrap();
            assert!(q.mod_decomposables);
            assert_eq!(m.format_element(&q.value), format!("a{}", 2 * n + 1));
            let sq = dyer_lashof(&m, n, 0, &x).unwrap();
            assert_eq!(m.format_element(&sq.value), format!("a{n}^2"));
            assert!(dyer_lashof(&m, n + 1, 1, &x).unwrap().value.is_zero());
        }
        assert!(matches!(
            dyer_lashof(&m, 5, 0, &top(&m, "a1*a2")),
            Err(Error::MissingData(_))
        ));
    }

    #[test]
    fn expansion() {
        let m = bur();
        let b = expand_basis(&m, 6).unwrap();
        let labels: Vec<&str> = b.cells().iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["1", "a1", "a1^2", "a2", "a1^3", "a1*a2", "a3"]);
        let empty = PureRingModel::new("pt", crate::groups::CyclicGroup::c2(), CoeffRing::Z, CellRule::Additive).unwrap();
        assert_eq!(expand_basis(&empty, 10).unwrap().len(), 1);
    }

    #[test]
    fn norm_model_cells() {
        let n = dual_steenrod_model().norm_model().unwrap();
        let b = expand_basis(&n, 2).unwrap();
        let summary: Vec<String> = b.cells().iter().map(|c| c.to_string()).collect();
        assert_eq!(
            summary,
            [
                "1 C2 0",
                "tau0 e 1",
                "tau0*tau0' C2 1*rho[C2]",
                "xi1 e 2",
            ]
        );
        let x = n.parse_element("xi1", n.bottom()).unwrap();
        assert_eq!(n.format_element(&norm_element(&n, &x).unwrap()), "xi1*xi1'");
    }
}
