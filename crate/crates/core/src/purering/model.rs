//! Ring models: generators with underlying and equivariant degrees, Weyl
//! data, rewrite relations, Dyer–Lashof and coproduct tables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

use crate::coefficients::{CoeffRing, PointMonomial, PointRingC2};
use crate::error::{Error, Result};
use crate::grading::RepDegree;
use crate::groups::{CyclicGroup, Subgroup};

/// Exponent vector over the generators, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(vec![])
    }

    pub fn generator(i: usize) -> Self {
        Monomial::from_exponents(
            (0..=i).map(|j| (j == i) as u32).collect(),
        )
    }

    pub fn from_exponents(mut e: Vec<u32>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Monomial(e)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of generator factors.
    pub fn length(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| e <= other.exponent(i))
    }

    fn quotient(&self, divisor: &Monomial) -> Monomial {
        Monomial::from_exponents(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &e)| e - divisor.exponent(i))
                .collect(),
        )
    }

    fn product(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial::from_exponents((0..n).map(|i| self.exponent(i) + other.exponent(i)).collect())
    }
}

/// A term `c · p · m`.
pub type Term = (i64, PointMonomial, Monomial);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellRule {
    /// Every monomial is a cell over the whole group; degrees add.
    Additive,
    /// Monomials are grouped into Weyl orbits: fixed monomials give cells
    /// `(|m|/2)ρ₂`, free pairs give cells `C₂/e₊ ∧ S^{|m|}`.
    Orbits,
}

impl CellRule {
    pub fn tag(&self) -> &'static str {
        match self {
            CellRule::Additive => "additive",
            CellRule::Orbits => "orbits",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeylImage {
    pub target: usize,
    pub sign: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub under: i64,
    pub degree: Option<RepDegree>,
    pub weyl: WeylImage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Monomial,
    pub rhs: Vec<Term>,
}

/// `i_e^*Q^{iρ₂}` on generators modulo decomposables, complete for
/// outputs of ρ-weight at most `bound`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DlTable {
    pub bound: i64,
    pub rows: BTreeMap<(i64, usize), Vec<(i64, Monomial)>>,
}

/// A tensor term `c · m₁ ⊗ m₂`.
pub type CoproductTerm = (i64, Monomial, Monomial);

type NormalCache = RwLock<HashMap<(bool, Monomial), Vec<Term>>>;

pub struct PureRingModel {
    pub name: String,
    pub group: CyclicGroup,
    pub coeff: CoeffRing,
    pub cells: CellRule,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
    pub dl: Option<DlTable>,
    pub coproduct: Option<BTreeMap<usize, Vec<CoproductTerm>>>,
    cache: NormalCache,
}

impl Clone for PureRingModel {
    fn clone(&self) -> Self {
        PureRingModel {
            name: self.name.clone(),
            group: self.group,
            coeff: self.coeff,
            cells: self.cells,
            generators: self.generators.clone(),
            relations: self.relations.clone(),
            dl: self.dl.clone(),
            coproduct: self.coproduct.clone(),
            cache: RwLock::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for PureRingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PureRingModel")
            .field("name", &self.name)
            .field("group", &self.group)
            .field("coeff", &self.coeff)
            .field("generators", &self.generators.len())
            .finish()
    }
}

impl PartialEq for PureRingModel {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.group == other.group
            && self.coeff == other.coeff
            && self.cells == other.cells
            && self.generators == other.generators
            && self.relations == other.relations
            && self.dl == other.dl
            && self.coproduct == other.coproduct
    }
}

const MAX_REWRITE_STEPS: usize = 100_000;

impl PureRingModel {
    pub fn new(name: impl Into<String>, group: CyclicGroup, coeff: CoeffRing, cells: CellRule) -> Result<Self> {
        if group.order() > 2 {
            return Err(Error::Model(format!("ring models live over C2 or e, not {group}")));
        }
        if cells == CellRule::Orbits && group.order() != 2 {
            return Err(Error::Model("orbit cells need the group C2".into()));
        }
        Ok(PureRingModel {
            name: name.into(),
            group,
            coeff,
            cells,
            generators: vec![],
            relations: vec![],
            dl: None,
            coproduct: None,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn top(&self) -> Subgroup {
        self.group.full()
    }

    pub fn bottom(&self) -> Subgroup {
        self.group.trivial()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Adds a generator fixed by the Weyl action with sign `+1`; use
    /// [`PureRingModel::set_weyl`] to change it.
    pub fn add_generator(&mut self, name: &str, under: i64, degree: Option<RepDegree>) -> Result<usize> {
        if self.generator_index(name).is_some() {
            return Err(Error::Model(format!("duplicate generator {name}")));
        }
        if name.is_empty() || name == "1" || name.starts_with("a_s") || name.starts_with("u_s") {
            return Err(Error::Model(format!("reserved generator name `{name}`")));
        }
        if under <= 0 {
            return Err(Error::Model(format!("generator {name} needs positive underlying degree")));
        }
        if let Some(d) = &degree {
            if d.underlying_dim() != under {
                return Err(Error::Model(format!(
                    "generator {name}: degree {d} has underlying dimension {}, declared {under}",
                    d.underlying_dim()
                )));
            }
            if d.stabilizer() != self.top() {
                return Err(Error::Model(format!(
                    "generator {name}: degree over {} in a model over {}",
                    d.stabilizer(),
                    self.group
                )));
            }
        } else if self.cells == CellRule::Additive && self.group.order() > 1 {
            return Err(Error::Model(format!("generator {name} needs an equivariant degree")));
        }
        let index = self.generators.len();
        self.generators.push(Generator {
            name: name.to_string(),
            under,
            degree,
            weyl: WeylImage { target: index, sign: 1 },
        });
        self.invalidate();
        Ok(index)
    }

    pub fn set_weyl(&mut self, generator: usize, target: usize, sign: i64) -> Result<()> {
        if target >= self.generators.len() || sign.abs() != 1 {
            return Err(Error::Model("bad Weyl image".into()));
        }
        self.generators[generator].weyl = WeylImage { target, sign };
        self.invalidate();
        Ok(())
    }

    pub fn add_relation(&mut self, lhs: Monomial, rhs: Vec<Term>) -> Result<()> {
        if lhs.is_one() {
            return Err(Error::Model("relation with left side 1".into()));
        }
        let target = self.monomial_degree(&lhs);
        for (_, p, m) in &rhs {
            if self.group.order() != 2 && !p.is_one() {
                return Err(Error::Model("point coefficients need the group C2".into()));
            }
            let d = self.term_degree(p, m)?;
            let ok = match (&d, &target) {
                (Some(a), Some(b)) => a == b,
                _ => self.under(m) + p.degree().underlying_dim() == self.under(&lhs),
            };
            if !ok {
                return Err(Error::Model(format!(
                    "relation {} has right side of another degree",
                    self.format_monomial(&lhs)
                )));
            }
        }
        self.relations.push(Relation { lhs, rhs });
        self.invalidate();
        Ok(())
    }

    pub fn set_dl_bound(&mut self, bound: i64) {
        self.dl.get_or_insert_with(DlTable::default).bound = bound;
    }

    pub fn add_dl_row(&mut self, i: i64, generator: usize, rhs: Vec<(i64, Monomial)>) -> Result<()> {
        let w = self.weight(&Monomial::generator(generator))?;
        for (_, m) in &rhs {
            if self.weight(m)? != w + i {
                return Err(Error::Model(format!(
                    "Q^{i} of {} must have weight {}",
                    self.generators[generator].name,
                    w + i
                )));
            }
        }
        let table = self.dl.get_or_insert_with(DlTable::default);
        if table.rows.insert((i, generator), rhs).is_some() {
            return Err(Error::Model(format!(
                "duplicate Dyer-Lashof row for Q^{i} {}",
                self.generators[generator].name
            )));
        }
        Ok(())
    }

    pub fn add_coproduct(&mut self, generator: usize, terms: Vec<CoproductTerm>) -> Result<()> {
        let n = self.generators[generator].under;
        for (_, a, b) in &terms {
            if self.under(a) + self.under(b) != n {
                return Err(Error::Model(format!(
                    "coproduct of {} has a term of the wrong degree",
                    self.generators[generator].name
                )));
            }
        }
        let table = self.coproduct.get_or_insert_with(BTreeMap::new);
        if table.insert(generator, terms).is_some() {
            return Err(Error::Model(format!(
                "duplicate coproduct for {}",
                self.generators[generator].name
            )));
        }
        Ok(())
    }

    /// Checks the Weyl data: an involution, and on additive cells the
    /// orientation sign of the cell's degree.
    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.generators.iter().enumerate() {
            let w = g.weyl;
            let back = self.generators[w.target].weyl;
            if back.target != i || back.sign * w.sign != 1 {
                return Err(Error::Model(format!("Weyl action on {} is not an involution", g.name)));
            }
            if self.generators[w.target].under != g.under {
                return Err(Error::Model(format!("Weyl action on {} changes degree", g.name)));
            }
            if self.cells == CellRule::Additive {
                if w.target != i {
                    return Err(Error::Model(format!(
                        "generator {} is a cell over the whole group, so the Weyl group fixes it up to sign",
                        g.name
                    )));
                }
                if let Some(d) = &g.degree {
                    let expected = if (d.underlying_dim() - d.fixed_dim()) % 2 == 0 { 1 } else { -1 };
                    if w.sign != expected {
                        return Err(Error::Model(format!(
                            "Weyl sign of {} must be {expected:+} (orientation of {})",
                            g.name,
                            d.pretty()
                        )));
                    }
                }
            }
        }
        if self.cells == CellRule::Orbits {
            for r in &self.relations {
                let (_, image) = self.weyl_monomial(&r.lhs);
                if !self.relations.iter().any(|s| s.lhs == image) {
                    return Err(Error::Model(format!(
                        "relations are not closed under the Weyl action ({})",
                        self.format_monomial(&r.lhs)
                    )));
                }
            }
        }
        Ok(())
    }

    fn invalidate(&mut self) {
        self.cache.write().expect("rewrite cache").clear();
    }

    pub fn under(&self, m: &Monomial) -> i64 {
        m.0.iter()
            .enumerate()
            .map(|(i, &e)| e as i64 * self.generators[i].under)
            .sum()
    }

    /// Equivariant degree of a monomial on an additive model.
    pub fn monomial_degree(&self, m: &Monomial) -> Option<RepDegree> {
        let mut d = RepDegree::zero(self.top());
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                d = d
                    .add(&self.generators[i].degree.as_ref()?.scale(e as i64))
                    .expect("same stabilizer");
            }
        }
        Some(d)
    }

    fn term_degree(&self, p: &PointMonomial, m: &Monomial) -> Result<Option<RepDegree>> {
        Ok(match self.monomial_degree(m) {
            Some(d) if self.group.order() == 2 => Some(d.add(&RepDegree::from(p.degree()))?),
            Some(d) => Some(d),
            None => None,
        })
    }

    /// Multiplicity of `ρ` in the degree of a monomial.
    pub fn weight(&self, m: &Monomial) -> Result<i64> {
        let d = self
            .monomial_degree(m)
            .ok_or_else(|| Error::Model("weights need equivariant degrees".into()))?;
        match d.as_regular() {
            Some(r) if r.eps == 0 => Ok(r.k),
            _ => Err(Error::Degree(format!("{} is not a multiple of ρ", d.pretty()))),
        }
    }

    /// Ordered product with its Koszul sign.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> (i64, Monomial) {
        let odd = |i: usize| self.generators[i].under % 2 != 0;
        let mut swaps = 0u64;
        let mut b_odd_below = 0u64;
        let n = a.0.len().max(b.0.len());
        for i in 0..n {
            if odd(i) {
                swaps += a.exponent(i) as u64 * b_odd_below;
                b_odd_below += b.exponent(i) as u64;
            }
        }
        (if swaps.is_multiple_of(2) { 1 } else { -1 }, a.product(b))
    }

    /// The Weyl image of a monomial, as `sign · monomial`.
    pub fn weyl_monomial(&self, m: &Monomial) -> (i64, Monomial) {
        let mut sign = 1;
        let mut out = Monomial::one();
        for (i, &e) in m.0.iter().enumerate() {
            let w = self.generators[i].weyl;
            for _ in 0..e {
                let (s, p) = self.mul_monomials(&out, &Monomial::generator(w.target));
                sign *= s * w.sign;
                out = p;
            }
        }
        (sign, out)
    }

    pub fn is_normal(&self, m: &Monomial) -> bool {
        !self.relations.iter().any(|r| r.lhs.divides(m))
    }

    pub fn point_ring(&self) -> PointRingC2 {
        PointRingC2::new(self.coeff)
    }

    /// Reduces `c · p` to canonical form; `None` when the term vanishes.
    pub(crate) fn reduce_coefficient(&self, top: bool, c: i64, p: &PointMonomial) -> Result<Option<(i64, PointMonomial)>> {
        if !top || self.group.order() == 1 {
            if !p.is_one() && p.a > 0 {
                return Ok(None);
            }
            let c = match self.coeff.modulus() {
                Some(n) => c.rem_euclid(n),
                None => c,
            };
            return Ok((c != 0).then_some((c, PointMonomial::ONE)));
        }
        let c = if p.is_one() {
            match self.coeff.modulus() {
                Some(n) => c.rem_euclid(n),
                None => c,
            }
        } else {
            self.point_ring().reduce(p, c)?
        };
        Ok((c != 0).then_some((c, *p)))
    }

    /// Normal form of a single monomial at the top level (`top`) or the
    /// underlying level, where point coefficients restrict (`a_σ ↦ 0`, `u_σ ↦ 1`).
    pub fn normal_form(&self, top: bool, m: &Monomial) -> Result<Vec<Term>> {
        let key = (top, m.clone());
        if let Some(v) = self.cache.read().expect("rewrite cache").get(&key) {
            return Ok(v.clone());
        }
        let mut done: BTreeMap<(Monomial, PointMonomial), i64> = BTreeMap::new();
        let mut work: Vec<Term> = vec![(1, PointMonomial::ONE, m.clone())];
        let mut steps = 0;
        while let Some((c, p, mono)) = work.pop() {
            steps += 1;
            if steps > MAX_REWRITE_STEPS {
                return Err(Error::Model(format!(
                    "rewriting {} does not terminate",
                    self.format_monomial(m)
                )));
            }
            match self.relations.iter().find(|r| r.lhs.divides(&mono)) {
                None => *done.entry((mono, p)).or_insert(0) += c,
                Some(r) => {
                    let q = mono.quotient(&r.lhs);
                    let (s0, _) = self.mul_monomials(&r.lhs, &q);
                    for (rc, rp, rm) in &r.rhs {
                        let (s1, prod) = self.mul_monomials(rm, &q);
                        let point = p.mul(rp);
                        if let Some((cc, pp)) = self.reduce_coefficient(top, c * s0 * s1 * rc, &point)? {
                            work.push((cc, pp, prod));
                        }
                    }
                }
            }
        }
        let mut out = Vec::new();
        for ((mono, p), c) in done {
            if let Some((c, p)) = self.reduce_coefficient(top, c, &p)? {
                out.push((c, p, mono));
            }
        }
        self.cache
            .write()
            .expect("rewrite cache")
            .insert(key, out.clone());
        Ok(out)
    }

    /// All normal monomials of underlying degree at most `bound`, in
    /// graded order.
    pub fn normal_monomials(&self, bound: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.generators.len()];
        self.enumerate(0, bound, &mut exps, &mut out);
        out.sort_by(|a, b| self.graded_cmp(a, b));
        out
    }

    fn enumerate(&self, i: usize, left: i64, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == exps.len() {
            let m = Monomial::from_exponents(exps.clone());
            if self.is_normal(&m) {
                out.push(m);
            }
            return;
        }
        let d = self.generators[i].under;
        let mut e = 0;
        while d * e as i64 <= left {
            exps[i] = e;
            let m = Monomial::from_exponents(exps[..=i].to_vec());
            if e > 0 && !self.is_normal(&m) {
                break;
            }
            self.enumerate(i + 1, left - d * e as i64, exps, out);
            e += 1;
        }
        exps[i] = 0;
    }

    /// Graded order: by underlying degree, then with earlier generators first.
    pub fn graded_cmp(&self, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        self.under(a)
            .cmp(&self.under(b))
            .then_with(|| b.0.cmp(&a.0))
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".into();
        }
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = &self.generators[i].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }

    /// Parses `a1^2*a3`, `1`, and products mixing point classes when
    /// `allow_point` is set.
    pub fn parse_factors(&self, text: &str) -> Result<(i64, PointMonomial, Monomial)> {
        let mut c = 1i64;
        let mut p = PointMonomial::ONE;
        let mut m = Monomial::one();
        for factor in text.split('*').map(str::trim) {
            if factor.is_empty() {
                return Err(Error::Model(format!("empty factor in `{text}`")));
            }
            if let Ok(n) = factor.parse::<i64>() {
                c *= n;
                continue;
            }
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (
                    b.trim(),
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Model(format!("bad exponent in `{factor}`")))?,
                ),
                None => (factor, 1),
            };
            if base == "a_s" || base == "u_s" {
                p = p.mul(&PointMonomial::parse(factor)?);
                continue;
            }
            let i = self
                .generator_index(base)
                .ok_or_else(|| Error::Model(format!("unknown generator `{base}`")))?;
            let mut e = vec![0; i + 1];
            e[i] = exp;
            let (s, prod) = self.mul_monomials(&m, &Monomial::from_exponents(e));
            c *= s;
            m = prod;
        }
        Ok((c, p, m))
    }
}

/// Splits `x - 2*y + z` into signed terms.
pub(crate) fn split_signed(text: &str) -> Result<Vec<(i64, String)>> {
    let mut out = Vec::new();
    let mut sign = 1;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '+' | '-' => {
                if !cur.trim().is_empty() {
                    out.push((sign, cur.trim().to_string()));
                } else if !out.is_empty() || sign != 1 {
                    return Err(Error::Model(format!("dangling sign in `{text}`")));
                }
                cur.clear();
                sign = if ch == '-' { -1 } else { 1 };
            }
            '−' => {
                if !cur.trim().is_empty() {
                    out.push((sign, cur.trim().to_string()));
                }
                cur.clear();
                sign = -1;
            }
            _ => cur.push(ch),
        }
    }
    if cur.trim().is_empty() {
        return Err(Error::Model(format!("missing term in `{text}`")));
    }
    out.push((sign, cur.trim().to_string()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> PureRingModel {
        let c2 = CyclicGroup::c2();
        let mut m = PureRingModel::new("toy", c2, CoeffRing::Z, CellRule::Additive).unwrap();
        for i in 1..=3 {
            let g = m
                .add_generator(&format!("y{i}"), 2 * i + 1, Some(RepDegree::regular(c2.full(), i, 0).add(&RepDegree::c2(1, 0)).unwrap()))
                .unwrap();
            m.set_weyl(g, g, if i % 2 == 0 { 1 } else { -1 }).unwrap();
        }
        m
    }

    #[test]
    fn koszul_signs() {
        let m = toy();
        let y1 = Monomial::generator(0);
        let y2 = Monomial::generator(1);
        assert_eq!(m.mul_monomials(&y1, &y2).0, 1);
        assert_eq!(m.mul_monomials(&y2, &y1).0, -1);
        m.validate().unwrap();
    }

    #[test]
    fn relations_rewrite_with_point_coefficients() {
        let mut m = toy();
        let (_, a, y3) = m.parse_factors("a_s*y3").unwrap();
        m.add_relation(Monomial::from_exponents(vec![2]), vec![(1, a, y3.clone())])
            .unwrap();
        let top = m.normal_form(true, &Monomial::from_exponents(vec![2])).unwrap();
        assert_eq!(top, vec![(1, PointMonomial::new(1, 0), y3)]);
        let under = m.normal_form(false, &Monomial::from_exponents(vec![2])).unwrap();
        assert!(under.is_empty());
        let bad = m.add_relation(Monomial::from_exponents(vec![0, 2]), vec![(1, PointMonomial::ONE, Monomial::generator(2))]);
        assert!(bad.is_err());
    }

    #[test]
    fn normal_monomials_skip_relations() {
        let mut m = PureRingModel::new("ext", CyclicGroup::two_power(0), CoeffRing::F2, CellRule::Additive).unwrap();
        m.add_generator("t", 1, None).unwrap();
        m.add_generator("x", 2, None).unwrap();
        m.add_relation(Monomial::from_exponents(vec![2]), vec![]).unwrap();
        let names: Vec<String> = m.normal_monomials(4).iter().map(|x| m.format_monomial(x)).collect();
        assert_eq!(names, ["1", "t", "x", "t*x", "x^2"]);
    }
}
