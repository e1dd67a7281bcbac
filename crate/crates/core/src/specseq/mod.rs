//! Tor pages of the bar, twisted bar and Eilenberg–Moore spectral
//! sequences, computed with a Koszul complex, and the collapse and
//! extension step for BBU_ℝ.

mod collapse;
mod koszul;

use std::collections::BTreeMap;
use std::fmt;

use crate::coefficients::CoeffRing;
use crate::error::{Error, Result};
use crate::grading::RepDegree;
use crate::groups::Subgroup;
use crate::linalg::AbGroup;
use crate::purering::{CellRule, Monomial, PureRingModel};

pub use collapse::{coinduce_result, collapse_and_extend, phi_presentation, PhiPresentation, PresentationGenerator, RingPresentation};

/// Largest truncation (underlying dimension) accepted by the engine.
pub const MAX_TRUNCATION: i64 = 16;

pub fn check_truncation(t: i64) -> Result<()> {
    if !(0..=MAX_TRUNCATION).contains(&t) {
        return Err(Error::Guard(format!(
            "truncation {t} outside 0..={MAX_TRUNCATION}; lower --trunc"
        )));
    }
    Ok(())
}

/// A polynomial algebra on named generators of nonzero degree, all of the
/// same sign of underlying dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPolyAlgebra {
    pub coeff: CoeffRing,
    pub stabilizer: Subgroup,
    pub generators: Vec<(String, RepDegree)>,
}

impl GradedPolyAlgebra {
    pub fn new(coeff: CoeffRing, stabilizer: Subgroup, generators: Vec<(String, RepDegree)>) -> Result<Self> {
        let mut sign = 0;
        for (name, d) in &generators {
            if d.stabilizer() != stabilizer {
                return Err(Error::Degree(format!("generator {name} lives over {}", d.stabilizer())));
            }
            let s = d.underlying_dim().signum();
            if s == 0 {
                return Err(Error::Degree(format!("generator {name} has underlying dimension 0")));
            }
            if sign != 0 && s != sign {
                return Err(Error::Degree("generators of mixed sign".into()));
            }
            sign = s;
        }
        Ok(GradedPolyAlgebra {
            coeff,
            stabilizer,
            generators,
        })
    }

    fn additive(model: &PureRingModel) -> Result<()> {
        if model.cells != CellRule::Additive {
            return Err(Error::Model("Tor pages need a model with additive cells".into()));
        }
        Ok(())
    }

    /// The homology ring of an additive model, generators through `truncation`.
    pub fn from_model(model: &PureRingModel, truncation: i64) -> Result<Self> {
        Self::additive(model)?;
        let gens = model
            .generators
            .iter()
            .enumerate()
            .filter(|(_, g)| g.under <= truncation)
            .map(|(i, g)| {
                let d = model
                    .monomial_degree(&Monomial::generator(i))
                    .unwrap_or_else(|| RepDegree::integer(g.under));
                (g.name.clone(), d)
            })
            .collect();
        Self::new(model.coeff, model.top(), gens)
    }

    /// The underlying (non-equivariant) ring.
    pub fn underlying(model: &PureRingModel, truncation: i64) -> Result<Self> {
        Self::additive(model)?;
        let gens = model
            .generators
            .iter()
            .filter(|g| g.under <= truncation)
            .map(|g| (g.name.clone(), RepDegree::integer(g.under)))
            .collect();
        Self::new(model.coeff, Subgroup::of_order(1), gens)
    }

    /// `N_e^{C₂}` of the underlying ring: generators `g` and `g'`.
    pub fn normed_underlying(model: &PureRingModel, truncation: i64) -> Result<Self> {
        let base = Self::underlying(model, truncation)?;
        let mut gens = base.generators.clone();
        gens.extend(base.generators.iter().map(|(n, d)| (format!("{n}'"), d.clone())));
        Self::new(model.coeff, base.stabilizer, gens)
    }

    /// The cohomology ring: dual generators in negated degrees.
    pub fn cohomology(model: &PureRingModel, truncation: i64) -> Result<Self> {
        let h = Self::from_model(model, truncation)?;
        let gens = h
            .generators
            .into_iter()
            .map(|(n, d)| (format!("{n}*"), d.negate()))
            .collect();
        Self::new(h.coeff, h.stabilizer, gens)
    }

    pub fn zero_degree(&self) -> RepDegree {
        RepDegree::zero(self.stabilizer)
    }
}

/// A module over a [`GradedPolyAlgebra`] given by a homogeneous basis and
/// structure constants: `action[g][b]` lists `(coefficient, basis index)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Module {
    pub basis: Vec<(String, RepDegree)>,
    pub action: Vec<Vec<Vec<(i64, usize)>>>,
}

impl Module {
    /// The base, with every generator acting by zero.
    pub fn trivial(a: &GradedPolyAlgebra) -> Self {
        Module {
            basis: vec![("1".into(), a.zero_degree())],
            action: vec![vec![vec![]]; a.generators.len()],
        }
    }

    /// `A` itself, truncated at `|underlying dim| ≤ truncation`.
    pub fn free(a: &GradedPolyAlgebra, truncation: i64) -> Result<Self> {
        let n = a.generators.len();
        let mut monos: Vec<(Vec<u32>, RepDegree)> = vec![(vec![0; n], a.zero_degree())];
        for (i, (_, d)) in a.generators.iter().enumerate() {
            let mut extra = Vec::new();
            for (e, base) in &monos {
                let mut e = e.clone();
                let mut deg = base.clone();
                loop {
                    e[i] += 1;
                    deg = deg.add(d)?;
                    if deg.underlying_dim().abs() > truncation {
                        break;
                    }
                    extra.push((e.clone(), deg.clone()));
                }
            }
            monos.extend(extra);
        }
        monos.sort_by(|x, y| {
            (x.1.underlying_dim().abs(), std::cmp::Reverse(&x.0)).cmp(&(y.1.underlying_dim().abs(), std::cmp::Reverse(&y.0)))
        });
        let index: BTreeMap<Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m.0.clone(), i)).collect();
        let label = |e: &[u32]| {
            let parts: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    let name = &a.generators[i].0;
                    if x == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{x}")
                    }
                })
                .collect();
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join("*")
            }
        };
        let action = (0..n)
            .map(|g| {
                monos
                    .iter()
                    .map(|(e, _)| {
                        let mut t = e.clone();
                        t[g] += 1;
                        index.get(&t).map(|&j| vec![(1, j)]).unwrap_or_default()
                    })
                    .collect()
            })
            .collect();
        Ok(Module {
            basis: monos.iter().map(|(e, d)| (label(e), d.clone())).collect(),
            action,
        })
    }
}

/// Position of an entry: filtration `−s` and internal degree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PageKey {
    /// `|underlying dim|` of the internal degree, for ordering.
    pub under: i64,
    pub s: usize,
    pub degree: RepDegree,
}

impl PageKey {
    pub fn new(s: usize, degree: RepDegree) -> Self {
        PageKey {
            under: degree.underlying_dim().abs(),
            s,
            degree,
        }
    }

    pub fn filtration(&self) -> i64 {
        -(self.s as i64)
    }

    /// Total degree `V + s`.
    pub fn total_degree(&self) -> RepDegree {
        let stab = self.degree.stabilizer();
        let one = RepDegree::permutation(stab, stab).scale(self.s as i64);
        self.degree.add(&one).expect("same stabilizer")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TorEntry {
    pub group: AbGroup,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PageKind {
    Tor,
    Bar,
    Twisted,
    EilenbergMoore,
}

impl PageKind {
    pub fn tag(&self) -> &'static str {
        match self {
            PageKind::Tor => "tor",
            PageKind::Bar => "bar",
            PageKind::Twisted => "twisted",
            PageKind::EilenbergMoore => "em",
        }
    }

    /// Pages for which only the E₂ term is computed.
    pub fn e2_only(&self) -> bool {
        matches!(self, PageKind::Twisted | PageKind::EilenbergMoore)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorPage {
    pub kind: PageKind,
    pub coeff: CoeffRing,
    pub truncation: i64,
    pub entries: BTreeMap<PageKey, TorEntry>,
    /// Alternating chain counts per internal degree.
    chain_euler: BTreeMap<RepDegree, i64>,
}

impl TorPage {
    fn empty(kind: PageKind, coeff: CoeffRing, truncation: i64) -> Self {
        TorPage {
            kind,
            coeff,
            truncation,
            entries: BTreeMap::new(),
            chain_euler: BTreeMap::new(),
        }
    }

    pub fn rank(&self, s: usize, degree: &RepDegree) -> usize {
        self.entries
            .get(&PageKey::new(s, degree.clone()))
            .map_or(0, |e| e.group.num_generators())
    }

    /// The classes in filtration −1.
    pub fn filtration_one(&self) -> impl Iterator<Item = (&PageKey, &TorEntry)> {
        self.entries.iter().filter(|(k, _)| k.s == 1)
    }

    /// Homology has the Euler characteristic of the chains in every degree.
    pub fn euler_consistent(&self) -> bool {
        let mut homology: BTreeMap<&RepDegree, i64> = BTreeMap::new();
        for (k, e) in &self.entries {
            let r = match self.coeff {
                CoeffRing::Z => e.group.rank(),
                CoeffRing::F2 => e.group.num_generators(),
            } as i64;
            *homology.entry(&k.degree).or_insert(0) += if k.s % 2 == 0 { r } else { -r };
        }
        self.chain_euler
            .iter()
            .all(|(d, &x)| homology.get(d).copied().unwrap_or(0) == x)
            && homology.iter().all(|(d, &x)| self.chain_euler.get(*d).copied().unwrap_or(0) == x)
    }

    /// Compares ranks with the exterior algebra on the filtration −1 classes.
    pub fn is_exterior(&self) -> bool {
        let gens: Vec<RepDegree> = self
            .filtration_one()
            .flat_map(|(k, e)| std::iter::repeat_n(k.degree.clone(), e.group.num_generators()))
            .collect();
        if self.entries.values().any(|e| !e.group.torsion().is_empty() && self.coeff == CoeffRing::Z) {
            return false;
        }
        let stabilizer = match self.entries.keys().next() {
            Some(k) => k.degree.stabilizer(),
            None => return true,
        };
        exterior_ranks(&gens, stabilizer, self.truncation)
            == self
                .entries
                .iter()
                .map(|(k, e)| (k.clone(), e.group.num_generators()))
                .filter(|(_, r)| *r > 0)
                .collect()
    }
}

fn exterior_ranks(gens: &[RepDegree], stabilizer: Subgroup, truncation: i64) -> BTreeMap<PageKey, usize> {
    let mut out: BTreeMap<PageKey, usize> = BTreeMap::new();
    let mut subsets: Vec<(usize, RepDegree)> = vec![(0, RepDegree::zero(stabilizer))];
    for g in gens {
        let extra: Vec<(usize, RepDegree)> = subsets
            .iter()
            .filter_map(|(s, d)| {
                let nd = d.add(g).ok()?;
                (nd.underlying_dim().abs() <= truncation).then_some((s + 1, nd))
            })
            .collect();
        subsets.extend(extra);
    }
    for (s, d) in subsets {
        *out.entry(PageKey::new(s, d)).or_insert(0) += 1;
    }
    out
}

/// The exterior algebra on classes `[g]` in bidegree `(−1, |g|)`.
pub fn exterior_page(a: &GradedPolyAlgebra, truncation: i64) -> TorPage {
    let mut page = TorPage::empty(PageKind::Tor, a.coeff, truncation);
    let order = a.coeff.order();
    let mut subsets: Vec<(Vec<usize>, RepDegree)> = vec![(vec![], a.zero_degree())];
    for (i, (_, d)) in a.generators.iter().enumerate() {
        let extra: Vec<(Vec<usize>, RepDegree)> = subsets
            .iter()
            .filter_map(|(s, deg)| {
                let nd = deg.add(d).ok()?;
                let mut s = s.clone();
                s.push(i);
                (nd.underlying_dim().abs() <= truncation).then_some((s, nd))
            })
            .collect();
        subsets.extend(extra);
    }
    for (s, d) in subsets {
        let label = if s.is_empty() {
            "1".to_string()
        } else {
            s.iter().map(|&i| format!("[{}]", a.generators[i].0)).collect()
        };
        let e = page.entries.entry(PageKey::new(s.len(), d.clone())).or_default();
        e.group.factors.push(order);
        e.labels.push(label);
        let sign = if s.len() % 2 == 0 { 1 } else { -1 };
        *page.chain_euler.entry(d).or_insert(0) += sign;
    }
    for e in page.entries.values_mut() {
        let mut pairs: Vec<(String, u64)> = e.labels.drain(..).zip(e.group.factors.drain(..)).collect();
        pairs.sort();
        for (l, f) in pairs {
            e.labels.push(l);
            e.group.factors.push(f);
        }
    }
    page
}

fn koszul_page(kind: PageKind, a: &GradedPolyAlgebra, x: &Module, y: &Module, truncation: i64) -> Result<TorPage> {
    check_truncation(truncation)?;
    let complex = koszul::Complex::new(a, x, y)?;
    let mut page = TorPage::empty(kind, a.coeff, truncation);
    for (key, entry, chains) in complex.homology(truncation)? {
        let sign = if key.s % 2 == 0 { 1 } else { -1 };
        *page.chain_euler.entry(key.degree.clone()).or_insert(0) += sign * chains as i64;
        if !entry.group.is_zero() {
            page.entries.insert(key, entry);
        }
    }
    page.chain_euler.retain(|_, v| *v != 0);
    Ok(page)
}

/// The Koszul computation of `Tor^A(k, k)` next to the closed form.
#[derive(Debug, Clone)]
pub struct TorCheck {
    pub computed: TorPage,
    pub closed_form: TorPage,
}

impl TorCheck {
    pub fn agree(&self) -> bool {
        self.computed.entries == self.closed_form.entries
    }
}

pub fn tor_koszul(a: &GradedPolyAlgebra, truncation: i64) -> Result<TorCheck> {
    let k = Module::trivial(a);
    let computed = koszul_page(PageKind::Tor, a, &k, &k, truncation)?;
    Ok(TorCheck {
        computed,
        closed_form: exterior_page(a, truncation),
    })
}

/// `Tor^A(X, Y)`, the E₂ page of the bar spectral sequence.
pub fn bar_e2(a: &GradedPolyAlgebra, x: &Module, y: &Module, truncation: i64) -> Result<TorPage> {
    koszul_page(PageKind::Bar, a, x, y, truncation)
}

/// Which space the twisted or Eilenberg–Moore page is taken with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideInput {
    Point,
    Free,
}

impl SideInput {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "point" => Ok(SideInput::Point),
            "free" => Ok(SideInput::Free),
            _ => Err(Error::Model(format!("unknown module `{text}` (point|free)"))),
        }
    }
}

/// `Tor` over `N_e^{C₂}(i_e^*A)` of `(R(Map(C₂, X)), R(A))`, computed on
/// the underlying level; `a'` acts on `R(A)` through the Weyl action.
pub fn twisted_bar_e2(model: &PureRingModel, x: SideInput, truncation: i64) -> Result<TorPage> {
    if model.group.order() != 2 {
        return Err(Error::Model("twisted pages need a model over C2".into()));
    }
    check_truncation(truncation)?;
    let base = GradedPolyAlgebra::underlying(model, truncation)?;
    let normed = GradedPolyAlgebra::normed_underlying(model, truncation)?;
    let n = base.generators.len();
    let ring = Module::free(&base, truncation)?;
    let mut action = ring.action.clone();
    for i in 0..n {
        let w = model.generators[i].weyl;
        let twisted = ring.action[w.target]
            .iter()
            .map(|image| image.iter().map(|&(c, j)| (c * w.sign, j)).collect())
            .collect();
        action.push(twisted);
    }
    let right = Module {
        basis: ring.basis,
        action,
    };
    let left = match x {
        SideInput::Point => Module::trivial(&normed),
        SideInput::Free => Module::free(&normed, truncation)?,
    };
    koszul_page(PageKind::Twisted, &normed, &left, &right, truncation)
}

/// `Tor` over `H^★(B)` of two cohomology modules (E₂ only).
pub fn em_e2(model: &PureRingModel, y: SideInput, truncation: i64) -> Result<TorPage> {
    check_truncation(truncation)?;
    let h = GradedPolyAlgebra::cohomology(model, truncation)?;
    let x = Module::trivial(&h);
    let y = match y {
        SideInput::Point => Module::trivial(&h),
        SideInput::Free => Module::free(&h, truncation)?,
    };
    koszul_page(PageKind::EilenbergMoore, &h, &x, &y, truncation)
}

impl fmt::Display for TorPage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in &self.entries {
            writeln!(f, "({}, {})\t{}\t{}", k.filtration(), k.degree.pretty(), e.group, e.labels.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::CyclicGroup;

    fn one_generator() -> GradedPolyAlgebra {
        let c2 = CyclicGroup::c2().full();
        GradedPolyAlgebra::new(CoeffRing::Z, c2, vec![("x".into(), RepDegree::regular(c2, 1, 0))]).unwrap()
    }

    #[test]
    fn single_generator() {
        let a = one_generator();
        let check = tor_koszul(&a, 10).unwrap();
        assert!(check.agree());
        let labels: Vec<String> = check.computed.entries.values().flat_map(|e| e.labels.clone()).collect();
        assert_eq!(labels, ["1", "[x]"]);
        assert!(check.computed.is_exterior());
    }

    #[test]
    fn no_generators() {
        let a = GradedPolyAlgebra::new(CoeffRing::F2, Subgroup::of_order(2), vec![]).unwrap();
        let check = tor_koszul(&a, 8).unwrap();
        assert!(check.agree());
        assert_eq!(check.computed.entries.len(), 1);
    }

    #[test]
    fn free_module_collapses() {
        let a = one_generator();
        let free = Module::free(&a, 8).unwrap();
        let k = Module::trivial(&a);
        let page = bar_e2(&a, &free, &k, 8).unwrap();
        assert_eq!(page.entries.len(), 1);
        assert!(page.entries.keys().all(|k| k.s == 0));
        assert!(page.euler_consistent());
        let both = bar_e2(&a, &free, &free, 8).unwrap();
        assert!(both.entries.keys().all(|k| k.s == 0));
        assert_eq!(both.entries.len(), 5);
    }

    #[test]
    fn bu_exterior() {
        let m = crate::purering::bur_model();
        let a = GradedPolyAlgebra::from_model(&m, 8).unwrap();
        assert_eq!(a.generators.len(), 4);
        let check = tor_koszul(&a, 8).unwrap();
        assert!(check.agree());
        let c2 = Subgroup::of_order(2);
        assert_eq!(check.computed.rank(2, &RepDegree::regular(c2, 3, 0)), 1);
        assert!(check.computed.euler_consistent());
    }

    #[test]
    fn twisted_and_em_pages() {
        let m = crate::purering::bur_model();
        let t = twisted_bar_e2(&m, SideInput::Free, 6).unwrap();
        assert!(t.entries.keys().all(|k| k.s == 0));
        let t = twisted_bar_e2(&m, SideInput::Point, 6).unwrap();
        assert!(t.euler_consistent());
        assert!(t.entries.keys().any(|k| k.s == 1));
        let em = em_e2(&m, SideInput::Point, 6).unwrap();
        let ones: Vec<String> = em.filtration_one().map(|(k, _)| k.degree.pretty()).collect();
        assert_eq!(ones, ["-ρ₂", "-2ρ₂", "-3ρ₂"]);
        let em = em_e2(&m, SideInput::Free, 6).unwrap();
        assert_eq!(em.entries.len(), 1);
        assert!(matches!(bar_e2(&one_generator(), &Module::trivial(&one_generator()), &Module::trivial(&one_generator()), 40), Err(Error::Guard(_))));
    }
}
