//! Bases of free spectra as families of induced cells `G/H₊ ∧ S^V`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::coefficients::{CoeffRing, MackeyTable};
use crate::error::{Error, Result};
use crate::grading::RepDegree;
use crate::groups::{coinduce_orbits, lcm, orbit_product, restrict_gset, CyclicGroup, GSet, PointSet, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cell {
    pub label: String,
    pub degree: RepDegree,
}

impl Cell {
    pub fn new(label: impl Into<String>, degree: RepDegree) -> Self {
        Cell {
            label: label.into(),
            degree,
        }
    }

    pub fn stabilizer(&self) -> Subgroup {
        self.degree.stabilizer()
    }

    pub fn underlying_dim(&self) -> i64 {
        self.degree.underlying_dim()
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.label, self.stabilizer(), self.degree)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    group: CyclicGroup,
    coeff: CoeffRing,
    cells: Vec<Cell>,
}

impl Basis {
    pub fn new(group: CyclicGroup, coeff: CoeffRing, cells: Vec<Cell>) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &cells {
            if !group.contains(c.stabilizer()) {
                return Err(Error::MalformedBasis(format!(
                    "cell {} has stabilizer {} outside {group}",
                    c.label,
                    c.stabilizer()
                )));
            }
            if !seen.insert(c.label.as_str()) {
                return Err(Error::MalformedBasis(format!("duplicate label {}", c.label)));
            }
        }
        Ok(Basis { group, coeff, cells })
    }

    pub fn empty(group: CyclicGroup, coeff: CoeffRing) -> Self {
        Basis {
            group,
            coeff,
            cells: vec![],
        }
    }

    /// The unit: one top cell in degree 0.
    pub fn unit(group: CyclicGroup, coeff: CoeffRing) -> Self {
        Basis {
            group,
            coeff,
            cells: vec![Cell::new("1", RepDegree::zero(group.full()))],
        }
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn coeff(&self) -> CoeffRing {
        self.coeff
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Bases are finite lists, so every basis has finitely many cells in
    /// each underlying dimension.
    pub fn is_finite_type(&self) -> bool {
        true
    }

    pub fn all_regular(&self) -> bool {
        self.cells.iter().all(|c| c.degree.is_regular())
    }

    /// Rank of the underlying homology in each dimension (`|G/H|` per cell).
    pub fn underlying_ranks(&self) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for c in &self.cells {
            *out.entry(c.underlying_dim()).or_insert(0) += self.group.index(c.stabilizer());
        }
        out
    }

    /// The indexing G-set of the cells of a given underlying dimension.
    pub fn gset_in_dim(&self, n: i64) -> GSet {
        GSet::from_orbits(
            self.group,
            self.cells
                .iter()
                .filter(|c| c.underlying_dim() == n)
                .map(|c| (c.stabilizer(), 1)),
        )
    }

    pub fn cell(&self, label: &str) -> Option<&Cell> {
        self.cells.iter().find(|c| c.label == label)
    }

    pub fn sorted(mut self) -> Self {
        self.cells.sort_by(|a, b| {
            (a.underlying_dim(), a.stabilizer(), &a.label).cmp(&(b.underlying_dim(), b.stabilizer(), &b.label))
        });
        self
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cells {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn same_setting(b1: &Basis, b2: &Basis) -> Result<()> {
    if b1.group != b2.group {
        return Err(Error::GroupMismatch(format!("{} vs {}", b1.group, b2.group)));
    }
    if b1.coeff != b2.coeff {
        return Err(Error::GroupMismatch(format!(
            "coefficients {} vs {}",
            b1.coeff, b2.coeff
        )));
    }
    Ok(())
}

/// Box product: each pair of cells over `H` and `K` gives `|G|/lcm(|H|,|K|)`
/// cells over `H∩K` in degree `Res V + Res W`.
pub fn box_product(b1: &Basis, b2: &Basis) -> Result<Basis> {
    same_setting(b1, b2)?;
    let g = b1.group;
    let mut cells = Vec::new();
    for x in &b1.cells {
        for y in &b2.cells {
            let prod = orbit_product(g, x.stabilizer(), y.stabilizer());
            let (l, copies) = prod.orbits().next().expect("nonempty product");
            let degree = x.degree.restrict(l)?.add(&y.degree.restrict(l)?)?;
            for i in 0..copies {
                let label = if copies == 1 {
                    format!("{}|{}", x.label, y.label)
                } else {
                    format!("{}|{}#{i}", x.label, y.label)
                };
                cells.push(Cell::new(label, degree.clone()));
            }
        }
    }
    Basis::new(g, b1.coeff, cells)
}

/// Restriction of a basis to a subgroup `K`, as a basis over `K`.
pub fn restrict_basis(b: &Basis, k: Subgroup) -> Result<Basis> {
    let g = b.group;
    if !g.contains(k) {
        return Err(Error::NotSubgroup(k.to_string(), g.to_string()));
    }
    let mut cells = Vec::new();
    for c in &b.cells {
        let j = c.stabilizer();
        let copies = g.order() / lcm(j.order(), k.order());
        let degree = c.degree.restrict(j.intersect(k))?;
        for i in 0..copies {
            let label = if copies == 1 {
                c.label.clone()
            } else {
                format!("{}#{i}", c.label)
            };
            cells.push(Cell::new(label, degree.clone()));
        }
    }
    Basis::new(g.as_group(k), b.coeff, cells)
}

/// Induction `G ⋉_H` of a basis over `H`: each cell keeps its stabilizer and degree.
pub fn induce_basis(b: &Basis, g: CyclicGroup) -> Result<Basis> {
    let h = Subgroup::of_order(b.group.order());
    if !g.contains(h) {
        return Err(Error::NotSubgroup(b.group.to_string(), g.to_string()));
    }
    Basis::new(g, b.coeff, b.cells.clone())
}

/// One point per coset of each cell's stabilizer.
struct LabeledPoints {
    points: PointSet,
    labels: Vec<String>,
    cell_of: Vec<usize>,
}

fn labeled_points(b: &Basis) -> LabeledPoints {
    let h = b.group;
    let mut gen = Vec::new();
    let mut labels = Vec::new();
    let mut cell_of = Vec::new();
    for (ci, c) in b.cells.iter().enumerate() {
        let size = h.index(c.stabilizer()) as usize;
        let base = gen.len();
        for i in 0..size {
            gen.push(base + (i + 1) % size);
            labels.push(if size == 1 {
                c.label.clone()
            } else {
                format!("{}@{i}", c.label)
            });
            cell_of.push(ci);
        }
    }
    LabeledPoints {
        points: PointSet::new(h, gen).expect("coset action is a permutation"),
        labels,
        cell_of,
    }
}

/// The norm `N_H^G` of a basis over `H`: cells indexed by orbits of
/// `Map^H(G, T)` where `T` is the set of cell points. A map fixed by `S`
/// gets degree `Σ_r Ind_{S∩H}^S Res_{S∩H} V_{f(r)}` over representatives `r`
/// of the `S`-orbits on `G/H`.
pub fn norm_basis(h: Subgroup, g: CyclicGroup, b: &Basis) -> Result<Basis> {
    if b.group.order() != h.order() || !g.contains(h) {
        return Err(Error::GroupMismatch(format!(
            "basis over {} normed along {h} ≤ {g}",
            b.group
        )));
    }
    let lp = labeled_points(b);
    let orbits = coinduce_orbits(g, h, &lp.points)?;
    let n = g.order();
    let m = g.index(h);
    let mut cells = Vec::with_capacity(orbits.len());
    for o in orbits {
        let s = o.stabilizer;
        let sh = s.intersect(h);
        let step = (n / s.order()) % m;
        let mut seen = vec![false; m as usize];
        let mut degree = RepDegree::zero(s);
        for r in 0..m as usize {
            if seen[r] {
                continue;
            }
            let mut x = r;
            while !seen[x] {
                seen[x] = true;
                x = (x + step as usize) % m as usize;
            }
            let cell = &b.cells[lp.cell_of[o.representative[r]]];
            if !sh.is_subgroup_of(cell.stabilizer()) {
                return Err(Error::MalformedBasis(format!(
                    "orbit stabilizer {sh} not inside the stabilizer of {}",
                    cell.label
                )));
            }
            let piece = cell.degree.restrict(sh)?.induce(s)?;
            degree = degree.add(&piece)?;
        }
        let labels: Vec<&str> = o.representative.iter().map(|&p| lp.labels[p].as_str()).collect();
        let total: i64 = o
            .representative
            .iter()
            .map(|&p| b.cells[lp.cell_of[p]].underlying_dim())
            .sum();
        if degree.underlying_dim() != total {
            return Err(Error::MalformedBasis(format!(
                "degree {} of N({}) has the wrong dimension",
                degree,
                labels.join(",")
            )));
        }
        cells.push(Cell::new(format!("N({})", labels.join(",")), degree));
    }
    Basis::new(g, b.coeff, cells)
}

/// The dual basis: degrees negated, labels toggled between `x` and `x*`.
pub fn dual_basis(b: &Basis) -> Basis {
    let cells = b
        .cells
        .iter()
        .map(|c| {
            let label = match c.label.strip_suffix('*') {
                Some(base) => base.to_string(),
                None => format!("{}*", c.label),
            };
            Cell::new(label, c.degree.negate())
        })
        .collect();
    Basis {
        group: b.group,
        coeff: b.coeff,
        cells,
    }
}

fn require_pure(i: &Basis) -> Result<()> {
    for c in &i.cells {
        match c.degree.as_regular() {
            Some(r) if r.eps == 0 => {}
            _ => {
                return Err(Error::Degree(format!(
                    "cell {} has degree {}, not of the form kρ_H",
                    c.label, c.degree
                )))
            }
        }
    }
    Ok(())
}

/// The K-Mackey functor `H_{kρ_K − ε}(E; M)` of a homologically pure `E`.
///
/// For `ε = 0` it is `M_T` for `T` the restriction to `K` of the cells of
/// underlying dimension `k|K|`; for `ε = 1` each cell of dimension `k|K|−1`
/// contributes `M_{K/e}` once per double coset `KgJ` with `K ∩ J = e`.
pub fn homology_of_pure(i: &Basis, k: Subgroup, kk: i64, eps: u8, m: &MackeyTable) -> Result<MackeyTable> {
    require_pure(i)?;
    let g = i.group;
    if m.group() != g {
        return Err(Error::GroupMismatch(format!("{}-table for a {g}-basis", m.group())));
    }
    if !g.contains(k) {
        return Err(Error::NotSubgroup(k.to_string(), g.to_string()));
    }
    let local = m.restrict_to(k);
    let kg = g.as_group(k);
    let n = kk * k.order() as i64;
    let t = match eps {
        0 => {
            let mut t = GSet::empty(kg);
            for c in i.cells.iter().filter(|c| c.underlying_dim() == n) {
                t = t.union(&restrict_gset(g, k, &GSet::orbit(g, c.stabilizer()))?)?;
            }
            t
        }
        1 => {
            let count: u64 = i
                .cells
                .iter()
                .filter(|c| c.underlying_dim() == n - 1)
                .filter(|c| k.order().min(c.stabilizer().order()) == 1)
                .map(|c| g.order() / lcm(k.order(), c.stabilizer().order()))
                .sum();
            GSet::from_orbits(kg, [(kg.trivial(), count)])
        }
        _ => return Err(Error::Degree(format!("eps must be 0 or 1, got {eps}"))),
    };
    Ok(local
        .eval_at_gset(&t)?
        .with_name(format!("H_{{{}}}", RepDegree::regular(k, kk, eps).pretty())))
}

/// A pair of cells in adjacent dimensions whose orbit product has a free
/// orbit, if any.
pub fn isotropy_witness(i: &Basis) -> Option<(String, String)> {
    for x in &i.cells {
        for y in &i.cells {
            if y.underlying_dim() == x.underlying_dim() - 1
                && orbit_product(i.group, x.stabilizer(), y.stabilizer()).has_free_orbit()
            {
                return Some((x.label.clone(), y.label.clone()));
            }
        }
    }
    None
}

pub fn generalized_isotropic(i: &Basis) -> bool {
    isotropy_witness(i).is_none()
}

/// A cell surviving geometric fixed points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedCell {
    pub label: String,
    pub degree: i64,
    /// The cell came from a degree `kρ − 1`.
    pub odd: bool,
}

/// Geometric fixed points: cells with proper stabilizer vanish, a top
/// cell `S^V` becomes a cell in dimension `dim V^G`.
pub fn geometric_fixed_basis(b: &Basis) -> Vec<FixedCell> {
    let top = b.group.full();
    b.cells
        .iter()
        .filter(|c| c.stabilizer() == top)
        .map(|c| FixedCell {
            label: c.label.clone(),
            degree: c.degree.fixed_dim(),
            odd: c.degree.as_regular().is_some_and(|r| r.eps == 1),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::AbGroup;

    fn c2() -> CyclicGroup {
        CyclicGroup::c2()
    }

    fn top(label: &str, k: i64) -> Cell {
        Cell::new(label, RepDegree::regular(c2().full(), k, 0))
    }

    fn free(label: &str, n: i64) -> Cell {
        Cell::new(label, RepDegree::integer(n))
    }

    fn basis(cells: Vec<Cell>) -> Basis {
        Basis::new(c2(), CoeffRing::Z, cells).unwrap()
    }

    #[test]
    fn box_examples() {
        let b = box_product(&basis(vec![top("x", 1)]), &basis(vec![top("y", 1)])).unwrap();
        assert_eq!(b.cells(), &[Cell::new("x|y", RepDegree::regular(c2().full(), 2, 0))]);
        let b = box_product(&basis(vec![free("x", 2)]), &basis(vec![free("y", 3)])).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.cells().iter().all(|c| c.degree == RepDegree::integer(5)));
        let b = box_product(&basis(vec![top("x", 1)]), &basis(vec![free("y", 1)])).unwrap();
        assert_eq!(b.cells(), &[Cell::new("x|y", RepDegree::integer(3))]);
    }

    #[test]
    fn norm_examples() {
        let e = CyclicGroup::two_power(0);
        let one = Basis::new(e, CoeffRing::F2, vec![free("x", 3)]).unwrap();
        let n = norm_basis(e.full(), c2(), &one).unwrap();
        assert_eq!(n.cells(), &[Cell::new("N(x,x)", RepDegree::regular(c2().full(), 3, 0))]);
        let two = Basis::new(e, CoeffRing::F2, vec![free("x", 1), free("y", 2)]).unwrap();
        let n = norm_basis(e.full(), c2(), &two).unwrap();
        let summary: Vec<String> = n.cells().iter().map(|c| c.to_string()).collect();
        assert_eq!(
            summary,
            ["N(x,x) C2 1*rho[C2]", "N(x,y) e 3", "N(y,y) C2 2*rho[C2]"]
        );
    }

    #[test]
    fn dual_examples() {
        let b = basis(vec![top("x", 2), free("y", 3)]);
        let d = dual_basis(&b);
        assert_eq!(d.cells()[0], Cell::new("x*", RepDegree::regular(c2().full(), -2, 0)));
        assert_eq!(d.cells()[1], Cell::new("y*", RepDegree::integer(-3)));
        assert_eq!(dual_basis(&d), b);
    }

    #[test]
    fn homology_examples() {
        let g = c2();
        let m = MackeyTable::constant_f2(g);
        let b = basis(vec![free("x", 1)]);
        let h = homology_of_pure(&b, g.full(), 1, 1, &m).unwrap();
        assert_eq!(h.level(g.full()), &AbGroup::cyclic(2));
        let bu = basis(vec![top("a1", 1), top("a2", 2), top("a1^2", 2)]);
        let z = MackeyTable::constant_z(g);
        let h = homology_of_pure(&bu, g.full(), 1, 0, &z).unwrap();
        assert_eq!(h.level(g.full()), &AbGroup::free(1));
        for k in -2..4 {
            let h = homology_of_pure(&bu, g.full(), k, 1, &z).unwrap();
            assert!(h.level(g.full()).is_zero());
        }
        let bad = basis(vec![Cell::new("y", RepDegree::c2(2, 1))]);
        assert!(homology_of_pure(&bad, g.full(), 1, 0, &z).is_err());
    }

    #[test]
    fn isotropy_examples() {
        assert!(generalized_isotropic(&basis(vec![top("a1", 1), top("a2", 2)])));
        assert!(!generalized_isotropic(&basis(vec![top("x", 1), free("y", 1)])));
        assert!(generalized_isotropic(&basis(vec![])));
    }

    #[test]
    fn geometric_fixed_examples() {
        let b = basis(vec![top("a1", 1), top("a1a2", 3), free("y", 4)]);
        let phi = geometric_fixed_basis(&b);
        assert_eq!(phi.iter().map(|c| c.degree).collect::<Vec<_>>(), [1, 3]);
        assert!(geometric_fixed_basis(&basis(vec![free("y", 4)])).is_empty());
        let odd = basis(vec![Cell::new("z", RepDegree::regular(c2().full(), 3, 1))]);
        assert_eq!(
            geometric_fixed_basis(&odd),
            [FixedCell {
                label: "z".into(),
                degree: 2,
                odd: true
            }]
        );
    }

    #[test]
    fn restriction_of_bases() {
        let b = basis(vec![top("x", 1), free("y", 3)]);
        let r = restrict_basis(&b, c2().trivial()).unwrap();
        assert_eq!(r.underlying_ranks(), BTreeMap::from([(2, 1), (3, 2)]));
    }
}
