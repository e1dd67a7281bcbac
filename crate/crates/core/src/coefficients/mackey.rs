//! Mackey functors for cyclic p-groups as explicit tables.
//!
//! Level `i` is the value at `G/H_i` where `H_i` has order `p^i`. Maps are
//! integer matrices acting on coordinate column vectors. `weyl[i]` is the
//! covariant action of the chosen generator `t` of G on level `i`.

use std::fmt;

use crate::error::{Error, Result};
use crate::groups::{gcd, subgroups, CyclicGroup, GSet, Subgroup};
use crate::linalg::{AbGroup, Matrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MackeyTable {
    group: CyclicGroup,
    name: String,
    levels: Vec<AbGroup>,
    res: Vec<Matrix>,
    tr: Vec<Matrix>,
    weyl: Vec<Matrix>,
}

/// The first axiom violation found by [`MackeyTable::check_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub lower: Subgroup,
    pub upper: Subgroup,
    pub rule: String,
    pub lhs: Matrix,
    pub rhs: Matrix,
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails for ({}, {}): {:?} != {:?}",
            self.rule, self.lower, self.upper, self.lhs, self.rhs
        )
    }
}

fn level_index(g: CyclicGroup, h: Subgroup) -> usize {
    subgroups(g).iter().position(|&s| s == h).expect("subgroup of the table's group")
}

impl MackeyTable {
    pub fn new(
        group: CyclicGroup,
        name: impl Into<String>,
        levels: Vec<AbGroup>,
        res: Vec<Matrix>,
        tr: Vec<Matrix>,
        weyl: Vec<Matrix>,
    ) -> Result<Self> {
        let n = group.exponent() as usize;
        let bad = |what: String| Err(Error::Model(format!("Mackey table shape: {what}")));
        if levels.len() != n + 1 || weyl.len() != n + 1 || res.len() != n || tr.len() != n {
            return bad("wrong number of levels or maps".into());
        }
        let dims: Vec<usize> = levels.iter().map(|l| l.num_generators()).collect();
        for i in 0..=n {
            if (weyl[i].rows(), weyl[i].cols()) != (dims[i], dims[i]) {
                return bad(format!("Weyl matrix at level {i}"));
            }
        }
        for i in 0..n {
            if (res[i].rows(), res[i].cols()) != (dims[i], dims[i + 1]) {
                return bad(format!("restriction into level {i}"));
            }
            if (tr[i].rows(), tr[i].cols()) != (dims[i + 1], dims[i]) {
                return bad(format!("transfer from level {i}"));
            }
        }
        let mut t = MackeyTable {
            group,
            name: name.into(),
            levels,
            res,
            tr,
            weyl,
        };
        for i in 0..=n {
            t.weyl[i] = t.weyl[i].reduce_rows(&t.levels[i].factors);
        }
        for i in 0..n {
            t.res[i] = t.res[i].reduce_rows(&t.levels[i].factors);
            t.tr[i] = t.tr[i].reduce_rows(&t.levels[i + 1].factors);
        }
        Ok(t)
    }

    /// The constant Mackey functor on ℤ/modulus (`modulus = 0` gives ℤ).
    pub fn constant(group: CyclicGroup, modulus: u64) -> Self {
        let n = group.exponent() as usize;
        let p = group.prime() as i64;
        let one = || Matrix::from_rows(1, 1, &[1]);
        let name = if modulus == 0 {
            "constant Z".to_string()
        } else {
            format!("constant Z/{modulus}")
        };
        MackeyTable::new(
            group,
            name,
            vec![AbGroup::cyclic(modulus); n + 1],
            vec![one(); n],
            vec![Matrix::from_rows(1, 1, &[p]); n],
            vec![one(); n + 1],
        )
        .expect("constant table is well formed")
    }

    pub fn constant_z(group: CyclicGroup) -> Self {
        Self::constant(group, 0)
    }

    pub fn constant_f2(group: CyclicGroup) -> Self {
        Self::constant(group, 2)
    }

    /// The Burnside functor: level `H_i` is free on the orbits `H_i/H_j`, `j ≤ i`.
    pub fn burnside(group: CyclicGroup) -> Self {
        let n = group.exponent() as usize;
        let p = group.prime() as i64;
        let levels = (0..=n).map(|i| AbGroup::free(i + 1)).collect();
        let res = (0..n)
            .map(|i| {
                let mut m = Matrix::zeros(i + 1, i + 2);
                for j in 0..=i {
                    m.set(j, j, p);
                }
                m.set(i, i + 1, 1);
                m
            })
            .collect();
        let tr = (0..n)
            .map(|i| {
                let mut m = Matrix::zeros(i + 2, i + 1);
                for j in 0..=i {
                    m.set(j, j, 1);
                }
                m
            })
            .collect();
        let weyl = (0..=n).map(|i| Matrix::identity(i + 1)).collect();
        MackeyTable::new(group, "Burnside", levels, res, tr, weyl).expect("Burnside table is well formed")
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn level(&self, h: Subgroup) -> &AbGroup {
        &self.levels[level_index(self.group, h)]
    }

    pub fn levels(&self) -> &[AbGroup] {
        &self.levels
    }

    /// Replaces the transfer between two adjacent levels (for negative controls).
    pub fn with_transfer(mut self, lower_level: usize, m: Matrix) -> Result<Self> {
        if lower_level >= self.tr.len()
            || (m.rows(), m.cols()) != (self.tr[lower_level].rows(), self.tr[lower_level].cols())
        {
            return Err(Error::Model("transfer replacement has the wrong shape".into()));
        }
        self.tr[lower_level] = m.reduce_rows(&self.levels[lower_level + 1].factors);
        Ok(self)
    }

    /// Restriction `M(G/H) → M(G/K)` for `K ≤ H`.
    pub fn res(&self, h: Subgroup, k: Subgroup) -> Matrix {
        let (hi, ki) = (level_index(self.group, h), level_index(self.group, k));
        assert!(ki <= hi, "restriction needs K ≤ H");
        let mut m = Matrix::identity(self.levels[hi].num_generators());
        for i in (ki..hi).rev() {
            m = self.res[i].mul(&m).reduce_rows(&self.levels[i].factors);
        }
        m
    }

    /// Transfer `M(G/K) → M(G/H)` for `K ≤ H`.
    pub fn tr(&self, k: Subgroup, h: Subgroup) -> Matrix {
        let (hi, ki) = (level_index(self.group, h), level_index(self.group, k));
        assert!(ki <= hi, "transfer needs K ≤ H");
        let mut m = Matrix::identity(self.levels[ki].num_generators());
        for i in ki..hi {
            m = self.tr[i].mul(&m).reduce_rows(&self.levels[i + 1].factors);
        }
        m
    }

    /// Action of `t^power` on `M(G/L)`.
    pub fn weyl(&self, l: Subgroup, power: u64) -> Matrix {
        let li = level_index(self.group, l);
        let period = self.group.index(l);
        let w = &self.weyl[li];
        let mut m = Matrix::identity(w.rows());
        for _ in 0..power % period {
            m = w.mul(&m).reduce_rows(&self.levels[li].factors);
        }
        m
    }

    fn reduced(&self, l: Subgroup, m: Matrix) -> Matrix {
        m.reduce_rows(&self.level(l).factors)
    }

    /// Checks periodicity and invariance of the Weyl actions, equivariance of
    /// restriction and transfer, and the double coset formula for every
    /// triple `K, J ≤ H`.
    pub fn check_axioms(&self) -> std::result::Result<(), AxiomFailure> {
        let g = self.group;
        let subs = subgroups(g);
        let fail = |lower, upper, rule: &str, lhs: Matrix, rhs: Matrix| AxiomFailure {
            lower,
            upper,
            rule: rule.to_string(),
            lhs,
            rhs,
        };
        for &l in &subs {
            let w = self.weyl(l, 1);
            let period = g.index(l);
            let lhs = self.reduced(l, w.pow(period));
            let id = Matrix::identity(w.rows());
            if lhs != id {
                return Err(fail(l, l, "Weyl periodicity", lhs, id));
            }
        }
        for &h in &subs {
            for &k in subs.iter().filter(|k| k.is_subgroup_of(h)) {
                let r = self.res(h, k);
                let t = self.tr(k, h);
                let lhs = self.reduced(k, r.mul(&self.weyl(h, 1)));
                let rhs = self.reduced(k, self.weyl(k, 1).mul(&r));
                if lhs != rhs {
                    return Err(fail(k, h, "restriction equivariance", lhs, rhs));
                }
                let lhs = self.reduced(h, t.mul(&self.weyl(k, 1)));
                let rhs = self.reduced(h, self.weyl(h, 1).mul(&t));
                if lhs != rhs {
                    return Err(fail(k, h, "transfer equivariance", lhs, rhs));
                }
                let hgen = g.index(h);
                let lhs = self.reduced(k, self.weyl(k, hgen).mul(&r));
                if lhs != r {
                    return Err(fail(k, h, "restriction invariance", lhs, r));
                }
                let lhs = self.reduced(h, t.mul(&self.weyl(k, hgen)));
                if lhs != t {
                    return Err(fail(k, h, "transfer invariance", lhs, t));
                }
            }
        }
        for &h in &subs {
            for &k in subs.iter().filter(|k| k.is_subgroup_of(h)) {
                for &j in subs.iter().filter(|j| j.is_subgroup_of(h)) {
                    let l = k.intersect(j);
                    let lhs = self.reduced(k, self.res(h, k).mul(&self.tr(j, h)));
                    let cosets = h.order() / k.order().max(j.order());
                    let step = g.index(h);
                    let mut rhs = Matrix::zeros(lhs.rows(), lhs.cols());
                    for i in 0..cosets {
                        let term = self
                            .tr(l, k)
                            .mul(&self.weyl(l, step * i))
                            .mul(&self.res(j, l));
                        rhs = rhs.add(&term);
                    }
                    let rhs = self.reduced(k, rhs);
                    if lhs != rhs {
                        return Err(fail(k.intersect(j), h, "double coset formula", lhs, rhs));
                    }
                }
            }
        }
        Ok(())
    }

    /// Restriction to `K`: a Mackey table for the group `K` on levels `L ≤ K`.
    pub fn restrict_to(&self, k: Subgroup) -> MackeyTable {
        let kg = self.group.as_group(k);
        let top = level_index(self.group, k);
        let step = self.group.index(k);
        MackeyTable {
            group: kg,
            name: self.name.clone(),
            levels: self.levels[..=top].to_vec(),
            res: self.res[..top].to_vec(),
            tr: self.tr[..top].to_vec(),
            weyl: (0..=top)
                .map(|i| self.weyl(Subgroup::of_order(self.group.prime().pow(i as u32)), step))
                .collect(),
        }
    }

    /// Levelwise direct sum of tables over the same group.
    pub fn direct_sum(group: CyclicGroup, name: &str, parts: &[MackeyTable]) -> Result<MackeyTable> {
        if parts.iter().any(|p| p.group != group) {
            return Err(Error::GroupMismatch("direct sum of tables over different groups".into()));
        }
        let n = group.exponent() as usize;
        let levels = (0..=n)
            .map(|i| AbGroup::direct_sum(&parts.iter().map(|p| p.levels[i].clone()).collect::<Vec<_>>()))
            .collect();
        let block = |f: &dyn Fn(&MackeyTable) -> Matrix| {
            Matrix::direct_sum(&parts.iter().map(f).collect::<Vec<_>>())
        };
        let res = (0..n).map(|i| block(&|p| p.res[i].clone())).collect();
        let tr = (0..n).map(|i| block(&|p| p.tr[i].clone())).collect();
        let weyl = (0..=n).map(|i| block(&|p| p.weyl[i].clone())).collect();
        MackeyTable::new(group, name, levels, res, tr, weyl)
    }

    /// `M_T(X) = M(T × X)` with its induced restrictions, transfers and Weyl actions.
    pub fn eval_at_gset(&self, t: &GSet) -> Result<MackeyTable> {
        if t.group() != self.group {
            return Err(Error::GroupMismatch(format!(
                "{}-set evaluated in a {}-table",
                t.group(),
                self.group
            )));
        }
        let mut parts = Vec::new();
        for (j, mult) in t.orbits() {
            let single = self.eval_at_orbit(j)?;
            for _ in 0..mult {
                parts.push(single.clone());
            }
        }
        let name = format!("{} at {}", self.name, t);
        if parts.is_empty() {
            let n = self.group.exponent() as usize;
            return MackeyTable::new(
                self.group,
                name,
                vec![AbGroup::zero(); n + 1],
                vec![Matrix::zeros(0, 0); n],
                vec![Matrix::zeros(0, 0); n],
                vec![Matrix::zeros(0, 0); n + 1],
            );
        }
        MackeyTable::direct_sum(self.group, &name, &parts)
    }

    /// `M_{G/J}`. At level `K` the product `G/J × G/K ≅ Z/a × Z/b` has
    /// `gcd(a,b)` orbits with base points `(0, i)`, each isomorphic to
    /// `G/(J∩K)`.
    fn eval_at_orbit(&self, j: Subgroup) -> Result<MackeyTable> {
        let g = self.group;
        let nn = g.order();
        let subs = subgroups(g);
        let a = nn / j.order();
        let summands = |k: Subgroup| gcd(a, nn / k.order());
        let dim = |l: Subgroup| self.level(l).num_generators();
        // smallest g0 ≡ 0 mod a with g0 ≡ target mod b
        let shift = |b: u64, target: u64| -> u64 {
            (0..b)
                .map(|s| s * a)
                .find(|&g0| g0 % b == target % b)
                .expect("compatible congruences")
        };
        let mut levels = Vec::new();
        let mut weyl = Vec::new();
        for &k in &subs {
            let l = j.intersect(k);
            let c = summands(k) as usize;
            levels.push(AbGroup::direct_sum(&vec![self.level(l).clone(); c]));
            let b = nn / k.order();
            let d = dim(l);
            let mut w = Matrix::zeros(c * d, c * d);
            for i in 0..c {
                let y = (i as u64 + 1) % b;
                let target = y % c as u64;
                let g0 = shift(b, (y + b - target) % b);
                place(&mut w, target as usize * d, i * d, &self.weyl(l, g0));
            }
            weyl.push(w);
        }
        let mut res = Vec::new();
        let mut tr = Vec::new();
        for w in subs.windows(2) {
            let (k_lo, k_hi) = (w[0], w[1]);
            let (l_lo, l_hi) = (j.intersect(k_lo), j.intersect(k_hi));
            let (c_lo, c_hi) = (summands(k_lo) as usize, summands(k_hi) as usize);
            let b_hi = nn / k_hi.order();
            let (d_lo, d_hi) = (dim(l_lo), dim(l_hi));
            let mut r = Matrix::zeros(c_lo * d_lo, c_hi * d_hi);
            let mut t = Matrix::zeros(c_hi * d_hi, c_lo * d_lo);
            let period = nn / l_hi.order();
            for i_lo in 0..c_lo {
                let y = i_lo as u64 % b_hi;
                let i_hi = y % c_hi as u64;
                let g0 = shift(b_hi, (y + b_hi - i_hi) % b_hi);
                let back = (period - g0 % period) % period;
                let rb = self.res(l_hi, l_lo).mul(&self.weyl(l_hi, back));
                let tb = self.weyl(l_hi, g0).mul(&self.tr(l_lo, l_hi));
                place(&mut r, i_lo * d_lo, i_hi as usize * d_hi, &rb);
                place(&mut t, i_hi as usize * d_hi, i_lo * d_lo, &tb);
            }
            res.push(r);
            tr.push(t);
        }
        MackeyTable::new(g, format!("{} at {}/{}", self.name, g, j), levels, res, tr, weyl)
    }

    /// Whether every restriction map is injective.
    pub fn restrictions_injective(&self) -> Result<bool> {
        for (i, r) in self.res.iter().enumerate() {
            let src = &self.levels[i + 1];
            let dst = &self.levels[i];
            if !map_injective(r, src, dst)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn place(target: &mut Matrix, r0: usize, c0: usize, block: &Matrix) {
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            target.set(r0 + r, c0 + c, block.get(r, c));
        }
    }
}

/// Injectivity of a homomorphism `f: A → B` of finitely generated abelian
/// groups given in coordinates. With `β = [M | D_B]` and `α` the relations of
/// `A` lifted into `ker β`, the homology `ker β / im α` is `ker f`.
fn map_injective(m: &Matrix, src: &AbGroup, dst: &AbGroup) -> Result<bool> {
    use crate::linalg::homology;
    let n = src.num_generators();
    let nd = dst.num_generators();
    let dst_rel: Vec<usize> = (0..nd).filter(|&i| dst.factors[i] > 0).collect();
    let src_rel: Vec<usize> = (0..n).filter(|&i| src.factors[i] > 0).collect();
    let total = n + dst_rel.len();
    let mut beta = Matrix::zeros(nd, total);
    for r in 0..nd {
        for c in 0..n {
            beta.set(r, c, m.get(r, c));
        }
    }
    for (k, &i) in dst_rel.iter().enumerate() {
        beta.set(i, n + k, dst.factors[i] as i64);
    }
    let mut alpha = Matrix::zeros(total, src_rel.len());
    for (k, &i) in src_rel.iter().enumerate() {
        let d = src.factors[i] as i64;
        alpha.set(i, k, d);
        for (kk, &ii) in dst_rel.iter().enumerate() {
            let f = dst.factors[ii] as i64;
            let v = m.get(ii, i) * d;
            if v % f != 0 {
                return Err(Error::Model("map is not well defined on torsion".into()));
            }
            alpha.set(n + kk, k, -v / f);
        }
    }
    Ok(homology(total, &beta, &alpha, None)?.group.is_zero())
}

impl fmt::Display for MackeyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let subs = subgroups(self.group);
        let parts: Vec<String> = subs
            .iter()
            .rev()
            .map(|h| format!("{}: {}", h, self.level(*h)))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: u32) -> CyclicGroup {
        CyclicGroup::two_power(n)
    }

    #[test]
    fn builtins_satisfy_axioms() {
        for n in 0..=3 {
            let g = c(n);
            MackeyTable::constant_f2(g).check_axioms().unwrap();
            MackeyTable::constant_z(g).check_axioms().unwrap();
            MackeyTable::burnside(g).check_axioms().unwrap();
        }
        let g3 = CyclicGroup::new(3, 2).unwrap();
        MackeyTable::burnside(g3).check_axioms().unwrap();
    }

    #[test]
    fn corrupted_transfer_is_caught() {
        let g = c(1);
        let bad = MackeyTable::constant_z(g)
            .with_transfer(0, Matrix::from_rows(1, 1, &[1]))
            .unwrap();
        let err = bad.check_axioms().unwrap_err();
        assert_eq!((err.lower, err.upper), (g.trivial(), g.full()));
        assert_eq!(err.rule, "double coset formula");
    }

    #[test]
    fn evaluation_examples() {
        let g = c(1);
        let f2 = MackeyTable::constant_f2(g);
        let top = f2.eval_at_gset(&GSet::orbit(g, g.full())).unwrap();
        assert_eq!(top.level(g.full()), &AbGroup::cyclic(2));
        let free = f2.eval_at_gset(&GSet::orbit(g, g.trivial())).unwrap();
        assert_eq!(free.level(g.full()), &AbGroup::cyclic(2));
        assert_eq!(free.level(g.trivial()), &AbGroup { factors: vec![2, 2] });
        free.check_axioms().unwrap();
        let a = MackeyTable::burnside(g).eval_at_gset(&GSet::orbit(g, g.full())).unwrap();
        assert_eq!(a.level(g.full()), &AbGroup::free(2));
    }

    #[test]
    fn evaluations_satisfy_axioms() {
        for n in 1..=3 {
            let g = c(n);
            for m in [MackeyTable::constant_z(g), MackeyTable::constant_f2(g), MackeyTable::burnside(g)] {
                for j in subgroups(g) {
                    let e = m.eval_at_gset(&GSet::orbit(g, j)).unwrap();
                    e.check_axioms().unwrap_or_else(|f| panic!("{} at {j}: {f}", m.name()));
                }
            }
        }
    }

    #[test]
    fn injectivity() {
        let g = c(2);
        assert!(MackeyTable::constant_z(g).restrictions_injective().unwrap());
        assert!(MackeyTable::constant_f2(g).restrictions_injective().unwrap());
        // Burnside restriction kills [G/e] - p[G/G]... only at level e: not injective
        assert!(!MackeyTable::burnside(g).restrictions_injective().unwrap());
        let ze = MackeyTable::constant_z(g).eval_at_gset(&GSet::orbit(g, g.trivial())).unwrap();
        assert!(ze.restrictions_injective().unwrap());
    }
}
