//! The two-sided Koszul complex `X ⊗ Λ(y_g) ⊗ Y` computing `Tor^A(X, Y)`
//! for a polynomial algebra `A` on even generators.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::coefficients::CoeffRing;
use crate::error::{Error, Result};
use crate::grading::RepDegree;
use crate::linalg::{homology, AbGroup, Matrix};

use super::{GradedPolyAlgebra, Module, PageKey, TorEntry};

/// A basis element `x ⊗ y_S ⊗ y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Chain {
    left: usize,
    subset: u64,
    right: usize,
}

/// One internal degree of the complex, all filtrations.
struct Slice {
    degree: RepDegree,
    by_length: BTreeMap<usize, Vec<Chain>>,
}

pub(crate) struct Complex<'a> {
    algebra: &'a GradedPolyAlgebra,
    x: &'a Module,
    y: &'a Module,
}

pub(crate) fn check_module(a: &GradedPolyAlgebra, m: &Module, side: &str) -> Result<()> {
    if m.action.len() != a.generators.len() {
        return Err(Error::Degree(format!("{side} module: one action table per generator expected")));
    }
    for (g, table) in m.action.iter().enumerate() {
        if table.len() != m.basis.len() {
            return Err(Error::Degree(format!("{side} module: action of {} has the wrong size", a.generators[g].0)));
        }
        for (b, image) in table.iter().enumerate() {
            let target = m.basis[b].1.add(&a.generators[g].1)?;
            for &(_, t) in image {
                if m.basis.get(t).map(|x| &x.1) != Some(&target) {
                    return Err(Error::Degree(format!(
                        "{side} module: {}·{} is not in degree {}",
                        a.generators[g].0,
                        m.basis[b].0,
                        target.pretty()
                    )));
                }
            }
        }
    }
    Ok(())
}

impl<'a> Complex<'a> {
    pub(crate) fn new(algebra: &'a GradedPolyAlgebra, x: &'a Module, y: &'a Module) -> Result<Self> {
        for g in &algebra.generators {
            if g.1.underlying_dim() % 2 != 0 {
                return Err(Error::Degree(format!(
                    "generator {} has odd underlying degree; only even generators are supported",
                    g.0
                )));
            }
        }
        if algebra.generators.len() > 63 {
            return Err(Error::Guard("more than 63 generators".into()));
        }
        check_module(algebra, x, "left")?;
        check_module(algebra, y, "right")?;
        Ok(Complex { algebra, x, y })
    }

    fn slices(&self, truncation: i64) -> Vec<Slice> {
        let gens = &self.algebra.generators;
        let mut subsets: Vec<(u64, RepDegree)> = vec![(0, RepDegree::zero(self.algebra.stabilizer))];
        for (i, g) in gens.iter().enumerate() {
            let extra: Vec<(u64, RepDegree)> = subsets
                .iter()
                .filter_map(|(s, d)| {
                    let nd = d.add(&g.1).ok()?;
                    (nd.underlying_dim().abs() <= truncation).then_some((s | (1 << i), nd))
                })
                .collect();
            subsets.extend(extra);
        }
        let mut map: BTreeMap<(i64, RepDegree), BTreeMap<usize, Vec<Chain>>> = BTreeMap::new();
        for (l, (_, dl)) in self.x.basis.iter().enumerate() {
            for (subset, ds) in &subsets {
                let partial = match dl.add(ds) {
                    Ok(d) if d.underlying_dim().abs() <= truncation => d,
                    _ => continue,
                };
                for (r, (_, dr)) in self.y.basis.iter().enumerate() {
                    let Ok(total) = partial.add(dr) else { continue };
                    if total.underlying_dim().abs() > truncation {
                        continue;
                    }
                    map.entry((total.underlying_dim().abs(), total))
                        .or_default()
                        .entry(subset.count_ones() as usize)
                        .or_default()
                        .push(Chain {
                            left: l,
                            subset: *subset,
                            right: r,
                        });
                }
            }
        }
        map.into_iter()
            .map(|((_, degree), by_length)| Slice { degree, by_length })
            .collect()
    }

    fn differential(&self, source: &[Chain], target: &[Chain]) -> Matrix {
        let index: HashMap<Chain, usize> = target.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut d = Matrix::zeros(target.len(), source.len());
        for (col, c) in source.iter().enumerate() {
            let mut position = 0;
            for g in 0..self.algebra.generators.len() {
                if c.subset & (1 << g) == 0 {
                    continue;
                }
                let sign = if position % 2 == 0 { 1 } else { -1 };
                position += 1;
                let rest = c.subset & !(1 << g);
                for &(coef, l) in &self.x.action[g][c.left] {
                    let key = Chain {
                        left: l,
                        subset: rest,
                        right: c.right,
                    };
                    if let Some(&row) = index.get(&key) {
                        d.add_to(row, col, sign * coef);
                    }
                }
                for &(coef, r) in &self.y.action[g][c.right] {
                    let key = Chain {
                        left: c.left,
                        subset: rest,
                        right: r,
                    };
                    if let Some(&row) = index.get(&key) {
                        d.add_to(row, col, -sign * coef);
                    }
                }
            }
        }
        d
    }

    fn label(&self, chain: &Chain) -> String {
        let mut out = String::new();
        let left = &self.x.basis[chain.left].0;
        if left != "1" {
            out.push_str(left);
        }
        for (g, (name, _)) in self.algebra.generators.iter().enumerate() {
            if chain.subset & (1 << g) != 0 {
                out.push_str(&format!("[{name}]"));
            }
        }
        let right = &self.y.basis[chain.right].0;
        if right != "1" {
            if !out.is_empty() {
                out.push('.');
            }
            out.push_str(right);
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    fn cycle_label(&self, chains: &[Chain], v: &[i64], coeff: CoeffRing) -> String {
        let mut terms = Vec::new();
        for (c, &x) in chains.iter().zip(v) {
            let x = coeff.reduce(x);
            if x != 0 {
                terms.push((x, self.label(c)));
            }
        }
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut out = String::new();
        for (i, (x, l)) in terms.iter().enumerate() {
            let body = if x.abs() == 1 { l.clone() } else { format!("{}*{l}", x.abs()) };
            match (i, *x < 0) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }

    /// Homology in every bidegree with `|underlying dim| ≤ truncation`,
    /// together with the Euler characteristic of the chains.
    pub(crate) fn homology(&self, truncation: i64) -> Result<Vec<(PageKey, TorEntry, usize)>> {
        let coeff = self.algebra.coeff;
        let slices = self.slices(truncation);
        let results: Vec<Result<Vec<(PageKey, TorEntry, usize)>>> = slices
            .par_iter()
            .map(|slice| {
                let mut out = Vec::new();
                let empty = Vec::new();
                for (&s, chains) in &slice.by_length {
                    let below = if s == 0 { &empty } else { slice.by_length.get(&(s - 1)).unwrap_or(&empty) };
                    let above = slice.by_length.get(&(s + 1)).unwrap_or(&empty);
                    let d_out = self.differential(chains, below);
                    let d_in = self.differential(above, chains);
                    let h = homology(chains.len(), &d_out, &d_in, coeff.modulus())?;
                    if h.group.is_zero() {
                        out.push((PageKey::new(s, slice.degree.clone()), TorEntry::default(), chains.len()));
                        continue;
                    }
                    let mut labelled: Vec<(u64, String)> = h
                        .group
                        .factors
                        .iter()
                        .zip(&h.generators)
                        .map(|(&f, v)| (f, self.cycle_label(chains, v, coeff)))
                        .collect();
                    labelled.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
                    let entry = TorEntry {
                        group: AbGroup {
                            factors: labelled.iter().map(|x| x.0).collect(),
                        },
                        labels: labelled.into_iter().map(|x| x.1).collect(),
                    };
                    out.push((PageKey::new(s, slice.degree.clone()), entry, chains.len()));
                }
                Ok(out)
            })
            .collect();
        let mut all = Vec::new();
        for r in results {
            all.extend(r?);
        }
        Ok(all)
    }
}
