//! Brute-force reference computations used by the self-checks and tests.
//!
//! Everything here works on explicit points, tuples and matrices over 𝔽₂
//! and shares no code with the structured computations it checks.

use std::collections::{BTreeMap, HashMap};

use crate::coefficients::MackeyTable;
use crate::freebasis::Basis;
use crate::grading::RepDegree;
use crate::groups::{CyclicGroup, GSet, Subgroup};
use crate::linalg::AbGroup;

/// A finite set with an explicit action of the generator of `C_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitSet {
    pub order: u64,
    pub act: Vec<usize>,
}

impl ExplicitSet {
    /// `⊔ m × C_n/C_d`, each orbit as `ℤ/(n/d)` with `+1`.
    pub fn from_orbits(order: u64, orbits: &[(u64, u64)]) -> Self {
        let mut act = Vec::new();
        for &(stab, mult) in orbits {
            let size = (order / stab) as usize;
            for _ in 0..mult {
                let base = act.len();
                act.extend((0..size).map(|i| base + (i + 1) % size));
            }
        }
        ExplicitSet { order, act }
    }

    pub fn len(&self) -> usize {
        self.act.len()
    }

    pub fn is_empty(&self) -> bool {
        self.act.is_empty()
    }

    fn power(&self, x: usize, k: u64) -> usize {
        (0..k).fold(x, |y, _| self.act[y])
    }

    /// Orbits as `stabilizer order → count`, by walking each orbit.
    pub fn orbit_counts(&self) -> BTreeMap<u64, u64> {
        let mut seen = vec![false; self.len()];
        let mut out = BTreeMap::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut size = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                size += 1;
                x = self.act[x];
            }
            *out.entry(self.order / size).or_insert(0) += 1;
        }
        out
    }

    pub fn product(&self, other: &ExplicitSet) -> ExplicitSet {
        let n = other.len();
        let mut act = vec![0; self.len() * n];
        for x in 0..self.len() {
            for y in 0..n {
                act[x * n + y] = self.act[x] * n + other.act[y];
            }
        }
        ExplicitSet { order: self.order, act }
    }

    /// The same points under the subgroup of order `k`.
    pub fn restrict(&self, k: u64) -> ExplicitSet {
        let step = self.order / k;
        ExplicitSet {
            order: k,
            act: (0..self.len()).map(|x| self.power(x, step)).collect(),
        }
    }

    /// All maps `f: ℤ/n → T` with `f(x + n/|H|) = h·f(x)`, acted on by
    /// translation; `self` is the H-set.
    pub fn coinduce(&self, g_order: u64) -> ExplicitSet {
        let h = self.order;
        let shift = (g_order / h) as usize;
        let n = g_order as usize;
        let t = self.len();
        let mut maps: Vec<Vec<usize>> = Vec::new();
        let mut f = vec![0usize; n];
        let total = t.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            for slot in f.iter_mut() {
                *slot = c % t;
                c /= t;
            }
            if (0..n).all(|x| f[(x + shift) % n] == self.act[f[x]]) {
                maps.push(f.clone());
            }
        }
        let index: HashMap<Vec<usize>, usize> = maps.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let act = maps
            .iter()
            .map(|m| {
                let moved: Vec<usize> = (0..n).map(|x| m[(x + 1) % n]).collect();
                index[&moved]
            })
            .collect();
        ExplicitSet { order: g_order, act }
    }
}

pub fn gset_counts(t: &GSet) -> BTreeMap<u64, u64> {
    t.orbits().map(|(h, m)| (h.order(), m)).filter(|&(_, m)| m > 0).collect()
}

pub fn explicit(t: &GSet) -> ExplicitSet {
    let orbits: Vec<(u64, u64)> = t.orbits().map(|(h, m)| (h.order(), m)).collect();
    ExplicitSet::from_orbits(t.group().order(), &orbits)
}

/// Rank over 𝔽₂ of the rows given as bit vectors.
pub fn rank_f2(rows: &[Vec<bool>]) -> usize {
    let mut rows: Vec<Vec<bool>> = rows.to_vec();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] {
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn transpose(m: &[Vec<bool>], cols: usize) -> Vec<Vec<bool>> {
    (0..cols).map(|c| m.iter().map(|r| r[c]).collect()).collect()
}

/// Reduced cellular complex of `S^{nσ}`: one fixed 0-cell and free cells
/// `e_1 … e_n`, with `d e_i = e_{i−1} + (−1)^{i+1} γ e_{i−1}` and `d e_1 = pt`.
/// Returns, per level (C₂ then e), the 𝔽₂ differentials `d_i: C_i → C_{i−1}`
/// for the orbit chains and the underlying chains. On the orbit chains the
/// free cell `e_1` meets the fixed point through the transfer (`2 = 0`) for
/// homology and through the restriction (`1`) for cohomology.
fn sign_sphere(n: usize, cochains: bool) -> [Vec<Vec<Vec<bool>>>; 2] {
    let mut orbit = Vec::new();
    let mut under = Vec::new();
    for i in 1..=n {
        let s = if i % 2 == 0 { -1i64 } else { 1 };
        if i == 1 {
            orbit.push(vec![vec![cochains]]);
            under.push(vec![vec![true, true]]);
        } else {
            // 1 + s·γ on the orbit chains is 1 + s
            orbit.push(vec![vec![(1 + s) % 2 != 0]]);
            under.push(vec![vec![true, s % 2 != 0], vec![s % 2 != 0, true]]);
        }
    }
    [orbit, under]
}

fn chain_dims(n: usize, level: usize) -> Vec<usize> {
    (0..=n).map(|i| if i == 0 || level == 0 { 1 } else { 2 }).collect()
}

fn homology_dims(dims: &[usize], d: &[Vec<Vec<bool>>]) -> Vec<usize> {
    let rank = |i: usize| if i == 0 || i > d.len() { 0 } else { rank_f2(&d[i - 1]) };
    (0..dims.len()).map(|i| dims[i] - rank(i) - rank(i + 1)).collect()
}

fn cohomology_dims(dims: &[usize], d: &[Vec<Vec<bool>>]) -> Vec<usize> {
    let dual: Vec<Vec<Vec<bool>>> = d.iter().enumerate().map(|(i, m)| transpose(m, dims[i])).collect();
    let rank = |i: usize| if i == 0 || i > dual.len() { 0 } else { rank_f2(&dual[i - 1]) };
    (0..dims.len()).map(|i| dims[i] - rank(i) - rank(i + 1)).collect()
}

/// `dim H_{a+bσ}(pt; 𝔽₂)` at the levels C₂ and e: `H̃_a(S^{nσ})` for
/// `b = −n ≤ 0` and `H̃^{−a}(S^{nσ})` for `b = n > 0`.
pub fn point_dims_dual(a: i64, b: i64) -> [usize; 2] {
    let n = b.unsigned_abs() as usize;
    let d = sign_sphere(n, b > 0);
    let mut out = [0; 2];
    for level in 0..2 {
        let dims = chain_dims(n, level);
        let values = if b <= 0 {
            homology_dims(&dims, &d[level])
        } else {
            cohomology_dims(&dims, &d[level])
        };
        let k = if b <= 0 { a } else { -a };
        out[level] = if (0..=n as i64).contains(&k) { values[k as usize] } else { 0 };
    }
    out
}

/// `binom(n, k) mod 2` from Pascal's triangle.
pub fn binom_mod2(n: i64, k: i64) -> u8 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let mut row = vec![1u8];
    for _ in 0..n {
        let mut next = vec![1u8; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] ^ row[i];
        }
        row = next;
    }
    row[k as usize]
}

/// Ranks of `Tor^A(𝔽₂, 𝔽₂)` for `A = 𝔽₂[x_i]`, `deg x_i = degrees[i]`,
/// from the normalized bar complex: `(s, degree) → rank`.
pub fn bar_tor_ranks(degrees: &[i64], truncation: i64) -> BTreeMap<(usize, i64), usize> {
    let mut monos: Vec<(Vec<u32>, i64)> = vec![(vec![0; degrees.len()], 0)];
    for (i, &d) in degrees.iter().enumerate() {
        let mut extra = Vec::new();
        for (e, deg) in &monos {
            let mut e = e.clone();
            let mut deg = *deg;
            while deg + d <= truncation {
                e[i] += 1;
                deg += d;
                extra.push((e.clone(), deg));
            }
        }
        monos.extend(extra);
    }
    let positive: Vec<(Vec<u32>, i64)> = monos.into_iter().filter(|(_, d)| *d > 0).collect();
    // bar words grouped by (length, degree)
    let mut words: BTreeMap<(usize, i64), Vec<Vec<usize>>> = BTreeMap::new();
    words.insert((0, 0), vec![vec![]]);
    let mut frontier: Vec<(Vec<usize>, i64)> = vec![(vec![], 0)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, deg) in &frontier {
            for (j, (_, d)) in positive.iter().enumerate() {
                if deg + d <= truncation {
                    let mut w = w.clone();
                    w.push(j);
                    words.entry((w.len(), deg + d)).or_default().push(w.clone());
                    next.push((w, deg + d));
                }
            }
        }
        frontier = next;
    }
    let lookup: HashMap<Vec<u32>, usize> = positive.iter().enumerate().map(|(i, (e, _))| (e.clone(), i)).collect();
    let boundary = |src: &[Vec<usize>], tgt: &[Vec<usize>]| -> Vec<Vec<bool>> {
        let index: HashMap<&Vec<usize>, usize> = tgt.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut rows = vec![vec![false; tgt.len()]; src.len()];
        for (r, w) in src.iter().enumerate() {
            for i in 0..w.len().saturating_sub(1) {
                let prod: Vec<u32> = positive[w[i]].0.iter().zip(&positive[w[i + 1]].0).map(|(a, b)| a + b).collect();
                let mut v = w[..i].to_vec();
                v.push(lookup[&prod]);
                v.extend_from_slice(&w[i + 2..]);
                let c = index[&v];
                rows[r][c] ^= true;
            }
        }
        rows
    };
    let mut out = BTreeMap::new();
    for (&(s, deg), chains) in &words {
        let empty = Vec::new();
        let below = if s > 0 { words.get(&(s - 1, deg)).unwrap_or(&empty) } else { &empty };
        let above = words.get(&(s + 1, deg)).unwrap_or(&empty);
        let d_out = if below.is_empty() { 0 } else { rank_f2(&boundary(chains, below)) };
        let d_in = if above.is_empty() { 0 } else { rank_f2(&boundary(above, chains)) };
        let h = chains.len() - d_out - d_in;
        if h > 0 {
            out.insert((s, deg), h);
        }
    }
    out
}

/// Value of `M_{T}` at level `L` for the K-set `T = K/J`, by enumerating
/// the orbits of `K/J × K/L`.
fn eval_orbit(m: &MackeyTable, k: u64, j: u64, l: u64) -> Vec<u64> {
    let x = ExplicitSet::from_orbits(k, &[(j, 1)]);
    let y = ExplicitSet::from_orbits(k, &[(l, 1)]);
    let mut factors = Vec::new();
    for (stab, count) in x.product(&y).orbit_counts() {
        for _ in 0..count {
            factors.extend(m.level(Subgroup::of_order(stab)).factors.iter().copied());
        }
    }
    factors
}

/// Double cosets `K\G/J` of the cyclic group of order `g`, as a list of
/// `|K ∩ J|` values, found by enumerating elements.
fn double_cosets(g: u64, k: u64, j: u64) -> Vec<u64> {
    let mut seen = vec![false; g as usize];
    let mut out = Vec::new();
    for x in 0..g {
        if seen[x as usize] {
            continue;
        }
        for a in 0..k {
            for b in 0..j {
                let y = (x + a * (g / k) + b * (g / j)) % g;
                seen[y as usize] = true;
            }
        }
        out.push(k.min(j));
    }
    out
}

/// The levels of `H_{kρ_K − ε}(E; M)` for a homologically pure basis,
/// expanding each cell into its double cosets and evaluating `M` orbit
/// by orbit. Returns `level order → sorted invariants`.
pub fn pure_homology_levels(basis: &Basis, k: Subgroup, kk: i64, eps: u8, m: &MackeyTable) -> BTreeMap<u64, (usize, Vec<u64>)> {
    let g = basis.group().order();
    let n = kk * k.order() as i64 - eps as i64;
    let mut levels: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let subs: Vec<u64> = (0..=k.order().trailing_zeros()).map(|e| 1u64 << e).collect();
    for &l in &subs {
        levels.insert(l, Vec::new());
    }
    for c in basis.cells().iter().filter(|c| c.underlying_dim() == n) {
        let j = c.stabilizer().order();
        for meet in double_cosets(g, k.order(), j) {
            if eps == 1 && meet != 1 {
                continue;
            }
            let stab = if eps == 1 { 1 } else { meet };
            for &l in &subs {
                levels.get_mut(&l).unwrap().extend(eval_orbit(m, k.order(), stab, l));
            }
        }
    }
    levels
        .into_iter()
        .map(|(l, f)| (l, AbGroup { factors: f }.invariants()))
        .collect()
}

/// One orbit of `Map^{C₂}(G, cells)` with its stabilizer order, the
/// fixed-point dimensions of its fiber under every subgroup of the
/// stabilizer, and its underlying dimension.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoinducedOrbit {
    pub stabilizer: u64,
    pub marks: Vec<i64>,
    pub underlying: i64,
}

/// Marks of a degree: `dim V^L` for every `L ≤ S`, smallest first.
pub fn marks(d: &RepDegree) -> Vec<i64> {
    let s = d.stabilizer().order();
    (0..=s.trailing_zeros())
        .map(|e| d.restrict(Subgroup::of_order(1 << e)).expect("subgroup").fixed_dim())
        .collect()
}

/// Coinduction of a C₂-basis to `C_{g}` by enumerating equivariant maps
/// on points of the cells, cut at underlying dimension `truncation`.
pub fn coinduce_basis(b: &Basis, g: CyclicGroup, truncation: i64) -> Vec<CoinducedOrbit> {
    // points: (cell, index) with the generator of C₂ cycling the index
    let mut points: Vec<(usize, usize)> = Vec::new();
    let mut act = Vec::new();
    for (i, c) in b.cells().iter().enumerate() {
        let size = 2 / c.stabilizer().order() as usize;
        let base = points.len();
        for p in 0..size {
            points.push((i, p));
            act.push(base + (p + 1) % size);
        }
    }
    let t = ExplicitSet { order: 2, act };
    let n = g.order() as usize;
    let maps = t.coinduce(g.order());
    let mut out = Vec::new();
    let mut seen = vec![false; maps.len()];
    // recover the map list in the same order as `coinduce`
    let mut all: Vec<Vec<usize>> = Vec::new();
    let total = t.len().pow(n as u32);
    let mut f = vec![0usize; n];
    for code in 0..total {
        let mut c = code;
        for slot in f.iter_mut() {
            *slot = c % t.len();
            c /= t.len();
        }
        if (0..n).all(|x| f[(x + n / 2) % n] == t.act[f[x]]) {
            all.push(f.clone());
        }
    }
    for start in 0..maps.len() {
        if seen[start] {
            continue;
        }
        let mut size = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            size += 1;
            x = maps.act[x];
        }
        let f = &all[start];
        let stab = g.order() / size as u64;
        let cosets = n / 2;
        let underlying: i64 = (0..cosets).map(|x| b.cells()[points[f[x]].0].underlying_dim()).sum();
        if underlying > truncation {
            continue;
        }
        // L ≤ S acts on cosets by translation; a point in the orbit of
        // coset x contributes dim V^{L∩C₂} of its cell
        let mut mk = Vec::new();
        for e in 0..=stab.trailing_zeros() {
            let l = 1u64 << e;
            let step = n / l as usize;
            let meet = Subgroup::of_order(l.min(2));
            let mut visited = vec![false; cosets];
            let mut dim = 0;
            for x in 0..cosets {
                if visited[x] {
                    continue;
                }
                let mut y = x;
                while !visited[y % cosets] {
                    visited[y % cosets] = true;
                    y += step;
                }
                let cell = &b.cells()[points[f[x]].0];
                dim += if meet.is_subgroup_of(cell.stabilizer()) {
                    cell.degree.restrict(meet).expect("subgroup").fixed_dim()
                } else {
                    cell.degree.fixed_dim()
                };
            }
            mk.push(dim);
        }
        out.push(CoinducedOrbit {
            stabilizer: stab,
            marks: mk,
            underlying,
        });
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal() {
        assert_eq!(binom_mod2(4, 2), 0);
        assert_eq!(binom_mod2(5, 1), 1);
        assert_eq!(binom_mod2(2, 3), 0);
    }

    #[test]
    fn explicit_counts() {
        let t = ExplicitSet::from_orbits(4, &[(2, 1), (1, 2)]);
        assert_eq!(t.len(), 10);
        assert_eq!(t.orbit_counts(), BTreeMap::from([(1, 2), (2, 1)]));
        assert_eq!(t.restrict(2).orbit_counts(), BTreeMap::from([(1, 4), (2, 2)]));
    }

    #[test]
    fn point_dims() {
        assert_eq!(point_dims_dual(0, -1), [1, 0]);
        assert_eq!(point_dims_dual(1, -1), [1, 1]);
        assert_eq!(point_dims_dual(0, 0), [1, 1]);
        assert_eq!(point_dims_dual(-2, 2), [1, 1]);
        assert_eq!(point_dims_dual(-1, 1), [0, 1]);
        assert_eq!(point_dims_dual(0, 1), [0, 0]);
    }

    #[test]
    fn bar_polynomial_one() {
        let r = bar_tor_ranks(&[2], 8);
        assert_eq!(r, BTreeMap::from([((0, 0), 1), ((1, 2), 1)]));
    }
}
