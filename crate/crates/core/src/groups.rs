//! Cyclic p-groups, their subgroups, and finite G-sets.
//!
//! Subgroups of a cyclic group are determined by their order, so a
//! [`Subgroup`] is just that order. A [`GSet`] is a multiset of orbits
//! `G/L` keyed by the stabilizer `L`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest index `[G:H]` accepted by [`coinduce`].
pub const MAX_COINDUCTION_INDEX: u64 = 8;
/// Largest number of tuples enumerated by [`coinduce`].
pub const MAX_COINDUCTION_TUPLES: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicGroup {
    prime: u64,
    exponent: u32,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl CyclicGroup {
    pub fn new(prime: u64, exponent: u32) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::InvalidGroup(format!("{prime} is not prime")));
        }
        if prime.checked_pow(exponent).is_none_or(|o| o > 1 << 20) {
            return Err(Error::InvalidGroup(format!("{prime}^{exponent} is too large")));
        }
        Ok(CyclicGroup { prime, exponent })
    }

    /// The cyclic group of order 2^n.
    pub fn two_power(n: u32) -> Self {
        CyclicGroup::new(2, n).expect("small 2-group")
    }

    pub fn c2() -> Self {
        Self::two_power(1)
    }

    /// Parses names like `C4`, `c8`, `C1`, `e`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "e" {
            return CyclicGroup::new(2, 0);
        }
        let body = t
            .strip_prefix('C')
            .or_else(|| t.strip_prefix('c'))
            .ok_or_else(|| Error::InvalidGroup(format!("expected a name like C4, got `{t}`")))?;
        let order: u64 = body
            .parse()
            .map_err(|_| Error::InvalidGroup(format!("bad group order in `{t}`")))?;
        Self::of_order(order)
    }

    /// The cyclic group of the given prime-power order (order 1 is taken over p=2).
    pub fn of_order(order: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup("order 0".into()));
        }
        if order == 1 {
            return CyclicGroup::new(2, 0);
        }
        let p = (2..=order).find(|d| order.is_multiple_of(*d)).unwrap();
        let mut n = 0;
        let mut m = order;
        while m.is_multiple_of(p) {
            m /= p;
            n += 1;
        }
        if m != 1 {
            return Err(Error::InvalidGroup(format!("{order} is not a prime power")));
        }
        CyclicGroup::new(p, n)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn order(&self) -> u64 {
        self.prime.pow(self.exponent)
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup { order: 1 }
    }

    pub fn full(&self) -> Subgroup {
        Subgroup { order: self.order() }
    }

    pub fn subgroup(&self, order: u64) -> Result<Subgroup> {
        if order == 0 || !self.order().is_multiple_of(order) {
            return Err(Error::NotSubgroup(format!("order {order}"), self.to_string()));
        }
        Ok(Subgroup { order })
    }

    pub fn parse_subgroup(&self, s: &str) -> Result<Subgroup> {
        let t = s.trim();
        let order = if t == "e" {
            1
        } else {
            t.strip_prefix('C')
                .or_else(|| t.strip_prefix('c'))
                .and_then(|b| b.parse().ok())
                .ok_or_else(|| Error::InvalidGroup(format!("bad subgroup name `{t}`")))?
        };
        self.subgroup(order)
    }

    pub fn contains(&self, h: Subgroup) -> bool {
        self.order().is_multiple_of(h.order)
    }

    /// The subgroup `H` viewed as a group in its own right.
    pub fn as_group(&self, h: Subgroup) -> CyclicGroup {
        let mut n = 0;
        let mut m = h.order;
        while m > 1 {
            m /= self.prime;
            n += 1;
        }
        CyclicGroup {
            prime: self.prime,
            exponent: n,
        }
    }

    pub fn index(&self, h: Subgroup) -> u64 {
        self.order() / h.order
    }
}

impl fmt::Display for CyclicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.order())
    }
}

/// A subgroup of a cyclic group, identified by its order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    order: u64,
}

impl Subgroup {
    pub fn of_order(order: u64) -> Subgroup {
        assert!(order > 0, "subgroup order must be positive");
        Subgroup { order }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_subgroup_of(&self, other: Subgroup) -> bool {
        other.order.is_multiple_of(self.order)
    }

    pub fn intersect(&self, other: Subgroup) -> Subgroup {
        Subgroup {
            order: self.order.min(other.order),
        }
    }

    pub fn join(&self, other: Subgroup) -> Subgroup {
        Subgroup {
            order: self.order.max(other.order),
        }
    }

    pub fn index_in(&self, bigger: Subgroup) -> u64 {
        debug_assert!(self.is_subgroup_of(bigger));
        bigger.order / self.order
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            write!(f, "e")
        } else {
            write!(f, "C{}", self.order)
        }
    }
}

pub fn subgroups(g: CyclicGroup) -> Vec<Subgroup> {
    (0..=g.exponent)
        .map(|k| Subgroup {
            order: g.prime.pow(k),
        })
        .collect()
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A finite G-set as a multiset of orbits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GSet {
    group: CyclicGroup,
    orbits: BTreeMap<Subgroup, u64>,
}

impl GSet {
    pub fn empty(group: CyclicGroup) -> Self {
        GSet {
            group,
            orbits: BTreeMap::new(),
        }
    }

    pub fn orbit(group: CyclicGroup, stabilizer: Subgroup) -> Self {
        Self::from_orbits(group, [(stabilizer, 1)])
    }

    pub fn from_orbits(group: CyclicGroup, orbits: impl IntoIterator<Item = (Subgroup, u64)>) -> Self {
        let mut s = GSet::empty(group);
        for (h, m) in orbits {
            s.add_orbits(h, m);
        }
        s
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn add_orbits(&mut self, stabilizer: Subgroup, multiplicity: u64) {
        assert!(self.group.contains(stabilizer), "{stabilizer} is not in {}", self.group);
        if multiplicity > 0 {
            *self.orbits.entry(stabilizer).or_insert(0) += multiplicity;
        }
    }

    pub fn union(&self, other: &GSet) -> Result<GSet> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(format!("{} vs {}", self.group, other.group)));
        }
        let mut s = self.clone();
        for (&h, &m) in &other.orbits {
            s.add_orbits(h, m);
        }
        Ok(s)
    }

    /// Orbits sorted by stabilizer order.
    pub fn orbits(&self) -> impl Iterator<Item = (Subgroup, u64)> + '_ {
        self.orbits.iter().map(|(&h, &m)| (h, m))
    }

    pub fn multiplicity(&self, stabilizer: Subgroup) -> u64 {
        self.orbits.get(&stabilizer).copied().unwrap_or(0)
    }

    pub fn orbit_count(&self) -> u64 {
        self.orbits.values().sum()
    }

    pub fn cardinality(&self) -> u64 {
        self.orbits
            .iter()
            .map(|(h, m)| m * self.group.index(*h))
            .sum()
    }

    pub fn has_free_orbit(&self) -> bool {
        self.multiplicity(self.group.trivial()) > 0
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }
}

impl fmt::Display for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orbits.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self
            .orbits
            .iter()
            .map(|(h, m)| format!("{m} x {}/{h}", self.group))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Decomposition of `G/H × G/K`: `|G|/lcm(|H|,|K|)` copies of `G/(H∩K)`.
pub fn orbit_product(g: CyclicGroup, h: Subgroup, k: Subgroup) -> GSet {
    let copies = g.order() / lcm(h.order, k.order);
    GSet::from_orbits(g, [(h.intersect(k), copies)])
}

/// Product of two G-sets, orbit by orbit.
pub fn product(s: &GSet, t: &GSet) -> Result<GSet> {
    if s.group != t.group {
        return Err(Error::GroupMismatch(format!("{} vs {}", s.group, t.group)));
    }
    let mut out = GSet::empty(s.group);
    for (h, m) in s.orbits() {
        for (k, n) in t.orbits() {
            for (l, c) in orbit_product(s.group, h, k).orbits() {
                out.add_orbits(l, c * m * n);
            }
        }
    }
    Ok(out)
}

/// Restriction of a G-set to `K`, returned as a set over the group `K`.
pub fn restrict_gset(g: CyclicGroup, k: Subgroup, t: &GSet) -> Result<GSet> {
    check_same(g, t)?;
    if !g.contains(k) {
        return Err(Error::NotSubgroup(k.to_string(), g.to_string()));
    }
    let kg = g.as_group(k);
    let mut out = GSet::empty(kg);
    for (j, m) in t.orbits() {
        let copies = g.order() / lcm(j.order, k.order);
        out.add_orbits(j.intersect(k), copies * m);
    }
    Ok(out)
}

/// Induction `G ×_H T` of an H-set: each `H/L` becomes `G/L`.
pub fn induce_gset(g: CyclicGroup, h: Subgroup, t: &GSet) -> Result<GSet> {
    if !g.contains(h) {
        return Err(Error::NotSubgroup(h.to_string(), g.to_string()));
    }
    if t.group.order() != h.order {
        return Err(Error::GroupMismatch(format!("set over {} induced from {h}", t.group)));
    }
    Ok(GSet::from_orbits(g, t.orbits()))
}

fn check_same(g: CyclicGroup, t: &GSet) -> Result<()> {
    if t.group != g {
        Err(Error::GroupMismatch(format!("set over {} used as a {g}-set", t.group)))
    } else {
        Ok(())
    }
}

/// A G-set with explicit points: `gen[i]` is the image of point `i`
/// under the chosen generator of G.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    group: CyclicGroup,
    gen: Vec<usize>,
}

impl PointSet {
    pub fn new(group: CyclicGroup, gen: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; gen.len()];
        for &x in &gen {
            if x >= gen.len() || seen[x] {
                return Err(Error::InvalidGroup("generator action is not a permutation".into()));
            }
            seen[x] = true;
        }
        let s = PointSet { group, gen };
        for i in 0..s.gen.len() {
            if s.power(i, group.order()) != i {
                return Err(Error::InvalidGroup(format!(
                    "generator action does not have order dividing {}",
                    group.order()
                )));
            }
        }
        Ok(s)
    }

    /// Points of each orbit `G/L` numbered consecutively, the generator
    /// acting as `+1` on cosets.
    pub fn from_gset(t: &GSet) -> Self {
        let mut gen = Vec::with_capacity(t.cardinality() as usize);
        for (l, m) in t.orbits() {
            let size = t.group.index(l) as usize;
            for _ in 0..m {
                let base = gen.len();
                gen.extend((0..size).map(|i| base + (i + 1) % size));
            }
        }
        PointSet { group: t.group, gen }
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn len(&self) -> usize {
        self.gen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gen.is_empty()
    }

    pub fn act(&self, point: usize) -> usize {
        self.gen[point]
    }

    pub fn power(&self, mut point: usize, times: u64) -> usize {
        for _ in 0..times {
            point = self.gen[point];
        }
        point
    }

    /// Orbit decomposition by following generator cycles.
    pub fn decompose(&self) -> GSet {
        let mut seen = vec![false; self.gen.len()];
        let mut out = GSet::empty(self.group);
        for start in 0..self.gen.len() {
            if seen[start] {
                continue;
            }
            let mut size = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                size += 1;
                x = self.gen[x];
            }
            out.add_orbits(Subgroup::of_order(self.group.order() / size), 1);
        }
        out
    }
}

/// An orbit of `Map^H(G, T)`, recorded by a representative tuple of values
/// at the coset representatives `t^0, …, t^{m-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapOrbit {
    pub representative: Vec<usize>,
    pub stabilizer: Subgroup,
}

/// The G-set of H-equivariant maps `G → T`, enumerated explicitly.
///
/// A map is determined by its values `(x_0, …, x_{m-1})` on the coset
/// representatives; the generator of G sends it to `(x_1, …, x_{m-1}, h·x_0)`
/// where `h` generates H.
pub fn coinduce_orbits(g: CyclicGroup, h: Subgroup, t: &PointSet) -> Result<Vec<MapOrbit>> {
    if !g.contains(h) {
        return Err(Error::NotSubgroup(h.to_string(), g.to_string()));
    }
    if t.group.order() != h.order {
        return Err(Error::GroupMismatch(format!("set over {} coinduced from {h}", t.group)));
    }
    let m = g.index(h);
    if m > MAX_COINDUCTION_INDEX {
        return Err(Error::Guard(format!(
            "index [G:H] = {m} exceeds {MAX_COINDUCTION_INDEX}"
        )));
    }
    let n = t.len() as u64;
    let total = n.checked_pow(m as u32).unwrap_or(u64::MAX);
    if total > MAX_COINDUCTION_TUPLES {
        return Err(Error::Guard(format!(
            "{n}^{m} equivariant maps exceed the enumeration limit {MAX_COINDUCTION_TUPLES}"
        )));
    }
    let m = m as usize;
    // x_0 is the most significant digit, so the first tuple met in each
    // orbit is its lexicographic minimum
    let encode = |tuple: &[usize]| tuple.iter().fold(0usize, |acc, &x| acc * n as usize + x);
    let decode = |mut code: usize| {
        let mut tuple = vec![0; m];
        for slot in tuple.iter_mut().rev() {
            *slot = code % n as usize;
            code /= n as usize;
        }
        tuple
    };
    let mut seen = vec![false; total as usize];
    let mut out = Vec::new();
    for code in 0..total as usize {
        if seen[code] {
            continue;
        }
        let rep = decode(code);
        let mut size = 0u64;
        let mut cur = rep.clone();
        loop {
            let c = encode(&cur);
            if seen[c] {
                break;
            }
            seen[c] = true;
            size += 1;
            let first = cur[0];
            cur.rotate_left(1);
            cur[m - 1] = t.act(first);
        }
        out.push(MapOrbit {
            representative: rep,
            stabilizer: Subgroup::of_order(g.order() / size),
        });
    }
    Ok(out)
}

/// Coinduction `Map^H(G, T)` as an orbit decomposition.
pub fn coinduce(g: CyclicGroup, h: Subgroup, t: &GSet) -> Result<GSet> {
    let points = PointSet::from_gset(t);
    let orbits = coinduce_orbits(g, h, &points)?;
    let mut out = GSet::empty(g);
    for o in orbits {
        out.add_orbits(o.stabilizer, 1);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: u32) -> CyclicGroup {
        CyclicGroup::two_power(n)
    }

    #[test]
    fn subgroup_chains() {
        let names = |g| subgroups(g).iter().map(|h| h.to_string()).collect::<Vec<_>>();
        assert_eq!(names(c(1)), ["e", "C2"]);
        assert_eq!(names(c(2)), ["e", "C2", "C4"]);
        assert_eq!(names(c(0)), ["e"]);
    }

    #[test]
    fn product_examples() {
        let g = c(1);
        assert_eq!(orbit_product(g, g.trivial(), g.trivial()).to_string(), "2 x C2/e");
        let g = c(2);
        let c2 = g.subgroup(2).unwrap();
        assert_eq!(orbit_product(g, g.full(), c2).to_string(), "1 x C4/C2");
        assert_eq!(orbit_product(g, c2, c2).to_string(), "2 x C4/C2");
    }

    #[test]
    fn restriction_examples() {
        let g = c(1);
        let r = restrict_gset(g, g.trivial(), &GSet::orbit(g, g.trivial())).unwrap();
        assert_eq!(r.cardinality(), 2);
        let g = c(2);
        let c2 = g.subgroup(2).unwrap();
        assert_eq!(restrict_gset(g, c2, &GSet::orbit(g, c2)).unwrap().to_string(), "2 x C2/C2");
        assert_eq!(
            restrict_gset(g, c2, &GSet::orbit(g, g.trivial())).unwrap().to_string(),
            "2 x C2/e"
        );
    }

    #[test]
    fn coinduction_examples() {
        let g = c(1);
        let e = c(0);
        let two_points = GSet::from_orbits(e, [(e.full(), 2)]);
        assert_eq!(
            coinduce(g, g.trivial(), &two_points).unwrap().to_string(),
            "1 x C2/e + 2 x C2/C2"
        );
        let one = GSet::orbit(e, e.full());
        assert_eq!(coinduce(g, g.trivial(), &one).unwrap().to_string(), "1 x C2/C2");
        let g4 = c(2);
        let c2 = g4.subgroup(2).unwrap();
        let free = GSet::orbit(c(1), c(1).trivial());
        let out = coinduce(g4, c2, &free).unwrap();
        assert_eq!(out.cardinality(), 4);
        assert_eq!(out.to_string(), "1 x C4/e");
    }

    #[test]
    fn induction_examples() {
        let e = c(0);
        let g = c(1);
        let pts = GSet::from_orbits(e, [(e.full(), 3)]);
        assert_eq!(induce_gset(g, g.trivial(), &pts).unwrap().to_string(), "3 x C2/e");
        let g4 = c(2);
        let c2 = g4.subgroup(2).unwrap();
        let fixed = GSet::orbit(c(1), c(1).full());
        assert_eq!(induce_gset(g4, c2, &fixed).unwrap().to_string(), "1 x C4/C2");
    }

    #[test]
    fn index_guard() {
        let g = c(4);
        let e = c(0);
        let pts = GSet::from_orbits(e, [(e.full(), 2)]);
        assert!(matches!(coinduce(g, g.trivial(), &pts), Err(Error::Guard(_))));
    }

    #[test]
    fn parsing_names() {
        assert_eq!(CyclicGroup::parse("c4").unwrap(), c(2));
        assert_eq!(CyclicGroup::parse("C9").unwrap().prime(), 3);
        assert!(CyclicGroup::parse("C6").is_err());
        assert_eq!(c(3).parse_subgroup("C4").unwrap().order(), 4);
        assert!(c(1).parse_subgroup("C4").is_err());
    }
}
