//! Virtual representation degrees.
//!
//! [`RegDegree`] is `kρ_H − ε` and [`DegreeC2`] is `a + bσ`. Cells and
//! Tor pages use [`RepDegree`], an integer combination of permutation
//! representations `R[S/L] = Ind_L^S 1` of a stabilizer `S`. Both of the
//! named forms embed into it, and it is closed under restriction,
//! induction and norms of cells, which the named forms are not.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::groups::{lcm, Subgroup};

/// `a·1 + b·σ` in RO(C₂).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeC2 {
    pub a: i64,
    pub b: i64,
}

impl DegreeC2 {
    pub fn new(a: i64, b: i64) -> Self {
        DegreeC2 { a, b }
    }

    pub fn underlying_dim(&self) -> i64 {
        self.a + self.b
    }

    pub fn fixed_dim(&self) -> i64 {
        self.a
    }

    pub fn add(&self, other: DegreeC2) -> DegreeC2 {
        DegreeC2::new(self.a + other.a, self.b + other.b)
    }

    pub fn negate(&self) -> DegreeC2 {
        DegreeC2::new(-self.a, -self.b)
    }

    /// Parses `a+b*s`, `a`, `b*s`, `-s`, `2-3*s` and the pretty form `2-3σ`.
    pub fn parse(text: &str) -> Result<DegreeC2> {
        let mut a = 0;
        let mut b = 0;
        for (sign, term) in split_terms(text)? {
            let t = term.replace('σ', "*s");
            if let Some(c) = t.strip_suffix('s') {
                let c = c.strip_suffix('*').unwrap_or(c);
                b += sign * parse_coefficient(c, text)?;
            } else {
                a += sign * parse_int(&t, text)?;
            }
        }
        Ok(DegreeC2::new(a, b))
    }

    /// `a+bσ` with unit coefficients suppressed.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        if self.a != 0 || self.b == 0 {
            out.push_str(&self.a.to_string());
        }
        push_term(&mut out, self.b, "σ");
        out
    }
}

impl fmt::Display for DegreeC2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b >= 0 {
            write!(f, "{}+{}*s", self.a, self.b)
        } else {
            write!(f, "{}-{}*s", self.a, -self.b)
        }
    }
}

/// `kρ_H − ε` with `ε ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegDegree {
    pub stabilizer: Subgroup,
    pub k: i64,
    pub eps: u8,
}

/// Result of adding or negating regular degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeSum {
    Regular(RegDegree),
    C2(DegreeC2),
}

impl RegDegree {
    pub fn new(stabilizer: Subgroup, k: i64, eps: u8) -> Result<Self> {
        if eps > 1 {
            return Err(Error::Degree(format!("eps must be 0 or 1, got {eps}")));
        }
        if stabilizer.is_trivial() {
            return Ok(RegDegree {
                stabilizer,
                k: k - eps as i64,
                eps: 0,
            });
        }
        Ok(RegDegree { stabilizer, k, eps })
    }

    pub fn underlying_dim(&self) -> i64 {
        self.k * self.stabilizer.order() as i64 - self.eps as i64
    }

    pub fn restrict(&self, k: Subgroup) -> Result<RegDegree> {
        if !k.is_subgroup_of(self.stabilizer) {
            return Err(Error::NotSubgroup(k.to_string(), self.stabilizer.to_string()));
        }
        RegDegree::new(k, self.k * k.index_in(self.stabilizer) as i64, self.eps)
    }

    pub fn to_full_c2(&self) -> Result<DegreeC2> {
        if self.stabilizer.order() != 2 {
            return Err(Error::Degree(format!(
                "{} is not a C2 degree",
                RepDegree::from(*self)
            )));
        }
        Ok(DegreeC2::new(self.k - self.eps as i64, self.k))
    }

    pub fn add(&self, other: &RegDegree) -> Result<DegreeSum> {
        if self.stabilizer != other.stabilizer {
            return Err(Error::Degree(format!(
                "cannot add degrees over {} and {}",
                self.stabilizer, other.stabilizer
            )));
        }
        let eps = self.eps + other.eps;
        if eps <= 1 {
            return Ok(DegreeSum::Regular(RegDegree::new(self.stabilizer, self.k + other.k, eps)?));
        }
        if self.stabilizer.order() == 2 {
            return Ok(DegreeSum::C2(self.to_full_c2()?.add(other.to_full_c2()?)));
        }
        Err(Error::Degree(format!(
            "sum of two (kρ−1) degrees over {} is not regular",
            self.stabilizer
        )))
    }

    pub fn negate(&self) -> Result<DegreeSum> {
        if self.eps == 0 {
            return Ok(DegreeSum::Regular(RegDegree::new(self.stabilizer, -self.k, 0)?));
        }
        if self.stabilizer.order() == 2 {
            return Ok(DegreeSum::C2(self.to_full_c2()?.negate()));
        }
        Err(Error::Degree(format!(
            "negative of a (kρ−1) degree over {} is not regular",
            self.stabilizer
        )))
    }
}

/// An integer combination `Σ c_L R[S/L]` of permutation representations of
/// the stabilizer `S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepDegree {
    stabilizer: Subgroup,
    coeffs: BTreeMap<Subgroup, i64>,
}

impl RepDegree {
    pub fn zero(stabilizer: Subgroup) -> Self {
        RepDegree {
            stabilizer,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::zero(Subgroup::of_order(1)).with_term(Subgroup::of_order(1), n)
    }

    pub fn regular(stabilizer: Subgroup, k: i64, eps: u8) -> Self {
        Self::zero(stabilizer)
            .with_term(Subgroup::of_order(1), k)
            .with_term(stabilizer, -(eps as i64))
    }

    /// `a + bσ` as `b·ρ₂ + (a−b)`.
    pub fn c2(a: i64, b: i64) -> Self {
        let c2 = Subgroup::of_order(2);
        Self::zero(c2)
            .with_term(Subgroup::of_order(1), b)
            .with_term(c2, a - b)
    }

    /// The permutation representation `R[S/L]`.
    pub fn permutation(stabilizer: Subgroup, l: Subgroup) -> Self {
        Self::zero(stabilizer).with_term(l, 1)
    }

    fn with_term(mut self, l: Subgroup, c: i64) -> Self {
        debug_assert!(l.is_subgroup_of(self.stabilizer));
        if c != 0 {
            let e = self.coeffs.entry(l).or_insert(0);
            *e += c;
            if *e == 0 {
                self.coeffs.remove(&l);
            }
        }
        self
    }

    pub fn stabilizer(&self) -> Subgroup {
        self.stabilizer
    }

    pub fn terms(&self) -> impl Iterator<Item = (Subgroup, i64)> + '_ {
        self.coeffs.iter().map(|(&l, &c)| (l, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn underlying_dim(&self) -> i64 {
        self.terms()
            .map(|(l, c)| c * l.index_in(self.stabilizer) as i64)
            .sum()
    }

    /// Dimension of the `S`-fixed points (each `R[S/L]` contributes one).
    pub fn fixed_dim(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// Coefficient of the trivial representation `R[S/S]`.
    pub fn trivial_coefficient(&self) -> i64 {
        self.coeffs.get(&self.stabilizer).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &RepDegree) -> Result<RepDegree> {
        if self.stabilizer != other.stabilizer {
            return Err(Error::Degree(format!(
                "cannot add degrees over {} and {}",
                self.stabilizer, other.stabilizer
            )));
        }
        Ok(other
            .terms()
            .fold(self.clone(), |acc, (l, c)| acc.with_term(l, c)))
    }

    pub fn negate(&self) -> RepDegree {
        RepDegree {
            stabilizer: self.stabilizer,
            coeffs: self.coeffs.iter().map(|(&l, &c)| (l, -c)).collect(),
        }
    }

    pub fn scale(&self, n: i64) -> RepDegree {
        self.terms()
            .fold(Self::zero(self.stabilizer), |acc, (l, c)| acc.with_term(l, n * c))
    }

    /// Restriction to `K ≤ S`: `R[S/L]` restricts to `|S|/lcm(|L|,|K|)` copies of `R[K/(L∩K)]`.
    pub fn restrict(&self, k: Subgroup) -> Result<RepDegree> {
        if !k.is_subgroup_of(self.stabilizer) {
            return Err(Error::NotSubgroup(k.to_string(), self.stabilizer.to_string()));
        }
        let s = self.stabilizer.order();
        Ok(self.terms().fold(Self::zero(k), |acc, (l, c)| {
            let copies = (s / lcm(l.order(), k.order())) as i64;
            acc.with_term(l.intersect(k), copies * c)
        }))
    }

    /// Induction from `S` to a larger `A`: `R[S/L]` becomes `R[A/L]`.
    pub fn induce(&self, a: Subgroup) -> Result<RepDegree> {
        if !self.stabilizer.is_subgroup_of(a) {
            return Err(Error::NotSubgroup(self.stabilizer.to_string(), a.to_string()));
        }
        Ok(self
            .terms()
            .fold(Self::zero(a), |acc, (l, c)| acc.with_term(l, c)))
    }

    pub fn as_regular(&self) -> Option<RegDegree> {
        let e = Subgroup::of_order(1);
        let k = self.coeffs.get(&e).copied().unwrap_or(0);
        if self.stabilizer.is_trivial() {
            return Some(RegDegree {
                stabilizer: e,
                k,
                eps: 0,
            });
        }
        let top = self.trivial_coefficient();
        let only_ends = self.coeffs.keys().all(|&l| l == e || l == self.stabilizer);
        if only_ends && (top == 0 || top == -1) {
            Some(RegDegree {
                stabilizer: self.stabilizer,
                k,
                eps: (-top) as u8,
            })
        } else {
            None
        }
    }

    pub fn is_regular(&self) -> bool {
        self.as_regular().is_some()
    }

    pub fn as_c2(&self) -> Option<DegreeC2> {
        if self.stabilizer.order() != 2 {
            return None;
        }
        let b = self.coeffs.get(&Subgroup::of_order(1)).copied().unwrap_or(0);
        Some(DegreeC2::new(self.trivial_coefficient() + b, b))
    }

    /// Multiplicity of `ρ_S` (the coefficient of the free orbit).
    pub fn rho_multiplicity(&self) -> i64 {
        self.coeffs.get(&Subgroup::of_order(1)).copied().unwrap_or(0)
    }

    /// Parses the canonical syntax (`k*rho[C2]-1`, `2*rho[C4]+1*ind[C2]+3`,
    /// plain integers), the C₂ form `a+b*s`, and the pretty forms produced by
    /// [`RepDegree::pretty`]. `stabilizer` fixes the group the degree lives on.
    pub fn parse(text: &str, stabilizer: Subgroup) -> Result<RepDegree> {
        let mut out = Self::zero(stabilizer);
        let c2 = stabilizer.order() == 2;
        for (sign, term) in split_terms(text)? {
            let (coef, basis) = split_basis(&term);
            let c = sign * parse_coefficient(coef, text)?;
            match basis {
                None => out = out.with_term(stabilizer, parse_int(&term, text)? * sign),
                Some(Basis::Sigma) if c2 => {
                    out = out
                        .with_term(Subgroup::of_order(1), c)
                        .with_term(stabilizer, -c)
                }
                Some(Basis::Sigma) => {
                    return Err(Error::Degree(format!("`s` needs stabilizer C2 in `{text}`")))
                }
                Some(Basis::Rho(order)) => {
                    if order != stabilizer.order() {
                        return Err(Error::Degree(format!(
                            "rho of C{order} in a degree over {stabilizer}"
                        )));
                    }
                    out = out.with_term(Subgroup::of_order(1), c)
                }
                Some(Basis::Ind(order)) => {
                    let l = Subgroup::of_order(order);
                    if !l.is_subgroup_of(stabilizer) {
                        return Err(Error::Degree(format!("ind[{l}] not inside {stabilizer}")));
                    }
                    out = out.with_term(l, c)
                }
            }
        }
        Ok(out)
    }

    /// Human notation: `ρ₂+1`, `2ρ₄+[C4/C2]`, `5`.
    pub fn pretty(&self) -> String {
        if self.stabilizer.is_trivial() {
            return self.underlying_dim().to_string();
        }
        let mut out = String::new();
        let rho = format!("ρ{}", subscript(self.stabilizer.order()));
        push_term(&mut out, self.rho_multiplicity(), &rho);
        for (l, c) in self.coeffs.iter().rev() {
            if !l.is_trivial() && *l != self.stabilizer {
                push_term(&mut out, *c, &format!("[{}/{}]", group_name(self.stabilizer), l));
            }
        }
        let top = self.trivial_coefficient();
        if top != 0 || out.is_empty() {
            if top >= 0 && !out.is_empty() {
                out.push('+');
            }
            out.push_str(&top.to_string());
        }
        out
    }
}

impl From<RegDegree> for RepDegree {
    fn from(d: RegDegree) -> Self {
        RepDegree::regular(d.stabilizer, d.k, d.eps)
    }
}

impl From<DegreeC2> for RepDegree {
    fn from(d: DegreeC2) -> Self {
        RepDegree::c2(d.a, d.b)
    }
}

impl fmt::Display for RepDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.stabilizer.is_trivial() {
            return write!(f, "{}", self.underlying_dim());
        }
        let mut parts: Vec<(i64, String)> = Vec::new();
        let k = self.rho_multiplicity();
        if k != 0 {
            parts.push((k, format!("*rho[{}]", group_name(self.stabilizer))));
        }
        for (l, c) in self.coeffs.iter().rev() {
            if !l.is_trivial() && *l != self.stabilizer {
                parts.push((*c, format!("*ind[{l}]")));
            }
        }
        let top = self.trivial_coefficient();
        if top != 0 {
            parts.push((top, String::new()));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, basis)) in parts.iter().enumerate() {
            if i > 0 && *c >= 0 {
                write!(f, "+")?;
            }
            write!(f, "{c}{basis}")?;
        }
        Ok(())
    }
}

fn group_name(s: Subgroup) -> String {
    format!("C{}", s.order())
}

fn subscript(n: u64) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

fn push_term(out: &mut String, c: i64, basis: &str) {
    match c {
        0 => {}
        1 => {
            if !out.is_empty() {
                out.push('+');
            }
            out.push_str(basis);
        }
        -1 => {
            out.push('-');
            out.push_str(basis);
        }
        c => {
            if c > 0 && !out.is_empty() {
                out.push('+');
            }
            out.push_str(&format!("{c}{basis}"));
        }
    }
}

enum Basis {
    Sigma,
    Rho(u64),
    Ind(u64),
}

fn split_basis(term: &str) -> (&str, Option<Basis>) {
    if let Some(pos) = term.find("rho[") {
        let order = term[pos + 4..].trim_end_matches(']').trim_start_matches(['C', 'c']);
        let order = order.parse().unwrap_or(0);
        return (term[..pos].trim_end_matches('*'), Some(Basis::Rho(order)));
    }
    if let Some(pos) = term.find("ind[") {
        let name = term[pos + 4..].trim_end_matches(']');
        let order = if name == "e" {
            1
        } else {
            name.trim_start_matches(['C', 'c']).parse().unwrap_or(0)
        };
        return (term[..pos].trim_end_matches('*'), Some(Basis::Ind(order)));
    }
    if let Some(pos) = term.find('ρ') {
        let digits: String = term[pos + 'ρ'.len_utf8()..]
            .chars()
            .map(|c| {
                (c as u32)
                    .checked_sub('₀' as u32)
                    .and_then(|d| char::from_digit(d, 10))
                    .unwrap_or('x')
            })
            .collect();
        return (&term[..pos], Some(Basis::Rho(digits.parse().unwrap_or(0))));
    }
    if let Some(pos) = term.find('[') {
        let inner = term[pos + 1..].trim_end_matches(']');
        let sub = inner.split('/').nth(1).unwrap_or("");
        let order = if sub == "e" {
            1
        } else {
            sub.trim_start_matches('C').parse().unwrap_or(0)
        };
        return (&term[..pos], Some(Basis::Ind(order)));
    }
    if let Some(c) = term.strip_suffix('σ') {
        return (c, Some(Basis::Sigma));
    }
    if let Some(c) = term.strip_suffix('s') {
        return (c.trim_end_matches('*'), Some(Basis::Sigma));
    }
    (term, None)
}

fn split_terms(text: &str) -> Result<Vec<(i64, String)>> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Degree("empty degree".into()));
    }
    let mut out = Vec::new();
    let mut sign = 1;
    let mut cur = String::new();
    let mut depth = 0;
    for ch in t.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch)
            }
            ']' => {
                depth -= 1;
                cur.push(ch)
            }
            '+' | '-' if depth == 0 => {
                if !cur.is_empty() {
                    out.push((sign, std::mem::take(&mut cur)));
                } else if !out.is_empty() || sign == -1 {
                    return Err(Error::Degree(format!("dangling sign in `{text}`")));
                }
                sign = if ch == '-' { -1 } else { 1 };
            }
            _ => cur.push(ch),
        }
    }
    if cur.is_empty() {
        return Err(Error::Degree(format!("trailing sign in `{text}`")));
    }
    out.push((sign, cur));
    Ok(out)
}

fn parse_coefficient(c: &str, whole: &str) -> Result<i64> {
    if c.is_empty() {
        Ok(1)
    } else {
        parse_int(c, whole)
    }
}

fn parse_int(s: &str, whole: &str) -> Result<i64> {
    s.parse()
        .map_err(|_| Error::Degree(format!("cannot read `{s}` in degree `{whole}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(n: u64) -> Subgroup {
        Subgroup::of_order(n)
    }

    #[test]
    fn restriction_examples() {
        let d = RegDegree::new(sub(2), 3, 0).unwrap();
        assert_eq!(d.restrict(sub(1)).unwrap(), RegDegree::new(sub(1), 6, 0).unwrap());
        let d = RegDegree::new(sub(4), 1, 0).unwrap();
        assert_eq!(d.restrict(sub(2)).unwrap(), RegDegree::new(sub(2), 2, 0).unwrap());
        let d = RegDegree::new(sub(2), 3, 1).unwrap();
        let r = d.restrict(sub(1)).unwrap();
        assert_eq!((r.k, r.eps), (5, 0));
        assert!(d.restrict(sub(4)).is_err());
    }

    #[test]
    fn full_c2_examples() {
        let f = |k, e| RegDegree::new(sub(2), k, e).unwrap().to_full_c2().unwrap();
        assert_eq!(f(1, 0), DegreeC2::new(1, 1));
        assert_eq!(f(1, 1), DegreeC2::new(0, 1));
        assert_eq!(f(0, 0), DegreeC2::new(0, 0));
        assert!(RegDegree::new(sub(4), 1, 0).unwrap().to_full_c2().is_err());
    }

    #[test]
    fn add_and_negate_examples() {
        let a = RegDegree::new(sub(2), 1, 0).unwrap();
        let b = RegDegree::new(sub(2), 2, 0).unwrap();
        assert_eq!(
            a.add(&b).unwrap(),
            DegreeSum::Regular(RegDegree::new(sub(2), 3, 0).unwrap())
        );
        assert_eq!(
            a.negate().unwrap(),
            DegreeSum::Regular(RegDegree::new(sub(2), -1, 0).unwrap())
        );
        assert_eq!(DegreeC2::new(1, 1).add(DegreeC2::new(0, 1)), DegreeC2::new(1, 2));
        let c = RegDegree::new(sub(2), 1, 1).unwrap();
        assert_eq!(c.add(&c).unwrap(), DegreeSum::C2(DegreeC2::new(0, 2)));
        let d = RegDegree::new(sub(4), 1, 1).unwrap();
        assert!(d.add(&d).is_err());
        assert!(a.add(&RegDegree::new(sub(4), 1, 0).unwrap()).is_err());
    }

    #[test]
    fn rep_degree_embeddings() {
        let y1 = RepDegree::c2(2, 1);
        assert_eq!(y1.to_string(), "1*rho[C2]+1");
        assert_eq!(y1.pretty(), "ρ₂+1");
        assert_eq!(y1.as_c2(), Some(DegreeC2::new(2, 1)));
        assert!(!y1.is_regular());
        let r = RepDegree::regular(sub(2), 3, 1);
        assert_eq!(r.to_string(), "3*rho[C2]-1");
        assert_eq!(r.as_regular(), Some(RegDegree::new(sub(2), 3, 1).unwrap()));
        assert_eq!(RepDegree::c2(0, -1).pretty(), "-ρ₂+1");
        assert_eq!(RepDegree::integer(5).to_string(), "5");
        assert_eq!(RepDegree::zero(sub(4)).to_string(), "0");
    }

    #[test]
    fn norm_of_non_regular_cell() {
        let y1 = RepDegree::c2(2, 1);
        let induced = y1.induce(sub(4)).unwrap();
        assert_eq!(induced.to_string(), "1*rho[C4]+1*ind[C2]");
        assert_eq!(induced.underlying_dim(), 6);
        assert_eq!(induced.restrict(sub(2)).unwrap().underlying_dim(), 6);
    }

    #[test]
    fn parse_forms() {
        let c2 = sub(2);
        for (text, expect) in [
            ("1*rho[C2]+1", RepDegree::c2(2, 1)),
            ("2+1*s", RepDegree::c2(2, 1)),
            ("ρ₂+1", RepDegree::c2(2, 1)),
            ("0-1*s", RepDegree::c2(0, -1)),
            ("-s", RepDegree::c2(0, -1)),
            ("3*rho[C2]-1", RepDegree::regular(c2, 3, 1)),
            ("rho[C2]", RepDegree::regular(c2, 1, 0)),
            ("0", RepDegree::zero(c2)),
        ] {
            assert_eq!(RepDegree::parse(text, c2).unwrap(), expect, "{text}");
        }
        let c4 = sub(4);
        let d = RepDegree::parse("2*rho[C4]+1*ind[C2]-1", c4).unwrap();
        assert_eq!(RepDegree::parse(&d.to_string(), c4).unwrap(), d);
        assert_eq!(RepDegree::parse(&d.pretty(), c4).unwrap(), d);
        assert!(RepDegree::parse("rho[C4]", c2).is_err());
        assert!(RepDegree::parse("1+", c2).is_err());
        assert_eq!(DegreeC2::parse("1-1*s").unwrap(), DegreeC2::new(1, -1));
        assert_eq!(DegreeC2::parse("1-σ").unwrap(), DegreeC2::new(1, -1));
        assert_eq!(DegreeC2::new(0, -1).pretty(), "-σ");
    }
}
