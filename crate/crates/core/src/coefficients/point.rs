//! The RO(C₂)-graded homology of a point with constant coefficients.
//!
//! `H_{a+bσ}` is read off the reduced cellular complex of a sign sphere:
//! for `b ≤ 0` it is `H̃_a(S^{|b|σ})`, for `b > 0` it is `H̃^{−a}(S^{bσ})`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::coefficients::complex::{sign_sphere_complex, Variance};
use crate::coefficients::{CoeffRing, MackeyTable};
use crate::error::{Error, Result};
use crate::grading::DegreeC2;
use crate::groups::CyclicGroup;

type Cache = RwLock<HashMap<(CoeffRing, i64, i64), MackeyTable>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Largest `|b|` accepted by [`point_homology`].
pub const MAX_SIGN_MULTIPLICITY: i64 = 64;

/// The Mackey functor `H_{a+bσ}(pt; coeff)`.
pub fn point_homology(coeff: CoeffRing, d: DegreeC2) -> Result<MackeyTable> {
    if d.b.abs() > MAX_SIGN_MULTIPLICITY {
        return Err(Error::Guard(format!(
            "|b| = {} exceeds {MAX_SIGN_MULTIPLICITY}",
            d.b.abs()
        )));
    }
    let key = (coeff, d.a, d.b);
    if let Some(t) = cache().read().expect("point cache").get(&key) {
        return Ok(t.clone());
    }
    let table = compute(coeff, d)?;
    let mut w = cache().write().expect("point cache");
    Ok(w.entry(key).or_insert(table).clone())
}

fn compute(coeff: CoeffRing, d: DegreeC2) -> Result<MackeyTable> {
    let n = d.b.unsigned_abs() as usize;
    let complex = sign_sphere_complex(n);
    let table = if d.b <= 0 {
        complex.mackey(d.a, Variance::Homology, coeff)?
    } else {
        complex.mackey(-d.a, Variance::Cohomology, coeff)?
    };
    Ok(table.with_name(format!("H_{{{}}}", d.pretty())))
}

/// `a_σ^i u_σ^j`, living in degree `j − (i+j)σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointMonomial {
    pub a: u32,
    pub u: u32,
}

impl PointMonomial {
    pub const ONE: PointMonomial = PointMonomial { a: 0, u: 0 };

    pub fn new(a: u32, u: u32) -> Self {
        PointMonomial { a, u }
    }

    pub fn degree(&self) -> DegreeC2 {
        let (i, j) = (self.a as i64, self.u as i64);
        DegreeC2::new(j, -i - j)
    }

    pub fn is_one(&self) -> bool {
        self.a == 0 && self.u == 0
    }

    pub fn mul(&self, other: &PointMonomial) -> PointMonomial {
        PointMonomial::new(self.a + other.a, self.u + other.u)
    }

    /// Image under restriction to the trivial group (`a_σ ↦ 0`, `u_σ ↦ 1`).
    pub fn restriction(&self) -> i64 {
        (self.a == 0) as i64
    }

    pub fn parse(text: &str) -> Result<PointMonomial> {
        let mut m = PointMonomial::ONE;
        for factor in text.split('*').map(str::trim) {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<i64>()
                        .map_err(|_| Error::Model(format!("bad exponent in `{factor}`")))?,
                ),
                None => (factor, 1),
            };
            if exp < 0 {
                return Err(Error::UnsupportedCone(factor.to_string()));
            }
            match base {
                "a_s" => m.a += exp as u32,
                "u_s" => m.u += exp as u32,
                "1" if exp == 1 => {}
                _ => return Err(Error::Model(format!("unknown coefficient `{factor}`"))),
            }
        }
        Ok(m)
    }
}

impl fmt::Display for PointMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("a_s", self.a), ("u_s", self.u)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// The positive-cone part of `H_★(pt)` used as coefficients in ring models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointRingC2 {
    coeff: CoeffRing,
}

impl PointRingC2 {
    pub fn new(coeff: CoeffRing) -> Self {
        PointRingC2 { coeff }
    }

    pub fn coeff(&self) -> CoeffRing {
        self.coeff
    }

    /// The table in a given degree.
    pub fn lookup(&self, d: DegreeC2) -> Result<MackeyTable> {
        point_homology(self.coeff, d)
    }

    /// Checks a monomial lies in the supported cone: over ℤ only powers of `a_σ`.
    pub fn check(&self, m: &PointMonomial) -> Result<()> {
        if self.coeff == CoeffRing::Z && m.u > 0 {
            return Err(Error::UnsupportedCone(format!(
                "{m} (u_s needs F2 coefficients)"
            )));
        }
        Ok(())
    }

    /// Additive order of the class `m` at the top level: 0 for infinite
    /// order, 1 if the class is zero.
    pub fn order(&self, m: &PointMonomial) -> Result<u64> {
        self.check(m)?;
        let table = self.lookup(m.degree())?;
        let top = table.level(CyclicGroup::c2().full());
        match top.factors.as_slice() {
            [] => Ok(1),
            [n] => Ok(*n),
            _ => Err(Error::Model(format!(
                "degree {} is not cyclic at the top level",
                m.degree()
            ))),
        }
    }

    /// Reduces an integer coefficient of `m` modulo the order of `m`.
    pub fn reduce(&self, m: &PointMonomial, c: i64) -> Result<i64> {
        Ok(match self.order(m)? {
            0 => c,
            n => c.rem_euclid(n as i64),
        })
    }

    pub fn is_nonzero(&self, m: &PointMonomial) -> Result<bool> {
        Ok(self.order(m)? != 1)
    }

    pub fn multiply(&self, x: &PointMonomial, y: &PointMonomial) -> Result<PointMonomial> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.mul(y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::AbGroup;

    fn levels(coeff: CoeffRing, a: i64, b: i64) -> (AbGroup, AbGroup) {
        let g = CyclicGroup::c2();
        let t = point_homology(coeff, DegreeC2::new(a, b)).unwrap();
        (t.level(g.full()).clone(), t.level(g.trivial()).clone())
    }

    #[test]
    fn named_degrees() {
        let f2 = AbGroup::cyclic(2);
        assert_eq!(levels(CoeffRing::F2, 0, 0), (f2.clone(), f2.clone()));
        assert_eq!(levels(CoeffRing::F2, 0, -1), (f2.clone(), AbGroup::zero()));
        // the underlying sphere S^{1-σ} has dimension 0, so level e is F2
        assert_eq!(levels(CoeffRing::F2, 1, -1), (f2.clone(), f2.clone()));
        assert_eq!(levels(CoeffRing::Z, 0, 0), (AbGroup::free(1), AbGroup::free(1)));
        assert_eq!(levels(CoeffRing::Z, 0, -1).0, AbGroup::cyclic(2));
        assert_eq!(levels(CoeffRing::Z, 0, -2).0, AbGroup::cyclic(2));
        assert!(levels(CoeffRing::Z, 1, -1).0.is_zero());
        assert_eq!(levels(CoeffRing::Z, 2, -2).0, AbGroup::free(1));
    }

    #[test]
    fn degree_zero_restriction_is_iso() {
        let g = CyclicGroup::c2();
        let t = point_homology(CoeffRing::F2, DegreeC2::new(0, 0)).unwrap();
        assert_eq!(t.res(g.full(), g.trivial()).get(0, 0), 1);
        let u = point_homology(CoeffRing::F2, DegreeC2::new(1, -1)).unwrap();
        assert_eq!(u.res(g.full(), g.trivial()).get(0, 0), 1);
    }

    #[test]
    fn positive_cone_nonzero() {
        let ring = PointRingC2::new(CoeffRing::F2);
        for i in 0..5 {
            for j in 0..5 {
                assert!(ring.is_nonzero(&PointMonomial::new(i, j)).unwrap(), "a^{i} u^{j}");
            }
        }
        let z = PointRingC2::new(CoeffRing::Z);
        assert_eq!(z.order(&PointMonomial::new(3, 0)).unwrap(), 2);
        assert_eq!(z.order(&PointMonomial::ONE).unwrap(), 0);
        assert!(matches!(z.order(&PointMonomial::new(0, 1)), Err(Error::UnsupportedCone(_))));
    }

    #[test]
    fn monomial_syntax() {
        let m = PointMonomial::parse("a_s^2*u_s").unwrap();
        assert_eq!(m, PointMonomial::new(2, 1));
        assert_eq!(m.to_string(), "a_s^2*u_s");
        assert_eq!(m.degree(), DegreeC2::new(1, -3));
        assert!(matches!(PointMonomial::parse("a_s^-1"), Err(Error::UnsupportedCone(_))));
    }
}
