use std::collections::BTreeMap;

use proptest::prelude::*;

use equihom::coefficients::CoeffRing;
use equihom::freebasis::{box_product, dual_basis, norm_basis, Basis, Cell};
use equihom::grading::RepDegree;
use equihom::groups::{coinduce, product, restrict_gset, subgroups, CyclicGroup, GSet, Subgroup};
use equihom::io::{emit_basis, emit_result, parse_basis, parse_result, OutputFormat, ResultFile, Section};
use equihom::oracle;
use equihom::specseq::{tor_koszul, GradedPolyAlgebra};

fn group(e: u32) -> CyclicGroup {
    CyclicGroup::two_power(e)
}

fn gset(g: CyclicGroup, mults: &[u64]) -> GSet {
    GSet::from_orbits(g, subgroups(g).into_iter().zip(mults.iter().copied()))
}

fn degree(g: CyclicGroup, coeffs: &[i64]) -> RepDegree {
    let mut d = RepDegree::zero(g.full());
    for (h, &c) in subgroups(g).into_iter().zip(coeffs) {
        d = d.add(&RepDegree::permutation(g.full(), h).scale(c)).unwrap();
    }
    d
}

fn basis(g: CyclicGroup, cells: &[(usize, i64)]) -> Basis {
    let subs = subgroups(g);
    let cells = cells
        .iter()
        .enumerate()
        .map(|(i, &(h, k))| Cell::new(format!("c{i}"), RepDegree::regular(subs[h % subs.len()], k, 0)))
        .collect();
    Basis::new(g, CoeffRing::Z, cells).unwrap()
}

fn points_by_dim(b: &Basis) -> BTreeMap<i64, u64> {
    let mut out = BTreeMap::new();
    for c in b.cells() {
        *out.entry(c.underlying_dim()).or_insert(0) += b.group().index(c.stabilizer());
    }
    out
}

proptest! {
    #[test]
    fn degree_arithmetic(e in 1u32..=3, x in prop::collection::vec(-4i64..=4, 4), y in prop::collection::vec(-4i64..=4, 4)) {
        let g = group(e);
        let (a, b) = (degree(g, &x), degree(g, &y));
        let s = a.add(&b).unwrap();
        prop_assert_eq!(&s, &b.add(&a).unwrap());
        prop_assert_eq!(s.underlying_dim(), a.underlying_dim() + b.underlying_dim());
        prop_assert_eq!(s.fixed_dim(), a.fixed_dim() + b.fixed_dim());
        prop_assert_eq!(a.negate().negate(), a.clone());
        prop_assert!(a.add(&a.negate()).unwrap().is_zero());
        for k in subgroups(g) {
            let r = s.restrict(k).unwrap();
            prop_assert_eq!(r, a.restrict(k).unwrap().add(&b.restrict(k).unwrap()).unwrap());
        }
    }

    #[test]
    fn degree_text_round_trips(e in 1u32..=3, x in prop::collection::vec(-4i64..=4, 4)) {
        let d = degree(group(e), &x);
        prop_assert_eq!(RepDegree::parse(&d.to_string(), d.stabilizer()).unwrap(), d);
    }

    #[test]
    fn gset_cardinalities(e in 1u32..=3, x in prop::collection::vec(0u64..=2, 4), y in prop::collection::vec(0u64..=2, 4)) {
        let g = group(e);
        let (s, t) = (gset(g, &x), gset(g, &y));
        let p = product(&s, &t).unwrap();
        prop_assert_eq!(p.cardinality(), s.cardinality() * t.cardinality());
        prop_assert_eq!(p.clone(), product(&t, &s).unwrap());
        for k in subgroups(g) {
            prop_assert_eq!(restrict_gset(g, k, &s).unwrap().cardinality(), s.cardinality());
        }
    }

    #[test]
    fn gset_matches_explicit(e in 1u32..=3, x in prop::collection::vec(0u64..=1, 4), y in prop::collection::vec(0u64..=1, 4)) {
        let g = group(e);
        let (s, t) = (gset(g, &x), gset(g, &y));
        let p = product(&s, &t).unwrap();
        prop_assert_eq!(oracle::gset_counts(&p), oracle::explicit(&s).product(&oracle::explicit(&t)).orbit_counts());
    }

    #[test]
    fn coinduction_cardinality(e in 1u32..=3, h in 0usize..3, x in prop::collection::vec(0u64..=1, 3)) {
        let g = group(e);
        let k = subgroups(g)[h.min(e as usize)];
        let hg = g.as_group(k);
        let t = gset(hg, &x);
        prop_assume!(t.cardinality().pow(g.index(k) as u32) <= 1 << 12);
        let c = coinduce(g, k, &t).unwrap();
        prop_assert_eq!(c.cardinality(), t.cardinality().pow(g.index(k) as u32));
    }

    #[test]
    fn box_product_convolves(e in 1u32..=2, x in prop::collection::vec((0usize..3, 0i64..3), 1..4), y in prop::collection::vec((0usize..3, 0i64..3), 1..4)) {
        let g = group(e);
        let (a, b) = (basis(g, &x), basis(g, &y));
        let p = box_product(&a, &b).unwrap();
        let mut conv: BTreeMap<i64, u64> = BTreeMap::new();
        for (da, na) in points_by_dim(&a) {
            for (db, nb) in points_by_dim(&b) {
                *conv.entry(da + db).or_insert(0) += na * nb;
            }
        }
        prop_assert_eq!(points_by_dim(&p), conv);
    }

    #[test]
    fn norm_counts_points(x in prop::collection::vec((0usize..2, 0i64..3), 1..5)) {
        let c2 = CyclicGroup::c2();
        let b = basis(CyclicGroup::two_power(0), &x);
        let n = norm_basis(Subgroup::of_order(1), c2, &b).unwrap();
        let points: u64 = points_by_dim(&n).values().sum();
        prop_assert_eq!(points, (b.len() * b.len()) as u64);
        for c in n.cells() {
            let h = c.stabilizer();
            prop_assert_eq!(&c.degree, &RepDegree::regular(h, c.underlying_dim() / h.order() as i64, 0));
        }
    }

    #[test]
    fn dual_is_an_involution(e in 1u32..=3, x in prop::collection::vec((0usize..4, -3i64..4), 0..6)) {
        let b = basis(group(e), &x);
        prop_assert_eq!(dual_basis(&dual_basis(&b)), b.clone());
        prop_assert_eq!(parse_basis(&emit_basis(&b)).unwrap(), b);
    }

    #[test]
    fn koszul_matches_bar_complex(degrees in prop::collection::vec(1i64..=4, 1..4), t in 2i64..=8) {
        let gens = degrees.iter().enumerate().map(|(i, &d)| (format!("x{i}"), RepDegree::integer(2 * d))).collect();
        let a = GradedPolyAlgebra::new(CoeffRing::F2, Subgroup::of_order(1), gens).unwrap();
        let check = tor_koszul(&a, t).unwrap();
        prop_assert!(check.agree());
        prop_assert!(check.computed.euler_consistent());
        let mut ranks: BTreeMap<(usize, i64), usize> = BTreeMap::new();
        for (k, e) in &check.computed.entries {
            if e.group.num_generators() > 0 {
                *ranks.entry((k.s, k.under)).or_insert(0) += e.group.num_generators();
            }
        }
        let even: Vec<i64> = degrees.iter().map(|d| 2 * d).collect();
        let brute: BTreeMap<(usize, i64), usize> =
            oracle::bar_tor_ranks(&even, t).into_iter().filter(|&(_, r)| r > 0).collect();
        prop_assert_eq!(ranks, brute);
    }

    #[test]
    fn result_files_round_trip(cells in prop::collection::vec(prop::collection::vec("[ -~\t\n\\[\\]]{0,6}", 2), 0..5)) {
        let mut r = ResultFile::new("prop", "input");
        let mut s = Section::new("t", &["a", "b"]);
        for row in cells {
            s.push(row);
        }
        r.sections.push(s);
        for f in [OutputFormat::Text, OutputFormat::Json] {
            prop_assert_eq!(parse_result(&emit_result(&r, f)).unwrap(), r.clone());
        }
    }
}
