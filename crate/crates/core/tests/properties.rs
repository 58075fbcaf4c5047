use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use locmod::algebra::intmat::{saturated_kernel, snf};
use locmod::algebra::{Field, FieldMatrix, IntMatrix, Monomial, MonomialOrder, MultiPoly, PolyIdeal, Ring, Scalar};
use locmod::resolution;
use locmod::schemes::ChartIdeal;
use locmod::toric;
use locmod::verification::{self, for_each_point};

fn int_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(-6i64..7, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c).map(|x| x.to_vec()).collect();
            IntMatrix::from_rows(&rows, c).unwrap()
        })
    })
}

fn unimodular(m: &IntMatrix) -> bool {
    m.det().map(|d| d.abs().is_one()).unwrap_or(false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_is_a_certificate(a in int_matrix()) {
        let s = snf(&a);
        prop_assert!(s.verify(&a));
        prop_assert!(unimodular(&s.u) && unimodular(&s.v));
        let d = &s.d;
        // diagonal with a divisibility chain
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    prop_assert!(d.get(i, j).is_zero());
                }
            }
        }
        let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).collect();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            prop_assert!(!w[0].is_negative());
        }
        prop_assert_eq!(s.rank(), a.rank());
    }

    #[test]
    fn kernel_is_saturated(a in int_matrix()) {
        let k = saturated_kernel(&a);
        prop_assert_eq!(k.rows(), a.cols() - a.rank());
        if k.rows() > 0 {
            prop_assert!(a.mul(&k.transpose()).unwrap().is_zero());
            // torsion-free cokernel of the inclusion: all invariants are 1
            let s = snf(&k);
            prop_assert!(s.invariants.iter().all(|d| d.is_one()));
        }
    }
}

fn ring2(p: u32) -> std::sync::Arc<Ring> {
    Ring::new(&["x", "y"], Field::prime(p).unwrap(), MonomialOrder::GrevLex).unwrap()
}

fn poly2(ring: &std::sync::Arc<Ring>, coeffs: &[(u16, u16, u32)]) -> MultiPoly {
    let terms = coeffs.iter().map(|&(a, b, c)| (Monomial::from_exps(&[a, b]), Scalar::P(c))).collect();
    MultiPoly::from_terms(ring, terms)
}

fn term_list(max_deg: u16, len: usize) -> impl Strategy<Value = Vec<(u16, u16, u32)>> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, 0u32..5), 1..=len)
        .prop_map(move |v| v.into_iter().filter(|(a, b, _)| a + b <= max_deg).collect())
}

/// f in span{m g_i : deg <= bound}, by rank over F_p.
fn in_truncated_ideal(f: &MultiPoly, gens: &[MultiPoly], bound: u32) -> bool {
    let ring = f.ring();
    let field = ring.field();
    let mut shifted = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let dg = g.total_degree();
        for a in 0..=bound {
            for b in 0..=bound - a {
                if a + b + dg <= bound {
                    shifted.push(g.mul_monomial(&Monomial::from_exps(&[a as u16, b as u16])));
                }
            }
        }
    }
    let mut index: HashMap<Vec<u16>, usize> = HashMap::new();
    for p in shifted.iter().chain(std::iter::once(f)) {
        for (m, _) in p.terms() {
            let n = index.len();
            index.entry(m.exps().to_vec()).or_insert(n);
        }
    }
    let col = |p: &MultiPoly| {
        let mut v = vec![field.zero(); index.len()];
        for (m, c) in p.terms() {
            v[index[m.exps()]] = c.clone();
        }
        v
    };
    let cols: Vec<Vec<Scalar>> = shifted.iter().map(col).collect();
    let fv = col(f);
    let a = FieldMatrix::from_fn(field, index.len(), cols.len(), |i, j| cols[j][i].clone());
    let mut all = cols.clone();
    all.push(fv);
    let b = FieldMatrix::from_fn(field, index.len(), all.len(), |i, j| all[j][i].clone());
    a.rank() == b.rank()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn membership_agrees_with_linear_algebra(
        g1 in term_list(2, 3), g2 in term_list(2, 3),
        h1 in term_list(2, 3), h2 in term_list(2, 3),
        f in term_list(3, 4),
    ) {
        let ring = ring2(5);
        let gens = vec![poly2(&ring, &g1), poly2(&ring, &g2)];
        let ideal = PolyIdeal::new(&ring, gens.clone()).unwrap();
        let member = &(&poly2(&ring, &h1) * &gens[0]) + &(&poly2(&ring, &h2) * &gens[1]);
        prop_assert!(ideal.contains(&member).unwrap());
        prop_assert!(locmod::algebra::groebner::is_groebner(&ideal.basis().unwrap()));
        let f = poly2(&ring, &f);
        if in_truncated_ideal(&f, &gens, 6) {
            prop_assert!(ideal.contains(&f).unwrap());
        }
        if !ideal.contains(&f).unwrap() {
            prop_assert!(!in_truncated_ideal(&f, &gens, 6));
        }
        // f - NF(f) is always a member
        let nf = ideal.reduce(&f).unwrap();
        prop_assert!(ideal.contains(&(&f - &nf)).unwrap());
    }

    #[test]
    fn monomial_dimension_matches_point_growth(
        supports in prop::collection::vec(prop::collection::vec(0usize..3, 1..3), 1..4),
    ) {
        let build = |field: Field| -> locmod::Result<ChartIdeal> {
            let ring = Ring::new(&["x", "y", "z"], field, MonomialOrder::GrevLex)?;
            let gens = supports.iter().map(|s| {
                let mut e = [0u16; 3];
                for &v in s { e[v] += 1; }
                MultiPoly::monomial(&ring, Monomial::from_exps(&e), field.one())
            }).collect();
            Ok(ChartIdeal { ideal: PolyIdeal::new(&ring, gens)?, roles: BTreeMap::new(), inverses: vec![], provenance: "monomial".into() })
        };
        let gb = build(Field::Rational).unwrap().ideal.dimension().unwrap();
        let pts = verification::dimension_by_point_growth(build, &[5, 13]).unwrap();
        prop_assert_eq!(gb, pts);
    }

    #[test]
    fn saturation_is_idempotent_and_monotone(
        g1 in prop::collection::vec((0u16..3, 0u16..3, 0u16..3, -3i64..4), 1..4),
        g2 in prop::collection::vec((0u16..3, 0u16..3, 0u16..3, -3i64..4), 1..4),
    ) {
        let ring = Ring::new(&["x", "y", "t"], Field::Rational, MonomialOrder::GrevLex).unwrap();
        let mk = |v: &[(u16, u16, u16, i64)]| MultiPoly::from_terms(&ring, v.iter().map(|&(a, b, c, k)| (Monomial::from_exps(&[a, b, c]), Field::Rational.from_i64(k))).collect());
        let ci = ChartIdeal { ideal: PolyIdeal::new(&ring, vec![mk(&g1), mk(&g2)]).unwrap(), roles: BTreeMap::new(), inverses: vec![], provenance: "random".into() };
        let once = resolution::kill_t_torsion(&ci).unwrap();
        let twice = resolution::kill_t_torsion(&once).unwrap();
        prop_assert!(once.ideal.same_ideal(&twice.ideal).unwrap());
        prop_assert!(once.ideal.contains_ideal(&ci.ideal).unwrap());
        prop_assert!(resolution::t_regular(&once).unwrap());
    }

    #[test]
    fn index_order_is_a_partial_order(n in 2u32..5, rr in 0u32..3, big_n in 1usize..3, picks in prop::collection::vec(0usize..1000, 3)) {
        let r = 1 + rr % (n - 1);
        let s = toric::enumerate_index_set(n, r, big_n).unwrap();
        prop_assert_eq!(s.len(), verification::index_set_oracle(n, r, big_n));
        let (a, b, c) = (&s[picks[0] % s.len()], &s[picks[1] % s.len()], &s[picks[2] % s.len()]);
        prop_assert!(toric::leq(a, a).unwrap());
        if toric::leq(a, b).unwrap() && toric::leq(b, a).unwrap() {
            prop_assert_eq!(a, b);
        }
        if toric::leq(a, b).unwrap() && toric::leq(b, c).unwrap() {
            prop_assert!(toric::leq(a, c).unwrap());
        }
        prop_assert!(a.is_member(n, r, big_n));
    }

    #[test]
    fn smoothness_is_stable_under_renaming_and_scaling(
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
        k in 1i64..5,
        which in 0usize..4,
    ) {
        let sources: [&[&str]; 4] = [&["x*y - t"], &["x*y"], &["x^2 - y^3"], &["x - t*y", "y^2 - t"]];
        let names = ["x", "y", "t"];
        let permuted: Vec<&str> = perm.iter().map(|&i| names[i]).collect();
        let a = Ring::new(&names, Field::Rational, MonomialOrder::GrevLex).unwrap();
        let b = Ring::new(&permuted, Field::Rational, MonomialOrder::GrevLex).unwrap();
        let ia = PolyIdeal::parse(&a, sources[which]).unwrap();
        let scaled: Vec<MultiPoly> = ia.gens().iter().map(|g| g.to_ring(&b).unwrap().scale(&Field::Rational.from_i64(k))).collect();
        let ci = |ideal: PolyIdeal| ChartIdeal { ideal, roles: BTreeMap::new(), inverses: vec![], provenance: "p".into() };
        let ca = ci(ia.clone());
        let cb = ci(PolyIdeal::new(&b, scaled).unwrap());
        let c = verification::codimension(&ca).unwrap();
        prop_assert_eq!(c, verification::codimension(&cb).unwrap());
        prop_assert_eq!(
            verification::smooth_check(&ca, c).unwrap().verdict,
            verification::smooth_check(&cb, c).unwrap().verdict
        );
    }
}

#[test]
fn point_counter_respects_inverses() {
    // y x - 1 = 0 over F_5: four points, one per unit x
    let ring = Ring::new(&["x", "y"], Field::prime(5).unwrap(), MonomialOrder::GrevLex).unwrap();
    let x = MultiPoly::var(&ring, 0);
    let ci = ChartIdeal {
        ideal: PolyIdeal::parse(&ring, &["x*y - 1"]).unwrap(),
        roles: BTreeMap::new(),
        inverses: vec![("y".into(), x)],
        provenance: "units".into(),
    };
    let rep = for_each_point(&ci, 5, None, 12, |_| {}).unwrap();
    assert_eq!((rep.count, rep.coordinates), (4, 1));
    assert!(verification::count_points(&ci, 5, Some(0)).is_err());
}
