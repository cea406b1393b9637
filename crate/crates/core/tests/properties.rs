use std::sync::OnceLock;

use proptest::prelude::*;

use twoweight::analysis::intersection_counts;
use twoweight::construction::{bijection_experiment, Correspondence, TwoWeightSet};
use twoweight::io::{read_point_set, write_point_set};
use twoweight::singer::SingerGeometry;
use twoweight::{blowup_weights, expected_weights, Elem, PointSet, Space, Subfield, Tower};

fn s32() -> &'static Space {
    static S: OnceLock<Space> = OnceLock::new();
    S.get_or_init(|| Space::new(Tower::new(3, 1, 2).unwrap()).unwrap())
}

fn s42() -> &'static Space {
    static S: OnceLock<Space> = OnceLock::new();
    S.get_or_init(|| Space::new(Tower::new(2, 2, 2).unwrap()).unwrap())
}

fn elem(t: &Tower, raw: u32) -> Elem {
    // one value in 64 maps to zero
    if raw.is_multiple_of(64) {
        Elem::ZERO
    } else {
        t.pow_beta(raw as u64)
    }
}

fn spaces() -> impl Strategy<Value = &'static Space> {
    prop_oneof![Just(s32()), Just(s42())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(s in spaces(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let t = s.tower();
        let (x, y, z) = (elem(t, a), elem(t, b), elem(t, c));
        prop_assert_eq!(t.add(x, t.add(y, z)), t.add(t.add(x, y), z));
        prop_assert_eq!(t.add(x, y), t.add(y, x));
        prop_assert_eq!(t.mul(x, t.add(y, z)), t.add(t.mul(x, y), t.mul(x, z)));
        prop_assert_eq!(t.sub(t.add(x, y), y), x);
        prop_assert!(t.add(x, t.neg(x)).is_zero());
        if !x.is_zero() {
            prop_assert_eq!(t.mul(x, t.inv(x).unwrap()), t.one());
        }
        // Frobenius is additive, traces are GF(q)-linear
        let q = t.q() as u64;
        prop_assert_eq!(t.pow(t.add(x, y), q), t.add(t.pow(x, q), t.pow(y, q)));
        let full = |v| t.trace(v, Subfield::Full).unwrap();
        prop_assert_eq!(full(t.add(x, y)), t.add(full(x), full(y)));
        for u in t.base_units() {
            prop_assert_eq!(full(t.mul(u, x)), t.mul(u, full(x)));
        }
        prop_assert!(t.contains(full(x), Subfield::Base));
        prop_assert!(t.contains(t.rel_norm(x), Subfield::Mid));
    }

    #[test]
    fn coordinates_are_linear(s in spaces(), a in any::<u32>(), b in any::<u32>()) {
        let t = s.tower();
        let bf = s.base();
        let (x, y) = (elem(t, a), elem(t, b));
        let sum: Vec<u32> = t.coords(x).iter().zip(t.coords(y)).map(|(&u, v)| bf.add(u, v)).collect();
        prop_assert_eq!(t.coords(t.add(x, y)), sum);
        prop_assert_eq!(t.from_coords(&t.coords(x)).unwrap(), x);
    }

    #[test]
    fn canonical_form_is_a_class_invariant(s in spaces(), a in any::<u32>(), b in any::<u32>(), k in 0u64..1000) {
        let t = s.tower();
        let x = elem(t, a);
        let y = if b % 5 == 0 { Elem::ZERO } else { t.gamma_pow(b as u64) };
        prop_assume!(!(x.is_zero() && y.is_zero()));
        let idx = s.index_of(x, y).unwrap();
        for u in t.base_units() {
            prop_assert_eq!(s.index_of(t.mul(u, x), t.mul(u, y)).unwrap(), idx);
        }
        let p = s.point(idx);
        prop_assert_eq!(s.index_of(p.x, p.y).unwrap(), idx);
        prop_assert_eq!(s.canonicalize(x, y).unwrap(), p);
        let coords = s.point_coords(idx);
        prop_assert_eq!(*coords.iter().rev().find(|&&c| c != 0).unwrap(), 1);
        prop_assert_eq!(s.point_from_coords(&coords).unwrap().index, idx);
        // the same holds after moving along the Singer-type orbit
        let (x2, y2) = (t.mul(t.pow_beta(k), x), t.mul(t.gamma_pow(k), y));
        prop_assert!(s.index_of(x2, y2).is_ok());
    }

    #[test]
    fn double_counting_for_any_set(s in spaces(), picks in prop::collection::btree_set(0u32..1365, 1..40)) {
        let total = s.point_count();
        let set = PointSet::new(total, picks.iter().map(|&i| i % total)).unwrap();
        let counts = intersection_counts(s, &set);
        let q = s.q() as u64;
        let per_point = (q.pow(3 * s.n() - 1) - 1) / (q - 1);
        prop_assert_eq!(counts.len() as u32, s.hyperplane_count());
        prop_assert_eq!(counts.iter().map(|&c| c as u64).sum::<u64>(), set.len() as u64 * per_point);
        // a sample of hyperplanes against the incidence predicate
        for h in (0..s.hyperplane_count()).step_by(37) {
            let naive = set.indices().iter().filter(|&&p| s.incident(h, p)).count() as u32;
            prop_assert_eq!(counts[h as usize], naive);
        }
    }

    #[test]
    fn point_files_round_trip(picks in prop::collection::btree_set(0u32..364, 1..60)) {
        let s = s32();
        let set = TwoWeightSet {
            params: twoweight::Params::of(s.tower()),
            provenance: twoweight::Provenance::plain(twoweight::Construction::Imported),
            points: PointSet::new(s.point_count(), picks).unwrap(),
        };
        let mut buf = Vec::new();
        write_point_set(&mut buf, s, &set).unwrap();
        let back = read_point_set(buf.as_slice()).unwrap().into_set(s).unwrap();
        prop_assert_eq!(back.points, set.points);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn n2_bijections_are_two_weight(perm in Just((0u32..4).collect::<Vec<_>>()).prop_shuffle()) {
        let s = s32();
        static G: OnceLock<SingerGeometry> = OnceLock::new();
        let g = G.get_or_init(|| SingerGeometry::build(s32()).unwrap());
        let corr = Correspondence::from_permutation(s, g, perm).unwrap();
        prop_assert!(bijection_experiment(s, g, &corr).unwrap().passed());
    }
}

proptest! {
    #[test]
    fn blowup_with_d_equal_q_matches(base in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16]), n in 2u32..6) {
        let (w1, w2) = expected_weights(base, n).unwrap();
        prop_assert!(w1 > w2);
        let (wa, wb) = blowup_weights(base, n, base).unwrap();
        prop_assert_eq!((wb, wa), (w1, w2));
    }
}
