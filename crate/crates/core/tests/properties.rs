use proptest::prelude::*;
use sga_core::corpus::{self, ActionBounds, UltragraphBounds};
use sga_core::io::{Instance, InstanceFile};
use sga_core::{ideals, PrimeField, SkewRing};

fn bounds() -> impl Strategy<Value = ActionBounds> {
    (1usize..=4, 1usize..=6).prop_map(|(p, m)| ActionBounds { max_points: p, max_morphisms: m, max_dim: Some(12) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_files_round_trip(seed in any::<u64>(), b in bounds()) {
        let a = corpus::random_instance(seed, b).unwrap();
        prop_assert!(a.num_points() <= b.max_points);
        prop_assert!(a.groupoid().num_morphisms() <= b.max_morphisms);
        let inst = Instance::Action(a);
        let back = InstanceFile::parse(&inst.to_file().to_json()).unwrap().validate().unwrap();
        prop_assert_eq!(back.fingerprint(), inst.fingerprint());
    }

    #[test]
    fn restrictions_stay_valid(seed in any::<u64>(), b in bounds(), pick in any::<prop::sample::Index>()) {
        let a = corpus::random_instance(seed, b).unwrap();
        let inv = a.invariant_subsets();
        let m = inv[pick.index(inv.len())];
        let r = a.restrict(m).unwrap();
        prop_assert_eq!(r.num_points(), m.len());
        prop_assert!(r.is_invariant(r.all_points()));
    }

    #[test]
    fn psi_of_invariant_sets_is_graded(seed in any::<u64>(), b in bounds(), p in prop::sample::select(vec![2u32, 3])) {
        let a = corpus::random_instance(seed, b).unwrap();
        let ring = SkewRing::new(a.clone(), PrimeField::new(p).unwrap());
        for u in a.invariant_subsets() {
            let i = ideals::psi(&ring, u).unwrap();
            prop_assert!(ideals::is_graded_ideal(&ring, &i));
            prop_assert_eq!(ideals::phi(&ring, &i).unwrap(), u);
        }
    }

    #[test]
    fn ultragraphs_have_requested_shape(seed in any::<u64>(), n in 1usize..=6, m in 0usize..=8) {
        let u = corpus::random_ultragraph(seed, UltragraphBounds { vertices: n, edges: m }).unwrap();
        prop_assert_eq!((u.vertices().len(), u.edges().len()), (n, m));
        prop_assert!(u.check_kr(12).consistent);
    }
}
