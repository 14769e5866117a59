use magnus_kerint::{
    enumerate_homs, filtration_generators, filtration_member, filtration_series_finite, in_band,
    in_l, kerint_witness, killed_by_homs, magnus_expand, FiltrationKind, FiniteGroupTable,
    GeneratorBudget, GroupDescriptor, GroupHom, IdealChain, IndexSequence, Letter, RingSpec, Word,
    DEFAULT_CAP,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank as u32, any::<bool>()), 0..=max_len).prop_map(move |letters| {
        Word::reduce(
            rank,
            letters.into_iter().map(|(i, inv)| Letter::new(i, inv)),
        )
        .expect("indices in range")
    })
}

fn random_hom(desc: &GroupDescriptor, rank: usize, seed: u64) -> GroupHom {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let images = (0..rank)
        .map(|_| desc.random_element(&mut rng, 9))
        .collect();
    GroupHom::new(desc.clone(), images).unwrap()
}

fn families() -> Vec<GroupDescriptor> {
    vec![
        GroupDescriptor::full(RingSpec::PrimeField(2), 3).unwrap(),
        GroupDescriptor::full(RingSpec::PrimeField(3), 4).unwrap(),
        GroupDescriptor::gnp(3, 2).unwrap(),
        GroupDescriptor::gnp(4, 3).unwrap(),
        GroupDescriptor::full(RingSpec::IntegersMod(8), 3).unwrap(),
        GroupDescriptor::full(RingSpec::Integers, 4).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn free_group_axioms(u in word(2, 8), v in word(2, 8), w in word(2, 8)) {
        let uv_w = u.multiply(&v).unwrap().multiply(&w).unwrap();
        let u_vw = u.multiply(&v.multiply(&w).unwrap()).unwrap();
        prop_assert_eq!(uv_w, u_vw);
        prop_assert!(u.multiply(&u.invert()).unwrap().is_identity());
        prop_assert_eq!(u.invert().invert(), u);
    }

    #[test]
    fn magnus_is_multiplicative(u in word(2, 8), v in word(2, 8), bound in 1usize..6) {
        for ring in [RingSpec::Integers, RingSpec::IntegersMod(6), RingSpec::PrimeField(3)] {
            let lhs = magnus_expand(&u.multiply(&v).unwrap(), ring, bound).unwrap();
            let rhs = magnus_expand(&u, ring, bound).unwrap().mul(&magnus_expand(&v, ring, bound).unwrap()).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            let inv = magnus_expand(&u.invert(), ring, bound).unwrap();
            prop_assert_eq!(inv, magnus_expand(&u, ring, bound).unwrap().invert_unit().unwrap());
        }
    }

    #[test]
    fn hom_eval_is_a_homomorphism(u in word(2, 10), v in word(2, 10), seed in any::<u64>()) {
        for desc in families() {
            let phi = random_hom(&desc, 2, seed);
            let lhs = phi.eval(&u.multiply(&v).unwrap()).unwrap();
            let rhs = phi.eval(&u).unwrap().mul(&phi.eval(&v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn monomials_lie_in_their_band(seq in prop::collection::vec(0u32..2, 0..5), seed in any::<u64>()) {
        let seq = IndexSequence(seq);
        for desc in families() {
            let phi = random_hom(&desc, 2, seed);
            let m = phi.monomial_matrix(&seq).unwrap();
            if !seq.is_empty() {
                prop_assert!(in_band(&m, seq.len(), &desc.chain()).unwrap());
            }
            if seq.len() >= desc.size() {
                prop_assert!(m.is_zero());
            }
        }
    }

    #[test]
    fn witness_family_decides_membership(w in word(2, 12)) {
        for n in 2..=4 {
            let unit = IdealChain::unit(RingSpec::Integers, n).unwrap();
            let series = magnus_expand(&w, RingSpec::Integers, n).unwrap();
            prop_assert_eq!(kerint_witness(&w, &unit).unwrap(), in_l(&series, &unit).unwrap());
            for p in [2, 3] {
                let chain = IdealChain::p_power(p, n).unwrap();
                prop_assert_eq!(kerint_witness(&w, &chain).unwrap(), in_l(&series, &chain).unwrap());
            }
        }
    }

    #[test]
    fn powers_of_members_stay_members(w in word(2, 6), p in prop::sample::select(vec![2u64, 3])) {
        // If w is in the i-th lower p-central term, w^p is in the (i+1)-th.
        let kind = FiltrationKind::LowerPCentral(p);
        for i in 1..=3 {
            if filtration_member(&w, kind, i).unwrap() {
                prop_assert!(filtration_member(&w.pow(p as i64), kind, i + 1).unwrap());
            }
        }
    }
}

#[test]
fn enumerated_groups_are_closed() {
    for desc in [
        GroupDescriptor::full(RingSpec::PrimeField(2), 3).unwrap(),
        GroupDescriptor::gnp(3, 2).unwrap(),
        GroupDescriptor::gnp(2, 3).unwrap(),
        GroupDescriptor::full(RingSpec::IntegersMod(4), 3).unwrap(),
    ] {
        let elements: Vec<_> = desc.enumerate(DEFAULT_CAP).unwrap().collect();
        assert_eq!(elements.len() as u128, desc.order().unwrap());
        let set: std::collections::HashSet<_> = elements.iter().cloned().collect();
        assert_eq!(set.len(), elements.len());
        for x in &elements {
            assert!(set.contains(&x.inverse()));
            for y in &elements {
                assert!(set.contains(&x.mul(y).unwrap()), "{desc}");
            }
        }
    }
}

#[test]
fn generator_words_are_killed_exhaustively() {
    let budget = GeneratorBudget::default();
    for (kind, desc) in [
        (
            FiltrationKind::Zassenhaus(2),
            GroupDescriptor::full(RingSpec::PrimeField(2), 3).unwrap(),
        ),
        (
            FiltrationKind::LowerPCentral(2),
            GroupDescriptor::gnp(3, 2).unwrap(),
        ),
        (
            FiltrationKind::LowerPCentral(3),
            GroupDescriptor::gnp(3, 3).unwrap(),
        ),
    ] {
        let words = filtration_generators(kind, 3, 2, budget).unwrap();
        let homs: Vec<GroupHom> = enumerate_homs(&desc, 2, DEFAULT_CAP).unwrap().collect();
        assert!(
            killed_by_homs(&words, &homs).unwrap().iter().all(|&k| k),
            "{kind}"
        );
    }
}

#[test]
fn generator_images_land_in_series_terms() {
    // Every hom maps the i-th filtration term of the free group into the i-th term of the target.
    let budget = GeneratorBudget {
        seed_len: 2,
        max_len: 12,
        max_per_level: 60,
    };
    for (kind, desc) in [
        (
            FiltrationKind::Zassenhaus(2),
            GroupDescriptor::full(RingSpec::PrimeField(2), 4).unwrap(),
        ),
        (
            FiltrationKind::LowerPCentral(2),
            GroupDescriptor::gnp(3, 2).unwrap(),
        ),
        (
            FiltrationKind::LowerCentral,
            GroupDescriptor::full(RingSpec::IntegersMod(4), 3).unwrap(),
        ),
    ] {
        let group = FiniteGroupTable::from_descriptor(&desc, DEFAULT_CAP).unwrap();
        let series = filtration_series_finite(&group, kind, 2 * desc.size());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for i in 2..=series.terms.len() {
            let words = filtration_generators(kind, i, 2, budget).unwrap();
            for _ in 0..20 {
                let images = (0..2).map(|_| desc.random_element(&mut rng, 9)).collect();
                let phi = GroupHom::new(desc.clone(), images).unwrap();
                for w in &words {
                    let image = group.index_of(&phi.eval(w).unwrap()).unwrap();
                    assert!(series.terms[i - 1].contains(&image), "{kind} term {i}: {w}");
                }
            }
        }
    }
}
