use proptest::prelude::*;
use votekernel::gadgets::{preprocess_parity, Mode};
use votekernel::{
    count_linear_extensions, is_extension, linear_extensions, majority_graph, realize_wmg, solve_set_cover, MarginTarget,
    PartialOrder, SetCoverInstance,
};

/// A partial order made of some pairs of a hidden linear order.
fn partial_order() -> impl Strategy<Value = PartialOrder> {
    (2usize..=6).prop_flat_map(|m| {
        (Just((0..m).collect::<Vec<usize>>()).prop_shuffle(), proptest::collection::vec(any::<bool>(), m * (m - 1) / 2))
    })
    .prop_map(|(hidden, keep)| {
        let m = hidden.len();
        let mut pairs = Vec::new();
        let mut bit = 0;
        for i in 0..m {
            for j in i + 1..m {
                if keep[bit] {
                    pairs.push((hidden[i], hidden[j]));
                }
                bit += 1;
            }
        }
        PartialOrder::from_pairs(m, pairs).unwrap()
    })
}

fn margin_target() -> impl Strategy<Value = MarginTarget> {
    (2usize..=5, any::<bool>()).prop_flat_map(|(m, odd)| {
        proptest::collection::vec(-4i64..=4, m * (m - 1) / 2).prop_map(move |half| {
            let mut f = vec![0i64; m * m];
            let mut it = half.into_iter();
            for a in 0..m {
                for b in a + 1..m {
                    let v = 2 * it.next().unwrap() + odd as i64;
                    f[a * m + b] = v;
                    f[b * m + a] = -v;
                }
            }
            MarginTarget::new(m, f).unwrap()
        })
    })
}

fn set_cover() -> impl Strategy<Value = SetCoverInstance> {
    (1usize..=4).prop_flat_map(|m| {
        (proptest::collection::vec(proptest::collection::btree_set(0..m, 0..=m), 0..=4), 0usize..=3).prop_map(
            move |(family, k)| SetCoverInstance::new(m, family.into_iter().map(|s| s.into_iter().collect()).collect(), k).unwrap(),
        )
    })
}

proptest! {
    #[test]
    fn extension_count_matches_enumeration(p in partial_order()) {
        let all: Vec<_> = linear_extensions(&p).collect();
        prop_assert_eq!(all.len() as u128, count_linear_extensions(&p));
        for v in &all {
            prop_assert!(is_extension(v, &p).unwrap());
        }
    }

    #[test]
    fn realized_profiles_reproduce_their_margins(target in margin_target()) {
        let profile = realize_wmg(&target).unwrap();
        prop_assert_eq!(&majority_graph(&profile), target.as_wmg());
    }

    #[test]
    fn parity_preprocessing_preserves_the_answer(inst in set_cover()) {
        let before = solve_set_cover(&inst).answer;
        for mode in [Mode::Scoring, Mode::Maximin, Mode::Copeland, Mode::Bucklin, Mode::RankedPairs] {
            let prov = preprocess_parity(&inst, mode).unwrap();
            prop_assert!(prov.replays_exactly());
            prop_assert_eq!(solve_set_cover(&prov.processed).answer, before, "{:?}", mode);
            if let Some(cover) = solve_set_cover(&inst).witness.and_then(|w| match w {
                votekernel::Witness::Cover(c) => Some(c),
                _ => None,
            }) {
                let there = prov.cover_to_processed(&cover).unwrap();
                prop_assert!(prov.processed.covers(&there));
                let back = prov.cover_to_original(&there).unwrap();
                prop_assert!(inst.covers(&back) && back.len() <= inst.k);
            }
        }
    }
}
