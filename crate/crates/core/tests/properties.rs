use proptest::prelude::*;
use proptest::sample::subsequence;
use starkit::corpus::{
    parse, parse_and_resolve, random_category, seeded_rng, serialize, CorpusFile,
};
use starkit::fincat::validate_category;
use starkit::ideals::{extend_ideal, ideal_closure, kernels, restrict_ideal, CoverWitness, Ideal};
use starkit::iso::find_isomorphism;
use starkit::limits::Mode;
use starkit::stars::{pi0_against, star_of};
use starkit::{FinCategory, MorId, MultiPointed, ObjId};

fn category() -> impl Strategy<Value = FinCategory> {
    (any::<u64>(), 1usize..=9).prop_filter_map("generator gave up", |(seed, total)| {
        random_category(&mut seeded_rng(seed), total, format!("R{seed}"))
    })
}

/// A category with an ideal generated by a random handful of morphisms.
fn with_ideal() -> impl Strategy<Value = (FinCategory, Ideal)> {
    category().prop_flat_map(|cat| {
        let all: Vec<MorId> = cat.morphisms().collect();
        let n = all.len();
        subsequence(all, 0..=n.min(3)).prop_map(move |gens| {
            let ideal = ideal_closure(&cat, gens);
            (cat.clone(), ideal)
        })
    })
}

proptest! {
    #[test]
    fn closure_is_the_least_ideal_containing_its_generators((cat, ideal) in with_ideal()) {
        prop_assert!(ideal.is_ideal_in(&cat));
        prop_assert_eq!(ideal_closure(&cat, ideal.members()), ideal.clone());
        for n in ideal.members() {
            let principal = ideal_closure(&cat, [n]);
            prop_assert!(principal.is_subset(&ideal));
        }
        let total = Ideal::total(&cat);
        prop_assert!(ideal.union(&total).is_ideal_in(&cat));
        prop_assert!(ideal.intersection(&ideal_closure(&cat, cat.morphisms().take(1))).is_ideal_in(&cat));
    }

    #[test]
    fn corpus_text_round_trips((cat, ideal) in with_ideal(), mask in 1u32..512) {
        let objects: Vec<ObjId> = cat
            .objects()
            .filter(|o| mask & (1 << (o.index() % 9)) != 0)
            .collect();
        let mut file = CorpusFile::default();
        file.push_comment(["random"]);
        file.push_category(&cat);
        file.push_ideal("n", &cat, &ideal);
        if !objects.is_empty() {
            file.push_cover("p", &cat, &objects);
        }
        let text = serialize(&file);
        let parsed = parse(&text).unwrap();
        prop_assert_eq!(serialize(&parsed), text.clone());
        prop_assert_eq!(parse(&serialize(&parsed)).unwrap(), parsed);
        let corpus = parse_and_resolve(&text).unwrap();
        prop_assert_eq!(corpus.ideal(cat.name(), "n"), Some(&ideal));
    }

    #[test]
    fn relabelled_tables_are_isomorphic(cat in category(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = seeded_rng(seed);
        let mut raw = cat.to_raw();
        raw.name = "Copy".into();
        raw.objects.shuffle(&mut rng);
        raw.morphisms.shuffle(&mut rng);
        raw.composites.shuffle(&mut rng);
        let copy = validate_category(&raw).unwrap();
        let iso = find_isomorphism(&cat, &copy).expect("a relabelling is an isomorphism");
        for f in cat.morphisms() {
            let image = iso.morphisms[f.index()];
            prop_assert_eq!(copy.dom(image), iso.objects[cat.dom(f).index()]);
            for g in cat.out_of(cat.cod(f)) {
                prop_assert_eq!(
                    copy.compose(iso.morphisms[g.index()], image),
                    iso.morphisms[cat.compose(g, f).index()]
                );
            }
        }
    }

    #[test]
    fn kernels_land_in_the_ideal((cat, ideal) in with_ideal()) {
        for f in cat.morphisms() {
            let weak = kernels(&cat, &ideal, f, Mode::Weak);
            for k in kernels(&cat, &ideal, f, Mode::Strict) {
                prop_assert!(weak.contains(&k));
            }
            for k in weak {
                prop_assert!(ideal.contains(cat.compose(f, k)));
            }
        }
    }

    #[test]
    fn every_weak_star_gives_the_same_verdict((cat, ideal) in with_ideal()) {
        let m = MultiPointed::new(&cat, &ideal);
        for p in cat.parallel_pairs() {
            let verdicts: Vec<bool> = star_of(m, p, Mode::Weak)
                .iter()
                .map(|w| pi0_against(&cat, w).holds())
                .collect();
            prop_assert!(verdicts.windows(2).all(|w| w[0] == w[1]), "pair {}", cat.describe_pair(p));
        }
    }

    #[test]
    fn restriction_and_extension_give_ideals((cat, ideal) in with_ideal(), mask in 1u32..512) {
        let objects: Vec<ObjId> = cat
            .objects()
            .filter(|o| mask & (1 << (o.index() % 9)) != 0)
            .collect();
        prop_assume!(!objects.is_empty());
        let w = CoverWitness::new(&cat, &objects);
        let r = restrict_ideal(&w, &ideal);
        prop_assert!(r.is_ideal_in(w.sub()));
        if let Ok(e) = extend_ideal(&w, &r) {
            prop_assert!(e.is_ideal_in(&cat));
        }
    }
}
