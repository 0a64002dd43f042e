//! The canonical-form enumerator against a brute-force oracle: every
//! composition table on every typing, validated and then deduplicated by
//! isomorphism search.

use std::collections::BTreeMap;

use itertools::Itertools;
use starkit::corpus::{enumerate_categories, EnumerationError};
use starkit::fincat::validate_category;
use starkit::ideals::{enumerate_ideals, Ideal};
use starkit::iso::are_isomorphic;
use starkit::{FinCategory, MorId, RawCategory};

/// Every valid category with exactly `n` morphisms, isomorphic copies included.
fn brute_force(n: usize) -> Vec<FinCategory> {
    let mut out = Vec::new();
    for k in 1..=n {
        let arrows = n - k;
        let objects: Vec<String> = (0..k).map(|i| format!("o{i}")).collect();
        let ends: Vec<(usize, usize)> = (0..k).cartesian_product(0..k).collect();
        for typing in (0..arrows)
            .map(|_| ends.iter().copied())
            .multi_cartesian_product()
        {
            out.extend(tables(&objects, &typing));
        }
        if arrows == 0 {
            out.extend(tables(&objects, &[]));
        }
    }
    out
}

fn tables(objects: &[String], typing: &[(usize, usize)]) -> Vec<FinCategory> {
    let name = |i: usize| format!("m{i}");
    let id = |o: usize| format!("1_{}", objects[o]);
    // Composable non-identity pairs (g, f) with their candidate composites.
    let mut cells = Vec::new();
    for (f, &(fd, fc)) in typing.iter().enumerate() {
        for (g, &(gd, gc)) in typing.iter().enumerate() {
            if gd != fc {
                continue;
            }
            let mut options: Vec<String> = typing
                .iter()
                .enumerate()
                .filter(|(_, &t)| t == (fd, gc))
                .map(|(h, _)| name(h))
                .collect();
            if fd == gc {
                options.push(id(fd));
            }
            cells.push((g, f, options));
        }
    }
    let mut base = RawCategory::new("X");
    for o in objects {
        base = base.object(o.clone());
    }
    for (i, &(d, c)) in typing.iter().enumerate() {
        base = base.morphism(name(i), objects[d].clone(), objects[c].clone());
    }
    if cells.iter().any(|(_, _, o)| o.is_empty()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for choice in cells
        .iter()
        .map(|(_, _, o)| o.iter())
        .multi_cartesian_product()
    {
        let mut raw = base.clone();
        for ((g, f, _), h) in cells.iter().zip(choice) {
            raw = raw.composite(name(*g), name(*f), h.clone());
        }
        if let Ok(cat) = validate_category(&raw) {
            out.push(cat);
        }
    }
    if cells.is_empty() {
        out.extend(validate_category(&base));
    }
    out
}

fn iso_classes(cats: Vec<FinCategory>) -> Vec<FinCategory> {
    let mut reps: Vec<FinCategory> = Vec::new();
    for c in cats {
        if !reps.iter().any(|r| are_isomorphic(r, &c)) {
            reps.push(c);
        }
    }
    reps
}

#[test]
fn counts_match_brute_force() {
    let mut cumulative = 0;
    let mut expected = Vec::new();
    for n in 1..=4 {
        cumulative += iso_classes(brute_force(n)).len();
        expected.push(cumulative);
    }
    assert_eq!(expected, [1, 4, 15, 70]);
    let got: Vec<usize> = (1..=4)
        .map(|n| enumerate_categories(n).unwrap().len())
        .collect();
    assert_eq!(got, expected);
}

#[test]
fn larger_counts_follow_the_known_sequence() {
    // Categories with exactly 5 and 6 morphisms: 329 and 2858.
    assert_eq!(enumerate_categories(5).unwrap().len(), 399);
    assert_eq!(enumerate_categories(6).unwrap().len(), 3257);
}

#[test]
fn enumerated_categories_are_pairwise_non_isomorphic() {
    let cats = enumerate_categories(4).unwrap();
    let by_size = cats
        .iter()
        .into_group_map_by(|c| (c.object_count(), c.morphism_count()));
    for group in by_size.values() {
        for (a, b) in group.iter().tuple_combinations() {
            assert!(!are_isomorphic(a, b), "{} ≅ {}", a.name(), b.name());
        }
    }
}

#[test]
fn every_brute_force_category_is_represented() {
    let cats = enumerate_categories(3).unwrap();
    for n in 1..=3 {
        for c in brute_force(n) {
            assert!(cats.iter().any(|r| are_isomorphic(r, &c)));
        }
    }
}

#[test]
fn cap_is_enforced() {
    assert!(matches!(
        enumerate_categories(40),
        Err(EnumerationError::BoundExceeded { requested: 40, .. })
    ));
}

/// Subsets of morphisms closed under composition on both sides.
fn brute_force_ideals(cat: &FinCategory) -> Vec<Vec<MorId>> {
    let all: Vec<MorId> = cat.morphisms().collect();
    all.iter()
        .copied()
        .powerset()
        .filter(|set| {
            set.iter().all(|&n| {
                cat.out_of(cat.cod(n))
                    .all(|g| set.contains(&cat.compose(g, n)))
                    && cat
                        .into_object(cat.dom(n))
                        .all(|h| set.contains(&cat.compose(n, h)))
            })
        })
        .collect()
}

#[test]
fn ideal_enumeration_matches_brute_force() {
    for cat in enumerate_categories(4).unwrap() {
        let mut want: Vec<Vec<MorId>> = brute_force_ideals(&cat);
        let mut got: Vec<Vec<MorId>> = enumerate_ideals(&cat, 12)
            .unwrap()
            .iter()
            .map(|i: &Ideal| i.members().collect())
            .collect();
        want.sort();
        got.sort();
        assert_eq!(got, want, "{}", cat.name());
    }
}

#[test]
fn ideal_counts_of_small_posets() {
    let counts: BTreeMap<&str, usize> = [("arrow", 5), ("chain3", 14)].into();
    for (file, want) in counts {
        let text = std::fs::read_to_string(
            std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
                .join(format!("fixtures/{file}.fincat")),
        )
        .unwrap();
        let corpus = starkit::corpus::parse_and_resolve(&text).unwrap();
        let cat = &corpus.categories[0];
        assert_eq!(brute_force_ideals(cat).len(), want);
        assert_eq!(enumerate_ideals(cat, 12).unwrap().len(), want);
    }
}
