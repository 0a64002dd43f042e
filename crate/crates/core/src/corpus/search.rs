//! Searching enumerated (and, past the cap, randomly generated) categories for
//! an instance of a named property.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::enumerate::{enumerate_categories, enumeration_cap, random_category, seeded_rng};
use super::format::CorpusFile;
use crate::fincat::{FinCategory, ObjId};
use crate::ideals::{
    enumerate_ideals, extend_ideal, is_projective_cover, missing_kernel, pointed_ideal,
    restrict_ideal, CoverWitness, Ideal, MultiPointed, DEFAULT_IDEAL_BOUND,
};
use crate::limits::{has_weak_finite_limits, is_regular_category, Mode};
use crate::report::Verdict;
use crate::stars::{is_normal_category, is_star_regular, reflexive_graph_pi0_failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchProperty {
    /// A thin regular category.
    RegularThin,
    /// A pointed category.
    Pointed,
    /// Pointed and regular but not normal.
    PointedRegularNotNormal,
    /// Regular with an ideal admitting kernels, yet not star-regular.
    RegularNotStarRegular,
    /// Pointed with weak finite limits, with a reflexive graph failing (∗π₀)
    /// at the pointed ideal.
    PointedWeakLimitsPi0Fails,
    /// A projective cover and an ideal `N` with neither `(N_P)^C ⊆ N` nor
    /// `N ⊆ (N_P)^C`.
    RestrictExtendNotAdjoint,
    /// A projective cover whose reflexive graphs satisfy (∗π₀) for the
    /// restricted ideal while the ambient category is not star-regular.
    CoverPi0NotStarRegular,
}

impl SearchProperty {
    pub const ALL: [SearchProperty; 7] = [
        SearchProperty::RegularThin,
        SearchProperty::Pointed,
        SearchProperty::PointedRegularNotNormal,
        SearchProperty::RegularNotStarRegular,
        SearchProperty::PointedWeakLimitsPi0Fails,
        SearchProperty::RestrictExtendNotAdjoint,
        SearchProperty::CoverPi0NotStarRegular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SearchProperty::RegularThin => "regular-thin",
            SearchProperty::Pointed => "pointed",
            SearchProperty::PointedRegularNotNormal => "pointed-regular-not-normal",
            SearchProperty::RegularNotStarRegular => "regular-not-star-regular",
            SearchProperty::PointedWeakLimitsPi0Fails => "pointed-wfl-pi0-fails",
            SearchProperty::RestrictExtendNotAdjoint => "restrict-extend-not-adjoint",
            SearchProperty::CoverPi0NotStarRegular => "cover-pi0-not-star-regular",
        }
    }
}

impl fmt::Display for SearchProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown property `{0}`")]
pub struct UnknownProperty(pub String);

impl FromStr for SearchProperty {
    type Err = UnknownProperty;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SearchProperty::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| UnknownProperty(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_morphisms: usize,
    pub seed: u64,
    /// Maximum number of candidate categories examined.
    pub budget: Option<usize>,
}

impl SearchConfig {
    pub fn new(max_morphisms: usize) -> Self {
        SearchConfig {
            max_morphisms,
            seed: 0,
            budget: None,
        }
    }
}

/// Random candidates drawn past the enumeration cap when no budget is given.
pub const DEFAULT_RANDOM_BUDGET: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("Exhausted: no instance of {property} among {examined} categories with at most {max} morphisms{note}")]
    Exhausted {
        property: SearchProperty,
        max: usize,
        examined: usize,
        note: String,
    },
}

/// A found instance, ready to serialize.
#[derive(Debug, Clone)]
pub struct Found {
    pub property: SearchProperty,
    pub category: FinCategory,
    /// Position of the instance among the examined candidates, from 1.
    pub index: usize,
    pub witness: Vec<String>,
    pub file: CorpusFile,
}

/// The data an instance carries beyond its category.
#[derive(Default)]
struct Witness {
    lines: Vec<String>,
    ideals: Vec<(String, Ideal)>,
    covers: Vec<(String, Vec<ObjId>)>,
    /// Ideals on a cover: (name, cover name, ideal on the cover).
    cover_ideals: Vec<(String, String, Ideal, FinCategory)>,
}

fn nonempty_subsets(n: usize) -> impl Iterator<Item = Vec<ObjId>> {
    (1u32..(1 << n)).map(move |mask| {
        (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| ObjId(i as u32))
            .collect()
    })
}

fn ideals_with_kernels(cat: &FinCategory, mode: Mode) -> Vec<Ideal> {
    enumerate_ideals(cat, DEFAULT_IDEAL_BOUND)
        .unwrap_or_default()
        .into_iter()
        .filter(|n| missing_kernel(cat, n, mode).is_none())
        .collect()
}

fn projective_covers(cat: &FinCategory) -> Vec<CoverWitness<'_>> {
    nonempty_subsets(cat.object_count())
        .map(|objs| CoverWitness::new(cat, &objs))
        .filter(|w| is_projective_cover(w).passed())
        .collect()
}

fn test(property: SearchProperty, cat: &FinCategory) -> Option<Witness> {
    match property {
        SearchProperty::RegularThin => {
            (cat.is_thin() && is_regular_category(cat).passed()).then(Witness::default)
        }
        SearchProperty::Pointed => pointed_ideal(cat).map(|z| Witness {
            ideals: vec![("zero".into(), z)],
            ..Default::default()
        }),
        SearchProperty::PointedRegularNotNormal => {
            let z = pointed_ideal(cat)?;
            if !is_regular_category(cat).passed() {
                return None;
            }
            let normal = is_normal_category(cat).ok()?;
            normal.is(Verdict::Fail).then(|| Witness {
                lines: normal.witnesses,
                ideals: vec![("zero".into(), z)],
                ..Default::default()
            })
        }
        SearchProperty::RegularNotStarRegular => {
            if !is_regular_category(cat).passed() {
                return None;
            }
            ideals_with_kernels(cat, Mode::Strict)
                .into_iter()
                .find_map(|n| {
                    let r = is_star_regular(MultiPointed::new(cat, &n));
                    r.is(Verdict::Fail).then(|| Witness {
                        lines: r.witnesses,
                        ideals: vec![("n".into(), n)],
                        ..Default::default()
                    })
                })
        }
        SearchProperty::PointedWeakLimitsPi0Fails => {
            let z = pointed_ideal(cat)?;
            if !has_weak_finite_limits(cat) {
                return None;
            }
            let (g, sep) = reflexive_graph_pi0_failure(MultiPointed::new(cat, &z)).ok()??;
            Some(Witness {
                lines: vec![format!(
                    "reflexive graph ({}, {}, {}) fails (∗π₀) at g = {}",
                    cat.morphism_name(g.d),
                    cat.morphism_name(g.c),
                    cat.morphism_name(g.e),
                    cat.morphism_name(sep)
                )],
                ideals: vec![("zero".into(), z)],
                ..Default::default()
            })
        }
        SearchProperty::RestrictExtendNotAdjoint => {
            if !is_regular_category(cat).passed() {
                return None;
            }
            let ideals = enumerate_ideals(cat, DEFAULT_IDEAL_BOUND).ok()?;
            for w in projective_covers(cat) {
                for n in &ideals {
                    let Ok(back) = extend_ideal(&w, &restrict_ideal(&w, n)) else {
                        continue;
                    };
                    if !back.is_subset(n) && !n.is_subset(&back) {
                        return Some(Witness {
                            lines: vec![
                                format!("N = {}", n.describe(cat)),
                                format!("(N_P)^C = {}", back.describe(cat)),
                            ],
                            ideals: vec![("n".into(), n.clone())],
                            covers: vec![("p".into(), w.cover.parent_objects().to_vec())],
                            ..Default::default()
                        });
                    }
                }
            }
            None
        }
        SearchProperty::CoverPi0NotStarRegular => {
            if !is_regular_category(cat).passed() {
                return None;
            }
            let ideals = ideals_with_kernels(cat, Mode::Strict);
            for w in projective_covers(cat) {
                for n in &ideals {
                    let star = is_star_regular(MultiPointed::new(cat, n));
                    if !star.is(Verdict::Fail) {
                        continue;
                    }
                    let n_p = restrict_ideal(&w, n);
                    if let Ok(None) = reflexive_graph_pi0_failure(MultiPointed::new(w.sub(), &n_p))
                    {
                        let mut lines = vec![format!("cover {}", w.describe())];
                        lines.extend(star.witnesses);
                        return Some(Witness {
                            lines,
                            ideals: vec![("n".into(), n.clone())],
                            covers: vec![("p".into(), w.cover.parent_objects().to_vec())],
                            cover_ideals: vec![("n_p".into(), "p".into(), n_p, w.sub().clone())],
                        });
                    }
                }
            }
            None
        }
    }
}

fn build_file(
    property: SearchProperty,
    config: &SearchConfig,
    index: usize,
    cat: &FinCategory,
    w: &Witness,
) -> CorpusFile {
    let mut file = CorpusFile::default();
    let mut header = vec![
        format!("found by search: property {property}"),
        format!(
            "max morphisms {}, seed {}, candidate {index}",
            config.max_morphisms, config.seed
        ),
    ];
    header.extend(w.lines.iter().cloned());
    file.push_comment(header);
    file.push_category(cat);
    for (name, ideal) in &w.ideals {
        file.push_ideal(name, cat, ideal);
    }
    for (name, objs) in &w.covers {
        file.push_cover(name, cat, objs);
    }
    for (name, cover, ideal, sub) in &w.cover_ideals {
        file.push_ideal_on(name, cover, sub, ideal);
    }
    file
}

/// The first candidate satisfying `property`: every category up to
/// `min(max, cap)` morphisms in enumeration order, then seeded random
/// categories up to `max` morphisms.
pub fn search_counterexample(
    property: SearchProperty,
    config: &SearchConfig,
) -> Result<Found, SearchError> {
    let cap = enumeration_cap();
    let budget = config.budget.unwrap_or(usize::MAX);
    let mut examined = 0;
    let enumerated = enumerate_categories(config.max_morphisms.min(cap))
        .expect("the enumeration bound is clamped to the cap");
    let consider = |cat: &FinCategory, examined: usize| {
        test(property, cat).map(|w| {
            let file = build_file(property, config, examined, cat, &w);
            Found {
                property,
                category: cat.clone(),
                index: examined,
                witness: w.lines,
                file,
            }
        })
    };
    for cat in &enumerated {
        if examined == budget {
            return Err(exhausted(property, config, examined, " (budget reached)"));
        }
        examined += 1;
        if let Some(found) = consider(cat, examined) {
            return Ok(found);
        }
    }
    if config.max_morphisms > cap {
        let mut rng = seeded_rng(config.seed);
        let random_budget = config
            .budget
            .map_or(DEFAULT_RANDOM_BUDGET, |b| b - examined);
        for k in 0..random_budget {
            let size = cap + 1 + (k % (config.max_morphisms - cap));
            let Some(cat) = random_category(&mut rng, size, format!("R{}", k + 1)) else {
                continue;
            };
            examined += 1;
            if let Some(found) = consider(&cat, examined) {
                return Ok(found);
            }
        }
        return Err(exhausted(
            property,
            config,
            examined,
            &format!(
                " (enumerated to {cap}, then random with seed {})",
                config.seed
            ),
        ));
    }
    Err(exhausted(property, config, examined, ""))
}

fn exhausted(
    property: SearchProperty,
    config: &SearchConfig,
    examined: usize,
    note: &str,
) -> SearchError {
    SearchError::Exhausted {
        property,
        max: config.max_morphisms,
        examined,
        note: note.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn property_names_parse_back() {
        for p in SearchProperty::ALL {
            assert_eq!(p.name().parse::<SearchProperty>(), Ok(p));
        }
        assert!("nonsense".parse::<SearchProperty>().is_err());
    }

    #[test]
    fn first_regular_thin_category_is_terminal() {
        let found =
            search_counterexample(SearchProperty::RegularThin, &SearchConfig::new(3)).unwrap();
        assert_eq!(found.index, 1);
        assert_eq!(found.category.morphism_count(), 1);
    }

    #[test]
    fn search_is_deterministic() {
        let config = SearchConfig::new(4);
        let a = search_counterexample(SearchProperty::Pointed, &config).unwrap();
        let b = search_counterexample(SearchProperty::Pointed, &config).unwrap();
        assert_eq!(a.index, b.index);
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn exhausted_names_the_bound() {
        let err = search_counterexample(
            SearchProperty::PointedRegularNotNormal,
            &SearchConfig::new(3),
        )
        .unwrap_err();
        assert!(err.to_string().contains("at most 3 morphisms"), "{err}");
    }
}
