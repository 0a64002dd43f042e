//! Ideals of morphisms and the kernels they induce.
//!
//! An ideal is a set of morphisms closed under composition with arbitrary
//! morphisms on either side. The empty set is an ideal.

mod cover;
mod lattice;

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::fincat::{FinCategory, MorId, ObjId};
use crate::limits::Mode;

pub use cover::{
    extend_ideal, is_projective_cover, is_saturating, nc_kernel_via_cover, restrict_ideal,
    saturation_violation, CoverWitness,
};
pub use lattice::{
    classify_ideal, galois_report, sample_ideals, verify_galois_and_iso, verify_galois_sampled,
    verify_lemma_a, IdealClass,
};

/// Default ceiling on the morphism count for full ideal enumeration.
pub const DEFAULT_IDEAL_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("not an ideal: {0}")]
    NotClosed(String),
    #[error("BoundExceeded: {morphisms} morphisms exceeds the ideal enumeration bound {bound}")]
    BoundExceeded { morphisms: usize, bound: usize },
    #[error("IdealClosureViolation: {0}")]
    IdealClosureViolation(String),
    #[error("PreconditionFailed: {0}")]
    PreconditionFailed(String),
}

/// Where an ideal came from. Does not take part in equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Given,
    Closure,
    Pointed,
    Restricted,
    Extended,
}

#[derive(Clone)]
pub struct Ideal {
    carrier: FixedBitSet,
    provenance: Provenance,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.carrier == other.carrier
    }
}

impl Eq for Ideal {}

impl std::hash::Hash for Ideal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.carrier.hash(state)
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ideal")
            .field("members", &self.carrier.ones().collect::<Vec<_>>())
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl Ideal {
    /// Checks closure and builds the ideal.
    pub fn new(
        cat: &FinCategory,
        members: impl IntoIterator<Item = MorId>,
    ) -> Result<Ideal, IdealError> {
        let mut carrier = FixedBitSet::with_capacity(cat.morphism_count());
        for f in members {
            carrier.insert(f.index());
        }
        if let Some(v) = closure_violation(cat, &carrier) {
            return Err(IdealError::NotClosed(v));
        }
        Ok(Ideal {
            carrier,
            provenance: Provenance::Given,
        })
    }

    pub(crate) fn from_carrier(carrier: FixedBitSet, provenance: Provenance) -> Ideal {
        Ideal {
            carrier,
            provenance,
        }
    }

    pub fn empty(cat: &FinCategory) -> Ideal {
        Ideal::from_carrier(
            FixedBitSet::with_capacity(cat.morphism_count()),
            Provenance::Given,
        )
    }

    /// The total context: every morphism is null.
    pub fn total(cat: &FinCategory) -> Ideal {
        let mut carrier = FixedBitSet::with_capacity(cat.morphism_count());
        carrier.insert_range(..);
        Ideal::from_carrier(carrier, Provenance::Given)
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn contains(&self, f: MorId) -> bool {
        self.carrier.contains(f.index())
    }

    pub fn members(&self) -> impl Iterator<Item = MorId> + '_ {
        self.carrier.ones().map(|i| MorId(i as u32))
    }

    pub fn len(&self) -> usize {
        self.carrier.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_clear()
    }

    /// Size of the category this ideal lives in.
    pub fn universe(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.carrier.is_subset(&other.carrier)
    }

    pub fn union(&self, other: &Ideal) -> Ideal {
        let mut carrier = self.carrier.clone();
        carrier.union_with(&other.carrier);
        Ideal::from_carrier(carrier, Provenance::Closure)
    }

    pub fn intersection(&self, other: &Ideal) -> Ideal {
        let mut carrier = self.carrier.clone();
        carrier.intersect_with(&other.carrier);
        Ideal::from_carrier(carrier, Provenance::Closure)
    }

    pub(crate) fn carrier(&self) -> &FixedBitSet {
        &self.carrier
    }

    pub fn names(&self, cat: &FinCategory) -> Vec<String> {
        self.members()
            .map(|f| cat.morphism_name(f).to_string())
            .collect()
    }

    /// `{ a, b, c }` in morphism order.
    pub fn describe(&self, cat: &FinCategory) -> String {
        format!("{{ {} }}", self.names(cat).join(", "))
    }

    /// Checks that this set is closed in `cat`.
    pub fn is_ideal_in(&self, cat: &FinCategory) -> bool {
        self.carrier.len() == cat.morphism_count()
            && closure_violation(cat, &self.carrier).is_none()
    }
}

/// First composite `f ∘ g ∘ h` with `g` in the set but the composite not.
fn closure_violation(cat: &FinCategory, set: &FixedBitSet) -> Option<String> {
    for g in set.ones().map(|i| MorId(i as u32)) {
        for h in cat.into_object(cat.dom(g)) {
            let gh = cat.compose(g, h);
            for f in cat.out_of(cat.cod(g)) {
                let fgh = cat.compose(f, gh);
                if !set.contains(fgh.index()) {
                    return Some(format!(
                        "{} ∘ {} ∘ {} = {} is missing",
                        cat.morphism_name(f),
                        cat.morphism_name(g),
                        cat.morphism_name(h),
                        cat.morphism_name(fgh)
                    ));
                }
            }
        }
    }
    None
}

/// The smallest ideal containing `gens`: all `f ∘ g ∘ h` with `g` a generator.
pub fn ideal_closure(cat: &FinCategory, gens: impl IntoIterator<Item = MorId>) -> Ideal {
    let mut carrier = FixedBitSet::with_capacity(cat.morphism_count());
    for g in gens {
        for h in cat.into_object(cat.dom(g)) {
            let gh = cat.compose(g, h);
            for f in cat.out_of(cat.cod(g)) {
                carrier.insert(cat.compose(f, gh).index());
            }
        }
    }
    debug_assert!(
        closure_violation(cat, &carrier).is_none(),
        "one pass reaches the fixpoint"
    );
    Ideal::from_carrier(carrier, Provenance::Closure)
}

/// A category equipped with an ideal of null morphisms.
#[derive(Debug, Clone, Copy)]
pub struct MultiPointed<'a> {
    pub cat: &'a FinCategory,
    pub ideal: &'a Ideal,
}

impl<'a> MultiPointed<'a> {
    pub fn new(cat: &'a FinCategory, ideal: &'a Ideal) -> Self {
        debug_assert_eq!(ideal.universe(), cat.morphism_count());
        MultiPointed { cat, ideal }
    }

    pub fn kernels(&self, f: MorId, mode: Mode) -> Vec<MorId> {
        kernels(self.cat, self.ideal, f, mode)
    }

    /// The first morphism without an N-kernel of the given kind.
    pub fn missing_kernel(&self, mode: Mode) -> Option<MorId> {
        missing_kernel(self.cat, self.ideal, mode)
    }
}

/// All N-kernels of `f`: maps `k` into `dom f` with `f ∘ k` null through which
/// every other such map factors (uniquely, in strict mode).
pub fn kernels(cat: &FinCategory, ideal: &Ideal, f: MorId, mode: Mode) -> Vec<MorId> {
    let x = cat.dom(f);
    let candidates: Vec<MorId> = cat
        .into_object(x)
        .filter(|&k| ideal.contains(cat.compose(f, k)))
        .collect();
    candidates
        .iter()
        .copied()
        .filter(|&k| {
            candidates.iter().all(|&k2| {
                let n = cat
                    .hom(cat.dom(k2), cat.dom(k))
                    .iter()
                    .filter(|&&u| cat.compose(k, u) == k2)
                    .take(2)
                    .count();
                match mode {
                    Mode::Weak => n >= 1,
                    Mode::Strict => n == 1,
                }
            })
        })
        .collect()
}

pub fn missing_kernel(cat: &FinCategory, ideal: &Ideal, mode: Mode) -> Option<MorId> {
    cat.morphisms()
        .find(|&f| kernels(cat, ideal, f, mode).is_empty())
}

/// The unique ideal with exactly one member in every hom-set, if any.
pub fn pointed_ideal(cat: &FinCategory) -> Option<Ideal> {
    let pairs: Vec<(ObjId, ObjId)> = cat
        .objects()
        .flat_map(|x| cat.objects().map(move |y| (x, y)))
        .collect();
    if pairs.iter().any(|&(x, y)| cat.hom(x, y).is_empty()) {
        return None;
    }
    let start = FixedBitSet::with_capacity(cat.morphism_count());
    pointed_search(cat, &pairs, 0, start).map(|c| Ideal::from_carrier(c, Provenance::Pointed))
}

fn pointed_search(
    cat: &FinCategory,
    pairs: &[(ObjId, ObjId)],
    i: usize,
    current: FixedBitSet,
) -> Option<FixedBitSet> {
    let Some(&(x, y)) = pairs.get(i) else {
        return Some(current);
    };
    if cat.hom(x, y).iter().any(|f| current.contains(f.index())) {
        return pointed_search(cat, pairs, i + 1, current);
    }
    for &n in cat.hom(x, y) {
        let mut next = current.clone();
        next.union_with(ideal_closure(cat, [n]).carrier());
        let at_most_one = pairs.iter().all(|&(a, b)| {
            cat.hom(a, b)
                .iter()
                .filter(|f| next.contains(f.index()))
                .count()
                <= 1
        });
        if at_most_one {
            if let Some(found) = pointed_search(cat, pairs, i + 1, next) {
                return Some(found);
            }
        }
    }
    None
}

/// Every ideal of `cat`, smallest first, as unions of principal ideals.
pub fn enumerate_ideals(cat: &FinCategory, bound: usize) -> Result<Vec<Ideal>, IdealError> {
    if cat.morphism_count() > bound {
        return Err(IdealError::BoundExceeded {
            morphisms: cat.morphism_count(),
            bound,
        });
    }
    let principal: Vec<FixedBitSet> = cat
        .morphisms()
        .map(|g| ideal_closure(cat, [g]).carrier)
        .collect();
    let empty = FixedBitSet::with_capacity(cat.morphism_count());
    let mut seen: HashSet<FixedBitSet> = HashSet::from([empty.clone()]);
    let mut frontier = vec![empty];
    while let Some(current) = frontier.pop() {
        for (g, p) in principal.iter().enumerate() {
            if current.contains(g) {
                continue;
            }
            let mut next = current.clone();
            next.union_with(p);
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    let mut ideals: Vec<FixedBitSet> = seen.into_iter().collect();
    ideals.sort_by_cached_key(|c| (c.count_ones(..), c.ones().collect::<Vec<_>>()));
    Ok(ideals
        .into_iter()
        .map(|c| Ideal::from_carrier(c, Provenance::Closure))
        .collect())
}
