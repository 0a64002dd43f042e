//! Projective covers, and moving ideals between a category and a cover.

use fixedbitset::FixedBitSet;

use super::{kernels, Ideal, IdealError, Provenance};
use crate::fincat::{FinCategory, FullSubcategory, MorId, ObjId};
use crate::limits::{image_factorization, is_regular_epi, pullbacks, Mode};
use crate::report::Report;

/// A category together with a full subcategory proposed as a projective
/// cover. Whether it is one is decided by [`is_projective_cover`].
#[derive(Debug, Clone)]
pub struct CoverWitness<'a> {
    pub cat: &'a FinCategory,
    pub cover: FullSubcategory,
}

impl<'a> CoverWitness<'a> {
    pub fn new(cat: &'a FinCategory, objects: &[ObjId]) -> Self {
        CoverWitness {
            cat,
            cover: FullSubcategory::new(cat, objects),
        }
    }

    pub fn from_subcategory(cat: &'a FinCategory, cover: FullSubcategory) -> Self {
        debug_assert_eq!(cover.parent_object_count(), cat.object_count());
        CoverWitness { cat, cover }
    }

    /// The cover as a category in its own right.
    pub fn sub(&self) -> &FinCategory {
        self.cover.category()
    }

    /// Regular epimorphisms onto `y` whose domain lies in the cover.
    pub fn covering_epis(&self, y: ObjId) -> Vec<MorId> {
        self.cat
            .into_object(y)
            .filter(|&e| self.cover.contains_object(self.cat.dom(e)) && is_regular_epi(self.cat, e))
            .collect()
    }

    pub fn is_total(&self) -> bool {
        self.cover.parent_objects().len() == self.cat.object_count()
    }

    pub fn describe(&self) -> String {
        let names: Vec<&str> = self
            .cover
            .parent_objects()
            .iter()
            .map(|&x| self.cat.object_name(x))
            .collect();
        format!("{{ {} }}", names.join(", "))
    }
}

/// Every cover object is regular-projective and every object is covered.
pub fn is_projective_cover(w: &CoverWitness) -> Report {
    const NAME: &str = "projective-cover";
    let cat = w.cat;
    for &p in w.cover.parent_objects() {
        for e in cat.morphisms().filter(|&e| is_regular_epi(cat, e)) {
            for &g in cat.hom(p, cat.cod(e)) {
                let lifts = cat
                    .hom(p, cat.dom(e))
                    .iter()
                    .any(|&h| cat.compose(e, h) == g);
                if !lifts {
                    return Report::fail(
                        NAME,
                        format!(
                            "(i) {} is not projective: {} does not lift along regular epi {}",
                            cat.object_name(p),
                            cat.morphism_name(g),
                            cat.describe(e)
                        ),
                    );
                }
            }
        }
    }
    for y in cat.objects() {
        if w.covering_epis(y).is_empty() {
            return Report::fail(
                NAME,
                format!(
                    "(ii) no regular epi onto {} from the cover",
                    cat.object_name(y)
                ),
            );
        }
    }
    Report::pass(NAME)
}

/// The trace of `n` on the cover.
pub fn restrict_ideal(w: &CoverWitness, n: &Ideal) -> Ideal {
    let sub = w.sub();
    let mut carrier = FixedBitSet::with_capacity(sub.morphism_count());
    for f in sub.morphisms() {
        if n.contains(w.cover.to_parent(f)) {
            carrier.insert(f.index());
        }
    }
    let out = Ideal::from_carrier(carrier, Provenance::Restricted);
    debug_assert!(out.is_ideal_in(sub));
    out
}

/// Morphisms `f: X → Y` admitting a square `f ∘ e = e' ∘ n` with `e, e'`
/// regular epis out of the cover and `n` in the cover ideal.
pub fn extend_ideal(w: &CoverWitness, n: &Ideal) -> Result<Ideal, IdealError> {
    let cat = w.cat;
    let covering: Vec<Vec<MorId>> = cat.objects().map(|y| w.covering_epis(y)).collect();
    let members: Vec<MorId> = n.members().map(|m| w.cover.to_parent(m)).collect();
    let mut carrier = FixedBitSet::with_capacity(cat.morphism_count());
    for f in cat.morphisms() {
        let (x, y) = (cat.dom(f), cat.cod(f));
        let found = covering[x.index()].iter().any(|&e| {
            let fe = cat.compose(f, e);
            covering[y.index()].iter().any(|&e2| {
                members.iter().any(|&m| {
                    cat.dom(m) == cat.dom(e)
                        && cat.cod(m) == cat.dom(e2)
                        && cat.compose(e2, m) == fe
                })
            })
        });
        if found {
            carrier.insert(f.index());
        }
    }
    let out = Ideal::from_carrier(carrier, Provenance::Extended);
    if let Some(v) = super::closure_violation(cat, out.carrier()) {
        return Err(IdealError::IdealClosureViolation(v));
    }
    Ok(out)
}

/// A null `n` into `cod f` that `f` fails to saturate.
pub fn saturation_violation(cat: &FinCategory, ideal: &Ideal, f: MorId) -> Option<MorId> {
    let p = cat.dom(f);
    ideal
        .members()
        .filter(|&n| cat.cod(n) == cat.cod(f))
        .find(|&n| {
            let x = cat.dom(n);
            let saturated = cat.objects().any(|z| {
                cat.hom(z, x).iter().any(|&g| {
                    is_regular_epi(cat, g) && {
                        let ng = cat.compose(n, g);
                        cat.hom(z, p)
                            .iter()
                            .any(|&m| ideal.contains(m) && cat.compose(f, m) == ng)
                    }
                })
            });
            !saturated
        })
}

pub fn is_saturating(cat: &FinCategory, ideal: &Ideal, f: MorId) -> bool {
    saturation_violation(cat, ideal, f).is_none()
}

/// Builds an N^C-kernel of `f` from a weak N-kernel in the cover: cover the
/// codomain by `r`, pull `f` back along `r`, cover the pullback by `q`, take a
/// weak kernel `k` of `p2 ∘ q` in the cover and return the mono part of
/// `p1 ∘ q ∘ k`.
pub fn nc_kernel_via_cover(w: &CoverWitness, n: &Ideal, f: MorId) -> Result<MorId, IdealError> {
    let cat = w.cat;
    let pre = |s: String| Err(IdealError::PreconditionFailed(s));
    let cover_report = is_projective_cover(w);
    if !cover_report.passed() {
        return pre(format!(
            "not a projective cover: {}",
            cover_report.witnesses.join("; ")
        ));
    }
    let Some(&r) = w.covering_epis(cat.cod(f)).first() else {
        return pre(format!("no cover epi onto {}", cat.object_name(cat.cod(f))));
    };
    let Some(pb) = pullbacks(cat, f, r, Mode::Strict).into_iter().next() else {
        return pre(format!(
            "no pullback of {} along {}",
            cat.morphism_name(f),
            cat.morphism_name(r)
        ));
    };
    let Some(&q) = w.covering_epis(pb.apex).first() else {
        return pre(format!(
            "no cover epi onto the pullback {}",
            cat.object_name(pb.apex)
        ));
    };
    let u = cat.compose(pb.p2, q);
    let u_sub = w.cover.from_parent(u).expect("both ends in the cover");
    let Some(&k_sub) = kernels(w.sub(), n, u_sub, Mode::Weak).first() else {
        return pre(format!(
            "no weak N-kernel of {} in the cover",
            cat.morphism_name(u)
        ));
    };
    let k = w.cover.to_parent(k_sub);
    let t = cat.compose3(pb.p1, q, k);
    match image_factorization(cat, t) {
        Some((_, m)) => Ok(m),
        None => pre(format!(
            "no image factorization of {}",
            cat.morphism_name(t)
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{validate_category, RawCategory};
    use crate::ideals::{enumerate_ideals, verify_galois_and_iso};

    fn chain3() -> FinCategory {
        validate_category(
            &RawCategory::new("Chain3")
                .object("c0")
                .object("c1")
                .object("c2")
                .morphism("f01", "c0", "c1")
                .morphism("f12", "c1", "c2")
                .morphism("f02", "c0", "c2")
                .composite("f12", "f01", "f02"),
        )
        .unwrap()
    }

    #[test]
    fn thin_chain_needs_every_object_in_its_cover() {
        let c = chain3();
        let all: Vec<ObjId> = c.objects().collect();
        assert!(is_projective_cover(&CoverWitness::new(&c, &all)).passed());
        let r = is_projective_cover(&CoverWitness::new(&c, &[ObjId(0)]));
        assert!(r.witnesses[0].starts_with("(ii)"), "{r:?}");
    }

    #[test]
    fn total_cover_moves_ideals_unchanged() {
        let c = chain3();
        let all: Vec<ObjId> = c.objects().collect();
        let w = CoverWitness::new(&c, &all);
        for n in enumerate_ideals(&c, 12).unwrap() {
            let r = restrict_ideal(&w, &n);
            assert_eq!(r.len(), n.len());
            assert_eq!(extend_ideal(&w, &r).unwrap(), n);
        }
        assert!(verify_galois_and_iso(&w, 12).unwrap().passed());
    }
}
