//! The regular completion of a finite category with weak finite limits.
//!
//! Objects are the morphisms `f: X1 → X0` of the base. An arrow `(f) → (g)`
//! is a class of `h: X1 → Y1` with `g h p1 = g h p2` for a weak kernel pair
//! `(p1, p2)` of `f`, two such being equal when `g h = g h'`. Every output is
//! checked against the characterisation by a projective cover with monos into
//! products before it is returned.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::fincat::{validate_category, FinCategory, FullSubcategory, MorId, ObjId, RawCategory};
use crate::ideals::{
    extend_ideal, is_projective_cover, missing_kernel, pointed_ideal, restrict_ideal, CoverWitness,
    Ideal, MultiPointed,
};
use crate::limits::{
    has_weak_finite_limits, is_regular_category, kernel_pairs, products, weak_finite_limits_gap,
    Mode,
};
use crate::report::{Report, Verdict};
use crate::stars::{is_normal_category, is_star_regular, reflexive_graph_pi0_failure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error("PreconditionFailed: {0}")]
    PreconditionFailed(String),
    #[error("ValidationFailed: {0}")]
    ValidationFailed(String),
}

/// A base category, its regular completion, and the embedding between them.
#[derive(Debug, Clone)]
pub struct Completion {
    pub base: FinCategory,
    pub total: FinCategory,
    /// Object `X` of the base goes to `embed_obj[X]`.
    pub embed_obj: Vec<ObjId>,
    /// Morphism `h` of the base goes to `embed_mor[h]`.
    pub embed_mor: Vec<MorId>,
    /// The embedded image, as a full subcategory of `total`.
    pub cover: FullSubcategory,
    /// For each object of `total`, the base morphism it stands for.
    pub object_source: Vec<MorId>,
    /// For each morphism of `total`, one representative base morphism.
    pub representative: Vec<MorId>,
}

impl Completion {
    pub fn cover_witness(&self) -> CoverWitness<'_> {
        CoverWitness::from_subcategory(&self.total, self.cover.clone())
    }

    /// Transports an ideal of the base onto the cover subcategory.
    pub fn ideal_to_cover(&self, n: &Ideal) -> Ideal {
        let members = n.members().map(|h| {
            self.cover
                .from_parent(self.embed_mor[h.index()])
                .expect("embedded")
        });
        Ideal::new(self.cover.category(), members)
            .expect("the embedding is an isomorphism onto the cover")
    }

    /// Transports an ideal of the cover subcategory back onto the base.
    pub fn ideal_from_cover(&self, n: &Ideal) -> Ideal {
        let members = self.base.morphisms().filter(|&h| {
            let image = self
                .cover
                .from_parent(self.embed_mor[h.index()])
                .expect("embedded");
            n.contains(image)
        });
        Ideal::new(&self.base, members).expect("the embedding is an isomorphism onto the cover")
    }

    /// Comment lines describing where each object and morphism came from.
    pub fn provenance_lines(&self) -> Vec<String> {
        let (p, c) = (&self.base, &self.total);
        let mut out = vec![format!("regular completion of {}", p.name())];
        for x in c.objects() {
            out.push(format!(
                "object {} = {}",
                c.object_name(x),
                p.describe(self.object_source[x.index()])
            ));
        }
        for m in c.morphisms().filter(|&m| !c.is_identity(m)) {
            out.push(format!(
                "morphism {} = [{}]",
                c.morphism_name(m),
                p.morphism_name(self.representative[m.index()])
            ));
        }
        out
    }
}

fn fresh(used: &mut HashSet<String>, base: String) -> String {
    let mut name = base;
    while used.contains(&name) {
        name.push('_');
    }
    used.insert(name.clone());
    name
}

/// `h: dom f → dom g` is a raw arrow `(f) → (g)` relative to the weak kernel
/// pair `(p1, p2)` of `f`.
fn is_raw_arrow(p: &FinCategory, g: MorId, h: MorId, p1: MorId, p2: MorId) -> bool {
    let gh = p.compose(g, h);
    p.compose(gh, p1) == p.compose(gh, p2)
}

/// Class key of a raw arrow: source object, target object, and `g ∘ h`.
type ClassKey = (usize, usize, MorId);

pub fn regular_completion(p: &FinCategory) -> Result<Completion, CompletionError> {
    if let Some(gap) = weak_finite_limits_gap(p) {
        return Err(CompletionError::PreconditionFailed(format!(
            "{} lacks weak finite limits: {gap}",
            p.name()
        )));
    }
    let invalid = |s: String| Err(CompletionError::ValidationFailed(s));
    let objs: Vec<MorId> = p.morphisms().collect();
    let wkps: Vec<_> = objs
        .iter()
        .map(|&f| kernel_pairs(p, f, Mode::Weak))
        .collect();

    // Classes of raw arrows, with their members in hom order.
    let mut classes: BTreeMap<ClassKey, Vec<MorId>> = BTreeMap::new();
    for (i, &f) in objs.iter().enumerate() {
        for (j, &g) in objs.iter().enumerate() {
            for &h in p.hom(p.dom(f), p.dom(g)) {
                let verdicts: Vec<bool> = wkps[i]
                    .iter()
                    .map(|kp| is_raw_arrow(p, g, h, kp.f1, kp.f2))
                    .collect();
                if verdicts.iter().any(|&v| v != verdicts[0]) {
                    return invalid(format!(
                        "raw-arrow condition for {} from ({}) to ({}) depends on the weak kernel pair",
                        p.morphism_name(h),
                        p.morphism_name(f),
                        p.morphism_name(g)
                    ));
                }
                if verdicts[0] {
                    classes.entry((i, j, p.compose(g, h))).or_default().push(h);
                }
            }
        }
    }

    // Names. Embedded objects and arrows between them keep their base names.
    let mut used: HashSet<String> = p
        .objects()
        .map(|x| p.object_name(x).to_string())
        .chain(p.morphisms().map(|h| p.morphism_name(h).to_string()))
        .collect();
    let object_names: Vec<String> = objs
        .iter()
        .map(|&f| {
            if p.is_identity(f) {
                p.object_name(p.dom(f)).to_string()
            } else {
                fresh(&mut used, format!("R_{}", p.morphism_name(f)))
            }
        })
        .collect();
    let is_identity_class = |key: &ClassKey, members: &[MorId]| {
        key.0 == key.1 && members.contains(&p.identity(p.dom(objs[key.0])))
    };
    let mut class_names: HashMap<ClassKey, String> = HashMap::new();
    let mut counter = 0;
    for (key, members) in &classes {
        let name = if is_identity_class(key, members) {
            format!("1_{}", object_names[key.0])
        } else if p.is_identity(objs[key.0]) && p.is_identity(objs[key.1]) {
            debug_assert_eq!(members.len(), 1);
            p.morphism_name(members[0]).to_string()
        } else {
            loop {
                counter += 1;
                let candidate = format!("k{counter}");
                if !used.contains(&candidate) {
                    used.insert(candidate.clone());
                    break candidate;
                }
            }
        };
        class_names.insert(*key, name);
    }

    let mut raw = RawCategory::new(format!("{}_reg", p.name()));
    raw.objects = object_names.clone();
    for (key, members) in &classes {
        if !is_identity_class(key, members) {
            raw = raw.morphism(
                class_names[key].clone(),
                object_names[key.0].clone(),
                object_names[key.1].clone(),
            );
        }
    }
    // Composition on classes, asserting independence of representatives.
    for (k1, m1) in &classes {
        for (k2, m2) in classes.range((k1.1, 0, MorId(0))..) {
            if k2.0 != k1.1 {
                break;
            }
            let target = objs[k2.1];
            let mut composite: Option<MorId> = None;
            for &h1 in m1 {
                for &h2 in m2 {
                    let key = p.compose(target, p.compose(h2, h1));
                    match composite {
                        None => composite = Some(key),
                        Some(c) if c != key => {
                            return invalid(format!(
                                "composition of [{}] and [{}] depends on representatives",
                                p.morphism_name(h2),
                                p.morphism_name(h1)
                            ))
                        }
                        _ => {}
                    }
                }
            }
            let result = (k1.0, k2.1, composite.expect("classes are non-empty"));
            let Some(name) = class_names.get(&result) else {
                return invalid(format!(
                    "composite of [{}] and [{}] is not a raw arrow",
                    p.morphism_name(m2[0]),
                    p.morphism_name(m1[0])
                ));
            };
            if !is_identity_class(k1, m1) && !is_identity_class(k2, m2) {
                raw = raw.composite(
                    class_names[k2].clone(),
                    class_names[k1].clone(),
                    name.clone(),
                );
            }
        }
    }

    let total = validate_category(&raw)
        .map_err(|e| CompletionError::ValidationFailed(format!("construction invalid: {e}")))?;

    let embed_obj: Vec<ObjId> = p
        .objects()
        .map(|x| {
            total
                .find_object(&object_names[p.identity(x).index()])
                .expect("declared")
        })
        .collect();
    let embed_mor: Vec<MorId> = p
        .morphisms()
        .map(|h| {
            let (i, j) = (p.identity(p.dom(h)).index(), p.identity(p.cod(h)).index());
            let name = &class_names[&(i, j, h)];
            total.find_morphism(name).expect("declared")
        })
        .collect();
    let mut representative = vec![MorId(0); total.morphism_count()];
    for (key, members) in &classes {
        let m = total.find_morphism(&class_names[key]).expect("declared");
        representative[m.index()] = members[0];
    }
    let object_source: Vec<MorId> = total
        .objects()
        .map(|x| {
            let i = object_names
                .iter()
                .position(|n| n == total.object_name(x))
                .expect("declared");
            objs[i]
        })
        .collect();
    let cover = FullSubcategory::named(&total, &embed_obj, p.name());
    let completion = Completion {
        base: p.clone(),
        total,
        embed_obj,
        embed_mor,
        cover,
        object_source,
        representative,
    };
    if let Some(why) = embedding_violation(&completion) {
        return invalid(why);
    }
    let report = is_regular_completion(&completion.total, &completion.cover);
    if !report.passed() {
        return invalid(format!(
            "{} fails the characterisation: {}",
            completion.total.name(),
            report.witnesses.join("; ")
        ));
    }
    Ok(completion)
}

/// The embedding preserves identities and composition and is full and
/// faithful.
fn embedding_violation(c: &Completion) -> Option<String> {
    let (p, t) = (&c.base, &c.total);
    for x in p.objects() {
        if c.embed_mor[p.identity(x).index()] != t.identity(c.embed_obj[x.index()]) {
            return Some(format!("identity of {} not preserved", p.object_name(x)));
        }
        for y in p.objects() {
            let image = t.hom(c.embed_obj[x.index()], c.embed_obj[y.index()]).len();
            if image != p.hom(x, y).len() {
                return Some(format!(
                    "embedding not full and faithful on hom({}, {})",
                    p.object_name(x),
                    p.object_name(y)
                ));
            }
        }
    }
    for f in p.morphisms() {
        for g in p.out_of(p.cod(f)) {
            let lhs = c.embed_mor[p.compose(g, f).index()];
            let rhs = t.compose(c.embed_mor[g.index()], c.embed_mor[f.index()]);
            if lhs != rhs {
                return Some(format!(
                    "embedding does not preserve {} ∘ {}",
                    p.morphism_name(g),
                    p.morphism_name(f)
                ));
            }
        }
    }
    None
}

/// Objects of `cat` that are strict products of between one and `bound`
/// cover objects, built as iterated binary products.
fn cover_products(cat: &FinCategory, cover: &FullSubcategory, bound: usize) -> Vec<ObjId> {
    let mut seen: Vec<ObjId> = cover.parent_objects().to_vec();
    let mut frontier = seen.clone();
    for _ in 1..bound {
        let mut next = Vec::new();
        for &q in &frontier {
            for &pobj in cover.parent_objects() {
                if let Some(cone) = products(cat, q, pobj, Mode::Strict).first() {
                    if !seen.contains(&cone.apex) {
                        seen.push(cone.apex);
                        next.push(cone.apex);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

/// Regular, with the cover a projective cover, and every object admitting a
/// mono into a product of at most `|objects|` cover objects.
pub fn is_regular_completion(cat: &FinCategory, cover: &FullSubcategory) -> Report {
    const NAME: &str = "regular-completion";
    let regular = is_regular_category(cat);
    if !regular.passed() {
        return Report::fail(
            NAME,
            format!("not regular: {}", regular.witnesses.join("; ")),
        );
    }
    let w = CoverWitness::from_subcategory(cat, cover.clone());
    let pc = is_projective_cover(&w);
    if !pc.passed() {
        return Report::fail(
            NAME,
            format!("not a projective cover: {}", pc.witnesses.join("; ")),
        );
    }
    let bound = cat.object_count();
    let targets = cover_products(cat, cover, bound);
    for x in cat.objects() {
        let embeds = targets
            .iter()
            .any(|&q| cat.hom(x, q).iter().any(|&m| cat.is_mono(m)));
        if !embeds {
            return Report::fail(
                NAME,
                format!(
                    "{} has no mono into a product of at most {bound} cover objects",
                    cat.object_name(x)
                ),
            );
        }
    }
    Report::pass(NAME)
}

/// Star-regularity of `(C, N)` against (∗π₀) for the reflexive graphs of the
/// cover: the forward implication always, the converse when the cover makes
/// `C` a regular completion.
pub fn check_theorem_c(cat: &FinCategory, cover: &FullSubcategory, n: &Ideal) -> Report {
    const NAME: &str = "theorem-c";
    let regular = is_regular_category(cat);
    if !regular.passed() {
        return Report::inapplicable(
            NAME,
            format!("not regular: {}", regular.witnesses.join("; ")),
        );
    }
    if let Some(f) = missing_kernel(cat, n, Mode::Strict) {
        return Report::inapplicable(NAME, format!("{} has no N-kernel", cat.morphism_name(f)));
    }
    let w = CoverWitness::from_subcategory(cat, cover.clone());
    let pc = is_projective_cover(&w);
    if !pc.passed() {
        return Report::inapplicable(
            NAME,
            format!("not a projective cover: {}", pc.witnesses.join("; ")),
        );
    }
    let star_regular = is_star_regular(MultiPointed::new(cat, n));
    if star_regular.is(Verdict::Error) {
        return Report::error(NAME, star_regular.witnesses.join("; "));
    }
    let l = star_regular.passed();
    let n_p = restrict_ideal(&w, n);
    let sub = w.sub();
    let r_failure = match reflexive_graph_pi0_failure(MultiPointed::new(sub, &n_p)) {
        Ok(f) => f,
        Err(e) => return Report::error(NAME, format!("restricted ideal: {e}")),
    };
    let r = r_failure.is_none();
    let completion = is_regular_completion(cat, cover).passed();
    let summary =
        format!("star-regular {l}, cover graphs (∗π₀) {r}, regular completion {completion}");
    let graph_line = |(g, sep): (crate::fincat::ReflexiveGraph, MorId)| {
        format!(
            "cover graph ({}, {}, {}) fails (∗π₀) at g = {}",
            sub.morphism_name(g.d),
            sub.morphism_name(g.c),
            sub.morphism_name(g.e),
            sub.morphism_name(sep)
        )
    };
    if l && !r {
        Report::fail(NAME, format!("forward implication violated: {summary}"))
            .with_witness(graph_line(r_failure.expect("r is false")))
    } else if completion && r && !l {
        let mut rep = Report::fail(NAME, format!("converse violated: {summary}"));
        rep.witnesses.extend(star_regular.witnesses);
        rep
    } else {
        Report::pass(NAME).with_witness(summary)
    }
}

fn base_graphs_hold(p: &FinCategory, n: &Ideal) -> Result<bool, String> {
    reflexive_graph_pi0_failure(MultiPointed::new(p, n))
        .map(|f| f.is_none())
        .map_err(|e| e.to_string())
}

/// `(P_reg, N^C)` is star-regular iff the reflexive graphs of `P` satisfy
/// (∗π₀) with respect to `N`.
pub fn check_corollary_c(p: &FinCategory, n: &Ideal) -> Report {
    const NAME: &str = "corollary-c";
    if let Some(gap) = weak_finite_limits_gap(p) {
        return Report::inapplicable(NAME, format!("no weak finite limits: {gap}"));
    }
    if let Some(f) = missing_kernel(p, n, Mode::Weak) {
        return Report::inapplicable(NAME, format!("{} has no weak N-kernel", p.morphism_name(f)));
    }
    let c = match regular_completion(p) {
        Ok(c) => c,
        Err(e) => return Report::error(NAME, e.to_string()),
    };
    let w = c.cover_witness();
    let n_c = match extend_ideal(&w, &c.ideal_to_cover(n)) {
        Ok(i) => i,
        Err(e) => return Report::error(NAME, e.to_string()),
    };
    let lhs_report = is_star_regular(MultiPointed::new(&c.total, &n_c));
    if lhs_report.is(Verdict::Error) {
        return Report::error(NAME, lhs_report.witnesses.join("; "));
    }
    let lhs = lhs_report.passed();
    let rhs = match base_graphs_hold(p, n) {
        Ok(r) => r,
        Err(e) => return Report::error(NAME, e),
    };
    let summary = format!("completion star-regular {lhs}, base graphs (∗π₀) {rhs}");
    if lhs == rhs {
        let mut r = Report::pass(NAME).with_witness(summary);
        if !lhs {
            r.witnesses.extend(lhs_report.witnesses);
        }
        r
    } else {
        let mut r = Report::fail(NAME, summary);
        r.witnesses.extend(lhs_report.witnesses);
        r
    }
}

/// The completion of a pointed `P` is normal iff the reflexive graphs of `P`
/// satisfy (∗π₀) at the pointed ideal; pointedness and the pointed ideal
/// transfer both ways along the cover.
pub fn check_corollary_b(p: &FinCategory) -> Report {
    const NAME: &str = "corollary-b";
    let Some(pointed) = pointed_ideal(p) else {
        return Report::inapplicable(NAME, format!("{} is not pointed", p.name()));
    };
    if !has_weak_finite_limits(p) {
        return Report::inapplicable(NAME, format!("{} lacks weak finite limits", p.name()));
    }
    let c = match regular_completion(p) {
        Ok(c) => c,
        Err(e) => return Report::error(NAME, e.to_string()),
    };
    let w = c.cover_witness();
    let Some(pointed_total) = pointed_ideal(&c.total) else {
        return Report::fail(NAME, format!("{} is not pointed", c.total.name()));
    };
    let mut failures = Vec::new();
    match extend_ideal(&w, &c.ideal_to_cover(&pointed)) {
        Ok(ext) if ext == pointed_total => {}
        Ok(ext) => failures.push(format!(
            "extension of the pointed ideal {} differs from the pointed ideal {}",
            ext.describe(&c.total),
            pointed_total.describe(&c.total)
        )),
        Err(e) => return Report::error(NAME, e.to_string()),
    }
    let back = c.ideal_from_cover(&restrict_ideal(&w, &pointed_total));
    if back != pointed {
        failures.push(format!(
            "restriction of the pointed ideal is {}, expected {}",
            back.describe(p),
            pointed.describe(p)
        ));
    }
    let normal = match is_normal_category(&c.total) {
        Ok(r) => r,
        Err(e) => return Report::error(NAME, e.to_string()),
    };
    if normal.is(Verdict::Error) {
        return Report::error(NAME, normal.witnesses.join("; "));
    }
    let rhs = match base_graphs_hold(p, &pointed) {
        Ok(r) => r,
        Err(e) => return Report::error(NAME, e),
    };
    let summary = format!(
        "completion normal {}, base graphs (∗π₀) {rhs}",
        normal.passed()
    );
    if normal.passed() != rhs {
        failures.insert(0, summary.clone());
    }
    if failures.is_empty() {
        let mut r = Report::pass(NAME).with_witness(summary);
        if !rhs {
            r.witnesses.extend(normal.witnesses);
        }
        r
    } else {
        let mut r = Report::fail(NAME, failures.remove(0));
        r.witnesses.extend(failures);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{validate_category, RawCategory};

    fn arrow() -> FinCategory {
        validate_category(
            &RawCategory::new("Arrow")
                .object("A")
                .object("B")
                .morphism("f", "A", "B"),
        )
        .unwrap()
    }

    #[test]
    fn arrow_gains_the_image_of_f() {
        let c = regular_completion(&arrow()).unwrap();
        assert_eq!(c.total.name(), "Arrow_reg");
        let names: Vec<&str> = c.total.objects().map(|x| c.total.object_name(x)).collect();
        assert_eq!(names, ["A", "B", "R_f"]);
        assert_eq!(c.cover.parent_objects(), c.embed_obj.as_slice());
    }

    #[test]
    fn cover_must_be_regular_completion() {
        let p = arrow();
        let c = regular_completion(&p).unwrap();
        assert!(is_regular_completion(&c.total, &c.cover).passed());
        // The base category without the extra object is not a completion of
        // the single-object cover {B}.
        let b = p.find_object("B").unwrap();
        let r = is_regular_completion(&p, &FullSubcategory::new(&p, &[b]));
        assert!(!r.passed());
    }

    #[test]
    fn precondition_reported() {
        let raw = RawCategory::new("Loop")
            .object("A")
            .morphism("e", "A", "A")
            .composite("e", "e", "e");
        let p = validate_category(&raw).unwrap();
        assert!(matches!(
            regular_completion(&p),
            Err(CompletionError::PreconditionFailed(_))
        ));
    }
}
