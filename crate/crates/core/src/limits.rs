//! Weak and strict finite limits, coequalizers, regular epimorphisms and
//! regularity, all decided by exhaustive search over hom-sets.

use crate::fincat::{FinCategory, MorId, ObjId, ParallelPair};
use crate::report::Report;

/// Whether universal factorizations must be unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Weak,
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramEdge {
    pub from: usize,
    pub to: usize,
    pub mor: MorId,
}

/// A finite diagram: nodes labelled by objects (repeats allowed, so that
/// `X × X` and kernel pairs are expressible) and edges labelled by morphisms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagram {
    pub nodes: Vec<ObjId>,
    pub edges: Vec<DiagramEdge>,
}

impl Diagram {
    pub fn empty() -> Self {
        Diagram::default()
    }

    pub fn discrete(nodes: &[ObjId]) -> Self {
        Diagram {
            nodes: nodes.to_vec(),
            edges: Vec::new(),
        }
    }

    pub fn parallel(cat: &FinCategory, p: ParallelPair) -> Self {
        Diagram {
            nodes: vec![cat.dom(p.f1), cat.cod(p.f1)],
            edges: vec![
                DiagramEdge {
                    from: 0,
                    to: 1,
                    mor: p.f1,
                },
                DiagramEdge {
                    from: 0,
                    to: 1,
                    mor: p.f2,
                },
            ],
        }
    }

    /// The cospan `X --f--> Z <--g-- Y`; nodes are `[X, Y, Z]`.
    pub fn cospan(cat: &FinCategory, f: MorId, g: MorId) -> Self {
        Diagram {
            nodes: vec![cat.dom(f), cat.dom(g), cat.cod(f)],
            edges: vec![
                DiagramEdge {
                    from: 0,
                    to: 2,
                    mor: f,
                },
                DiagramEdge {
                    from: 1,
                    to: 2,
                    mor: g,
                },
            ],
        }
    }

    pub fn is_valid(&self, cat: &FinCategory) -> bool {
        self.edges.iter().all(|e| {
            e.from < self.nodes.len()
                && e.to < self.nodes.len()
                && cat.dom(e.mor) == self.nodes[e.from]
                && cat.cod(e.mor) == self.nodes[e.to]
        })
    }
}

/// Legs indexed by diagram node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cone {
    pub apex: ObjId,
    pub legs: Vec<MorId>,
}

/// All cones over `d`, apexes in object order and legs in hom order.
pub fn cones(cat: &FinCategory, d: &Diagram) -> Vec<Cone> {
    let mut out = Vec::new();
    for apex in cat.objects() {
        let mut legs = Vec::with_capacity(d.nodes.len());
        extend_cones(cat, d, apex, &mut legs, &mut out);
    }
    out
}

fn extend_cones(
    cat: &FinCategory,
    d: &Diagram,
    apex: ObjId,
    legs: &mut Vec<MorId>,
    out: &mut Vec<Cone>,
) {
    let i = legs.len();
    if i == d.nodes.len() {
        out.push(Cone {
            apex,
            legs: legs.clone(),
        });
        return;
    }
    for &leg in cat.hom(apex, d.nodes[i]) {
        legs.push(leg);
        let consistent = d
            .edges
            .iter()
            .all(|e| e.from.max(e.to) != i || cat.compose(e.mor, legs[e.from]) == legs[e.to]);
        if consistent {
            extend_cones(cat, d, apex, legs, out);
        }
        legs.pop();
    }
}

/// Number of `x: from.apex → onto.apex` with `onto.legs[i] ∘ x = from.legs[i]`,
/// capped at 2.
pub fn factorization_count(cat: &FinCategory, from: &Cone, onto: &Cone) -> usize {
    let mut count = 0;
    for &x in cat.hom(from.apex, onto.apex) {
        if onto
            .legs
            .iter()
            .zip(&from.legs)
            .all(|(&l, &k)| cat.compose(l, x) == k)
        {
            count += 1;
            if count == 2 {
                break;
            }
        }
    }
    count
}

/// Cones through which every cone factors (uniquely, in strict mode).
pub fn limit_cones(cat: &FinCategory, d: &Diagram, mode: Mode) -> Vec<Cone> {
    debug_assert!(d.is_valid(cat));
    let all = cones(cat, d);
    all.iter()
        .filter(|l| {
            all.iter()
                .all(|k| match (mode, factorization_count(cat, k, l)) {
                    (_, 0) => false,
                    (Mode::Weak, _) => true,
                    (Mode::Strict, n) => n == 1,
                })
        })
        .cloned()
        .collect()
}

pub fn terminal_objects(cat: &FinCategory, mode: Mode) -> Vec<ObjId> {
    limit_cones(cat, &Diagram::empty(), mode)
        .into_iter()
        .map(|c| c.apex)
        .collect()
}

pub fn products(cat: &FinCategory, x: ObjId, y: ObjId, mode: Mode) -> Vec<Cone> {
    limit_cones(cat, &Diagram::discrete(&[x, y]), mode)
}

/// Equalizing morphisms `e` of the pair.
pub fn equalizers(cat: &FinCategory, p: ParallelPair, mode: Mode) -> Vec<MorId> {
    limit_cones(cat, &Diagram::parallel(cat, p), mode)
        .into_iter()
        .map(|c| c.legs[0])
        .collect()
}

/// Pullback projections `(p1, p2)` of `f` and `g` onto `dom f`, `dom g`.
pub fn pullbacks(cat: &FinCategory, f: MorId, g: MorId, mode: Mode) -> Vec<Span> {
    limit_cones(cat, &Diagram::cospan(cat, f, g), mode)
        .into_iter()
        .map(|c| Span {
            apex: c.apex,
            p1: c.legs[0],
            p2: c.legs[1],
        })
        .collect()
}

/// Two projections out of a common apex (a span).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub apex: ObjId,
    pub p1: MorId,
    pub p2: MorId,
}

/// Kernel pairs of `f`: pullbacks of `f` against itself.
pub fn kernel_pairs(cat: &FinCategory, f: MorId, mode: Mode) -> Vec<ParallelPair> {
    pullbacks(cat, f, f, mode)
        .into_iter()
        .map(|s| ParallelPair::new(s.p1, s.p2))
        .collect()
}

pub fn kernel_pair(cat: &FinCategory, f: MorId, mode: Mode) -> Option<ParallelPair> {
    kernel_pairs(cat, f, mode).into_iter().next()
}

pub fn has_weak_finite_limits(cat: &FinCategory) -> bool {
    weak_finite_limits_gap(cat).is_none()
}

/// The first missing weak terminal object, weak product or weak equalizer.
pub fn weak_finite_limits_gap(cat: &FinCategory) -> Option<String> {
    if terminal_objects(cat, Mode::Weak).is_empty() {
        return Some("no weak terminal object".into());
    }
    for x in cat.objects() {
        for y in cat.objects() {
            if products(cat, x, y, Mode::Weak).is_empty() {
                return Some(format!(
                    "no weak product of {} and {}",
                    cat.object_name(x),
                    cat.object_name(y)
                ));
            }
        }
    }
    for p in cat.parallel_pairs() {
        if equalizers(cat, p, Mode::Weak).is_empty() {
            return Some(format!("no weak equalizer of {}", cat.describe_pair(p)));
        }
    }
    None
}

/// True when `q` coequalizes `p` and every `g` coequalizing `p` factors
/// uniquely through `q`.
pub fn is_coequalizer_of(cat: &FinCategory, q: MorId, p: ParallelPair) -> bool {
    coequalizer_violation(cat, q, p).is_none()
}

/// Why `q` fails to be a coequalizer of `p`, or `None` if it is one.
pub fn coequalizer_violation(cat: &FinCategory, q: MorId, p: ParallelPair) -> Option<String> {
    let y = cat.cod(p.f1);
    if cat.dom(q) != y {
        return Some("domain mismatch".into());
    }
    if cat.compose(q, p.f1) != cat.compose(q, p.f2) {
        return Some(format!(
            "{} does not coequalize the pair",
            cat.morphism_name(q)
        ));
    }
    for g in cat.out_of(y) {
        if cat.compose(g, p.f1) != cat.compose(g, p.f2) {
            continue;
        }
        let count = cat
            .hom(cat.cod(q), cat.cod(g))
            .iter()
            .filter(|&&x| cat.compose(x, q) == g)
            .take(2)
            .count();
        if count != 1 {
            return Some(format!(
                "{} factors through {} in {} ways",
                cat.morphism_name(g),
                cat.morphism_name(q),
                if count == 0 { "0" } else { "several" }
            ));
        }
    }
    None
}

pub fn coequalizers(cat: &FinCategory, p: ParallelPair) -> Vec<MorId> {
    cat.out_of(cat.cod(p.f1))
        .filter(|&q| is_coequalizer_of(cat, q, p))
        .collect()
}

pub fn coequalizer(cat: &FinCategory, p: ParallelPair) -> Option<MorId> {
    coequalizers(cat, p).into_iter().next()
}

/// The first parallel pair into `dom f` that `f` is a coequalizer of.
pub fn regular_epi_witness(cat: &FinCategory, f: MorId) -> Option<ParallelPair> {
    if !cat.is_epi(f) {
        return None;
    }
    let x = cat.dom(f);
    for z in cat.objects() {
        let hom = cat.hom(z, x);
        for &u in hom {
            for &v in hom {
                let p = ParallelPair::new(u, v);
                if cat.compose(f, u) == cat.compose(f, v) && is_coequalizer_of(cat, f, p) {
                    return Some(p);
                }
            }
        }
    }
    None
}

pub fn is_regular_epi(cat: &FinCategory, f: MorId) -> bool {
    cat.derived.regular_epi.get_or_init(|| {
        cat.morphisms()
            .map(|g| regular_epi_witness(cat, g).is_some())
            .collect()
    })[f.index()]
}

pub fn regular_epis(cat: &FinCategory) -> impl Iterator<Item = MorId> + '_ {
    cat.morphisms().filter(move |&f| is_regular_epi(cat, f))
}

/// `f = m ∘ e` with `e` a regular epimorphism and `m` a monomorphism.
pub fn image_factorization(cat: &FinCategory, f: MorId) -> Option<(MorId, MorId)> {
    let (x, y) = (cat.dom(f), cat.cod(f));
    for mid in cat.objects() {
        for &e in cat.hom(x, mid) {
            if !is_regular_epi(cat, e) {
                continue;
            }
            for &m in cat.hom(mid, y) {
                if cat.compose(m, e) == f && cat.is_mono(m) {
                    return Some((e, m));
                }
            }
        }
    }
    None
}

/// Regularity: finite limits, coequalizers of kernel pairs, pullback-stable
/// regular epimorphisms. Fails at the first violated clause.
pub fn is_regular_category(cat: &FinCategory) -> Report {
    cat.derived
        .regular
        .get_or_init(|| regularity_search(cat))
        .clone()
}

fn regularity_search(cat: &FinCategory) -> Report {
    const NAME: &str = "regular";
    if terminal_objects(cat, Mode::Strict).is_empty() {
        return Report::fail(NAME, "(i) no terminal object");
    }
    for x in cat.objects() {
        for y in cat.objects() {
            if products(cat, x, y, Mode::Strict).is_empty() {
                return Report::fail(
                    NAME,
                    format!(
                        "(i) no product {}×{}",
                        cat.object_name(x),
                        cat.object_name(y)
                    ),
                );
            }
        }
    }
    for p in cat.parallel_pairs() {
        if equalizers(cat, p, Mode::Strict).is_empty() {
            return Report::fail(
                NAME,
                format!("(i) no equalizer of {}", cat.describe_pair(p)),
            );
        }
    }
    for f in cat.morphisms() {
        let Some(kp) = kernel_pair(cat, f, Mode::Strict) else {
            return Report::error(
                NAME,
                format!(
                    "finite limits but no kernel pair of {}",
                    cat.morphism_name(f)
                ),
            );
        };
        if coequalizer(cat, kp).is_none() {
            return Report::fail(
                NAME,
                format!(
                    "(ii) kernel pair {} of {} has no coequalizer",
                    cat.describe_pair(kp),
                    cat.morphism_name(f)
                ),
            );
        }
    }
    for e in regular_epis(cat) {
        for g in cat.into_object(cat.cod(e)) {
            let Some(pb) = pullbacks(cat, e, g, Mode::Strict).into_iter().next() else {
                return Report::error(
                    NAME,
                    format!(
                        "finite limits but no pullback of {} along {}",
                        cat.morphism_name(e),
                        cat.morphism_name(g)
                    ),
                );
            };
            if !is_regular_epi(cat, pb.p2) {
                return Report::fail(
                    NAME,
                    format!(
                        "(iii) regular epi {} pulled back along {} gives {}, not a regular epi",
                        cat.morphism_name(e),
                        cat.morphism_name(g),
                        cat.morphism_name(pb.p2)
                    ),
                );
            }
        }
    }
    Report::pass(NAME)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{validate_category, RawCategory};

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
    fn chain3_terminal_is_top() {
        let c = chain3();
        assert_eq!(terminal_objects(&c, Mode::Strict), vec![ObjId(2)]);
    }

    #[test]
    fn strict_limits_are_weak_limits() {
        let c = chain3();
        for x in c.objects() {
            for y in c.objects() {
                let weak = products(&c, x, y, Mode::Weak);
                for s in products(&c, x, y, Mode::Strict) {
                    assert!(weak.contains(&s));
                }
            }
        }
    }

    #[test]
    fn chain3_is_regular() {
        let c = chain3();
        assert!(is_regular_category(&c).passed());
        assert!(has_weak_finite_limits(&c));
        let f01 = c.find_morphism("f01").unwrap();
        assert!(!is_regular_epi(&c, f01));
    }
}
