//! Stars of parallel pairs, condition (∗π₀), star-regularity and normality.
//!
//! The star of `(f1, f2)` is `(f1 ∘ k, f2 ∘ k)` for `k` an N-kernel of the
//! first leg. The pair satisfies (∗π₀) when every `g` coequalizing its star
//! already coequalizes the pair.

use thiserror::Error;

use crate::fincat::{
    enumerate_reflexive_graphs, is_jointly_monic, FinCategory, MorId, ParallelPair, ReflexiveGraph,
};
use crate::ideals::{kernels, missing_kernel, pointed_ideal, MultiPointed};
use crate::limits::{
    coequalizer, coequalizer_violation, is_regular_category, is_regular_epi, kernel_pair,
    kernel_pairs, regular_epis, Mode,
};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StarError {
    #[error("NoWeakKernel: {0} has no weak N-kernel")]
    NoWeakKernel(String),
    #[error("NoKernelPair: {0} has no kernel pair")]
    NoKernelPair(String),
    #[error("NoKernel: {0} has no N-kernel")]
    NoKernel(String),
    #[error("NotPointed: {0}")]
    NotPointed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StarWitness {
    pub pair: ParallelPair,
    pub k: MorId,
    pub star: ParallelPair,
}

impl StarWitness {
    pub fn new(cat: &FinCategory, pair: ParallelPair, k: MorId) -> Self {
        StarWitness {
            pair,
            k,
            star: ParallelPair::new(cat.compose(pair.f1, k), cat.compose(pair.f2, k)),
        }
    }
}

/// Verdict of (∗π₀) on one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pi0 {
    Holds,
    /// `g` coequalizes the star but not the pair.
    Fails {
        g: MorId,
    },
    /// The first leg has no weak kernel.
    NotEvaluable,
}

impl Pi0 {
    pub fn holds(self) -> bool {
        self == Pi0::Holds
    }
}

/// One witness per (weak or strict) N-kernel of the first leg.
pub fn star_of(m: MultiPointed, p: ParallelPair, mode: Mode) -> Vec<StarWitness> {
    m.kernels(p.f1, mode)
        .into_iter()
        .map(|k| StarWitness::new(m.cat, p, k))
        .collect()
}

/// (∗π₀) evaluated against one particular star. Only `⇒` is searched; the
/// converse holds in any category.
pub fn pi0_against(cat: &FinCategory, w: &StarWitness) -> Pi0 {
    let (f1, f2) = (w.pair.f1, w.pair.f2);
    for g in cat.out_of(cat.cod(f1)) {
        if cat.compose(g, w.star.f1) == cat.compose(g, w.star.f2)
            && cat.compose(g, f1) != cat.compose(g, f2)
        {
            return Pi0::Fails { g };
        }
    }
    Pi0::Holds
}

/// (∗π₀) for one weak star, the first in kernel order.
pub fn star_pi0(m: MultiPointed, p: ParallelPair) -> Pi0 {
    match m.kernels(p.f1, Mode::Weak).first() {
        Some(&k) => pi0_against(m.cat, &StarWitness::new(m.cat, p, k)),
        None => Pi0::NotEvaluable,
    }
}

pub fn satisfies_star_pi0(m: MultiPointed, p: ParallelPair) -> Result<Report, StarError> {
    const NAME: &str = "star-pi0";
    let cat = m.cat;
    match star_pi0(m, p) {
        Pi0::Holds => Ok(Report::pass(NAME).with_witness(format!("pair {}", cat.describe_pair(p)))),
        Pi0::Fails { g } => Ok(Report::fail(
            NAME,
            format!(
                "pair {}: {} coequalizes the star but not the pair",
                cat.describe_pair(p),
                cat.morphism_name(g)
            ),
        )),
        Pi0::NotEvaluable => Err(StarError::NoWeakKernel(cat.morphism_name(p.f1).to_string())),
    }
}

fn describe_graph(cat: &FinCategory, g: &ReflexiveGraph) -> String {
    format!(
        "(d, c, e) = ({}, {}, {})",
        cat.morphism_name(g.d),
        cat.morphism_name(g.c),
        cat.morphism_name(g.e)
    )
}

/// First reflexive graph whose underlying pair fails (∗π₀), with the
/// separating morphism. `Err` if some `d` has no weak kernel.
pub fn reflexive_graph_pi0_failure(
    m: MultiPointed,
) -> Result<Option<(ReflexiveGraph, MorId)>, StarError> {
    for g in enumerate_reflexive_graphs(m.cat) {
        match star_pi0(m, g.pair()) {
            Pi0::Holds => {}
            Pi0::Fails { g: sep } => return Ok(Some((g, sep))),
            Pi0::NotEvaluable => {
                return Err(StarError::NoWeakKernel(
                    m.cat.morphism_name(g.d).to_string(),
                ))
            }
        }
    }
    Ok(None)
}

fn pi0_failure_line(cat: &FinCategory, graph: &ReflexiveGraph, sep: MorId) -> String {
    format!(
        "reflexive graph {} fails (∗π₀) at g = {}",
        describe_graph(cat, graph),
        cat.morphism_name(sep)
    )
}

/// Truth values of the four conditions on reflexive graphs and kernel pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphConditions {
    /// Every reflexive graph satisfies (∗π₀).
    pub reflexive_graphs: bool,
    /// Every weak kernel pair satisfies (∗π₀).
    pub weak_kernel_pairs: bool,
    /// Every reflexive relation satisfies (∗π₀); only when kernel pairs exist.
    pub reflexive_relations: Option<bool>,
    /// Every kernel pair satisfies (∗π₀); only when kernel pairs exist.
    pub kernel_pairs: Option<bool>,
    /// One witness line per condition found false.
    pub witnesses: Vec<String>,
}

impl GraphConditions {
    pub fn agree(&self) -> bool {
        let a = self.reflexive_graphs;
        a == self.weak_kernel_pairs
            && self.reflexive_relations.is_none_or(|c| c == a)
            && self.kernel_pairs.is_none_or(|d| d == a)
    }
}

/// Hypotheses of the reflexive-graph theorem: weak kernels and weak kernel
/// pairs everywhere. Returns the first missing datum.
pub fn graph_conditions_gap(m: MultiPointed) -> Option<String> {
    if let Some(f) = m.missing_kernel(Mode::Weak) {
        return Some(format!("{} has no weak N-kernel", m.cat.morphism_name(f)));
    }
    m.cat
        .morphisms()
        .find(|&f| kernel_pairs(m.cat, f, Mode::Weak).is_empty())
        .map(|f| format!("{} has no weak kernel pair", m.cat.morphism_name(f)))
}

pub fn evaluate_graph_conditions(m: MultiPointed) -> Result<GraphConditions, String> {
    if let Some(gap) = graph_conditions_gap(m) {
        return Err(gap);
    }
    let cat = m.cat;
    let mut witnesses = Vec::new();
    let graphs = enumerate_reflexive_graphs(cat);
    let verdicts: Vec<Pi0> = graphs.iter().map(|g| star_pi0(m, g.pair())).collect();

    let reflexive_graphs = match graphs.iter().zip(&verdicts).find(|(_, v)| !v.holds()) {
        Some((g, Pi0::Fails { g: sep })) => {
            witnesses.push(format!("(a) false: {}", pi0_failure_line(cat, g, *sep)));
            false
        }
        Some(_) => return Err("reflexive graph without a weak kernel".into()),
        None => true,
    };

    let pair_failure = |pairs: Vec<(MorId, ParallelPair)>| {
        pairs.into_iter().find_map(|(f, p)| match star_pi0(m, p) {
            Pi0::Fails { g } => Some(format!(
                "pair {} of {} fails (∗π₀) at g = {}",
                cat.describe_pair(p),
                cat.morphism_name(f),
                cat.morphism_name(g)
            )),
            _ => None,
        })
    };

    let weak_failure = pair_failure(
        cat.morphisms()
            .flat_map(|f| {
                kernel_pairs(cat, f, Mode::Weak)
                    .into_iter()
                    .map(move |p| (f, p))
            })
            .collect(),
    );
    if let Some(w) = &weak_failure {
        witnesses.push(format!("(b) false: weak kernel {w}"));
    }

    let has_kernel_pairs = cat
        .morphisms()
        .all(|f| kernel_pair(cat, f, Mode::Strict).is_some());
    let (reflexive_relations, kernel_pairs_value) = if has_kernel_pairs {
        let rel_failure = graphs
            .iter()
            .zip(&verdicts)
            .find(|(g, v)| !v.holds() && is_jointly_monic(cat, g.pair()));
        if let Some((g, Pi0::Fails { g: sep })) = rel_failure {
            witnesses.push(format!("(c) false: {}", pi0_failure_line(cat, g, *sep)));
        }
        let strict_failure = pair_failure(
            cat.morphisms()
                .flat_map(|f| {
                    kernel_pairs(cat, f, Mode::Strict)
                        .into_iter()
                        .map(move |p| (f, p))
                })
                .collect(),
        );
        if let Some(w) = &strict_failure {
            witnesses.push(format!("(d) false: kernel {w}"));
        }
        (Some(rel_failure.is_none()), Some(strict_failure.is_none()))
    } else {
        (None, None)
    };

    Ok(GraphConditions {
        reflexive_graphs,
        weak_kernel_pairs: weak_failure.is_none(),
        reflexive_relations,
        kernel_pairs: kernel_pairs_value,
        witnesses,
    })
}

/// All evaluated conditions agree. Inapplicable when weak kernels or weak
/// kernel pairs are missing.
pub fn check_theorem_a(m: MultiPointed) -> Report {
    const NAME: &str = "theorem-a";
    match evaluate_graph_conditions(m) {
        Err(gap) => Report::inapplicable(NAME, gap),
        Ok(v) => {
            let fmt = |b: Option<bool>| match b {
                Some(true) => "true",
                Some(false) => "false",
                None => "n/a",
            };
            let summary = format!(
                "(a) {} (b) {} (c) {} (d) {}",
                fmt(Some(v.reflexive_graphs)),
                fmt(Some(v.weak_kernel_pairs)),
                fmt(v.reflexive_relations),
                fmt(v.kernel_pairs)
            );
            let mut report = if v.agree() {
                Report::pass(NAME).with_witness(summary)
            } else {
                Report::fail(NAME, format!("conditions disagree: {summary}"))
            };
            report.witnesses.extend(v.witnesses);
            report
        }
    }
}

/// Star of the (first) kernel pair of `f`, using a strict kernel of the first
/// projection.
pub fn kernel_star(m: MultiPointed, f: MorId) -> Result<StarWitness, StarError> {
    let cat = m.cat;
    let kp = kernel_pair(cat, f, Mode::Strict)
        .ok_or_else(|| StarError::NoKernelPair(cat.morphism_name(f).to_string()))?;
    let k = *m
        .kernels(kp.f1, Mode::Strict)
        .first()
        .ok_or_else(|| StarError::NoKernel(cat.morphism_name(kp.f1).to_string()))?;
    Ok(StarWitness::new(cat, kp, k))
}

/// Hypotheses under which "regular epis coequalize their kernel stars" is
/// compared against (∗π₀) for reflexive graphs: kernel pairs, kernels, and
/// coequalizers of kernel pairs.
pub fn kernel_star_clause_gap(m: MultiPointed) -> Option<String> {
    let cat = m.cat;
    for f in cat.morphisms() {
        let Some(kp) = kernel_pair(cat, f, Mode::Strict) else {
            return Some(format!("{} has no kernel pair", cat.morphism_name(f)));
        };
        if coequalizer(cat, kp).is_none() {
            return Some(format!(
                "kernel pair of {} has no coequalizer",
                cat.morphism_name(f)
            ));
        }
    }
    m.missing_kernel(Mode::Strict)
        .map(|f| format!("{} has no N-kernel", cat.morphism_name(f)))
}

/// First regular epi that is not a coequalizer of its kernel star. Requires
/// the hypotheses of [`kernel_star_clause_gap`].
pub fn kernel_star_clause_failure(m: MultiPointed) -> Result<Option<String>, StarError> {
    let cat = m.cat;
    for f in regular_epis(cat) {
        let ks = kernel_star(m, f)?;
        if let Some(why) = coequalizer_violation(cat, f, ks.star) {
            return Ok(Some(format!(
                "regular epi {} is not a coequalizer of its kernel star {} (k = {}): {why}",
                cat.describe(f),
                cat.describe_pair(ks.star),
                cat.morphism_name(ks.k)
            )));
        }
    }
    Ok(None)
}

/// The same clause with the kernel taken on the second projection.
fn symmetric_kernel_star_clause_holds(m: MultiPointed) -> Result<bool, StarError> {
    let cat = m.cat;
    for f in regular_epis(cat) {
        let kp = kernel_pair(cat, f, Mode::Strict)
            .ok_or_else(|| StarError::NoKernelPair(cat.morphism_name(f).to_string()))?;
        let flipped = ParallelPair::new(kp.f2, kp.f1);
        let k = *m
            .kernels(flipped.f1, Mode::Strict)
            .first()
            .ok_or_else(|| StarError::NoKernel(cat.morphism_name(flipped.f1).to_string()))?;
        let w = StarWitness::new(cat, flipped, k);
        if coequalizer_violation(cat, f, w.star).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Regular epis coequalize their kernel stars iff every reflexive graph
/// satisfies (∗π₀), wherever kernel pairs, kernels and coequalizers of kernel
/// pairs exist.
pub fn check_corollary_a(m: MultiPointed) -> Report {
    const NAME: &str = "corollary-a";
    if let Some(gap) = kernel_star_clause_gap(m) {
        return Report::inapplicable(NAME, gap);
    }
    let clause = match kernel_star_clause_failure(m) {
        Ok(c) => c,
        Err(e) => return Report::error(NAME, e.to_string()),
    };
    let graphs = match reflexive_graph_pi0_failure(m) {
        Ok(g) => g,
        Err(e) => return Report::error(NAME, e.to_string()),
    };
    let symmetric = match symmetric_kernel_star_clause_holds(m) {
        Ok(s) => s,
        Err(e) => return Report::error(NAME, e.to_string()),
    };
    let clause_holds = clause.is_none();
    let graphs_hold = graphs.is_none();
    if clause_holds == graphs_hold && symmetric == clause_holds {
        Report::pass(NAME).with_witness(format!(
            "both sides {}",
            if clause_holds { "true" } else { "false" }
        ))
    } else {
        let mut r = Report::fail(
            NAME,
            format!(
                "kernel-star clause {clause_holds}, symmetric variant {symmetric}, reflexive graphs {graphs_hold}"
            ),
        );
        r.witnesses.extend(clause);
        if let Some((g, sep)) = graphs {
            r.witnesses.push(pi0_failure_line(m.cat, &g, sep));
        }
        r
    }
}

/// Regular, with N-kernels, and every regular epi a coequalizer of its
/// kernel star. The last clause is cross-checked against (∗π₀) on reflexive
/// graphs; a disagreement is reported as an error.
pub fn is_star_regular(m: MultiPointed) -> Report {
    const NAME: &str = "star-regular";
    let cat = m.cat;
    let regular = is_regular_category(cat);
    if !regular.passed() {
        return Report::fail(
            NAME,
            format!("not regular: {}", regular.witnesses.join("; ")),
        );
    }
    if let Some(f) = m.missing_kernel(Mode::Strict) {
        return Report::fail(
            NAME,
            format!("(ii) {} has no N-kernel", cat.morphism_name(f)),
        );
    }
    let clause = match kernel_star_clause_failure(m) {
        Ok(c) => c,
        Err(e) => return Report::error(NAME, e.to_string()),
    };
    let graphs = match reflexive_graph_pi0_failure(m) {
        Ok(g) => g,
        Err(e) => return Report::error(NAME, e.to_string()),
    };
    match (clause, graphs) {
        (None, None) => Report::pass(NAME),
        (Some(why), Some((g, sep))) => {
            Report::fail(NAME, format!("(iii) {why}")).with_witness(pi0_failure_line(cat, &g, sep))
        }
        (None, Some((g, sep))) => Report::error(
            NAME,
            format!(
                "cross-check: kernel stars coequalized but {}",
                pi0_failure_line(cat, &g, sep)
            ),
        ),
        (Some(why), None) => Report::error(
            NAME,
            format!("cross-check: reflexive graphs satisfy (∗π₀) but {why}"),
        ),
    }
}

/// Star-regularity at the pointed ideal.
pub fn is_normal_category(cat: &FinCategory) -> Result<Report, StarError> {
    let pointed = pointed_ideal(cat).ok_or_else(|| {
        let empty = cat
            .objects()
            .flat_map(|x| cat.objects().map(move |y| (x, y)))
            .find(|&(x, y)| cat.hom(x, y).is_empty());
        StarError::NotPointed(match empty {
            Some((x, y)) => format!(
                "hom({}, {}) is empty",
                cat.object_name(x),
                cat.object_name(y)
            ),
            None => "no ideal with exactly one morphism per hom-set".into(),
        })
    })?;
    let mut r = is_star_regular(MultiPointed::new(cat, &pointed));
    r.property = "normal".into();
    Ok(r)
}

/// Hypotheses for the weak variant: weak kernels, weak kernel pairs, and
/// coequalizers of all weak kernel pairs.
pub fn corollary_d_gap(m: MultiPointed) -> Option<String> {
    let cat = m.cat;
    if let Some(f) = m.missing_kernel(Mode::Weak) {
        return Some(format!("{} has no weak N-kernel", cat.morphism_name(f)));
    }
    for f in cat.morphisms() {
        let pairs = kernel_pairs(cat, f, Mode::Weak);
        if pairs.is_empty() {
            return Some(format!("{} has no weak kernel pair", cat.morphism_name(f)));
        }
        if let Some(p) = pairs.iter().find(|&&p| coequalizer(cat, p).is_none()) {
            return Some(format!(
                "weak kernel pair {} of {} has no coequalizer",
                cat.describe_pair(*p),
                cat.morphism_name(f)
            ));
        }
    }
    None
}

/// Every regular epi is a coequalizer of a weak star of one of its weak kernel
/// pairs iff every reflexive graph satisfies (∗π₀).
pub fn check_corollary_d(m: MultiPointed) -> Report {
    const NAME: &str = "corollary-d";
    let cat = m.cat;
    if let Some(gap) = corollary_d_gap(m) {
        return Report::inapplicable(NAME, gap);
    }
    let lhs_failure = regular_epis(cat).find(|&f| {
        !kernel_pairs(cat, f, Mode::Weak).into_iter().any(|p| {
            star_of(m, p, Mode::Weak)
                .iter()
                .any(|w| coequalizer_violation(cat, f, w.star).is_none())
        })
    });
    let rhs = match reflexive_graph_pi0_failure(m) {
        Ok(r) => r,
        Err(e) => return Report::error(NAME, e.to_string()),
    };
    let lhs_holds = lhs_failure.is_none();
    if lhs_holds == rhs.is_none() {
        let mut r = Report::pass(NAME).with_witness(format!(
            "both sides {}",
            if lhs_holds { "true" } else { "false" }
        ));
        if let Some(f) = lhs_failure {
            r.witnesses.push(format!(
                "regular epi {} coequalizes no weak kernel star",
                cat.describe(f)
            ));
        }
        r
    } else {
        let mut r = Report::fail(
            NAME,
            format!(
                "weak kernel stars {lhs_holds}, reflexive graphs {}",
                rhs.is_none()
            ),
        );
        if let Some(f) = lhs_failure {
            r.witnesses.push(format!("regular epi {}", cat.describe(f)));
        }
        if let Some((g, sep)) = rhs {
            r.witnesses.push(pi0_failure_line(cat, &g, sep));
        }
        r
    }
}

/// Regular epis of `cat` (for diagnostics).
pub fn regular_epi_names(cat: &FinCategory) -> Vec<String> {
    cat.morphisms()
        .filter(|&f| is_regular_epi(cat, f))
        .map(|f| cat.morphism_name(f).to_string())
        .collect()
}

/// Distinct verdicts of (∗π₀) across every weak star of `p`.
pub fn pi0_verdicts_across_stars(m: MultiPointed, p: ParallelPair) -> Vec<bool> {
    let mut out: Vec<bool> = star_of(m, p, Mode::Weak)
        .iter()
        .map(|w| pi0_against(m.cat, w).holds())
        .collect();
    out.dedup();
    out.sort();
    out.dedup();
    out
}

/// All N-kernels of `f` in the given mode; re-exported for convenience.
pub fn kernels_of(m: MultiPointed, f: MorId, mode: Mode) -> Vec<MorId> {
    kernels(m.cat, m.ideal, f, mode)
}

/// True if `cat` has N-kernels everywhere in the given mode.
pub fn admits_kernels(m: MultiPointed, mode: Mode) -> bool {
    missing_kernel(m.cat, m.ideal, mode).is_none()
}
