//! Verifiers for how restriction and extension of ideals interact with
//! kernels and saturating regular epimorphisms.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cover::{extend_ideal, is_projective_cover, restrict_ideal, saturation_violation};
use super::{enumerate_ideals, ideal_closure, missing_kernel, CoverWitness, Ideal, IdealError};
use crate::fincat::{FinCategory, MorId};
use crate::limits::{is_regular_category, regular_epis, Mode};
use crate::report::Report;

fn precondition(w: &CoverWitness, property: &str) -> Option<Report> {
    let regular = is_regular_category(w.cat);
    if !regular.passed() {
        return Some(Report::inapplicable(
            property,
            format!("category is not regular: {}", regular.witnesses.join("; ")),
        ));
    }
    let cover = is_projective_cover(w);
    if !cover.passed() {
        return Some(Report::inapplicable(
            property,
            format!(
                "{} is not a projective cover: {}",
                w.describe(),
                cover.witnesses.join("; ")
            ),
        ));
    }
    None
}

/// A regular epimorphism that is not N-saturating, with the null morphism it
/// fails to saturate.
fn unsaturated_regular_epi(cat: &FinCategory, ideal: &Ideal) -> Option<(MorId, MorId)> {
    regular_epis(cat).find_map(|e| saturation_violation(cat, ideal, e).map(|n| (e, n)))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Checks the five statements relating `N_P` (an ideal of the cover) and
/// `N_C` (an ideal of the ambient category). Each part is reported on its own;
/// a conditional part whose hypothesis fails passes as vacuous.
pub fn verify_lemma_a(w: &CoverWitness, n_p: &Ideal, n_c: &Ideal) -> Report {
    const NAME: &str = "lemma-a";
    if let Some(r) = precondition(w, NAME) {
        return r;
    }
    let cat = w.cat;
    let sub = w.sub();
    let ext_p = match extend_ideal(w, n_p) {
        Ok(i) => i,
        Err(e) => return Report::error(NAME, e.to_string()),
    };
    let res_c = restrict_ideal(w, n_c);
    let ext_res_c = match extend_ideal(w, &res_c) {
        Ok(i) => i,
        Err(e) => return Report::error(NAME, e.to_string()),
    };
    let mut parts = Vec::new();

    // (a) restricting the extension gives back the cover ideal.
    let back = restrict_ideal(w, &ext_p);
    parts.push(if back == *n_p {
        Report::pass("lemma-a.a")
    } else {
        Report::fail(
            "lemma-a.a",
            format!(
                "restrict(extend(N_P)) = {} but N_P = {}",
                back.describe(sub),
                n_p.describe(sub)
            ),
        )
    });

    // (b) weak N_P-kernels in the cover iff N_P^C-kernels in the category.
    let weak_gap = missing_kernel(sub, n_p, Mode::Weak);
    let strict_gap = missing_kernel(cat, &ext_p, Mode::Strict);
    parts.push(if weak_gap.is_none() == strict_gap.is_none() {
        Report::pass("lemma-a.b").with_witness(format!(
            "weak N_P-kernels in cover: {}; N_P^C-kernels in category: {}",
            yes_no(weak_gap.is_none()),
            yes_no(strict_gap.is_none())
        ))
    } else {
        let detail = match (weak_gap, strict_gap) {
            (Some(f), None) => format!(
                "category has N_P^C-kernels but {} has no weak N_P-kernel in the cover",
                sub.morphism_name(f)
            ),
            (None, Some(f)) => format!(
                "cover has weak N_P-kernels but {} has no N_P^C-kernel",
                cat.morphism_name(f)
            ),
            _ => unreachable!(),
        };
        Report::fail("lemma-a.b", detail)
    });

    // (c) N_C-kernels give weak kernels downstairs and (N_C)_P^C ⊆ N_C.
    parts.push(match missing_kernel(cat, n_c, Mode::Strict) {
        Some(f) => Report::pass("lemma-a.c").with_witness(format!(
            "vacuous: {} has no N_C-kernel",
            cat.morphism_name(f)
        )),
        None => {
            if let Some(f) = missing_kernel(sub, &res_c, Mode::Weak) {
                Report::fail(
                    "lemma-a.c",
                    format!(
                        "{} has no weak (N_C)_P-kernel in the cover",
                        sub.morphism_name(f)
                    ),
                )
            } else if !ext_res_c.is_subset(n_c) {
                let f = ext_res_c.members().find(|&f| !n_c.contains(f)).unwrap();
                Report::fail(
                    "lemma-a.c",
                    format!("{} is in ((N_C)_P)^C but not in N_C", cat.morphism_name(f)),
                )
            } else {
                Report::pass("lemma-a.c")
            }
        }
    });

    // (d) N_C ⊆ ((N_C)_P)^C iff regular epis are N_C-saturating.
    let contained = n_c.is_subset(&ext_res_c);
    let unsaturated = unsaturated_regular_epi(cat, n_c);
    parts.push(if contained == unsaturated.is_none() {
        Report::pass("lemma-a.d").with_witness(format!("N_C ⊆ ((N_C)_P)^C: {}", yes_no(contained)))
    } else {
        let detail = match unsaturated {
            Some((e, n)) => format!(
                "N_C ⊆ ((N_C)_P)^C holds but regular epi {} does not saturate {}",
                cat.morphism_name(e),
                cat.morphism_name(n)
            ),
            None => {
                let f = n_c.members().find(|&f| !ext_res_c.contains(f)).unwrap();
                format!(
                    "regular epis are N_C-saturating but {} is not in ((N_C)_P)^C",
                    cat.morphism_name(f)
                )
            }
        };
        Report::fail("lemma-a.d", detail)
    });

    // (e) regular epis saturate every extended ideal.
    parts.push(match unsaturated_regular_epi(cat, &ext_p) {
        None => Report::pass("lemma-a.e"),
        Some((e, n)) => Report::fail(
            "lemma-a.e",
            format!(
                "regular epi {} does not saturate {} in N_P^C",
                cat.morphism_name(e),
                cat.morphism_name(n)
            ),
        ),
    });

    Report::from_parts(NAME, parts)
}

/// Membership of an ideal of the ambient category in the two sublattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IdealClass {
    /// Regular epimorphisms are N-saturating.
    pub saturating: bool,
    /// Every morphism has an N-kernel.
    pub kernels: bool,
}

pub fn classify_ideal(cat: &FinCategory, ideal: &Ideal) -> IdealClass {
    IdealClass {
        saturating: unsaturated_regular_epi(cat, ideal).is_none(),
        kernels: missing_kernel(cat, ideal, Mode::Strict).is_none(),
    }
}

/// Full check over both ideal lattices. Fails with `BoundExceeded` when either
/// category is too large to enumerate.
pub fn verify_galois_and_iso(w: &CoverWitness, bound: usize) -> Result<Report, IdealError> {
    let ideals_c = enumerate_ideals(w.cat, bound)?;
    let ideals_p = enumerate_ideals(w.sub(), bound)?;
    Ok(galois_report(w, &ideals_c, &ideals_p, false))
}

/// The same checks over sampled ideals: all principal ideals, the empty and
/// total ideals, and `samples` closures of random generator sets.
pub fn verify_galois_sampled(w: &CoverWitness, seed: u64, samples: usize) -> Report {
    let ideals_c = sample_ideals(w.cat, seed, samples);
    let ideals_p = sample_ideals(w.sub(), seed.wrapping_add(1), samples);
    galois_report(w, &ideals_c, &ideals_p, true)
}

/// The empty and total ideals, every principal ideal, and `samples` random
/// ideals generated by up to three morphisms, without repeats.
pub fn sample_ideals(cat: &FinCategory, seed: u64, samples: usize) -> Vec<Ideal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![Ideal::empty(cat), Ideal::total(cat)];
    out.extend(cat.morphisms().map(|g| ideal_closure(cat, [g])));
    let all: Vec<MorId> = cat.morphisms().collect();
    for _ in 0..samples {
        let k = rng.gen_range(1..=3.min(all.len().max(1)));
        let gens: Vec<MorId> = all.choose_multiple(&mut rng, k).copied().collect();
        out.push(ideal_closure(cat, gens));
    }
    let mut dedup = Vec::new();
    for i in out {
        if !dedup.contains(&i) {
            dedup.push(i);
        }
    }
    dedup
}

struct Lattices<'w, 'a> {
    w: &'w CoverWitness<'a>,
    class_c: HashMap<Ideal, IdealClass>,
    weak_p: HashMap<Ideal, bool>,
    ext: HashMap<Ideal, Result<Ideal, IdealError>>,
}

impl Lattices<'_, '_> {
    fn class_c(&mut self, i: &Ideal) -> IdealClass {
        let cat = self.w.cat;
        *self
            .class_c
            .entry(i.clone())
            .or_insert_with(|| classify_ideal(cat, i))
    }

    fn weak_p(&mut self, i: &Ideal) -> bool {
        let sub = self.w.sub();
        *self
            .weak_p
            .entry(i.clone())
            .or_insert_with(|| missing_kernel(sub, i, Mode::Weak).is_none())
    }

    fn extend(&mut self, i: &Ideal) -> Result<Ideal, IdealError> {
        let w = self.w;
        self.ext
            .entry(i.clone())
            .or_insert_with(|| extend_ideal(w, i))
            .clone()
    }
}

/// Which adjunctions hold between restriction `R` and extension `E` on the
/// given pair of ordered sets.
fn orientation(
    lower_c: &[Ideal],
    lower_p: &[Ideal],
    restrict: &dyn Fn(&Ideal) -> Ideal,
    extend: &HashMap<Ideal, Ideal>,
) -> (bool, bool) {
    // R ⊣ E:  R(M) ⊆ N  ⟺  M ⊆ E(N)
    // E ⊣ R:  E(N) ⊆ M  ⟺  N ⊆ R(M)
    let mut r_left = true;
    let mut e_left = true;
    for m in lower_c {
        let rm = restrict(m);
        for n in lower_p {
            let en = &extend[n];
            if rm.is_subset(n) != m.is_subset(en) {
                r_left = false;
            }
            if en.is_subset(m) != n.is_subset(&rm) {
                e_left = false;
            }
        }
    }
    (r_left, e_left)
}

fn orientation_line(r_left: bool, e_left: bool) -> String {
    match (r_left, e_left) {
        (true, true) => "orientation: restriction ⊣ extension and extension ⊣ restriction".into(),
        (true, false) => "orientation: restriction ⊣ extension".into(),
        (false, true) => "orientation: extension ⊣ restriction".into(),
        (false, false) => "orientation: none".into(),
    }
}

/// Classifies the given ideals and checks both Galois connections and the
/// isomorphism between cover ideals with weak kernels and ambient ideals that
/// both admit kernels and are saturated by regular epis.
pub fn galois_report(
    w: &CoverWitness,
    ideals_c: &[Ideal],
    ideals_p: &[Ideal],
    sampled: bool,
) -> Report {
    const NAME: &str = "galois";
    if let Some(r) = precondition(w, NAME) {
        return r;
    }
    let cat = w.cat;
    let sub = w.sub();
    let mut lat = Lattices {
        w,
        class_c: HashMap::new(),
        weak_p: HashMap::new(),
        ext: HashMap::new(),
    };
    let mut extended: HashMap<Ideal, Ideal> = HashMap::new();
    for n in ideals_p {
        match lat.extend(n) {
            Ok(e) => {
                extended.insert(n.clone(), e);
            }
            Err(e) => return Report::error(NAME, format!("extending {}: {e}", n.describe(sub))),
        }
    }
    let restrict = |m: &Ideal| restrict_ideal(w, m);

    let i_s: Vec<Ideal> = ideals_c
        .iter()
        .filter(|m| lat.class_c(m).saturating)
        .cloned()
        .collect();
    let i_k: Vec<Ideal> = ideals_c
        .iter()
        .filter(|m| lat.class_c(m).kernels)
        .cloned()
        .collect();
    let i_sk: Vec<Ideal> = i_s.iter().filter(|m| i_k.contains(m)).cloned().collect();
    let i_wk: Vec<Ideal> = ideals_p.iter().filter(|n| lat.weak_p(n)).cloned().collect();

    let mut classify = Report::pass("galois.classify").with_witness(format!(
        "{} ideals of the category ({} saturating, {} with kernels, {} both); {} ideals of the cover ({} with weak kernels)",
        ideals_c.len(),
        i_s.len(),
        i_k.len(),
        i_sk.len(),
        ideals_p.len(),
        i_wk.len()
    ));
    if sampled {
        classify = classify.with_witness("sampled lattices");
    }
    let mut parts = vec![classify];

    // Connection between all cover ideals and saturated ambient ideals.
    let mut issues = Vec::new();
    for n in ideals_p {
        if !lat.class_c(&extended[n]).saturating {
            issues.push(format!(
                "extension of {} is not saturated by regular epis",
                n.describe(sub)
            ));
        }
    }
    monotone_issues(
        ideals_p,
        |n| extended[n].clone(),
        "extension",
        sub,
        &mut issues,
    );
    monotone_issues(&i_s, restrict, "restriction", cat, &mut issues);
    let (r_left, e_left) = orientation(&i_s, ideals_p, &restrict, &extended);
    parts.push(connection_report(
        "galois.connection-s",
        issues,
        r_left,
        e_left,
    ));

    // Connection between cover ideals with weak kernels and ambient ideals
    // with kernels.
    let mut issues = Vec::new();
    for n in &i_wk {
        if !lat.class_c(&extended[n]).kernels {
            issues.push(format!(
                "extension of {} does not admit kernels",
                n.describe(sub)
            ));
        }
    }
    for m in &i_k {
        let r = restrict(m);
        if !lat.weak_p(&r) {
            issues.push(format!(
                "restriction of {} does not admit weak kernels",
                m.describe(cat)
            ));
        }
    }
    monotone_issues(
        &i_wk,
        |n| extended[n].clone(),
        "extension",
        sub,
        &mut issues,
    );
    monotone_issues(&i_k, restrict, "restriction", cat, &mut issues);
    let (r_left, e_left) = orientation(&i_k, &i_wk, &restrict, &extended);
    parts.push(connection_report(
        "galois.connection-k",
        issues,
        r_left,
        e_left,
    ));

    // The two round trips of the isomorphism.
    let mut issues = Vec::new();
    for m in &i_sk {
        let r = restrict(m);
        match lat.extend(&r) {
            Ok(back) if back == *m => {}
            Ok(back) => issues.push(format!(
                "extend(restrict({})) = {}",
                m.describe(cat),
                back.describe(cat)
            )),
            Err(e) => issues.push(format!("extending restriction of {}: {e}", m.describe(cat))),
        }
    }
    for n in &i_wk {
        let e = &extended[n];
        let class = lat.class_c(e);
        if !(class.saturating && class.kernels) {
            issues.push(format!(
                "extension of {} leaves the saturated-with-kernels ideals",
                n.describe(sub)
            ));
        }
        let back = restrict(e);
        if back != *n {
            issues.push(format!(
                "restrict(extend({})) = {}",
                n.describe(sub),
                back.describe(sub)
            ));
        }
    }
    parts.push(match issues.first() {
        None if sampled => Report::pass("galois.iso").with_witness(format!(
            "round trips hold on {} sampled cover ideals and {} sampled ambient ideals",
            i_wk.len(),
            i_sk.len()
        )),
        None => Report::pass("galois.iso").with_witness(format!(
            "{} ↔ {} ideals",
            i_wk.len(),
            i_sk.len()
        )),
        Some(_) => {
            let mut r = Report::fail("galois.iso", issues[0].clone());
            r.witnesses.extend(issues.into_iter().skip(1));
            r
        }
    });

    Report::from_parts(NAME, parts)
}

fn monotone_issues(
    domain: &[Ideal],
    map: impl Fn(&Ideal) -> Ideal,
    what: &str,
    cat: &FinCategory,
    issues: &mut Vec<String>,
) {
    let images: Vec<Ideal> = domain.iter().map(&map).collect();
    for (i, a) in domain.iter().enumerate() {
        for (j, b) in domain.iter().enumerate() {
            if a.is_subset(b) && !images[i].is_subset(&images[j]) {
                issues.push(format!(
                    "{what} not monotone on {} ⊆ {}",
                    a.describe(cat),
                    b.describe(cat)
                ));
            }
        }
    }
}

fn connection_report(name: &str, issues: Vec<String>, r_left: bool, e_left: bool) -> Report {
    let line = orientation_line(r_left, e_left);
    if let Some(first) = issues.first() {
        let mut r = Report::fail(name, first.clone());
        r.witnesses.extend(issues.iter().skip(1).cloned());
        r.witnesses.push(line);
        r
    } else if !(r_left || e_left) {
        Report::fail(name, line)
    } else {
        Report::pass(name).with_witness(line)
    }
}
