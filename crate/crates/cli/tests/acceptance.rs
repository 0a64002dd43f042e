//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use starkit::completion::{
    check_corollary_b, check_corollary_c, is_regular_completion, regular_completion,
};
use starkit::corpus::{
    enumerate_categories, parse, search_counterexample, serialize, SearchConfig, SearchProperty,
};
use starkit::fincat::{FinCategory, MorId, ObjId};
use starkit::ideals::{
    enumerate_ideals, extend_ideal, is_projective_cover, kernels, nc_kernel_via_cover,
    pointed_ideal, sample_ideals, verify_galois_and_iso, verify_galois_sampled, verify_lemma_a,
    CoverWitness, Ideal, IdealError, MultiPointed, DEFAULT_IDEAL_BOUND,
};
use starkit::limits::{has_weak_finite_limits, is_regular_category, Mode};
use starkit::report::Verdict;
use starkit::stars::{
    evaluate_graph_conditions, graph_conditions_gap, kernel_star_clause_failure,
    kernel_star_clause_gap, pi0_against, reflexive_graph_pi0_failure, star_of,
};

/// Largest categories in the exhaustive sweep, counted with identities.
const SWEEP_MAX: usize = 5;
/// Bound handed to the counterexample search, and the largest categories
/// whose regular completions are swept.
const SEARCH_MAX: usize = 6;
/// Random ideals drawn for categories past the enumeration bound.
const SAMPLES: usize = 48;
const SEED: u64 = 7;
/// Wall-clock budget for the reflexive-graph sweep.
const THEOREM_BUDGET: Duration = Duration::from_secs(60);

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], detail: String) -> Self {
        let detail = match failures.first() {
            None => detail,
            Some(first) => format!("{detail}; {} failures, first: {first}", failures.len()),
        };
        Outcome {
            pass: failures.is_empty(),
            detail,
        }
    }
}

/// A category with the ideals it is swept over.
struct Instance {
    cat: FinCategory,
    ideals: Vec<Ideal>,
    sampled: bool,
}

impl Instance {
    fn new(cat: FinCategory) -> Self {
        let (ideals, sampled) = ideals_of(&cat);
        Instance {
            cat,
            ideals,
            sampled,
        }
    }
}

fn ideals_of(cat: &FinCategory) -> (Vec<Ideal>, bool) {
    match enumerate_ideals(cat, DEFAULT_IDEAL_BOUND) {
        Ok(all) => (all, false),
        Err(IdealError::BoundExceeded { .. }) => (sample_ideals(cat, SEED, SAMPLES), true),
        Err(e) => panic!("enumerating ideals of {}: {e}", cat.name()),
    }
}

/// A completion with its embedded cover.
struct Completed {
    base: FinCategory,
    total: Instance,
    cover: Vec<ObjId>,
}

struct World {
    sweep: Vec<Instance>,
    completed: Vec<Completed>,
    completion_failures: Vec<String>,
}

fn build_world() -> World {
    let cats = enumerate_categories(SWEEP_MAX).expect("within the enumeration cap");
    let mut completed = Vec::new();
    let mut completion_failures = Vec::new();
    let bases = enumerate_categories(SEARCH_MAX).expect("within the enumeration cap");
    for cat in bases.iter().filter(|c| has_weak_finite_limits(c)) {
        match regular_completion(cat) {
            Ok(c) => completed.push(Completed {
                base: cat.clone(),
                cover: c.embed_obj.clone(),
                total: Instance::new(c.total.clone()),
            }),
            Err(e) => completion_failures.push(format!("{}: {e}", cat.name())),
        }
    }
    World {
        sweep: cats.into_iter().map(Instance::new).collect(),
        completed,
        completion_failures,
    }
}

fn pairs<'a>(
    instances: impl Iterator<Item = &'a Instance>,
) -> impl Iterator<Item = (&'a FinCategory, &'a Ideal)> {
    instances.flat_map(|i| i.ideals.iter().map(move |n| (&i.cat, n)))
}

fn all_instances(w: &World) -> impl Iterator<Item = &Instance> {
    w.sweep.iter().chain(w.completed.iter().map(|c| &c.total))
}

fn criterion_1(w: &World) -> Outcome {
    let started = Instant::now();
    let (mut checked, mut skipped) = (0, 0);
    let mut failures = Vec::new();
    for (cat, n) in pairs(all_instances(w)) {
        match evaluate_graph_conditions(MultiPointed::new(cat, n)) {
            Err(_) => skipped += 1,
            Ok(v) => {
                checked += 1;
                if !v.agree() {
                    failures.push(format!("{} with {}: {:?}", cat.name(), n.describe(cat), v));
                }
            }
        }
    }
    let elapsed = started.elapsed();
    if elapsed > THEOREM_BUDGET {
        failures.push(format!("took {} ms", elapsed.as_millis()));
    }
    Outcome::new(
        &failures,
        format!(
            "{checked} (category, ideal) pairs with hypotheses, {skipped} without; {} ms",
            elapsed.as_millis()
        ),
    )
}

fn criterion_2(w: &World) -> Outcome {
    let (mut checked, mut skipped) = (0, 0);
    let mut failures = Vec::new();
    for (cat, n) in pairs(all_instances(w)) {
        let m = MultiPointed::new(cat, n);
        if kernel_star_clause_gap(m).is_some() || graph_conditions_gap(m).is_some() {
            skipped += 1;
            continue;
        }
        match (
            kernel_star_clause_failure(m),
            reflexive_graph_pi0_failure(m),
        ) {
            (Ok(direct), Ok(graphs)) => {
                checked += 1;
                if direct.is_some() != graphs.is_some() {
                    failures.push(format!(
                        "{} with {}: clause {:?}, graphs {:?}",
                        cat.name(),
                        n.describe(cat),
                        direct,
                        graphs.map(|(g, sep)| (g, cat.morphism_name(sep).to_string()))
                    ));
                }
            }
            _ => skipped += 1,
        }
    }
    Outcome::new(
        &failures,
        format!("{checked} pairs evaluable both ways, {skipped} not"),
    )
}

/// Object subsets of `cat` that pass as projective covers.
fn projective_covers(cat: &FinCategory) -> Vec<Vec<ObjId>> {
    let n = cat.object_count();
    (1u32..(1 << n))
        .map(|mask| {
            (0..n as u32)
                .filter(|i| mask & (1 << i) != 0)
                .map(ObjId)
                .collect::<Vec<_>>()
        })
        .filter(|objs| is_projective_cover(&CoverWitness::new(cat, objs)).passed())
        .collect()
}

/// (category, cover objects, whether the category's ideals were sampled).
fn cover_instances(w: &World) -> Vec<(&Instance, Vec<ObjId>)> {
    let mut out = Vec::new();
    for inst in &w.sweep {
        for cover in projective_covers(&inst.cat) {
            out.push((inst, cover));
        }
    }
    for c in &w.completed {
        out.push((&c.total, c.cover.clone()));
    }
    out
}

fn criterion_3(w: &World) -> Outcome {
    let (mut pass, mut inapplicable, mut covers) = (0, 0, 0);
    let mut failures = Vec::new();
    for (inst, objs) in cover_instances(w) {
        covers += 1;
        let wit = CoverWitness::new(&inst.cat, &objs);
        let (ideals_p, _) = ideals_of(wit.sub());
        for n_p in &ideals_p {
            for n_c in &inst.ideals {
                let r = verify_lemma_a(&wit, n_p, n_c);
                match r.verdict {
                    Verdict::Pass => pass += 1,
                    Verdict::Inapplicable => inapplicable += 1,
                    _ => failures.push(format!(
                        "{} cover {}: {}",
                        inst.cat.name(),
                        wit.describe(),
                        r.render(false).trim_end().replace('\n', " | ")
                    )),
                }
            }
        }
    }
    Outcome::new(
        &failures,
        format!("{covers} projective covers; {pass} ideal pairs PASS, {inapplicable} outside a regular category"),
    )
}

fn criterion_4(w: &World) -> Outcome {
    let (mut exact, mut sampled, mut inapplicable) = (0, 0, 0);
    let mut failures = Vec::new();
    for (inst, objs) in cover_instances(w) {
        let wit = CoverWitness::new(&inst.cat, &objs);
        let r = match verify_galois_and_iso(&wit, DEFAULT_IDEAL_BOUND) {
            Ok(r) => {
                exact += 1;
                r
            }
            Err(IdealError::BoundExceeded { .. }) => {
                sampled += 1;
                verify_galois_sampled(&wit, SEED, SAMPLES)
            }
            Err(e) => {
                failures.push(format!("{}: {e}", inst.cat.name()));
                continue;
            }
        };
        match r.verdict {
            Verdict::Pass => {
                let iso = r.part("galois.iso").map(|p| p.passed()).unwrap_or(false);
                if !iso {
                    failures.push(format!("{}: isomorphism part missing", inst.cat.name()));
                }
            }
            Verdict::Inapplicable => inapplicable += 1,
            _ => failures.push(format!(
                "{} cover {}: {}",
                inst.cat.name(),
                wit.describe(),
                r.render(false).trim_end().replace('\n', " | ")
            )),
        }
    }
    Outcome::new(
        &failures,
        format!(
            "{exact} (category, cover) pairs exhaustively, {sampled} on sampled lattices, {inapplicable} outside a regular category"
        ),
    )
}

fn criterion_5(w: &World) -> Outcome {
    let mut failures = w.completion_failures.clone();
    for c in &w.completed {
        let total = &c.total.cat;
        let regular = is_regular_category(total);
        if !regular.passed() {
            failures.push(format!(
                "{}: {}",
                total.name(),
                regular.witnesses.join("; ")
            ));
        }
        let cover = starkit::FullSubcategory::new(total, &c.cover);
        let r = is_regular_completion(total, &cover);
        if !r.passed() {
            failures.push(format!("{}: {}", total.name(), r.witnesses.join("; ")));
        }
    }
    let inputs = w.completed.len() + w.completion_failures.len();
    Outcome::new(
        &failures,
        format!(
            "{inputs} categories with weak finite limits, {} completions validated",
            w.completed.len()
        ),
    )
}

fn criterion_6(w: &World) -> Outcome {
    let (mut c_checked, mut b_checked) = (0, 0);
    let mut failures = Vec::new();
    for c in &w.completed {
        let p = &c.base;
        for n in ideals_of(p).0 {
            if MultiPointed::new(p, &n)
                .missing_kernel(Mode::Weak)
                .is_some()
            {
                continue;
            }
            c_checked += 1;
            let r = check_corollary_c(p, &n);
            if !r.passed() {
                failures.push(format!(
                    "{} with {}: {}",
                    p.name(),
                    n.describe(p),
                    r.witnesses.join("; ")
                ));
            }
        }
        if pointed_ideal(p).is_some() {
            b_checked += 1;
            let r = check_corollary_b(p);
            if !r.passed() {
                failures.push(format!("{}: {}", p.name(), r.witnesses.join("; ")));
            }
        }
    }
    Outcome::new(
        &failures,
        format!(
            "{c_checked} (category, ideal) pairs with weak kernels, {b_checked} pointed categories"
        ),
    )
}

fn criterion_7(w: &World) -> Outcome {
    let (mut pairs_checked, mut multi) = (0, 0);
    let mut failures = Vec::new();
    for (cat, n) in pairs(all_instances(w)) {
        let m = MultiPointed::new(cat, n);
        for p in cat.parallel_pairs() {
            let verdicts: Vec<bool> = star_of(m, p, Mode::Weak)
                .iter()
                .map(|w| pi0_against(cat, w).holds())
                .collect();
            if verdicts.is_empty() {
                continue;
            }
            pairs_checked += 1;
            if verdicts.len() > 1 {
                multi += 1;
            }
            if verdicts.iter().any(|&v| v != verdicts[0]) {
                failures.push(format!(
                    "{} with {}: pair {}",
                    cat.name(),
                    n.describe(cat),
                    cat.describe_pair(p)
                ));
            }
        }
    }
    Outcome::new(
        &failures,
        format!("{pairs_checked} pairs with a weak star, {multi} with several"),
    )
}

/// `a` and `b` agree up to an isomorphism `u` with `b ∘ u = a`.
fn same_subobject(cat: &FinCategory, a: MorId, b: MorId) -> bool {
    cat.cod(a) == cat.cod(b)
        && cat
            .hom(cat.dom(a), cat.dom(b))
            .iter()
            .any(|&u| cat.is_iso(u) && cat.compose(b, u) == a)
}

fn criterion_8(w: &World) -> Outcome {
    let (mut checked, mut instances) = (0, 0);
    let mut failures = Vec::new();
    for (inst, objs) in cover_instances(w) {
        let cat = &inst.cat;
        if !is_regular_category(cat).passed() {
            continue;
        }
        let wit = CoverWitness::new(cat, &objs);
        for n_p in ideals_of(wit.sub()).0 {
            if MultiPointed::new(wit.sub(), &n_p)
                .missing_kernel(Mode::Weak)
                .is_some()
            {
                continue;
            }
            let n_c = match extend_ideal(&wit, &n_p) {
                Ok(n_c) => n_c,
                Err(e) => {
                    failures.push(format!("{}: {e}", cat.name()));
                    continue;
                }
            };
            instances += 1;
            for f in cat.morphisms() {
                let direct = kernels(cat, &n_c, f, Mode::Strict);
                checked += 1;
                match nc_kernel_via_cover(&wit, &n_p, f) {
                    Ok(k) if direct.iter().any(|&d| same_subobject(cat, k, d)) => {}
                    Ok(k) => failures.push(format!(
                        "{} kernel of {}: via cover {}, direct {:?}",
                        cat.name(),
                        cat.morphism_name(f),
                        cat.morphism_name(k),
                        direct
                            .iter()
                            .map(|&d| cat.morphism_name(d))
                            .collect::<Vec<_>>()
                    )),
                    Err(e) => failures.push(format!(
                        "{} kernel of {}: {e}",
                        cat.name(),
                        cat.morphism_name(f)
                    )),
                }
            }
        }
    }
    Outcome::new(
        &failures,
        format!("{checked} kernels over {instances} (regular category, cover, ideal) instances"),
    )
}

fn criterion_9() -> Outcome {
    let config = SearchConfig::new(SEARCH_MAX);
    match search_counterexample(SearchProperty::CoverPi0NotStarRegular, &config) {
        Ok(found) => Outcome::new(
            &[],
            format!(
                "found {} (candidate {})",
                found.category.name(),
                found.index
            ),
        ),
        Err(e) => Outcome::new(&[], e.to_string()),
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_starkit"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("spawn starkit");
    let mut text = String::from_utf8_lossy(&out.stdout).into_owned();
    text.push_str(&String::from_utf8_lossy(&out.stderr));
    (out.status.code().unwrap_or(-1), text)
}

fn criterion_10() -> Outcome {
    let mut failures = Vec::new();
    let mut files = 0;
    for entry in fs::read_dir(fixtures()).expect("fixture dir") {
        let path = entry.expect("dir entry").path();
        if path.extension().is_none_or(|e| e != "fincat") {
            continue;
        }
        files += 1;
        let text = fs::read_to_string(&path).expect("read fixture");
        match parse(&text) {
            Ok(file) if serialize(&file) == text => {}
            Ok(_) => failures.push(format!("{} does not round-trip", path.display())),
            Err(e) => failures.push(format!("{}: {e}", path.display())),
        }
    }

    let tmp =
        std::env::temp_dir().join(format!("starkit-acceptance-{}.fincat", std::process::id()));
    let tmp = tmp.to_str().expect("utf-8 temp path").to_string();
    let matrix: &[(&[&str], i32, &str)] = &[
        (
            &[
                "check",
                "normal",
                "--file",
                "one.fincat",
                "--category",
                "One",
            ],
            0,
            "PROPERTY normal PASS",
        ),
        (&["validate", "chain3.fincat"], 0, "PROPERTY validate PASS"),
        (
            &[
                "check",
                "theorem-a",
                "--file",
                "ptset2.fincat",
                "--category",
                "PtSet2",
                "--ideal",
                "zero",
            ],
            0,
            "PROPERTY theorem-a INAPPLICABLE",
        ),
        (
            &[
                "check",
                "galois",
                "--file",
                "chain3.fincat",
                "--category",
                "Chain3",
                "--cover",
                "all",
            ],
            0,
            "PROPERTY galois PASS",
        ),
        (
            &[
                "search",
                "--property",
                "pointed-regular-not-normal",
                "--max",
                "6",
            ],
            0,
            "INAPPLICABLE",
        ),
        (
            &[
                "complete",
                "--file",
                "chain3.fincat",
                "--category",
                "Chain3",
                "--out",
                &tmp,
            ],
            0,
            "PASS",
        ),
        (
            &[
                "check",
                "star-pi0",
                "--file",
                "ptset2.fincat",
                "--category",
                "PtSet2",
                "--ideal",
                "zero",
                "--pair",
                "1_S,u",
            ],
            1,
            "PROPERTY star-pi0 FAIL",
        ),
        (
            &[
                "check",
                "normal",
                "--file",
                "ptset2.fincat",
                "--category",
                "PtSet2",
            ],
            1,
            "PROPERTY normal FAIL",
        ),
        (
            &[
                "check",
                "normal",
                "--file",
                "arrow.fincat",
                "--category",
                "Arrow",
            ],
            1,
            "NotPointed",
        ),
        (&["validate", "broken.fincat"], 2, "MissingComposite"),
        (&["validate", "absent.fincat"], 2, "ERROR"),
        (
            &[
                "check",
                "normal",
                "--file",
                "one.fincat",
                "--category",
                "Nope",
            ],
            2,
            "UnknownName",
        ),
        (
            &[
                "check",
                "no-such-property",
                "--file",
                "one.fincat",
                "--category",
                "One",
            ],
            2,
            "no-such-property",
        ),
        (
            &[
                "complete",
                "--file",
                "ptset2.fincat",
                "--category",
                "PtSet2",
                "--out",
                &tmp,
            ],
            2,
            "PreconditionFailed",
        ),
        (&["corpus"], 2, "--enumerate"),
    ];
    for (args, code, needle) in matrix {
        let (got, text) = run_cli(args);
        if got != *code || !text.contains(needle) {
            failures.push(format!(
                "`starkit {}` gave exit {got}, expected {code} with `{needle}`",
                args.join(" ")
            ));
        }
    }
    let _ = fs::remove_file(&tmp);
    Outcome::new(
        &failures,
        format!("{files} fixtures round-trip; {} CLI cases", matrix.len()),
    )
}

fn main() {
    let started = Instant::now();
    let world = build_world();
    let sampled = world.completed.iter().filter(|c| c.total.sampled).count();
    println!(
        "sweep: {} categories with at most {SWEEP_MAX} morphisms, completions of {} with at most {SEARCH_MAX} ({sampled} with sampled ideals, seed {SEED})",
        world.sweep.len(),
        world.completed.len()
    );
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "reflexive-graph conditions agree",
            Box::new(|| criterion_1(&world)),
        ),
        (
            "kernel-star clause matches reflexive graphs",
            Box::new(|| criterion_2(&world)),
        ),
        ("cover lemma", Box::new(|| criterion_3(&world))),
        (
            "Galois connections and isomorphism",
            Box::new(|| criterion_4(&world)),
        ),
        ("completion soundness", Box::new(|| criterion_5(&world))),
        (
            "completion characterisation",
            Box::new(|| criterion_6(&world)),
        ),
        ("choice of weak star", Box::new(|| criterion_7(&world))),
        (
            "kernels through the cover",
            Box::new(|| criterion_8(&world)),
        ),
        ("counterexample search", Box::new(criterion_9)),
        ("format and exit codes", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {name}: {} ({})",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!(
        "acceptance: {} of 10 passed in {} ms",
        10 - failed,
        started.elapsed().as_millis()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
