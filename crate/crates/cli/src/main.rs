use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use starkit::completion::{
    check_corollary_b, check_corollary_c, check_theorem_c, regular_completion, CompletionError,
};
use starkit::corpus::{
    enumerate_categories, parse, resolve, search_counterexample, serialize, Corpus, CorpusFile,
    SearchConfig, SearchError, SearchProperty,
};
use starkit::fincat::{FinCategory, FullSubcategory, ParallelPair};
use starkit::ideals::{
    enumerate_ideals, pointed_ideal, sample_ideals, verify_galois_and_iso, verify_galois_sampled,
    verify_lemma_a, CoverWitness, Ideal, IdealError, MultiPointed, DEFAULT_IDEAL_BOUND,
};
use starkit::report::{Report, Verdict};
use starkit::stars::{
    check_corollary_a, check_corollary_d, check_theorem_a, is_normal_category, is_star_regular,
    satisfies_star_pi0, StarError,
};

#[derive(Parser, Debug)]
#[command(
    name = "starkit",
    version,
    about = "Checks over finite multi-pointed categories"
)]
struct Cli {
    /// Print elapsed time under each report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a corpus file and validate every block in it.
    Validate { file: PathBuf },
    /// Run one property check.
    Check(CheckArgs),
    /// Build the regular completion of a category and write it out.
    Complete {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        category: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Look for the first small category with a property.
    Search {
        #[arg(long)]
        property: String,
        #[arg(long)]
        max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum number of candidate categories to examine.
        #[arg(long)]
        budget: Option<usize>,
        /// Write the witness here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print every category with at most K morphisms, up to isomorphism.
    Corpus {
        #[arg(long, value_name = "K")]
        enumerate: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Property {
    StarPi0,
    TheoremA,
    CorollaryA,
    CorollaryD,
    StarRegular,
    Normal,
    LemmaA,
    Galois,
    TheoremC,
    CorollaryC,
    CorollaryB,
}

#[derive(Parser, Debug)]
struct CheckArgs {
    property: Property,
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    category: String,
    /// Ideal on the category: a declared name, or `total`, `empty`, `pointed`.
    #[arg(long)]
    ideal: Option<String>,
    /// Parallel pair for star-pi0, as `f1,f2`.
    #[arg(long)]
    pair: Option<String>,
    /// Name of a cover block on the category.
    #[arg(long)]
    cover: Option<String>,
    /// Ideal on the cover (lemma-a); all ideals when omitted.
    #[arg(long = "ideal-p")]
    ideal_p: Option<String>,
    /// Ideal on the category (lemma-a); all ideals when omitted.
    #[arg(long = "ideal-c")]
    ideal_c: Option<String>,
    /// Seed for sampled Galois checks past the ideal-enumeration bound.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A failure that ends the run with exit code 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let line: Vec<&str> = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("{}", line.join(" "));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(reports) => {
            let mut worst = Verdict::Pass;
            for r in &reports {
                print!("{}", r.render(cli.timing));
                worst = worst.max(r.verdict);
            }
            ExitCode::from(match worst {
                Verdict::Pass | Verdict::Inapplicable => 0,
                Verdict::Fail => 1,
                Verdict::Error => 2,
            })
        }
        Err(Fatal(msg)) => {
            println!("PROPERTY {} ERROR", command_name(&cli.command));
            println!("  {msg}");
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Validate { .. } => "validate".into(),
        Command::Check(a) => property_name(a.property).into(),
        Command::Complete { .. } => "complete".into(),
        Command::Search { property, .. } => format!("search:{property}"),
        Command::Corpus { .. } => "corpus".into(),
    }
}

fn property_name(p: Property) -> &'static str {
    match p {
        Property::StarPi0 => "star-pi0",
        Property::TheoremA => "theorem-a",
        Property::CorollaryA => "corollary-a",
        Property::CorollaryD => "corollary-d",
        Property::StarRegular => "star-regular",
        Property::Normal => "normal",
        Property::LemmaA => "lemma-a",
        Property::Galois => "galois",
        Property::TheoremC => "theorem-c",
        Property::CorollaryC => "corollary-c",
        Property::CorollaryB => "corollary-b",
    }
}

fn run(cli: &Cli) -> Result<Vec<Report>, Fatal> {
    let started = Instant::now();
    let mut reports = match &cli.command {
        Command::Validate { file } => vec![validate(file)?],
        Command::Check(args) => vec![check(args)?],
        Command::Complete {
            file,
            category,
            out,
        } => vec![complete(file, category, out)?],
        Command::Search {
            property,
            max,
            seed,
            budget,
            out,
        } => vec![search(property, *max, *seed, *budget, out.as_deref())?],
        Command::Corpus { enumerate, out } => vec![corpus(*enumerate, out.as_deref())?],
    };
    if cli.timing {
        let elapsed = started.elapsed();
        reports = reports
            .into_iter()
            .map(|r| r.with_elapsed(elapsed))
            .collect();
    }
    Ok(reports)
}

fn load(path: &Path) -> Result<Corpus, Fatal> {
    let text = fs::read_to_string(path)
        .map_err(|e| Fatal(format!("cannot read {}: {e}", path.display())))?;
    let file = parse(&text).map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
    resolve(&file).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn validate(path: &Path) -> Result<Report, Fatal> {
    let corpus = load(path)?;
    let mut report = Report::pass("validate");
    for c in &corpus.categories {
        report = report.with_witness(format!(
            "category {}: {} objects, {} morphisms",
            c.name(),
            c.object_count(),
            c.morphism_count()
        ));
    }
    for i in &corpus.ideals {
        let on = i.cover.as_deref().unwrap_or(&i.category);
        report = report.with_witness(format!(
            "ideal {} on {on}: {} morphisms",
            i.name,
            i.ideal.len()
        ));
    }
    for c in &corpus.covers {
        report = report.with_witness(format!(
            "cover {} on {}: {} objects",
            c.name,
            c.category,
            c.objects.len()
        ));
    }
    Ok(report)
}

fn category<'a>(corpus: &'a Corpus, name: &str) -> Result<&'a FinCategory, Fatal> {
    corpus
        .category(name)
        .ok_or_else(|| Fatal(format!("UnknownName: no category `{name}`")))
}

/// A declared ideal, or one of the built-in names.
fn builtin_ideal(cat: &FinCategory, declared: Option<&Ideal>, name: &str) -> Result<Ideal, Fatal> {
    if let Some(i) = declared {
        return Ok(i.clone());
    }
    match name {
        "total" => Ok(Ideal::total(cat)),
        "empty" => Ok(Ideal::empty(cat)),
        "pointed" => pointed_ideal(cat)
            .ok_or_else(|| Fatal(format!("NotPointed: {} has no pointed ideal", cat.name()))),
        _ => Err(Fatal(format!(
            "UnknownName: no ideal `{name}` on {}",
            cat.name()
        ))),
    }
}

fn category_ideal(corpus: &Corpus, cat: &FinCategory, name: Option<&str>) -> Result<Ideal, Fatal> {
    let name = name.unwrap_or("total");
    builtin_ideal(cat, corpus.ideal(cat.name(), name), name)
}

fn cover_of(
    corpus: &Corpus,
    cat: &FinCategory,
    name: Option<&str>,
) -> Result<FullSubcategory, Fatal> {
    let name = name.ok_or_else(|| Fatal("missing --cover".into()))?;
    corpus
        .cover(cat.name(), name)
        .map(|c| c.sub.clone())
        .ok_or_else(|| Fatal(format!("UnknownName: no cover `{name}` on {}", cat.name())))
}

/// Every ideal, or a seeded sample when the category is past the bound.
fn all_ideals(cat: &FinCategory, seed: u64) -> Result<(Vec<Ideal>, bool), Fatal> {
    match enumerate_ideals(cat, DEFAULT_IDEAL_BOUND) {
        Ok(all) => Ok((all, false)),
        Err(IdealError::BoundExceeded { .. }) => Ok((sample_ideals(cat, seed, SAMPLES), true)),
        Err(e) => Err(e.into()),
    }
}

const SAMPLES: usize = 64;

fn check(args: &CheckArgs) -> Result<Report, Fatal> {
    let corpus = load(&args.file)?;
    let cat = category(&corpus, &args.category)?;
    let name = property_name(args.property);
    let report = match args.property {
        Property::StarPi0 => {
            let ideal = category_ideal(&corpus, cat, args.ideal.as_deref())?;
            star_pi0(cat, &ideal, args.pair.as_deref())?
        }
        Property::TheoremA => {
            let ideal = category_ideal(&corpus, cat, args.ideal.as_deref())?;
            check_theorem_a(MultiPointed::new(cat, &ideal))
        }
        Property::CorollaryA => {
            let ideal = category_ideal(&corpus, cat, args.ideal.as_deref())?;
            check_corollary_a(MultiPointed::new(cat, &ideal))
        }
        Property::CorollaryD => {
            let ideal = category_ideal(&corpus, cat, args.ideal.as_deref())?;
            check_corollary_d(MultiPointed::new(cat, &ideal))
        }
        Property::StarRegular => {
            let ideal = category_ideal(&corpus, cat, args.ideal.as_deref())?;
            is_star_regular(MultiPointed::new(cat, &ideal))
        }
        Property::Normal => match is_normal_category(cat) {
            Ok(r) => r,
            Err(e @ StarError::NotPointed(_)) => Report::fail("normal", e.to_string()),
            Err(e) => return Err(e.into()),
        },
        Property::LemmaA => lemma_a(&corpus, cat, args)?,
        Property::Galois => {
            let w =
                CoverWitness::from_subcategory(cat, cover_of(&corpus, cat, args.cover.as_deref())?);
            match verify_galois_and_iso(&w, DEFAULT_IDEAL_BOUND) {
                Ok(r) => r,
                Err(IdealError::BoundExceeded { .. }) => {
                    verify_galois_sampled(&w, args.seed, SAMPLES)
                }
                Err(e) => return Err(e.into()),
            }
        }
        Property::TheoremC => {
            let cover = cover_of(&corpus, cat, args.cover.as_deref())?;
            let ideal = category_ideal(&corpus, cat, args.ideal.as_deref())?;
            check_theorem_c(cat, &cover, &ideal)
        }
        Property::CorollaryC => {
            let ideal = category_ideal(&corpus, cat, args.ideal.as_deref())?;
            check_corollary_c(cat, &ideal)
        }
        Property::CorollaryB => check_corollary_b(cat),
    };
    debug_assert!(report.verdict != Verdict::Fail || !report.witnesses.is_empty());
    let mut report = report;
    report.property = name.to_string();
    Ok(report)
}

fn star_pi0(cat: &FinCategory, ideal: &Ideal, pair: Option<&str>) -> Result<Report, Fatal> {
    let m = MultiPointed::new(cat, ideal);
    let Some(spec) = pair else {
        let mut parts = Vec::new();
        for p in cat.parallel_pairs() {
            parts.push(match satisfies_star_pi0(m, p) {
                Ok(r) => r,
                Err(e) => {
                    Report::inapplicable("star-pi0", format!("pair {}: {e}", cat.describe_pair(p)))
                }
            });
        }
        let mut r = Report::from_parts("star-pi0", parts);
        let failing: Vec<String> = r
            .parts
            .iter()
            .filter(|p| p.verdict == Verdict::Fail)
            .flat_map(|p| p.witnesses.clone())
            .collect();
        r.witnesses = failing;
        let evaluated = r
            .parts
            .iter()
            .filter(|p| p.verdict != Verdict::Inapplicable)
            .count();
        r.witnesses
            .push(format!("{evaluated} of {} pairs evaluable", r.parts.len()));
        r.parts.clear();
        return Ok(r);
    };
    let (a, b) = spec
        .split_once(',')
        .ok_or_else(|| Fatal(format!("--pair expects `f1,f2`, got `{spec}`")))?;
    let find = |n: &str| {
        cat.find_morphism(n.trim()).ok_or_else(|| {
            Fatal(format!(
                "UnknownName: no morphism `{}` in {}",
                n.trim(),
                cat.name()
            ))
        })
    };
    let p = ParallelPair::new(find(a)?, find(b)?);
    if !cat.is_parallel(p) {
        return Err(Fatal(format!(
            "BadTyping: {} is not a parallel pair",
            cat.describe_pair(p)
        )));
    }
    Ok(match satisfies_star_pi0(m, p) {
        Ok(r) => r,
        Err(e) => Report::inapplicable("star-pi0", e.to_string()),
    })
}

fn lemma_a(corpus: &Corpus, cat: &FinCategory, args: &CheckArgs) -> Result<Report, Fatal> {
    let cover_name = args.cover.as_deref();
    let sub = cover_of(corpus, cat, cover_name)?;
    let w = CoverWitness::from_subcategory(cat, sub);
    let mut sampled = false;
    let ideals_p = match args.ideal_p.as_deref() {
        Some(n) => vec![builtin_ideal(
            w.sub(),
            corpus.cover_ideal(cat.name(), cover_name.unwrap_or_default(), n),
            n,
        )?],
        None => {
            let (all, s) = all_ideals(w.sub(), args.seed)?;
            sampled |= s;
            all
        }
    };
    let ideals_c = match args.ideal_c.as_deref() {
        Some(n) => vec![category_ideal(corpus, cat, Some(n))?],
        None => {
            let (all, s) = all_ideals(cat, args.seed)?;
            sampled |= s;
            all
        }
    };
    if ideals_p.len() == 1 && ideals_c.len() == 1 {
        return Ok(verify_lemma_a(&w, &ideals_p[0], &ideals_c[0]));
    }
    let mut parts = Vec::new();
    for n_p in &ideals_p {
        for n_c in &ideals_c {
            let mut r = verify_lemma_a(&w, n_p, n_c);
            r.property = format!("lemma-a[{} | {}]", n_p.describe(w.sub()), n_c.describe(cat));
            let stop = r.verdict == Verdict::Inapplicable;
            parts.push(r);
            if stop {
                // The precondition does not depend on the ideals.
                return Ok(parts.pop().expect("just pushed"));
            }
        }
    }
    let total = parts.len();
    let mut r = Report::from_parts("lemma-a", parts);
    r.parts.retain(|p| p.verdict != Verdict::Pass);
    r.witnesses.push(format!("{total} ideal pairs checked"));
    if sampled {
        r.witnesses
            .push(format!("sampled ideals, seed {}", args.seed));
    }
    Ok(r)
}

fn complete(file: &Path, name: &str, out: &Path) -> Result<Report, Fatal> {
    let corpus = load(file)?;
    let cat = category(&corpus, name)?;
    let c = regular_completion(cat).map_err(|e| match e {
        CompletionError::PreconditionFailed(_) | CompletionError::ValidationFailed(_) => {
            Fatal(e.to_string())
        }
    })?;
    let mut doc = CorpusFile::default();
    doc.push_comment(c.provenance_lines());
    doc.push_category(&c.total);
    doc.push_cover(name, &c.total, &c.embed_obj);
    fs::write(out, serialize(&doc))
        .map_err(|e| Fatal(format!("cannot write {}: {e}", out.display())))?;
    Ok(Report::pass("complete").with_witness(format!(
        "{}: {} objects, {} morphisms written to {}",
        c.total.name(),
        c.total.object_count(),
        c.total.morphism_count(),
        out.display()
    )))
}

fn search(
    property: &str,
    max: usize,
    seed: u64,
    budget: Option<usize>,
    out: Option<&Path>,
) -> Result<Report, Fatal> {
    let prop: SearchProperty = property.parse()?;
    let config = SearchConfig {
        max_morphisms: max,
        seed,
        budget,
    };
    let name = format!("search:{prop}");
    match search_counterexample(prop, &config) {
        Ok(found) => {
            let text = serialize(&found.file);
            let mut r = Report::pass(name).with_witness(format!(
                "category {} (candidate {})",
                found.category.name(),
                found.index
            ));
            r.witnesses.extend(found.witness);
            match out {
                Some(path) => {
                    fs::write(path, text)
                        .map_err(|e| Fatal(format!("cannot write {}: {e}", path.display())))?;
                    r.witnesses.push(format!("written to {}", path.display()));
                }
                None => r.witnesses.extend(text.lines().map(str::to_string)),
            }
            Ok(r)
        }
        Err(e @ SearchError::Exhausted { .. }) => Ok(Report::inapplicable(name, e.to_string())),
    }
}

fn corpus(max: usize, out: Option<&Path>) -> Result<Report, Fatal> {
    let cats = enumerate_categories(max)?;
    let mut doc = CorpusFile::default();
    doc.push_comment([format!(
        "all categories with at most {max} morphisms, up to isomorphism"
    )]);
    for c in &cats {
        doc.push_category(c);
    }
    let text = serialize(&doc);
    let r = Report::pass("corpus").with_witness(format!("{} categories", cats.len()));
    match out {
        Some(path) => {
            fs::write(path, text)
                .map_err(|e| Fatal(format!("cannot write {}: {e}", path.display())))?;
            Ok(r.with_witness(format!("written to {}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(r)
        }
    }
}
