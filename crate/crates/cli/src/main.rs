//! Command-line surface: group queries, class criteria, the fixed-space-bound
//! sweep, and the full corpus survey with a reproducible JSON report.
//!
//! Exit codes: 0 success with no violations, 1 usage error, 2 a suspected
//! theorem violation was reported, 3 a search budget was exhausted.

mod survey;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use solrad_core::catalog::{default_corpus, GroupSpec};
use solrad_core::criterion::{
    baer_suzuki_check, class_k_test, is_prime, min_witness, CachedProperty, GroupPropertyCache,
    SearchMode,
};
use solrad_core::error::Error;
use solrad_core::group::{conjugacy_classes, DEFAULT_ENUMERATION_BOUND};
use solrad_core::height::{fitting_profile, sfit};
use solrad_core::modrep::{check_fixed_space_bound, permutation_module_constituents};
use solrad_core::series::{fitting_subgroup, is_solvable, solvable_radical};
use solrad_core::{PermGroup, Permutation};

#[derive(Parser)]
#[command(
    name = "solrad",
    about = "Solvable-radical and Fitting-height computations on small permutation groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the typed JSON report to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Seed for all randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Canonical-tuple budget for exhaustive class tests.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u64,
    /// Sample count for randomized searches.
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: u64,
    /// Worker threads (default: machine parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the order of a group.
    Order { group: String },
    /// Solvable radical by the elementwise normal-closure characterization.
    Radical { group: String },
    /// Fitting subgroup, plus height data when the group is solvable.
    Fitting { group: String },
    /// Last nontrivial lower Fitting term of a solvable group.
    Sfit { group: String },
    /// Conjugacy classes: representatives, sizes, element orders.
    Classes { group: String },
    /// Test whether every k members of one class generate a solvable subgroup.
    ClassTest {
        group: String,
        /// Class representative in cycle notation, e.g. "(1 2)".
        #[arg(long)]
        rep: String,
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// "exhaustive" or "randomized".
        #[arg(long, default_value = "exhaustive")]
        mode: String,
    },
    /// Least k <= 4 such that some k class members generate a nonsolvable
    /// subgroup; all classes unless --rep is given.
    MinWitness {
        group: String,
        #[arg(long)]
        rep: Option<String>,
    },
    /// Pairwise-nilpotency against nilpotent normal closure for prime-order
    /// elements; all prime-order classes unless --rep is given.
    BaerSuzuki {
        group: String,
        #[arg(long)]
        rep: Option<String>,
    },
    /// Fixed-space bound sweep over irreducible permutation-module
    /// constituents in coprime characteristic.
    T1Sweep {
        /// Group spec; defaults to every solvable corpus group.
        group: Option<String>,
    },
    /// Full corpus survey: orders, radicals both ways, Fitting data, witness
    /// profiles, pair and nilpotency criteria.
    Survey {
        #[arg(long, default_value = "default")]
        corpus: String,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/version on stdout with success.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::TheoremViolationSuspected(_) => 2,
        Error::BudgetExceeded { .. } => 3,
        _ => 1,
    }
}

fn build_group(spec_text: &str) -> Result<(GroupSpec, PermGroup), Error> {
    let spec = GroupSpec::parse(spec_text)?;
    let group = spec.build()?;
    Ok((spec, group))
}

fn parse_rep(group: &PermGroup, text: &str) -> Result<Permutation, Error> {
    let rep = Permutation::parse(text, group.degree())?;
    if !group.contains(&rep)? {
        return Err(Error::ElementNotInGroup);
    }
    Ok(rep)
}

fn emit(cli: &Cli, report: &serde_json::Value) -> Result<(), Error> {
    if let Some(path) = &cli.json {
        let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
        text.push('\n');
        std::fs::write(path, text)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Order { group } => {
            let (spec, g) = build_group(group)?;
            println!("{}", g.order());
            emit(
                cli,
                &serde_json::json!({
                    "schema": 1,
                    "group": spec.to_string(),
                    "degree": g.degree(),
                    "order": g.order(),
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Radical { group } => {
            let (spec, g) = build_group(group)?;
            let r = solvable_radical(&g, DEFAULT_ENUMERATION_BOUND)?;
            println!("order(R) = {}", r.order());
            for gen in r.generators() {
                println!("  {gen}");
            }
            emit(
                cli,
                &serde_json::json!({
                    "schema": 1,
                    "group": spec.to_string(),
                    "order": g.order(),
                    "radical_order": r.order(),
                    "radical_generators": r.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Fitting { group } => {
            let (spec, g) = build_group(group)?;
            let f = fitting_subgroup(&g, DEFAULT_ENUMERATION_BOUND)?;
            println!("order(F) = {}", f.order());
            let profile = if is_solvable(&g) {
                let p = fitting_profile(&g)?;
                println!("fitting height = {}", p.height);
                println!(
                    "lower fitting term orders = {:?}",
                    p.terms.iter().map(|t| t.order()).collect::<Vec<_>>()
                );
                Some(p)
            } else {
                println!("group is not solvable; no Fitting height");
                None
            };
            emit(
                cli,
                &serde_json::json!({
                    "schema": 1,
                    "group": spec.to_string(),
                    "order": g.order(),
                    "fitting_order": f.order(),
                    "profile": profile.map(|p| p.to_json()),
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sfit { group } => {
            let (spec, g) = build_group(group)?;
            let s = sfit(&g)?;
            println!("order(sfit) = {}", s.order());
            for gen in s.generators() {
                println!("  {gen}");
            }
            emit(
                cli,
                &serde_json::json!({
                    "schema": 1,
                    "group": spec.to_string(),
                    "order": g.order(),
                    "sfit_order": s.order(),
                    "sfit_generators": s.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Classes { group } => {
            let (spec, g) = build_group(group)?;
            let classes = conjugacy_classes(&g, DEFAULT_ENUMERATION_BOUND)?;
            println!("{} classes", classes.len());
            for c in &classes {
                println!(
                    "size {:>6}  element order {:>4}  rep {}",
                    c.size(),
                    c.representative().order(),
                    c.representative()
                );
            }
            emit(
                cli,
                &serde_json::json!({
                    "schema": 1,
                    "group": spec.to_string(),
                    "order": g.order(),
                    "classes": classes.iter().map(|c| serde_json::json!({
                        "rep": c.representative().to_string(),
                        "size": c.size(),
                        "element_order": c.representative().order(),
                    })).collect::<Vec<_>>(),
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ClassTest {
            group,
            rep,
            k,
            mode,
        } => {
            let (spec, g) = build_group(group)?;
            let rep = parse_rep(&g, rep)?;
            let classes = conjugacy_classes(&g, DEFAULT_ENUMERATION_BOUND)?;
            let class = classes
                .iter()
                .find(|c| c.elements().binary_search(&rep).is_ok())
                .ok_or(Error::ElementNotInGroup)?;
            let mode = match mode.as_str() {
                "exhaustive" => SearchMode::Exhaustive,
                "randomized" => SearchMode::Randomized {
                    samples: cli.samples,
                    seed: cli.seed,
                },
                other => {
                    return Err(Error::ParameterOutOfRange(format!(
                        "mode {other:?} (want exhaustive or randomized)"
                    )))
                }
            };
            let cache = GroupPropertyCache::new(CachedProperty::Solvable);
            let verdict = class_k_test(&g, class, *k, mode, cli.budget, &cache)?;
            println!(
                "class of {} (size {}): all_solvable = {} ({} tuples checked)",
                verdict.class_rep,
                class.size(),
                verdict.all_solvable,
                verdict.tuples_checked
            );
            if let Some(w) = &verdict.witness {
                println!(
                    "witness: {}",
                    w.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
                );
            }
            emit(
                cli,
                &serde_json::json!({
                    "schema": 1,
                    "group": spec.to_string(),
                    "verdict": verdict.to_json(),
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::MinWitness { group, rep } => {
            let (spec, g) = build_group(group)?;
            let classes = conjugacy_classes(&g, DEFAULT_ENUMERATION_BOUND)?;
            let chosen: Vec<_> = match rep {
                Some(text) => {
                    let rep = parse_rep(&g, text)?;
                    classes
                        .iter()
                        .filter(|c| c.elements().binary_search(&rep).is_ok())
                        .collect()
                }
                None => classes.iter().collect(),
            };
            if chosen.is_empty() {
                return Err(Error::ElementNotInGroup);
            }
            let cache = GroupPropertyCache::new(CachedProperty::Solvable);
            let mut profiles = Vec::new();
            for class in chosen {
                let profile = min_witness(&g, class, cli.budget, cli.samples, cli.seed, &cache)?;
                match profile.min_witness_k {
                    Some(k) => println!(
                        "class of {} (size {}): min_witness_k = {k}",
                        profile.class_rep, profile.class_size
                    ),
                    None => println!(
                        "class of {} (size {}): generates a solvable subgroup",
                        profile.class_rep, profile.class_size
                    ),
                }
                profiles.push(profile.to_json());
            }
            emit(
                cli,
                &serde_json::json!({
                    "schema": 1,
                    "group": spec.to_string(),
                    "profiles": profiles,
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BaerSuzuki { group, rep } => {
            let (spec, g) = build_group(group)?;
            let cache = GroupPropertyCache::new(CachedProperty::Nilpotent);
            let reps: Vec<Permutation> = match rep {
                Some(text) => vec![parse_rep(&g, text)?],
                None => conjugacy_classes(&g, DEFAULT_ENUMERATION_BOUND)?
                    .iter()
                    .map(|c| c.representative().clone())
                    .filter(|r| is_prime(r.order()))
                    .collect(),
            };
            if reps.is_empty() {
                return Err(Error::NotPrimeOrder(1));
            }
            let mut reports = Vec::new();
            for r in &reps {
                let report = baer_suzuki_check(&g, r, &cache)?;
                println!(
                    "element {}: pairs nilpotent = {}, closure nilpotent = {}",
                    report.element, report.all_pairs_nilpotent, report.closure_nilpotent
                );
                reports.push(serde_json::to_value(&report).expect("report serializes"));
            }
            emit(
                cli,
                &serde_json::json!({
                    "schema": 1,
                    "group": spec.to_string(),
                    "reports": reports,
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::T1Sweep { group } => {
            let specs: Vec<GroupSpec> = match group {
                Some(text) => vec![GroupSpec::parse(text)?],
                None => default_corpus(),
            };
            let mut rows = Vec::new();
            let mut checked = 0u64;
            for spec in &specs {
                let g = spec.build()?;
                if !is_solvable(&g) {
                    continue;
                }
                let classes = conjugacy_classes(&g, DEFAULT_ENUMERATION_BOUND)?;
                let full_closure_reps: Vec<Permutation> = classes
                    .iter()
                    .map(|c| c.representative().clone())
                    .filter(|r| {
                        !r.is_identity()
                            && solrad_core::group::normal_closure(&g, std::slice::from_ref(r))
                                .order()
                                == g.order()
                    })
                    .collect();
                if full_closure_reps.is_empty() {
                    continue;
                }
                for p in [5u64, 7, 11, 13] {
                    if g.order() % p == 0 {
                        continue;
                    }
                    let constituents = permutation_module_constituents(&g, p)?;
                    for module in constituents.iter().filter(|m| !m.trivial_action()) {
                        for a in &full_closure_reps {
                            let report = check_fixed_space_bound(module, a)?;
                            checked += 1;
                            rows.push(serde_json::json!({
                                "group": spec.to_string(),
                                "p": p,
                                "dim": report.dim,
                                "fixed_dim": report.fixed_dim,
                                "element": report.element.to_string(),
                            }));
                        }
                    }
                }
            }
            println!("checked {checked} (group, prime, constituent, element) cases; bound held in all");
            emit(
                cli,
                &serde_json::json!({
                    "schema": 1,
                    "cases": rows,
                    "violations": [],
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Survey { corpus, k } => {
            let specs: Vec<GroupSpec> = match corpus.as_str() {
                "default" => default_corpus(),
                other => other
                    .split(';')
                    .map(GroupSpec::parse)
                    .collect::<Result<_, _>>()?,
            };
            let started = std::time::Instant::now();
            let report = survey::run_survey(&specs, *k, cli.seed, cli.budget, cli.samples)?;
            eprintln!(
                "survey wall time: {:.2}s",
                started.elapsed().as_secs_f64()
            );
            for g in &report.groups {
                println!(
                    "{:<28} order {:>6}  radical {:>6}  {}",
                    g.spec,
                    g.order,
                    g.radical_order,
                    match &g.fitting {
                        Some(f) => format!("fh {}", f.height),
                        None => "nonsolvable".to_string(),
                    }
                );
            }
            let violations = report.theorem_violations.len();
            if violations > 0 {
                for v in &report.theorem_violations {
                    eprintln!("violation: {v}");
                }
            }
            println!("theorem violations: {violations}");
            emit(cli, &serde_json::to_value(&report).expect("survey serializes"))?;
            if violations > 0 {
                Ok(ExitCode::from(2))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}
