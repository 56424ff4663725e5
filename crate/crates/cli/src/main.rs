//! `qcx`: contextuality analysis of quantum error-correcting codes.
//!
//! Subcommands: analyze, closure, scenario, switch, audit-csst, library,
//! graph. All structured output is JSON (rationals as "p/q" strings) and is
//! byte-identical for identical (argv, input files, --seed); DOT files carry
//! the graph and tree drawings.

mod report;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qcx_core::codes::{self, CodeFile, SubsystemCode};
use qcx_core::compat_graph::build_graph;
use qcx_core::partial_group::{
    default_closure_cap, determining_tree_witness, ks_value_assignment, partial_closure, si_avn,
};
use qcx_core::pauli::PauliOperator;
use qcx_core::scenario::{
    self, equivalence_battery, model_from_stabilizer_state, BatteryConfig, ModelFile,
    PossibilisticModel, ProbabilisticModel, StabilizerState,
};
use qcx_core::switching::{
    csst_bound_certificate, csst_matrix_for_code, protocol_from_codes, triorthogonality_audit,
};
use report::{
    AnalyzeResult, AuditResult, CertificateSummary, ClosureResult, CodeSummary, GraphResult,
    LibraryEntry, LibraryResult, Report, ScenarioChecks, ScenarioResult, SwitchResult,
};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "qcx", version, about = "Contextuality analysis of stabilizer and subsystem codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for the report.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for all randomized procedures.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Cap on partial-closure size (default 2·4^n).
    #[arg(long, global = true)]
    closure_cap: Option<usize>,

    /// Cap on the observable count of the exact LP.
    #[arg(long, global = true)]
    lp_cap: Option<usize>,

    /// Write a DOT rendering (compatibility graph or determining tree) here.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,

    /// JSON config file supplying defaults for seed and caps.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Include wall-clock timing in the report (off by default so identical
    /// inputs give byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze a subsystem code: parameters, verdict, Kirby-Love witness.
    Analyze {
        /// Code description file (JSON).
        #[arg(long)]
        code: Option<PathBuf>,
        /// Built-in code name (see `qcx library --list`).
        #[arg(long)]
        library: Option<String>,
    },
    /// Partial closure of a comma-separated Pauli list.
    Closure {
        #[arg(short = 'n', long)]
        qubits: usize,
        /// Comma-separated Pauli operators, e.g. "X0,X1,Z0,Z1".
        paulis: String,
        /// Closure cap override for this command.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Contextuality deciders on a measurement scenario or model file.
    Scenario {
        /// Empirical model file (JSON).
        #[arg(long)]
        model: Option<PathBuf>,
        /// Comma-separated Pauli observables.
        #[arg(long)]
        observables: Option<String>,
        #[arg(short = 'n', long)]
        qubits: Option<usize>,
        /// Replace the observables by their partial closure first.
        #[arg(long)]
        closure: bool,
        /// Stabilizer-state generators for the model, comma-separated.
        #[arg(long)]
        state_generators: Option<String>,
        /// Number of random stabilizer states to build models from.
        #[arg(long)]
        random_states: Option<usize>,
        /// Checks to run: strong, lp, avn, kl, ks (default: all applicable).
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Run the full equivalence battery instead of individual checks.
        #[arg(long)]
        battery: bool,
        /// Battery trial count.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Build the code-switching protocol of two codes and audit it.
    Switch {
        #[arg(long)]
        code_a: Option<PathBuf>,
        #[arg(long)]
        library_a: Option<String>,
        #[arg(long)]
        code_b: Option<PathBuf>,
        #[arg(long)]
        library_b: Option<String>,
    },
    /// Triorthogonality and mod-8 weight audit of a CSS code's G_{C1}.
    AuditCsst {
        #[arg(long)]
        code: Option<PathBuf>,
        #[arg(long)]
        library: Option<String>,
        /// Number of trailing rows forming the C2 block (default: all
        /// X-stabilizer rows).
        #[arg(long)]
        c2_rows: Option<usize>,
    },
    /// List or describe the built-in codes.
    Library {
        #[arg(long)]
        list: bool,
        #[arg(long)]
        name: Option<String>,
    },
    /// Compatibility graph of an observable set or a code's check set.
    Graph {
        #[arg(long)]
        observables: Option<String>,
        #[arg(short = 'n', long)]
        qubits: Option<usize>,
        #[arg(long)]
        library: Option<String>,
        #[arg(long)]
        code: Option<PathBuf>,
    },
}

#[derive(Debug, Default, Deserialize)]
struct ConfigFile {
    seed: Option<u64>,
    closure_cap: Option<usize>,
    lp_cap: Option<usize>,
    format: Option<String>,
}

/// Effective settings after merging flags over the config file.
struct Settings {
    format: Format,
    seed: u64,
    closure_cap: Option<usize>,
    lp_cap: usize,
    dot: Option<PathBuf>,
    timing: bool,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(error) => {
            eprintln!("error: {error:#}");
            std::process::exit(1);
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", p.display()))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let config = load_config(cli.config.as_deref())?;
    let format = cli.format.unwrap_or(match config.format.as_deref() {
        Some("text") => Format::Text,
        _ => Format::Json,
    });
    let settings = Settings {
        format,
        seed: cli.seed.or(config.seed).unwrap_or(0),
        closure_cap: cli.closure_cap.or(config.closure_cap),
        lp_cap: cli.lp_cap.or(config.lp_cap).unwrap_or(scenario::DEFAULT_LP_CAP),
        dot: cli.dot.clone(),
        timing: cli.timing,
    };
    let started = std::time::Instant::now();
    let argv: Vec<String> = std::env::args().skip(1).collect();

    let mut digest = report::InputDigest::new();
    let (command, results) = match &cli.command {
        Command::Analyze { code, library } => {
            let (name, code) = load_code(code.as_deref(), library.as_deref(), &mut digest)?;
            ("analyze", run_analyze(&name, &code, &settings)?)
        }
        Command::Closure { qubits, paulis, cap } => {
            digest.add_str(paulis);
            ("closure", run_closure(*qubits, paulis, *cap, &settings)?)
        }
        Command::Scenario {
            model,
            observables,
            qubits,
            closure,
            state_generators,
            random_states,
            checks,
            battery,
            trials,
        } => {
            let results = run_scenario(
                ScenarioArgs {
                    model: model.as_deref(),
                    observables: observables.as_deref(),
                    qubits: *qubits,
                    closure: *closure,
                    state_generators: state_generators.as_deref(),
                    random_states: *random_states,
                    checks,
                    battery: *battery,
                    trials: *trials,
                },
                &settings,
                &mut digest,
            )?;
            ("scenario", results)
        }
        Command::Switch {
            code_a,
            library_a,
            code_b,
            library_b,
        } => {
            let (name_a, a) = load_code(code_a.as_deref(), library_a.as_deref(), &mut digest)?;
            let (name_b, b) = load_code(code_b.as_deref(), library_b.as_deref(), &mut digest)?;
            ("switch", run_switch(&name_a, &a, &name_b, &b)?)
        }
        Command::AuditCsst { code, library, c2_rows } => {
            let (name, code) = load_code(code.as_deref(), library.as_deref(), &mut digest)?;
            ("audit-csst", run_audit(&name, &code, *c2_rows)?)
        }
        Command::Library { list: _, name } => ("library", run_library(name.as_deref())?),
        Command::Graph {
            observables,
            qubits,
            library,
            code,
        } => {
            let ops = if let Some(text) = observables {
                digest.add_str(text);
                let n = qubits.ok_or_else(|| anyhow!("--observables requires -n"))?;
                parse_pauli_list(text, n)?
            } else {
                let (_, code) = load_code(code.as_deref(), library.as_deref(), &mut digest)?;
                code.check_measurements()
            };
            ("graph", run_graph(&ops, &settings)?)
        }
    };

    let report = Report {
        schema_version: 1,
        command: command.to_string(),
        argv,
        inputs_digest: digest.finish(),
        seed: settings.seed,
        timing_ms: settings.timing.then(|| started.elapsed().as_millis()),
        results,
    };
    let output = match settings.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report)?),
        Format::Text => report.render_text(),
    };
    emit(&output);
    Ok(())
}

/// Writes to stdout, treating a closed pipe as a clean exit.
fn emit(text: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if let Err(error) = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        if error.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {error}");
        std::process::exit(1);
    }
}

fn parse_pauli_list(text: &str, n: usize) -> Result<Vec<PauliOperator>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| PauliOperator::parse(t, n).map_err(|e| anyhow!("invalid Pauli {t:?}: {e}")))
        .collect()
}

fn load_code(
    path: Option<&Path>,
    library: Option<&str>,
    digest: &mut report::InputDigest,
) -> Result<(String, SubsystemCode)> {
    match (path, library) {
        (Some(p), None) => {
            let text =
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            digest.add_str(&text);
            let file: CodeFile = serde_json::from_str(&text)
                .with_context(|| format!("parsing code file {}", p.display()))?;
            let code = file.to_code().with_context(|| format!("building code {}", file.name))?;
            Ok((file.name, code))
        }
        (None, Some(name)) => {
            digest.add_str(name);
            let code = codes::library_code(name)
                .ok_or_else(|| anyhow!("unknown library code {name:?}; try `qcx library --list`"))?;
            Ok((name.to_string(), code))
        }
        _ => bail!("exactly one of --code or --library is required"),
    }
}

fn run_analyze(name: &str, code: &SubsystemCode, settings: &Settings) -> Result<report::Results> {
    let verdict = code.contextuality_verdict();
    if let Some(path) = &settings.dot {
        let checks = code.check_measurements();
        let graph = build_graph(&checks);
        let witness = verdict.kl_witness.as_ref().map(|ops| {
            let index_of = |op: &PauliOperator| checks.iter().position(|c| c == op).unwrap();
            qcx_core::KlWitness {
                a: index_of(&ops[0]),
                b: index_of(&ops[1]),
                c: index_of(&ops[2]),
                d: index_of(&ops[3]),
            }
        });
        std::fs::write(path, graph.to_dot(witness.as_ref()))?;
    }
    Ok(report::Results::Analyze(AnalyzeResult {
        name: name.to_string(),
        n: code.qubits(),
        k: code.k(),
        s: code.s(),
        g: code.g(),
        verdict: verdict.classification,
        kl_witness: verdict
            .kl_witness
            .map(|ops| ops.iter().map(|p| p.to_string()).collect()),
    }))
}

fn run_closure(
    n: usize,
    paulis: &str,
    cap: Option<usize>,
    settings: &Settings,
) -> Result<report::Results> {
    let base = parse_pauli_list(paulis, n)?;
    let cap = cap
        .or(settings.closure_cap)
        .unwrap_or_else(|| default_closure_cap(n));
    let closure = partial_closure(&base, cap)?;
    if let Some(path) = &settings.dot {
        let mut dot = String::from("digraph provenance {\n");
        for (i, _) in closure.elements().iter().enumerate() {
            let tree_dot = closure.provenance(i).to_dot();
            let body: String = tree_dot
                .lines()
                .skip(1)
                .take_while(|l| *l != "}")
                .map(|l| l.replace("n", &format!("e{i}_n")))
                .collect::<Vec<_>>()
                .join("\n");
            dot.push_str(&format!("  subgraph cluster_{i} {{\n{body}\n  }}\n"));
        }
        dot.push_str("}\n");
        std::fs::write(path, dot)?;
    }
    Ok(report::Results::Closure(ClosureResult {
        n,
        cap,
        base: base.iter().map(|p| p.to_string()).collect(),
        size: closure.len(),
        elements: closure.elements().iter().map(|p| p.to_string()).collect(),
    }))
}

struct ScenarioArgs<'a> {
    model: Option<&'a Path>,
    observables: Option<&'a str>,
    qubits: Option<usize>,
    closure: bool,
    state_generators: Option<&'a str>,
    random_states: Option<usize>,
    checks: &'a [String],
    battery: bool,
    trials: Option<usize>,
}

fn run_scenario(
    args: ScenarioArgs,
    settings: &Settings,
    digest: &mut report::InputDigest,
) -> Result<report::Results> {
    // Resolve the observable set.
    let observables: Vec<PauliOperator> = if let Some(path) = args.model {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        digest.add_str(&text);
        let file: ModelFile = serde_json::from_str(&text)?;
        file.parse_observables()?
    } else if let Some(text) = args.observables {
        digest.add_str(text);
        let n = args.qubits.ok_or_else(|| anyhow!("--observables requires -n"))?;
        parse_pauli_list(text, n)?
    } else {
        bail!("one of --model or --observables is required");
    };
    if observables.is_empty() {
        bail!("empty observable set");
    }
    let n = observables[0].qubits();
    let closure_cap = settings.closure_cap.unwrap_or_else(|| default_closure_cap(n));

    if args.battery {
        let config = BatteryConfig {
            trials: args.trials.unwrap_or(100),
            closure_cap,
            lp_cap: settings.lp_cap.max(closure_cap),
            circuit_length: 48,
            seed: settings.seed,
        };
        let battery = equivalence_battery(&observables, &config)?;
        return Ok(report::Results::Scenario(ScenarioResult {
            observables: observables.iter().map(|p| p.to_string()).collect(),
            closure_applied: true,
            checks: ScenarioChecks {
                battery: Some(battery),
                ..ScenarioChecks::default()
            },
        }));
    }

    let effective: Vec<PauliOperator> = if args.closure {
        partial_closure(&observables, closure_cap)?.elements().to_vec()
    } else {
        observables.clone()
    };
    let scenario = scenario::scenario_from_observables(&effective)?;

    // Resolve the model, if any.
    let model: Option<ProbabilisticModel> = if let Some(path) = args.model {
        let text = std::fs::read_to_string(path)?;
        let file: ModelFile = serde_json::from_str(&text)?;
        if file.distributions.is_some() {
            Some(file.to_probabilistic()?)
        } else {
            None
        }
    } else if let Some(gens) = args.state_generators {
        let state = StabilizerState::from_generators(parse_pauli_list(gens, n)?)?;
        Some(model_from_stabilizer_state(&scenario, &state)?)
    } else {
        None
    };
    let possibilistic: Option<PossibilisticModel> = if let Some(m) = &model {
        Some(scenario::possibilistic_of(m))
    } else if let Some(path) = args.model {
        let text = std::fs::read_to_string(path)?;
        let file: ModelFile = serde_json::from_str(&text)?;
        file.supports.is_some().then(|| file.to_possibilistic()).transpose()?
    } else {
        None
    };

    let requested: Vec<&str> = if args.checks.is_empty() {
        let mut all = vec!["kl", "ks"];
        if possibilistic.is_some() {
            all.extend(["strong", "avn"]);
        }
        if model.is_some() {
            all.push("lp");
        }
        all
    } else {
        args.checks.iter().map(String::as_str).collect()
    };

    let mut checks = ScenarioChecks::default();
    for check in requested {
        match check {
            "kl" => {
                let (kl, witness) = build_graph(&effective).has_kirby_love();
                checks.kirby_love = Some(kl);
                checks.kl_witness = witness.map(|w| {
                    [w.a, w.b, w.c, w.d]
                        .iter()
                        .map(|&i| effective[i].to_string())
                        .collect()
                });
            }
            "ks" => {
                let closure = partial_closure(&observables, closure_cap)?;
                let (avn, certificate) = si_avn(&closure);
                checks.si_avn = Some(avn);
                checks.ks_contextual = Some(ks_value_assignment(&closure).is_none());
                if let Some(y) = certificate {
                    // Render the inconsistent equation subset: each selected
                    // row is a product of closure elements equal to ±I, and
                    // the right-hand sides sum to 1.
                    let theory = qcx_core::partial_group::linear_theory(&closure);
                    checks.si_avn_certificate = Some(
                        y.iter_ones()
                            .map(|row| {
                                let equation = &theory.equations[row];
                                report::ParityEquation {
                                    operators: equation
                                        .coeffs
                                        .iter_ones()
                                        .map(|i| closure.elements()[i].to_string())
                                        .collect(),
                                    rhs: u8::from(equation.rhs),
                                }
                            })
                            .collect(),
                    );
                }
                if let Some(path) = &settings.dot {
                    if let Some(tree) = determining_tree_witness(&closure) {
                        std::fs::write(path, tree.to_dot())?;
                    }
                }
            }
            "strong" => {
                let table = possibilistic
                    .as_ref()
                    .ok_or_else(|| anyhow!("--checks strong needs a model or state"))?;
                let section = scenario::global_section_search(table);
                checks.strongly_contextual = Some(section.is_none());
                checks.global_section = section
                    .map(|s| s.iter().map(|&b| u8::from(b)).collect());
            }
            "avn" => {
                let table = possibilistic
                    .as_ref()
                    .ok_or_else(|| anyhow!("--checks avn needs a model or state"))?;
                checks.state_dependent_avn = Some(scenario::state_dependent_avn(table));
            }
            "lp" => {
                let m = model
                    .as_ref()
                    .ok_or_else(|| anyhow!("--checks lp needs a probabilistic model"))?;
                match scenario::lp_noncontextuality(m, settings.lp_cap)? {
                    scenario::LpVerdict::Infeasible => {
                        checks.lp_contextual = Some(true);
                    }
                    scenario::LpVerdict::Feasible(d) => {
                        checks.lp_contextual = Some(false);
                        checks.global_distribution = Some(
                            d.entries()
                                .iter()
                                .map(|(k, v)| (format!("{k:b}"), v.to_string()))
                                .collect::<BTreeMap<_, _>>(),
                        );
                    }
                }
            }
            other => bail!("unknown check {other:?} (expected strong, lp, avn, kl, ks)"),
        }
    }

    // Model checks over freshly sampled stabilizer states, one row per state.
    if let Some(count) = args.random_states {
        use rand::SeedableRng;
        let mut outcomes = Vec::with_capacity(count);
        for trial in 0..count {
            let mut rng =
                rand_chacha::ChaCha8Rng::seed_from_u64(settings.seed.wrapping_add(trial as u64));
            let state = StabilizerState::random(n, 48, &mut rng);
            let model = model_from_stabilizer_state(&scenario, &state)?;
            let table = scenario::possibilistic_of(&model);
            outcomes.push(report::StateCheckOutcome {
                state_generators: state.generators().iter().map(|g| g.to_string()).collect(),
                strongly_contextual: scenario::global_section_search(&table).is_none(),
                state_dependent_avn: scenario::state_dependent_avn(&table),
                lp_contextual: scenario::lp_noncontextuality(&model, settings.lp_cap)?
                    .is_contextual(),
            });
        }
        checks.random_state_models = Some(outcomes);
    }

    Ok(report::Results::Scenario(ScenarioResult {
        observables: effective.iter().map(|p| p.to_string()).collect(),
        closure_applied: args.closure,
        checks,
    }))
}

fn summarize(name: &str, code: &SubsystemCode) -> CodeSummary {
    CodeSummary {
        name: name.to_string(),
        n: code.qubits(),
        k: code.k(),
        s: code.s(),
        g: code.g(),
    }
}

fn run_switch(
    name_a: &str,
    a: &SubsystemCode,
    name_b: &str,
    b: &SubsystemCode,
) -> Result<report::Results> {
    let protocol = protocol_from_codes(a, b)?;
    let verdict = qcx_core::switching::protocol_verdict(&protocol);

    // Orient the certificate: code1 must be the CSS-T side. Try (a, b) then
    // (b, a) and keep the first orientation whose hypotheses hold.
    let forward = csst_bound_certificate(&protocol)?;
    let certificate = if forward.hypotheses.all_hold() {
        forward
    } else {
        let reversed = protocol_from_codes(b, a)?;
        let backward = csst_bound_certificate(&reversed)?;
        if backward.hypotheses.all_hold() {
            backward
        } else {
            forward
        }
    };

    // Audit whichever side is CSS with the all-ones logical.
    let audit = [a, b].iter().find_map(|code| {
        let (g1, c2_rows) = csst_matrix_for_code(code).ok()?;
        let audit = triorthogonality_audit(&g1, c2_rows);
        audit.triorthogonal.then_some(audit)
    });

    Ok(report::Results::Switch(SwitchResult {
        code_a: summarize(name_a, a),
        code_b: summarize(name_b, b),
        parent: CodeSummary {
            name: format!("{name_a}+{name_b}"),
            n: protocol.parent.qubits(),
            k: protocol.parent.k(),
            s: protocol.parent.s(),
            g: protocol.parent.g(),
        },
        parent_gauge_rank: protocol.parent.gauge_rank(),
        parent_stabilizer_rank: protocol.parent.s(),
        verdict: verdict.classification,
        kl_witness: verdict
            .kl_witness
            .map(|ops| ops.iter().map(|p| p.to_string()).collect()),
        audit: audit.map(AuditResult::from_audit),
        bound_certificate: Some(CertificateSummary::from_certificate(&certificate)),
    }))
}

fn run_audit(name: &str, code: &SubsystemCode, c2_rows: Option<usize>) -> Result<report::Results> {
    let (g1, derived_c2) = csst_matrix_for_code(code)?;
    let c2 = c2_rows.unwrap_or(derived_c2);
    if c2 > g1.num_rows() {
        bail!("--c2-rows {c2} exceeds the {} rows of G_C1", g1.num_rows());
    }
    let audit = triorthogonality_audit(&g1, c2);
    let mut result = AuditResult::from_audit(audit);
    result.code = Some(name.to_string());
    result.g1_rows = Some(g1.num_rows());
    result.c2_rows = Some(c2);
    Ok(report::Results::Audit(result))
}

fn run_library(name: Option<&str>) -> Result<report::Results> {
    let entries: Vec<LibraryEntry> = codes::library()
        .into_iter()
        .filter(|(entry, _, _)| name.is_none_or(|n| n == *entry))
        .map(|(entry, build, distance)| {
            let code = build();
            LibraryEntry {
                summary: summarize(entry, &code),
                documented_distance: distance,
                verdict: code.contextuality_verdict().classification,
            }
        })
        .collect();
    if entries.is_empty() {
        bail!("unknown library code {:?}", name.unwrap_or(""));
    }
    Ok(report::Results::Library(LibraryResult { entries }))
}

fn run_graph(ops: &[PauliOperator], settings: &Settings) -> Result<report::Results> {
    let graph = build_graph(ops);
    let (kl, witness) = graph.has_kirby_love();
    if let Some(path) = &settings.dot {
        std::fs::write(path, graph.to_dot(witness.as_ref()))?;
    }
    let cliques = graph.maximal_cliques();
    Ok(report::Results::Graph(GraphResult {
        vertices: ops.iter().map(|p| p.to_string()).collect(),
        kirby_love: kl,
        kl_witness: witness.map(|w| [w.a, w.b, w.c, w.d].iter().map(|&i| ops[i].to_string()).collect()),
        universal_vertices: graph.universal_vertices(),
        context_count: cliques.len(),
        contexts: cliques,
    }))
}
