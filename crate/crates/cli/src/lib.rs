//! The `inca` command line.
//!
//! Exit codes: 0 success, 1 semantic error or a NO verdict, 2 usage error,
//! 3 resource or numerical failure (including exhausted search budgets).

use std::ffi::OsString;
use std::fmt;
use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use inca::capacity::{cap_report, lovasz_theta, message_graph, CapacityError, MessagePolicy};
use inca::invariants::{
    count_colorings, default_panel, fingerprint, linking_graph, quandle_presentation, validate_quandle, w_code,
    Fingerprint, LinkingVariant, MultiQuandle,
};
use inca::io::{
    corpus_entry, export_dot, parse_diagram, parse_quandle, random_diagram, sample_diagram_seeded, serialize, Cache,
    CacheRecord, RandomSpec, CORPUS,
};
use inca::search::{equivalent_with_panel, is_trivial, simplify_traced, SearchBudget, Verdict};
use inca::sum::prime_factorize;
use inca::{canonical_code, canonicalize, underlying_graph, GaussDiagram, Kind};

/// Output of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "inca",
    version,
    about = "Gauss diagrams of Inca foams: moves, search and invariants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone)]
struct BudgetArgs {
    /// Maximum number of moves.
    #[arg(long, default_value_t = 4)]
    depth: usize,
    /// Maximum number of visited states.
    #[arg(long, default_value_t = 200_000)]
    states: usize,
    /// Allow (de)stabilization.
    #[arg(long)]
    stable: bool,
    /// Allow false (de)stabilization.
    #[arg(long = "false")]
    use_false: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget::depth(self.depth)
            .states(self.states.max(1))
            .stable(self.stable)
            .with_false(self.use_false)
            .workers(self.workers)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Inca,
    Dot,
    Wcode,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a diagram document.
    Validate { input: String },
    /// Print the canonical document.
    Canon { input: String },
    /// Greedy simplification.
    Simplify {
        input: String,
        #[arg(long, default_value_t = 32)]
        max_steps: usize,
        #[arg(long, default_value_t = 10_000)]
        states: usize,
        #[arg(long)]
        stable: bool,
        #[arg(long = "false")]
        use_false: bool,
    },
    /// Bounded equivalence search.
    Equiv {
        left: String,
        right: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Invariants of a diagram.
    Invariants {
        input: String,
        /// Builtin (`dihedral:N`, `trivial:N`, `alexander:N:T`, `tetrahedral`) or a quandle file.
        #[arg(long)]
        quandle: Vec<String>,
        /// Also print per-vertex vectors for this linking variant.
        #[arg(long)]
        linking: Option<String>,
        /// Also print the fundamental quandle presentation.
        #[arg(long)]
        presentation: bool,
    },
    /// Message capacities over a finite quandle.
    Capacity {
        input: String,
        #[arg(long)]
        quandle: String,
        #[arg(long, default_value_t = 2)]
        kmax: usize,
        /// `aut`, `aut+triples`, `triples` or `none`.
        #[arg(long, default_value = "aut")]
        policy: String,
        /// Also compute the Lovász theta of the one-letter graph.
        #[arg(long)]
        theta: bool,
    },
    /// Agent-wise prime factorization.
    Factorize {
        input: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Convert to another format.
    Convert {
        input: String,
        #[arg(long, value_enum)]
        to: Format,
    },
    /// Generate a random diagram.
    Gen {
        #[arg(long)]
        seed: u64,
        /// Comma-separated `cycle:N` / `path:N`; random shape when omitted.
        #[arg(long)]
        components: Option<String>,
        #[arg(long, default_value_t = 0)]
        interactions: usize,
        #[arg(long, default_value_t = 0)]
        marks: usize,
        /// Vertex bound for random shapes.
        #[arg(long, default_value_t = 12)]
        max_vertices: usize,
    },
    /// List the bundled example diagrams.
    Corpus,
}

struct Report {
    out: String,
    code: i32,
}

impl Report {
    fn new() -> Self {
        Report {
            out: String::new(),
            code: 0,
        }
    }

    fn kv(&mut self, key: &str, value: impl fmt::Display) {
        let _ = writeln!(self.out, "{key}: {value}");
    }

    fn raw(&mut self, text: &str) {
        self.out.push_str(text);
        if !text.ends_with('\n') {
            self.out.push('\n');
        }
    }
}

/// Runs with the cache path taken from `INCA_CACHE`.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_cache(argv, Cache::path_from_env())
}

pub fn run_with_cache<I, T>(argv: I, cache: Option<PathBuf>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut warnings = String::new();
    match dispatch(cli.command, cache.as_deref(), &mut warnings) {
        Ok(r) => Outcome {
            code: r.code,
            stdout: r.out,
            stderr: warnings,
        },
        Err(e) => {
            let resource = e.downcast_ref::<CapacityError>().is_some();
            let _ = writeln!(warnings, "error: {e:#}");
            Outcome {
                code: if resource { 3 } else { 1 },
                stdout: String::new(),
                stderr: warnings,
            }
        }
    }
}

fn read_text(input: &str) -> Result<String> {
    if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    if let Some(name) = input.strip_prefix("corpus:") {
        return corpus_entry(name)
            .map(|e| e.text.to_string())
            .ok_or_else(|| anyhow!("no corpus entry `{name}`"));
    }
    std::fs::read_to_string(input).with_context(|| format!("reading {input}"))
}

fn load(input: &str) -> Result<GaussDiagram> {
    let text = read_text(input)?;
    parse_diagram(&text).map_err(|e| anyhow!("{input}:{e}"))
}

fn load_quandle(spec: &str) -> Result<MultiQuandle> {
    let q = match MultiQuandle::builtin(spec) {
        Some(q) => q,
        None => {
            let path = PathBuf::from(spec);
            if !path.exists() {
                bail!("`{spec}` is neither a builtin quandle nor a readable file");
            }
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {spec}"))?;
            let name = path
                .file_stem()
                .map_or(spec.to_string(), |s| s.to_string_lossy().into_owned());
            parse_quandle(&name, &text).map_err(|e| anyhow!("{spec}: {e}"))?
        }
    };
    let violations = validate_quandle(&q);
    if let Some(v) = violations.first() {
        bail!(
            "{spec}: not a multi-quandle ({} violations; first: {v})",
            violations.len()
        );
    }
    Ok(q)
}

fn open_cache(path: Option<&Path>, warnings: &mut String) -> Option<Cache> {
    let path = path?;
    match Cache::open(path) {
        Ok(c) => {
            if c.corrupted() > 0 {
                let _ = writeln!(warnings, "warning: skipped {} corrupted cache records", c.corrupted());
            }
            Some(c)
        }
        Err(e) => {
            let _ = writeln!(warnings, "warning: cache disabled ({}: {e})", path.display());
            None
        }
    }
}

fn panel_key(panel: &[MultiQuandle]) -> String {
    let names: Vec<&str> = panel.iter().map(|q| q.name()).collect();
    format!("fingerprint {}", names.join(","))
}

fn cached_fingerprint(d: &GaussDiagram, panel: &[MultiQuandle], cache: &mut Option<Cache>) -> Fingerprint {
    let code = canonical_code(d).to_string();
    let key = panel_key(panel);
    if let Some(fp) = cache
        .as_ref()
        .and_then(|c| c.get(&code, &key))
        .and_then(|r| r.fingerprint.clone())
    {
        return fp;
    }
    let fp = fingerprint(d, panel);
    if let Some(c) = cache.as_mut() {
        let _ = c.put(CacheRecord {
            code,
            budget: key,
            fingerprint: Some(fp.clone()),
            simplified: None,
        });
    }
    fp
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn dispatch(cmd: Command, cache_path: Option<&Path>, warnings: &mut String) -> Result<Report> {
    let mut r = Report::new();
    match cmd {
        Command::Validate { input } => {
            let d = load(&input)?;
            r.kv("valid", "yes");
            r.kv("components", d.components().len());
            r.kv("vertices", d.vertex_count());
            r.kv("edges", d.edge_count());
            r.kv("interactions", d.interaction_count());
            r.kv("acting_agents", d.support().len());
            r.kv("marks", d.marks().len());
        }
        Command::Canon { input } => {
            let d = load(&input)?;
            let (c, code) = canonicalize(&d);
            let _ = writeln!(r.out, "# code: {code}");
            r.raw(&serialize(&c));
        }
        Command::Simplify {
            input,
            max_steps,
            states,
            stable,
            use_false,
        } => {
            let d = load(&input)?;
            let budget = SearchBudget::depth(max_steps)
                .states(states.max(1))
                .stable(stable)
                .with_false(use_false);
            let code = canonical_code(&d).to_string();
            let key = format!("simplify {}", budget.describe());
            let mut cache = open_cache(cache_path, warnings);
            let hit = cache
                .as_ref()
                .and_then(|c| c.get(&code, &key))
                .and_then(|rec| rec.simplified.clone());
            let (doc, steps) = match hit {
                Some(doc) => {
                    let steps = doc
                        .lines()
                        .find_map(|l| l.strip_prefix("# steps: "))
                        .and_then(|s| s.parse::<usize>().ok())
                        .unwrap_or(0);
                    (doc, steps)
                }
                None => {
                    let s = simplify_traced(&d, &budget);
                    let doc = format!("# steps: {}\n{}", s.witness.len(), serialize(&s.diagram));
                    if let Some(c) = cache.as_mut() {
                        let _ = c.put(CacheRecord {
                            code,
                            budget: key,
                            fingerprint: None,
                            simplified: Some(doc.clone()),
                        });
                    }
                    (doc, s.witness.len())
                }
            };
            let out = parse_diagram(&doc).map_err(|e| anyhow!("cached simplification: {e}"))?;
            r.kv("interactions_before", d.interaction_count());
            r.kv("interactions_after", out.interaction_count());
            r.kv("vertices_after", out.vertex_count());
            r.kv("steps", steps);
            r.kv("trivial", yes_no(out.is_trivial()));
            r.raw(&serialize(&out));
        }
        Command::Equiv { left, right, budget } => {
            let a = load(&left)?;
            let b = load(&right)?;
            let budget = budget.budget();
            let panel = default_panel();
            let mut cache = open_cache(cache_path, warnings);
            let fa = cached_fingerprint(&a, &panel, &mut cache);
            let fb = cached_fingerprint(&b, &panel, &mut cache);
            let verdict = match fa.distinguish(&fb, budget.move_class()) {
                Some(cert) => Verdict::No(cert),
                None => equivalent_with_panel(&a, &b, &budget, &[]),
            };
            r.kv("verdict", verdict.name());
            match verdict {
                Verdict::Yes(w) => {
                    r.kv("steps", w.len());
                    let mut cur = w.start.clone();
                    for mv in &w.steps {
                        r.kv("move", mv.describe(&cur));
                        cur = canonicalize(&inca::apply(&cur, mv)?).0;
                    }
                }
                Verdict::No(cert) => {
                    r.kv("certificate", &cert.name);
                    r.kv("left", &cert.left);
                    r.kv("right", &cert.right);
                    r.code = 1;
                }
                Verdict::Unknown => {
                    r.kv("budget", budget.describe());
                    r.code = 3;
                }
            }
        }
        Command::Invariants {
            input,
            quandle,
            linking,
            presentation,
        } => {
            let d = load(&input)?;
            let quandles = if quandle.is_empty() {
                default_panel()
            } else {
                quandle.iter().map(|s| load_quandle(s)).collect::<Result<Vec<_>>>()?
            };
            let detail = match linking.as_deref() {
                None => None,
                Some(s) => Some(LinkingVariant::parse(s).ok_or_else(|| {
                    anyhow!("unknown linking variant `{s}` (full, unframed, reduced, reduced-unframed)")
                })?),
            };
            r.kv("code", canonical_code(&d));
            r.kv("underlying_graph", underlying_graph(&d));
            r.kv("acting_agents", d.support().len());
            r.kv(
                "linking_reduced_unframed",
                linking_graph(&d, LinkingVariant::ReducedUnframed),
            );
            r.kv("w_code", w_code(&d));
            if quandles.len() == 1 {
                r.kv("quandle", quandles[0].name());
                r.kv("colorings", count_colorings(&d, &quandles[0]));
            } else {
                for q in &quandles {
                    r.kv(&format!("colorings[{}]", q.name()), count_colorings(&d, q));
                }
            }
            if let Some(variant) = detail {
                let g = linking_graph(&d, variant);
                r.kv(&format!("linking_{}", variant.name()), &g);
                if !variant.is_reduced() {
                    for v in d.vertices() {
                        if let Some(vec) = g.vector(v) {
                            if vec.iter().any(|&x| x != 0) {
                                let cells: Vec<String> = vec.iter().map(i64::to_string).collect();
                                r.kv(
                                    &format!("vector {}", d.vertex_name(v)),
                                    format!("({})", cells.join(", ")),
                                );
                            }
                        }
                    }
                }
            }
            if presentation {
                let p = quandle_presentation(&d);
                for line in p.to_string().lines() {
                    r.kv("presentation", line);
                }
            }
        }
        Command::Capacity {
            input,
            quandle,
            kmax,
            policy,
            theta,
        } => {
            let d = load(&input)?;
            let q = load_quandle(&quandle)?;
            let policy = MessagePolicy::parse(&policy)
                .ok_or_else(|| anyhow!("unknown policy `{policy}` (aut, aut+triples, triples, none)"))?;
            let rep = cap_report(&d, &q, kmax, policy)?;
            r.kv("quandle", q.name());
            r.kv("policy", policy.name());
            for (i, c) in rep.caps.iter().enumerate() {
                r.kv(&format!("cap_{}", i + 1), c);
            }
            r.kv("lower_bound", format!("{:.6}", rep.lower_bound));
            r.kv("upper_bound", rep.upper_bound);
            if theta {
                let g = message_graph(&d, &q, 1, policy)?;
                r.kv("theta_1", format!("{:.6}", lovasz_theta(&g, 1e-8)?));
            }
        }
        Command::Factorize { input, budget } => {
            let d = load(&input)?;
            let budget = budget.budget();
            let f = prime_factorize(&d, &budget);
            r.kv("base", &f.graph);
            r.kv("factors", f.factors.len());
            r.kv("units", f.units.len());
            r.kv("exhaustive", yes_no(f.exhaustive));
            for fac in &f.factors {
                let verdict = match &fac.verdict {
                    Verdict::No(_) => "prime",
                    _ => "undecided",
                };
                r.kv(
                    &format!("factor {}", d.vertex_name(fac.agent)),
                    format!(
                        "{verdict} interactions={} linking={}",
                        fac.diagram.interaction_count(),
                        fac.fingerprint.linking
                    ),
                );
            }
            for u in &f.units {
                r.kv("unit", d.vertex_name(u.agent));
            }
            // Units of a syntactic split need not cancel in the sum.
            r.kv("sum_trivial", is_trivial(&d, &budget).name());
        }
        Command::Convert { input, to } => {
            let d = load(&input)?;
            match to {
                Format::Inca => r.raw(&serialize(&d)),
                Format::Dot => r.raw(&export_dot(&d)),
                Format::Wcode => {
                    let w = w_code(&d);
                    r.kv("w_code", &w);
                    r.kv("code", w.code());
                }
            }
        }
        Command::Gen {
            seed,
            components,
            interactions,
            marks,
            max_vertices,
        } => {
            let d = match components {
                None => sample_diagram_seeded(seed, max_vertices.max(1), 4),
                Some(spec) => {
                    let comps = parse_shape(&spec)?;
                    let spec = RandomSpec {
                        components: comps,
                        interactions,
                        marks,
                    };
                    random_diagram(&spec, seed)?
                }
            };
            let _ = writeln!(r.out, "# seed: {seed}");
            r.raw(&serialize(&d));
        }
        Command::Corpus => {
            for e in CORPUS {
                let d = e.diagram();
                let source = e.source().map(|s| format!(" source={s}")).unwrap_or_default();
                r.kv(
                    e.name,
                    format!(
                        "components={} interactions={}{source}",
                        d.components().len(),
                        d.interaction_count()
                    ),
                );
            }
        }
    }
    Ok(r)
}

fn parse_shape(spec: &str) -> Result<Vec<(Kind, usize)>> {
    spec.split(',')
        .map(|part| {
            let (kind, n) = part
                .trim()
                .split_once(':')
                .ok_or_else(|| anyhow!("expected `cycle:N` or `path:N`, found `{part}`"))?;
            let kind = match kind {
                "cycle" => Kind::Cycle,
                "path" => Kind::Path,
                other => bail!("unknown component kind `{other}`"),
            };
            let n: usize = n.parse().with_context(|| format!("bad size in `{part}`"))?;
            if n == 0 || n > 4096 {
                bail!("component size must be in 1..=4096");
            }
            Ok((kind, n))
        })
        .collect()
}
