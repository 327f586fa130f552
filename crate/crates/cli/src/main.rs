use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cluster_loops::corpus::{random_arc, random_surface};
use cluster_loops::dot::{lattice_dot, loop_graph_dot, quiver_dot};
use cluster_loops::expansion::{
    expand, expand_tagged, normalize_by_tag_symmetry, specialize_boundary, VariableAssignment,
};
use cluster_loops::loopgraph::build_loop_graph;
use cluster_loops::mswcheck::{msw_expand_double, msw_expand_single, phi_double, phi_single};
use cluster_loops::mutation::{
    oracle_directions, search_flips, seed_from_triangulation, variable_by_flips, OracleCase,
};
use cluster_loops::poset::{check_lattice, lattice, quiver_of_loop};
use cluster_loops::surface::{ArcFile, Surface, TaggedArc};

/// `println!` that ignores a closed pipe.
macro_rules! say {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

const DEFAULT_SEED: u64 = 20_200_611;

#[derive(Parser)]
#[command(
    name = "cluster-loops",
    version,
    about = "Cluster variables of tagged arcs from good matchings of loop graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Laurent expansion of an arc.
    Expand {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        arc: PathBuf,
        /// Set boundary variables to 1.
        #[arg(long, num_args = 0..=1, default_missing_value = "1", value_parser = flag)]
        specialize_boundary: Option<bool>,
        /// Also list every good matching with its monomials.
        #[arg(long)]
        emit_matchings: bool,
        /// Write the loop graph as DOT.
        #[arg(long)]
        dot_output: Option<PathBuf>,
    },
    /// Write the lattice of good matchings (or the quiver, or the loop graph) as DOT.
    Lattice {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        arc: PathBuf,
        #[arg(long, value_enum, default_value = "lattice")]
        graph: GraphKind,
        /// Output file; standard output when omitted.
        #[arg(long)]
        dot_output: Option<PathBuf>,
    },
    /// Compare good matchings with γ-symmetric matchings or γ-compatible pairs.
    VerifyBijection {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        arc: PathBuf,
    },
    /// Compute a cluster variable by mutation along a flip sequence.
    Oracle {
        #[arg(long, required_unless_present = "cases")]
        surface: Option<PathBuf>,
        /// Comma-separated arc names, flipped left to right.
        #[arg(long, default_value = "")]
        flips: String,
        /// Arc whose variable is printed after the flips.
        #[arg(long, required_unless_present = "cases")]
        position: Option<String>,
        #[arg(long, num_args = 0..=1, default_missing_value = "1", value_parser = flag)]
        specialize_boundary: Option<bool>,
        /// Compare with the expansion of this arc (boundary set to 1).
        #[arg(long)]
        arc: Option<PathBuf>,
        /// Run every stored case in this JSON file instead.
        #[arg(long, conflicts_with_all = ["surface", "position", "arc"])]
        cases: Option<PathBuf>,
    },
    /// Run the property checks on randomly generated surfaces and arcs.
    Selftest {
        /// Overrides CLUSTER_LOOPS_SEED.
        #[arg(long)]
        seed: Option<u64>,
        /// Random instances per check.
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Lattice,
    Quiver,
    Loop,
}

fn flag(s: &str) -> Result<bool, String> {
    match s {
        "1" | "true" | "yes" => Ok(true),
        "0" | "false" | "no" => Ok(false),
        _ => Err(format!("expected 0 or 1, got {s:?}")),
    }
}

struct CliError {
    code: &'static str,
    message: String,
}

fn err(code: &'static str, e: impl Display) -> CliError {
    CliError {
        code,
        message: e.to_string(),
    }
}

type Res<T> = Result<T, CliError>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| err("io", format!("{}: {e}", path.display())))
}

fn load_surface(path: &Path) -> Res<Surface> {
    Surface::from_json(&read(path)?).map_err(|e| err("surface", e))
}

fn load_arc(s: &Surface, path: &Path) -> Res<TaggedArc> {
    let a = ArcFile::from_json(&read(path)?).map_err(|e| err("parse", e))?;
    s.resolve_arc(&a).map_err(|e| err("arc", e))
}

fn write_out(path: Option<&Path>, text: &str) -> Res<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| err("io", format!("{}: {e}", p.display()))),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn cmd_expand(
    surface: &Path,
    arc: &Path,
    specialize: bool,
    emit_matchings: bool,
    dot_output: Option<&Path>,
) -> Res<()> {
    let s = load_surface(surface)?;
    let g = load_arc(&s, arc)?;
    let va = VariableAssignment::new(&s);
    let mut p = expand_tagged(&s, &g).map_err(|e| err("expand", e))?;
    if specialize {
        p = specialize_boundary(&p, &s);
    }
    say!("{}", p.to_string_with(va.names()));
    let (g2, pairs) = normalize_by_tag_symmetry(&s, &g);
    if g2.underlying.is_some() {
        if emit_matchings || dot_output.is_some() {
            eprintln!("note: the underlying arc lies in the triangulation; no loop graph to show");
        }
        return Ok(());
    }
    let va2 = va.swapped(&pairs);
    let e = expand(&s, &g2, &va2).map_err(|e| err("expand", e))?;
    if emit_matchings {
        say!("cross {}", e.cross.to_string_with(va.names()));
        for (i, t) in e.terms.iter().enumerate() {
            let labels: Vec<&str> = e
                .loop_graph
                .labels_of(&t.matching)
                .into_iter()
                .map(|l| s.label_name(l))
                .collect();
            let classes: Vec<String> = t
                .matching
                .classes
                .iter()
                .map(|c| format!("{c:?}").to_lowercase())
                .collect();
            let height: Vec<String> = t.matching.height.iter().map(|j| (j + 1).to_string()).collect();
            say!(
                "matching {}: edges [{}] cuts [{}] height [{}] x {} y {}",
                i + 1,
                labels.join(", "),
                classes.join(", "),
                height.join(", "),
                t.x.to_string_with(va.names()),
                t.y.to_string_with(va.names())
            );
        }
    }
    if let Some(path) = dot_output {
        write_out(Some(path), &loop_graph_dot(&s, &e.loop_graph, None))?;
    }
    Ok(())
}

fn cmd_lattice(surface: &Path, arc: &Path, graph: GraphKind, dot_output: Option<&Path>) -> Res<()> {
    let s = load_surface(surface)?;
    let g = load_arc(&s, arc)?;
    let lg = build_loop_graph(&s, &g).map_err(|e| err("expand", e))?;
    let text = match graph {
        GraphKind::Lattice => lattice_dot(&s, &lg, &lattice(&lg), &VariableAssignment::new(&s)),
        GraphKind::Quiver => quiver_dot(&quiver_of_loop(&lg).map_err(|e| err("poset", e))?),
        GraphKind::Loop => loop_graph_dot(&s, &lg, None),
    };
    write_out(dot_output, &text)
}

fn cmd_verify_bijection(surface: &Path, arc: &Path) -> Res<()> {
    let s = load_surface(surface)?;
    let g = load_arc(&s, arc)?;
    let va = VariableAssignment::new(&s);
    let expected = expand(&s, &g, &va).map_err(|e| err("expand", e))?.polynomial;
    let (ok, agrees) = match g.n_notches() {
        1 => {
            let r = phi_single(&s, &g, &va).map_err(|e| err("msw", e))?;
            say!("ell_p k={} l={} tiles={}", r.ell.k, r.ell.l, r.ell.graph.len());
            say!("symmetric {} good {}", r.terms.len(), r.good.len());
            for ((c, cut), n) in r.class_counts() {
                say!("class {} -> {} {n}", c.name(), format!("{cut:?}").to_lowercase());
            }
            say!("monomial mismatches {}", r.mismatches.len());
            for &i in &r.mismatches {
                let t = &r.terms[i];
                say!("  mismatch term {}: barred x {} y {}", i + 1, t.barred.x, t.barred.y);
            }
            let m = msw_expand_single(&s, &g, &va).map_err(|e| err("msw", e))?;
            (r.ok(), m == expected)
        }
        2 => {
            let r = phi_double(&s, &g, &va).map_err(|e| err("msw", e))?;
            say!(
                "ell_p tiles={} ell_q tiles={} k={}",
                r.ell[0].graph.len(),
                r.ell[1].graph.len(),
                r.ell[0].k
            );
            say!("symmetric {} {}", r.symmetric[0], r.symmetric[1]);
            say!("pairs {} good {}", r.terms.len() + r.unmatched.len(), r.good.len());
            for (((a, b), (c, d)), n) in r.class_counts() {
                say!(
                    "class ({}, {}) -> ({}, {}) {n}",
                    a.name(),
                    b.name(),
                    format!("{c:?}").to_lowercase(),
                    format!("{d:?}").to_lowercase()
                );
            }
            say!("unmatched pairs {}", r.unmatched.len());
            let m = msw_expand_double(&s, &g, &va).map_err(|e| err("msw", e))?;
            (r.ok(), m == expected)
        }
        _ => return Err(err("msw", "the arc has no notched end")),
    };
    say!("expansions agree {}", if agrees { "yes" } else { "no" });
    say!("bijection {}", if ok { "ok" } else { "FAILED" });
    if ok && agrees {
        Ok(())
    } else {
        Err(err("check", "bijection or expansion check failed"))
    }
}

fn cmd_oracle(
    surface: Option<&Path>,
    flips: &str,
    position: Option<&str>,
    specialize: bool,
    arc: Option<&Path>,
    cases: Option<&Path>,
) -> Res<()> {
    if let Some(path) = cases {
        let cases: Vec<OracleCase> = serde_json::from_str(&read(path)?).map_err(|e| err("parse", e))?;
        let mut failed = 0;
        for c in &cases {
            let out = c.run().map_err(|e| err("oracle", format!("{}: {e}", c.name)))?;
            say!("{} {}", if out.agrees() { "agree" } else { "DIFFER" }, c.name);
            failed += usize::from(!out.agrees());
        }
        return if failed == 0 {
            Ok(())
        } else {
            Err(err("check", format!("{failed} of {} cases differ", cases.len())))
        };
    }
    let s = load_surface(surface.expect("required by clap"))?;
    let labels = flips
        .split(',')
        .map(str::trim)
        .filter(|f| !f.is_empty())
        .map(|f| s.label(f).map_err(|e| err("surface", e)))
        .collect::<Res<Vec<_>>>()?;
    let pos = s
        .label(position.expect("required by clap"))
        .map_err(|e| err("surface", e))?;
    let mut v = variable_by_flips(&s, &labels, pos).map_err(|e| err("mutation", e))?;
    if specialize {
        v = specialize_boundary(&v, &s);
    }
    let names = VariableAssignment::new(&s);
    say!("{}", v.to_string_with(names.names()));
    if let Some(a) = arc {
        let g = load_arc(&s, a)?;
        let e = specialize_boundary(&expand_tagged(&s, &g).map_err(|e| err("expand", e))?, &s);
        if e == specialize_boundary(&v, &s) {
            say!("agree");
        } else {
            say!("DIFFER expansion {}", e.to_string_with(names.names()));
            return Err(err("check", "oracle and expansion differ"));
        }
    }
    Ok(())
}

struct Check {
    name: &'static str,
    runs: usize,
    failures: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Check {
        Check {
            name,
            runs: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.runs += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn cmd_selftest(seed: Option<u64>, cases: usize) -> Res<()> {
    let seed = match seed {
        Some(s) => s,
        None => match std::env::var("CLUSTER_LOOPS_SEED") {
            Ok(v) => v
                .parse()
                .map_err(|_| err("usage", format!("CLUSTER_LOOPS_SEED={v:?} is not an integer")))?,
            Err(_) => DEFAULT_SEED,
        },
    };
    say!("seed {seed}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = [
        Check::new("adjacency-skew-symmetric"),
        Check::new("mutation-involution"),
        Check::new("good-matching-enumeration"),
        Check::new("positive-coefficients"),
        Check::new("lattice-of-ideals"),
        Check::new("msw-agreement"),
        Check::new("mutation-oracle"),
    ];
    let mut unconfirmed = 0;
    let mut done = 0;
    while done < cases {
        let n = rng.gen_range(4..=7);
        let punctures = rng.gen_range(0..=3);
        let t = random_surface(n, punctures, rng.gen_range(0..10), &mut rng);
        let s = Surface::build(&t).map_err(|e| err("surface", e))?;
        let b = s.adjacency_matrix();
        let skew = (0..b.len()).all(|i| (0..b.len()).all(|j| b[i][j] == -b[j][i]));
        checks[0].record(skew, || format!("{t:?}"));
        if s.n_arcs() > 0 {
            let seed0 = seed_from_triangulation(&s);
            let y: Vec<u32> = (0..s.n_arcs() as u32).collect();
            let i = rng.gen_range(0..s.n_arcs());
            let back = seed0.mutate(i, &y).and_then(|m| m.mutate(i, &y));
            checks[1].record(back.as_ref() == Ok(&seed0), || format!("direction {i}"));
        }
        let Some(g) = random_arc(&s, 6, 0.5, &mut rng) else {
            continue;
        };
        let Ok(p) = expand_tagged(&s, &g) else { continue };
        done += 1;
        let va = VariableAssignment::new(&s);
        let (g2, pairs) = normalize_by_tag_symmetry(&s, &g);
        if g2.underlying.is_none() {
            let va2 = va.swapped(&pairs);
            if let Ok(e) = expand(&s, &g2, &va2) {
                let lg = &e.loop_graph;
                let mut a: Vec<_> = lg.good_matchings().into_iter().map(|m| m.matching).collect();
                let mut b: Vec<_> = lg
                    .enumerate_good_matchings_bruteforce()
                    .into_iter()
                    .map(|m| m.matching)
                    .collect();
                a.sort();
                b.sort();
                checks[2].record(a == b, || format!("{:?}", g.crossings));
                checks[3].record(e.numerator().all_coefficients_positive(), || {
                    format!("{:?}", g.crossings)
                });
                if g2.n_notches() > 0 {
                    let ok = check_lattice(lg).is_ok_and(|c| c.ok(lg.len()));
                    checks[4].record(ok, || format!("{:?}", g.crossings));
                }
                if pairs.is_empty() && g.n_notches() > 0 {
                    let agrees = if g.n_notches() == 1 {
                        phi_single(&s, &g, &va).is_ok_and(|r| r.ok())
                            && msw_expand_single(&s, &g, &va).is_ok_and(|m| m == e.polynomial)
                    } else {
                        phi_double(&s, &g, &va).is_ok_and(|r| r.ok())
                            && msw_expand_double(&s, &g, &va).is_ok_and(|m| m == e.polynomial)
                    };
                    checks[5].record(agrees, || format!("{:?}", g.crossings));
                }
            }
        }
        let target = specialize_boundary(&p, &s);
        match search_flips(&s, &target, &oracle_directions(&s, &g), 100_000, seed) {
            Some((flips, pos)) => {
                let exact = variable_by_flips(&s, &flips, pos).map(|v| specialize_boundary(&v, &s));
                checks[6].record(exact.as_ref() == Ok(&target), || {
                    format!("{:?} via {flips:?}", g.crossings)
                });
            }
            None => unconfirmed += 1,
        }
    }
    let mut failed = 0;
    for c in &checks {
        let status = if c.failures.is_empty() { "pass" } else { "FAIL" };
        say!("{status} {} runs={} failures={}", c.name, c.runs, c.failures.len());
        for f in c.failures.iter().take(3) {
            say!("  {f}");
        }
        failed += c.failures.len();
    }
    say!("oracle searches without a candidate {unconfirmed}");
    if failed == 0 {
        Ok(())
    } else {
        Err(err("check", format!("{failed} property failures")))
    }
}

fn run(cli: Cli) -> Res<()> {
    match cli.command {
        Command::Expand {
            surface,
            arc,
            specialize_boundary,
            emit_matchings,
            dot_output,
        } => cmd_expand(
            &surface,
            &arc,
            specialize_boundary.unwrap_or(false),
            emit_matchings,
            dot_output.as_deref(),
        ),
        Command::Lattice {
            surface,
            arc,
            graph,
            dot_output,
        } => cmd_lattice(&surface, &arc, graph, dot_output.as_deref()),
        Command::VerifyBijection { surface, arc } => cmd_verify_bijection(&surface, &arc),
        Command::Oracle {
            surface,
            flips,
            position,
            specialize_boundary,
            arc,
            cases,
        } => cmd_oracle(
            surface.as_deref(),
            &flips,
            position.as_deref(),
            specialize_boundary.unwrap_or(false),
            arc.as_deref(),
            cases.as_deref(),
        ),
        Command::Selftest { seed, cases } => cmd_selftest(seed, cases),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error code=usage message={first}");
            return ExitCode::FAILURE;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error code={} message={}", e.code, e.message.replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
