//! Command-line front end.
//!
//! Exit status: 0 when everything requested succeeded, 1 when a check
//! failed or a search gave up, 2 for malformed input, 3 for an internal
//! error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::action::Word;
use crate::automaton::{explore, Bounds, ExplorationOutcome, MealyAutomaton, WordDictionary};
use crate::digits::{finite_state_digits, non_finite_state_digits};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::reproduction::verify_paper;
use crate::schreier::{ball_growth, level_graph, orbital_growth, GrowthEstimate};
use crate::spec_io::{write_json, ProblemSpec};
use crate::spectral::{classify, core_is_trivial};

#[derive(Parser, Debug)]
#[command(
    name = "selfsim",
    version,
    about = "Self-similar actions from virtual endomorphisms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug)]
pub struct SpecArg {
    /// JSON problem spec, or a bundled name: `heisenberg`, `heisenberg_prime`
    /// (identity digit replaced by a) or `odometer`.
    #[arg(long, default_value = "heisenberg")]
    pub spec: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DigitMode {
    Finite,
    Nonfinite,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Image of a word under an element.
    Act {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        word: String,
    },
    /// Section of an element at a word.
    State {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        word: String,
        /// Also evaluate the closed-form product and compare.
        #[arg(long)]
        closed_form: bool,
    },
    /// Explore the states reachable from the seeds.
    Automaton {
        #[command(flatten)]
        spec: SpecArg,
        /// Named element or coordinates; repeatable.
        #[arg(long = "seed", required = true, allow_hyphen_values = true)]
        seeds: Vec<String>,
        #[arg(long, default_value_t = Bounds::default().max_states)]
        max_states: usize,
        #[arg(long, default_value_t = Bounds::default().max_depth)]
        max_depth: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Spectral classification of φ and triviality of the φ-core.
    Classify {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        json: bool,
    },
    /// Construct a digit set; prints the spec with it filled in.
    Digits {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, value_enum)]
        mode: DigitMode,
        /// Power applied to central digits in nonfinite mode.
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Ball growth in the Schreier graph around a basepoint.
    Schreier {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        level: usize,
        /// Letters of the basepoint; if shorter than level + lookahead it is
        /// continued with its last letter.
        #[arg(long)]
        basepoint: String,
        /// Extra depth used to find where the level-n balls are exact; 0
        /// fits on the finite level graph alone.
        #[arg(long, default_value_t = 4)]
        lookahead: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check the worked Heisenberg example against its published claims.
    VerifyPaper {
        #[arg(long)]
        json: bool,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unsupported(_)
        | Error::NoFixedElement
        | Error::SearchExhausted(_)
        | Error::InvalidK(_)
        | Error::ResourceCap(_)
        | Error::InsufficientRange(_) => 1,
        _ => 2,
    }
}

fn load_spec(s: &SpecArg) -> Result<ProblemSpec> {
    let path = Path::new(&s.spec);
    if !path.exists() {
        if let Some(spec) = ProblemSpec::bundled(&s.spec) {
            return Ok(spec);
        }
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    ProblemSpec::from_json(&text)
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn transition_table(m: &MealyAutomaton, spec: &ProblemSpec, dict: &WordDictionary) -> String {
    let al = spec.action().map(|a| a.alphabet()).expect("action exists");
    let mut out = String::new();
    for (i, s) in m.states.iter().enumerate() {
        let edges: Vec<String> = m.transitions[i]
            .iter()
            .enumerate()
            .map(|(x, &(y, t))| format!("{}|{}→s{t}", al.label(x), al.label(y)))
            .collect();
        out.push_str(&format!(
            "s{i} {} {}: {}\n",
            dict.name_or_coords(s),
            s,
            edges.join(" ")
        ));
    }
    out
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = String::new();
    write_json(v, 0, &mut s);
    s.push('\n');
    s
}

fn growth_lines(est: &GrowthEstimate) -> String {
    format!(
        "radius {}\nfit window [{}, {}]\nfitted degree {:.4}\nresidual {:.4}\nball sizes {:?}\n",
        est.radius,
        est.fit_window.0,
        est.fit_window.1,
        est.fitted_degree,
        est.residual,
        est.ball_sizes
    )
}

/// Runs one command; returns the exit status.
fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    let mut say = |s: String| {
        let _ = out.write_all(s.as_bytes());
    };
    match cmd {
        Command::Act {
            spec,
            element,
            word,
        } => {
            let spec = load_spec(&spec)?;
            let a = spec.action()?;
            let g = spec.resolve(&element)?;
            let w = a.alphabet().parse(&word)?;
            say(format!("{}\n", a.alphabet().format(&a.act(&g, &w)?)));
            Ok(0)
        }
        Command::State {
            spec,
            element,
            word,
            closed_form,
        } => {
            let spec = load_spec(&spec)?;
            let a = spec.action()?;
            let dict = spec.dictionary();
            let g = spec.resolve(&element)?;
            let w = a.alphabet().parse(&word)?;
            let s = a.state(&g, &w)?;
            say(format!("{} {}\n", s, dict.name_or_coords(&s)));
            if closed_form {
                let c = a.state_closed_form(&g, &w)?;
                let agree = c == s;
                say(format!(
                    "closed form {c} {}\n",
                    if agree { "agrees" } else { "DISAGREES" }
                ));
                return Ok(if agree { 0 } else { 1 });
            }
            Ok(0)
        }
        Command::Automaton {
            spec,
            seeds,
            max_states,
            max_depth,
            dot,
        } => {
            let spec = load_spec(&spec)?;
            let a = spec.action()?;
            let dict = spec.dictionary();
            let seeds = seeds
                .iter()
                .map(|s| spec.resolve(s))
                .collect::<Result<Vec<GroupElement>>>()?;
            match explore(
                &a,
                &seeds,
                Bounds {
                    max_states,
                    max_depth,
                },
            )? {
                ExplorationOutcome::Finite(m) => {
                    say(format!(
                        "Finite: {} states, {} edges\n",
                        m.len(),
                        m.edge_count()
                    ));
                    say(transition_table(&m, &spec, &dict));
                    let d = m.to_dot(a.alphabet(), Some(&dict));
                    match dot {
                        Some(p) => write_file(&p, &d)?,
                        None => say(d),
                    }
                    Ok(0)
                }
                ExplorationOutcome::BoundExceeded(r) => {
                    say(format!(
                        "BoundExceeded: {} states, frontier depth {}\nwitness chain:\n",
                        r.states_found, r.frontier_depth
                    ));
                    for (w, g) in &r.witness_chain {
                        let w = if w.is_empty() {
                            "ε".to_string()
                        } else {
                            a.alphabet().format(w)
                        };
                        say(format!("  {w} {g} {}\n", dict.name_or_coords(g)));
                    }
                    Ok(1)
                }
            }
        }
        Command::Classify { spec, json } => {
            let spec = load_spec(&spec)?;
            let c = classify(&spec.phi);
            let core = core_is_trivial(&spec.phi);
            let orders: Vec<u64> = c.split.unit_root_part.iter().map(|f| f.order).collect();
            let (trivial, factor) = match &core {
                Ok(r) => (
                    Some(r.trivial),
                    r.integral_factor.as_ref().map(ToString::to_string),
                ),
                Err(_) => (None, None),
            };
            if json {
                let v = json!({
                    "verdict": c.verdict.to_string(),
                    "chi": c.chi.to_string(),
                    "mu": c.mu.to_string(),
                    "cyclotomic_orders": orders,
                    "lcm_order": c.split.lcm_order,
                    "schur_cohn": {
                        "chi_inside_disk": c.chi_inside_disk,
                        "remainder_inside_disk": c.remainder_inside_disk,
                    },
                    "semisimple_on_unit_circle": c.semisimple,
                    "core_trivial": trivial,
                    "integral_factor": factor,
                    "core_error": core.as_ref().err().map(ToString::to_string),
                });
                say(json_text(&v));
            } else {
                say(format!("verdict: {}\n", c.verdict));
                say(format!("chi: {}\nmu: {}\n", c.chi, c.mu));
                say(format!(
                    "cyclotomic orders: {orders:?} (lcm {})\n",
                    c.split.lcm_order
                ));
                say(format!("chi inside unit disk: {}\n", c.chi_inside_disk));
                say(format!(
                    "remainder inside unit disk: {}\n",
                    c.remainder_inside_disk
                ));
                say(format!("semisimple on unit circle: {}\n", c.semisimple));
                match &core {
                    Ok(r) => {
                        say(format!("core trivial: {}\n", r.trivial));
                        if let Some(f) = &factor {
                            say(format!("integral factor: {f}\n"));
                        }
                    }
                    Err(e) => say(format!("core trivial: unknown ({e})\n")),
                }
            }
            Ok(0)
        }
        Command::Digits { spec, mode, k } => {
            let spec = load_spec(&spec)?;
            let d = match mode {
                DigitMode::Finite => finite_state_digits(&spec.phi)?,
                DigitMode::Nonfinite => {
                    let base = match &spec.digits {
                        Some(d) => d.clone(),
                        None => finite_state_digits(&spec.phi)?,
                    };
                    non_finite_state_digits(&spec.phi, &base, k)?
                }
            };
            say(format!("{}\n", spec.with_digits(d).to_json()));
            Ok(0)
        }
        Command::Schreier {
            spec,
            level,
            basepoint,
            lookahead,
            csv,
            dot,
        } => {
            let spec = load_spec(&spec)?;
            let a = spec.action()?;
            let gens: Vec<GroupElement> = spec
                .generator_elements()
                .into_iter()
                .map(|(_, g)| g)
                .collect();
            let mut w = a.alphabet().parse(&basepoint)?.0;
            if w.len() < level {
                return Err(Error::InvalidLetter(format!(
                    "basepoint shorter than level {level}"
                )));
            }
            let last = *w.last().unwrap_or(&0);
            while w.len() < level + lookahead {
                w.push(last);
            }
            let est = if lookahead == 0 {
                ball_growth(&level_graph(&a, &gens, level, &Word(w[..level].to_vec()))?)?
            } else {
                orbital_growth(&a, &gens, &Word(w.clone()), level)?
            };
            say(growth_lines(&est));
            if let Some(p) = csv {
                write_file(&p, &est.to_csv())?;
            }
            if let Some(p) = dot {
                let g = level_graph(&a, &gens, level, &Word(w[..level].to_vec()))?;
                write_file(&p, &g.to_dot(a.alphabet()))?;
            }
            Ok(0)
        }
        Command::VerifyPaper { json } => {
            let checks = verify_paper();
            let all = checks.iter().all(|c| c.passed);
            if json {
                let items: Vec<_> = checks
                    .iter()
                    .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail, "seconds": c.seconds}))
                    .collect();
                let v = json!({"passed": all, "checks": items});
                say(json_text(&v));
            } else {
                for c in &checks {
                    say(format!("{c}\n"));
                }
                let n = checks.iter().filter(|c| c.passed).count();
                say(format!("{n}/{} checks passed\n", checks.len()));
            }
            Ok(if all { 0 } else { 1 })
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let result =
        std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(cli.command, out)));
    match result {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(_) => {
            let _ = writeln!(err, "internal error");
            3
        }
    }
}
