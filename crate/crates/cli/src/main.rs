//! `bcx`: build boundary complexes, apply moves, and compare complexes up to
//! simple homotopy.
//!
//! The primary artifact of each verb goes to `--out` (or stdout); short
//! reports go to stderr. Exit codes: 0 success, 64 malformed input, 65
//! semantic failure; `equiv` exits 1 when not equivalent and 2 when
//! inconclusive.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bcx::boundary::{
    blowup_move, build_boundary_complex, build_stacky_boundary_complex, root_move, validate_annotation,
    CenterAnnotation, MultiplicityLedger, StrataIncidence,
};
use bcx::cones::{barycentric_subdivision, cone_over, snc_reduce, star_subdivision, to_delta_complex, ConeId};
use bcx::homotopy::{collapse_core, homology, replay, simple_homotopy_equivalent, Budget, MoveCertificate, Verdict};
use bcx::io::{complex_from_json, complex_to_json, from_json, to_dot, to_json, StackyInput};
use bcx::symdelta::canonical_form;
use bcx::{Error, GeneralizedDeltaComplex};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Args)]
struct Output {
    /// Write the primary artifact here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit complexes in canonical form
    #[arg(long, global = true)]
    canonical: bool,
}

#[derive(Args)]
struct BudgetArgs {
    /// Maximum number of moves in a certificate
    #[arg(long, default_value_t = 32)]
    budget_moves: usize,
    /// Maximum number of complexes explored
    #[arg(long, default_value_t = 10000)]
    budget_states: usize,
    /// Highest dimension of an expansion [default: input dimension + 1]
    #[arg(long)]
    max_expand_dim: Option<usize>,
}

impl From<&BudgetArgs> for Budget {
    fn from(b: &BudgetArgs) -> Self {
        Budget { max_moves: b.budget_moves, max_states: b.budget_states, max_expand_dim: b.max_expand_dim }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Barycentric,
    Star,
}

#[derive(Subcommand)]
enum Verb {
    /// Boundary complex of a strata incidence file
    Build { strata: PathBuf },
    /// Boundary complex of a presentation (objects, relations, two maps)
    StackyBuild { input: PathBuf },
    /// Blow up along an annotated center
    Blowup { complex: PathBuf, annotation: PathBuf },
    /// Root along a component; the complex is unchanged, the ledger is updated
    Root {
        complex: PathBuf,
        #[arg(long)]
        component: String,
        #[arg(long)]
        index: u64,
        /// Current multiplicity ledger [default: all indices 1]
        #[arg(long)]
        ledger: Option<PathBuf>,
        /// Where to write the updated ledger [default: stderr]
        #[arg(long)]
        ledger_out: Option<PathBuf>,
    },
    /// Barycentric or star subdivision of the cone over a complex
    Subdivide {
        complex: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Barycentric)]
        mode: Mode,
        /// Simplex labels to star at; closed under symmetry and cofaces
        #[arg(long = "target")]
        targets: Vec<String>,
    },
    /// Subdivide until unordered with no self-glued simplices
    SncReduce { complex: PathBuf },
    /// Collapse greedily to a core
    CollapseCore {
        complex: PathBuf,
        /// Write the collapse certificate here
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Decide simple homotopy equivalence; the certificate is the artifact
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Integral homology as JSON
    Homology { complex: PathBuf },
    /// Number of simplices in each dimension, e.g. (3,3)
    Fvector { complex: PathBuf },
    /// Face-incidence graph in DOT
    ExportDot { complex: PathBuf },
    /// Check a complex, or an annotation against a complex
    Validate {
        complex: PathBuf,
        #[arg(long)]
        annotation: Option<PathBuf>,
    },
    /// Apply a certificate; with --target, check the result against it
    Replay {
        source: PathBuf,
        certificate: PathBuf,
        #[arg(long)]
        target: Option<PathBuf>,
    },
}

#[derive(Parser)]
#[command(name = "bcx", version, about = "Boundary complexes as generalized Δ-complexes")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Malformed(String),
    Semantic(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Json(_) | Error::Malformed(_) | Error::MalformedStrata(_) => Failure::Malformed(e.to_string()),
            _ => Failure::Semantic(e.to_string()),
        }
    }
}

type Run = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn load_complex(path: &Path) -> Result<GeneralizedDeltaComplex, Failure> {
    complex_from_json(&read(path)?).map_err(|e| at(path, e))
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    from_json(&read(path)?).map_err(|e| at(path, e))
}

fn at(path: &Path, e: Error) -> Failure {
    match Failure::from(e) {
        Failure::Malformed(m) => Failure::Malformed(format!("{}: {m}", path.display())),
        Failure::Semantic(m) => Failure::Semantic(format!("{}: {m}", path.display())),
    }
}

fn write(out: &Output, text: &str) -> Result<(), Failure> {
    write_to(out.out.as_deref(), text)
}

fn write_to(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Semantic(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(out: &Output, c: &GeneralizedDeltaComplex) -> Result<(), Failure> {
    let text = if out.canonical { complex_to_json(&canonical_form(c).complex) } else { complex_to_json(c) };
    write(out, &text)
}

fn fvector(c: &GeneralizedDeltaComplex) -> String {
    let f: Vec<String> = c.f_vector().iter().map(ToString::to_string).collect();
    format!("({})", f.join(","))
}

fn report(c: &GeneralizedDeltaComplex) {
    eprintln!("f-vector {}", fvector(c));
}

/// Closure of the named simplices under symmetry and cofaces, as cones.
fn star_targets(c: &GeneralizedDeltaComplex, names: &[String]) -> Result<Vec<ConeId>, Failure> {
    let mut set: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut stack = Vec::new();
    for name in names {
        let found = (0..c.num_levels())
            .flat_map(|d| (0..c.count(d)).map(move |i| (d, i)))
            .find(|&(d, i)| c.labels(d)[i] == *name)
            .ok_or_else(|| Failure::Semantic(format!("no simplex labelled {name:?}")))?;
        stack.push(found);
    }
    while let Some((d, i)) = stack.pop() {
        if !set.insert((d, i)) {
            continue;
        }
        stack.extend(c.cells(d)[i].swaps.iter().map(|&s| (d, s)));
        if d + 1 < c.num_levels() {
            for (j, cell) in c.cells(d + 1).iter().enumerate() {
                if cell.faces.contains(&i) {
                    stack.push((d + 1, j));
                }
            }
        }
    }
    Ok(set.into_iter().map(|(d, i)| ConeId { dim: d + 1, index: i }).collect())
}

fn run(verb: Verb, out: &Output) -> Run {
    match verb {
        Verb::Build { strata } => {
            let s: StrataIncidence = load(&strata)?;
            let b = build_boundary_complex(&s).map_err(|e| at(&strata, e))?;
            report(&b.complex);
            emit(out, &b.complex)?;
        }
        Verb::StackyBuild { input } => {
            let s: StackyInput = load(&input)?;
            let c = build_stacky_boundary_complex(&s.objects, &s.relations, &s.p1, &s.p2).map_err(|e| at(&input, e))?;
            report(&c);
            emit(out, &c)?;
        }
        Verb::Blowup { complex, annotation } => {
            let c = load_complex(&complex)?;
            let ann: CenterAnnotation = load(&annotation)?;
            let r = validate_annotation(&c, &ann);
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            if !r.is_valid() {
                return Err(Failure::Semantic(format!("invalid annotation\n{}", to_json(&r))));
            }
            let b = blowup_move(&c, &ann)?;
            report(&b);
            emit(out, &b)?;
        }
        Verb::Root { complex, component, index, ledger, ledger_out } => {
            let c = load_complex(&complex)?;
            let before: MultiplicityLedger = match &ledger {
                Some(p) => load(p)?,
                None => MultiplicityLedger::default(),
            };
            let (same, after) = root_move(&c, &component, index, &before)?;
            emit(out, &same)?;
            let text = to_json(&after);
            match ledger_out {
                Some(p) => write_to(Some(&p), &text)?,
                None => eprint!("{text}"),
            }
        }
        Verb::Subdivide { complex, mode, targets } => {
            let c = load_complex(&complex)?;
            let g = cone_over(&c);
            let s = match mode {
                Mode::Barycentric => barycentric_subdivision(&g),
                Mode::Star => star_subdivision(&g, &star_targets(&c, &targets)?)?,
            };
            let d = to_delta_complex(&s)?;
            report(&d);
            emit(out, &d)?;
        }
        Verb::SncReduce { complex } => {
            let s = snc_reduce(&load_complex(&complex)?);
            report(&s);
            emit(out, &s)?;
        }
        Verb::CollapseCore { complex, certificate } => {
            let (core, cert) = collapse_core(&load_complex(&complex)?);
            eprintln!("{} collapses", cert.len());
            report(&core);
            emit(out, &core)?;
            if let Some(p) = certificate {
                write_to(Some(&p), &cert.to_json())?;
            }
        }
        Verb::Equiv { a, b, budget } => {
            let (x, y) = (load_complex(&a)?, load_complex(&b)?);
            let verdict = simple_homotopy_equivalent(&x, &y, Budget::from(&budget));
            eprintln!("{verdict}");
            return Ok(match verdict {
                Verdict::Equivalent(cert) => {
                    write(out, &cert.to_json())?;
                    0
                }
                Verdict::NotEquivalent { .. } => 1,
                Verdict::Inconclusive { .. } => 2,
            });
        }
        Verb::Homology { complex } => {
            let h = homology(&load_complex(&complex)?);
            eprintln!("{h}");
            write(out, &to_json(&h))?;
        }
        Verb::Fvector { complex } => {
            let c = load_complex(&complex)?;
            write(out, &format!("{}\n", fvector(&c)))?;
        }
        Verb::ExportDot { complex } => {
            let c = load_complex(&complex)?;
            let c = if out.canonical { canonical_form(&c).complex } else { c };
            write(out, &to_dot(&c))?;
        }
        Verb::Validate { complex, annotation } => {
            let c = load_complex(&complex)?;
            if let Some(p) = annotation {
                let ann: CenterAnnotation = load(&p)?;
                let r = validate_annotation(&c, &ann);
                write(out, &to_json(&r))?;
                if !r.is_valid() {
                    return Err(Failure::Semantic(format!("{} violation(s)", r.violations.len())));
                }
            } else {
                write(out, "valid\n")?;
            }
        }
        Verb::Replay { source, certificate, target } => {
            let c = load_complex(&source)?;
            let cert = MoveCertificate::from_json(&read(&certificate)?).map_err(|e| at(&certificate, e))?;
            let end = replay(&c, &cert)?;
            if let Some(t) = target {
                let want = canonical_form(&load_complex(&t)?).hash;
                let got = canonical_form(&end).hash;
                if want != got {
                    return Err(Failure::Semantic(format!("replay reaches {got}, target is {want}")));
                }
                eprintln!("target reached ({got})");
            }
            emit(out, &end)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.verb, &cli.output) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Malformed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(64)
        }
        Err(Failure::Semantic(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(65)
        }
    }
}
