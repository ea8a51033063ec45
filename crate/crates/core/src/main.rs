use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::One;
use serde::Serialize;
use serde_json::json;

use cido_core::acceptance::{self, CriterionResult, SuiteOutcome};
use cido_core::cechdr::ComparisonReport;
use cido_core::deforms::{alpha_form, beta_form, omega_rep, FormContext, FormJson};
use cido_core::error::Result;
use cido_core::groebner::certify_smooth_ci;
use cido_core::hodge::{primitive_hodge_numbers, primitive_middle_dim};
use cido_core::jacring::{build_dwork, milnor_basis, JacobianBasis, Reducer};
use cido_core::problem::{BasisJson, ProblemFile, ReductionJson};
use cido_core::qpoly::Rational;

#[derive(Parser)]
#[command(name = "cido", version, about = "Jacobian-ring bases and Cech-de Rham checks for complete intersections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify smoothness of the complete intersection.
    Smooth { problem: PathBuf },
    /// Monomial basis of the critical slice of the Jacobian ring.
    Basis {
        problem: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Representative forms for every basis monomial.
    Reps {
        problem: PathBuf,
        #[arg(long, value_enum)]
        form: FormKind,
        /// Reuse a basis written by `basis --out`.
        #[arg(long)]
        basis: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Griffiths-Dwork reduction of a polynomial of critical charge.
    Reduce {
        problem: PathBuf,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        basis: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one of the verification suites.
    Verify {
        problem: PathBuf,
        #[arg(long, value_enum)]
        check: CheckKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        /// Use the (-1)^q sign on the horizontal differential.
        #[arg(long)]
        twist: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Euler characteristic and middle Betti numbers.
    Hodge {
        problem: PathBuf,
        /// Also report primitive Hodge numbers next to the per-weight basis dimensions.
        #[arg(long)]
        experimental_hodge_slices: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every acceptance criterion.
    Accept {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormKind {
    Alpha,
    Beta,
    Omega,
}

impl FormKind {
    fn name(self) -> &'static str {
        match self {
            FormKind::Alpha => "alpha",
            FormKind::Beta => "beta",
            FormKind::Omega => "omega",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Comparison,
    Homotopy,
    Phi,
    Kernel,
}

/// What a command produced: the JSON document, a one-line summary for
/// `--out`, and whether every requested check passed.
struct Outcome {
    json: serde_json::Value,
    summary: String,
    pass: bool,
}

impl Outcome {
    fn new<T: Serialize>(value: &T, summary: String, pass: bool) -> Result<Self> {
        Ok(Outcome {
            json: serde_json::to_value(value)?,
            summary,
            pass,
        })
    }
}

#[derive(Serialize)]
struct RepEntry {
    monomial: String,
    text: String,
    form: FormJson,
}

#[derive(Serialize)]
struct RepsJson {
    form: String,
    reps: Vec<RepEntry>,
}

#[derive(Serialize)]
struct VerifyJson<T: Serialize> {
    check: String,
    pass: bool,
    report: T,
}

fn load_basis(path: Option<&Path>, problem: &ProblemFile) -> Result<Option<JacobianBasis>> {
    match path {
        None => Ok(None),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            let json: BasisJson = serde_json::from_str(&text)?;
            Ok(Some(json.to_basis(&problem.spec()?)?))
        }
    }
}

fn run(command: Command) -> Result<(Outcome, Option<PathBuf>)> {
    match command {
        Command::Smooth { problem } => {
            let spec = ProblemFile::load(&problem)?.spec()?;
            let report = certify_smooth_ci(&spec)?;
            let summary = match &report.witness {
                Some(w) => format!("singular (witness {w})"),
                None => "smooth".to_string(),
            };
            let pass = report.smooth;
            Ok((Outcome::new(&report, summary, pass)?, None))
        }
        Command::Basis { problem, out } => {
            let spec = ProblemFile::load(&problem)?.certified_spec()?;
            let basis = milnor_basis(&build_dwork(&spec))?;
            let json = BasisJson::from_basis(&basis, &spec);
            let summary = format!("basis of dimension {} with weight dims {:?}", basis.total_dim(), basis.weight_dims());
            Ok((Outcome::new(&json, summary, true)?, out))
        }
        Command::Reps { problem, form, basis, out } => {
            let file = ProblemFile::load(&problem)?;
            let spec = file.certified_spec()?;
            let dwork = build_dwork(&spec);
            let basis = match load_basis(basis.as_deref(), &file)? {
                Some(b) => b,
                None => milnor_basis(&dwork)?,
            };
            let ctx = FormContext::new(&dwork);
            let one = Rational::one();
            let mut reps = Vec::with_capacity(basis.total_dim());
            for v in basis.monomials() {
                let f = match form {
                    FormKind::Alpha => alpha_form(&one, v, &ctx)?,
                    FormKind::Beta => beta_form(&one, v, &ctx)?,
                    FormKind::Omega => omega_rep(&one, v, &ctx)?,
                };
                reps.push(RepEntry {
                    monomial: spec.print_monomial(v),
                    text: f.to_text(&ctx),
                    form: f.to_json(&ctx),
                });
            }
            let json = RepsJson {
                form: form.name().to_string(),
                reps,
            };
            let summary = format!("{} {} representatives", json.reps.len(), form.name());
            Ok((Outcome::new(&json, summary, true)?, out))
        }
        Command::Reduce { problem, poly, basis, out } => {
            let file = ProblemFile::load(&problem)?;
            let spec = file.certified_spec()?;
            let dwork = build_dwork(&spec);
            let basis = match load_basis(basis.as_deref(), &file)? {
                Some(b) => b,
                None => milnor_basis(&dwork)?,
            };
            let v = spec.parse(&poly)?;
            let r = Reducer::new(&dwork, &basis).reduce(&v)?;
            let json = ReductionJson::new(&poly, &r, &basis, &spec);
            let summary = format!(
                "{} nonzero coordinates after {} steps",
                json.coordinates.len(),
                json.steps.len()
            );
            Ok((Outcome::new(&json, summary, true)?, out))
        }
        Command::Verify { problem, check, seed, cases, twist, out } => {
            let spec = ProblemFile::load(&problem)?.certified_spec()?;
            let dwork = build_dwork(&spec);
            let basis = milnor_basis(&dwork)?;
            let ctx = FormContext::new(&dwork);
            let outcome = match check {
                CheckKind::Comparison => {
                    let reports: Vec<ComparisonReport> = acceptance::comparison_suite(&ctx, &basis, twist)?;
                    let pass = reports.iter().all(ComparisonReport::all_pass);
                    let failed = reports.iter().filter(|r| !r.all_pass()).count();
                    let summary = format!("comparison: {failed} of {} monomials failed", reports.len());
                    verify_outcome("comparison", pass, &reports, summary)?
                }
                CheckKind::Homotopy => {
                    let s = acceptance::homotopy_suite(&ctx, seed, cases)?;
                    suite_outcome("homotopy", s)?
                }
                CheckKind::Phi => suite_outcome("phi", acceptance::phi_suite(&ctx, &basis)?)?,
                CheckKind::Kernel => suite_outcome("kernel", acceptance::kernel_suite(&dwork, &basis)?)?,
            };
            Ok((outcome, out))
        }
        Command::Hodge { problem, experimental_hodge_slices, out } => {
            let spec = ProblemFile::load(&problem)?.certified_spec()?;
            let betti = primitive_middle_dim(&spec)?;
            let summary = format!(
                "euler {} middle betti {} primitive {}",
                betti.euler, betti.middle_betti, betti.primitive_middle
            );
            if !experimental_hodge_slices {
                return Ok((Outcome::new(&betti, summary, true)?, out));
            }
            let slices = primitive_hodge_numbers(&spec)?;
            let basis = milnor_basis(&build_dwork(&spec))?;
            let weight_dims = basis.weight_dims();
            let json = json!({
                "betti": betti,
                "primitive_hodge": slices.primitive,
                "weight_dims": weight_dims,
                "slices_match": weight_dims.iter().map(|&d| d as i64).collect::<Vec<_>>() == slices.primitive,
            });
            Ok((Outcome { json, summary, pass: true }, out))
        }
        Command::Accept { seed, cases, out } => {
            let results: Vec<CriterionResult> = acceptance::run_all(seed, cases);
            let pass = results.iter().all(|r| r.pass);
            let summary = results.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
            if out.is_none() {
                for r in &results {
                    eprintln!("{r}");
                }
            }
            Ok((Outcome::new(&results, summary, pass)?, out))
        }
    }
}

fn verify_outcome<T: Serialize>(check: &str, pass: bool, report: &T, summary: String) -> Result<Outcome> {
    let json = VerifyJson {
        check: check.to_string(),
        pass,
        report,
    };
    Outcome::new(&json, summary, pass)
}

fn suite_outcome(check: &str, s: SuiteOutcome) -> Result<Outcome> {
    let summary = format!("{check}: {}/{} cases hold", s.cases - s.failures.len(), s.cases);
    verify_outcome(check, s.pass(), &s, summary)
}

fn emit_error(kind: &str, message: &str) {
    eprintln!("{}", json!({ "error": kind, "message": message }));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit_error("usage", e.to_string().trim());
            return ExitCode::from(2);
        }
    };
    let result = run(cli.command).and_then(|(outcome, out)| {
        let text = serde_json::to_string_pretty(&outcome.json)?;
        let mut stdout = std::io::stdout().lock();
        let written = match out {
            Some(path) => {
                std::fs::write(&path, format!("{text}\n"))?;
                writeln!(stdout, "{}\nwrote {}", outcome.summary, path.display())
            }
            None => writeln!(stdout, "{text}"),
        };
        match written {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
            _ => {}
        }
        Ok(outcome.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            emit_error(e.kind(), &e.to_string());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
