mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use commuter_core::dsl::{self, Document};
use commuter_core::duality::{theorem1_dual_inverse_with, verify_theorem1_with, verify_theorem3_with, Verification};
use commuter_core::exchange::{canonicalize, interchange_class, interchange_equal, DEFAULT_LINEARIZATION_CAP};
use commuter_core::finset::{atom_strong_check, copower_naturality, copower_sweep, FinSet, FinSetObj};
use commuter_core::matrix::{check_theorem1_numeric, check_theorem3_numeric, random_alpha};
use commuter_core::rewrite::{prove_equal, replay_with, ProveError, SearchBudget};
use commuter_core::{Error, Exec};

use report::{Outcome, Reporter};

/// Tolerance for inverse-mediated numeric chains.
const NUMERIC_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "commuter",
    version,
    about = "Verify commutation structures in strict monoidal categories"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Rewrite rounds per search direction.
    #[arg(long, default_value_t = 8)]
    max_depth: usize,
    /// Total canonical forms the search may store.
    #[arg(long, default_value_t = 50_000)]
    max_nodes: usize,
}

impl BudgetArgs {
    fn budget(self) -> SearchBudget {
        SearchBudget {
            max_depth_per_side: self.max_depth,
            max_nodes: self.max_nodes,
            linearization_cap: DEFAULT_LINEARIZATION_CAP,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and type-check a file; with --lhs/--rhs, decide interchange equality.
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, requires = "rhs")]
        lhs: Option<String>,
        #[arg(long, requires = "lhs")]
        rhs: Option<String>,
    },
    /// Print the canonical form of a named diagram.
    Normalize {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        dia: String,
    },
    /// Prove two named diagrams equal from the file's rules.
    Prove {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Prove that the mate of a compatible dual structure inverts alpha.
    Theorem1 {
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Prove that a co-commutation on A is determined by the inverse on its dual.
    Theorem3 {
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Checks in the category of finite sets.
    #[command(subcommand)]
    Finset(FinsetCommand),
    /// Checks in finite-dimensional linear algebra.
    #[command(subcommand)]
    Matrix(MatrixCommand),
}

#[derive(Subcommand)]
enum FinsetCommand {
    /// Is J -> J^D invertible for every |J| <= max-j?
    Atom {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 4)]
        max_j: usize,
    },
    /// Copowers commute with S x -: exhaustive bijection sweep plus naturality samples.
    Example {
        #[arg(long, default_value_t = 4)]
        max: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// The strength J x Y^D -> (J x Y)^D.
    Strength {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        y: usize,
        #[arg(long)]
        d: usize,
    },
}

#[derive(Subcommand)]
enum MatrixCommand {
    /// Random well-conditioned alpha, mate beta, and gamma against alpha's inverse.
    Theorem1 {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// dim A, dim X
        #[arg(long, value_parser = parse_dims, default_value = "2,2")]
        dims: (usize, usize),
    },
    /// Flip braidings: the expression through b's inverse and the composite on B A.
    Theorem3 {
        /// dim A, dim X
        #[arg(long, value_parser = parse_dims, default_value = "2,2")]
        dims: (usize, usize),
    },
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, x] = parts[..] else {
        return Err(format!("expected two dimensions like `2,3`, got `{s}`"));
    };
    let a: usize = a.parse().map_err(|_| format!("`{a}` is not a dimension"))?;
    let x: usize = x.parse().map_err(|_| format!("`{x}` is not a dimension"))?;
    if a == 0 || x == 0 {
        return Err("dimensions must be at least 1".into());
    }
    Ok((a, x))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Outcome::Usage as u8 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let structured = matches!(cli.format, Format::Structured);
    ExitCode::from(run(cli.command, structured) as u8)
}

fn run(command: Command, structured: bool) -> Outcome {
    match command {
        Command::Check { file, lhs, rhs } => {
            let r = Reporter::new(structured, "check");
            cmd_check(&r, &file, lhs.zip(rhs))
        }
        Command::Normalize { file, dia } => {
            let r = Reporter::new(structured, "normalize");
            cmd_normalize(&r, &file, &dia)
        }
        Command::Prove { file, lhs, rhs, budget } => {
            let r = Reporter::new(structured, "prove");
            cmd_prove(&r, &file, &lhs, &rhs, budget)
        }
        Command::Theorem1 { budget } => {
            let r = Reporter::new(structured, "theorem1");
            cmd_theorem1(&r, budget)
        }
        Command::Theorem3 { budget } => {
            let r = Reporter::new(structured, "theorem3");
            cmd_theorem3(&r, budget)
        }
        Command::Finset(c) => {
            let r = Reporter::new(structured, "finset");
            cmd_finset(&r, c)
        }
        Command::Matrix(c) => {
            let r = Reporter::new(structured, "matrix");
            cmd_matrix(&r, c)
        }
    }
}

fn load(r: &Reporter, path: &Path) -> Result<Document, Outcome> {
    let shown = path.display().to_string();
    let src = std::fs::read_to_string(path).map_err(|e| {
        r.error("io", &format!("cannot read {shown}: {e}"), json!({ "file": shown }));
        r.finish(Outcome::Usage, json!({}))
    })?;
    dsl::parse(&src).map_err(|e| {
        r.error(
            e.kind.as_str(),
            &format!("{shown}:{e}"),
            json!({
                "file": shown,
                "line": e.line,
                "column": e.column,
                "expected": e.expected,
                "detail": e.message,
            }),
        );
        r.finish(Outcome::Usage, json!({}))
    })
}

fn resolve(r: &Reporter, doc: &Document, name: &str) -> Result<commuter_core::Diagram, Outcome> {
    doc.resolve(name).ok_or_else(|| {
        r.error(
            "usage",
            &format!("no diagram or generator named `{name}`"),
            json!({ "name": name }),
        );
        r.finish(Outcome::Usage, json!({}))
    })
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(outcome) => return outcome,
        }
    };
}

fn cmd_check(r: &Reporter, file: &Path, pair: Option<(String, String)>) -> Outcome {
    let doc = tri!(load(r, file));
    let sig = &doc.signature;
    let counts = json!({
        "objects": sig.objects().len(),
        "generators": sig.morphisms().len(),
        "diagrams": doc.diagrams.len(),
        "rules": sig.equations().len(),
    });
    r.line(format!(
        "{}: {} objects, {} generators, {} diagrams, {} rules",
        file.display(),
        sig.objects().len(),
        sig.morphisms().len(),
        doc.diagrams.len(),
        sig.equations().len()
    ));
    let Some((lhs, rhs)) = pair else {
        return r.finish(Outcome::Ok, json!({ "counts": counts }));
    };
    let (a, b) = (tri!(resolve(r, &doc, &lhs)), tri!(resolve(r, &doc, &rhs)));
    let equal = interchange_equal(sig, &a, &b);
    r.line(format!(
        "{lhs} {} {rhs} modulo interchange",
        if equal { "=" } else { "!=" }
    ));
    let outcome = if equal { Outcome::Ok } else { Outcome::Failed };
    r.finish(outcome, json!({ "counts": counts, "interchange_equal": equal }))
}

fn cmd_normalize(r: &Reporter, file: &Path, name: &str) -> Outcome {
    let doc = tri!(load(r, file));
    let sig = &doc.signature;
    let d = tri!(resolve(r, &doc, name));
    let canon = canonicalize(sig, &d);
    let count = interchange_class(sig, &d, DEFAULT_LINEARIZATION_CAP)
        .map(|c| c.len())
        .ok();
    r.line(format!("input:     {}", sig.render_diagram(&d)));
    r.line(format!("canonical: {}", sig.render_diagram(&canon.diagram)));
    r.line(format!("term:      {}", dsl::print_term(sig, &canon.diagram)));
    r.line(match count {
        Some(n) => format!("linearizations: {n}"),
        None => format!("linearizations: more than {DEFAULT_LINEARIZATION_CAP}"),
    });
    r.finish(
        Outcome::Ok,
        json!({
            "diagram": name,
            "canonical": sig.render_diagram(&canon.diagram),
            "term": dsl::print_term(sig, &canon.diagram),
            "certificate": canon.certificate,
            "linearizations": count,
        }),
    )
}

fn check_budget(r: &Reporter, budget: BudgetArgs) -> Result<SearchBudget, Outcome> {
    let b = budget.budget();
    b.validate().map_err(|e| {
        r.error("usage", &e.to_string(), json!({}));
        r.finish(Outcome::Usage, json!({}))
    })?;
    Ok(b)
}

fn cmd_prove(r: &Reporter, file: &Path, lhs: &str, rhs: &str, budget: BudgetArgs) -> Outcome {
    let budget = tri!(check_budget(r, budget));
    let doc = tri!(load(r, file));
    let sig = &doc.signature;
    let (a, b) = (tri!(resolve(r, &doc, lhs)), tri!(resolve(r, &doc, rhs)));
    match prove_equal(sig, &a, &b, sig.equations(), budget) {
        Ok(trace) => {
            let ok = replay_with(sig, sig.equations(), &trace, budget.linearization_cap).unwrap_or(false);
            r.trace(sig, &format!("{lhs}={rhs}"), &trace, ok);
            let outcome = if ok { Outcome::Ok } else { Outcome::Failed };
            r.finish(outcome, json!({ "steps": trace.steps.len() }))
        }
        Err(ProveError::Typing(e)) => {
            r.error("typing", &sig.describe_error(&e), json!({}));
            r.finish(Outcome::Usage, json!({}))
        }
        Err(ProveError::Exhausted(s)) => {
            r.line(format!("no proof found: {}", ProveError::Exhausted(s)));
            r.finish(
                Outcome::Exhausted,
                json!({
                    "rounds": s.rounds,
                    "forward_nodes": s.forward_nodes,
                    "backward_nodes": s.backward_nodes,
                    "skipped": s.skipped,
                    "search_space_closed": s.complete,
                }),
            )
        }
    }
}

/// Print a verification and its replay; `Err` carries the failure outcome.
fn report_verification(
    r: &Reporter,
    v: Result<Verification, Error>,
    extra: Option<&[commuter_core::RewriteRule]>,
) -> Result<usize, Outcome> {
    let v = v.map_err(|e| {
        let outcome = match e {
            Error::ProofNotFound(_) => Outcome::Exhausted,
            _ => Outcome::Failed,
        };
        r.error(outcome.status(), &e.to_string(), json!({}));
        outcome
    })?;
    let rules = extra.unwrap_or(v.signature.equations());
    let mut all = true;
    for g in &v.goals {
        let ok = replay_with(&v.signature, rules, &g.trace, DEFAULT_LINEARIZATION_CAP).unwrap_or(false);
        all &= ok;
        r.trace(&v.signature, &g.name, &g.trace, ok);
    }
    if all {
        Ok(v.goals.len())
    } else {
        Err(Outcome::Failed)
    }
}

fn cmd_theorem1(r: &Reporter, budget: BudgetArgs) -> Outcome {
    let budget = tri!(check_budget(r, budget));
    match report_verification(r, verify_theorem1_with(budget), None) {
        Ok(n) => {
            r.line(format!("verified: alpha is invertible with inverse gamma ({n} goals)"));
            r.finish(Outcome::Ok, json!({ "goals": n }))
        }
        Err(o) => r.finish(o, json!({})),
    }
}

fn cmd_theorem3(r: &Reporter, budget: BudgetArgs) -> Outcome {
    let budget = tri!(check_budget(r, budget));
    let main = match report_verification(r, verify_theorem3_with(budget), None) {
        Ok(n) => n,
        Err(o) => return r.finish(o, json!({})),
    };
    r.line("verified: a is expressed through the inverse of b");
    let compat = commuter_core::duality::Theorem3Setup::new()
        .map(|s| s.compatibility_rules())
        .unwrap_or_default();
    let dual = match report_verification(r, theorem1_dual_inverse_with(budget), Some(&compat)) {
        Ok(n) => n,
        Err(o) => return r.finish(o, json!({})),
    };
    r.line("verified: the dual candidate inverts b");
    r.finish(Outcome::Ok, json!({ "goals": main + dual }))
}

fn cmd_finset(r: &Reporter, c: FinsetCommand) -> Outcome {
    let model = FinSet::default();
    let size_error = |e: Error| {
        r.error("size", &e.to_string(), json!({}));
        r.finish(Outcome::Failed, json!({}))
    };
    match c {
        FinsetCommand::Atom { d, max_j } => {
            if max_j < 2 {
                r.error("usage", "--max-j must be at least 2", json!({}));
                return r.finish(Outcome::Usage, json!({}));
            }
            let report = match atom_strong_check(&model, FinSetObj::new(d), max_j, Exec::Parallel) {
                Ok(rep) => rep,
                Err(e) => return size_error(e),
            };
            r.line(format!("D = {d}: natural map J -> J^D for |J| = 0..{max_j}"));
            for row in &report.rows {
                r.line(format!(
                    "  |J| = {}: {} -> {} {}",
                    row.j,
                    row.domain,
                    row.codomain,
                    if row.bijective { "bijective" } else { "NOT bijective" }
                ));
                r.emit(
                    "atom_row",
                    json!({ "j": row.j, "domain": row.domain, "codomain": row.codomain, "bijective": row.bijective }),
                );
            }
            let yes_no = |b: bool| if b { "yes" } else { "no" };
            r.line(format!("  retract of 1: {}", yes_no(report.retract_of_one)));
            r.line(format!("  projection factors: {}", yes_no(report.projection_factors)));
            let failures: Vec<usize> = report.failures().map(|row| row.j).collect();
            if report.consistent_with_strong_adjoint {
                r.line("verdict: consistent with a strong right adjoint");
            } else {
                let listed: Vec<String> = failures.iter().map(|j| j.to_string()).collect();
                r.line(format!(
                    "verdict: no strong right adjoint (fails at |J| = {})",
                    listed.join(", ")
                ));
            }
            let outcome = if report.consistent_with_strong_adjoint {
                Outcome::Ok
            } else {
                Outcome::Failed
            };
            r.finish(
                outcome,
                json!({
                    "d": d,
                    "consistent_with_strong_adjoint": report.consistent_with_strong_adjoint,
                    "retract_of_one": report.retract_of_one,
                    "projection_factors": report.projection_factors,
                    "failures": failures,
                }),
            )
        }
        FinsetCommand::Example { max, samples, seed } => {
            if max == 0 {
                r.error("usage", "--max must be at least 1", json!({}));
                return r.finish(Outcome::Usage, json!({}));
            }
            let cases = match copower_sweep(&model, max, Exec::Parallel) {
                Ok(c) => c,
                Err(e) => return size_error(e),
            };
            let bad: Vec<_> = cases.iter().filter(|c| !c.bijective).collect();
            let natural = match copower_naturality(&model, samples, max, seed, Exec::Parallel) {
                Ok(n) => n,
                Err(e) => return size_error(e),
            };
            r.line(format!(
                "copower map for S x -: {} of {} cases (1 <= s, j, c <= {max}) bijective",
                cases.len() - bad.len(),
                cases.len()
            ));
            for c in &bad {
                r.line(format!("  not bijective at s = {}, j = {}, c = {}", c.s, c.j, c.c));
            }
            r.line(format!("naturality: {natural} of {samples} random maps (seed {seed})"));
            let ok = bad.is_empty() && natural == samples;
            r.finish(
                if ok { Outcome::Ok } else { Outcome::Failed },
                json!({
                    "cases": cases.len(),
                    "bijective": cases.len() - bad.len(),
                    "samples": samples,
                    "natural": natural,
                    "seed": seed,
                }),
            )
        }
        FinsetCommand::Strength { j, y, d } => {
            let m = match model.strength_map(FinSetObj::new(j), FinSetObj::new(y), FinSetObj::new(d)) {
                Ok(m) => m,
                Err(e) => return size_error(e),
            };
            let (inj, sur) = (m.is_injective(), m.is_surjective());
            r.line(format!(
                "strength J x Y^D -> (J x Y)^D for J = {j}, Y = {y}, D = {d}: {} -> {}",
                m.dom().size,
                m.cod().size
            ));
            r.line(format!("  injective: {inj}, surjective: {sur}"));
            r.finish(
                Outcome::Ok,
                json!({
                    "domain": m.dom().size,
                    "codomain": m.cod().size,
                    "injective": inj,
                    "surjective": sur,
                    "bijective": inj && sur,
                }),
            )
        }
    }
}

fn residual_line(name: &str, v: f64) -> String {
    format!("  {name:<20} {v:.3e}")
}

fn cmd_matrix(r: &Reporter, c: MatrixCommand) -> Outcome {
    match c {
        MatrixCommand::Theorem1 { seed, dims: (da, dx) } => {
            let alpha = random_alpha(seed, da, dx);
            let rep = match check_theorem1_numeric(&alpha, da, dx) {
                Ok(rep) => rep,
                Err(e) => {
                    r.error("numeric", &e.to_string(), json!({}));
                    return r.finish(Outcome::Failed, json!({}));
                }
            };
            r.line(format!(
                "dims A = {da}, X = {dx}, seed {seed}: residuals (max abs entry)"
            ));
            r.line(residual_line("gamma.alpha - id", rep.gamma_after_alpha));
            r.line(residual_line("alpha.gamma - id", rep.alpha_after_gamma));
            r.line(residual_line("gamma - inv(alpha)", rep.gamma_vs_inverse));
            r.line(residual_line("unit square", rep.unit_square));
            r.line(residual_line("counit square", rep.counit_square));
            let ok = rep.max_residual() <= NUMERIC_TOLERANCE;
            r.line(if ok { "within 1e-9" } else { "EXCEEDS 1e-9" });
            r.finish(
                if ok { Outcome::Ok } else { Outcome::Failed },
                json!({
                    "seed": seed,
                    "dims": [da, dx],
                    "residuals": {
                        "gamma_after_alpha": rep.gamma_after_alpha,
                        "alpha_after_gamma": rep.alpha_after_gamma,
                        "gamma_vs_inverse": rep.gamma_vs_inverse,
                        "unit_square": rep.unit_square,
                        "counit_square": rep.counit_square,
                    },
                    "tolerance": NUMERIC_TOLERANCE,
                }),
            )
        }
        MatrixCommand::Theorem3 { dims: (da, dx) } => {
            let rep = match check_theorem3_numeric(da, dx) {
                Ok(rep) => rep,
                Err(e) => {
                    r.error("size", &e.to_string(), json!({}));
                    return r.finish(Outcome::Failed, json!({}));
                }
            };
            r.line(format!(
                "dims A = B = {da}, X = {dx}, flip braidings: residuals (max abs entry)"
            ));
            r.line(residual_line("expression - a", rep.expression_vs_a));
            r.line(residual_line("c(B A) - flip", rep.composite_vs_flip));
            let ok = rep.expression_vs_a == 0.0 && rep.composite_vs_flip == 0.0;
            r.line(if ok { "exact" } else { "NOT exact" });
            r.finish(
                if ok { Outcome::Ok } else { Outcome::Failed },
                json!({
                    "dims": [da, dx],
                    "residuals": {
                        "expression_vs_a": rep.expression_vs_a,
                        "composite_vs_flip": rep.composite_vs_flip,
                    },
                }),
            )
        }
    }
}
