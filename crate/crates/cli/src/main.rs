mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use distcalc::ring::parse_rational;
use distcalc::verify::{self, CheckResult, OrderCheckOptions};
use distcalc::wick::{self, DiagramClass};
use distcalc::{expr, reducer, Bindings, Error, Rational, Symbol};

use report::{CheckRecord, ClassSumRecord, DiagramRecord, DiagramReport, ReduceRecord};

const SYNTAX_HELP: &str = "\
Expression syntax:
  D, dD, ddD, delta   the correlation function, its first and second derivative, Dirac delta
  w, d0, a, g         omega, delta(0), transformation parameter, coupling
  D^2 dD^4            integer powers; w may have negative powers (w^-1)
  3/32 w^-1 dD^4      rational coefficients, juxtaposition or '*' multiplies
  dD^2 + w^2 D^2      terms joined by '+' or '-'

Exit status: 0 all checks pass, 1 a check failed, 2 usage, parse or rule-domain error.";

#[derive(Debug, Parser)]
#[command(name = "distcalc", version, about = "Exact rules for integrals over products of distributions", after_help = SYNTAX_HELP)]
struct Cli {
    /// Emit a JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Substitute a numeric omega (p/q) into reported values.
    #[arg(long, global = true, value_parser = positive_rational)]
    omega: Option<Rational>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce an integrand expression to an exact value.
    Reduce {
        expression: String,
        /// Print every rewrite step.
        #[arg(long)]
        trace: bool,
    },
    /// Check the reduction identities.
    Identities {
        #[arg(long)]
        trace: bool,
    },
    /// List the generated vacuum diagrams with their coefficients.
    Diagrams {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=2))]
        order: u32,
    },
    /// Check that the perturbative corrections cancel.
    Verify {
        /// Only check the total at this order (1 or 2).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=2))]
        order: Option<u32>,
        /// Numeric value of the transformation parameter a (p/q).
        #[arg(long, value_parser = rational)]
        a: Option<Rational>,
        /// Set delta(0) to zero everywhere.
        #[arg(long)]
        veltman: bool,
    },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational p/q"))
}

fn positive_rational(s: &str) -> Result<Rational, String> {
    let r = rational(s)?;
    if r <= Rational::from_integer(0.into()) {
        return Err("omega must be positive".into());
    }
    Ok(r)
}

struct Output {
    json: bool,
    omega: Option<Bindings>,
}

impl Output {
    fn print_json<T: serde::Serialize>(&self, value: &T) {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable report"));
    }

    fn checks(&self, checks: &[CheckResult], with_trace: bool) -> ExitCode {
        let records: Vec<_> = checks
            .iter()
            .map(|c| CheckRecord::new(c, with_trace, self.omega.as_ref()))
            .collect();
        if self.json {
            self.print_json(&records);
        } else {
            for r in &records {
                let mark = if r.passed { "PASS" } else { "FAIL" };
                println!("{mark}  {}", r.name);
                if !r.passed || with_trace {
                    println!("      expected {}", r.expected);
                    println!("      actual   {}", r.actual);
                }
                if let Some(trace) = &r.trace {
                    for step in trace {
                        println!("      [{}] {}  =>  {}", step.rule, step.before, step.after);
                    }
                }
            }
            let failed = records.iter().filter(|r| !r.passed).count();
            println!("{} checks, {} failed", records.len(), failed);
        }
        if checks.iter().all(|c| c.passed) {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let out = Output {
        json: cli.json,
        omega: cli.omega.map(|w| Bindings::new().with(Symbol::Omega, w)),
    };
    match cli.command {
        Command::Reduce { expression, trace } => {
            let sum = expr::parse_sum(&expression)?;
            let (value, steps) = reducer::reduce(&sum)?;
            let record = ReduceRecord {
                expression: expr::render(&sum),
                value: report::show(&value, out.omega.as_ref()),
                trace: trace.then(|| report::trace_records(&steps)),
            };
            if out.json {
                out.print_json(&record);
            } else {
                if let Some(steps) = &record.trace {
                    for s in steps {
                        println!("[{}] {}  =>  {}", s.rule, s.before, s.after);
                    }
                }
                println!("{}", record.value);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Identities { trace } => Ok(out.checks(&verify::identity_suite()?, trace)),
        Command::Diagrams { order } => {
            let table = wick::diagram_table(order)?;
            let diagrams = table
                .iter()
                .map(|d| DiagramRecord {
                    class: d.class.name().to_string(),
                    prefactor: (d.class.prefactor() * distcalc::ValuePoly::symbol_pow(Symbol::G, order as i32))
                        .to_string(),
                    coefficient: d.coeff.to_string(),
                    diagram: d.shape(),
                    contractions: d.multiplicity,
                    vanishes: d.vanishes(),
                })
                .collect();
            let mut class_sums = Vec::new();
            let mut total = distcalc::ValuePoly::zero();
            for class in DiagramClass::all().into_iter().filter(|c| c.order() == order) {
                let reduced = reducer::reduce(&wick::class_sum(class)?)?.0;
                class_sums.push(ClassSumRecord {
                    class: class.name().to_string(),
                    reduced: report::show(&reduced, out.omega.as_ref()),
                });
                total += reduced;
            }
            let report = DiagramReport {
                order,
                diagrams,
                class_sums,
                total: report::show(&total, out.omega.as_ref()),
            };
            if out.json {
                out.print_json(&report);
            } else {
                print_diagrams(&report);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { order, a, veltman } => {
            let opts = OrderCheckOptions { a, veltman };
            let mut checks = Vec::new();
            match order {
                Some(n) => checks.push(verify::order_check(n, &opts)?),
                None => {
                    checks.extend(verify::identity_suite()?);
                    checks.extend(verify::diagram_identities()?);
                    for n in [1, 2] {
                        checks.push(verify::order_check(n, &opts)?);
                    }
                }
            }
            Ok(out.checks(&checks, false))
        }
    }
}

fn print_diagrams(report: &DiagramReport) {
    println!("order g^{} vacuum diagrams", report.order);
    let mut current = None;
    for d in &report.diagrams {
        if current != Some(&d.class) {
            println!();
            println!("{}  (prefactor {})", d.class, d.prefactor);
            current = Some(&d.class);
        }
        let note = if d.vanishes { "  vanishes" } else { "" };
        println!("  {:>28}  x  {:<22} [{} contractions]{}", d.coefficient, d.diagram, d.contractions, note);
    }
    println!();
    println!("reduced class sums");
    for s in &report.class_sums {
        println!("  {:<18} {}", s.class, s.reduced);
    }
    println!("total: {}", report.total);
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
