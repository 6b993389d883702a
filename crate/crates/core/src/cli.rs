//! The `bisubmod` command line.
//!
//! Exit status is 0 on success, 1 when the instance or point fails
//! validation (or enumeration hits an inconsistency), and 2 for usage and
//! parse errors.

use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bisubfn::{
    gen_scaled_cube, gen_strict_example, translate, validate_bisubmodular, validate_strict,
    TableFunction,
};
use crate::error::Error;
use crate::instance::load_instance;
use crate::oracle::brute_vertices_parallel;
use crate::poset::{build_poset, to_dot};
use crate::search::{EmitOrder, Enumerator, Observer, Options, Visit};
use crate::signed_set::{Rational, RationalVector};

/// Environment variable that turns on capacity cross-checking when set to
/// anything other than `0` or the empty string.
pub const CROSSCHECK_ENV: &str = "BISUBMOD_CROSSCHECK";

#[derive(Parser, Debug)]
#[command(
    name = "bisubmod",
    version,
    about = "Vertices and Hasse diagrams of bisubmodular polyhedra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the bisubmodular and strict inequalities on every pair.
    Check {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Enumerate vertices by reverse search.
    Enumerate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Skip the bisubmodularity check before enumerating.
        #[arg(long)]
        no_validate: bool,
        /// Compare every closed-form capacity with a full constraint scan.
        #[arg(long)]
        crosscheck: bool,
        /// When each vertex is printed: on first arrival (preorder), or
        /// alternating between arrival and departure by depth parity.
        #[arg(long, value_enum, default_value_t = Order::Entry)]
        order: Order,
    },
    /// Enumerate vertices from all signed permutations (reference oracle).
    Brute {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: u64,
    },
    /// Print the Hasse diagram at a vertex in DOT format.
    Hasse {
        #[command(flatten)]
        input: InputArgs,
        /// Vertex coordinates, comma-separated (`p/q` allowed).
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// JSON instance file.
    #[arg(conflicts_with = "gen", required_unless_present = "gen")]
    instance: Option<PathBuf>,
    /// Built-in instance family.
    #[arg(long, value_enum, requires = "n")]
    gen: Option<Generator>,
    /// Ground set size for --gen.
    #[arg(long)]
    n: Option<usize>,
    /// Half-width of the cube for --gen cube.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    r: String,
    /// Shift the polyhedron by this vector, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    translate: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Generator {
    Strict,
    Cube,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    Entry,
    Alternating,
}

impl From<Order> for EmitOrder {
    fn from(order: Order) -> Self {
        match order {
            Order::Entry => EmitOrder::Entry,
            Order::Alternating => EmitOrder::Alternating,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Error paired with the exit status it maps to.
struct Failure {
    status: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Instance(_)
            | Error::GroundSetSize { .. }
            | Error::TableSize { .. }
            | Error::NonzeroAtEmpty { .. }
            | Error::DimensionMismatch { .. } => 2,
            _ => 1,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            status: 1,
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure { status: 2, message }
}

fn load(input: &InputArgs) -> Result<TableFunction, Failure> {
    let base = match (&input.instance, input.gen) {
        (Some(path), None) => load_instance(path)?,
        (None, Some(gen)) => {
            let n = input.n.ok_or_else(|| usage("--gen needs --n".into()))?;
            match gen {
                Generator::Strict => gen_strict_example(n)?,
                Generator::Cube => {
                    let r: Rational = input
                        .r
                        .trim()
                        .parse()
                        .map_err(|e| usage(format!("bad --r value {:?}: {e}", input.r)))?;
                    gen_scaled_cube(n, &r)?
                }
            }
        }
        _ => {
            return Err(usage(
                "give exactly one of an instance file or --gen".into(),
            ))
        }
    };
    match &input.translate {
        Some(text) => Ok(translate(&base, &RationalVector::parse(text)?)?),
        None => Ok(base),
    }
}

fn crosscheck_from_env() -> bool {
    std::env::var(CROSSCHECK_ENV).is_ok_and(|v| !v.is_empty() && v != "0")
}

fn write_vertex(
    out: &mut impl Write,
    x: &RationalVector,
    format: Format,
    first: bool,
) -> io::Result<()> {
    match format {
        Format::Text => writeln!(out, "{x}"),
        Format::Json => {
            let coords: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            let sep = if first { "" } else { "," };
            writeln!(
                out,
                "{sep}  {}",
                serde_json::to_string(&coords).expect("strings serialize")
            )
        }
    }
}

struct Stream<W: Write> {
    out: W,
    format: Format,
    count: usize,
    error: Option<io::Error>,
}

impl<W: Write> Observer for Stream<W> {
    fn vertex(&mut self, visit: &Visit<'_>) {
        if self.error.is_none() {
            if let Err(e) = write_vertex(&mut self.out, visit.coords, self.format, self.count == 0)
            {
                self.error = Some(e);
            }
        }
        self.count += 1;
    }
}

fn validate(f: &TableFunction) -> Result<(), Failure> {
    let report = validate_bisubmodular(f);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Failure {
            status: 1,
            message: format!(
                "instance is not bisubmodular ({} violating pairs), first: {v}",
                report.len()
            ),
        }),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    match cli.command {
        Command::Check { input } => {
            let f = load(&input)?;
            let report = validate_bisubmodular(&f);
            let mut out = stdout.lock();
            if report.is_empty() {
                writeln!(out, "bisubmodular: yes")?;
                let strict = validate_strict(&f);
                writeln!(
                    out,
                    "strict: {}",
                    if strict.is_empty() { "yes" } else { "no" }
                )?;
                if let Some(v) = strict.violations.first() {
                    writeln!(out, "non-strict pairs: {}, first: {v}", strict.len())?;
                }
                Ok(())
            } else {
                writeln!(out, "bisubmodular: no")?;
                writeln!(out, "violations: {}", report.len())?;
                for v in &report.violations {
                    writeln!(out, "  {v}")?;
                }
                Err(Failure {
                    status: 1,
                    message: "instance violates bisubmodularity".into(),
                })
            }
        }
        Command::Enumerate {
            input,
            format,
            no_validate,
            crosscheck,
            order,
        } => {
            let f = load(&input)?;
            if !no_validate {
                validate(&f)?;
            }
            let start = Instant::now();
            let options = Options {
                crosscheck: crosscheck || crosscheck_from_env(),
                order: order.into(),
            };
            let mut stream = Stream {
                out: BufWriter::new(stdout.lock()),
                format,
                count: 0,
                error: None,
            };
            if format == Format::Json {
                writeln!(stream.out, "[")?;
            }
            let result = Enumerator::new(&f, options).run(&mut stream);
            if format == Format::Json {
                writeln!(stream.out, "]")?;
            }
            stream.out.flush()?;
            if let Some(e) = stream.error {
                return Err(e.into());
            }
            let count = result?;
            eprintln!("{count} vertices in {:.3} s", start.elapsed().as_secs_f64());
            Ok(())
        }
        Command::Brute {
            input,
            format,
            jobs,
        } => {
            let f = load(&input)?;
            let start = Instant::now();
            let vertices = brute_vertices_parallel(&f, jobs as usize);
            let mut out = BufWriter::new(stdout.lock());
            if format == Format::Json {
                writeln!(out, "[")?;
            }
            for (k, x) in vertices.iter().enumerate() {
                write_vertex(&mut out, x, format, k == 0)?;
            }
            if format == Format::Json {
                writeln!(out, "]")?;
            }
            out.flush()?;
            eprintln!(
                "{} vertices in {:.3} s",
                vertices.len(),
                start.elapsed().as_secs_f64()
            );
            Ok(())
        }
        Command::Hasse { input, point } => {
            let f = load(&input)?;
            let x = RationalVector::parse(&point)?;
            let s = build_poset(&f, &x).map_err(|e| match e {
                Error::NotAVertex { .. } | Error::NotMember { .. } => Failure {
                    status: 1,
                    message: format!("not a vertex: {e}"),
                },
                other => other.into(),
            })?;
            write!(stdout.lock(), "{}", to_dot(&s.hasse.graph, "H"))?;
            Ok(())
        }
    }
}

/// Parses `std::env::args`, runs the command and returns the exit status.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.status
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn file_and_generator_are_exclusive() {
        assert!(Cli::try_parse_from([
            "bisubmod",
            "enumerate",
            "f.json",
            "--gen",
            "strict",
            "--n",
            "2"
        ])
        .is_err());
        assert!(Cli::try_parse_from(["bisubmod", "enumerate"]).is_err());
        assert!(Cli::try_parse_from(["bisubmod", "enumerate", "--gen", "strict"]).is_err());
        assert!(Cli::try_parse_from([
            "bisubmod", "hasse", "--gen", "strict", "--n", "2", "--point", "-2,1"
        ])
        .is_ok());
    }
}
