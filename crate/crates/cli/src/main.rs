//! Command-line front end: classify tensors, inspect concision and
//! multilinear rank, compute Kronecker invariants of pencils, evaluate the
//! 2x2x2 hyperdeterminant, and emit seeded family members.
//!
//! Inputs are JSON files (`-` reads stdin). Exit codes: 0 on success (for
//! `classify`: the tensor belongs to a family), 1 when `classify` finds the
//! tensor not on the list, 2 on input errors.

use clap::{Parser, Subcommand, ValueEnum};
use rank3::classify::{classify, hyperdeterminant, Family, Verdict};
use rank3::generate::generate;
use rank3::json;
use rank3::pencil::normal_form;
use rank3::rational::format_rational;
use rank3::tensor::Tensor;
use rank3::pencil::Pencil;
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rank3", version, about = "Exact classification of non-identifiable rank-3 tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Human,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a tensor is one of the six non-identifiable rank-3 families
    Classify {
        /// Tensor JSON file, or - for stdin
        input: String,
    },
    /// Concise core, injections and dropped factors of a tensor
    Concise {
        input: String,
    },
    /// Multilinear rank: the tuple of all flattening ranks
    Mlrank {
        input: String,
    },
    /// Kronecker invariants and normal form of a matrix pencil
    Kronecker {
        /// Pencil JSON file ({"rows", "cols", "A0", "A1"}), or - for stdin
        input: String,
    },
    /// Hyperdeterminant of a 2x2x2 tensor (discriminant of the slice pencil)
    Hdet {
        input: String,
    },
    /// Emit a member of a family (a-f) with the given shape
    Generate {
        /// Family letter a, b, c, d, e or f
        family: char,
        /// Comma-separated shape, e.g. 3,2,2,2
        shape: String,
        /// Seed for the deterministic generator
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("cannot read stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
    }
}

fn read_tensor(path: &str) -> Result<Tensor, String> {
    json::tensor_from_json(&read_input(path)?)
}

fn read_pencil(path: &str) -> Result<Pencil, String> {
    json::pencil_from_json(&read_input(path)?)
}

fn input_error(message: String, format: Format) -> ExitCode {
    match format {
        Format::Json => println!("{}", serde_json::json!({ "error": message })),
        Format::Human => eprintln!("error: {message}"),
    }
    ExitCode::from(2)
}

fn parse_shape(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("bad shape component {p:?}: {e}")))
        .collect()
}

fn run(cli: Cli) -> ExitCode {
    let format = cli.format;
    match cli.command {
        Command::Classify { input } => {
            let t = match read_tensor(&input) {
                Ok(t) => t,
                Err(e) => return input_error(e, format),
            };
            let report = classify(&t);
            match format {
                Format::Json => println!("{}", json::report_to_json(&report)),
                Format::Human => print_report_human(&report),
            }
            match report.verdict {
                Verdict::Family(_) => ExitCode::SUCCESS,
                Verdict::NotOnList(_) => ExitCode::from(1),
            }
        }
        Command::Concise { input } => {
            let t = match read_tensor(&input) {
                Ok(t) => t,
                Err(e) => return input_error(e, format),
            };
            match t.concise() {
                Ok(c) => {
                    match format {
                        Format::Json => println!("{}", json::concision_to_json(&c)),
                        Format::Human => {
                            println!("concise core shape: {:?}", c.core.shape());
                            println!("surviving factors:  {:?}", c.factor_map);
                            println!("dropped factors:    {:?}", c.dropped_factors);
                            println!("{}", serde_json::to_string_pretty(&json::concision_to_json(&c)).unwrap());
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(e.to_string(), format),
            }
        }
        Command::Mlrank { input } => {
            let t = match read_tensor(&input) {
                Ok(t) => t,
                Err(e) => return input_error(e, format),
            };
            let mr = t.multilinear_rank();
            match format {
                Format::Json => println!("{}", json::multilinear_rank_to_json(&mr)),
                Format::Human => println!("multilinear rank: {:?}", mr.0),
            }
            ExitCode::SUCCESS
        }
        Command::Kronecker { input } => {
            let p = match read_pencil(&input) {
                Ok(p) => p,
                Err(e) => return input_error(e, format),
            };
            match normal_form(&p) {
                Ok(nf) => {
                    match format {
                        Format::Json => println!("{}", json::normal_form_to_json(&nf)),
                        Format::Human => {
                            let inv = &nf.invariants;
                            println!("pencil rank:     {}", inv.pencil_rank);
                            println!("column indices:  {:?}", inv.col_indices);
                            println!("row indices:     {:?}", inv.row_indices);
                            let divisors: Vec<String> = inv
                                .divisors
                                .iter()
                                .map(|(b, e)| if *e == 1 { format!("{b}") } else { format!("({b})^{e}") })
                                .collect();
                            println!("divisors:        [{}]", divisors.join(", "));
                            println!("regular size:    {}", inv.regular_size);
                            println!("normal form:\n{}", nf.pencil);
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(e.to_string(), format),
            }
        }
        Command::Hdet { input } => {
            let t = match read_tensor(&input) {
                Ok(t) => t,
                Err(e) => return input_error(e, format),
            };
            match hyperdeterminant(&t) {
                Ok(h) => {
                    match format {
                        Format::Json => {
                            println!("{}", serde_json::json!({ "hyperdeterminant": format_rational(&h) }))
                        }
                        Format::Human => println!("{}", format_rational(&h)),
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(e.to_string(), format),
            }
        }
        Command::Generate { family, shape, seed } => {
            let Some(family) = Family::from_letter(family) else {
                return input_error(format!("unknown family {family:?}; expected a letter a-f"), format);
            };
            let shape = match parse_shape(&shape) {
                Ok(s) => s,
                Err(e) => return input_error(e, format),
            };
            match generate(family, &shape, seed) {
                Ok(t) => {
                    let v = json::tensor_to_json(&t);
                    match format {
                        Format::Json => println!("{v}"),
                        Format::Human => println!("{}", serde_json::to_string_pretty(&v).unwrap()),
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(e.to_string(), format),
            }
        }
    }
}

fn print_report_human(report: &rank3::classify::ClassificationReport) {
    match &report.verdict {
        Verdict::Family(f) => {
            println!("verdict: {} (non-identifiable rank-3 tensor)", f.letter());
            println!("family:  {}", f.description());
        }
        Verdict::NotOnList(reason) => {
            println!("verdict: not on the list of non-identifiable rank-3 tensors");
            println!("reason:  {}", reason.code());
        }
    }
    println!("input shape:      {:?}", report.input_shape);
    println!("multilinear rank: {:?}", report.multilinear_rank);
    println!("concise shape:    {:?}", report.concise_shape);
    if let Some(rank) = report.rank {
        println!("rank:             {rank}");
    }
    if let Some(w) = &report.witness {
        match w {
            rank3::classify::Witness::Hyperdeterminant(h) => {
                println!("hyperdeterminant: {}", format_rational(h));
            }
            rank3::classify::Witness::PencilInvariants(inv) => {
                println!("pencil column indices: {:?}", inv.col_indices);
                println!("pencil row indices:    {:?}", inv.row_indices);
                let divisors: Vec<String> = inv
                    .divisors
                    .iter()
                    .map(|(b, e)| if *e == 1 { format!("{b}") } else { format!("({b})^{e}") })
                    .collect();
                println!("elementary divisors:   [{}]", divisors.join(", "));
            }
            rank3::classify::Witness::EigenSplit(e) => {
                println!("merged factors:   ({}, {})", e.pair.0, e.pair.1);
                let fmt = |v: &[rank3::Rational]| {
                    let parts: Vec<String> = v.iter().map(format_rational).collect();
                    format!("({})", parts.join(", "))
                };
                println!("eigenvector x:    {}  (matrix rank {})", fmt(&e.x), e.rank_x);
                println!("eigenvector y:    {}  (matrix rank {})", fmt(&e.y), e.rank_y);
            }
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse())
}
