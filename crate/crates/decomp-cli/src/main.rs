//! The `decomp` command line: enumerate registered examples, run the
//! simplicial and coalgebraic checkers, comultiply elements, compute
//! Möbius functions, verify the free/recover round trips, and compare the
//! twisted-arrow and element categories against their combinatorial
//! models. Exit codes: 0 for a pass, 1 for a checked failure, 2 for a
//! usage or configuration error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use decomp::checks::{
    check_culf, check_decomposition, check_segal, check_simplicial_identities, CheckReport,
};
use decomp::coalgebra::{comult_iterate, convolve, epsilon, mobius, mobius_alternating, zeta};
use decomp::compare::{compare_active_arrows_with_el_bn, compare_tw_bn_with_delta_inert};
use decomp::presheaf::{check_roundtrip, check_sheaf};
use decomp::registry::{build, example_names, RegisteredExample};
use decomp::simplex::delta_inert_category;

#[derive(Parser)]
#[command(
    name = "decomp",
    version,
    about = "Free decomposition spaces and their incidence coalgebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ExampleArgs {
    /// Registered example name (list them with the `examples` command).
    #[arg(long)]
    example: String,
    /// Override the example's primary size bound.
    #[arg(long)]
    bound: Option<usize>,
    /// Letters for the word examples (default `ab`).
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Space {
    Presheaf,
    Free,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Simplicial,
    Decomposition,
    Segal,
    Sheaf,
    Culf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompareWhat {
    /// Twisted arrows of the additive nerve against the inert simplex
    /// category.
    Tw,
    /// Cartesian active arrows against the elements of the additive nerve.
    Elements,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// List the registered example names with summaries.
    Examples {
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// List one level of a presheaf or of its free simplicial set.
    Enumerate {
        #[command(flatten)]
        example: ExampleArgs,
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum, default_value_t = Space::Presheaf)]
        space: Space,
        /// Truncation for the free space (defaults to the level).
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run a checker and report its verdict with witnesses.
    Check {
        #[command(flatten)]
        example: ExampleArgs,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 3)]
        truncation: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Comultiply an element of the free simplicial set.
    Comult {
        #[command(flatten)]
        example: ExampleArgs,
        #[arg(long)]
        element: String,
        /// Grade of the element, when the encoding alone is ambiguous.
        #[arg(long)]
        level: Option<usize>,
        /// Number of comultiplication applications (1 gives pairs).
        #[arg(long, default_value_t = 1)]
        iterate: usize,
        #[arg(long, default_value_t = 2)]
        truncation: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compute the Möbius function by convolution inversion.
    Mobius {
        #[command(flatten)]
        example: ExampleArgs,
        /// Largest certified length (defaults to the presheaf budget).
        #[arg(long)]
        length: Option<usize>,
        /// Truncation (defaults to one above the length bound).
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Verify both free/recover round trips.
    Roundtrip {
        #[command(flatten)]
        example: ExampleArgs,
        #[arg(long, default_value_t = 3)]
        truncation: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compare categorical models built two independent ways.
    Compare {
        #[arg(long, value_enum)]
        what: CompareWhat,
        /// Nerve truncation (tw, default 5) or arity bound (elements,
        /// default 3).
        #[arg(long)]
        truncation: Option<usize>,
        /// Weight bound (tw, default 6; elements, default 6).
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// A configuration problem: reported on stderr with exit code 2.
struct UsageError(String);

impl<E: std::error::Error> From<E> for UsageError {
    fn from(e: E) -> UsageError {
        UsageError(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            std::process::exit(2);
        }
    }
}

fn load(example: &ExampleArgs) -> Result<RegisteredExample, UsageError> {
    build(&example.example, example.bound, example.alphabet.as_deref()).map_err(UsageError::from)
}

fn report_outcome(
    context: serde_json::Value,
    report: &CheckReport,
    format: Format,
) -> Result<i32, UsageError> {
    match format {
        Format::Json => {
            let mut value = context;
            value["report"] = serde_json::to_value(report)?;
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
        Format::Table => {
            println!("verdict: {}", if report.is_pass() { "pass" } else { "fail" });
            for w in &report.witnesses {
                println!("witness: {w}");
            }
        }
    }
    Ok(if report.is_pass() { 0 } else { 1 })
}

fn run(command: Command) -> Result<i32, UsageError> {
    match command {
        Command::Examples { format } => {
            match format {
                Format::Json => {
                    let listing: Vec<serde_json::Value> = decomp::registry::EXAMPLES
                        .iter()
                        .map(|(name, summary)| json!({"name": name, "summary": summary}))
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&listing)?);
                }
                Format::Table => {
                    for name in example_names() {
                        println!("{name}");
                    }
                }
            }
            Ok(0)
        }
        Command::Enumerate { example, level, space, truncation, format } => {
            let ex = load(&example)?;
            let (space_name, keys): (&str, Vec<String>) = match space {
                Space::Presheaf => {
                    if level > ex.presheaf().budget() {
                        return Err(UsageError(format!(
                            "level {level} exceeds the budget {} of example {}",
                            ex.presheaf().budget(),
                            ex.name()
                        )));
                    }
                    ("presheaf", ex.presheaf().level(level).keys().to_vec())
                }
                Space::Free => {
                    let truncation = truncation.unwrap_or(level).max(level);
                    let x = ex.free_space(truncation)?;
                    ("free", x.level(level).keys().to_vec())
                }
            };
            match format {
                Format::Json => {
                    let value = json!({
                        "example": ex.name(),
                        "space": space_name,
                        "level": level,
                        "count": keys.len(),
                        "elements": keys,
                    });
                    println!("{}", serde_json::to_string_pretty(&value)?);
                }
                Format::Table => {
                    for key in &keys {
                        println!("{key}");
                    }
                    println!("count: {}", keys.len());
                }
            }
            Ok(0)
        }
        Command::Check { example, which, truncation, format } => {
            let ex = load(&example)?;
            let (name, report) = match which {
                Which::Simplicial => {
                    ("simplicial", check_simplicial_identities(&ex.free_space(truncation)?))
                }
                Which::Decomposition => {
                    ("decomposition", check_decomposition(&ex.free_space(truncation)?))
                }
                Which::Segal => ("segal", check_segal(&ex.free_space(truncation)?)),
                Which::Sheaf => ("sheaf", check_sheaf(ex.presheaf())),
                Which::Culf => ("culf", check_culf(&ex.projection(truncation)?)),
            };
            report_outcome(
                json!({"example": ex.name(), "which": name, "truncation": truncation}),
                &report,
                format,
            )
        }
        Command::Comult { example, element, level, iterate, truncation, format } => {
            let ex = load(&example)?;
            let hits = ex.locate_element(&element)?;
            let grade = match (hits.as_slice(), level) {
                (_, Some(level)) => {
                    if !hits.iter().any(|&(n, _)| n == level) {
                        return Err(UsageError(format!(
                            "element {element:?} does not occur at grade {level}"
                        )));
                    }
                    level
                }
                ([(n, _)], None) => *n,
                (many, None) => {
                    return Err(UsageError(format!(
                        "element {element:?} occurs at grades {:?}; pass --level",
                        many.iter().map(|&(n, _)| n).collect::<Vec<_>>()
                    )))
                }
            };
            if iterate == 0 {
                return Err(UsageError("--iterate must be at least 1".to_string()));
            }
            let x = ex.free_space(truncation.max(2))?;
            let key = format!("{grade}|{}", ex.normalize_element(&element)?);
            let delta = comult_iterate(&x, &key, iterate + 1)?;
            match format {
                Format::Json => {
                    let mut value = json!({"example": ex.name(), "element": key});
                    value["tensor"] = serde_json::to_value(&delta)?;
                    println!("{}", serde_json::to_string_pretty(&value)?);
                }
                Format::Table => {
                    for (factors, coeff) in delta.terms() {
                        println!("{}  {}", coeff, factors.join(" (x) "));
                    }
                    println!("terms: {}", delta.len());
                }
            }
            Ok(0)
        }
        Command::Mobius { example, length, truncation, format } => {
            let ex = load(&example)?;
            let up_to = length.unwrap_or(ex.presheaf().budget());
            let truncation = truncation.unwrap_or(up_to + 1);
            let x = ex.free_space(truncation)?;
            let mu = mobius(&x, up_to)?;
            let zeta_fn = zeta(&x);
            let inverse_both_sides = convolve(&x, &zeta_fn, &mu)? == epsilon(&x)
                && convolve(&x, &mu, &zeta_fn)? == epsilon(&x);
            let recursion_matches_alternation = mobius_alternating(&x, up_to)? == mu;
            match format {
                Format::Json => {
                    let mut value = json!({
                        "example": ex.name(),
                        "up_to_length": up_to,
                        "inverse_both_sides": inverse_both_sides,
                        "recursion_matches_alternation": recursion_matches_alternation,
                    });
                    value["mobius"] = serde_json::to_value(mu.keyed(&x))?;
                    println!("{}", serde_json::to_string_pretty(&value)?);
                }
                Format::Table => {
                    for e in 0..x.level(1).len() {
                        println!("{}  {}", x.level(1).key(e), mu.value(e));
                    }
                }
            }
            Ok(if inverse_both_sides && recursion_matches_alternation { 0 } else { 1 })
        }
        Command::Roundtrip { example, truncation, format } => {
            let ex = load(&example)?;
            let report = check_roundtrip(ex.presheaf(), truncation)?;
            report_outcome(
                json!({"example": ex.name(), "truncation": truncation}),
                &report,
                format,
            )
        }
        Command::Compare { what, truncation, bound, format } => match what {
            CompareWhat::Tw => {
                let n = truncation.unwrap_or(5);
                let w = bound.unwrap_or(6);
                let report = compare_tw_bn_with_delta_inert(n, w)?;
                let delta = delta_inert_category(w)?;
                let hom_counts: Vec<serde_json::Value> = (0..=w)
                    .flat_map(|m| (m..=w).map(move |n| (m, n)))
                    .map(|(m, n)| {
                        let src = delta.object_index(&m.to_string()).expect("object exists");
                        let tgt = delta.object_index(&n.to_string()).expect("object exists");
                        json!({"source": m, "target": n, "count": delta.hom(src, tgt).len()})
                    })
                    .collect();
                report_outcome(
                    json!({
                        "comparison": "twisted-arrows-vs-inert-maps",
                        "truncation": n,
                        "bound": w,
                        "hom_counts": hom_counts,
                    }),
                    &report,
                    format,
                )
            }
            CompareWhat::Elements => {
                let k = truncation.unwrap_or(3);
                let n = bound.unwrap_or(6);
                let report = compare_active_arrows_with_el_bn(k, n)?;
                report_outcome(
                    json!({
                        "comparison": "active-arrows-vs-elements",
                        "arity_bound": k,
                        "weight_bound": n,
                    }),
                    &report,
                    format,
                )
            }
        },
    }
}
