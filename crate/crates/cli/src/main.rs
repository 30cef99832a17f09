use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use perfcode::analysis::{kernel, rank, verify_extended_perfect, verify_perfect};
use perfcode::codefile::{complete_cardinality, CodeFile};
use perfcode::construction::{
    build_code, parse_tree, puncture, sample_tree, serialize_tree, AssignmentTree, Mode,
};
use perfcode::counting::{
    asymptotic_expansion, historical_bounds, k_la_exact, k_la_exact_log2, k_la_upper,
    k_la_upper_log2, nonequivalence_bounds, LogValue, EXACT_MAX_N,
};
use perfcode::error::Error;
use perfcode::selftest::{self, Level};
use perfcode::word::Space;

/// Lengths from here on need `--big`.
const BIG_N: u32 = 31;

#[derive(Parser)]
#[command(
    name = "perfcode",
    version,
    about = "Extended 1-perfect codes from local automorphisms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code from a sampled, identity or stored assignment tree.
    Generate {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        mode: Option<Mode>,
        /// Code file to write.
        #[arg(long)]
        out: PathBuf,
        /// Also write the assignment tree.
        #[arg(long)]
        tree_out: Option<PathBuf>,
        /// `identity`, or a tree file to build from instead of sampling.
        #[arg(long)]
        tree: Option<String>,
        /// Allow length 32 (about 1.5 GB of memory and a 2.2 GB code file).
        #[arg(long)]
        big: bool,
    },
    /// Check that a code file holds an extended perfect (or perfect) code.
    Verify {
        file: PathBuf,
        #[arg(long)]
        big: bool,
    },
    /// Print cardinality, rank and kernel of a code file.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        big: bool,
    },
    /// Delete the last coordinate of an extended perfect code.
    Puncture {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        big: bool,
    },
    /// Evaluate the code counts and bounds.
    Count {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = What::All)]
        what: What,
    },
    /// Run the brute-force oracle suites.
    Selftest {
        #[arg(long, default_value_t = 16)]
        n: u32,
        #[arg(long, value_enum, default_value_t = SelftestLevel::Quick)]
        level: SelftestLevel,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Exact,
    Upper,
    Bounds,
    Nonequiv,
    Expansion,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum SelftestLevel {
    Quick,
    Full,
}

enum Failure {
    /// A code or self-test failed its checks.
    Check,
    /// Bad arguments, malformed input or I/O trouble.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn check_big(n: u32, big: bool) -> Outcome {
    if n >= BIG_N && !big {
        return Err(usage(format!("length {n} needs --big")));
    }
    Ok(())
}

fn read_code_file(path: &Path, big: bool) -> Result<CodeFile, Failure> {
    let file = File::open(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let code = CodeFile::read(BufReader::with_capacity(1 << 20, file))
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    check_big(code.code.length(), big)?;
    Ok(code)
}

fn write_code_file(path: &Path, file: &CodeFile) -> Outcome {
    let out = File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    file.write(out)?;
    Ok(())
}

fn generate(
    n: u32,
    seed: u64,
    mode: Option<Mode>,
    out: &Path,
    tree_out: Option<&Path>,
    tree: Option<&str>,
    big: bool,
) -> Outcome {
    check_big(n, big)?;
    let s = Space::new(n)?;
    let tree = match tree {
        None => sample_tree(s, seed, mode.unwrap_or(Mode::La3))?,
        Some("identity") => AssignmentTree::identity(s, mode.unwrap_or(Mode::La3))?,
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
            let tree = parse_tree(&text).map_err(|e| usage(format!("{path}: {e}")))?;
            if tree.space().n() != n {
                return Err(usage(format!(
                    "{path}: tree has length {}",
                    tree.space().n()
                )));
            }
            if mode.is_some_and(|m| m != tree.mode()) {
                return Err(usage(format!("{path}: tree has mode {}", tree.mode())));
            }
            tree
        }
    };
    let code = build_code(&tree)?;
    let cardinality = code.cardinality();
    write_code_file(out, &CodeFile::new(code, true))?;
    if let Some(path) = tree_out {
        std::fs::write(path, serialize_tree(&tree))
            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    println!("wrote {cardinality} codewords to {}", out.display());
    Ok(())
}

fn verify(path: &Path, big: bool) -> Outcome {
    let file = read_code_file(path, big)?;
    let code = &file.code;
    let len = code.length();
    let passed = if len.is_power_of_two() {
        let report = verify_extended_perfect(code)?;
        print!("{report}");
        if !report.is_extended_perfect() {
            eprintln!("failed: {}", report.failures().join(", "));
        }
        report.is_extended_perfect()
    } else if complete_cardinality(len).is_some() {
        let perfect = verify_perfect(code)?;
        println!("n={len}");
        println!("cardinality={}", code.cardinality());
        println!("perfect={perfect}");
        if !perfect {
            eprintln!("failed: perfect");
        }
        perfect
    } else {
        return Err(usage(format!("no perfect codes of length {len}")));
    };
    if passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn analyze(path: &Path, big: bool) -> Outcome {
    let file = read_code_file(path, big)?;
    let code = &file.code;
    let len = code.length();
    if len.is_power_of_two() && (4..=32).contains(&len) && code.all_even() {
        print!("{}", verify_extended_perfect(code)?);
        return Ok(());
    }
    println!("n={len}");
    println!("cardinality={}", code.cardinality());
    println!("rank={}", rank(code)?);
    println!("kernel_dimension={}", kernel(code)?.dimension());
    if complete_cardinality(len).is_some() && len <= 32 {
        println!("perfect={}", verify_perfect(code)?);
    }
    Ok(())
}

fn puncture_cmd(path: &Path, out: &Path, big: bool) -> Outcome {
    let file = read_code_file(path, big)?;
    let punctured = puncture(&file.code)?;
    let cardinality = punctured.cardinality();
    write_code_file(out, &CodeFile::new(punctured, true))?;
    println!("wrote {cardinality} codewords to {}", out.display());
    Ok(())
}

fn print_count<T: std::fmt::Display>(
    name: &str,
    labelled: bool,
    exact: Result<T, Error>,
    log: LogValue,
) -> Outcome {
    match exact {
        Ok(v) if labelled => println!("{name}={v}"),
        Ok(v) => println!("{v}"),
        Err(Error::Unsupported(_)) => eprintln!("{name}: decimal form only up to n={EXACT_MAX_N}"),
        Err(e) => return Err(e.into()),
    }
    if labelled {
        println!("{name}_log2={log}");
    } else {
        println!("{log}");
    }
    Ok(())
}

fn count(n: u32, what: What) -> Outcome {
    let all = matches!(what, What::All);
    if matches!(what, What::Exact | What::All) {
        print_count("exact", all, k_la_exact(n), k_la_exact_log2(n)?)?;
    }
    if matches!(what, What::Upper | What::All) {
        print_count("upper", all, k_la_upper(n), k_la_upper_log2(n)?)?;
    }
    if matches!(what, What::Bounds | What::All) {
        let h = historical_bounds(n)?;
        println!("vasilev={}", h.vasilev);
        println!("refined_lower={}", h.refined_lower);
        println!("la_exact={}", k_la_exact_log2(n)?);
        println!("la_upper={}", k_la_upper_log2(n)?);
        println!("upper_total(N=n)={}", h.upper_n);
        println!("upper_total(N=n-1)={}", h.upper_n_minus_1);
    }
    if matches!(what, What::Nonequiv | What::All) {
        let b = nonequivalence_bounds(n)?;
        println!("nonequivalent_extended={}", b.extended);
        println!("nonequivalent_perfect={}", b.punctured);
    }
    if matches!(what, What::Expansion | What::All) {
        let (terms, top) = asymptotic_expansion(n)?;
        for term in &terms {
            println!("expansion_k{}={}", term.k, LogValue(term.log2));
        }
        println!("expansion_top={}", LogValue(top));
        let sum = terms.iter().map(|t| t.log2).sum::<f64>() + top;
        println!("expansion_sum={}", LogValue(sum));
    }
    Ok(())
}

fn selftest_cmd(n: u32, level: SelftestLevel) -> Outcome {
    let level = match level {
        SelftestLevel::Quick => Level::Quick,
        SelftestLevel::Full => Level::Full,
    };
    let checks = selftest::run(n, level)?;
    for c in &checks {
        println!("{c}");
    }
    if checks.iter().all(|c| c.passed) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate {
            n,
            seed,
            mode,
            out,
            tree_out,
            tree,
            big,
        } => generate(
            n,
            seed,
            mode,
            &out,
            tree_out.as_deref(),
            tree.as_deref(),
            big,
        ),
        Command::Verify { file, big } => verify(&file, big),
        Command::Analyze { file, big } => analyze(&file, big),
        Command::Puncture { file, out, big } => puncture_cmd(&file, &out, big),
        Command::Count { n, what } => count(n, what),
        Command::Selftest { n, level } => selftest_cmd(n, level),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
