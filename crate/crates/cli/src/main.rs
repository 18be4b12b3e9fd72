use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use frobkit_cli::{effective_spair_cap, execute, parse_order, Options, DEFAULT_EMAX};

/// Frobenius roots, test ideals, D-module certificates and semigroup FFRT
/// decompositions from a problem file. Exit status: 0 computed, 1
/// inconclusive, 2 input or resource error.
#[derive(Debug, Parser)]
#[command(name = "frobkit", version)]
struct Args {
    /// Problem file; standard input when absent or `-`.
    input: Option<PathBuf>,

    /// Horizon for commands whose cmd line has no emax=.
    #[arg(long, default_value_t = DEFAULT_EMAX)]
    emax: u32,

    /// Monomial order: grevlex or lex.
    #[arg(long, default_value = "grevlex")]
    order: String,

    /// Spaces per indentation level; 0 for compact output.
    #[arg(long, default_value_t = 2)]
    json_indent: usize,

    /// Reduction cap for Buchberger runs (overrides FROBKIT_SPAIR_CAP).
    #[arg(long)]
    spair_cap: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let fail = |msg: String| {
        eprintln!("frobkit: {msg}");
        ExitCode::from(2)
    };
    let Some(order) = parse_order(&args.order) else {
        return fail(format!("unknown order {:?} (grevlex or lex)", args.order));
    };
    let env = std::env::var("FROBKIT_SPAIR_CAP").ok();
    let spair_cap = match effective_spair_cap(args.spair_cap, env.as_deref()) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let text = match args.input.as_deref() {
        Some(path) if path.as_os_str() != "-" => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(format!("{}: {e}", path.display())),
        },
        _ => {
            let mut t = String::new();
            if let Err(e) = io::stdin().read_to_string(&mut t) {
                return fail(format!("stdin: {e}"));
            }
            t
        }
    };
    let opts = Options { e_max: args.emax, order, json_indent: args.json_indent, spair_cap };
    let (out, code) = execute(&text, &opts);
    if code == 2 {
        if let Ok(v) = serde_json::from_str::<serde_json::Value>(&out) {
            if let Some(msg) = v["error"].as_str() {
                eprintln!("frobkit: {msg}");
            }
        }
    }
    let mut stdout = io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
