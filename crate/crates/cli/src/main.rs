use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mgforge::mg::{derive, enumerate_mg_language, MgBounds};
use mgforge::verify::lexicon_stats;
use mgforge::{compare_languages, compile, parse_cfg, MgLexicon, VerifyBounds};

const EX_USAGE: u8 = 64;
const EX_DATAERR: u8 = 65;
const EX_NOINPUT: u8 = 66;
const EX_INCOMPLETE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "mgforge", version, about = "Compile categorized CFGs into Minimalist Grammars")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a grammar into a lexicon and a pipeline report.
    Compile {
        input: PathBuf,
        /// Lexicon path; a `.json` extension selects the JSON format.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// List the strings of a lexicon, shortest first.
    Enumerate {
        input: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
        /// Print a derivation tree under each string.
        #[arg(long)]
        trees: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Compile a grammar and compare both languages.
    Verify {
        input: PathBuf,
        /// Check this lexicon instead of compiling a fresh one.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        out: Output,
    },
    /// Find a derivation of one string.
    Derive {
        input: PathBuf,
        #[arg(long)]
        target: String,
        #[command(flatten)]
        bounds: Bounds,
        #[command(flatten)]
        out: Output,
    },
    /// Count the items of a lexicon.
    Stats {
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct Bounds {
    /// Longest string considered, in characters.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    max_len: u64,
    /// Chart budget for the lexicon side.
    #[arg(long, env = "MGFORGE_MAX_ITEMS", default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_items: u64,
    /// Derivation depth for recursive grammars.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
}

impl Bounds {
    fn verify(self) -> VerifyBounds {
        VerifyBounds {
            max_len: self.max_len as usize,
            max_items: self.max_items as usize,
            max_steps: self.max_steps as usize,
            ..VerifyBounds::default()
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct Output {
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

/// A failure with its exit status.
struct Failure(u8, String);

type Run = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(EX_NOINPUT, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(EX_NOINPUT, format!("{}: {e}", path.display())))
}

fn data<T>(r: mgforge::Result<T>, path: &Path) -> Result<T, Failure> {
    r.map_err(|e| Failure(EX_DATAERR, format!("{}: {e}", path.display())))
}

fn is_cfg(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "cfg")
}

/// Reads a lexicon in text or JSON form; a `.cfg` input is compiled first.
fn load_lexicon(path: &Path) -> Result<MgLexicon, Failure> {
    let text = read(path)?;
    if is_cfg(path) {
        let g = data(parse_cfg(&text), path)?;
        return Ok(data(compile(&g), path)?.lexicon);
    }
    if text.trim_start().starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Failure(EX_DATAERR, format!("{}: {e}", path.display())))?;
        data(MgLexicon::from_json(&value), path)
    } else {
        data(MgLexicon::parse(&text), path)
    }
}

fn json_line(out: &mut impl Write, v: &serde_json::Value) -> io::Result<()> {
    writeln!(out, "{v}")
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn run_compile(input: &Path, output: Option<PathBuf>, out: Output) -> Run {
    let g = data(parse_cfg(&read(input)?), input)?;
    let c = data(compile(&g), input)?;
    let lex_path = output.unwrap_or_else(|| input.with_extension("mg"));
    let lex_text = if lex_path.extension().is_some_and(|e| e == "json") {
        pretty(&c.lexicon.to_json())
    } else {
        c.lexicon.render()
    };
    write(&lex_path, &lex_text)?;
    let report = c.report.to_json();
    let report_path = lex_path.with_extension("report.json");
    write(&report_path, &pretty(&report))?;
    for w in &c.report.warnings {
        eprintln!("warning: {w}");
    }
    if out.json {
        println!("{}", pretty(&report));
    } else {
        let i = c.report.items;
        println!("wrote {}", lex_path.display());
        println!("wrote {}", report_path.display());
        println!(
            "{} items: {} word, {} remove adapter, {} select adapter",
            i.total, i.word, i.remove_adapter, i.select_adapter
        );
        println!(
            "category-recursion-free: {}",
            if c.report.category_recursion_free { "yes" } else { "no" }
        );
    }
    Ok(0)
}

fn run_enumerate(input: &Path, bounds: Bounds, trees: bool, out: Output) -> Run {
    let lex = load_lexicon(input)?;
    let mg = MgBounds::bounded(bounds.max_items as usize, bounds.max_len as usize);
    let (lang, complete) = match enumerate_mg_language(&lex, &mg) {
        Ok(l) => (l, true),
        Err(e) => (e.partial, false),
    };
    let stdout = io::stdout();
    let mut w = io::BufWriter::new(stdout.lock());
    let res: io::Result<()> = lang.by_length().into_iter().try_for_each(|s| {
        let tree = &lang.strings[s];
        if out.json {
            json_line(&mut w, &serde_json::json!({ "string": s, "tree": tree }))
        } else if trees {
            writeln!(w, "{s}")?;
            for line in tree.render().lines() {
                writeln!(w, "  {line}")?;
            }
            Ok(())
        } else {
            writeln!(w, "{s}")
        }
    });
    // a closed pipe just ends the listing
    let _ = res.and_then(|_| w.flush());
    if complete {
        Ok(0)
    } else {
        eprintln!("budget of {} items exhausted; listing is partial", bounds.max_items);
        Ok(EX_INCOMPLETE)
    }
}

fn run_verify(input: &Path, lexicon: Option<PathBuf>, bounds: Bounds, out: Output) -> Run {
    let g = data(parse_cfg(&read(input)?), input)?;
    let lex = match lexicon {
        Some(p) => load_lexicon(&p)?,
        None => data(compile(&g), input)?.lexicon,
    };
    let report = data(compare_languages(&g, &lex, bounds.verify()), input)?;
    if out.json {
        println!("{}", pretty(&report.to_json()));
    } else {
        print!("{}", report.summary());
    }
    Ok(report.exit_code() as u8)
}

fn run_derive(input: &Path, target: &str, bounds: Bounds, out: Output) -> Run {
    let lex = load_lexicon(input)?;
    let (tree, status) = match derive(&lex, target, bounds.max_items as usize) {
        Ok(Some(t)) => (Some(t), 0),
        Ok(None) => (None, 1),
        Err(_) => (None, EX_INCOMPLETE),
    };
    match (&tree, out.json) {
        (Some(t), true) => println!("{}", pretty(&serde_json::json!({ "string": target, "tree": t }))),
        (Some(t), false) => print!("{}", t.render()),
        (None, true) => println!("{}", serde_json::json!({ "string": target, "tree": null })),
        (None, false) => println!("not derivable within bounds"),
    }
    Ok(status)
}

fn run_stats(input: &Path, out: Output) -> Run {
    let s = lexicon_stats(&load_lexicon(input)?);
    if out.json {
        println!("{}", pretty(&serde_json::to_value(&s).expect("stats serialize")));
    } else {
        print!("{s}");
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EX_USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Compile { input, output, out } => run_compile(&input, output, out),
        Command::Enumerate { input, bounds, trees, out } => run_enumerate(&input, bounds, trees, out),
        Command::Verify { input, lexicon, bounds, out } => run_verify(&input, lexicon, bounds, out),
        Command::Derive { input, target, bounds, out } => run_derive(&input, &target, bounds, out),
        Command::Stats { input, out } => run_stats(&input, out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
