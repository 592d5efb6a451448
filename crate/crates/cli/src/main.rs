use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use notemill::census::{census_stats, has_errors, import_observation, parse_census, validate_census, Census};
use notemill::{
    compile, deliver, parse_compact, parse_om, CompiledTemplate, Format, Language, Level, LoadOptions, LocaleTable,
    NotationFile, NotationStore, OMObject, RenderContext, Renderer,
};

const LOCALES_ENV: &str = "NOTEMILL_LOCALES";

#[derive(Parser)]
#[command(name = "notemill", version, about = "Render OpenMath expressions with culture-specific notations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render an expression for one context.
    Render(RenderArgs),
    /// Compile an expression for a language and format into a template file.
    Compile(CompileArgs),
    /// Resolve a compiled template for a level and collection.
    Deliver(DeliverArgs),
    /// Work with notation census files.
    #[command(subcommand)]
    Census(CensusCommand),
}

#[derive(Args)]
struct ExprArgs {
    /// Expression file, or `-` for stdin.
    #[arg(long)]
    expr: String,
    /// Read the expression in compact syntax instead of OpenMath XML.
    #[arg(long)]
    compact: bool,
    /// Directory of notation files.
    #[arg(long)]
    notations: PathBuf,
    /// Accept notations marked as drafts.
    #[arg(long)]
    allow_drafts: bool,
    #[arg(long)]
    lang: Language,
    #[arg(long)]
    format: Format,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    input: ExprArgs,
    #[arg(long)]
    level: Level,
    #[arg(long, default_value = "")]
    collection: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    #[command(flatten)]
    input: ExprArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DeliverArgs {
    #[arg(long)]
    template: PathBuf,
    #[arg(long)]
    level: Level,
    #[arg(long, default_value = "")]
    collection: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CensusCommand {
    /// Check a census file and print findings.
    Validate {
        file: PathBuf,
        /// Directory that observation images are resolved against.
        #[arg(long)]
        assets: Option<PathBuf>,
    },
    /// Print summary counts as JSON.
    Stats { file: PathBuf },
    /// Write one draft notation file per observation.
    Import {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also load the written drafts to check that they are well-formed.
        #[arg(long)]
        allow_drafts: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Parse(String),
    Findings,
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Findings => 3,
            Failure::Internal(_) => 4,
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Parse(format!("stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{path}: {e}")))
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    read_input(&path.to_string_lossy())
}

fn write_output(out: Option<&Path>, payload: &str) -> Outcome {
    let result = match out {
        Some(path) => fs::write(path, format!("{payload}\n")),
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{payload}").and_then(|_| stdout.flush())
        }
    };
    result.map_err(|e| Failure::Internal(format!("writing output: {e}")))
}

fn locales() -> Result<LocaleTable, Failure> {
    let table = LocaleTable::default();
    match std::env::var_os(LOCALES_ENV) {
        None => Ok(table),
        Some(path) => {
            let text = read_file(Path::new(&path))?;
            table
                .with_overrides(&text)
                .map_err(|e| Failure::Parse(format!("{}: {e}", Path::new(&path).display())))
        }
    }
}

fn load_expr(args: &ExprArgs) -> Result<OMObject, Failure> {
    let text = read_input(&args.expr)?;
    let parsed = if args.compact { parse_compact(text.trim()) } else { parse_om(&text) };
    parsed.map_err(|e| Failure::Parse(format!("{}: {e}", args.expr)))
}

fn load_store(dir: &Path, allow_drafts: bool) -> Result<NotationStore, Failure> {
    let (store, warnings) =
        NotationStore::load_dir(dir, LoadOptions { allow_drafts }).map_err(|e| Failure::Parse(e.to_string()))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(store)
}

fn render(args: RenderArgs) -> Outcome {
    let expr = load_expr(&args.input)?;
    let store = load_store(&args.input.notations, args.input.allow_drafts)?;
    let locales = locales()?;
    let ctx = RenderContext::new(args.input.lang, args.input.format, args.level, args.collection);
    let out = Renderer::new(&store, &locales).render(&expr, &ctx);
    if out.fallback_count() > 0 {
        eprintln!("warning: {} subexpression(s) rendered without a notation", out.fallback_count());
    }
    write_output(args.out.as_deref(), &out.to_string())
}

fn compile_cmd(args: CompileArgs) -> Outcome {
    let expr = load_expr(&args.input)?;
    let store = load_store(&args.input.notations, args.input.allow_drafts)?;
    let locales = locales()?;
    let template = compile(&expr, &store, &locales, &args.input.lang, args.input.format);
    write_output(Some(&args.out), &template.to_artifact())
}

fn deliver_cmd(args: DeliverArgs) -> Outcome {
    let text = read_file(&args.template)?;
    let template = CompiledTemplate::from_artifact(&text)
        .map_err(|e| Failure::Parse(format!("{}: {e}", args.template.display())))?;
    let out = deliver(&template, args.level, &args.collection);
    write_output(args.out.as_deref(), &out.to_string())
}

fn load_census(path: &Path) -> Result<Census, Failure> {
    let text = read_file(path)?;
    let (census, warnings) = parse_census(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(census)
}

fn census_cmd(cmd: CensusCommand) -> Outcome {
    match cmd {
        CensusCommand::Validate { file, assets } => {
            let census = load_census(&file)?;
            let findings = validate_census(&census, assets.as_deref());
            let report: Vec<String> = findings.iter().map(ToString::to_string).collect();
            if !report.is_empty() {
                write_output(None, &report.join("\n"))?;
            }
            if has_errors(&findings) {
                return Err(Failure::Findings);
            }
            Ok(())
        }
        CensusCommand::Stats { file } => {
            let census = load_census(&file)?;
            let json = serde_json::to_string_pretty(&census_stats(&census))
                .map_err(|e| Failure::Internal(e.to_string()))?;
            write_output(None, &json)
        }
        CensusCommand::Import { file, out, allow_drafts } => {
            let census = load_census(&file)?;
            let mut drafts = Vec::new();
            let mut failed = false;
            for obs in &census.observations {
                match import_observation(obs, &census) {
                    Ok(xml) => drafts.push(NotationFile::new(format!("draft-{}.xml", obs.id), xml)),
                    Err(e) => {
                        eprintln!("{e}");
                        failed = true;
                    }
                }
            }
            if allow_drafts {
                notemill::load_notations(&drafts, LoadOptions { allow_drafts: true })
                    .map_err(|e| Failure::Internal(format!("imported drafts do not load: {e}")))?;
            }
            fs::create_dir_all(&out).map_err(|e| Failure::Internal(format!("{}: {e}", out.display())))?;
            for d in &drafts {
                let path = out.join(&d.name);
                fs::write(&path, &d.text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))?;
                eprintln!("wrote {}", path.display());
            }
            if failed {
                return Err(Failure::Findings);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Render(a) => render(a),
        Command::Compile(a) => compile_cmd(a),
        Command::Deliver(a) => deliver_cmd(a),
        Command::Census(c) => census_cmd(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Parse(m) => eprintln!("error: {m}"),
                Failure::Internal(m) => eprintln!("internal error: {m}"),
                Failure::Findings => eprintln!("error: validation reported errors"),
            }
            ExitCode::from(f.code())
        }
    }
}
