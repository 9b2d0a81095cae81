//! `fidel` command line: homophone normalization, scoring, and corpus tools
//! for Ge'ez-script text.
//!
//! Every subcommand wraps one library operation. Outputs are deterministic:
//! identical inputs and flags produce byte-identical outputs. Errors exit
//! nonzero with a one-line diagnostic on stderr.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use fidel::corpus::{
    char_coverage, filter_by_homophones, load_parallel_files, load_parallel_tsv, split,
    vocab_stats, CorpusStats, CoverageReport, ParallelCorpus, Side, SplitRatios,
};
use fidel::metrics::{ChrfParams, Smoothing};
use fidel::normalize::{build_scheme, SchemeFile, SchemeKind};
use fidel::score::{compare_report, score_run, NormalizeSide, ReportFormat, ScoreOptions};
use fidel::{Language, LanguageAlphabet};

#[derive(Parser)]
#[command(
    name = "fidel",
    version,
    about = "Homophone normalization, BLEU/ChrF scoring, and corpus tools for Ge'ez-script text"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize text line by line (stdin/stdout or files)
    Normalize(NormalizeArgs),
    /// Score a hypothesis file against a reference under normalization schemes
    Score(ScoreArgs),
    /// Keep corpus pairs with enough homophone characters on one side
    Filter(FilterArgs),
    /// Split a parallel corpus into train/eval/test with a seeded shuffle
    Split(SplitArgs),
    /// Sentence, token, and character statistics for a text file
    Stats(StatsArgs),
    /// Character coverage diagnostics for a hypothesis/reference run
    Coverage(CoverageArgs),
    /// Check that a scheme table file parses and is idempotent
    ValidateTable(ValidateTableArgs),
}

#[derive(Args)]
struct NormalizeArgs {
    /// Input text file; stdin when omitted
    input: Option<PathBuf>,
    /// Language the scheme is built for
    #[arg(long)]
    lang: Language,
    /// Normalization scheme
    #[arg(long, default_value = "identity")]
    scheme: SchemeKind,
    /// Scheme table file, or "default" for the built-in table
    #[arg(long, default_value = "default")]
    table: String,
    /// Re-select h-only group targets by character frequency over this corpus
    #[arg(long, value_name = "FILE")]
    select_from: Option<PathBuf>,
    /// Output file; stdout when omitted
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    /// Hypothesis file, one sentence per line
    hyp: PathBuf,
    /// Reference file, line-aligned with the hypothesis file
    reference: PathBuf,
    /// Language the schemes are built for
    #[arg(long)]
    lang: Language,
    /// Comma-separated schemes to compare (identity is always included)
    #[arg(long, value_delimiter = ',', default_value = "identity")]
    post_norm: Vec<SchemeKind>,
    /// BLEU smoothing
    #[arg(long, default_value = "exp")]
    smoothing: Smoothing,
    /// ChrF word n-gram order (0 disables; 2 adds the word-order extension)
    #[arg(long, default_value_t = 0)]
    chrf_word_order: usize,
    /// Scheme table file replacing the built-in table of its declared kind
    #[arg(long = "table", value_name = "FILE")]
    tables: Vec<PathBuf>,
    /// Diagnostic only: normalize just one side instead of both
    #[arg(long, default_value = "both")]
    side: NormalizeSide,
    /// Report format
    #[arg(long, default_value = "table")]
    format: ReportFormat,
}

#[derive(Args)]
struct FilterArgs {
    /// Parallel corpus: one TSV file, or a source file and a target file
    #[arg(required = true, num_args = 1..=2)]
    corpus: Vec<PathBuf>,
    /// Language whose homophone groups are counted
    #[arg(long)]
    lang: Language,
    /// Keep pairs with at least this many homophone characters
    #[arg(long)]
    threshold: u64,
    /// Side of the pair the characters are counted on
    #[arg(long, default_value = "target")]
    side: Side,
    /// Scheme table supplying the groups, or "default" for the built-in h-only table
    #[arg(long, default_value = "default")]
    table: String,
    /// Output TSV file; stdout when omitted
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SplitArgs {
    /// Parallel corpus: one TSV file, or a source file and a target file
    #[arg(required = true, num_args = 1..=2)]
    corpus: Vec<PathBuf>,
    /// Train:eval:test proportions
    #[arg(long, default_value = "8:1:1")]
    ratios: SplitRatios,
    /// Shuffle seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Writes <prefix>.train.tsv, <prefix>.eval.tsv, and <prefix>.test.tsv
    #[arg(short, long, value_name = "PREFIX")]
    output_prefix: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    /// Text or TSV file; stdin when omitted
    input: Option<PathBuf>,
    /// Treat the input as TSV and read only this side
    #[arg(long)]
    side: Option<Side>,
    /// Report format (table or json)
    #[arg(long, default_value = "table")]
    format: ReportFormat,
}

#[derive(Args)]
struct CoverageArgs {
    /// Hypothesis file, one sentence per line
    hyp: PathBuf,
    /// Reference file for the same run
    reference: PathBuf,
    /// Language whose alphabet defines foreign characters
    #[arg(long)]
    lang: Language,
    /// Report format (table or json)
    #[arg(long, default_value = "table")]
    format: ReportFormat,
}

#[derive(Args)]
struct ValidateTableArgs {
    /// Scheme table file to check
    #[arg(long)]
    table: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Normalize(args) => run_normalize(args),
        Command::Score(args) => run_score(args),
        Command::Filter(args) => run_filter(args),
        Command::Split(args) => run_split(args),
        Command::Stats(args) => run_stats(args),
        Command::Coverage(args) => run_coverage(args),
        Command::ValidateTable(args) => run_validate_table(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", one_line(&err));
            ExitCode::FAILURE
        }
    }
}

/// Flatten an error chain to a single stderr line.
fn one_line(err: &anyhow::Error) -> String {
    format!("{err:#}")
        .lines()
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let content =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let content = content.strip_prefix('\u{feff}').unwrap_or(&content);
    Ok(content
        .lines()
        .map(|l| l.trim_end_matches('\r').to_string())
        .collect())
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Interpret `--table`: the literal "default" selects the built-in table.
fn table_path(table: &str) -> Option<&Path> {
    (table != "default").then(|| Path::new(table))
}

fn load_corpus(paths: &[PathBuf]) -> Result<ParallelCorpus> {
    match paths {
        [tsv] => load_parallel_tsv(tsv).with_context(|| format!("loading {}", tsv.display())),
        [src, tgt] => load_parallel_files(src, tgt)
            .with_context(|| format!("loading {} / {}", src.display(), tgt.display())),
        _ => unreachable!("clap enforces 1..=2 corpus paths"),
    }
}

fn write_tsv(corpus: &ParallelCorpus, out: &mut dyn Write) -> io::Result<()> {
    for (src, tgt) in corpus.pairs() {
        writeln!(out, "{src}\t{tgt}")?;
    }
    Ok(())
}

fn run_normalize(args: NormalizeArgs) -> Result<()> {
    let corpus_lines = args
        .select_from
        .as_deref()
        .map(read_lines)
        .transpose()?;
    let table = build_scheme(
        args.scheme,
        args.lang,
        corpus_lines.as_deref(),
        table_path(&args.table),
    )?;
    for warning in table.warnings() {
        eprintln!("warning: {warning}");
    }

    let reader: Box<dyn BufRead> = match &args.input {
        Some(p) => Box::new(BufReader::new(
            File::open(p).with_context(|| format!("reading {}", p.display()))?,
        )),
        None => Box::new(BufReader::new(io::stdin().lock())),
    };
    let mut writer = open_output(args.output.as_deref())?;
    let mut first = true;
    for line in reader.lines() {
        let mut line = line.context("reading input")?;
        if first {
            if let Some(stripped) = line.strip_prefix('\u{feff}') {
                line = stripped.to_string();
            }
            first = false;
        }
        writeln!(writer, "{}", table.apply(&line))?;
    }
    writer.flush()?;
    Ok(())
}

fn run_score(args: ScoreArgs) -> Result<()> {
    let hyps = read_lines(&args.hyp)?;
    let refs = read_lines(&args.reference)?;

    // custom table files replace the built-in table of their declared kind
    let mut overrides: BTreeMap<String, PathBuf> = BTreeMap::new();
    for path in &args.tables {
        let file = SchemeFile::from_path(path)
            .with_context(|| format!("loading {}", path.display()))?;
        if overrides.insert(file.kind.to_string(), path.clone()).is_some() {
            bail!("two table files declare kind {}", file.kind);
        }
    }

    let mut schemes = Vec::new();
    for &kind in &args.post_norm {
        let path = overrides.get(&kind.to_string()).map(PathBuf::as_path);
        schemes.push(build_scheme(kind, args.lang, None, path)?);
    }

    let options = ScoreOptions {
        smoothing: args.smoothing,
        chrf: ChrfParams {
            word_order: args.chrf_word_order,
            ..ChrfParams::default()
        },
        side: args.side,
    };
    let comparison = score_run(&hyps, &refs, &schemes, options)?;
    print!("{}", compare_report(&comparison, args.format));
    Ok(())
}

fn run_filter(args: FilterArgs) -> Result<()> {
    let groups = match table_path(&args.table) {
        Some(path) => {
            SchemeFile::from_path(path)
                .with_context(|| format!("loading {}", path.display()))?
                .groups
        }
        None => {
            SchemeFile::builtin(SchemeKind::HOnly, args.lang)
                .with_context(|| format!("no built-in homophone groups for {}", args.lang))?
                .groups
        }
    };
    if groups.is_empty() {
        bail!("the table defines no homophone groups to count");
    }

    let corpus = load_corpus(&args.corpus)?;
    let kept = filter_by_homophones(&corpus, args.side, &groups, args.threshold);
    let mut out = open_output(args.output.as_deref())?;
    write_tsv(&kept, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run_split(args: SplitArgs) -> Result<()> {
    let corpus = load_corpus(&args.corpus)?;
    let (train, eval, test) = split(&corpus, args.ratios, args.seed)?;
    for (part, name) in [(&train, "train"), (&eval, "eval"), (&test, "test")] {
        let mut path = args.output_prefix.clone().into_os_string();
        path.push(format!(".{name}.tsv"));
        let path = PathBuf::from(path);
        let mut out = open_output(Some(&path))?;
        write_tsv(part, &mut out)?;
        out.flush()?;
    }
    Ok(())
}

fn render_stats(stats: &CorpusStats) -> String {
    let chars: u64 = stats.char_histogram.values().sum();
    format!(
        "sentences       {}\ntokens          {}\nunique tokens   {}\ncharacters      {}\ndistinct chars  {}\n",
        stats.sentences,
        stats.tokens,
        stats.unique_tokens,
        chars,
        stats.char_histogram.len(),
    )
}

fn run_stats(args: StatsArgs) -> Result<()> {
    let lines = match &args.input {
        Some(path) => read_lines(path)?,
        None => {
            let mut buf = String::new();
            io::stdin()
                .lock()
                .read_to_string(&mut buf)
                .context("reading stdin")?;
            let buf = buf.strip_prefix('\u{feff}').unwrap_or(&buf);
            buf.lines().map(|l| l.trim_end_matches('\r').to_string()).collect()
        }
    };
    let lines = match args.side {
        None => lines,
        Some(side) => {
            let corpus = ParallelCorpus::from_tsv(&lines.join("\n"))?;
            let picked: Vec<String> = match side {
                Side::Source => corpus.sources().map(str::to_string).collect(),
                Side::Target => corpus.targets().map(str::to_string).collect(),
            };
            picked
        }
    };
    let stats = vocab_stats(&lines);
    match args.format {
        ReportFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(&stats).expect("stats serialize")
        ),
        ReportFormat::Table => print!("{}", render_stats(&stats)),
        ReportFormat::Csv => bail!("csv output is only available for `score`"),
    }
    Ok(())
}

fn render_coverage(report: &CoverageReport) -> String {
    let mut out = String::new();
    let mut section = |title: &str, map: &BTreeMap<char, u64>| {
        out.push_str(&format!("{title}: {}\n", map.len()));
        if map.is_empty() {
            out.push_str("  (none)\n");
        }
        for (ch, count) in map {
            out.push_str(&format!("  {ch}  {count}\n"));
        }
    };
    section("characters in references never produced", &report.missing_from_hyp);
    section("characters foreign to the language", &report.foreign);
    out
}

fn run_coverage(args: CoverageArgs) -> Result<()> {
    let hyps = read_lines(&args.hyp)?;
    let refs = read_lines(&args.reference)?;
    let alphabet = LanguageAlphabet::builtin(args.lang);
    let report = char_coverage(&hyps, &refs, &alphabet);
    match args.format {
        ReportFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ),
        ReportFormat::Table => print!("{}", render_coverage(&report)),
        ReportFormat::Csv => bail!("csv output is only available for `score`"),
    }
    Ok(())
}

fn run_validate_table(args: ValidateTableArgs) -> Result<()> {
    let table = SchemeFile::from_path(&args.table)
        .with_context(|| format!("loading {}", args.table.display()))?
        .compile()?;
    println!(
        "ok: {} {} table, {} char rule(s), {} sequence rule(s)",
        table.language(),
        table.kind(),
        table.char_rules().len(),
        table.seq_rules().len(),
    );
    Ok(())
}
