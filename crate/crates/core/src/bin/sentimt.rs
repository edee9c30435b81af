use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use sentimt::bleu::{corpus_bleu, BleuScore, Smoothing};
use sentimt::config::{BackendKind, CliConfig, TierPreference};
use sentimt::corpus::{check_aligned, read_lines, write_lines};
use sentimt::dialect::{self, DialectModel, Split, TrainConfig};
use sentimt::lexicon::{LexiconFormat, PhraseLexicon, PriorPolarityLexicon};
use sentimt::report::{self, CompareOptions, RenderFormat};
use sentimt::sam::{score_pairs, summarize, CorpusSamSummary};
use sentimt::silver::{
    self, ExportFormat, HttpBackend, HttpConfig, InfusionStats, MockBackend, MtBackend,
    RoundTripConfig, SilverError, SilverTriple,
};
use sentimt::textproc::{annotate_text, ingest_conllu, tokenize_words};
use sentimt::{demo, AnnotatedSentence, AnnotationTier, Error, Lang};

#[derive(Parser)]
#[command(name = "sentimt", version, about = "Sentiment-aware evaluation and silver data for DA-EN MT")]
struct Cli {
    /// TOML config file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-sentence and corpus SAM scores.
    Sam(SamArgs),
    /// Corpus BLEU as JSON on stdout.
    Bleu(BleuArgs),
    /// DA/MSA classifier.
    #[command(subcommand)]
    Dialect(DialectCommand),
    /// Silver DA-EN-MSA data.
    #[command(subcommand)]
    Silver(SilverCommand),
    /// Multi-system comparison tables.
    #[command(subcommand)]
    Report(ReportCommand),
    /// Write the bundled demo data to a directory.
    Demo {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct LexiconArgs {
    /// Prior-polarity lexicon (defaults to the config's `lexicon`).
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// `lemma-hash-pos` or `three-column`; detected when omitted.
    #[arg(long)]
    lexicon_format: Option<LexiconFormat>,
}

#[derive(Args)]
struct SamArgs {
    #[arg(long)]
    hyp: PathBuf,
    #[arg(long = "ref")]
    reference: PathBuf,
    #[command(flatten)]
    lexicon: LexiconArgs,
    /// Tagger output for the hypothesis, aligned with --hyp.
    #[arg(long, requires = "conllu_ref")]
    conllu_hyp: Option<PathBuf>,
    /// Tagger output for the reference, aligned with --ref.
    #[arg(long, requires = "conllu_hyp")]
    conllu_ref: Option<PathBuf>,
    /// Output directory for sam.tsv and summary.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BleuArgs {
    #[arg(long)]
    hyp: PathBuf,
    #[arg(long = "ref")]
    reference: PathBuf,
    /// `add-one-exp` (default) or `none`.
    #[arg(long, default_value = "add-one-exp")]
    smoothing: Smoothing,
}

#[derive(Subcommand)]
enum DialectCommand {
    /// Train a model from `label<TAB>text` lines.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 20)]
        epochs: usize,
        #[arg(long, default_value_t = 0.5)]
        learning_rate: f64,
        #[arg(long, default_value_t = 1e-6)]
        l2: f64,
        #[arg(long, default_value_t = 3)]
        patience: usize,
        #[arg(long, default_value_t = 0.8)]
        train_frac: f64,
        #[arg(long, default_value_t = 0.1)]
        dev_frac: f64,
        #[arg(long, default_value_t = 18)]
        hash_bits: u32,
    },
    /// Print `index<TAB>label<TAB>probability` per input line.
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// One sentence per line; stdin when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
    },
    /// Split a corpus into DA and MSA files.
    Extract {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out_da: PathBuf,
        #[arg(long)]
        out_msa: PathBuf,
        /// Per-line `index<TAB>label<TAB>probability` report.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
    },
    /// Metrics JSON on labelled data.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
    },
}

#[derive(Args)]
struct BackendArgs {
    /// `mock` or `http`.
    #[arg(long)]
    backend: Option<String>,
    /// Canned translations for the mock backend.
    #[arg(long)]
    mock_table: Option<PathBuf>,
    #[arg(long)]
    endpoint: Option<String>,
    /// Environment variable holding the bearer token.
    #[arg(long)]
    token_env: Option<String>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    max_retries: Option<usize>,
    #[arg(long)]
    retry_backoff_ms: Option<u64>,
    #[arg(long)]
    timeout_secs: Option<u64>,
    #[arg(long)]
    in_flight: Option<usize>,
    #[arg(long)]
    max_consecutive_failures: Option<usize>,
}

#[derive(Subcommand)]
enum SilverCommand {
    /// Translate DA lines to EN and back to Arabic; writes tsv3.
    Roundtrip {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// `index<TAB>reasons` for triples that need review.
        #[arg(long)]
        review: Option<PathBuf>,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Correct known idiom mistranslations in a tsv3 file.
    Infuse {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Phrase lexicon (defaults to the config's `phrase_lexicon`).
        #[arg(long)]
        phrases: Option<PathBuf>,
        /// JSON lines with the infusion log and flags of each triple.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Convert a tsv3 file to `tsv3` or `paired-files`.
    Export {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "tsv3")]
        format: ExportFormat,
    },
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Score systems against one reference.
    Compare {
        #[arg(long = "ref")]
        reference: PathBuf,
        /// `name=path`, repeated; order is kept in the report.
        #[arg(long = "system", required = true)]
        systems: Vec<String>,
        #[command(flatten)]
        lexicon: LexiconArgs,
        /// `system<TAB>annotator<TAB>mean_score` lines.
        #[arg(long)]
        human: Option<PathBuf>,
        #[arg(long, default_value = "add-one-exp")]
        smoothing: Smoothing,
        /// `json`, `tsv` or `markdown`.
        #[arg(long, default_value = "json")]
        format: RenderFormat,
        /// Written to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Value recorded as `created_at`; omitted by default so reruns are
        /// byte-identical.
        #[arg(long)]
        created_at: Option<String>,
    },
    /// Re-render a JSON report.
    Render {
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value = "markdown")]
        format: RenderFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_user_error() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

impl From<SilverError> for Failure {
    fn from(e: SilverError) -> Self {
        Failure {
            code: match e {
                SilverError::Config(_) => 2,
                SilverError::BackendUnreachable { .. } => 1,
            },
            message: e.to_string(),
        }
    }
}

fn user_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CliResult {
    let config = match &cli.config {
        Some(path) => CliConfig::load(path)?,
        None => CliConfig::default(),
    };
    let verbosity = cli.verbose.max(config.verbosity.unwrap_or(0));
    let level = match verbosity {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();

    let ctx = Context {
        seed: cli.seed.or(config.seed).unwrap_or(42),
        config,
    };
    let pool = match cli.threads.or(ctx.config.threads) {
        Some(0) => return Err(user_error("--threads must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    }
    .map_err(|e| Failure {
        code: 1,
        message: format!("cannot start worker threads: {e}"),
    })?;
    pool.install(|| dispatch(cli.command, &ctx))
}

struct Context {
    config: CliConfig,
    seed: u64,
}

impl Context {
    fn lexicon(&self, args: &LexiconArgs) -> CliResult<PriorPolarityLexicon> {
        let path = args
            .lexicon
            .as_ref()
            .or(self.config.lexicon.as_ref())
            .ok_or_else(|| user_error("no lexicon given (use --lexicon or `lexicon` in the config)"))?;
        let format = args.lexicon_format.or(self.config.lexicon_format);
        Ok(PriorPolarityLexicon::load(path, format)?)
    }

    fn phrases(&self, path: Option<&PathBuf>) -> CliResult<PhraseLexicon> {
        let path = path
            .or(self.config.phrase_lexicon.as_ref())
            .ok_or_else(|| user_error("no phrase lexicon given (use --phrases or `phrase_lexicon` in the config)"))?;
        Ok(PhraseLexicon::load(path)?)
    }
}

fn dispatch(command: Command, ctx: &Context) -> CliResult {
    match command {
        Command::Sam(args) => cmd_sam(args, ctx),
        Command::Bleu(args) => cmd_bleu(args),
        Command::Dialect(c) => cmd_dialect(c, ctx),
        Command::Silver(c) => cmd_silver(c, ctx),
        Command::Report(c) => cmd_report(c, ctx),
        Command::Demo { out } => {
            let written = demo::write_bundle(&out, ctx.seed)?;
            for p in written {
                println!("{}", p.display());
            }
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| Error::write(path, e).into())
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => write_file(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| Error::Io(e).into())
        }
    }
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(Error::from)?;
    s.push('\n');
    Ok(s)
}

fn annotate_lines(lines: &[String], lex: &PriorPolarityLexicon) -> Vec<AnnotatedSentence> {
    lines.par_iter().map(|l| annotate_text(l, Lang::En, lex)).collect()
}

#[derive(Serialize)]
struct SamSummaryFile<'a> {
    hyp: String,
    reference: String,
    lexicon: &'a str,
    annotation_tier: AnnotationTier,
    #[serde(flatten)]
    summary: CorpusSamSummary,
}

fn cmd_sam(args: SamArgs, ctx: &Context) -> CliResult {
    let lex = ctx.lexicon(&args.lexicon)?;
    let hyp_lines = read_lines(&args.hyp)?;
    let ref_lines = read_lines(&args.reference)?;
    check_aligned("sam", hyp_lines.len(), ref_lines.len())?;

    let preference = ctx.config.annotation.unwrap_or_default();
    let conllu = match (&args.conllu_hyp, &args.conllu_ref, preference) {
        (Some(_), Some(_), TierPreference::Fallback) => {
            warn!("annotation = \"fallback\" in config: ignoring CoNLL-U inputs");
            None
        }
        (Some(h), Some(r), _) => Some((h, r)),
        (_, _, TierPreference::Conllu) => {
            return Err(user_error(
                "annotation = \"conllu\" requires --conllu-hyp and --conllu-ref",
            ))
        }
        _ => None,
    };
    let (hyp, reference, tier) = match conllu {
        Some((h, r)) => {
            let hyp = ingest_conllu(h, Lang::En)?;
            let reference = ingest_conllu(r, Lang::En)?;
            for (what, n, expected) in [("--conllu-hyp", hyp.len(), hyp_lines.len()), ("--conllu-ref", reference.len(), ref_lines.len())] {
                if n != expected {
                    return Err(user_error(format!(
                        "{what} has {n} sentences but the plain-text file has {expected} lines"
                    )));
                }
            }
            (hyp, reference, AnnotationTier::Conllu)
        }
        None => (
            annotate_lines(&hyp_lines, &lex),
            annotate_lines(&ref_lines, &lex),
            AnnotationTier::Fallback,
        ),
    };

    let pairs: Vec<_> = hyp.into_iter().zip(reference).collect();
    let results = score_pairs(&pairs, &lex);
    let summary = summarize(&results);

    fs::create_dir_all(&args.out).map_err(|e| Error::write(&args.out, e))?;
    let mut tsv = String::from("index\tsam\ts_h\ts_r\tm\tn\n");
    for (i, r) in results.iter().enumerate() {
        let _ = writeln!(tsv, "{}\t{}\t{}\t{}\t{}\t{}", i + 1, r.sam, r.s_h, r.s_r, r.m, r.n);
    }
    write_file(&args.out.join("sam.tsv"), &tsv)?;
    let file = SamSummaryFile {
        hyp: args.hyp.display().to_string(),
        reference: args.reference.display().to_string(),
        lexicon: lex.source_name(),
        annotation_tier: tier,
        summary,
    };
    write_file(&args.out.join("summary.json"), &json(&file)?)?;
    info!("scored {} pairs ({} defined)", file.summary.n_pairs, file.summary.n_defined);
    Ok(())
}

fn tokenized(path: &Path) -> CliResult<Vec<Vec<String>>> {
    Ok(read_lines(path)?
        .par_iter()
        .map(|l| tokenize_words(l, Lang::En))
        .collect())
}

fn cmd_bleu(args: BleuArgs) -> CliResult {
    let hyp = tokenized(&args.hyp)?;
    let reference = tokenized(&args.reference)?;
    check_aligned("bleu", hyp.len(), reference.len())?;
    let score: BleuScore = corpus_bleu(&hyp, &reference, args.smoothing)?;
    emit(None, &json(&score)?)
}

fn check_threshold(t: f64) -> CliResult {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(user_error(format!("threshold must be in (0, 1), got {t}")))
    }
}

fn read_input(input: Option<&Path>) -> CliResult<Vec<String>> {
    match input {
        Some(path) => Ok(read_lines(path)?),
        None => io::stdin()
            .lock()
            .lines()
            .map(|l| l.map_err(|e| Error::Io(e).into()))
            .collect(),
    }
}

fn cmd_dialect(command: DialectCommand, ctx: &Context) -> CliResult {
    match command {
        DialectCommand::Train {
            data,
            model,
            epochs,
            learning_rate,
            l2,
            patience,
            train_frac,
            dev_frac,
            hash_bits,
        } => {
            let examples = dialect::read_labeled(&data)?;
            let config = TrainConfig {
                epochs,
                learning_rate,
                l2,
                seed: ctx.seed,
                patience,
                hash_bits,
                ..TrainConfig::default()
            };
            let split = Split {
                train: train_frac,
                dev: dev_frac,
            };
            let trained = dialect::train(&examples, split, &config)?;
            trained.save(&model)?;
            emit(None, &json(&trained.training_meta)?)
        }
        DialectCommand::Predict {
            model,
            input,
            threshold,
        } => {
            check_threshold(threshold)?;
            let model = DialectModel::load(&model)?;
            let lines = read_input(input.as_deref())?;
            let preds: Vec<_> = lines
                .par_iter()
                .map(|l| model.predict_with_threshold(l, threshold))
                .collect();
            let mut out = String::new();
            for (i, p) in preds.iter().enumerate() {
                let _ = writeln!(out, "{}\t{}\t{}", i + 1, p.label, p.probability);
            }
            emit(None, &out)
        }
        DialectCommand::Extract {
            model,
            input,
            out_da,
            out_msa,
            report,
            threshold,
        } => {
            let model = DialectModel::load(&model)?;
            let corpus = read_lines(&input)?;
            let ex = dialect::extract_da(&model, &corpus, threshold)?;
            write_lines(&out_da, &ex.da)?;
            write_lines(&out_msa, &ex.msa)?;
            if let Some(path) = report {
                let mut out = String::from("index\tlabel\tprobability\n");
                for r in &ex.report {
                    let _ = writeln!(out, "{}\t{}\t{}", r.index + 1, r.label, r.probability);
                }
                write_file(&path, &out)?;
            }
            info!("{} DA, {} MSA lines", ex.da.len(), ex.msa.len());
            Ok(())
        }
        DialectCommand::Eval {
            model,
            data,
            threshold,
        } => {
            check_threshold(threshold)?;
            let model = DialectModel::load(&model)?;
            let test = dialect::read_labeled(&data)?;
            if test.is_empty() {
                return Err(user_error(format!("{} has no labelled lines", data.display())));
            }
            emit(None, &json(&dialect::evaluate(&model, &test, threshold))?)
        }
    }
}

fn backend(args: &BackendArgs, ctx: &Context) -> CliResult<(Box<dyn MtBackend>, RoundTripConfig)> {
    let cfg = &ctx.config.backend;
    let kind = match args.backend.as_deref() {
        Some("mock") => BackendKind::Mock,
        Some("http") => BackendKind::Http,
        Some(other) => return Err(user_error(format!("unknown backend `{other}` (expected mock or http)"))),
        None => cfg.kind.unwrap_or_default(),
    };
    let defaults = RoundTripConfig::default();
    let rt = RoundTripConfig {
        batch_size: args.batch_size.or(cfg.batch_size).unwrap_or(defaults.batch_size),
        max_retries: args.max_retries.or(cfg.max_retries).unwrap_or(defaults.max_retries),
        retry_backoff_ms: args
            .retry_backoff_ms
            .or(cfg.retry_backoff_ms)
            .unwrap_or(defaults.retry_backoff_ms),
        in_flight: args.in_flight.or(cfg.in_flight).unwrap_or(defaults.in_flight),
        max_consecutive_failures: args
            .max_consecutive_failures
            .or(cfg.max_consecutive_failures)
            .unwrap_or(defaults.max_consecutive_failures),
    };
    let backend: Box<dyn MtBackend> = match kind {
        BackendKind::Mock => match args.mock_table.as_ref().or(cfg.mock_table.as_ref()) {
            Some(path) => Box::new(MockBackend::load_table(path)?),
            None => Box::new(MockBackend::new()),
        },
        BackendKind::Http => {
            let endpoint = args
                .endpoint
                .clone()
                .or_else(|| cfg.endpoint.clone())
                .ok_or_else(|| user_error("the http backend needs --endpoint or backend.endpoint"))?;
            Box::new(HttpBackend::new(&HttpConfig {
                endpoint,
                token_env: args.token_env.clone().or_else(|| cfg.token_env.clone()),
                timeout_secs: args.timeout_secs.or(cfg.timeout_secs).unwrap_or(30),
            })?)
        }
    };
    Ok((backend, rt))
}

fn review_lines(triples: &[SilverTriple]) -> String {
    let mut out = String::from("index\treasons\n");
    for (i, t) in triples.iter().enumerate().filter(|(_, t)| t.flags.needs_review) {
        let reasons: Vec<String> = t.flags.reasons.iter().map(|r| r.to_string()).collect();
        let _ = writeln!(out, "{}\t{}", i + 1, reasons.join(","));
    }
    out
}

#[derive(Serialize)]
struct TripleLog<'a> {
    index: usize,
    infusion_log: &'a [silver::InfusionRecord],
    flags: &'a silver::ReviewFlags,
}

fn cmd_silver(command: SilverCommand, ctx: &Context) -> CliResult {
    match command {
        SilverCommand::Roundtrip {
            input,
            out,
            review,
            backend: args,
        } => {
            let corpus = read_lines(&input)?;
            if corpus.is_empty() {
                return Err(user_error(format!("{} is empty", input.display())));
            }
            let (backend, rt) = backend(&args, ctx)?;
            let (triples, failure) = match silver::round_trip(&corpus, backend.as_ref(), &rt) {
                Ok(t) => (t, None),
                Err(SilverError::BackendUnreachable {
                    failures,
                    last,
                    completed,
                }) => {
                    let n = completed.len();
                    let err = SilverError::BackendUnreachable {
                        failures,
                        last,
                        completed: Vec::new(),
                    };
                    let message = format!("{err}; {n} triples kept in {}", out.display());
                    (completed, Some(message))
                }
                Err(e) => return Err(e.into()),
            };
            silver::export(&triples, &out, ExportFormat::Tsv3)?;
            if let Some(path) = review {
                write_file(&path, &review_lines(&triples))?;
            }
            if let Some(message) = failure {
                return Err(Failure { code: 1, message });
            }
            let flagged = triples.iter().filter(|t| t.flags.needs_review).count();
            info!("{} triples via {} backend, {flagged} flagged", triples.len(), backend.name());
            Ok(())
        }
        SilverCommand::Infuse {
            input,
            out,
            phrases,
            log,
        } => {
            let lex = ctx.phrases(phrases.as_ref())?;
            let mut triples = silver::import(&input, ExportFormat::Tsv3)?;
            let stats: InfusionStats = silver::infuse(&mut triples, &lex);
            silver::export(&triples, &out, ExportFormat::Tsv3)?;
            if let Some(path) = log {
                let mut text = String::new();
                for (i, t) in triples.iter().enumerate() {
                    let entry = TripleLog {
                        index: i + 1,
                        infusion_log: &t.infusion_log,
                        flags: &t.flags,
                    };
                    text.push_str(&serde_json::to_string(&entry).map_err(Error::from)?);
                    text.push('\n');
                }
                write_file(&path, &text)?;
            }
            emit(None, &json(&stats)?)
        }
        SilverCommand::Export { input, out, format } => {
            let triples = silver::import(&input, ExportFormat::Tsv3)?;
            let n = silver::export(&triples, &out, format)?;
            info!("exported {n} triples");
            Ok(())
        }
    }
}

fn parse_system(spec: &str) -> CliResult<(String, PathBuf)> {
    match spec.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => {
            Ok((name.to_string(), PathBuf::from(path)))
        }
        _ => Err(user_error(format!("--system expects name=path, got `{spec}`"))),
    }
}

fn cmd_report(command: ReportCommand, ctx: &Context) -> CliResult {
    match command {
        ReportCommand::Compare {
            reference,
            systems,
            lexicon,
            human,
            smoothing,
            format,
            out,
            created_at,
        } => {
            let lex = ctx.lexicon(&lexicon)?;
            let systems = systems
                .iter()
                .map(|s| parse_system(s))
                .collect::<CliResult<Vec<_>>>()?;
            let options = CompareOptions {
                smoothing,
                created_at,
            };
            let rep = report::compare(&reference, &systems, &lex, human.as_deref(), &options)?;
            emit(out.as_deref(), &report::render(&rep, format)?)
        }
        ReportCommand::Render {
            report: path,
            format,
            out,
        } => {
            let rep = report::load_report(&path)?;
            emit(out.as_deref(), &report::render(&rep, format)?)
        }
    }
}
