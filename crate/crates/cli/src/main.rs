use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lingaff::corpus::{load_wordlist, CorpusPaths, LanguageId};
use lingaff::eval::{evaluate_run, AggregateStats, MultiSeedReport, RunSpec};
use lingaff::experiments::{
    run_affiliate, run_compare, run_holdout, run_probe, single_language, HoldoutSpec, Report,
};
use lingaff::nnet::{checkpoint, TrainConfig};
use lingaff::synth::{self, SynthConfig};
use lingaff::{encode_dataset, ClassMap, Corpus, Mode, ModelKind, SampleSet};

/// Affiliates languages to families from wordlists and grammatical features.
#[derive(Parser)]
#[command(name = "lingaff", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the encoded vectors of every language
    Encode(EncodeArgs),
    /// Repeated stratified evaluation of the sound-class baseline
    Baseline(BaselineArgs),
    /// Train one network on a stratified split and save it
    Train(TrainCmdArgs),
    /// Repeated evaluation of several model and mode combinations
    Compare(CompareArgs),
    /// Hold out languages of one family and predict them
    Holdout(HoldoutArgs),
    /// Predict one corpus language excluded from training, once per run
    Probe(ProbeArgs),
    /// Predict the family of a wordlist outside the corpus, once per run
    Affiliate(AffiliateArgs),
    /// Generate a synthetic corpus with planted families
    Synth(SynthArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lexical,
    Grammatical,
    Combined,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Lexical => Mode::Lexical,
            ModeArg::Grammatical => Mode::Grammatical,
            ModeArg::Combined => Mode::Combined,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Baseline,
    Mlp,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> ModelKind {
        match m {
            ModelArg::Baseline => ModelKind::Baseline,
            ModelArg::Mlp => ModelKind::Mlp,
        }
    }
}

#[derive(Args)]
struct CorpusArgs {
    /// Directory with the corpus files under their standard names; explicit
    /// file flags take precedence
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Word forms (ID, Language_ID, Parameter_ID, Segments)
    #[arg(long)]
    wordlist: Option<PathBuf>,
    /// Grammatical feature values (Language_ID, Parameter_ID, Value)
    #[arg(long)]
    features: Option<PathBuf>,
    /// Family labels (Language_ID, Family)
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Concept inventory, one id per line
    #[arg(long)]
    concepts: Option<PathBuf>,
    /// Feature inventory (Parameter_ID, Kind)
    #[arg(long)]
    features_meta: Option<PathBuf>,
    /// Segment to sound-class map [default: built-in map]
    #[arg(long)]
    classmap: Option<PathBuf>,
    /// Drop families with fewer languages
    #[arg(long, default_value_t = 5)]
    min_family_size: usize,
}

#[derive(Args)]
struct SeedArgs {
    /// Base seed; run seeds are derived from it
    #[arg(long, env = "LINGAFF_SEED", default_value_t = 1)]
    seed: u64,
    /// Share of each family used for training
    #[arg(long, default_value_t = lingaff::eval::TRAIN_FRACTION)]
    train_fraction: f64,
}

#[derive(Args)]
struct RepeatArgs {
    /// Number of runs
    #[arg(long, default_value_t = 100)]
    runs: usize,
    /// Runs executed in parallel
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct TrainArgs {
    /// Adam learning rate
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    /// Mini-batch size
    #[arg(long, default_value_t = 2048)]
    batch_size: usize,
    /// Maximum number of epochs
    #[arg(long, default_value_t = 5000)]
    max_epochs: usize,
    /// Epochs without improvement before stopping
    #[arg(long, default_value_t = 500)]
    patience: usize,
}

impl TrainArgs {
    fn config(&self) -> TrainConfig {
        TrainConfig {
            learning_rate: self.lr,
            batch_size: self.batch_size,
            max_epochs: self.max_epochs,
            patience: self.patience,
            ..TrainConfig::default()
        }
    }
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Evidence to encode
    #[arg(long, value_enum, default_value_t = ModeArg::Lexical)]
    mode: ModeArg,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    seed: SeedArgs,
    #[command(flatten)]
    repeat: RepeatArgs,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrainCmdArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Evidence to train on
    #[arg(long, value_enum, default_value_t = ModeArg::Lexical)]
    mode: ModeArg,
    #[command(flatten)]
    seed: SeedArgs,
    #[command(flatten)]
    train: TrainArgs,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Models to compare, comma separated; the baseline only runs in lexical mode
    #[arg(long = "model", value_enum, value_delimiter = ',', default_values = ["baseline", "mlp"])]
    models: Vec<ModelArg>,
    /// Modes to compare, comma separated
    #[arg(long = "mode", value_enum, value_delimiter = ',', default_values = ["lexical"])]
    modes: Vec<ModeArg>,
    #[command(flatten)]
    seed: SeedArgs,
    #[command(flatten)]
    repeat: RepeatArgs,
    #[command(flatten)]
    train: TrainArgs,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ModelArgs {
    /// Classifier
    #[arg(long, value_enum, default_value_t = ModelArg::Mlp)]
    model: ModelArg,
    /// Evidence used by the classifier
    #[arg(long, value_enum, default_value_t = ModeArg::Lexical)]
    mode: ModeArg,
}

#[derive(Args)]
struct HoldoutArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Family of the held-out languages
    #[arg(long)]
    family: String,
    /// Held-out language ids, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    languages: Vec<String>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seed: SeedArgs,
    #[command(flatten)]
    repeat: RepeatArgs,
    #[command(flatten)]
    train: TrainArgs,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Language to probe
    #[arg(long)]
    language: String,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seed: SeedArgs,
    #[command(flatten)]
    repeat: RepeatArgs,
    #[command(flatten)]
    train: TrainArgs,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AffiliateArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Wordlist of the new language, in the wordlist format
    #[arg(long)]
    new: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    seed: SeedArgs,
    #[command(flatten)]
    repeat: RepeatArgs,
    #[command(flatten)]
    train: TrainArgs,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// Number of families
    #[arg(long, default_value_t = 30)]
    families: usize,
    /// Languages per family
    #[arg(long, default_value_t = 8)]
    per_family: usize,
    /// Number of concepts
    #[arg(long, default_value_t = 100)]
    concepts: usize,
    /// Number of binary grammatical features
    #[arg(long, default_value_t = 50)]
    features: usize,
    /// Per-slot sound-class mutation probability
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Per-concept lexical replacement probability
    #[arg(long, default_value_t = 0.1)]
    q: f64,
    /// Per-feature flip probability
    #[arg(long, default_value_t = 0.1)]
    r: f64,
    /// Missing-data probability
    #[arg(long, default_value_t = 0.05)]
    mu: f64,
    /// Generator seed
    #[arg(long, env = "LINGAFF_SEED", default_value_t = 1)]
    seed: u64,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
}

impl CorpusArgs {
    fn paths(&self) -> CorpusPaths {
        let base = self
            .corpus
            .as_deref()
            .map(CorpusPaths::in_dir)
            .unwrap_or_default();
        CorpusPaths {
            wordlist: self.wordlist.clone().or(base.wordlist),
            features: self.features.clone().or(base.features),
            labels: self.labels.clone().or(base.labels),
            concepts: self.concepts.clone().or(base.concepts),
            features_meta: self.features_meta.clone().or(base.features_meta),
        }
    }

    fn load(&self) -> Result<(Corpus, ClassMap)> {
        let paths = self.paths();
        for p in [
            &paths.wordlist,
            &paths.features,
            &paths.labels,
            &paths.concepts,
            &paths.features_meta,
        ]
        .into_iter()
        .flatten()
        {
            if !p.exists() {
                bail!("missing input file {}", p.display());
            }
        }
        let (corpus, report) = Corpus::load(&paths)?;
        for (count, what) in [
            (
                report.forms_outside_inventory,
                "word forms for concepts outside the inventory",
            ),
            (
                report.values_outside_inventory,
                "feature values for features outside the inventory",
            ),
            (
                report.forms_without_label,
                "word forms of unlabeled languages",
            ),
            (
                report.values_without_label,
                "feature values of unlabeled languages",
            ),
        ] {
            if count > 0 {
                eprintln!("note: skipped {count} {what}");
            }
        }
        let before = corpus.language_count();
        let corpus = corpus.filter_min_family_size(self.min_family_size)?;
        if corpus.language_count() < before {
            eprintln!(
                "note: dropped {} languages in families smaller than {}",
                before - corpus.language_count(),
                self.min_family_size
            );
        }
        let map = match &self.classmap {
            Some(p) => ClassMap::load(p)?,
            None => ClassMap::default(),
        };
        Ok((corpus, map))
    }
}

fn run_spec(
    kind: ModelKind,
    mode: Mode,
    runs: usize,
    jobs: usize,
    seed: &SeedArgs,
    train: &TrainConfig,
) -> RunSpec {
    RunSpec {
        train_fraction: seed.train_fraction,
        train: *train,
        jobs,
        ..RunSpec::new(kind, mode, runs, seed.seed)
    }
}

fn print_summary(out: &Path, csv: &str) {
    print!("{csv}");
    println!("wrote {}", out.display());
}

fn write_report<R: Report>(report: &R, out: &Path) -> Result<()> {
    report.write(out)?;
    print_summary(out, &report.summary_csv());
    Ok(())
}

fn encode(args: &EncodeArgs) -> Result<()> {
    let (corpus, map) = args.corpus.load()?;
    let dataset = encode_dataset(&corpus, args.mode.into(), &map)?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    dataset.write_dump(&args.out.join("encoded.tsv"))?;
    let mut unknown = String::from("token\tcount\n");
    for (token, count) in dataset.unknown_segments.counts() {
        unknown.push_str(&format!("{token}\t{count}\n"));
    }
    let path = args.out.join("unknown_segments.tsv");
    fs::write(&path, unknown).with_context(|| format!("writing {}", path.display()))?;
    println!(
        "{} languages, {} families, width {}",
        dataset.len(),
        dataset.families.len(),
        dataset.width()
    );
    if !dataset.unknown_segments.is_empty() {
        eprintln!(
            "note: {} segment occurrences missing from the class map",
            dataset.unknown_segments.total()
        );
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn baseline(args: &BaselineArgs) -> Result<()> {
    let (corpus, map) = args.corpus.load()?;
    let spec = run_spec(
        ModelKind::Baseline,
        Mode::Lexical,
        args.repeat.runs,
        args.repeat.jobs,
        &args.seed,
        &TrainConfig::default(),
    );
    let report = lingaff::run_multi_seed(&corpus, &map, &spec)?;
    write_report(&report, &args.out)
}

fn train(args: &TrainCmdArgs) -> Result<()> {
    let (corpus, map) = args.corpus.load()?;
    let spec = run_spec(
        ModelKind::Mlp,
        args.mode.into(),
        1,
        1,
        &args.seed,
        &args.train.config(),
    );
    spec.validate()?;
    let set = SampleSet::build(&corpus, spec.mode, &map)?;
    let (result, fitted) = evaluate_run(&set, &spec, 0)?;
    let model = fitted.model().context("network was not trained")?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    checkpoint::save(model, &args.out.join("model.lgm"))?;
    let report = MultiSeedReport {
        aggregate: AggregateStats::from_scores(&[result.balanced_accuracy])?,
        runs: vec![result],
        config: spec,
    };
    write_report(&report, &args.out)
}

fn compare(args: &CompareArgs) -> Result<()> {
    let (corpus, map) = args.corpus.load()?;
    let mut configurations = Vec::new();
    for &m in &args.models {
        for &mode in &args.modes {
            let (kind, mode) = (ModelKind::from(m), Mode::from(mode));
            if kind.supports(mode) && !configurations.contains(&(kind, mode)) {
                configurations.push((kind, mode));
            }
        }
    }
    if configurations.is_empty() {
        bail!("no requested model supports the requested modes");
    }
    let spec = run_spec(
        configurations[0].0,
        configurations[0].1,
        args.repeat.runs,
        args.repeat.jobs,
        &args.seed,
        &args.train.config(),
    );
    let report = run_compare(&corpus, &map, &configurations, &spec)?;
    write_report(&report, &args.out)
}

fn language_id(s: &str) -> Result<LanguageId> {
    Ok(LanguageId::new(s.trim())?)
}

fn holdout(args: &HoldoutArgs) -> Result<()> {
    let (corpus, map) = args.corpus.load()?;
    let held_out = args
        .languages
        .iter()
        .map(|l| language_id(l))
        .collect::<Result<BTreeSet<_>>>()?;
    let spec = run_spec(
        args.model.model.into(),
        args.model.mode.into(),
        args.repeat.runs,
        args.repeat.jobs,
        &args.seed,
        &args.train.config(),
    );
    let holdout = HoldoutSpec {
        family: args.family.clone(),
        held_out,
    };
    let report = run_holdout(&corpus, &map, &holdout, &spec)?;
    write_report(&report, &args.out)
}

fn probe(args: &ProbeArgs) -> Result<()> {
    let (corpus, map) = args.corpus.load()?;
    let spec = run_spec(
        args.model.model.into(),
        args.model.mode.into(),
        args.repeat.runs,
        args.repeat.jobs,
        &args.seed,
        &args.train.config(),
    );
    let report = run_probe(&corpus, &map, &language_id(&args.language)?, &spec)?;
    write_report(&report, &args.out)
}

fn affiliate(args: &AffiliateArgs) -> Result<()> {
    let (corpus, map) = args.corpus.load()?;
    if !args.new.exists() {
        bail!("missing input file {}", args.new.display());
    }
    let loaded = load_wordlist(&args.new, corpus.concepts())?;
    if loaded.skipped > 0 {
        eprintln!(
            "note: skipped {} new word forms for concepts outside the inventory",
            loaded.skipped
        );
    }
    let (language, forms) = single_language(loaded.items)?;
    let spec = run_spec(
        args.model.model.into(),
        args.model.mode.into(),
        args.repeat.runs,
        args.repeat.jobs,
        &args.seed,
        &args.train.config(),
    );
    let report = run_affiliate(&corpus, &map, &language, &forms, &spec)?;
    write_report(&report, &args.out)
}

fn synth(args: &SynthArgs) -> Result<()> {
    let config = SynthConfig {
        families: args.families,
        languages_per_family: args.per_family,
        concepts: args.concepts,
        features: args.features,
        p: args.p,
        q: args.q,
        r: args.r,
        mu: args.mu,
        seed: args.seed,
    };
    let corpus = synth::generate(&config)?;
    corpus.save_dir(&args.out)?;
    println!(
        "{} languages in {} families, {} word forms",
        corpus.language_count(),
        args.families,
        corpus.forms().len()
    );
    println!("wrote {}", args.out.display());
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Encode(a) => encode(a),
        Command::Baseline(a) => baseline(a),
        Command::Train(a) => train(a),
        Command::Compare(a) => compare(a),
        Command::Holdout(a) => holdout(a),
        Command::Probe(a) => probe(a),
        Command::Affiliate(a) => affiliate(a),
        Command::Synth(a) => synth(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
