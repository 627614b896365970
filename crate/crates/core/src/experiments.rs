//! Model comparison, subgroup holdout, isolate probe and new-wordlist
//! affiliation, plus their JSON and CSV reports.
//!
//! Languages under evaluation in a holdout, probe or affiliation are removed
//! from the corpus before the sample set is built, so they can enter neither
//! a training split nor the early-stopping monitor split.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::corpus::{Corpus, LanguageId, WordForm};
use crate::encode::Mode;
use crate::error::{Error, Result};
use crate::eval::{
    name_singleton, run_indexed, run_multi_seed_on, stratified_split_with, AggregateStats,
    LanguagePrediction, MultiSeedReport, RunSpec, Singletons,
};
use crate::pipeline::{Fitted, ModelKind, Sample, SampleSet};
use crate::soundclass::ClassMap;

/// Name of the report file carrying per-run detail.
pub const RESULTS_FILE: &str = "results.json";
/// Name of the flat summary file.
pub const SUMMARY_FILE: &str = "summary.csv";
/// Label of the remainder bucket in probe summaries.
pub const REST: &str = "Rest";

/// Languages a run trained on and monitored; kept in memory for checks.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Audit {
    pub trained: BTreeSet<LanguageId>,
    pub monitored: BTreeSet<LanguageId>,
}

impl Audit {
    /// True when none of `languages` was seen in training or monitoring.
    pub fn excludes<'a, I: IntoIterator<Item = &'a LanguageId>>(&self, languages: I) -> bool {
        languages
            .into_iter()
            .all(|l| !self.trained.contains(l) && !self.monitored.contains(l))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExclusionRun {
    pub run: usize,
    pub seed: u64,
    pub predictions: Vec<LanguagePrediction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_epoch: Option<usize>,
    #[serde(skip)]
    pub audit: Audit,
}

/// Trains on a stratified split of `set` per run and predicts `queries`.
/// Families with a single remaining member go to training whole.
fn exclusion_runs(
    set: &SampleSet,
    queries: &[(Sample, String)],
    spec: &RunSpec,
) -> Result<Vec<ExclusionRun>> {
    let runs = run_indexed(spec.runs, spec.jobs, |i| {
        let seed = spec.run_seed(i);
        let split =
            stratified_split_with(&set.targets, spec.train_fraction, seed, Singletons::Train)
                .map_err(|e| name_singleton(e, set))?;
        let fitted = Fitted::fit(
            set,
            spec.kind,
            &split.train,
            &split.test,
            &spec.train.with_seed(seed),
        )?;
        let names = |rows: &[usize]| {
            rows.iter()
                .map(|&r| set.samples[r].language.clone())
                .collect()
        };
        let audit = Audit {
            trained: names(&split.train),
            monitored: if spec.kind == ModelKind::Mlp {
                names(&split.test)
            } else {
                BTreeSet::new()
            },
        };
        let predictions = queries
            .iter()
            .map(|(sample, truth)| {
                Ok(LanguagePrediction {
                    language: sample.language.clone(),
                    truth: truth.clone(),
                    predicted: fitted.predict(set, sample)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExclusionRun {
            run: i,
            seed,
            predictions,
            best_epoch: fitted.model().map(|m| m.best_epoch),
            audit,
        })
    })?;
    let queried: Vec<&LanguageId> = queries.iter().map(|(s, _)| &s.language).collect();
    if let Some(bad) = runs
        .iter()
        .find(|r| !r.audit.excludes(queried.iter().copied()))
    {
        return Err(Error::InvalidArgument(format!(
            "run {} saw an excluded language during training",
            bad.run
        )));
    }
    Ok(runs)
}

/// Builds the sample set of `corpus` without `excluded` and encodes the
/// excluded languages with its layout.
fn split_off(
    corpus: &Corpus,
    excluded: &BTreeSet<LanguageId>,
    mode: Mode,
    map: &ClassMap,
) -> Result<(SampleSet, Vec<(Sample, String)>)> {
    let remainder = corpus.without_languages(excluded);
    let set = SampleSet::build(&remainder, mode, map)?;
    let queries = excluded
        .iter()
        .map(|l| {
            let family = corpus
                .family(l)
                .ok_or_else(|| Error::UnknownLanguage(l.to_string()))?;
            Ok((set.encode_from(corpus, l, map)?, family.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((set, queries))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoldoutSpec {
    pub family: String,
    pub held_out: BTreeSet<LanguageId>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LanguageRate {
    pub language: LanguageId,
    pub correct: usize,
    pub runs: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HoldoutReport {
    pub holdout: HoldoutSpec,
    pub config: RunSpec,
    pub runs: Vec<ExclusionRun>,
    pub per_language: Vec<LanguageRate>,
    /// Fraction of all (run, language) predictions naming the held-out family.
    pub accuracy: f64,
}

/// Removes a subgroup of one family, trains on the rest and records how
/// often each removed language is assigned back to the family.
pub fn run_holdout(
    corpus: &Corpus,
    map: &ClassMap,
    holdout: &HoldoutSpec,
    spec: &RunSpec,
) -> Result<HoldoutReport> {
    spec.validate()?;
    if holdout.held_out.is_empty() {
        return Err(Error::InvalidArgument("no languages to hold out".into()));
    }
    for l in &holdout.held_out {
        match corpus.family(l) {
            None => return Err(Error::UnknownLanguage(l.to_string())),
            Some(f) if f != holdout.family => {
                return Err(Error::InvalidArgument(format!(
                    "{l} belongs to {f}, not {}",
                    holdout.family
                )))
            }
            Some(_) => {}
        }
    }
    let remaining = corpus
        .labels()
        .iter()
        .filter(|(l, f)| **f == holdout.family && !holdout.held_out.contains(*l))
        .count();
    if remaining == 0 {
        return Err(Error::InvalidArgument(format!(
            "holding out these languages leaves no {} language for training",
            holdout.family
        )));
    }
    let (set, queries) = split_off(corpus, &holdout.held_out, spec.mode, map)?;
    let runs = exclusion_runs(&set, &queries, spec)?;

    let mut per_language = Vec::with_capacity(queries.len());
    for (k, (sample, _)) in queries.iter().enumerate() {
        let correct = runs
            .iter()
            .filter(|r| r.predictions[k].predicted == holdout.family)
            .count();
        per_language.push(LanguageRate {
            language: sample.language.clone(),
            correct,
            runs: runs.len(),
            rate: correct as f64 / runs.len() as f64,
        });
    }
    let total: usize = per_language.iter().map(|r| r.correct).sum();
    let accuracy = total as f64 / (runs.len() * queries.len()) as f64;
    Ok(HoldoutReport {
        holdout: holdout.clone(),
        config: spec.clone(),
        runs,
        per_language,
        accuracy,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyShare {
    pub family: String,
    pub proportion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub language: LanguageId,
    pub config: RunSpec,
    pub runs: Vec<ExclusionRun>,
    /// Share of runs predicting each family that was predicted at least once.
    pub proportions: BTreeMap<String, f64>,
    /// Up to three most frequent families, ties broken by name.
    pub top: Vec<FamilyShare>,
    /// `1 - ` the summed shares of `top`.
    pub rest: f64,
}

impl ProbeReport {
    fn from_runs(language: LanguageId, config: &RunSpec, runs: Vec<ExclusionRun>) -> ProbeReport {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for r in &runs {
            *counts
                .entry(r.predictions[0].predicted.clone())
                .or_default() += 1;
        }
        let n = runs.len() as f64;
        let proportions: BTreeMap<String, f64> = counts
            .iter()
            .map(|(f, &c)| (f.clone(), c as f64 / n))
            .collect();
        let mut ranked: Vec<(&String, usize)> = counts.iter().map(|(f, &c)| (f, c)).collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let top: Vec<FamilyShare> = ranked
            .iter()
            .take(3)
            .map(|(f, c)| FamilyShare {
                family: (*f).clone(),
                proportion: *c as f64 / n,
            })
            .collect();
        let in_top: usize = ranked.iter().take(3).map(|(_, c)| c).sum();
        ProbeReport {
            language,
            config: config.clone(),
            runs,
            proportions,
            top,
            rest: (n - in_top as f64) / n,
        }
    }

    pub fn proportion(&self, family: &str) -> f64 {
        self.proportions.get(family).copied().unwrap_or(0.0)
    }
}

/// Predicts one corpus language, excluded from all training, once per run.
pub fn run_probe(
    corpus: &Corpus,
    map: &ClassMap,
    language: &LanguageId,
    spec: &RunSpec,
) -> Result<ProbeReport> {
    spec.validate()?;
    if !corpus.contains(language) {
        return Err(Error::UnknownLanguage(language.to_string()));
    }
    let excluded = BTreeSet::from([language.clone()]);
    let (set, queries) = split_off(corpus, &excluded, spec.mode, map)?;
    let runs = exclusion_runs(&set, &queries, spec)?;
    Ok(ProbeReport::from_runs(language.clone(), spec, runs))
}

/// Affiliates a wordlist of one language outside the corpus. A corpus
/// language with the same id is removed from training first.
pub fn run_affiliate(
    corpus: &Corpus,
    map: &ClassMap,
    language: &LanguageId,
    forms: &[WordForm],
    spec: &RunSpec,
) -> Result<ProbeReport> {
    spec.validate()?;
    if let Some(other) = forms.iter().find(|f| &f.language != language) {
        return Err(Error::InvalidArgument(format!(
            "the new wordlist mixes {language} and {}",
            other.language
        )));
    }
    let excluded = BTreeSet::from([language.clone()]);
    let set = SampleSet::build(&corpus.without_languages(&excluded), spec.mode, map)?;
    let sample = set.external(language.clone(), forms, map)?;
    let queries = [(sample, String::new())];
    let runs = exclusion_runs(&set, &queries, spec)?;
    Ok(ProbeReport::from_runs(language.clone(), spec, runs))
}

/// Splits a wordlist into its single language and forms.
pub fn single_language(forms: Vec<WordForm>) -> Result<(LanguageId, Vec<WordForm>)> {
    let language = forms.first().map(|f| f.language.clone()).ok_or_else(|| {
        Error::Unclassifiable("the new wordlist has no forms for inventory concepts".into())
    })?;
    if let Some(other) = forms.iter().find(|f| f.language != language) {
        return Err(Error::InvalidArgument(format!(
            "the new wordlist mixes {language} and {}",
            other.language
        )));
    }
    Ok((language, forms))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub kind: ModelKind,
    pub mode: Mode,
    pub aggregate: AggregateStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    pub details: Vec<MultiSeedReport>,
}

/// One multi-seed evaluation per `(kind, mode)`; `spec` supplies everything
/// else. Every configuration sees the same run seeds.
pub fn run_compare(
    corpus: &Corpus,
    map: &ClassMap,
    configurations: &[(ModelKind, Mode)],
    spec: &RunSpec,
) -> Result<CompareReport> {
    if configurations.is_empty() {
        return Err(Error::InvalidArgument(
            "no configurations to compare".into(),
        ));
    }
    let mut sets: BTreeMap<Mode, SampleSet> = BTreeMap::new();
    let mut details = Vec::with_capacity(configurations.len());
    for &(kind, mode) in configurations {
        let run = RunSpec {
            kind,
            mode,
            ..spec.clone()
        };
        run.validate()?;
        if let std::collections::btree_map::Entry::Vacant(e) = sets.entry(mode) {
            e.insert(SampleSet::build(corpus, mode, map)?);
        }
        details.push(run_multi_seed_on(&sets[&mode], &run)?);
    }
    let rows = details
        .iter()
        .map(|d| CompareRow {
            kind: d.config.kind,
            mode: d.config.mode,
            aggregate: d.aggregate,
        })
        .collect();
    Ok(CompareReport { rows, details })
}

/// Experiment output written as `results.json` and `summary.csv`.
pub trait Report: Serialize {
    fn summary_csv(&self) -> String;

    fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        let results = dir.join(RESULTS_FILE);
        fs::write(&results, json).map_err(|e| Error::io(&results, e))?;
        let summary = dir.join(SUMMARY_FILE);
        fs::write(&summary, self.summary_csv()).map_err(|e| Error::io(&summary, e))
    }
}

const STATS_HEADER: &str = "runs,min,q25,q75,max,mean,sd";

fn stats_cells(a: &AggregateStats) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        a.runs, a.min, a.q25, a.q75, a.max, a.mean, a.sd
    )
}

impl Report for MultiSeedReport {
    fn summary_csv(&self) -> String {
        format!(
            "model,mode,{STATS_HEADER}\n{},{},{}\n",
            self.config.kind,
            self.config.mode,
            stats_cells(&self.aggregate)
        )
    }
}

impl Report for CompareReport {
    fn summary_csv(&self) -> String {
        let mut out = format!("model,mode,{STATS_HEADER}\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{}",
                row.kind,
                row.mode,
                stats_cells(&row.aggregate)
            );
        }
        out
    }
}

impl Report for HoldoutReport {
    fn summary_csv(&self) -> String {
        let mut out = String::from("language,family,correct,runs,rate\n");
        for r in &self.per_language {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.language, self.holdout.family, r.correct, r.runs, r.rate
            );
        }
        let runs = self.runs.len() * self.per_language.len();
        let correct: usize = self.per_language.iter().map(|r| r.correct).sum();
        let _ = writeln!(
            out,
            "ALL,{},{correct},{runs},{}",
            self.holdout.family, self.accuracy
        );
        out
    }
}

impl Report for ProbeReport {
    fn summary_csv(&self) -> String {
        let mut out = String::from("language,family,proportion\n");
        for share in &self.top {
            let _ = writeln!(
                out,
                "{},{},{}",
                self.language, share.family, share.proportion
            );
        }
        let _ = writeln!(out, "{},{REST},{}", self.language, self.rest);
        out
    }
}
