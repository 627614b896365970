//! Stratified splits, balanced accuracy and multi-seed run aggregation.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, LanguageId};
use crate::encode::Mode;
use crate::error::{Error, Result};
use crate::nnet::TrainConfig;
use crate::pipeline::{Fitted, ModelKind, SampleSet};
use crate::seed::{self, Stream};
use crate::soundclass::ClassMap;

/// Default share of each class assigned to training.
pub const TRAIN_FRACTION: f64 = 0.8;

/// Train/test partition of row indices; both lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitSpec {
    pub seed: u64,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// How classes with a single member are treated by a split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Singletons {
    Reject,
    /// The lone member goes to training.
    Train,
}

/// Rows a class contributes to the test side: `max(1, round((1 - fraction) * n))`,
/// capped so at least one row stays in training.
pub fn test_count(n: usize, fraction: f64) -> usize {
    let raw = ((1.0 - fraction) * n as f64).round() as usize;
    raw.max(1).min(n.saturating_sub(1))
}

/// Per-class split: each class's rows, in ascending order, are shuffled by the
/// split stream of `(seed, class)` and the first [`test_count`] go to test.
pub fn stratified_split(targets: &[usize], fraction: f64, seed: u64) -> Result<SplitSpec> {
    stratified_split_with(targets, fraction, seed, Singletons::Reject)
}

pub fn stratified_split_with(
    targets: &[usize],
    fraction: f64,
    seed: u64,
    singletons: Singletons,
) -> Result<SplitSpec> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction {fraction} is not in (0, 1)"
        )));
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &t) in targets.iter().enumerate() {
        classes.entry(t).or_default().push(i);
    }
    let mut train = Vec::with_capacity(targets.len());
    let mut test = Vec::new();
    for (class, mut rows) in classes {
        if rows.len() == 1 {
            match singletons {
                Singletons::Reject => return Err(Error::SingletonClass(class.to_string())),
                Singletons::Train => {
                    train.push(rows[0]);
                    continue;
                }
            }
        }
        let k = test_count(rows.len(), fraction);
        rows.shuffle(&mut seed::rng(seed, Stream::Split, class as u64));
        test.extend_from_slice(&rows[..k]);
        train.extend_from_slice(&rows[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitSpec { seed, train, test })
}

/// Mean per-class recall over the classes present in `truth`.
pub fn balanced_accuracy<T: Ord>(predicted: &[T], truth: &[T]) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(Error::Dimension {
            expected: truth.len(),
            found: predicted.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::InvalidArgument(
            "balanced accuracy of an empty set".into(),
        ));
    }
    let mut per_class: BTreeMap<&T, (usize, usize)> = BTreeMap::new();
    for (p, t) in predicted.iter().zip(truth) {
        let e = per_class.entry(t).or_insert((0, 0));
        e.1 += 1;
        if p == t {
            e.0 += 1;
        }
    }
    let recall_sum: f64 = per_class
        .values()
        .map(|&(hit, n)| hit as f64 / n as f64)
        .sum();
    Ok(recall_sum / per_class.len() as f64)
}

/// Summary of run scores. Quartiles interpolate linearly between order
/// statistics: `q(p) = x[floor(h)] + (h - floor(h)) * (x[floor(h)+1] - x[floor(h)])`
/// with `h = (n - 1) p`. `sd` is the sample standard deviation (`n - 1`
/// denominator, zero for a single run).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AggregateStats {
    pub runs: usize,
    pub min: f64,
    pub q25: f64,
    pub q75: f64,
    pub max: f64,
    pub mean: f64,
    pub sd: f64,
}

impl AggregateStats {
    pub fn from_scores(scores: &[f64]) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::InvalidArgument("no runs to aggregate".into()));
        }
        let mut sorted = scores.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let mean = sorted.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            (sorted.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Ok(AggregateStats {
            runs: n,
            min: sorted[0],
            q25: quantile(&sorted, 0.25),
            q75: quantile(&sorted, 0.75),
            max: sorted[n - 1],
            mean,
            sd,
        })
    }
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LanguagePrediction {
    pub language: LanguageId,
    pub truth: String,
    pub predicted: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub run: usize,
    pub seed: u64,
    pub balanced_accuracy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_epoch: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epochs_run: Option<usize>,
    pub predictions: Vec<LanguagePrediction>,
}

/// Configuration of a multi-seed evaluation; echoed into reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSpec {
    pub kind: ModelKind,
    pub mode: Mode,
    pub runs: usize,
    pub base_seed: u64,
    pub train_fraction: f64,
    pub train: TrainConfig,
    #[serde(skip)]
    pub jobs: usize,
}

impl RunSpec {
    pub fn new(kind: ModelKind, mode: Mode, runs: usize, base_seed: u64) -> Self {
        RunSpec {
            kind,
            mode,
            runs,
            base_seed,
            train_fraction: TRAIN_FRACTION,
            train: TrainConfig::default(),
            jobs: 1,
        }
    }

    /// Seed of run `i`: [`seed::derive`]`(base_seed, i)`. Both the split and
    /// the network initialization of the run derive from it.
    pub fn run_seed(&self, i: usize) -> u64 {
        seed::derive(self.base_seed, i as u64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 {
            return Err(Error::InvalidArgument(
                "at least one run is required".into(),
            ));
        }
        if !self.kind.supports(self.mode) {
            return Err(Error::InvalidArgument(format!(
                "the {} model does not support {} mode",
                self.kind, self.mode
            )));
        }
        self.train.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiSeedReport {
    pub config: RunSpec,
    pub runs: Vec<RunResult>,
    pub aggregate: AggregateStats,
}

/// Runs `f(0..n)` on up to `jobs` threads; results keep index order.
pub fn run_indexed<T, F>(n: usize, jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if jobs <= 1 {
        return (0..n).map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| (0..n).into_par_iter().map(f).collect())
}

/// Repeated stratified evaluation. Each run splits the languages 80/20 by
/// family, fits the model on the training side (the network monitors the test
/// side for early stopping) and scores balanced accuracy on the test side.
pub fn run_multi_seed(corpus: &Corpus, map: &ClassMap, spec: &RunSpec) -> Result<MultiSeedReport> {
    spec.validate()?;
    let set = SampleSet::build(corpus, spec.mode, map)?;
    run_multi_seed_on(&set, spec)
}

pub fn run_multi_seed_on(set: &SampleSet, spec: &RunSpec) -> Result<MultiSeedReport> {
    spec.validate()?;
    if set.mode != spec.mode {
        return Err(Error::InvalidArgument(
            "sample set mode differs from run mode".into(),
        ));
    }
    let runs = run_indexed(spec.runs, spec.jobs, |i| single_run(set, spec, i))?;
    let scores: Vec<f64> = runs.iter().map(|r| r.balanced_accuracy).collect();
    Ok(MultiSeedReport {
        config: spec.clone(),
        aggregate: AggregateStats::from_scores(&scores)?,
        runs,
    })
}

fn single_run(set: &SampleSet, spec: &RunSpec, i: usize) -> Result<RunResult> {
    Ok(evaluate_run(set, spec, i)?.0)
}

/// Run `i` of `spec` together with the model it fitted.
pub fn evaluate_run(set: &SampleSet, spec: &RunSpec, i: usize) -> Result<(RunResult, Fitted)> {
    let run_seed = spec.run_seed(i);
    let split = stratified_split(&set.targets, spec.train_fraction, run_seed)
        .map_err(|e| name_singleton(e, set))?;
    let fitted = Fitted::fit(
        set,
        spec.kind,
        &split.train,
        &split.test,
        &spec.train.with_seed(run_seed),
    )?;
    let mut predicted = Vec::with_capacity(split.test.len());
    let mut predictions = Vec::with_capacity(split.test.len());
    for &row in &split.test {
        let sample = &set.samples[row];
        let family = fitted.predict(set, sample)?;
        predictions.push(LanguagePrediction {
            language: sample.language.clone(),
            truth: set.families.name(set.targets[row]).to_string(),
            predicted: family.clone(),
        });
        predicted.push(family);
    }
    let truth: Vec<&str> = predictions.iter().map(|p| p.truth.as_str()).collect();
    let predicted: Vec<&str> = predicted.iter().map(String::as_str).collect();
    let result = RunResult {
        run: i,
        seed: run_seed,
        balanced_accuracy: balanced_accuracy(&predicted, &truth)?,
        best_epoch: fitted.model().map(|m| m.best_epoch),
        epochs_run: fitted.model().map(|m| m.epochs_run),
        predictions,
    };
    Ok((result, fitted))
}

/// Replaces a class index in a singleton error with the family name.
pub(crate) fn name_singleton(e: Error, set: &SampleSet) -> Error {
    match e {
        Error::SingletonClass(class) => match class.parse::<usize>() {
            Ok(i) if i < set.families.len() => {
                Error::SingletonClass(set.families.name(i).to_string())
            }
            _ => Error::SingletonClass(class),
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_examples() {
        let targets = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        let s = stratified_split(&targets, 0.8, 11).unwrap();
        assert_eq!(s.train.len(), 8);
        assert_eq!(s.test.len(), 2);
        assert_eq!(s.test.iter().filter(|&&i| targets[i] == 0).count(), 1);
        assert_eq!(s, stratified_split(&targets, 0.8, 11).unwrap());

        assert_eq!(test_count(7, 0.8), 1);
        assert_eq!(test_count(10, 0.8), 2);
        assert_eq!(test_count(5, 0.8), 1);
        assert_eq!(test_count(2, 0.1), 1);
    }

    #[test]
    fn singleton_class_is_an_error() {
        let err = stratified_split(&[0, 0, 1], 0.8, 0).unwrap_err();
        assert!(matches!(err, Error::SingletonClass(c) if c == "1"));
        let s = stratified_split_with(&[0, 0, 1], 0.8, 0, Singletons::Train).unwrap();
        assert!(s.train.contains(&2));
    }

    #[test]
    fn balanced_accuracy_examples() {
        assert_eq!(balanced_accuracy(&["A", "B"], &["A", "B"]).unwrap(), 1.0);
        assert_eq!(
            balanced_accuracy(&["A", "B", "B", "B"], &["A", "A", "B", "B"]).unwrap(),
            0.75
        );
        // C is predicted but never true: still two class terms
        assert_eq!(
            balanced_accuracy(&["C", "A", "B", "B"], &["A", "A", "B", "B"]).unwrap(),
            0.75
        );
        assert!(balanced_accuracy::<u8>(&[], &[]).is_err());
    }

    #[test]
    fn aggregate_of_one_run() {
        let s = AggregateStats::from_scores(&[0.7]).unwrap();
        assert_eq!(
            (s.min, s.max, s.mean, s.q25, s.q75, s.sd),
            (0.7, 0.7, 0.7, 0.7, 0.7, 0.0)
        );
    }

    #[test]
    fn aggregate_quartiles_interpolate() {
        let s = AggregateStats::from_scores(&[4.0, 1.0, 3.0, 2.0, 5.0]).unwrap();
        assert_eq!(
            (s.min, s.q25, s.q75, s.max, s.mean),
            (1.0, 2.0, 4.0, 5.0, 3.0)
        );
        assert!((s.sd - 2.5f64.sqrt()).abs() < 1e-12);
        let t = AggregateStats::from_scores(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!((t.q25, t.q75), (1.75, 3.25));
    }
}
