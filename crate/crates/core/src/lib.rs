//! Affiliation of languages to families from wordlists and grammatical
//! features: sound-class encoding, a skeleton-matching baseline, a small
//! feed-forward classifier and a multi-seed evaluation harness.

pub mod baseline;
pub mod corpus;
pub mod encode;
pub mod error;
pub mod eval;
pub mod experiments;
pub mod nnet;
pub mod pipeline;
pub mod seed;
pub mod soundclass;
pub mod synth;

pub use baseline::{classify_baseline, count_matches, BaselinePrediction, SkeletonProfile};
pub use corpus::{
    ConceptInventory, Corpus, CorpusPaths, FamilyLabel, FeatureInventory, FeatureKind,
    FeatureValue, LanguageId, LoadReport, WordForm, ISOLATE,
};
pub use encode::{encode_dataset, EncodedDataset, FamilyTable, Mode};
pub use error::{Error, Result};
pub use eval::{
    balanced_accuracy, run_multi_seed, stratified_split, AggregateStats, MultiSeedReport,
    RunResult, RunSpec, SplitSpec,
};
pub use experiments::{
    run_affiliate, run_compare, run_holdout, run_probe, CompareReport, HoldoutReport, HoldoutSpec,
    ProbeReport, Report,
};
pub use nnet::{TrainConfig, TrainedModel};
pub use pipeline::{Fitted, ModelKind, SampleSet};
pub use soundclass::{ClassMap, SegmentClass, Skeleton, SoundClass};
pub use synth::SynthConfig;
