//! Synthetic corpora with planted family structure.
//!
//! Each family draws a proto-language: a random two-class skeleton per concept
//! and a random binary value per feature. Every descendant copies the proto,
//! then per concept replaces the skeleton by a fresh random one with
//! probability `q`, otherwise resamples each slot uniformly with probability
//! `p`; the concept is dropped with probability `mu`. Each feature value is
//! flipped with probability `r` and made missing with probability `mu`.
//! Skeletons are rendered as `C a C a` with one exemplar segment per class.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{
    ConceptInventory, Corpus, FamilyLabel, FeatureInventory, FeatureKind, FeatureValue, LanguageId,
    WordForm,
};
use crate::error::{Error, Result};
use crate::seed::{self, Pcg64, Stream};
use crate::soundclass::{Skeleton, SoundClass};

/// Vowel used between rendered consonants.
pub const FILLER_VOWEL: &str = "a";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub families: usize,
    pub languages_per_family: usize,
    pub concepts: usize,
    pub features: usize,
    /// Per-slot class mutation probability.
    pub p: f64,
    /// Per-concept lexical replacement probability.
    pub q: f64,
    /// Per-feature flip probability.
    pub r: f64,
    /// Missing-data probability for concepts and features.
    pub mu: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            families: 30,
            languages_per_family: 8,
            concepts: 100,
            features: 50,
            p: 0.1,
            q: 0.1,
            r: 0.1,
            mu: 0.05,
            seed: 1,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.families < 1 || self.languages_per_family < 1 || self.concepts < 1 {
            return Err(Error::InvalidArgument(
                "families, languages per family and concepts must be at least 1".into(),
            ));
        }
        for (name, v) in [("p", self.p), ("q", self.q), ("r", self.r), ("mu", self.mu)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {v} is not a probability"
                )));
            }
        }
        Ok(())
    }
}

/// Segment token standing for a class in rendered forms.
pub fn exemplar(class: SoundClass) -> &'static str {
    ["p", "t", "s", "k", "m", "n", "r", "w", "j", "h"][class.index()]
}

/// Minimal segment sequence realizing `skeleton`.
pub fn render(skeleton: &Skeleton) -> Vec<String> {
    let mut out = Vec::with_capacity(4);
    for c in [skeleton.first(), skeleton.second()].into_iter().flatten() {
        out.push(exemplar(c).to_string());
        out.push(FILLER_VOWEL.to_string());
    }
    if out.is_empty() {
        out.push(FILLER_VOWEL.to_string());
    }
    out
}

pub fn family_name(family: usize) -> String {
    format!("Fam{family:03}")
}

pub fn language_id(family: usize, member: usize) -> LanguageId {
    LanguageId::new(format!("f{family:03}l{member:03}")).expect("non-empty")
}

pub fn concept_id(i: usize) -> String {
    format!("C{i:03}")
}

pub fn feature_id(i: usize) -> String {
    format!("GB{i:03}")
}

/// Planted proto-language of one family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proto {
    pub skeletons: Vec<Skeleton>,
    pub features: Vec<u8>,
}

/// A descendant before rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descendant {
    pub skeletons: Vec<Option<Skeleton>>,
    pub features: Vec<Option<u8>>,
}

fn random_class(rng: &mut Pcg64) -> SoundClass {
    SoundClass::ALL[rng.random_range(0..SoundClass::COUNT)]
}

fn random_skeleton(rng: &mut Pcg64) -> Skeleton {
    let first = random_class(rng);
    Skeleton::pair(first, random_class(rng))
}

fn draw_proto(config: &SynthConfig, rng: &mut Pcg64) -> Proto {
    Proto {
        skeletons: (0..config.concepts).map(|_| random_skeleton(rng)).collect(),
        features: (0..config.features)
            .map(|_| rng.random_range(0..2u8))
            .collect(),
    }
}

/// One descendant of `proto` under the mutation rates of `config`.
pub fn descend(proto: &Proto, config: &SynthConfig, rng: &mut Pcg64) -> Descendant {
    let skeletons = proto
        .skeletons
        .iter()
        .map(|s| {
            let s = if rng.random_bool(config.q) {
                random_skeleton(rng)
            } else {
                let mut slots = [s.first(), s.second()];
                for slot in &mut slots {
                    if rng.random_bool(config.p) {
                        *slot = Some(random_class(rng));
                    }
                }
                Skeleton::new(slots[0], slots[1]).expect("both slots present")
            };
            (!rng.random_bool(config.mu)).then_some(s)
        })
        .collect();
    let features = proto
        .features
        .iter()
        .map(|&b| {
            let v = if rng.random_bool(config.r) { 1 - b } else { b };
            (!rng.random_bool(config.mu)).then_some(v)
        })
        .collect();
    Descendant {
        skeletons,
        features,
    }
}

/// A generated corpus with its planted protos.
#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub corpus: Corpus,
    pub protos: Vec<Proto>,
}

pub fn concept_inventory(config: &SynthConfig) -> ConceptInventory {
    ConceptInventory::new((0..config.concepts).map(concept_id)).expect("unique ids")
}

pub fn feature_inventory(config: &SynthConfig) -> FeatureInventory {
    FeatureInventory::new((0..config.features).map(|i| (feature_id(i), FeatureKind::Binary)))
        .expect("unique ids")
}

/// Word forms and feature values of one language.
pub fn language_rows(language: &LanguageId, d: &Descendant) -> (Vec<WordForm>, Vec<FeatureValue>) {
    let forms = d
        .skeletons
        .iter()
        .enumerate()
        .filter_map(|(c, s)| {
            s.map(|s| WordForm {
                language: language.clone(),
                concept: concept_id(c),
                segments: render(&s),
            })
        })
        .collect();
    let values = d
        .features
        .iter()
        .enumerate()
        .map(|(f, v)| FeatureValue {
            language: language.clone(),
            feature: feature_id(f),
            value: *v,
        })
        .collect();
    (forms, values)
}

pub fn generate(config: &SynthConfig) -> Result<Corpus> {
    Ok(generate_planted(config)?.corpus)
}

/// Generates the corpus; family `f` draws from the synth stream `(seed, f)`.
pub fn generate_planted(config: &SynthConfig) -> Result<SynthCorpus> {
    config.validate()?;
    let mut forms = Vec::new();
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut protos = Vec::with_capacity(config.families);
    for family in 0..config.families {
        let mut rng = seed::rng(config.seed, Stream::Synth, family as u64);
        let proto = draw_proto(config, &mut rng);
        for member in 0..config.languages_per_family {
            let language = language_id(family, member);
            let d = descend(&proto, config, &mut rng);
            let (f, v) = language_rows(&language, &d);
            forms.extend(f);
            values.extend(v);
            labels.push(FamilyLabel {
                language,
                family: family_name(family),
            });
        }
        protos.push(proto);
    }
    let (corpus, _) = Corpus::new(
        concept_inventory(config),
        feature_inventory(config),
        forms,
        values,
        labels,
    )?;
    Ok(SynthCorpus { corpus, protos })
}
