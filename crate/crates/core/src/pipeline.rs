//! Encoded languages plus the two model kinds behind one fit/predict surface.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baseline::{classify_baseline, SkeletonProfile};
use crate::corpus::{Corpus, LanguageId, WordForm};
use crate::encode::{encode_dataset, encode_grammar, encode_lexical_forms, FamilyTable, Mode};
use crate::error::{Error, Result};
use crate::nnet::{train, LabeledMatrix, Matrix, TrainConfig, TrainedModel};
use crate::soundclass::{ClassMap, UnknownSegments};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Baseline,
    Mlp,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Baseline => "baseline",
            ModelKind::Mlp => "mlp",
        }
    }

    /// The baseline compares skeletons and only exists in lexical mode.
    pub fn supports(self, mode: Mode) -> bool {
        self == ModelKind::Mlp || mode == Mode::Lexical
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(ModelKind::Baseline),
            "mlp" => Ok(ModelKind::Mlp),
            other => Err(Error::InvalidArgument(format!(
                "unknown model kind {other:?}"
            ))),
        }
    }
}

/// One language ready for either model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub language: LanguageId,
    pub vector: Vec<u8>,
    pub profile: SkeletonProfile,
}

/// Every labeled language of a corpus, encoded for one mode.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub mode: Mode,
    pub families: FamilyTable,
    pub samples: Vec<Sample>,
    pub targets: Vec<usize>,
    pub width: usize,
    pub unknown_segments: UnknownSegments,
    concepts: crate::corpus::ConceptInventory,
    grammar_width: usize,
}

impl SampleSet {
    pub fn build(corpus: &Corpus, mode: Mode, map: &ClassMap) -> Result<Self> {
        let dataset = encode_dataset(corpus, mode, map)?;
        let mut unknown = UnknownSegments::default();
        let samples = dataset
            .languages
            .iter()
            .enumerate()
            .map(|(i, language)| Sample {
                language: language.clone(),
                vector: dataset.row(i).to_vec(),
                profile: SkeletonProfile::from_forms(
                    language.clone(),
                    corpus.forms_of(language),
                    corpus.concepts(),
                    map,
                    &mut unknown,
                ),
            })
            .collect();
        Ok(SampleSet {
            mode,
            width: dataset.width(),
            families: dataset.families,
            targets: dataset.targets,
            samples,
            unknown_segments: dataset.unknown_segments,
            concepts: corpus.concepts().clone(),
            grammar_width: dataset.grammar_width,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn position(&self, language: &LanguageId) -> Option<usize> {
        self.samples
            .binary_search_by(|s| s.language.cmp(language))
            .ok()
    }

    /// Encodes a wordlist outside the corpus with the corpus inventories.
    /// Only lexical information exists for such a language, so in combined
    /// mode its grammatical block is all zero.
    pub fn external(
        &self,
        language: LanguageId,
        forms: &[WordForm],
        map: &ClassMap,
    ) -> Result<Sample> {
        if self.mode == Mode::Grammatical {
            return Err(Error::InvalidArgument(
                "a wordlist cannot be encoded in grammatical mode".into(),
            ));
        }
        let mut unknown = UnknownSegments::default();
        let profile =
            SkeletonProfile::from_forms(language.clone(), forms, &self.concepts, map, &mut unknown);
        if profile.attested() == 0 {
            return Err(Error::Unclassifiable(format!(
                "{language} has no forms for inventory concepts"
            )));
        }
        let mut vector = encode_lexical_forms(forms, &self.concepts, map, &mut unknown).0;
        if self.mode == Mode::Combined {
            vector.resize(vector.len() + self.grammar_width, 0);
        }
        Ok(Sample {
            language,
            vector,
            profile,
        })
    }

    /// Encodes `language` of `corpus`, which must share this set's
    /// inventories. Used for languages excluded from the set itself.
    pub fn encode_from(
        &self,
        corpus: &Corpus,
        language: &LanguageId,
        map: &ClassMap,
    ) -> Result<Sample> {
        if !corpus.contains(language) {
            return Err(Error::UnknownLanguage(language.to_string()));
        }
        if corpus.concepts() != &self.concepts || 2 * corpus.features().len() != self.grammar_width
        {
            return Err(Error::InvalidArgument(format!(
                "{language} comes from a corpus with different inventories"
            )));
        }
        let mut unknown = UnknownSegments::default();
        let profile = SkeletonProfile::from_forms(
            language.clone(),
            corpus.forms_of(language),
            corpus.concepts(),
            map,
            &mut unknown,
        );
        let mut vector = Vec::with_capacity(self.width);
        if self.mode.uses_lexicon() {
            vector.extend(
                encode_lexical_forms(
                    corpus.forms_of(language),
                    corpus.concepts(),
                    map,
                    &mut unknown,
                )
                .0,
            );
        }
        if self.mode.uses_grammar() {
            vector.extend(encode_grammar(corpus, language)?.0);
        }
        Ok(Sample {
            language: language.clone(),
            vector,
            profile,
        })
    }

    fn matrix(&self, rows: &[usize]) -> LabeledMatrix {
        let x = Matrix::from_binary_rows(
            rows.iter().map(|&i| self.samples[i].vector.as_slice()),
            self.width,
        );
        let targets = rows.iter().map(|&i| self.targets[i]).collect();
        LabeledMatrix::new(x, targets).expect("row count matches targets")
    }
}

/// A model fitted on a subset of a [`SampleSet`].
#[derive(Debug, Clone)]
pub enum Fitted {
    Baseline { training: Vec<usize> },
    Mlp(Box<TrainedModel>),
}

impl Fitted {
    /// Fits `kind` on rows `train`; the network monitors rows `monitor`.
    pub fn fit(
        set: &SampleSet,
        kind: ModelKind,
        train_rows: &[usize],
        monitor_rows: &[usize],
        config: &TrainConfig,
    ) -> Result<Fitted> {
        if !kind.supports(set.mode) {
            return Err(Error::InvalidArgument(format!(
                "the {kind} model does not support {} mode",
                set.mode
            )));
        }
        if train_rows.is_empty() {
            return Err(Error::InvalidArgument("empty training set".into()));
        }
        match kind {
            ModelKind::Baseline => Ok(Fitted::Baseline {
                training: train_rows.to_vec(),
            }),
            ModelKind::Mlp => {
                let model = train(
                    &set.matrix(train_rows),
                    &set.matrix(monitor_rows),
                    &set.families,
                    config,
                )?;
                Ok(Fitted::Mlp(Box::new(model)))
            }
        }
    }

    /// Predicted family name for `sample`.
    pub fn predict(&self, set: &SampleSet, sample: &Sample) -> Result<String> {
        match self {
            Fitted::Baseline { training } => {
                let candidates = training
                    .iter()
                    .map(|&i| (&set.samples[i].profile, set.families.name(set.targets[i])));
                Ok(classify_baseline(&sample.profile, candidates)?.family)
            }
            Fitted::Mlp(model) => Ok(model.predict_binary(&sample.vector)?.family),
        }
    }

    pub fn model(&self) -> Option<&TrainedModel> {
        match self {
            Fitted::Mlp(m) => Some(m),
            Fitted::Baseline { .. } => None,
        }
    }
}
