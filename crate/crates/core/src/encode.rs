//! Fixed-width binary vectors per language.
//!
//! Lexical layout: for each concept in inventory order, two 10-wide one-hot
//! blocks (first and second consonant class, canonical class order).
//! Grammatical layout: for each feature in inventory order, one 2-wide block.
//! Combined vectors are the lexical vector followed by the grammatical one.
//!
//! When a language has several forms for one concept, the form whose
//! space-joined segment string sorts first is used.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{ConceptInventory, Corpus, FeatureKind, LanguageId, WordForm};
use crate::error::{Error, Result};
use crate::soundclass::{ClassMap, Skeleton, SoundClass, UnknownSegments};

/// Width of one lexical slot block.
pub const CLASS_BLOCK: usize = SoundClass::COUNT;
/// Lexical width contributed by one concept.
pub const CONCEPT_WIDTH: usize = 2 * CLASS_BLOCK;
/// Grammatical width contributed by one feature.
pub const FEATURE_WIDTH: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Lexical,
    Grammatical,
    Combined,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Lexical, Mode::Grammatical, Mode::Combined];

    pub fn uses_lexicon(self) -> bool {
        matches!(self, Mode::Lexical | Mode::Combined)
    }

    pub fn uses_grammar(self) -> bool {
        matches!(self, Mode::Grammatical | Mode::Combined)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Lexical => "lexical",
            Mode::Grammatical => "grammatical",
            Mode::Combined => "combined",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lexical" => Ok(Mode::Lexical),
            "grammatical" => Ok(Mode::Grammatical),
            "combined" => Ok(Mode::Combined),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexicalVector(pub Vec<u8>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarVector(pub Vec<u8>);

pub fn lexical_width(concepts: usize) -> usize {
    concepts * CONCEPT_WIDTH
}

pub fn grammar_width(features: usize) -> usize {
    features * FEATURE_WIDTH
}

/// One form per concept position: the attested form with the smallest
/// segment string, or `None`.
pub fn designated_forms<'a, I>(forms: I, concepts: &ConceptInventory) -> Vec<Option<&'a WordForm>>
where
    I: IntoIterator<Item = &'a WordForm>,
{
    let mut chosen: Vec<Option<(&'a WordForm, String)>> = vec![None; concepts.len()];
    for form in forms {
        let Some(pos) = concepts.position(&form.concept) else {
            continue;
        };
        let key = form.segment_string();
        match &chosen[pos] {
            Some((_, best)) if *best <= key => {}
            _ => chosen[pos] = Some((form, key)),
        }
    }
    chosen.into_iter().map(|c| c.map(|(f, _)| f)).collect()
}

/// Skeleton per concept position for a set of forms.
pub fn skeletons<'a, I>(
    forms: I,
    concepts: &ConceptInventory,
    map: &ClassMap,
    unknown: &mut UnknownSegments,
) -> Vec<Option<Skeleton>>
where
    I: IntoIterator<Item = &'a WordForm>,
{
    designated_forms(forms, concepts)
        .into_iter()
        .map(|f| f.map(|f| map.skeleton_tallied(&f.segments, unknown)))
        .collect()
}

/// Lexical vector from per-concept skeletons.
pub fn lexical_from_skeletons(skeletons: &[Option<Skeleton>]) -> LexicalVector {
    let mut bits = vec![0u8; lexical_width(skeletons.len())];
    for (i, skeleton) in skeletons.iter().enumerate() {
        let Some(s) = skeleton else { continue };
        let base = i * CONCEPT_WIDTH;
        if let Some(c) = s.first() {
            bits[base + c.index()] = 1;
        }
        if let Some(c) = s.second() {
            bits[base + CLASS_BLOCK + c.index()] = 1;
        }
    }
    LexicalVector(bits)
}

/// Lexical vector of an arbitrary wordlist against `concepts`; forms for
/// concepts outside the inventory are ignored.
pub fn encode_lexical_forms<'a, I>(
    forms: I,
    concepts: &ConceptInventory,
    map: &ClassMap,
    unknown: &mut UnknownSegments,
) -> LexicalVector
where
    I: IntoIterator<Item = &'a WordForm>,
{
    lexical_from_skeletons(&skeletons(forms, concepts, map, unknown))
}

pub fn encode_lexical(
    corpus: &Corpus,
    language: &LanguageId,
    map: &ClassMap,
) -> Result<LexicalVector> {
    if !corpus.contains(language) {
        return Err(Error::UnknownLanguage(language.to_string()));
    }
    let mut unknown = UnknownSegments::default();
    Ok(encode_lexical_forms(
        corpus.forms_of(language),
        corpus.concepts(),
        map,
        &mut unknown,
    ))
}

pub fn encode_grammar(corpus: &Corpus, language: &LanguageId) -> Result<GrammarVector> {
    if !corpus.contains(language) {
        return Err(Error::UnknownLanguage(language.to_string()));
    }
    let features = corpus.features();
    let mut bits = vec![0u8; grammar_width(features.len())];
    for v in corpus.values_of(language) {
        let (Some(pos), Some(value)) = (features.position(&v.feature), v.value) else {
            continue;
        };
        let block = &mut bits[pos * FEATURE_WIDTH..(pos + 1) * FEATURE_WIDTH];
        match (features.entries()[pos].1, value) {
            (FeatureKind::Binary, 0) | (FeatureKind::Ternary, 1) => block[0] = 1,
            (FeatureKind::Binary, 1) | (FeatureKind::Ternary, 2) => block[1] = 1,
            (FeatureKind::Ternary, 3) => block.fill(1),
            // rejected at load time
            _ => {}
        }
    }
    Ok(GrammarVector(bits))
}

pub fn encode_combined(lex: &LexicalVector, gram: &GrammarVector) -> Vec<u8> {
    let mut out = Vec::with_capacity(lex.0.len() + gram.0.len());
    out.extend_from_slice(&lex.0);
    out.extend_from_slice(&gram.0);
    out
}

/// Family names in lexicographic order, indexed `0..K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FamilyTable(Vec<String>);

impl FamilyTable {
    pub fn new<I, S>(names: I) -> FamilyTable
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = names.into_iter().map(Into::into).collect();
        FamilyTable(set.into_iter().collect())
    }

    pub fn from_corpus(corpus: &Corpus) -> FamilyTable {
        FamilyTable::new(corpus.labels().values().cloned())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, family: &str) -> Option<usize> {
        self.0.binary_search_by(|f| f.as_str().cmp(family)).ok()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.0[index]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }
}

/// One binary row per labeled language plus its family index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedDataset {
    pub mode: Mode,
    pub languages: Vec<LanguageId>,
    pub families: FamilyTable,
    pub targets: Vec<usize>,
    pub lexical_width: usize,
    pub grammar_width: usize,
    data: Vec<u8>,
    pub unknown_segments: UnknownSegments,
}

impl EncodedDataset {
    pub fn width(&self) -> usize {
        match self.mode {
            Mode::Lexical => self.lexical_width,
            Mode::Grammatical => self.grammar_width,
            Mode::Combined => self.lexical_width + self.grammar_width,
        }
    }

    pub fn len(&self) -> usize {
        self.languages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.languages.is_empty()
    }

    pub fn row(&self, i: usize) -> &[u8] {
        let w = self.width();
        &self.data[i * w..(i + 1) * w]
    }

    pub fn position(&self, language: &LanguageId) -> Option<usize> {
        self.languages.binary_search(language).ok()
    }

    /// Text dump: a `#`-prefixed header, then `Language_ID<TAB>family<TAB>bits`.
    pub fn to_dump(&self) -> String {
        let mut out = format!(
            "#mode={}\twidth={}\tlexical_width={}\tgrammar_width={}\tK={}\tlayout=lexical+grammatical\n",
            self.mode,
            self.width(),
            self.lexical_width,
            self.grammar_width,
            self.families.len()
        );
        for i in 0..self.len() {
            let bits: String = self
                .row(i)
                .iter()
                .map(|&b| if b == 1 { '1' } else { '0' })
                .collect();
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                self.languages[i],
                self.families.name(self.targets[i]),
                bits
            ));
        }
        out
    }

    pub fn write_dump(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_dump()).map_err(|e| Error::io(path, e))
    }
}

/// Encodes every labeled language of `corpus` in language order.
pub fn encode_dataset(corpus: &Corpus, mode: Mode, map: &ClassMap) -> Result<EncodedDataset> {
    if mode.uses_grammar() && corpus.values().is_empty() {
        return Err(Error::MissingData(format!(
            "{mode} encoding needs grammatical feature values"
        )));
    }
    if mode.uses_lexicon() && corpus.forms().is_empty() {
        return Err(Error::MissingData(format!(
            "{mode} encoding needs word forms"
        )));
    }
    let families = FamilyTable::from_corpus(corpus);
    let lexical_width = lexical_width(corpus.concepts().len());
    let grammar_width = grammar_width(corpus.features().len());
    let mut unknown = UnknownSegments::default();
    let mut data = Vec::new();
    let mut languages = Vec::with_capacity(corpus.language_count());
    let mut targets = Vec::with_capacity(corpus.language_count());
    for (language, family) in corpus.labels() {
        if mode.uses_lexicon() {
            let lex = encode_lexical_forms(
                corpus.forms_of(language),
                corpus.concepts(),
                map,
                &mut unknown,
            );
            data.extend_from_slice(&lex.0);
        }
        if mode.uses_grammar() {
            data.extend_from_slice(&encode_grammar(corpus, language)?.0);
        }
        languages.push(language.clone());
        targets.push(
            families
                .index(family)
                .expect("family table built from labels"),
        );
    }
    Ok(EncodedDataset {
        mode,
        languages,
        families,
        targets,
        lexical_width,
        grammar_width,
        data,
        unknown_segments: unknown,
    })
}
