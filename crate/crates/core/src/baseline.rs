//! Nearest-language baseline: assign the family of the training language
//! sharing the most concepts with identical two-class skeletons.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::{ConceptInventory, Corpus, LanguageId, WordForm};
use crate::encode::skeletons;
use crate::error::{Error, Result};
use crate::soundclass::{ClassMap, Skeleton, UnknownSegments};

/// Skeleton per concept position; `None` where the concept is unattested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonProfile {
    pub language: LanguageId,
    table: Vec<Option<Skeleton>>,
}

impl SkeletonProfile {
    pub fn new(language: LanguageId, table: Vec<Option<Skeleton>>) -> Self {
        SkeletonProfile { language, table }
    }

    pub fn from_forms<'a, I>(
        language: LanguageId,
        forms: I,
        concepts: &ConceptInventory,
        map: &ClassMap,
        unknown: &mut UnknownSegments,
    ) -> Self
    where
        I: IntoIterator<Item = &'a WordForm>,
    {
        SkeletonProfile {
            language,
            table: skeletons(forms, concepts, map, unknown),
        }
    }

    pub fn from_corpus(corpus: &Corpus, language: &LanguageId, map: &ClassMap) -> Self {
        let mut unknown = UnknownSegments::default();
        Self::from_forms(
            language.clone(),
            corpus.forms_of(language),
            corpus.concepts(),
            map,
            &mut unknown,
        )
    }

    pub fn table(&self) -> &[Option<Skeleton>] {
        &self.table
    }

    pub fn attested(&self) -> usize {
        self.table.iter().filter(|s| s.is_some()).count()
    }
}

/// Concepts attested in both profiles whose skeletons agree in both slots.
pub fn count_matches(a: &SkeletonProfile, b: &SkeletonProfile) -> usize {
    a.table
        .iter()
        .zip(&b.table)
        .filter(|(x, y)| matches!((x, y), (Some(x), Some(y)) if x == y))
        .count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaselinePrediction {
    pub family: String,
    pub best: LanguageId,
    pub score: usize,
}

/// Classifies `query` by its best-matching training language.
///
/// Ties on the top score go to the family with most tied languages, then
/// the smallest family name; `best` is the smallest tied language id of
/// that family.
pub fn classify_baseline<'a, I>(query: &SkeletonProfile, training: I) -> Result<BaselinePrediction>
where
    I: IntoIterator<Item = (&'a SkeletonProfile, &'a str)>,
{
    if query.attested() == 0 {
        return Err(Error::Unclassifiable(format!(
            "{} has no attested concepts",
            query.language
        )));
    }
    let mut top = 0;
    let mut tied: Vec<(&LanguageId, &str)> = Vec::new();
    for (profile, family) in training {
        let score = count_matches(query, profile);
        if tied.is_empty() || score > top {
            tied.clear();
            top = score;
        }
        if score == top {
            tied.push((&profile.language, family));
        }
    }
    if tied.is_empty() {
        return Err(Error::InvalidArgument("empty training set".into()));
    }

    let mut by_family: BTreeMap<&str, (usize, &LanguageId)> = BTreeMap::new();
    for (language, family) in tied {
        let entry = by_family.entry(family).or_insert((0, language));
        entry.0 += 1;
        if language < entry.1 {
            entry.1 = language;
        }
    }
    // BTreeMap iterates families in name order, so the first maximum wins
    let (family, (_, best)) = by_family
        .into_iter()
        .fold(
            None::<(&str, (usize, &LanguageId))>,
            |acc, (f, v)| match acc {
                Some((_, (n, _))) if n >= v.0 => acc,
                _ => Some((f, v)),
            },
        )
        .expect("at least one tied language");
    Ok(BaselinePrediction {
        family: family.to_string(),
        best: best.clone(),
        score: top,
    })
}
