//! Wordlists, grammatical feature values and family labels under fixed
//! concept and feature inventories.
//!
//! All files are UTF-8, tab separated, with a header row naming the columns:
//!
//! | file                | columns                                   |
//! |---------------------|-------------------------------------------|
//! | `wordlist.tsv`      | `ID  Language_ID  Parameter_ID  Segments` |
//! | `features.tsv`      | `Language_ID  Parameter_ID  Value`        |
//! | `labels.tsv`        | `Language_ID  Family`                     |
//! | `features_meta.tsv` | `Parameter_ID  Kind` (`bin` or `tri`)     |
//! | `concepts.txt`      | one concept id per line, no header        |
//!
//! `Segments` holds space separated segment tokens. Feature values are one of
//! `0`, `1`, `2`, `3` or `-` (missing).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Family label reserved for languages without demonstrated relatives.
pub const ISOLATE: &str = "Isolate";

pub const WORDLIST_FILE: &str = "wordlist.tsv";
pub const FEATURES_FILE: &str = "features.tsv";
pub const LABELS_FILE: &str = "labels.tsv";
pub const CONCEPTS_FILE: &str = "concepts.txt";
pub const FEATURES_META_FILE: &str = "features_meta.tsv";

/// Glottocode-style language identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LanguageId(String);

impl LanguageId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::InvalidArgument("empty language id".into()));
        }
        Ok(LanguageId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for LanguageId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LanguageId::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordForm {
    pub language: LanguageId,
    pub concept: String,
    pub segments: Vec<String>,
}

impl WordForm {
    /// Segments joined by single spaces, as they appear on disk.
    pub fn segment_string(&self) -> String {
        self.segments.join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureKind {
    /// Values 0 and 1.
    Binary,
    /// Values 1, 2 and 3, where 3 means both 1 and 2 are attested.
    Ternary,
}

impl FeatureKind {
    pub fn code(self) -> &'static str {
        match self {
            FeatureKind::Binary => "bin",
            FeatureKind::Ternary => "tri",
        }
    }

    fn name(self) -> &'static str {
        match self {
            FeatureKind::Binary => "binary",
            FeatureKind::Ternary => "three-valued",
        }
    }

    pub fn admits(self, value: u8) -> bool {
        match self {
            FeatureKind::Binary => value <= 1,
            FeatureKind::Ternary => (1..=3).contains(&value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureValue {
    pub language: LanguageId,
    pub feature: String,
    /// `None` is missing data.
    pub value: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyLabel {
    pub language: LanguageId,
    pub family: String,
}

/// Ordered list of concept ids; order fixes the lexical vector layout.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConceptInventory {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl ConceptInventory {
    pub fn new<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut inv = ConceptInventory::default();
        for id in ids {
            let id = id.into();
            if id.is_empty() {
                return Err(Error::InvalidArgument("empty concept id".into()));
            }
            if inv.index.insert(id.clone(), inv.ids.len()).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate concept {id}")));
            }
            inv.ids.push(id);
        }
        Ok(inv)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn position(&self, concept: &str) -> Option<usize> {
        self.index.get(concept).copied()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }
}

/// Ordered list of features and their kinds; order fixes the grammar vector layout.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureInventory {
    entries: Vec<(String, FeatureKind)>,
    index: HashMap<String, usize>,
}

impl FeatureInventory {
    pub fn new<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, FeatureKind)>,
        S: Into<String>,
    {
        let mut inv = FeatureInventory::default();
        for (id, kind) in entries {
            let id = id.into();
            if id.is_empty() {
                return Err(Error::InvalidArgument("empty feature id".into()));
            }
            if inv.index.insert(id.clone(), inv.entries.len()).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate feature {id}")));
            }
            inv.entries.push((id, kind));
        }
        Ok(inv)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, feature: &str) -> Option<usize> {
        self.index.get(feature).copied()
    }

    pub fn kind(&self, feature: &str) -> Option<FeatureKind> {
        self.position(feature).map(|i| self.entries[i].1)
    }

    pub fn entries(&self) -> &[(String, FeatureKind)] {
        &self.entries
    }
}

/// Rows returned by a loader plus the number of rows dropped because they
/// referenced a parameter outside the inventory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loaded<T> {
    pub items: Vec<T>,
    pub skipped: usize,
}

/// Counts of rows dropped while assembling a corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub forms_outside_inventory: usize,
    pub values_outside_inventory: usize,
    pub forms_without_label: usize,
    pub values_without_label: usize,
}

/// A labeled collection of wordlists and grammatical feature values.
///
/// Languages are exactly the labeled ones and iterate in `LanguageId` order.
/// Rows for unlabeled languages are dropped when the corpus is assembled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    concepts: ConceptInventory,
    features: FeatureInventory,
    forms: Vec<WordForm>,
    values: Vec<FeatureValue>,
    labels: BTreeMap<LanguageId, String>,
    forms_by_language: BTreeMap<LanguageId, Vec<usize>>,
    values_by_language: BTreeMap<LanguageId, Vec<usize>>,
}

impl Corpus {
    /// Assembles a corpus. Every form and value must reference an inventory
    /// entry; rows for languages without a label are dropped and counted.
    pub fn new(
        concepts: ConceptInventory,
        features: FeatureInventory,
        forms: Vec<WordForm>,
        values: Vec<FeatureValue>,
        labels: Vec<FamilyLabel>,
    ) -> Result<(Self, LoadReport)> {
        let labels = collapse_labels(labels)?;
        let mut report = LoadReport::default();

        for form in &forms {
            if concepts.position(&form.concept).is_none() {
                return Err(Error::InvalidArgument(format!(
                    "word form of {} references unknown concept {}",
                    form.language, form.concept
                )));
            }
            if form.segments.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "word form of {} for {} has no segments",
                    form.language, form.concept
                )));
            }
        }
        for value in &values {
            let kind = features.kind(&value.feature).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "feature value of {} references unknown feature {}",
                    value.language, value.feature
                ))
            })?;
            if let Some(v) = value.value {
                check_kind(kind, v, &value.language, &value.feature)?;
            }
        }

        let before = forms.len();
        let forms: Vec<_> = forms
            .into_iter()
            .filter(|f| labels.contains_key(&f.language))
            .collect();
        report.forms_without_label = before - forms.len();
        let before = values.len();
        let values: Vec<_> = values
            .into_iter()
            .filter(|v| labels.contains_key(&v.language))
            .collect();
        report.values_without_label = before - values.len();

        Ok((
            Self::from_parts(concepts, features, forms, values, labels),
            report,
        ))
    }

    fn from_parts(
        concepts: ConceptInventory,
        features: FeatureInventory,
        forms: Vec<WordForm>,
        values: Vec<FeatureValue>,
        labels: BTreeMap<LanguageId, String>,
    ) -> Self {
        let mut forms_by_language: BTreeMap<LanguageId, Vec<usize>> = BTreeMap::new();
        for (i, f) in forms.iter().enumerate() {
            forms_by_language
                .entry(f.language.clone())
                .or_default()
                .push(i);
        }
        let mut values_by_language: BTreeMap<LanguageId, Vec<usize>> = BTreeMap::new();
        for (i, v) in values.iter().enumerate() {
            values_by_language
                .entry(v.language.clone())
                .or_default()
                .push(i);
        }
        Corpus {
            concepts,
            features,
            forms,
            values,
            labels,
            forms_by_language,
            values_by_language,
        }
    }

    /// Loads every file named in `paths`. Labels and at least one of the
    /// wordlist or feature files are required.
    pub fn load(paths: &CorpusPaths) -> Result<(Self, LoadReport)> {
        let labels_path = paths
            .labels
            .as_ref()
            .ok_or_else(|| Error::MissingData("labels file is required".into()))?;
        if paths.wordlist.is_none() && paths.features.is_none() {
            return Err(Error::MissingData(
                "a wordlist or a feature file is required".into(),
            ));
        }

        let concepts = match (&paths.wordlist, &paths.concepts) {
            (Some(_), Some(c)) => read_concepts(c)?,
            (Some(_), None) => {
                return Err(Error::MissingData(
                    "a concept inventory is required with a wordlist".into(),
                ))
            }
            (None, _) => ConceptInventory::default(),
        };
        let features = match (&paths.features, &paths.features_meta) {
            (Some(_), Some(m)) => read_features_meta(m)?,
            (Some(_), None) => {
                return Err(Error::MissingData(
                    "a feature inventory is required with a feature file".into(),
                ))
            }
            (None, _) => FeatureInventory::default(),
        };

        let forms = match &paths.wordlist {
            Some(p) => load_wordlist(p, &concepts)?,
            None => Loaded {
                items: vec![],
                skipped: 0,
            },
        };
        let values = match &paths.features {
            Some(p) => load_features(p, &features)?,
            None => Loaded {
                items: vec![],
                skipped: 0,
            },
        };
        let labels = load_labels(labels_path)?;

        let (corpus, mut report) =
            Corpus::new(concepts, features, forms.items, values.items, labels)?;
        report.forms_outside_inventory = forms.skipped;
        report.values_outside_inventory = values.skipped;
        Ok((corpus, report))
    }

    /// Writes the corpus under `dir` with the standard file names.
    pub fn save_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_concepts(&dir.join(CONCEPTS_FILE), &self.concepts)?;
        write_features_meta(&dir.join(FEATURES_META_FILE), &self.features)?;
        write_wordlist(&dir.join(WORDLIST_FILE), &self.forms)?;
        write_features(&dir.join(FEATURES_FILE), &self.values)?;
        let labels: Vec<_> = self
            .labels
            .iter()
            .map(|(language, family)| FamilyLabel {
                language: language.clone(),
                family: family.clone(),
            })
            .collect();
        write_labels(&dir.join(LABELS_FILE), &labels)
    }

    pub fn concepts(&self) -> &ConceptInventory {
        &self.concepts
    }

    pub fn features(&self) -> &FeatureInventory {
        &self.features
    }

    pub fn forms(&self) -> &[WordForm] {
        &self.forms
    }

    pub fn values(&self) -> &[FeatureValue] {
        &self.values
    }

    /// Labeled languages in identifier order.
    pub fn languages(&self) -> impl Iterator<Item = &LanguageId> + '_ {
        self.labels.keys()
    }

    pub fn language_count(&self) -> usize {
        self.labels.len()
    }

    pub fn contains(&self, language: &LanguageId) -> bool {
        self.labels.contains_key(language)
    }

    pub fn family(&self, language: &LanguageId) -> Option<&str> {
        self.labels.get(language).map(String::as_str)
    }

    pub fn labels(&self) -> &BTreeMap<LanguageId, String> {
        &self.labels
    }

    pub fn forms_of<'a>(
        &'a self,
        language: &LanguageId,
    ) -> impl Iterator<Item = &'a WordForm> + 'a {
        self.forms_by_language
            .get(language)
            .into_iter()
            .flatten()
            .map(move |&i| &self.forms[i])
    }

    pub fn values_of<'a>(
        &'a self,
        language: &LanguageId,
    ) -> impl Iterator<Item = &'a FeatureValue> + 'a {
        self.values_by_language
            .get(language)
            .into_iter()
            .flatten()
            .map(move |&i| &self.values[i])
    }

    /// Number of member languages per family.
    pub fn family_sizes(&self) -> BTreeMap<&str, usize> {
        let mut sizes = BTreeMap::new();
        for family in self.labels.values() {
            *sizes.entry(family.as_str()).or_insert(0) += 1;
        }
        sizes
    }

    /// Keeps only the languages whose family has at least `k` members.
    pub fn filter_min_family_size(&self, k: usize) -> Result<Corpus> {
        if k < 1 {
            return Err(Error::InvalidArgument(
                "minimum family size must be at least 1".into(),
            ));
        }
        let sizes = self.family_sizes();
        let keep: BTreeSet<LanguageId> = self
            .labels
            .iter()
            .filter(|(_, family)| sizes[family.as_str()] >= k)
            .map(|(l, _)| l.clone())
            .collect();
        Ok(self.restrict(|l| keep.contains(l)))
    }

    /// Copy of the corpus without the given languages.
    pub fn without_languages(&self, removed: &BTreeSet<LanguageId>) -> Corpus {
        self.restrict(|l| !removed.contains(l))
    }

    fn restrict(&self, keep: impl Fn(&LanguageId) -> bool) -> Corpus {
        let labels = self
            .labels
            .iter()
            .filter(|(l, _)| keep(l))
            .map(|(l, f)| (l.clone(), f.clone()))
            .collect();
        let forms = self
            .forms
            .iter()
            .filter(|f| keep(&f.language))
            .cloned()
            .collect();
        let values = self
            .values
            .iter()
            .filter(|v| keep(&v.language))
            .cloned()
            .collect();
        Corpus::from_parts(
            self.concepts.clone(),
            self.features.clone(),
            forms,
            values,
            labels,
        )
    }
}

/// Locations of the corpus files; any may be absent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusPaths {
    pub wordlist: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub concepts: Option<PathBuf>,
    pub features_meta: Option<PathBuf>,
}

impl CorpusPaths {
    /// Standard file names under `dir`, keeping only the files that exist.
    pub fn in_dir(dir: &Path) -> Self {
        let existing = |name: &str| {
            let p = dir.join(name);
            p.exists().then_some(p)
        };
        CorpusPaths {
            wordlist: existing(WORDLIST_FILE),
            features: existing(FEATURES_FILE),
            labels: existing(LABELS_FILE),
            concepts: existing(CONCEPTS_FILE),
            features_meta: existing(FEATURES_META_FILE),
        }
    }
}

fn collapse_labels(labels: Vec<FamilyLabel>) -> Result<BTreeMap<LanguageId, String>> {
    let mut map: BTreeMap<LanguageId, String> = BTreeMap::new();
    for label in labels {
        match map.get(&label.language) {
            Some(existing) if *existing != label.family => {
                return Err(Error::LabelConflict {
                    language: label.language.0,
                    first: existing.clone(),
                    second: label.family,
                });
            }
            Some(_) => {}
            None => {
                map.insert(label.language, label.family);
            }
        }
    }
    Ok(map)
}

fn check_kind(kind: FeatureKind, value: u8, language: &LanguageId, feature: &str) -> Result<()> {
    if kind.admits(value) {
        Ok(())
    } else {
        Err(Error::InvalidFeatureValue {
            language: language.0.clone(),
            feature: feature.to_string(),
            kind: kind.name(),
            value: value.to_string(),
        })
    }
}

/// A header-addressed tab separated table.
struct Table {
    path: PathBuf,
    columns: Vec<usize>,
    rows: Vec<(usize, Vec<String>)>,
}

impl Table {
    fn read(path: &Path, required: &[&str]) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(b'\t')
            .quoting(false)
            .from_path(path)
            .map_err(|e| csv_error(path, e))?;
        let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
        if header.is_empty() {
            return Err(Error::parse(path, 1, "missing header row"));
        }
        let mut columns = Vec::with_capacity(required.len());
        for name in required {
            let pos = header
                .iter()
                .position(|h| h == *name)
                .ok_or_else(|| Error::parse(path, 1, format!("header lacks column {name}")))?;
            columns.push(pos);
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| csv_error(path, e))?;
            let number = record.position().map_or(0, |p| p.line() as usize);
            rows.push((number, record.iter().map(str::to_string).collect()));
        }
        Ok(Table {
            path: path.to_path_buf(),
            columns,
            rows,
        })
    }

    /// Rows as (line number, required cells in the requested order).
    fn records(&self) -> impl Iterator<Item = (usize, Vec<&str>)> + '_ {
        self.rows.iter().map(move |(n, cells)| {
            (
                *n,
                self.columns.iter().map(|&c| cells[c].as_str()).collect(),
            )
        })
    }

    fn language(&self, line: usize, cell: &str) -> Result<LanguageId> {
        if cell.is_empty() {
            return Err(Error::parse(&self.path, line, "empty Language_ID"));
        }
        Ok(LanguageId(cell.to_string()))
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => Error::parse(
            path,
            line,
            format!("expected {expected_len} columns, found {len}"),
        ),
        other => Error::parse(path, line, format!("{other:?}")),
    }
}

/// Reads word forms, keeping rows whose concept is in `inventory`.
pub fn load_wordlist(path: &Path, inventory: &ConceptInventory) -> Result<Loaded<WordForm>> {
    let table = Table::read(path, &["ID", "Language_ID", "Parameter_ID", "Segments"])?;
    let mut items = Vec::new();
    let mut skipped = 0;
    for (line, cells) in table.records() {
        let language = table.language(line, cells[1])?;
        let segments: Vec<String> = cells[3].split_whitespace().map(str::to_string).collect();
        if segments.is_empty() {
            return Err(Error::parse(path, line, "empty Segments"));
        }
        if inventory.position(cells[2]).is_none() {
            skipped += 1;
            continue;
        }
        items.push(WordForm {
            language,
            concept: cells[2].to_string(),
            segments,
        });
    }
    Ok(Loaded { items, skipped })
}

/// Reads feature values, validating each against its declared kind.
/// Rows for features outside `inventory` are skipped.
pub fn load_features(path: &Path, inventory: &FeatureInventory) -> Result<Loaded<FeatureValue>> {
    let table = Table::read(path, &["Language_ID", "Parameter_ID", "Value"])?;
    let mut items = Vec::new();
    let mut skipped = 0;
    let mut seen: HashMap<(LanguageId, String), Option<u8>> = HashMap::new();
    for (line, cells) in table.records() {
        let language = table.language(line, cells[0])?;
        let value = match cells[2] {
            "-" => None,
            "0" => Some(0),
            "1" => Some(1),
            "2" => Some(2),
            "3" => Some(3),
            other => {
                return Err(Error::parse(path, line, format!("invalid value {other:?}")));
            }
        };
        let Some(kind) = inventory.kind(cells[1]) else {
            skipped += 1;
            continue;
        };
        if let Some(v) = value {
            check_kind(kind, v, &language, cells[1])?;
        }
        match seen.get(&(language.clone(), cells[1].to_string())) {
            Some(prev) if *prev == value => continue,
            Some(_) => {
                return Err(Error::parse(
                    path,
                    line,
                    format!("conflicting values for {} on {}", cells[1], language),
                ))
            }
            None => {
                seen.insert((language.clone(), cells[1].to_string()), value);
            }
        }
        items.push(FeatureValue {
            language,
            feature: cells[1].to_string(),
            value,
        });
    }
    Ok(Loaded { items, skipped })
}

/// Reads family labels; identical duplicate rows collapse into one label.
pub fn load_labels(path: &Path) -> Result<Vec<FamilyLabel>> {
    let table = Table::read(path, &["Language_ID", "Family"])?;
    let mut labels = Vec::new();
    for (line, cells) in table.records() {
        let language = table.language(line, cells[0])?;
        if cells[1].is_empty() {
            return Err(Error::parse(path, line, "empty Family"));
        }
        labels.push(FamilyLabel {
            language,
            family: cells[1].to_string(),
        });
    }
    let collapsed = collapse_labels(labels)?;
    Ok(collapsed
        .into_iter()
        .map(|(language, family)| FamilyLabel { language, family })
        .collect())
}

pub fn read_concepts(path: &Path) -> Result<ConceptInventory> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let ids: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    ConceptInventory::new(ids).map_err(|e| Error::parse(path, 0, e.to_string()))
}

pub fn read_features_meta(path: &Path) -> Result<FeatureInventory> {
    let table = Table::read(path, &["Parameter_ID", "Kind"])?;
    let mut entries = Vec::new();
    for (line, cells) in table.records() {
        let kind = match cells[1] {
            "bin" => FeatureKind::Binary,
            "tri" => FeatureKind::Ternary,
            other => return Err(Error::parse(path, line, format!("unknown kind {other:?}"))),
        };
        entries.push((cells[0].to_string(), kind));
    }
    FeatureInventory::new(entries).map_err(|e| Error::parse(path, 0, e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| Error::io(path, e))
}

pub fn write_wordlist(path: &Path, forms: &[WordForm]) -> Result<()> {
    let mut out = String::from("ID\tLanguage_ID\tParameter_ID\tSegments\n");
    for (i, f) in forms.iter().enumerate() {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            i + 1,
            f.language,
            f.concept,
            f.segment_string()
        ));
    }
    write_file(path, &out)
}

pub fn write_features(path: &Path, values: &[FeatureValue]) -> Result<()> {
    let mut out = String::from("Language_ID\tParameter_ID\tValue\n");
    for v in values {
        let value = v.value.map_or_else(|| "-".to_string(), |x| x.to_string());
        out.push_str(&format!("{}\t{}\t{}\n", v.language, v.feature, value));
    }
    write_file(path, &out)
}

pub fn write_labels(path: &Path, labels: &[FamilyLabel]) -> Result<()> {
    let mut out = String::from("Language_ID\tFamily\n");
    for l in labels {
        out.push_str(&format!("{}\t{}\n", l.language, l.family));
    }
    write_file(path, &out)
}

pub fn write_concepts(path: &Path, concepts: &ConceptInventory) -> Result<()> {
    let mut out = String::new();
    for c in concepts.ids() {
        out.push_str(c);
        out.push('\n');
    }
    write_file(path, &out)
}

pub fn write_features_meta(path: &Path, features: &FeatureInventory) -> Result<()> {
    let mut out = String::from("Parameter_ID\tKind\n");
    for (id, kind) in features.entries() {
        out.push_str(&format!("{id}\t{}\n", kind.code()));
    }
    write_file(path, &out)
}
