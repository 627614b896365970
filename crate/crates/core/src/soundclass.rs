//! Dolgopolsky consonant classes and first-two-consonant skeletons.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ten consonant classes, in canonical index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SoundClass {
    P,
    T,
    S,
    K,
    M,
    N,
    R,
    W,
    J,
    H,
}

impl SoundClass {
    pub const COUNT: usize = 10;

    pub const ALL: [SoundClass; SoundClass::COUNT] = [
        SoundClass::P,
        SoundClass::T,
        SoundClass::S,
        SoundClass::K,
        SoundClass::M,
        SoundClass::N,
        SoundClass::R,
        SoundClass::W,
        SoundClass::J,
        SoundClass::H,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<SoundClass> {
        SoundClass::ALL.get(index).copied()
    }

    pub fn symbol(self) -> char {
        b"PTSKMNRWJH"[self.index()] as char
    }

    pub fn from_symbol(c: char) -> Option<SoundClass> {
        SoundClass::ALL.into_iter().find(|k| k.symbol() == c)
    }
}

impl fmt::Display for SoundClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// What a single segment token contributes to a skeleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentClass {
    Consonant(SoundClass),
    Vowel,
    Ignore,
}

impl SegmentClass {
    /// `V` for vowels, `0` for ignored segments, the class letter otherwise.
    pub fn symbol(self) -> char {
        match self {
            SegmentClass::Consonant(c) => c.symbol(),
            SegmentClass::Vowel => 'V',
            SegmentClass::Ignore => '0',
        }
    }

    fn from_code(code: &str) -> Option<SegmentClass> {
        let mut chars = code.chars();
        let c = chars.next()?;
        if chars.next().is_some() {
            return None;
        }
        match c {
            'V' => Some(SegmentClass::Vowel),
            '0' => Some(SegmentClass::Ignore),
            c => SoundClass::from_symbol(c).map(SegmentClass::Consonant),
        }
    }
}

/// First and second consonant class of a word form. A word-initial vowel
/// counts as `H`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Skeleton {
    first: Option<SoundClass>,
    second: Option<SoundClass>,
}

impl Skeleton {
    pub const EMPTY: Skeleton = Skeleton {
        first: None,
        second: None,
    };

    /// Returns `None` for the illegal `(absent, present)` combination.
    pub fn new(first: Option<SoundClass>, second: Option<SoundClass>) -> Option<Skeleton> {
        if first.is_none() && second.is_some() {
            None
        } else {
            Some(Skeleton { first, second })
        }
    }

    pub fn pair(first: SoundClass, second: SoundClass) -> Skeleton {
        Skeleton {
            first: Some(first),
            second: Some(second),
        }
    }

    pub fn first(&self) -> Option<SoundClass> {
        self.first
    }

    pub fn second(&self) -> Option<SoundClass> {
        self.second
    }

    /// Skeleton of an already classified segment sequence.
    pub fn from_classes<I>(classes: I) -> Skeleton
    where
        I: IntoIterator<Item = SegmentClass>,
    {
        let mut slots = [None; 2];
        let mut filled = 0;
        let mut at_start = true;
        for class in classes {
            match class {
                SegmentClass::Ignore => continue,
                SegmentClass::Vowel if at_start => {
                    slots[filled] = Some(SoundClass::H);
                    filled += 1;
                }
                SegmentClass::Vowel => {}
                SegmentClass::Consonant(c) => {
                    slots[filled] = Some(c);
                    filled += 1;
                }
            }
            at_start = false;
            if filled == 2 {
                break;
            }
        }
        Skeleton {
            first: slots[0],
            second: slots[1],
        }
    }
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for slot in [self.first, self.second] {
            match slot {
                Some(c) => write!(f, "{c}")?,
                None => f.write_str("-")?,
            }
        }
        Ok(())
    }
}

/// Tokens that were not in the class map, with occurrence counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct UnknownSegments(BTreeMap<String, usize>);

impl UnknownSegments {
    pub fn record(&mut self, token: &str) {
        *self.0.entry(token.to_string()).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: &UnknownSegments) {
        for (t, n) in &other.0 {
            *self.0.entry(t.clone()).or_insert(0) += n;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn counts(&self) -> &BTreeMap<String, usize> {
        &self.0
    }
}

const DEFAULT_CLASSMAP: &str = include_str!("../data/classmap.tsv");

/// Segment token to class lookup table.
///
/// The file format is one `token<TAB>class` entry per line, where class is
/// one of `P T S K M N R W J H` (consonant classes), `V` (vowel) or `0`
/// (ignored). Lines starting with `# ` are comments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMap {
    table: HashMap<String, SegmentClass>,
}

impl Default for ClassMap {
    fn default() -> Self {
        ClassMap::parse(DEFAULT_CLASSMAP, Path::new("<builtin classmap>"))
            .expect("builtin class map is well formed")
    }
}

impl ClassMap {
    pub fn from_entries<I, S>(entries: I) -> ClassMap
    where
        I: IntoIterator<Item = (S, SegmentClass)>,
        S: Into<String>,
    {
        ClassMap {
            table: entries.into_iter().map(|(t, c)| (t.into(), c)).collect(),
        }
    }

    pub fn load(path: &Path) -> Result<ClassMap> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ClassMap::parse(&text, path)
    }

    fn parse(text: &str, origin: &Path) -> Result<ClassMap> {
        let mut table = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() || line.starts_with("# ") {
                continue;
            }
            let (token, code) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(origin, i + 1, "expected token<TAB>class"))?;
            if token.is_empty() {
                return Err(Error::parse(origin, i + 1, "empty token"));
            }
            let class = SegmentClass::from_code(code.trim_end())
                .ok_or_else(|| Error::parse(origin, i + 1, format!("unknown class {code:?}")))?;
            table.insert(token.to_string(), class);
        }
        Ok(ClassMap { table })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Class of a token; tokens missing from the map are `Ignore`.
    pub fn classify(&self, token: &str) -> SegmentClass {
        self.table
            .get(token)
            .copied()
            .unwrap_or(SegmentClass::Ignore)
    }

    /// Like [`classify`](Self::classify), tallying tokens missing from the map.
    pub fn classify_tallied(&self, token: &str, unknown: &mut UnknownSegments) -> SegmentClass {
        match self.table.get(token) {
            Some(c) => *c,
            None => {
                unknown.record(token);
                SegmentClass::Ignore
            }
        }
    }

    pub fn skeleton<S: AsRef<str>>(&self, segments: &[S]) -> Skeleton {
        Skeleton::from_classes(segments.iter().map(|s| self.classify(s.as_ref())))
    }

    pub fn skeleton_tallied<S: AsRef<str>>(
        &self,
        segments: &[S],
        unknown: &mut UnknownSegments,
    ) -> Skeleton {
        Skeleton::from_classes(
            segments
                .iter()
                .map(|s| self.classify_tallied(s.as_ref(), unknown)),
        )
    }

    /// Full class string of a form, e.g. `NVRV` for `n a l a`.
    pub fn class_string<S: AsRef<str>>(&self, segments: &[S]) -> String {
        segments
            .iter()
            .map(|s| self.classify(s.as_ref()).symbol())
            .collect()
    }
}
