//! The golden-values corpus: displayed closed forms and class-field tables.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

const EMBEDDED: &str = include_str!("../data/corpus.toml");

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct Corpus {
    pub entry: Vec<Entry>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Entry {
    BValue(BValue),
    ClassData(ClassRow),
    GValue(PipelineValue),
    ModularIdentity(PipelineValue),
}

impl Entry {
    pub fn id(&self) -> &str {
        match self {
            Entry::BValue(e) => &e.id,
            Entry::ClassData(e) => &e.id,
            Entry::GValue(e) | Entry::ModularIdentity(e) => &e.id,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Entry::BValue(_) => "b-value",
            Entry::ClassData(_) => "class-data",
            Entry::GValue(_) => "g-value",
            Entry::ModularIdentity(_) => "modular-identity",
        }
    }

    pub fn provenance(&self) -> &str {
        match self {
            Entry::BValue(e) => &e.provenance,
            Entry::ClassData(e) => &e.provenance,
            Entry::GValue(e) | Entry::ModularIdentity(e) => &e.provenance,
        }
    }

    pub fn typo(&self) -> Option<&Typo> {
        match self {
            Entry::BValue(e) => e.typo.as_ref(),
            Entry::ClassData(e) => e.typo.as_ref(),
            Entry::GValue(e) | Entry::ModularIdentity(e) => e.typo.as_ref(),
        }
    }
}

/// `expr` is the display of `b_{m,n}`.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct BValue {
    pub id: String,
    pub m: u64,
    pub n: u32,
    pub expr: String,
    pub provenance: String,
    pub typo: Option<Typo>,
}

/// Class-field data for `b_{2m,n}`; `unit_product` displays `b^power`.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct ClassRow {
    pub id: String,
    pub m: u64,
    pub n: u64,
    pub d: i64,
    pub h: u64,
    pub w: u32,
    pub classes_per_genus: u64,
    pub power: i64,
    pub unit_product: String,
    pub decompositions: Vec<DecRow>,
    pub provenance: String,
    pub typo: Option<Typo>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct DecRow {
    pub d1: i64,
    pub d2: i64,
    pub h1: u64,
    pub h2: u64,
    pub w2: u32,
    pub eps: String,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// `g_{7k}`
    Big,
    /// `g_{k/7}`
    Small,
    Ratio,
    Product,
    X,
    /// `P³ + P⁻³`
    S,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum BranchTag {
    Principal,
    Reciprocal,
}

/// `expr = quantity^power` on the principal branch, `quantity^{-power}` on
/// the reciprocal one.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct PipelineValue {
    pub id: String,
    pub k: u64,
    pub quantity: Quantity,
    #[serde(default = "one")]
    pub power: i64,
    pub branch: BranchTag,
    pub expr: String,
    pub provenance: String,
    pub typo: Option<Typo>,
}

fn one() -> i64 {
    1
}

/// A known misprint and the data that replaces it.
#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
pub struct Typo {
    pub note: String,
    pub expr: Option<String>,
    pub unit_product: Option<String>,
    pub decompositions: Option<Vec<DecRow>>,
}

#[derive(Debug)]
pub enum CorpusError {
    Io(std::io::Error),
    Toml(toml::de::Error),
    DuplicateId(String),
}

impl std::fmt::Display for CorpusError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CorpusError::Io(e) => write!(f, "cannot read corpus: {e}"),
            CorpusError::Toml(e) => write!(f, "malformed corpus: {e}"),
            CorpusError::DuplicateId(id) => write!(f, "duplicate corpus id {id:?}"),
        }
    }
}

impl std::error::Error for CorpusError {}

impl Corpus {
    pub fn embedded() -> Corpus {
        Corpus::parse(EMBEDDED).expect("embedded corpus is well formed")
    }

    pub fn parse(text: &str) -> Result<Corpus, CorpusError> {
        let c: Corpus = toml::from_str(text).map_err(CorpusError::Toml)?;
        let mut seen = BTreeSet::new();
        for e in &c.entry {
            if !seen.insert(e.id()) {
                return Err(CorpusError::DuplicateId(e.id().to_string()));
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Corpus, CorpusError> {
        let text = std::fs::read_to_string(path).map_err(CorpusError::Io)?;
        Corpus::parse(&text)
    }

    pub fn get(&self, id: &str) -> Option<&Entry> {
        self.entry.iter().find(|e| e.id() == id)
    }

    pub fn class_row(&self, m: u64, n: u64) -> Option<&ClassRow> {
        self.entry.iter().find_map(|e| match e {
            Entry::ClassData(r) if r.m == m && r.n == n => Some(r),
            _ => None,
        })
    }
}
