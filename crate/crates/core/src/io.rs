//! JSON documents read and written by the command-line tool.
//!
//! ```json
//! {"schema": 1,
//!  "surface": {"genus": 1, "boundary": 2},
//!  "monodromy": {"word": [{"twist": "a_1", "power": -2},
//!                         {"twist": "T", "power": 1, "homology": [0, 1, 0], "pi1": {"alpha_1": "a1b1"}}]}}
//! ```
//!
//! A braid document is `{"strands": n, "word": [{"gen": "s_1", "power": 3}]}`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::freegroup::{FreeEndo, FreeWord, Gen};
use crate::mapclass::{MappingClass, TwistGenerator};
use crate::slcalc::{BraidGen, BraidWord};
use crate::surface::{AbsClass, SurfaceSig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenBookDoc {
    #[serde(default)]
    pub schema: Option<u32>,
    pub surface: SurfaceSig,
    #[serde(default)]
    pub monodromy: MonodromyDoc,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonodromyDoc {
    #[serde(default)]
    pub word: Vec<TwistPower>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistPower {
    pub twist: String,
    #[serde(default = "one")]
    pub power: i64,
    /// Core curve class, for a twist outside the catalog.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homology: Option<Vec<i64>>,
    /// Images of generators, e.g. `{"alpha_1": "a1b1"}`; unlisted ones are fixed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi1: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi1_inverse: Option<BTreeMap<String, String>>,
}

fn one() -> i64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BraidDoc {
    #[serde(default)]
    pub schema: Option<u32>,
    pub strands: u32,
    #[serde(default)]
    pub word: Vec<BraidPower>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BraidPower {
    pub gen: String,
    #[serde(default = "one")]
    pub power: i64,
}

fn json_err(what: &str, e: serde_json::Error) -> Error {
    Error::parse(format!("{what}: line {}, column {}", e.line(), e.column()), e.to_string())
}

fn check_schema(what: &str, v: Option<u32>) -> Result<()> {
    match v {
        None | Some(SCHEMA_VERSION) => Ok(()),
        Some(v) => Err(Error::parse(what, format!("unsupported schema version {v}"))),
    }
}

fn endo(genus: u32, images: &BTreeMap<String, String>, label: &str) -> Result<FreeEndo> {
    let mut pairs = Vec::new();
    for (k, w) in images {
        let gen = match k.split_once('_') {
            Some(("alpha", i)) => i.parse().ok().map(Gen::Alpha),
            Some(("beta", i)) => i.parse().ok().map(Gen::Beta),
            _ => None,
        }
        .ok_or_else(|| Error::parse(format!("twist {label}"), format!("unknown generator {k:?}; use alpha_i or beta_i")))?;
        pairs.push((gen, w.parse::<FreeWord>()?));
    }
    FreeEndo::with_images(genus, &pairs)
}

impl OpenBookDoc {
    pub fn parse(s: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(s).map_err(|e| json_err("open book", e))?;
        check_schema("open book", doc.schema)?;
        doc.surface.validate()?;
        Ok(doc)
    }

    pub fn monodromy(&self) -> Result<MappingClass> {
        let sig = self.surface;
        let mut word = Vec::new();
        for tp in &self.monodromy.word {
            let gen = match &tp.homology {
                None => {
                    if tp.pi1.is_some() || tp.pi1_inverse.is_some() {
                        return Err(Error::parse(format!("twist {}", tp.twist), "pi1 given without homology"));
                    }
                    TwistGenerator::catalog(sig, &tp.twist)?
                }
                Some(h) => {
                    let class = AbsClass::new(sig, h.clone())?;
                    let pi1 = tp.pi1.as_ref().map(|m| endo(sig.genus, m, &tp.twist)).transpose()?;
                    let inv = tp.pi1_inverse.as_ref().map(|m| endo(sig.genus, m, &tp.twist)).transpose()?;
                    TwistGenerator::custom(&tp.twist, class, pi1, inv)?
                }
            };
            word.push((gen, tp.power));
        }
        MappingClass::from_word(sig, &word)
    }
}

impl BraidDoc {
    pub fn parse(s: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(s).map_err(|e| json_err("braid", e))?;
        check_schema("braid", doc.schema)?;
        Ok(doc)
    }

    /// The braid in an open book with page `sig`.
    pub fn braid(&self, sig: SurfaceSig) -> Result<BraidWord> {
        let letters = self
            .word
            .iter()
            .map(|bp| Ok((bp.gen.parse::<BraidGen>()?, bp.power)))
            .collect::<Result<Vec<_>>>()?;
        BraidWord::new(sig, self.strands, letters)
    }
}

/// Parse `"1,0,-2"` into coordinates.
pub fn parse_coords(s: &str) -> Result<Vec<i64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::parse("--a", format!("not an integer: {t:?}"))))
        .collect()
}
