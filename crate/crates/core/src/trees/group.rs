use std::collections::BTreeMap;

use super::automaton::{SigmaAutomaton, Vertex};
use crate::error::{Error, Result};
use crate::symbol::split_word;

/// Rewrites words over a source alphabet `X` into words over the group's
/// generators, letter by letter.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneratorMap {
    pub images: BTreeMap<String, Vec<String>>,
}

impl GeneratorMap {
    pub fn identity<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        GeneratorMap {
            images: names.into_iter().map(|n| (n.to_string(), vec![n.to_string()])).collect(),
        }
    }

    /// Concatenates the images of the letters of `w`.
    pub fn apply(&self, w: &[String]) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for x in w {
            let img = self.images.get(x).ok_or_else(|| Error::Alphabet(x.clone()))?;
            out.extend(img.iter().cloned());
        }
        Ok(out)
    }

    /// Splits text into source letters (see [`split_word`]).
    pub fn word(&self, text: &str) -> Vec<String> {
        split_word(text, |n| self.images.contains_key(n))
    }
}

/// A Σ-automaton with named generators, their declared inverses, and an
/// optional map from another generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    automaton: SigmaAutomaton,
    generators: BTreeMap<String, Vertex>,
    inverses: BTreeMap<String, String>,
    map: Option<GeneratorMap>,
}

impl Group {
    /// Validates generator names and declared inverses; each declared pair
    /// must compose to the identity.
    pub fn new(
        automaton: SigmaAutomaton,
        generators: BTreeMap<String, String>,
        inverses: BTreeMap<String, String>,
        map: Option<GeneratorMap>,
    ) -> Result<Self> {
        let generators = generators
            .into_iter()
            .map(|(g, s)| {
                let v = automaton
                    .state(&s)
                    .map_err(|_| Error::schema(format!("generators.{g}"), format!("unknown state `{s}`")))?;
                Ok((g, v))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        for (g, h) in &inverses {
            let (Some(&x), Some(&y)) = (generators.get(g), generators.get(h)) else {
                return Err(Error::schema(format!("inverses.{g}"), "names must be generators"));
            };
            if !automaton.is_trivial(&[x, y]) {
                return Err(Error::schema(
                    format!("inverses.{g}"),
                    format!("`{g} {h}` is not the identity"),
                ));
            }
        }
        if let Some(m) = &map {
            for (x, img) in &m.images {
                if let Some(y) = img.iter().find(|y| !generators.contains_key(*y)) {
                    return Err(Error::schema(format!("map.{x}"), format!("`{y}` is not a generator")));
                }
            }
        }
        Ok(Group {
            automaton,
            generators,
            inverses,
            map,
        })
    }

    pub fn automaton(&self) -> &SigmaAutomaton {
        &self.automaton
    }

    pub fn generators(&self) -> &BTreeMap<String, Vertex> {
        &self.generators
    }

    pub fn inverses(&self) -> &BTreeMap<String, String> {
        &self.inverses
    }

    pub fn map(&self) -> Option<&GeneratorMap> {
        self.map.as_ref()
    }

    pub fn generator(&self, name: &str) -> Result<Vertex> {
        self.generators
            .get(name)
            .copied()
            .ok_or_else(|| Error::Alphabet(name.to_string()))
    }

    /// Every generator has a declared inverse.
    pub fn check_symmetric(&self) -> Result<()> {
        match self.generators.keys().find(|g| !self.inverses.contains_key(*g)) {
            Some(g) => Err(Error::Symmetry(g.clone())),
            None => Ok(()),
        }
    }

    /// Splits text into generator names.
    pub fn names(&self, text: &str) -> Vec<String> {
        split_word(text, |n| self.generators.contains_key(n))
    }

    /// Parses a word of generator names into automaton states.
    pub fn word(&self, text: &str) -> Result<Vec<Vertex>> {
        self.names(text).iter().map(|n| self.generator(n)).collect()
    }

    /// States for a word of generator names.
    pub fn resolve(&self, names: &[String]) -> Result<Vec<Vertex>> {
        names.iter().map(|n| self.generator(n)).collect()
    }
}
