//! Plat presentations shipped with the crate, uncoloured.

use serde::Deserialize;

use crate::braid::{ColoredBraidWord, Letter};
use crate::error::{Error, Result};

const LINKS_JSON: &str = include_str!("../data/links.json");

#[derive(Debug, Clone, Deserialize)]
pub struct LibraryEntry {
    pub name: String,
    pub components: usize,
    pub strands: usize,
    orient: Vec<String>,
    word: Vec<(usize, i8)>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Library {
    pub version: String,
    pub links: Vec<LibraryEntry>,
}

impl Library {
    pub fn get(&self, name: &str) -> Result<&LibraryEntry> {
        self.links
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::Parse(format!("no link named {name:?} in library {}", self.version)))
    }
}

/// The bundled library.
pub fn library() -> Library {
    serde_json::from_str(LINKS_JSON).expect("bundled link library parses")
}

impl LibraryEntry {
    fn orient(&self) -> Vec<i8> {
        self.orient.iter().map(|s| if s == "+" { 1 } else { -1 }).collect()
    }

    fn letters(&self) -> Vec<Letter> {
        self.word.iter().map(|&(i, s)| Letter::new(i, s)).collect()
    }

    /// Every strand carries the same spin.
    pub fn word(&self, twice: u32) -> Result<ColoredBraidWord> {
        ColoredBraidWord::plat(vec![twice; self.strands], self.orient(), self.letters())
    }

    /// One spin per component, in component order.
    pub fn word_colored(&self, per_component: &[u32]) -> Result<ColoredBraidWord> {
        let base = self.word(0)?;
        recolor(&base, per_component)
    }
}

/// Same diagram with component c carrying spin `per_component[c]`.
pub fn recolor(word: &ColoredBraidWord, per_component: &[u32]) -> Result<ColoredBraidWord> {
    let comps = word.components();
    if per_component.len() != comps.n_components {
        return Err(Error::Range(format!("{} colours given for {} components", per_component.len(), comps.n_components)));
    }
    let colors = comps.component_of.iter().map(|&c| per_component[c]).collect();
    let w = ColoredBraidWord::plat(colors, word.orient().to_vec(), word.letters().to_vec())?;
    match word.framings() {
        Some(f) => w.with_framings(f.to_vec()),
        None => Ok(w),
    }
}
