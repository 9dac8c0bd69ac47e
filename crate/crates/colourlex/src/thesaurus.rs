//! Thesaurus categories: coarse senses grouping related words. An ambiguous
//! word is listed in more than one category.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThesaurusCategory {
    pub id: String,
    pub head: String,
    pub words: BTreeSet<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Thesaurus {
    categories: BTreeMap<String, ThesaurusCategory>,
    // word -> category ids containing it
    word_index: BTreeMap<String, BTreeSet<String>>,
}

impl Thesaurus {
    pub fn from_categories(categories: impl IntoIterator<Item = ThesaurusCategory>) -> Result<Self> {
        let mut out = Thesaurus::default();
        for category in categories {
            if category.words.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "category '{}' has no words",
                    category.id
                )));
            }
            if out.categories.contains_key(&category.id) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate category id '{}'",
                    category.id
                )));
            }
            for word in &category.words {
                out.word_index
                    .entry(word.clone())
                    .or_default()
                    .insert(category.id.clone());
            }
            out.categories.insert(category.id.clone(), category);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    /// Categories in id order.
    pub fn categories(&self) -> impl Iterator<Item = &ThesaurusCategory> {
        self.categories.values()
    }

    pub fn get(&self, id: &str) -> Option<&ThesaurusCategory> {
        self.categories.get(id)
    }

    pub fn categories_containing(&self, word: &str) -> impl Iterator<Item = &ThesaurusCategory> {
        self.word_index
            .get(word)
            .into_iter()
            .flat_map(|ids| ids.iter())
            .filter_map(|id| self.categories.get(id))
    }

    /// Whether two words share at least one category.
    pub fn co_categorized(&self, a: &str, b: &str) -> bool {
        self.categories_containing(a)
            .any(|category| category.words.contains(b))
    }

    /// Words usable as distractors for `word`: everything that does not share
    /// any category with it. Sorted for deterministic sampling.
    pub fn distractor_pool(&self, word: &str) -> Vec<&str> {
        let forbidden: BTreeSet<&str> = self
            .categories_containing(word)
            .flat_map(|category| category.words.iter().map(String::as_str))
            .chain(std::iter::once(word))
            .collect();
        self.word_index
            .keys()
            .map(String::as_str)
            .filter(|w| !forbidden.contains(w))
            .collect()
    }
}
