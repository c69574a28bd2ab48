use std::collections::BTreeMap;

use crate::space;
use crate::tutor::{TutorLexicon, Word};
use crate::world::{Context, Object, ObjectId};

/// Word-to-prototype table with the tutor's production and interpretation
/// rules applied to it. Ties go to the smallest word.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Prototypes {
    map: BTreeMap<Word, Vec<f64>>,
}

impl Prototypes {
    pub fn new() -> Self {
        Self::default()
    }

    /// A verbatim copy of the tutor's lexicon.
    pub fn from_lexicon(lexicon: &TutorLexicon) -> Self {
        Prototypes {
            map: lexicon.entries().iter().cloned().collect(),
        }
    }

    pub fn get(&self, word: Word) -> Option<&[f64]> {
        self.map.get(&word).map(Vec::as_slice)
    }

    pub fn set(&mut self, word: Word, prototype: Vec<f64>) {
        self.map.insert(word, prototype);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Word, &[f64])> {
        self.map.iter().map(|(w, p)| (*w, p.as_slice()))
    }

    /// Discriminative production; a singleton context degrades to the
    /// nearest prototype.
    pub fn produce(&self, context: &Context, topic: &Object) -> Option<Word> {
        let distractors = context.others(topic.id);
        space::most_discriminative(self.iter(), &topic.features, &distractors).map(|(w, _)| w)
    }

    pub fn interpret(&self, context: &Context, word: Word) -> Option<ObjectId> {
        self.get(word).map(|p| context.nearest_to(p).id)
    }
}
