use std::collections::HashMap;

use rand::RngCore;

use super::{check_alpha, topic_set, Learner, Prototypes, WordSummary};
use crate::error::Result;
use crate::tutor::Word;
use crate::world::{Context, Object, ObjectId};

/// Co-occurrence weighted prototypes. Each update target is the topic set
/// weighted by how often each member has co-occurred with the word,
/// counting the current interaction.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceWeighted {
    alpha: f64,
    prototypes: Prototypes,
    counts: HashMap<(Word, ObjectId), u64>,
}

impl CooccurrenceWeighted {
    pub fn new(alpha: f64) -> Result<Self> {
        Ok(CooccurrenceWeighted {
            alpha: check_alpha(alpha)?,
            prototypes: Prototypes::new(),
            counts: HashMap::new(),
        })
    }

    pub fn prototypes(&self) -> &Prototypes {
        &self.prototypes
    }

    pub fn count(&self, word: Word, object: ObjectId) -> u64 {
        self.counts.get(&(word, object)).copied().unwrap_or(0)
    }

    /// Normalised co-occurrence weights of `objects` for `word`, in order.
    pub fn weights(&self, word: Word, objects: &[ObjectId]) -> Vec<f64> {
        let total: u64 = objects.iter().map(|&o| self.count(word, o)).sum();
        objects
            .iter()
            .map(|&o| self.count(word, o) as f64 / total as f64)
            .collect()
    }
}

impl Learner for CooccurrenceWeighted {
    fn observe(&mut self, context: &Context, word: Word, pointed: Option<&Object>) -> Result<()> {
        let topics = topic_set(context, pointed)?;
        let ids: Vec<ObjectId> = topics.objects().iter().map(|o| o.id).collect();
        for &id in &ids {
            *self.counts.entry((word, id)).or_insert(0) += 1;
        }
        let betas = self.weights(word, &ids);
        let dims = topics.objects()[0].features.len();
        let mut target = vec![0.0; dims];
        for (beta, f) in betas.iter().zip(topics.features()) {
            target.iter_mut().zip(f).for_each(|(t, x)| *t += beta * x);
        }
        let updated = match self.prototypes.get(word) {
            Some(p) => p
                .iter()
                .zip(&target)
                .map(|(old, t)| (1.0 - self.alpha) * old + self.alpha * t)
                .collect(),
            None => target,
        };
        self.prototypes.set(word, updated);
        Ok(())
    }

    fn produce(&self, context: &Context, topic: &Object) -> Option<Word> {
        self.prototypes.produce(context, topic)
    }

    fn interpret(&self, context: &Context, word: Word, _rng: &mut dyn RngCore) -> Option<ObjectId> {
        self.prototypes.interpret(context, word)
    }

    fn summary(&self) -> Vec<WordSummary> {
        self.prototypes
            .iter()
            .map(|(word, p)| WordSummary {
                word,
                samples: None,
                prototype: Some(p.to_vec()),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_observation_weights_evenly() {
        let mut cwp = CooccurrenceWeighted::new(0.05).unwrap();
        let c = Context::new(vec![
            Object::new(1, vec![0.0; 3]),
            Object::new(2, vec![1.0; 3]),
        ])
        .unwrap();
        cwp.observe(&c, Word(0), None).unwrap();
        assert_eq!(cwp.count(Word(0), 1), 1);
        assert_eq!(cwp.count(Word(0), 2), 1);
        assert_eq!(cwp.weights(Word(0), &[1, 2]), vec![0.5, 0.5]);
        assert_eq!(cwp.prototypes().get(Word(0)).unwrap(), &[0.5, 0.5, 0.5]);
    }

    #[test]
    fn frequent_cooccurrence_dominates_update() {
        let mut cwp = CooccurrenceWeighted::new(0.5).unwrap();
        let a = Object::new(0, vec![0.0; 3]);
        let b = Object::new(1, vec![1.0; 3]);
        let c = Object::new(2, vec![0.5; 3]);
        let ab = Context::new(vec![a.clone(), b.clone()]).unwrap();
        let ac = Context::new(vec![a.clone(), c]).unwrap();
        cwp.observe(&ab, Word(0), None).unwrap();
        cwp.observe(&ac, Word(0), None).unwrap();
        // counts now a=2, c=1: target = 2/3 * a + 1/3 * c
        assert_eq!(cwp.weights(Word(0), &[0, 2]), vec![2.0 / 3.0, 1.0 / 3.0]);
        let p = cwp.prototypes().get(Word(0)).unwrap();
        let expected = 0.5 * 0.5 + 0.5 * (0.5 / 3.0);
        assert!((p[0] - expected).abs() < 1e-15);
        assert_eq!(cwp.count(Word(1), 0), 0);
    }
}
