use std::collections::BTreeMap;

use rand::RngCore;

use super::{topic_set, Learner, Prototypes, WordSummary};
use crate::error::Result;
use crate::tutor::Word;
use crate::world::{Context, Object, ObjectId};

/// Averaging prototypes: every sample ever seen with a word is kept and the
/// prototype is their mean.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AveragingPrototypes {
    samples: BTreeMap<Word, SampleList>,
    prototypes: Prototypes,
}

#[derive(Debug, Clone, PartialEq)]
struct SampleList {
    points: Vec<Vec<f64>>,
    sum: Vec<f64>,
}

impl AveragingPrototypes {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn samples(&self, word: Word) -> Option<&[Vec<f64>]> {
        self.samples.get(&word).map(|s| s.points.as_slice())
    }

    pub fn prototypes(&self) -> &Prototypes {
        &self.prototypes
    }
}

impl Learner for AveragingPrototypes {
    fn observe(&mut self, context: &Context, word: Word, pointed: Option<&Object>) -> Result<()> {
        let topics = topic_set(context, pointed)?;
        let dims = topics.objects()[0].features.len();
        let list = self.samples.entry(word).or_insert_with(|| SampleList {
            points: Vec::new(),
            sum: vec![0.0; dims],
        });
        for f in topics.features() {
            list.points.push(f.to_vec());
            list.sum.iter_mut().zip(f).for_each(|(s, x)| *s += x);
        }
        // Sequential running sum: the same summation order as recomputing
        // the mean over `points` from scratch.
        let n = list.points.len() as f64;
        self.prototypes
            .set(word, list.sum.iter().map(|s| s / n).collect());
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
                samples: self.samples(word).map(<[_]>::len),
                prototype: Some(p.to_vec()),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concatenates_topic_set_and_averages() {
        let mut ap = AveragingPrototypes::new();
        let first = Context::new(vec![
            Object::new(0, vec![0.0; 3]),
            Object::new(5, vec![0.7; 3]),
        ])
        .unwrap();
        ap.observe(&first, Word(0), Some(&first.objects()[0]))
            .unwrap();
        assert_eq!(ap.samples(Word(0)).unwrap().len(), 1);

        let second = Context::new(vec![
            Object::new(1, vec![1.0; 3]),
            Object::new(2, vec![1.0; 3]),
        ])
        .unwrap();
        ap.observe(&second, Word(0), None).unwrap();
        assert_eq!(ap.samples(Word(0)).unwrap().len(), 3);
        for x in ap.prototypes().get(Word(0)).unwrap() {
            assert!((x - 2.0 / 3.0).abs() < 1e-15);
        }
    }
}
