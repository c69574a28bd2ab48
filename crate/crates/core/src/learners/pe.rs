use rand::RngCore;

use super::{check_alpha, topic_set, Learner, Prototypes, WordSummary};
use crate::error::Result;
use crate::space;
use crate::tutor::Word;
use crate::world::{Context, Object, ObjectId};

/// Prototype estimation: `p <- (1 - alpha) p + alpha * mean(T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeEstimation {
    alpha: f64,
    prototypes: Prototypes,
}

impl PrototypeEstimation {
    pub fn new(alpha: f64) -> Result<Self> {
        Ok(PrototypeEstimation {
            alpha: check_alpha(alpha)?,
            prototypes: Prototypes::new(),
        })
    }

    pub fn with_prototypes(alpha: f64, prototypes: Prototypes) -> Result<Self> {
        Ok(PrototypeEstimation {
            alpha: check_alpha(alpha)?,
            prototypes,
        })
    }

    pub fn prototypes(&self) -> &Prototypes {
        &self.prototypes
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Learner for PrototypeEstimation {
    fn observe(&mut self, context: &Context, word: Word, pointed: Option<&Object>) -> Result<()> {
        let topics = topic_set(context, pointed)?;
        let dims = topics.objects()[0].features.len();
        let target = space::centroid(topics.features(), dims);
        // An unseen word starts from p = 0 with alpha = 1, i.e. the target itself.
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
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(points: &[[f64; 3]]) -> Context {
        Context::new(
            points
                .iter()
                .enumerate()
                .map(|(i, p)| Object::new(i, p.to_vec()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn first_observation_takes_topic_set_mean() {
        let mut pe = PrototypeEstimation::new(0.05).unwrap();
        let c = ctx(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]);
        pe.observe(&c, Word(0), None).unwrap();
        assert_eq!(pe.prototypes().get(Word(0)).unwrap(), &[0.5, 0.5, 0.0]);
    }

    #[test]
    fn update_moves_prototype_by_alpha() {
        let mut protos = Prototypes::new();
        protos.set(Word(0), vec![0.0; 3]);
        let mut pe = PrototypeEstimation::with_prototypes(0.05, protos).unwrap();
        let c = ctx(&[[1.0; 3], [0.2, 0.3, 0.4]]);
        pe.observe(&c, Word(0), Some(&c.objects()[0])).unwrap();
        let p = pe.prototypes().get(Word(0)).unwrap();
        for x in p {
            assert!((x - 0.05).abs() < 1e-15);
        }
    }

    #[test]
    fn single_word_is_always_produced() {
        let mut pe = PrototypeEstimation::new(0.05).unwrap();
        let c = ctx(&[[0.1; 3], [0.9; 3], [0.5, 0.2, 0.7]]);
        pe.observe(&c, Word(4), Some(&c.objects()[1])).unwrap();
        for o in c.objects() {
            assert_eq!(pe.produce(&c, o), Some(Word(4)));
        }
    }

    #[test]
    fn interpret_picks_nearest_object_to_prototype() {
        let mut protos = Prototypes::new();
        protos.set(Word(0), vec![0.0; 3]);
        let pe = PrototypeEstimation::with_prototypes(0.05, protos).unwrap();
        let c = ctx(&[[0.1, 0.0, 0.0], [1.0; 3]]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(pe.interpret(&c, Word(0), &mut rng), Some(0));
        assert_eq!(pe.interpret(&c, Word(1), &mut rng), None);
    }
}
