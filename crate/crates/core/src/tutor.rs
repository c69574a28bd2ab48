//! The tutor: a fixed prototype lexicon with two production strategies and
//! nearest-object interpretation.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::space;
use crate::world::{Context, Object, ObjectId};

/// Opaque word token. Rendered as `w<index>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub u32);

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}", self.0)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.strip_prefix('w')
            .and_then(|n| n.parse().ok())
            .map(Word)
            .ok_or_else(|| Error::invalid(format!("malformed word token `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProductionStrategy {
    /// Nearest prototype to the topic, ignoring the rest of the context.
    Descriptive,
    /// Prototype closest to the topic and farthest from the nearest distractor.
    Discriminative,
}

impl ProductionStrategy {
    pub const ALL: [ProductionStrategy; 2] = [
        ProductionStrategy::Descriptive,
        ProductionStrategy::Discriminative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProductionStrategy::Descriptive => "descriptive",
            ProductionStrategy::Discriminative => "discriminative",
        }
    }
}

impl fmt::Display for ProductionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProductionStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "descriptive" => Ok(ProductionStrategy::Descriptive),
            "discriminative" => Ok(ProductionStrategy::Discriminative),
            other => Err(Error::invalid(format!(
                "unknown production strategy `{other}`"
            ))),
        }
    }
}

/// Bijective word/prototype table. Lexicon index order is the tie-break
/// order for production.
#[derive(Debug, Clone, PartialEq)]
pub struct TutorLexicon {
    entries: Vec<(Word, Vec<f64>)>,
}

impl TutorLexicon {
    /// `t` words `w0..w{t-1}` with prototypes uniform on the unit cube.
    pub fn generate<R: Rng + ?Sized>(t: usize, dims: usize, rng: &mut R) -> Result<Self> {
        if t == 0 {
            return Err(Error::invalid("tutor lexicon size must be at least 1"));
        }
        if dims == 0 {
            return Err(Error::invalid("feature dimension must be at least 1"));
        }
        let entries = (0..t)
            .map(|i| {
                (
                    Word(i as u32),
                    (0..dims).map(|_| rng.gen::<f64>()).collect(),
                )
            })
            .collect();
        Ok(TutorLexicon { entries })
    }

    /// Lexicon over explicit prototypes, named `w0, w1, ...` in order.
    pub fn from_prototypes(prototypes: Vec<Vec<f64>>) -> Result<Self> {
        if prototypes.is_empty() {
            return Err(Error::invalid("tutor lexicon must not be empty"));
        }
        Ok(TutorLexicon {
            entries: prototypes
                .into_iter()
                .enumerate()
                .map(|(i, p)| (Word(i as u32), p))
                .collect(),
        })
    }

    pub fn entries(&self) -> &[(Word, Vec<f64>)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn prototype(&self, word: Word) -> Option<&[f64]> {
        self.entries
            .iter()
            .find(|(w, _)| *w == word)
            .map(|(_, p)| p.as_slice())
    }

    fn candidates(&self) -> impl Iterator<Item = (Word, &[f64])> {
        self.entries.iter().map(|(w, p)| (*w, p.as_slice()))
    }

    /// The discriminative choice together with its score. The score is
    /// `None` when the context holds only the topic, in which case the
    /// choice is the descriptive one.
    pub fn discriminative_choice(
        &self,
        context: &Context,
        topic: &Object,
    ) -> Result<(Word, Option<f64>)> {
        if !context.contains(topic.id) {
            return Err(Error::invalid(format!(
                "topic {} is not in the context",
                topic.id
            )));
        }
        let distractors = context.others(topic.id);
        space::most_discriminative(self.candidates(), &topic.features, &distractors)
            .ok_or_else(|| Error::invalid("tutor lexicon is empty"))
    }

    pub fn produce_discriminative(&self, context: &Context, topic: &Object) -> Result<Word> {
        self.discriminative_choice(context, topic).map(|(w, _)| w)
    }

    pub fn produce_descriptive(&self, topic: &Object) -> Result<Word> {
        space::nearest(self.candidates(), &topic.features)
            .ok_or_else(|| Error::invalid("tutor lexicon is empty"))
    }

    pub fn produce(
        &self,
        strategy: ProductionStrategy,
        context: &Context,
        topic: &Object,
    ) -> Result<Word> {
        match strategy {
            ProductionStrategy::Descriptive => {
                if !context.contains(topic.id) {
                    return Err(Error::invalid(format!(
                        "topic {} is not in the context",
                        topic.id
                    )));
                }
                self.produce_descriptive(topic)
            }
            ProductionStrategy::Discriminative => self.produce_discriminative(context, topic),
        }
    }

    /// Context object nearest to the word's prototype.
    pub fn interpret(&self, context: &Context, word: Word) -> Result<ObjectId> {
        let proto = self.prototype(word).ok_or(Error::UnknownWord(word))?;
        Ok(context.nearest_to(proto).id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_corner_lexicon() -> TutorLexicon {
        TutorLexicon::from_prototypes(vec![vec![0.0; 3], vec![1.0; 3]]).unwrap()
    }

    fn obj(id: usize, x: [f64; 3]) -> Object {
        Object::new(id, x.to_vec())
    }

    #[test]
    fn generated_lexicon_has_distinct_words_in_cube() {
        let lex = TutorLexicon::generate(50, 3, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(lex.len(), 50);
        let mut words: Vec<_> = lex.entries().iter().map(|(w, _)| *w).collect();
        words.dedup();
        assert_eq!(words.len(), 50);
        assert!(lex
            .entries()
            .iter()
            .all(|(_, p)| p.len() == 3 && p.iter().all(|x| (0.0..=1.0).contains(x))));
        let again = TutorLexicon::generate(50, 3, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(lex, again);
        let single = TutorLexicon::generate(1, 3, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(single.len(), 1);
        assert!(TutorLexicon::generate(0, 3, &mut ChaCha8Rng::seed_from_u64(5)).is_err());
    }

    #[test]
    fn discriminative_picks_corner_nearest_topic() {
        let lex = two_corner_lexicon();
        let a = obj(0, [0.1; 3]);
        let b = obj(1, [0.9; 3]);
        let ctx = Context::new(vec![a.clone(), b.clone()]).unwrap();
        let (w, score) = lex.discriminative_choice(&ctx, &a).unwrap();
        assert_eq!(w, Word(0));
        // d(p1,b) - d(p1,a) = sqrt(3) * (0.9 - 0.1)
        let expected = 3f64.sqrt() * 0.9 - 3f64.sqrt() * 0.1;
        assert!((score.unwrap() - expected).abs() < 1e-12);
        assert!((expected - 1.386).abs() < 1e-3);
        assert_eq!(lex.produce_discriminative(&ctx, &b).unwrap(), Word(1));
    }

    #[test]
    fn discriminative_rejects_topic_outside_context() {
        let lex = two_corner_lexicon();
        let ctx = Context::new(vec![obj(0, [0.1; 3]), obj(1, [0.9; 3])]).unwrap();
        let err = lex.produce_discriminative(&ctx, &obj(7, [0.5; 3]));
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn singleton_lexicon_always_answers_its_word() {
        let lex = TutorLexicon::from_prototypes(vec![vec![0.3, 0.3, 0.3]]).unwrap();
        let ctx = Context::new(vec![obj(0, [0.1; 3]), obj(1, [0.9; 3]), obj(2, [0.5; 3])]).unwrap();
        for o in ctx.objects() {
            assert_eq!(lex.produce_discriminative(&ctx, o).unwrap(), Word(0));
        }
    }

    #[test]
    fn discriminative_on_singleton_context_is_descriptive() {
        let lex = two_corner_lexicon();
        let t = obj(0, [0.8, 0.8, 0.8]);
        let ctx = Context::new(vec![t.clone()]).unwrap();
        assert_eq!(
            lex.discriminative_choice(&ctx, &t).unwrap(),
            (Word(1), None)
        );
    }

    #[test]
    fn descriptive_picks_nearest_prototype() {
        let lex = two_corner_lexicon();
        // d = 0.2 to p1 versus sqrt(0.8^2 + 1 + 1) ~ 1.562 to p2
        assert_eq!(
            lex.produce_descriptive(&obj(0, [0.2, 0.0, 0.0])).unwrap(),
            Word(0)
        );
        assert_eq!(lex.produce_descriptive(&obj(0, [1.0; 3])).unwrap(), Word(1));
    }

    #[test]
    fn descriptive_ignores_context() {
        let lex = TutorLexicon::generate(50, 3, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        let topic = obj(3, [0.4, 0.6, 0.2]);
        let c1 = Context::new(vec![topic.clone(), obj(1, [0.41, 0.6, 0.2])]).unwrap();
        let c2 = Context::new(vec![obj(9, [0.9, 0.1, 0.0]), topic.clone()]).unwrap();
        let w1 = lex
            .produce(ProductionStrategy::Descriptive, &c1, &topic)
            .unwrap();
        let w2 = lex
            .produce(ProductionStrategy::Descriptive, &c2, &topic)
            .unwrap();
        assert_eq!(w1, w2);
    }

    #[test]
    fn interpret_returns_nearest_context_object() {
        let lex = TutorLexicon::from_prototypes(vec![vec![0.5; 3]]).unwrap();
        let ctx = Context::new(vec![obj(0, [0.0; 3]), obj(1, [0.6, 0.5, 0.5])]).unwrap();
        assert_eq!(lex.interpret(&ctx, Word(0)).unwrap(), 1);
        let single = Context::new(vec![obj(4, [0.0; 3])]).unwrap();
        assert_eq!(lex.interpret(&single, Word(0)).unwrap(), 4);
        let exact = Context::new(vec![obj(0, [0.4; 3]), obj(1, [0.5; 3])]).unwrap();
        assert_eq!(lex.interpret(&exact, Word(0)).unwrap(), 1);
    }

    #[test]
    fn interpret_unknown_word_is_an_error() {
        let lex = two_corner_lexicon();
        let ctx = Context::new(vec![obj(0, [0.0; 3])]).unwrap();
        assert!(matches!(
            lex.interpret(&ctx, Word(9)),
            Err(Error::UnknownWord(Word(9)))
        ));
    }

    #[test]
    fn word_tokens_parse_back() {
        assert_eq!("w17".parse::<Word>().unwrap(), Word(17));
        assert!("x17".parse::<Word>().is_err());
        assert_eq!(Word(3).to_string(), "w3");
    }
}
