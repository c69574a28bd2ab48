//! Single training and testing interactions between the tutor and a learner.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::learners::Learner;
use crate::tutor::{ProductionStrategy, TutorLexicon, Word};
use crate::world::{Context, ObjectId, World};

/// Per-interaction pointing probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackPolicy {
    f: f64,
}

impl FeedbackPolicy {
    pub fn new(f: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&f) {
            Ok(FeedbackPolicy { f })
        } else {
            Err(Error::invalid(format!(
                "pointing frequency {f} outside [0, 1]"
            )))
        }
    }

    pub fn interactive() -> Self {
        FeedbackPolicy { f: 1.0 }
    }

    pub fn cross_situational() -> Self {
        FeedbackPolicy { f: 0.0 }
    }

    pub fn frequency(self) -> f64 {
        self.f
    }
}

/// One Bernoulli(f) draw: does the tutor point at the topic?
pub fn draw_pointing<R: Rng + ?Sized>(policy: FeedbackPolicy, rng: &mut R) -> bool {
    rng.gen_bool(policy.f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Training,
    Testing,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Training => "training",
            Phase::Testing => "testing",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Tutor,
    Learner,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Tutor => "tutor",
            Role::Learner => "learner",
        })
    }
}

/// Record of a single interaction.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionOutcome {
    pub phase: Phase,
    pub speaker: Role,
    pub context: Vec<ObjectId>,
    pub topic: ObjectId,
    /// `None` only when a learner speaker knew no word.
    pub word: Option<Word>,
    pub pointing: bool,
    /// Hearer's interpretation; testing only.
    pub hearer_choice: Option<ObjectId>,
    /// `Some(topic == hearer_choice)` for testing, `None` for training.
    pub success: Option<bool>,
}

/// The fixed parts of an interaction: world, tutor and how the tutor talks.
#[derive(Debug, Clone, Copy)]
pub struct Environment<'a> {
    pub world: &'a World,
    pub tutor: &'a TutorLexicon,
    pub context_size: usize,
    pub strategy: ProductionStrategy,
}

impl<'a> Environment<'a> {
    pub fn new(
        world: &'a World,
        tutor: &'a TutorLexicon,
        context_size: usize,
        strategy: ProductionStrategy,
    ) -> Self {
        Environment {
            world,
            tutor,
            context_size,
            strategy,
        }
    }

    fn context_and_topic<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Context, usize)> {
        let context = self.world.sample_context(self.context_size, rng)?;
        let topic = rng.gen_range(0..context.len());
        Ok((context, topic))
    }

    /// Tutor names a random topic; the learner observes the word, the
    /// context and, with probability f, pointing at the topic.
    pub fn train<L, R>(
        &self,
        learner: &mut L,
        policy: FeedbackPolicy,
        rng: &mut R,
    ) -> Result<InteractionOutcome>
    where
        L: Learner + ?Sized,
        R: Rng,
    {
        let (context, t) = self.context_and_topic(rng)?;
        let topic = &context.objects()[t];
        let word = self.tutor.produce(self.strategy, &context, topic)?;
        let pointing = draw_pointing(policy, rng);
        learner.observe(&context, word, pointing.then_some(topic))?;
        Ok(InteractionOutcome {
            phase: Phase::Training,
            speaker: Role::Tutor,
            context: context.ids(),
            topic: topic.id,
            word: Some(word),
            pointing,
            hearer_choice: None,
            success: None,
        })
    }

    /// A measurement interaction with roles assigned by a fair coin. The
    /// learner is only borrowed immutably.
    pub fn test<L, R>(&self, learner: &L, rng: &mut R) -> Result<InteractionOutcome>
    where
        L: Learner + ?Sized,
        R: Rng,
    {
        let speaker = if rng.gen_bool(0.5) {
            Role::Learner
        } else {
            Role::Tutor
        };
        let (context, t) = self.context_and_topic(rng)?;
        let topic = &context.objects()[t];
        let (word, hearer_choice) = match speaker {
            Role::Learner => {
                let word = learner.produce(&context, topic);
                let choice = word
                    .map(|w| self.tutor.interpret(&context, w))
                    .transpose()?;
                (word, choice)
            }
            Role::Tutor => {
                let word = self.tutor.produce(self.strategy, &context, topic)?;
                (Some(word), learner.interpret(&context, word, rng))
            }
        };
        Ok(InteractionOutcome {
            phase: Phase::Testing,
            speaker,
            context: context.ids(),
            topic: topic.id,
            word,
            pointing: false,
            hearer_choice,
            success: Some(hearer_choice == Some(topic.id)),
        })
    }
}
