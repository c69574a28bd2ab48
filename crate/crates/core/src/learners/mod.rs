//! Learner algorithms and the shared observation/production/interpretation
//! interface.
//!
//! All four learners first reduce a training observation to a topic set:
//! the pointed object when the tutor pointed, otherwise the whole context.

mod ap;
mod cwp;
mod knn;
mod pe;
mod prototypes;

use std::fmt;
use std::str::FromStr;

use rand::RngCore;

pub use ap::AveragingPrototypes;
pub use cwp::CooccurrenceWeighted;
pub use knn::NearestNeighbors;
pub use pe::PrototypeEstimation;
pub use prototypes::Prototypes;

use crate::error::{Error, Result};
use crate::tutor::Word;
use crate::world::{Context, Object, ObjectId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    /// Averaging prototypes: exact mean over every stored sample.
    Ap,
    /// Co-occurrence weighted prototypes.
    Cwp,
    /// k-nearest-neighbour sample memory.
    Knn,
    /// Prototype estimation: recency-weighted centroid.
    Pe,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Knn, Algorithm::Pe, Algorithm::Ap, Algorithm::Cwp];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ap => "ap",
            Algorithm::Cwp => "cwp",
            Algorithm::Knn => "knn",
            Algorithm::Pe => "pe",
        }
    }

    pub fn is_prototype_based(self) -> bool {
        !matches!(self, Algorithm::Knn)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ap" => Ok(Algorithm::Ap),
            "cwp" => Ok(Algorithm::Cwp),
            "knn" => Ok(Algorithm::Knn),
            "pe" => Ok(Algorithm::Pe),
            other => Err(Error::invalid(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Candidate referents of a heard word.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicSet<'a> {
    objects: Vec<&'a Object>,
}

impl<'a> TopicSet<'a> {
    pub fn objects(&self) -> &[&'a Object] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn features(&self) -> impl Iterator<Item = &'a [f64]> + '_ {
        self.objects.iter().map(|o| o.features.as_slice())
    }
}

/// `{pointed}` when the tutor pointed, otherwise the whole context.
pub fn topic_set<'a>(context: &'a Context, pointed: Option<&Object>) -> Result<TopicSet<'a>> {
    let objects = match pointed {
        Some(p) => {
            let member = context.get(p.id).ok_or_else(|| {
                Error::invalid(format!("pointed object {} is not in the context", p.id))
            })?;
            vec![member]
        }
        None => context.objects().iter().collect(),
    };
    Ok(TopicSet { objects })
}

/// Per-word digest of a learner's state, for end-of-run dumps.
#[derive(Debug, Clone, PartialEq)]
pub struct WordSummary {
    pub word: Word,
    /// Stored samples for the word, where the learner keeps samples.
    pub samples: Option<usize>,
    pub prototype: Option<Vec<f64>>,
}

pub trait Learner {
    /// Updates the learner from one training interaction.
    fn observe(&mut self, context: &Context, word: Word, pointed: Option<&Object>) -> Result<()>;

    /// Word for `topic`, or `None` when the learner knows no words yet.
    fn produce(&self, context: &Context, topic: &Object) -> Option<Word>;

    /// Context object the learner takes `word` to refer to, if any.
    fn interpret(&self, context: &Context, word: Word, rng: &mut dyn RngCore) -> Option<ObjectId>;

    fn summary(&self) -> Vec<WordSummary>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnerParams {
    pub alpha: f64,
    pub k: usize,
}

impl Default for LearnerParams {
    fn default() -> Self {
        LearnerParams { alpha: 0.05, k: 30 }
    }
}

/// Any of the four learners behind one concrete type.
#[derive(Debug, Clone, PartialEq)]
pub enum LearnerState {
    Knn(NearestNeighbors),
    Pe(PrototypeEstimation),
    Ap(AveragingPrototypes),
    Cwp(CooccurrenceWeighted),
}

impl LearnerState {
    pub fn new(algorithm: Algorithm, params: LearnerParams) -> Result<Self> {
        Ok(match algorithm {
            Algorithm::Knn => LearnerState::Knn(NearestNeighbors::new(params.k)?),
            Algorithm::Pe => LearnerState::Pe(PrototypeEstimation::new(params.alpha)?),
            Algorithm::Ap => LearnerState::Ap(AveragingPrototypes::new()),
            Algorithm::Cwp => LearnerState::Cwp(CooccurrenceWeighted::new(params.alpha)?),
        })
    }

    pub fn algorithm(&self) -> Algorithm {
        match self {
            LearnerState::Knn(_) => Algorithm::Knn,
            LearnerState::Pe(_) => Algorithm::Pe,
            LearnerState::Ap(_) => Algorithm::Ap,
            LearnerState::Cwp(_) => Algorithm::Cwp,
        }
    }

    fn inner(&self) -> &dyn Learner {
        match self {
            LearnerState::Knn(l) => l,
            LearnerState::Pe(l) => l,
            LearnerState::Ap(l) => l,
            LearnerState::Cwp(l) => l,
        }
    }

    fn inner_mut(&mut self) -> &mut dyn Learner {
        match self {
            LearnerState::Knn(l) => l,
            LearnerState::Pe(l) => l,
            LearnerState::Ap(l) => l,
            LearnerState::Cwp(l) => l,
        }
    }
}

impl Learner for LearnerState {
    fn observe(&mut self, context: &Context, word: Word, pointed: Option<&Object>) -> Result<()> {
        self.inner_mut().observe(context, word, pointed)
    }

    fn produce(&self, context: &Context, topic: &Object) -> Option<Word> {
        self.inner().produce(context, topic)
    }

    fn interpret(&self, context: &Context, word: Word, rng: &mut dyn RngCore) -> Option<ObjectId> {
        self.inner().interpret(context, word, rng)
    }

    fn summary(&self) -> Vec<WordSummary> {
        self.inner().summary()
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(alpha)
    } else {
        Err(Error::invalid(format!(
            "learning rate {alpha} outside [0, 1]"
        )))
    }
}
