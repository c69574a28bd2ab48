//! Simulation of lexicon acquisition between a prototype-based tutor and a
//! learner under interactive, cross-situational and mixed feedback.
//!
//! A [`world::World`] holds a pool of objects in the unit cube. The
//! [`tutor::TutorLexicon`] names topics drawn from random contexts, pointing
//! at the topic with probability `f`. One of four [`learners`] builds its
//! own lexicon from those observations, and [`experiment`] measures
//! communicative success over training.

pub mod cli;
pub mod error;
pub mod experiment;
pub mod learners;
pub mod protocol;
pub mod seeds;
pub mod space;
pub mod stats;
pub mod tutor;
pub mod world;

pub use error::{Error, Result};
