use std::collections::{BTreeMap, HashMap};

use rand::{Rng, RngCore};

use super::{topic_set, Learner, WordSummary};
use crate::error::{Error, Result};
use crate::tutor::Word;
use crate::world::{Context, Object, ObjectId};

/// k-nearest-neighbour learner over an append-only sample memory.
///
/// A pointed topic is stored once per context member so that it carries
/// the same total vote mass as an unpointed context.
///
/// Voting ties go to the word whose contributing neighbours have the
/// smallest summed distance, then to the word learned first. Distance ties
/// between samples go to the earlier insertion.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestNeighbors {
    k: usize,
    dims: usize,
    labels: Vec<Word>,
    // Row-major, `dims` coordinates per sample.
    features: Vec<f64>,
    learned_rank: HashMap<Word, usize>,
}

impl NearestNeighbors {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        Ok(NearestNeighbors {
            k,
            dims: 0,
            labels: Vec::new(),
            features: Vec::new(),
            learned_rank: HashMap::new(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The `i`-th stored sample.
    pub fn sample(&self, i: usize) -> Option<(Word, &[f64])> {
        let label = *self.labels.get(i)?;
        Some((label, &self.features[i * self.dims..(i + 1) * self.dims]))
    }

    fn push(&mut self, word: Word, features: &[f64]) {
        if self.dims == 0 {
            self.dims = features.len();
        }
        let next_rank = self.learned_rank.len();
        self.learned_rank.entry(word).or_insert(next_rank);
        self.labels.push(word);
        self.features.extend_from_slice(features);
    }

    /// Majority word among the `min(k, len)` nearest stored samples.
    pub fn classify(&self, point: &[f64]) -> Option<Word> {
        if self.is_empty() {
            return None;
        }
        let by_distance =
            |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        let mut scored: Vec<(f64, usize)> = self
            .features
            .chunks_exact(self.dims)
            .enumerate()
            .map(|(i, f)| (squared_distance(f, point), i))
            .collect();
        let k = self.k.min(scored.len());
        if k < scored.len() {
            scored.select_nth_unstable_by(k - 1, by_distance);
            scored.truncate(k);
        }

        // word -> (votes, summed distance)
        let mut tally: BTreeMap<Word, (usize, f64)> = BTreeMap::new();
        for &(d2, i) in &scored {
            let entry = tally.entry(self.labels[i]).or_insert((0, 0.0));
            entry.0 += 1;
            entry.1 += d2.sqrt();
        }
        tally
            .into_iter()
            .min_by(|(wa, (va, da)), (wb, (vb, db))| {
                vb.cmp(va)
                    .then(da.total_cmp(db))
                    .then_with(|| self.learned_rank[wa].cmp(&self.learned_rank[wb]))
            })
            .map(|(w, _)| w)
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl Learner for NearestNeighbors {
    fn observe(&mut self, context: &Context, word: Word, pointed: Option<&Object>) -> Result<()> {
        let topics = topic_set(context, pointed)?;
        let dims = topics.objects()[0].features.len();
        if self.dims != 0 && self.dims != dims {
            return Err(Error::invalid(format!(
                "sample dimension {dims} does not match memory dimension {}",
                self.dims
            )));
        }
        let copies = if pointed.is_some() { context.len() } else { 1 };
        for f in topics.features() {
            for _ in 0..copies {
                self.push(word, f);
            }
        }
        Ok(())
    }

    fn produce(&self, _context: &Context, topic: &Object) -> Option<Word> {
        self.classify(&topic.features)
    }

    fn interpret(&self, context: &Context, word: Word, rng: &mut dyn RngCore) -> Option<ObjectId> {
        let mut matches: Vec<ObjectId> = context
            .objects()
            .iter()
            .filter(|o| self.classify(&o.features) == Some(word))
            .map(|o| o.id)
            .collect();
        matches.sort_unstable();
        match matches.len() {
            0 => None,
            1 => Some(matches[0]),
            n => Some(matches[rng.gen_range(0..n)]),
        }
    }

    fn summary(&self) -> Vec<WordSummary> {
        let mut counts: BTreeMap<Word, usize> = BTreeMap::new();
        for w in &self.labels {
            *counts.entry(*w).or_default() += 1;
        }
        counts
            .into_iter()
            .map(|(word, n)| WordSummary {
                word,
                samples: Some(n),
                prototype: None,
            })
            .collect()
    }
}
