//! Full runs: training with frozen evaluations at checkpoints, repeated
//! over independently seeded repetitions, and swept over conditions.
//!
//! Seeding: every repetition `r` of a run with master seed `s` draws its
//! world and tutor lexicon from `derive(s, [ENVIRONMENT, r])`, so all
//! conditions of a sweep face the same worlds and lexicons rep by rep. The
//! interaction streams come from `derive(s, [hash(condition), r])`.
//! Training uses one stream; the test block at checkpoint `c` uses its own
//! stream labelled by `c`, so a checkpoint's rate does not depend on which
//! other checkpoints were measured.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::learners::{Algorithm, Learner, LearnerParams, LearnerState};
use crate::protocol::{Environment, FeedbackPolicy, InteractionOutcome};
use crate::seeds;
use crate::stats;
use crate::tutor::{ProductionStrategy, TutorLexicon};
use crate::world::World;

/// Measurement grid used when none is configured.
pub const DEFAULT_CHECKPOINTS: [usize; 14] = [
    0, 1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000,
];

const ENVIRONMENT_LABEL: u64 = 0x0065_6e76_6972_6f6e;
const WORLD_STREAM: u64 = 0;
const LEXICON_STREAM: u64 = 1;
const TRAINING_STREAM: u64 = 2;
const TESTING_STREAM_BASE: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub world_size: usize,
    pub context_size: usize,
    pub lexicon_size: usize,
    pub dims: usize,
    pub f: f64,
    pub algorithm: Algorithm,
    pub alpha: f64,
    pub k: usize,
    pub strategy: ProductionStrategy,
    pub training_interactions: usize,
    pub test_interactions: usize,
    pub checkpoints: Vec<usize>,
    pub repetitions: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            world_size: 32,
            context_size: 4,
            lexicon_size: 50,
            dims: 3,
            f: 1.0,
            algorithm: Algorithm::Cwp,
            alpha: 0.05,
            k: 30,
            strategy: ProductionStrategy::Discriminative,
            training_interactions: 10_000,
            test_interactions: 100,
            checkpoints: DEFAULT_CHECKPOINTS.to_vec(),
            repetitions: 20,
            seed: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("world_size", self.world_size),
            ("context_size", self.context_size),
            ("lexicon_size", self.lexicon_size),
            ("dims", self.dims),
            ("k", self.k),
            ("training_interactions", self.training_interactions),
            ("test_interactions", self.test_interactions),
            ("repetitions", self.repetitions),
        ];
        if let Some((key, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::config(*key, "must be at least 1"));
        }
        if self.context_size < 2 || self.context_size >= self.world_size {
            return Err(Error::config(
                "context_size",
                format!(
                    "must satisfy 2 <= context_size < world_size ({})",
                    self.world_size
                ),
            ));
        }
        if !(0.0..=1.0).contains(&self.f) {
            return Err(Error::config("f", format!("{} is outside [0, 1]", self.f)));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::config(
                "alpha",
                format!("{} is outside [0, 1]", self.alpha),
            ));
        }
        validate_schedule(&self.checkpoints, self.training_interactions)
    }

    pub fn condition(&self) -> ConditionKey {
        ConditionKey::new(self.algorithm, self.f, self.strategy)
    }

    pub fn with_condition(&self, key: ConditionKey) -> Self {
        ExperimentConfig {
            algorithm: key.algorithm,
            f: key.f,
            strategy: key.strategy,
            ..self.clone()
        }
    }

    fn learner_params(&self) -> LearnerParams {
        LearnerParams {
            alpha: self.alpha,
            k: self.k,
        }
    }
}

fn validate_schedule(checkpoints: &[usize], training: usize) -> Result<()> {
    if checkpoints.is_empty() {
        return Err(Error::config("checkpoints", "schedule is empty"));
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config(
            "checkpoints",
            "schedule must be strictly ascending",
        ));
    }
    let last = *checkpoints.last().expect("non-empty");
    if last > training {
        return Err(Error::config(
            "checkpoints",
            format!("checkpoint {last} exceeds training_interactions ({training})"),
        ));
    }
    Ok(())
}

/// The default grid clipped to `training`, ending at `training`.
pub fn default_schedule(training: usize) -> Vec<usize> {
    let mut s: Vec<usize> = DEFAULT_CHECKPOINTS
        .iter()
        .copied()
        .filter(|&c| c < training)
        .collect();
    s.push(training);
    s
}

/// Identifies one experimental condition of a sweep.
#[derive(Debug, Clone, Copy)]
pub struct ConditionKey {
    pub algorithm: Algorithm,
    pub f: f64,
    pub strategy: ProductionStrategy,
}

impl ConditionKey {
    pub fn new(algorithm: Algorithm, f: f64, strategy: ProductionStrategy) -> Self {
        // -0.0 and 0.0 name the same condition.
        let f = if f == 0.0 { 0.0 } else { f };
        ConditionKey {
            algorithm,
            f,
            strategy,
        }
    }

    fn seed_label(&self) -> u64 {
        seeds::label_hash(&self.to_string())
    }
}

impl fmt::Display for ConditionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}|{}", self.algorithm, self.f, self.strategy)
    }
}

impl PartialEq for ConditionKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ConditionKey {}

impl PartialOrd for ConditionKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ConditionKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.algorithm
            .cmp(&other.algorithm)
            .then(self.f.total_cmp(&other.f))
            .then(self.strategy.cmp(&other.strategy))
    }
}

/// Seeds of the two stream families of one repetition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepetitionSeed {
    pub environment: u64,
    pub interactions: u64,
}

impl RepetitionSeed {
    pub fn derive(master: u64, condition: &ConditionKey, repetition: usize) -> Self {
        RepetitionSeed {
            environment: seeds::derive(master, &[ENVIRONMENT_LABEL, repetition as u64]),
            interactions: seeds::derive(master, &[condition.seed_label(), repetition as u64]),
        }
    }

    /// Both stream families from a single number.
    pub fn from_u64(seed: u64) -> Self {
        RepetitionSeed {
            environment: seeds::derive(seed, &[ENVIRONMENT_LABEL]),
            interactions: seeds::derive(seed, &[TRAINING_STREAM]),
        }
    }
}

/// Fraction of `tests` frozen test interactions that succeed.
pub fn evaluate<L, R>(env: &Environment<'_>, learner: &L, tests: usize, rng: &mut R) -> Result<f64>
where
    L: Learner + ?Sized,
    R: rand::Rng,
{
    evaluate_traced(env, learner, tests, rng, None)
}

fn evaluate_traced<L, R>(
    env: &Environment<'_>,
    learner: &L,
    tests: usize,
    rng: &mut R,
    mut trace: Option<&mut Vec<InteractionOutcome>>,
) -> Result<f64>
where
    L: Learner + ?Sized,
    R: rand::Rng,
{
    let mut successes = 0usize;
    for _ in 0..tests {
        let out = env.test(learner, rng)?;
        if out.success == Some(true) {
            successes += 1;
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(out);
        }
    }
    Ok(successes as f64 / tests as f64)
}

/// An interaction tagged with where it happened in the run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    /// Checkpoint whose test block this belongs to; `None` for training.
    pub checkpoint: Option<usize>,
    /// Index within its training stream or test block.
    pub index: usize,
    pub outcome: InteractionOutcome,
}

/// Everything one repetition produced.
#[derive(Debug, Clone)]
pub struct RepetitionReport {
    pub rates: Vec<f64>,
    pub lexicon: TutorLexicon,
    pub learner: LearnerState,
    pub trace: Option<Vec<TraceEntry>>,
}

/// Per-checkpoint success rates for one repetition.
pub fn run_repetition(config: &ExperimentConfig, seed: RepetitionSeed) -> Result<Vec<f64>> {
    run_repetition_report(config, seed, false).map(|r| r.rates)
}

pub fn run_repetition_report(
    config: &ExperimentConfig,
    seed: RepetitionSeed,
    trace: bool,
) -> Result<RepetitionReport> {
    config.validate()?;
    let world = World::generate(
        config.world_size,
        config.dims,
        &mut seeds::stream(seed.environment, WORLD_STREAM),
    )?;
    let lexicon = TutorLexicon::generate(
        config.lexicon_size,
        config.dims,
        &mut seeds::stream(seed.environment, LEXICON_STREAM),
    )?;
    let mut learner = LearnerState::new(config.algorithm, config.learner_params())?;
    let env = Environment::new(&world, &lexicon, config.context_size, config.strategy);
    let policy = FeedbackPolicy::new(config.f)?;

    let mut train_rng = seeds::stream(seed.interactions, TRAINING_STREAM);
    let mut log = trace.then(Vec::new);
    let mut trained = 0usize;
    let mut rates = Vec::with_capacity(config.checkpoints.len());

    let mut train_until = |target: usize,
                           learner: &mut LearnerState,
                           log: &mut Option<Vec<TraceEntry>>|
     -> Result<()> {
        while trained < target {
            let outcome = env.train(learner, policy, &mut train_rng)?;
            if let Some(log) = log.as_mut() {
                log.push(TraceEntry {
                    checkpoint: None,
                    index: trained,
                    outcome,
                });
            }
            trained += 1;
        }
        Ok(())
    };

    for &checkpoint in &config.checkpoints {
        train_until(checkpoint, &mut learner, &mut log)?;
        let mut test_rng =
            seeds::stream(seed.interactions, TESTING_STREAM_BASE + checkpoint as u64);
        let mut block = log.is_some().then(Vec::new);
        rates.push(evaluate_traced(
            &env,
            &learner,
            config.test_interactions,
            &mut test_rng,
            block.as_mut(),
        )?);
        if let (Some(log), Some(block)) = (log.as_mut(), block) {
            log.extend(
                block
                    .into_iter()
                    .enumerate()
                    .map(|(index, outcome)| TraceEntry {
                        checkpoint: Some(checkpoint),
                        index,
                        outcome,
                    }),
            );
        }
    }
    train_until(config.training_interactions, &mut learner, &mut log)?;

    Ok(RepetitionReport {
        rates,
        lexicon,
        learner,
        trace: log,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointStats {
    pub training: usize,
    /// One rate per repetition, in repetition order.
    pub rates: Vec<f64>,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuccessCurve {
    pub points: Vec<CheckpointStats>,
}

impl SuccessCurve {
    /// Aggregates `per_repetition[r][c]` (repetition `r`, checkpoint `c`).
    pub fn from_rates(checkpoints: &[usize], per_repetition: &[Vec<f64>]) -> Self {
        let points = checkpoints
            .iter()
            .enumerate()
            .map(|(c, &training)| {
                let rates: Vec<f64> = per_repetition.iter().map(|r| r[c]).collect();
                CheckpointStats {
                    training,
                    mean: stats::mean(&rates),
                    std: stats::sample_std(&rates),
                    rates,
                }
            })
            .collect();
        SuccessCurve { points }
    }

    pub fn at(&self, training: usize) -> Option<&CheckpointStats> {
        self.points.iter().find(|p| p.training == training)
    }

    pub fn last(&self) -> &CheckpointStats {
        self.points
            .last()
            .expect("curves have at least one checkpoint")
    }

    pub fn repetitions(&self) -> usize {
        self.points.first().map_or(0, |p| p.rates.len())
    }
}

/// What to keep from each repetition besides the rates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Detail {
    pub trace: bool,
    pub state: bool,
}

#[derive(Debug, Clone)]
pub struct ConditionResult {
    pub curve: SuccessCurve,
    /// Kept only when some [`Detail`] was requested, in repetition order.
    pub reports: Vec<RepetitionReport>,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<SuccessCurve> {
    run_experiment_detailed(config, Detail::default()).map(|r| r.curve)
}

/// Runs every repetition (in parallel on the current rayon pool) and
/// aggregates them. Output does not depend on the pool size.
pub fn run_experiment_detailed(
    config: &ExperimentConfig,
    detail: Detail,
) -> Result<ConditionResult> {
    config.validate()?;
    let key = config.condition();
    let reports = (0..config.repetitions)
        .into_par_iter()
        .map(|rep| {
            run_repetition_report(
                config,
                RepetitionSeed::derive(config.seed, &key, rep),
                detail.trace,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let rates: Vec<Vec<f64>> = reports.iter().map(|r| r.rates.clone()).collect();
    let curve = SuccessCurve::from_rates(&config.checkpoints, &rates);
    let reports = if detail.trace || detail.state {
        reports
    } else {
        Vec::new()
    };
    Ok(ConditionResult { curve, reports })
}

/// The conditions of a sweep, deduplicated and in key order.
pub fn sweep_conditions(
    f_values: &[f64],
    algorithms: &[Algorithm],
    strategies: &[ProductionStrategy],
) -> Vec<ConditionKey> {
    let mut keys: Vec<ConditionKey> = algorithms
        .iter()
        .flat_map(|&a| {
            f_values
                .iter()
                .flat_map(move |&f| strategies.iter().map(move |&s| ConditionKey::new(a, f, s)))
        })
        .collect();
    keys.sort();
    keys.dedup();
    keys
}

pub type SweepResults = BTreeMap<ConditionKey, ConditionResult>;

pub fn run_sweep(
    base: &ExperimentConfig,
    f_values: &[f64],
    algorithms: &[Algorithm],
    strategies: &[ProductionStrategy],
) -> Result<BTreeMap<ConditionKey, SuccessCurve>> {
    let keys = sweep_conditions(f_values, algorithms, strategies);
    Ok(run_conditions(base, &keys, Detail::default())?
        .into_iter()
        .map(|(k, r)| (k, r.curve))
        .collect())
}

pub fn run_conditions(
    base: &ExperimentConfig,
    keys: &[ConditionKey],
    detail: Detail,
) -> Result<SweepResults> {
    if keys.is_empty() {
        return Err(Error::invalid("a sweep needs at least one condition"));
    }
    keys.par_iter()
        .map(|&key| run_experiment_detailed(&base.with_condition(key), detail).map(|r| (key, r)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{PrototypeEstimation, Prototypes};
    use crate::world::World;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quick(algorithm: Algorithm, f: f64) -> ExperimentConfig {
        ExperimentConfig {
            algorithm,
            f,
            training_interactions: 200,
            checkpoints: vec![0, 10, 50, 200],
            repetitions: 4,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn defaults_are_the_headline_setup() {
        let c = ExperimentConfig::default();
        assert_eq!(
            (
                c.world_size,
                c.context_size,
                c.lexicon_size,
                c.test_interactions,
                c.repetitions
            ),
            (32, 4, 50, 100, 20)
        );
        assert_eq!((c.k, c.alpha, c.dims), (30, 0.05, 3));
        c.validate().unwrap();
    }

    #[test]
    fn validation_names_the_key() {
        let bad = |c: ExperimentConfig, key: &str| match c.validate() {
            Err(Error::Config { key: k, .. }) => assert_eq!(k, key),
            other => panic!("expected config error, got {other:?}"),
        };
        bad(
            ExperimentConfig {
                f: 1.5,
                ..Default::default()
            },
            "f",
        );
        bad(
            ExperimentConfig {
                alpha: -0.1,
                ..Default::default()
            },
            "alpha",
        );
        bad(
            ExperimentConfig {
                context_size: 32,
                ..Default::default()
            },
            "context_size",
        );
        bad(
            ExperimentConfig {
                repetitions: 0,
                ..Default::default()
            },
            "repetitions",
        );
        bad(
            ExperimentConfig {
                checkpoints: vec![10, 5],
                ..Default::default()
            },
            "checkpoints",
        );
        bad(
            ExperimentConfig {
                checkpoints: vec![0, 20_000],
                ..Default::default()
            },
            "checkpoints",
        );
    }

    #[test]
    fn default_schedule_is_clipped() {
        assert_eq!(default_schedule(10_000), DEFAULT_CHECKPOINTS.to_vec());
        assert_eq!(default_schedule(15), vec![0, 1, 2, 5, 10, 15]);
    }

    #[test]
    fn empty_learner_scores_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let world = World::generate(32, 3, &mut rng).unwrap();
        let tutor = TutorLexicon::generate(50, 3, &mut rng).unwrap();
        let env = Environment::new(&world, &tutor, 4, ProductionStrategy::Discriminative);
        for a in Algorithm::ALL {
            let l = LearnerState::new(a, LearnerParams::default()).unwrap();
            assert_eq!(evaluate(&env, &l, 100, &mut rng).unwrap(), 0.0);
        }
    }

    #[test]
    fn tutor_copy_on_separated_world_scores_one() {
        // Each object sits exactly on its own prototype and objects are far
        // apart, so the nearest-prototype word of any topic is the topic's own
        // and the topic is the nearest object to that prototype.
        let points: Vec<Vec<f64>> = (0..8)
            .map(|i| vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64])
            .collect();
        let world = World::from_features(points.clone()).unwrap();
        let tutor = TutorLexicon::from_prototypes(points).unwrap();
        let env = Environment::new(&world, &tutor, 4, ProductionStrategy::Descriptive);
        let copy =
            PrototypeEstimation::with_prototypes(0.05, Prototypes::from_lexicon(&tutor)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(evaluate(&env, &copy, 500, &mut rng).unwrap(), 1.0);
    }

    #[test]
    fn rates_are_multiples_of_one_percent() {
        let rates =
            run_repetition(&quick(Algorithm::Pe, 1.0), RepetitionSeed::from_u64(5)).unwrap();
        for r in rates {
            let scaled = r * 100.0;
            assert!((scaled - scaled.round()).abs() < 1e-9, "{r}");
        }
    }

    #[test]
    fn repetition_is_deterministic() {
        let c = quick(Algorithm::Knn, 0.5);
        let s = RepetitionSeed::from_u64(77);
        assert_eq!(
            run_repetition(&c, s).unwrap(),
            run_repetition(&c, s).unwrap()
        );
    }

    #[test]
    fn untrained_checkpoint_is_zero_success() {
        // An empty learner fails every test interaction.
        let c = ExperimentConfig {
            checkpoints: vec![0],
            training_interactions: 1,
            ..quick(Algorithm::Ap, 1.0)
        };
        assert_eq!(
            run_repetition(&c, RepetitionSeed::from_u64(1)).unwrap(),
            vec![0.0]
        );
    }

    #[test]
    fn checkpoint_rate_is_independent_of_schedule() {
        let a = quick(Algorithm::Cwp, 0.5);
        let b = ExperimentConfig {
            checkpoints: vec![50],
            ..a.clone()
        };
        let s = RepetitionSeed::from_u64(3);
        let ra = run_repetition(&a, s).unwrap();
        let rb = run_repetition(&b, s).unwrap();
        assert_eq!(ra[2], rb[0]);
    }

    #[test]
    fn single_repetition_has_zero_spread() {
        let c = ExperimentConfig {
            repetitions: 1,
            ..quick(Algorithm::Pe, 1.0)
        };
        let curve = run_experiment(&c).unwrap();
        assert!(curve
            .points
            .iter()
            .all(|p| p.std == 0.0 && p.rates.len() == 1));
    }

    #[test]
    fn constant_rates_aggregate_to_the_constant() {
        let curve =
            SuccessCurve::from_rates(&[0, 10], &[vec![0.3, 0.7], vec![0.3, 0.7], vec![0.3, 0.7]]);
        assert!((curve.points[0].mean - 0.3).abs() < 1e-15);
        assert!((curve.points[1].mean - 0.7).abs() < 1e-15);
        assert!(curve.points[1].std < 1e-15);
    }

    #[test]
    fn sweep_is_keyed_and_order_independent() {
        let base = quick(Algorithm::Pe, 1.0);
        let a = run_sweep(
            &base,
            &[0.0, 1.0],
            &[Algorithm::Pe, Algorithm::Knn],
            &[ProductionStrategy::Discriminative],
        )
        .unwrap();
        let b = run_sweep(
            &base,
            &[1.0, 0.0],
            &[Algorithm::Knn, Algorithm::Pe],
            &[ProductionStrategy::Discriminative],
        )
        .unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a, b);
        let one = run_sweep(
            &base,
            &[1.0],
            &[Algorithm::Pe],
            &[ProductionStrategy::Discriminative],
        )
        .unwrap();
        assert_eq!(one.len(), 1);
        let key = ConditionKey::new(Algorithm::Pe, 1.0, ProductionStrategy::Discriminative);
        assert_eq!(one[&key], a[&key]);
        assert_eq!(one[&key], run_experiment(&base).unwrap());
    }

    #[test]
    fn conditions_share_worlds_per_repetition() {
        let base = quick(Algorithm::Pe, 1.0);
        let k1 = ConditionKey::new(Algorithm::Pe, 1.0, ProductionStrategy::Discriminative);
        let k2 = ConditionKey::new(Algorithm::Knn, 0.0, ProductionStrategy::Descriptive);
        let s1 = RepetitionSeed::derive(base.seed, &k1, 3);
        let s2 = RepetitionSeed::derive(base.seed, &k2, 3);
        assert_eq!(s1.environment, s2.environment);
        assert_ne!(s1.interactions, s2.interactions);
        assert_ne!(
            s1.environment,
            RepetitionSeed::derive(base.seed, &k1, 4).environment
        );
    }

    #[test]
    fn negative_zero_is_the_same_condition() {
        let a = ConditionKey::new(Algorithm::Pe, -0.0, ProductionStrategy::Descriptive);
        let b = ConditionKey::new(Algorithm::Pe, 0.0, ProductionStrategy::Descriptive);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }
}
