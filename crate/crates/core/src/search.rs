//! Shared search plumbing: the random generator, the wall-clock deadline and
//! the improvement log.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Weight;

/// The one generator behind every stochastic choice. ChaCha8 output is
/// specified independently of the platform, so seeded runs replay exactly.
pub type SearchRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SearchRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn never() -> Self {
        Deadline(None)
    }

    pub fn after(budget: Duration) -> Self {
        Deadline(Instant::now().checked_add(budget))
    }

    pub fn at(instant: Instant) -> Self {
        Deadline(Some(instant))
    }

    #[inline]
    pub fn expired(&self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }
}

/// State threaded through every search procedure.
///
/// Improvements of the global best are reported through
/// [`SearchContext::record`] in kernel weights; the context adds the kernel
/// offset so that the trace is in terms of the input graph.
#[derive(Debug, Clone)]
pub struct SearchContext {
    pub rng: SearchRng,
    pub deadline: Deadline,
    start: Instant,
    offset: Weight,
    target: Option<Weight>,
    best: Weight,
    best_at: Duration,
    trace: Vec<(f64, Weight)>,
}

impl SearchContext {
    pub fn new(seed: u64, deadline: Deadline) -> Self {
        SearchContext {
            rng: seeded_rng(seed),
            deadline,
            start: Instant::now(),
            offset: 0,
            target: None,
            best: Weight::MIN,
            best_at: Duration::ZERO,
            trace: Vec::new(),
        }
    }

    pub(crate) fn set_offset(&mut self, offset: Weight) {
        self.offset = offset;
    }

    /// Stop as soon as the input-graph weight reaches `target`.
    pub fn set_target(&mut self, target: Option<Weight>) {
        self.target = target;
    }

    /// Logs a new global best given in kernel weight. Non-improving values
    /// are ignored.
    pub fn record(&mut self, kernel_weight: Weight) {
        let w = kernel_weight + self.offset;
        if w > self.best {
            self.best = w;
            self.best_at = self.start.elapsed();
            self.trace.push((self.best_at.as_secs_f64(), w));
        }
    }

    #[inline]
    pub fn should_stop(&self) -> bool {
        self.deadline.expired() || self.target.is_some_and(|t| self.best >= t)
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub fn best(&self) -> Weight {
        self.best
    }

    pub fn time_to_best(&self) -> Duration {
        self.best_at
    }

    pub fn trace(&self) -> &[(f64, Weight)] {
        &self.trace
    }

    pub(crate) fn into_trace(self) -> Vec<(f64, Weight)> {
        self.trace
    }
}
