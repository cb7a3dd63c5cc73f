use rand::Rng;

use crate::search::SearchRng;

/// An `EM` exchange module: `(ω,1)`-swaps followed by `(x, y)`-exchanges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EmModule {
    pub x: usize,
    pub y: usize,
}

pub const EM_MODULES: [EmModule; 6] = [
    EmModule { x: 1, y: 1 },
    EmModule { x: 1, y: 2 },
    EmModule { x: 2, y: 1 },
    EmModule { x: 2, y: 2 },
    EmModule { x: 3, y: 1 },
    EmModule { x: 3, y: 2 },
];

/// Result of running one `EM` module, from best to worst.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    NewGlobalBest,
    ImprovedCurrent,
    /// Some improving move was applied but the solution weight did not grow.
    ImprovedMovesOnly,
    None,
}

impl Outcome {
    fn reward(self) -> i64 {
        match self {
            Outcome::NewGlobalBest => 3,
            Outcome::ImprovedCurrent => 2,
            Outcome::ImprovedMovesOnly => 1,
            Outcome::None => -1,
        }
    }
}

/// Rewards `Re(a)` of the `EM` modules plus the `sum_Re` termination counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewardTable {
    re: [u64; EM_MODULES.len()],
    sum_re: i64,
}

impl Default for RewardTable {
    fn default() -> Self {
        RewardTable { re: [1; EM_MODULES.len()], sum_re: EM_MODULES.len() as i64 }
    }
}

impl RewardTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table with explicit rewards (each at least one); `sum_Re` starts at `|EM|`.
    pub fn with_rewards(re: [u64; EM_MODULES.len()]) -> Self {
        RewardTable { re: re.map(|r| r.max(1)), sum_re: EM_MODULES.len() as i64 }
    }

    pub fn reward(&self, module: EmModule) -> u64 {
        self.re[Self::index(module)]
    }

    pub fn sum_re(&self) -> i64 {
        self.sum_re
    }

    pub fn initial_sum() -> i64 {
        EM_MODULES.len() as i64
    }

    pub(crate) fn reset_sum(&mut self) {
        self.sum_re = Self::initial_sum();
    }

    /// Selection probability `Re(a) / Σ Re`.
    pub fn probability(&self, module: EmModule) -> f64 {
        self.reward(module) as f64 / self.re.iter().sum::<u64>() as f64
    }

    fn index(module: EmModule) -> usize {
        EM_MODULES.iter().position(|&m| m == module).expect("EM module")
    }

    /// Roulette-wheel draw proportional to the rewards.
    pub fn select_module(&self, rng: &mut SearchRng) -> EmModule {
        let total: u64 = self.re.iter().sum();
        let mut ticket = rng.gen_range(0..total);
        for (i, &r) in self.re.iter().enumerate() {
            if ticket < r {
                return EM_MODULES[i];
            }
            ticket -= r;
        }
        unreachable!("ticket below total")
    }

    /// Positive outcomes add 3/2/1 to both `Re(a)` and `sum_Re`; `None`
    /// subtracts one from `sum_Re` and from `Re(a)`, which never drops below one.
    pub fn update_reward(&mut self, module: EmModule, outcome: Outcome) {
        let i = Self::index(module);
        let delta = outcome.reward();
        if delta > 0 {
            self.re[i] += delta as u64;
        } else {
            self.re[i] = self.re[i].saturating_sub(1).max(1);
        }
        self.sum_re += delta;
    }
}
