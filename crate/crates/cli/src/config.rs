use freetest::autos::{SimplicityOracle, DEFAULT_ORACLE_BUDGET};
use freetest::certify::Certifier;
use serde::Serialize;

/// Version tag carried by every JSON document the tool prints.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
    Dot,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    /// Rank override; `None` means the largest generator index used.
    pub rank: Option<usize>,
    pub format: OutputFormat,
    pub seed: u64,
    pub oracle_cap: usize,
    /// `None` uses the overlap default for the words at hand.
    pub overlap_cap: Option<usize>,
    /// `None` uses `|w| + 2`.
    pub k_bound: Option<usize>,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            rank: None,
            format: OutputFormat::Text,
            seed: 0,
            oracle_cap: DEFAULT_ORACLE_BUDGET,
            overlap_cap: None,
            k_bound: None,
            jobs: 1,
        }
    }
}

impl RunConfig {
    pub fn certifier(&self) -> Certifier {
        Certifier::new(SimplicityOracle::new(self.oracle_cap))
            .with_overlap_cap(self.overlap_cap)
            .with_k_bound(self.k_bound)
    }

    /// A thread pool of `jobs` workers.
    pub fn pool(&self) -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs.max(1))
            .build()
            .expect("thread pool")
    }
}
