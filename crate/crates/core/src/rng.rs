//! Per-replication random streams.
//!
//! Every replication draws from its own ChaCha8 stream selected by `(master_seed, index)`, so
//! results do not depend on the order (or thread) in which replications are executed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifies the random stream behind one replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReplicationKey {
    pub master_seed: u64,
    pub index: u64,
}

impl ReplicationKey {
    pub fn new(master_seed: u64, index: u64) -> Self {
        Self { master_seed, index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        replication_rng(self.master_seed, self.index)
    }
}

pub fn replication_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}
