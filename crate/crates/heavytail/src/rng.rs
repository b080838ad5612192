//! Seeded substreams.
//!
//! Every randomized operation derives a ChaCha stream from the user seed and
//! a `(class, index)` pair. Streams are independent, cheap to create, and
//! assigned up front, so replicate-level parallelism cannot change results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tag separating the substreams of composed operations.
#[derive(Debug, Clone, Copy)]
pub(crate) enum StreamClass {
    /// Sequence sampling; index = replicate id.
    Sample = 0,
    /// Graph generation; index = regeneration attempt.
    Graph = 1,
    /// Node-value draws on a fixed graph; index = replicate id.
    NodeValues = 2,
    /// Subsampling in the size sweep; index = size position.
    Subsample = 3,
    /// Bootstrap resampling; index = bootstrap replicate.
    Bootstrap = 4,
    /// Pair selection for decorrelation checks.
    PairChoice = 5,
}

const INDEX_BITS: u32 = 56;
const INDEX_MASK: u64 = (1 << INDEX_BITS) - 1;

pub(crate) fn substream(seed: u64, class: StreamClass, index: u64) -> ChaCha8Rng {
    debug_assert!(index <= INDEX_MASK, "substream index exceeds {INDEX_BITS} bits");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((class as u64) << INDEX_BITS) | (index & INDEX_MASK));
    rng
}
