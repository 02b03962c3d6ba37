use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Independent random stream per `(master seed, replication, asset, purpose)`.
///
/// Seeding from a hash of the asset id (rather than its position) keeps
/// results independent of fleet ordering and of how replications are
/// scheduled across threads.
pub fn asset_stream(master_seed: u64, replication: u32, asset_id: &str, purpose: StreamPurpose) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(b"itfleet/asset-stream/v1");
    h.update(master_seed.to_le_bytes());
    h.update(replication.to_le_bytes());
    h.update([purpose as u8]);
    h.update(asset_id.as_bytes());
    let digest = h.finalize();
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamPurpose {
    Failure = 1,
    Degradation = 2,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_differ_by_every_component() {
        let base: u64 = asset_stream(7, 0, "A", StreamPurpose::Failure).random();
        assert_eq!(base, asset_stream(7, 0, "A", StreamPurpose::Failure).random::<u64>());
        assert_ne!(base, asset_stream(8, 0, "A", StreamPurpose::Failure).random::<u64>());
        assert_ne!(base, asset_stream(7, 1, "A", StreamPurpose::Failure).random::<u64>());
        assert_ne!(base, asset_stream(7, 0, "B", StreamPurpose::Failure).random::<u64>());
        assert_ne!(base, asset_stream(7, 0, "A", StreamPurpose::Degradation).random::<u64>());
    }
}
