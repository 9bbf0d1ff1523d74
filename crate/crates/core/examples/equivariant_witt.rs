//! Random instances of equivariant Witt cancellation: an equivariant isometry
//! `V₁ → V₂` and an isometry of fixed subspaces `W₁ → W₂` give an equivariant
//! isometry of the orthogonal complements.

use cubic_motives::instances;
use cubic_motives::quadform;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..8 {
        let w = instances::random_witt_instance(&mut rng);
        let ext = quadform::equivariant_witt(&w.input()).unwrap();
        println!(
            "#{i}: dim V = {}, |G| = {}, dim W = {}, isometry {}, equivariant {}",
            w.v1.dim(),
            w.g1.order(),
            w.w1.len(),
            ext.full.is_isometry(&w.v1, &w.v2),
            ext.full.is_equivariant(&w.g1, &w.g2),
        );
    }
    let bad = instances::degenerate_witt_instance(&mut rng);
    println!("isotropic W: {:?}", quadform::equivariant_witt(&bad.input()).err());
}
