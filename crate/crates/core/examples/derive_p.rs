//! Derives the symmetric polynomial `P` in the relation
//! `δ = (1/3)(Δ₁₂h₃⁴ + Δ₁₃h₂⁴ + Δ₂₃h₁⁴) + P(h₁, h₂, h₃)` from the realized small
//! diagonal, for two different primitive forms.

use cubic_motives::instances;
use cubic_motives::quadform::QuadSpace;
use cubic_motives::realization::{self, RealizationConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let grams = [instances::default_gram(22), instances::random_gram(&mut rng, 22)];
    let ps: Vec<_> = grams
        .iter()
        .map(|g| {
            let cfg = RealizationConfig::new(QuadSpace::new(g.clone()).unwrap()).unwrap();
            cfg.euler_check().unwrap();
            realization::derive_p(&cfg).unwrap()
        })
        .collect();
    println!("P = {}", realization::poly3_to_string(&ps[0]));
    println!("symmetric: {}", realization::poly3_is_symmetric(&ps[0]));
    println!("same for both forms: {}", ps[0] == ps[1]);
    for (e, c) in &ps[0] {
        println!("  h1^{} h2^{} h3^{}: {c}", e[0], e[1], e[2]);
    }
}
