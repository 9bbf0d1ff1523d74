//! Builds the correspondence `Γ` between two cubic fourfolds from an isometry
//! of their transcendental parts, checks it is an isomorphism with inverse its
//! transpose, and checks that it respects the diagonal and small diagonal.

use cubic_motives::instances;
use cubic_motives::motiveiso::{self, GAMMA_SUMMANDS};
use cubic_motives::rational::int;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pair = instances::random_fourfold_pair(&mut rng, 22, 2, true).unwrap();
    println!(
        "algebraic rank {}, group of order {}",
        pair.first.alg_basis.len(),
        pair.first.group.order()
    );
    let cert = motiveiso::build_gamma(&pair.first, &pair.second, &pair.iso_tr).unwrap();
    for c in cert.checks.iter().chain(&motiveiso::verify_frobenius(&cert).unwrap()) {
        println!("{:<5} {}", if c.passed { "ok" } else { "FAIL" }, c.name);
    }
    for name in GAMMA_SUMMANDS {
        let bad = cert.with_scaled_summand(name, &int(2));
        let failed: Vec<_> = bad.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        println!("doubling {name}: breaks {failed:?}");
    }
}
