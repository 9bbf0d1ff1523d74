//! Transcendental correspondence between a cubic fourfold and a K3 surface whose
//! transcendental lattices are isometric, and the surface's refined projectors.

use cubic_motives::instances;
use cubic_motives::motiveiso;
use cubic_motives::quadform::Isometry;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (x, s, iso) = instances::random_cubic_k3(&mut rng, 22, 1, 2).unwrap();
    println!("transcendental rank {}", x.transcendental_basis().len());
    let cert = motiveiso::build_gamma_cubic_k3(&x, &s, &iso).unwrap();
    for c in &cert.checks {
        println!("{:<5} {}", if c.passed { "ok" } else { "FAIL" }, c.name);
    }
    let p = motiveiso::surface_ck(&s);
    for c in motiveiso::projector_family_checks(&s.factor, &p.all()) {
        if !c.passed {
            println!("FAIL {}", c.name);
        }
    }
    let (_, s22, _) = instances::random_cubic_k3(&mut rng, 22, 0, 2).unwrap();
    let err = motiveiso::build_gamma_cubic_k3(&x, &s22, &Isometry::identity(21)).unwrap_err();
    println!("rank 21 against rank 22: {err}");
}
