//! Realized mutation kernels and the composition identities they satisfy.

use cubic_motives::instances;
use cubic_motives::quadform::QuadSpace;
use cubic_motives::realization::{self, RealizationConfig};

fn main() {
    let cfg = RealizationConfig::new(QuadSpace::new(instances::default_gram(22)).unwrap()).unwrap();
    for c in realization::verify_kernel_identities(&cfg) {
        println!("{:<5} {}", if c.passed { "ok" } else { "FAIL" }, c.name);
    }
    let (left, _) = realization::realized_kernels(&cfg);
    let m = realization::kernel_on_prim(&cfg, &left);
    println!("left kernel is the identity on V: {}", m == cubic_motives::linalg::Matrix::identity(22));
}
