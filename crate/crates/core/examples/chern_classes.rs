//! Chern and Todd classes of a cubic fourfold and a K3 surface.
//!
//! ```bash
//! cargo run --example chern_classes
//! ```

use cubic_motives::gradedring::{self, VarietyData};

fn main() {
    for (name, vd) in [
        ("cubic fourfold", VarietyData::cubic_fourfold()),
        ("K3 of degree 2", VarietyData::k3(2).unwrap()),
    ] {
        let (c, source) = gradedring::tangent_chern(&vd).unwrap();
        let (td, sqrt) = gradedring::todd_and_sqrt(&c).unwrap();
        println!("{name} ({source:?})");
        println!("  c(T)     = {c}");
        println!("  td       = {td}   (integral {})", td.integrate());
        println!("  sqrt(td) = {sqrt}");
        println!("  Euler characteristic = {}", c.integrate());
    }
}
