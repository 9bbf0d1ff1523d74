//! Chow–Künneth projectors of a cubic fourfold in the free tautological
//! ring of `X × X`, their products, and the refined splitting of the middle
//! projector once algebraic classes are chosen.

use std::sync::Arc;

use cubic_motives::motiveiso::{self, FourfoldData};
use cubic_motives::quadform::QuadSpace;
use cubic_motives::rational::int;
use cubic_motives::realization::{RealizationConfig, RealizedClass};
use cubic_motives::tautcorr::TautRing;

fn main() {
    let ring = TautRing::cubic();
    let p = ring.ck_projectors();
    for (name, q) in p.graded() {
        println!("{name} = {q}");
    }
    println!("pi4prim = {}", p.p4_prim);
    for (na, a) in p.graded() {
        let row: Vec<&str> = p
            .graded()
            .iter()
            .map(|(_, b)| {
                let c = ring.compose(b, a).unwrap();
                if c.is_zero() { "0" } else if &c == a { "id" } else { "?" }
            })
            .collect();
        println!("{na} then ...: {}", row.join(" "));
    }

    let cfg = Arc::new(RealizationConfig::new(QuadSpace::diagonal(&[int(1), int(1), int(-1)])).unwrap());
    let d = FourfoldData::new(cfg, vec![vec![int(1), int(0), int(0)]], None).unwrap();
    let (alg, tr) = motiveiso::build_refined_projectors(&d);
    let sq = RealizedClass::compose(&tr, &tr).unwrap();
    println!("pi4alg has {} entries, pi4tr has {}", alg.entries().len(), tr.entries().len());
    println!("pi4tr idempotent: {}", sq == tr);
}
