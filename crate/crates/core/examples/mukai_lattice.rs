//! The Mukai pairing on a cubic fourfold: the exceptional triple
//! `O, O(1), O(2)`, the `A₂` plane spanned by `λ₁, λ₂`, and the projection
//! onto the Kuznetsov component by successive mutations.

use cubic_motives::instances;
use cubic_motives::mukai::{self, MukaiSpace};
use cubic_motives::quadform::QuadSpace;
use cubic_motives::rational::int;

fn main() {
    let s = MukaiSpace::new(QuadSpace::new(instances::default_gram(22)).unwrap()).unwrap();

    println!("<v(O(i)), v(O(j))> for i, j in -2..=2:");
    for i in -2..=2 {
        let row: Vec<String> = (-2..=2).map(|j| format!("{:>4}", s.pairing(&s.line(i), &s.line(j)))).collect();
        println!("  {}", row.join(""));
    }

    let (l1, l2) = mukai::lambda_basis(s.variety());
    println!("lambda1 = {l1}");
    println!("lambda2 = {l2}");
    let ls = [s.from_poly(l1), s.from_poly(l2)];
    println!("Gram of lambdas: {:?}", s.gram_of(&ls));

    let mut prim = vec![int(0); 22];
    prim[3] = int(1);
    let a = s.line(3).add(&s.from_prim(prim).unwrap());
    let p = s.kuznetsov_project(&a);
    println!("projection of v(O(3)) + e4: poly part {}", p.poly);
    for i in 0..3 {
        println!("  <v(O({i})), image> = {}", s.pairing(&s.line(i), &p));
    }
}
