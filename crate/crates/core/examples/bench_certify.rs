use gpk3::ffield::{Matrix, PrimeField};
use gpk3::grassmann::{certify_smooth_gpk3, GPK3Instance};
use gpk3::groebner::ResourceBudget;
use std::time::Instant;

fn main() {
    let field = PrimeField::new(103).unwrap();
    let text = include_str!("../fixtures/appendix_b_f103.txt");
    let t = Matrix::parse_text(field, text).unwrap();
    let inst = GPK3Instance::with_identity_g1(field, t);
    let start = Instant::now();
    let cert = certify_smooth_gpk3(&inst, &ResourceBudget::default()).unwrap();
    println!("smooth={} inconclusive={} total={:?}", cert.smooth, cert.inconclusive, start.elapsed());
    for p in &cert.patches {
        println!("  pivot {:?} unit={:?} pairs={} maxdeg={} millis={}", p.pivot, p.unit_ideal, p.pairs, p.max_degree, p.millis);
    }
}
