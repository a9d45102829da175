use brpic_core::{bimodule, group::build_group, Caps};
use std::time::Instant;
fn main() {
    let caps = Caps::default();
    for spec in ["D8", "A4", "S4", "pq(3,7)"] {
        let g = build_group(spec, &caps).unwrap();
        let t0 = Instant::now();
        let ctx = bimodule::enumerate_invertible(&g, &caps).unwrap();
        println!("{spec}: {} orbits, {} triples, {:?}", ctx.orbits.len(), ctx.triples.len(), t0.elapsed());
    }
}
