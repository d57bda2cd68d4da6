use std::time::Instant;

use melforge_core::averaging::{averaged_functions, bautin_family};
use melforge_core::ideals::{chain_stabilization_of, reduce_averaged_chain};
use melforge_core::MonomialOrder;

fn main() {
    let order: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let sys = bautin_family();
    let t = Instant::now();
    let spec = averaged_functions(&sys, order).unwrap();
    println!("averaging: {:?}", t.elapsed());
    let t = Instant::now();
    let chain = reduce_averaged_chain(&spec, MonomialOrder::degrevlex_ascending(10)).unwrap();
    println!("chain: {:?}", t.elapsed());
    for l in &chain.levels {
        println!("order {} basis size {}", l.order, l.basis.basis().len());
        for c in &l.coefficients {
            println!("  z^{} pi^{:?}: {}", c.z_power, c.pi_power, c.rational);
        }
    }
    println!("{:?}", chain_stabilization_of(&chain).unwrap());
}
