use std::time::Instant;

use melforge_core::averaging::{averaged_functions, bautin_family, cubic_fold_example};

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "bautin".into());
    let order: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(4);
    let sys = if which == "cubic" {
        cubic_fold_example()
    } else {
        bautin_family()
    };
    let t = Instant::now();
    let spec = averaged_functions(&sys, order).unwrap();
    println!("order {order}: {:?}", t.elapsed());
    for i in 1..=order {
        let f = spec.f(i);
        let s = f.to_string();
        println!(
            "f{i}: {} terms: {}",
            f.len(),
            if s.len() > 600 { &s[..600] } else { &s }
        );
    }
}
