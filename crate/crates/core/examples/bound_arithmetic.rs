// Bound arithmetic without any solving.
//
//     cargo run --example bound_arithmetic

use eqcol::bounds::{big_m_value, candidate_betas, lb_from_beta};

fn main() {
    // A class bound beta0 forces at least ceil(n / beta0) classes.
    for (n, beta0) in [(125, 30), (450, 31), (125, 3), (250, 7)] {
        println!("n={n:>3} beta0={beta0:>2} -> lb {}", lb_from_beta(n, beta0).unwrap());
    }

    // With k0 colors known to be necessary, no class exceeds ceil(n / k0).
    println!("big-M for n=125, k0=3: {}", big_m_value(125, 3).unwrap());

    // Class sizes that share a lower bound with beta1.
    let n = 100;
    let beta1 = 12;
    let set = candidate_betas(n, beta1).unwrap();
    println!("n={n} beta1={beta1}: {set:?}");
    for beta in set {
        assert_eq!(n.div_ceil(beta - 1), n.div_ceil(beta1));
    }
}
