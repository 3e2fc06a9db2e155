//! The block operators p^(L)_μ anticommute and square to the identity.

use cliffload::pauli::{anticommutator_norm, multiply, p_operator};

fn main() -> cliffload::Result<()> {
    for (l, n) in [(1, 6), (2, 8), (3, 9)] {
        let modes = n / l;
        let ops: Vec<String> = (1..=modes)
            .map(|mu| p_operator(mu, l, n).map(|p| p.to_string()))
            .collect::<cliffload::Result<_>>()?;
        println!("L={l} N={n}: {}", ops.join(" "));

        let mut worst: f64 = 0.0;
        for mu in 1..=modes {
            for nu in 1..=modes {
                worst = worst.max(anticommutator_norm(mu, nu, l, n)?.abs());
            }
        }
        println!("  max |{{p_mu, p_nu}} - 2 delta| = {worst:.1e}");
    }

    let prod = multiply(&p_operator(1, 2, 4)?, &p_operator(2, 2, 4)?)?;
    println!("p1 p2 (L=2, N=4) = {prod}");
    Ok(())
}
