//! Two-qubit depth of the preparation circuits against the 2N baseline.

use cliffload::cli::{analytic_depth, depth_row};
use cliffload::loader::LadderStyle;

fn main() -> cliffload::Result<()> {
    println!("{:>4} {:>3} {:>2} {:>9} {:>9} {:>9} {:>7}", "N", "d", "L", "logtree", "cascade", "analytic", "2N");
    for l in [1, 2] {
        for n in [4, 8, 16, 32, 64] {
            for d in [2, 4, 8] {
                if d > n || n % l != 0 || d % l != 0 {
                    continue;
                }
                let tree = depth_row(n, d, l, LadderStyle::LogTree, false)?;
                let cascade = depth_row(n, d, l, LadderStyle::Cascade, false)?;
                println!(
                    "{n:>4} {d:>3} {l:>2} {:>9} {:>9} {:>9.0} {:>7}",
                    tree.measured, cascade.measured, tree.analytic, tree.baseline
                );
            }
        }
    }
    // The d=2, L=1 bound only drops below 2N past the measured range.
    let first = (2..=12).map(|k| 1usize << k).find(|&n| analytic_depth(n, 2, 1) < (2 * n) as f64);
    println!("analytic crossover for d=2, L=1: N = {first:?}");
    Ok(())
}
