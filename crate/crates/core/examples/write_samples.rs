//! Writes the bundled sample machines as documents into a directory.
//!
//! ```text
//! cargo run -p mtrans --example write_samples -- out/
//! ```

use std::error::Error;
use std::path::PathBuf;

use mtrans::format::serialize;
use mtrans::{samples, Monoid};

fn main() -> Result<(), Box<dyn Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).ok_or("usage: write_samples <dir>")?);
    std::fs::create_dir_all(&dir)?;
    let commutative = Monoid::commutative(&["α", "β"]);
    let free = Monoid::free(&["α", "β"]);
    let free3 = Monoid::free(&["α", "β", "γ"]);
    let machines = [
        ("b_loop_commutative", samples::b_loop(commutative.clone())),
        ("b_loop_commutative_minimal", samples::b_loop_minimal(commutative)),
        ("b_loop_free", samples::b_loop(free)),
        ("three_state_target", samples::three_state_target(free3.clone())),
        ("two_state_hypothesis", samples::two_state_hypothesis(free3)),
        ("ab_power_trace", samples::ab_power(samples::alpha_beta_trace())),
    ];
    for (name, machine) in machines {
        std::fs::write(dir.join(format!("{name}.json")), serialize(&machine))?;
    }
    Ok(())
}
