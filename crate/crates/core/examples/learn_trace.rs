//! Prints every step of a learning run against a machine file: the defect
//! repaired or the counterexample received, then the observation table.
//!
//! ```text
//! cargo run -p mtrans --example learn_trace -- target.json
//! ```

use std::error::Error;

use mtrans::format::deserialize;
use mtrans::learner::{LearnEvent, Learner, Step};
use mtrans::oracle::{equivalence_oracle, membership_oracle};
use mtrans::transducer::render_word;
use mtrans::Limits;

fn main() -> Result<(), Box<dyn Error>> {
    let path = std::env::args().nth(1).ok_or("usage: learn_trace <machine.json>")?;
    let target = deserialize(&std::fs::read_to_string(path)?)?.machine;
    let alphabet = target.alphabet().to_vec();
    let mem = membership_oracle(target.clone());
    let eq = equivalence_oracle(target.clone());
    let mut learner = Learner::new(target.monoid().clone(), alphabet.clone(), &mem, &eq, Limits::default())?;
    print!("{}", learner.table());
    loop {
        let step = learner.step()?;
        match learner.events().last() {
            Some(LearnEvent::Defect(d)) => println!("defect {}", d.render(&alphabet)),
            Some(LearnEvent::CounterExample { word, .. }) => {
                println!("counterexample {}", render_word(&alphabet, word))
            }
            _ => println!("accepted"),
        }
        print!("{}", learner.table());
        if let Step::Accepted(_) = step {
            break;
        }
    }
    println!("{:?}", learner.stats());
    Ok(())
}
