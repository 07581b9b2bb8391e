//! The binary odometer: ℤ acting on binary words through H = 2ℤ and
//! φ(2n) = n with digits {0, 1}. Adding 1 is carrying in little-endian
//! binary.
//!
//! ```bash
//! cargo run --example odometer
//! ```

use selfsim::automaton::{explore, Bounds};
use selfsim::spectral::classify;
use selfsim::{GroupElement, SelfSimilarAction, Word};

fn main() -> selfsim::Result<()> {
    let odo = SelfSimilarAction::odometer();
    let al = odo.alphabet();
    let zeros = Word::repeat(0, 6);

    for k in 0..8 {
        let img = odo.act(&GroupElement::from_i64s(&[k]), &zeros)?;
        println!("{k} · 000000 = {}", al.format(&img));
    }

    let w = al.parse("1101")?;
    let one = GroupElement::from_i64s(&[1]);
    println!(
        "1 · 1101 = {}, state {}",
        al.format(&odo.act(&one, &w)?),
        odo.state(&one, &w)?
    );

    let rec = odo.wreath_recursion(&one)?;
    println!("1 = {:?} with states {:?}", rec.permutation, rec.states);

    let m = explore(&odo, &[one], Bounds::default())?;
    println!(
        "automaton of 1: {} states",
        m.automaton().map_or(0, |m| m.len())
    );
    println!("classification: {}", classify(odo.phi()).verdict);
    Ok(())
}
