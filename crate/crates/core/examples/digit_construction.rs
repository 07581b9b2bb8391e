//! Builds digit sets from (H, φ): one inside the contracting part, giving a
//! finite-state action, and one through a φ-fixed element, giving an action
//! that is not finite-state.
//!
//! ```bash
//! cargo run --example digit_construction
//! ```

use selfsim::digits::{
    contracting_subspace, empirical_classify, finite_state_digits, fixed_element,
    non_finite_state_digits, EmpiricalVerdict,
};
use selfsim::{Bounds, GroupElement, SelfSimilarAction, VirtualEndomorphism};

fn main() -> selfsim::Result<()> {
    let phi = VirtualEndomorphism::heisenberg();
    let lc = contracting_subspace(&phi)?;
    println!(
        "contracting subspace has dimension {}, cut out by {}",
        lc.dimension(),
        lc.q
    );

    let d = finite_state_digits(&phi)?;
    println!("finite-state digits: {d}");
    let h = fixed_element(&phi)?;
    println!("φ fixes {h}");

    let seeds = [
        GroupElement::from_i64s(&[1, 0, 0]),
        GroupElement::from_i64s(&[0, 1, 0]),
        GroupElement::from_i64s(&[0, 0, 1]),
    ];
    let bounds = Bounds {
        max_states: 500,
        ..Bounds::default()
    };
    for k in [1, 3] {
        let d2 = non_finite_state_digits(&phi, &d, k)?;
        let action = SelfSimilarAction::new(phi.clone(), d2.clone(), 1)?;
        let report = empirical_classify(&action, &seeds, bounds)?;
        match report.verdict {
            EmpiricalVerdict::WitnessUnbounded { element, chain } => {
                println!(
                    "k = {k}: {d2}: {element} has unbounded states, last {}",
                    chain.last().unwrap().1
                )
            }
            EmpiricalVerdict::AllSeedsFinite(_) => println!("k = {k}: {d2}: all seeds finite"),
        }
    }
    match non_finite_state_digits(&phi, &d, 2) {
        Ok(d2) => println!("k = 2: {d2}"),
        Err(e) => println!("k = 2: {e}"),
    }
    Ok(())
}
