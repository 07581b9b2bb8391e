//! Loads a problem from JSON, builds its action and round-trips the spec.
//! Pass a path, or run without arguments to use a small ℤ² example.
//!
//! ```bash
//! cargo run --example json_spec -- crates/core/fixtures/heisenberg.json
//! ```

use selfsim::automaton::{explore, Bounds};
use selfsim::spec_io::ProblemSpec;
use selfsim::spectral::classify;

const BASE_MINUS_ONE_PLUS_I: &str = r#"{
  "model": {"kind": "abelian", "rank": 2},
  "subgroup": {"lattice": [[1, 1], [1, -1]]},
  "phi": [["-1/2", "1/2"], ["-1/2", "-1/2"]],
  "digits": [[0, 0], [1, 0]],
  "elements": {"u": [1, 0], "v": [0, 1]},
  "generators": ["u", "v"],
  "alphabet_start": 0
}"#;

fn main() -> selfsim::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => {
            std::fs::read_to_string(path).map_err(|e| selfsim::Error::Parse(e.to_string()))?
        }
        None => BASE_MINUS_ONE_PLUS_I.to_string(),
    };
    let spec = ProblemSpec::from_json(&text)?;
    let action = spec.action()?;
    println!(
        "{} letters, verdict {}",
        action.degree(),
        classify(&spec.phi).verdict
    );
    for (name, g) in spec.generator_elements() {
        let out = explore(&action, &[g], Bounds::default())?;
        match out.automaton() {
            Some(m) => println!("{name}: finite, {} states", m.len()),
            None => println!("{name}: state bound exceeded"),
        }
    }
    println!("{}", spec.to_json());
    Ok(())
}
