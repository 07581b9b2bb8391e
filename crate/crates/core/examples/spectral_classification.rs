//! Exact spectral classification of several Lie matrices, plus the
//! φ-core test on the centre.
//!
//! ```bash
//! cargo run --example spectral_classification
//! ```

use selfsim::linalg::{rat, QMatrix};
use selfsim::spectral::{classify_matrix, core_is_trivial};
use selfsim::VirtualEndomorphism;

fn main() -> selfsim::Result<()> {
    let cases = [
        (
            "heisenberg",
            VirtualEndomorphism::heisenberg().lie_matrix().clone(),
        ),
        (
            "odometer",
            VirtualEndomorphism::odometer().lie_matrix().clone(),
        ),
        (
            "rotation",
            QMatrix::from_int_rows(&[vec![0, -1], vec![1, 0]]),
        ),
        ("expanding", QMatrix::diagonal(&[rat(2, 1), rat(1, 3)])),
        (
            "jordan cell",
            QMatrix::from_rows(vec![vec![rat(1, 1), rat(1, 1)], vec![rat(0, 1), rat(1, 1)]]),
        ),
        (
            "irrational modulus one",
            QMatrix::from_rows(vec![
                vec![rat(3, 5), rat(-4, 5)],
                vec![rat(4, 5), rat(3, 5)],
            ]),
        ),
    ];
    for (name, m) in &cases {
        let c = classify_matrix(m);
        let orders: Vec<u64> = c.split.unit_root_part.iter().map(|f| f.order).collect();
        println!(
            "{name:>22}: {:<24} χ = {:<24} μ = {:<20} roots of unity {orders:?}",
            c.verdict, c.chi, c.mu
        );
    }

    let core = core_is_trivial(&VirtualEndomorphism::heisenberg())?;
    let factors: Vec<String> = core
        .factors
        .iter()
        .map(|(f, k)| format!("({f})^{k}"))
        .collect();
    println!(
        "heisenberg centre: {} -> core trivial: {}",
        factors.join(" "),
        core.trivial
    );
    Ok(())
}
