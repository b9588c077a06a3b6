//! The quick reference checks (no long integrations), as printed by
//! `kp validate --fast`.
//!
//! `cargo run --release --example validate_fast`

use kp_elastic::validation::{run_all, ValidateOptions};

fn main() {
    for report in run_all(&ValidateOptions { fast: true, snapshots: None }) {
        println!("{report}");
    }
}
