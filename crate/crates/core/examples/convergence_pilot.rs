//! Prints per-size median errors of the 30-trial nested sweep for both
//! analytic cases across several master seeds.
//!
//!     cargo run --release -p ovl-core --example convergence_pilot -- 1 2 3 4 5

use ovl_core::experiments::{run_sweep, summarize, Case, ExperimentConfig, Protocol};

fn main() {
    let seeds: Vec<u64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let seeds = if seeds.is_empty() { vec![1, 2, 3, 4, 5] } else { seeds };
    for protocol in [Protocol::Nested, Protocol::Independent] {
        for case in [Case::One, Case::Two] {
            for &seed in &seeds {
                let cfg = ExperimentConfig { protocol, ..ExperimentConfig::new(case.clone(), seed) };
                let summary = summarize(&run_sweep(&cfg).expect("sweep")).expect("summary");
                let cells: Vec<String> = summary
                    .iter()
                    .map(|s| format!("N={:>5} v={:.4} rho={:.4}", s.n_samples, s.v_error.median, s.rho_error.median))
                    .collect();
                println!("{protocol:<11} {case:?} seed={seed:<4} {}", cells.join(" | "));
            }
        }
    }
}
