//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

mod gen;
mod kernels;
mod naive;
mod oracles;
mod realizers;
mod reductions;
mod rules;

use std::time::Instant;

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail }
    }
}

fn main() {
    let start = Instant::now();
    let (c3, c4) = kernels::criteria_3_and_4();
    let (c5, c6) = reductions::criteria_5_and_6();
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "margin realizer round trip", realizers::criterion_1()),
        (2, "score realizer contract", realizers::criterion_2()),
        (3, "kernel equivalence", c3),
        (4, "kernel size bounds", c4),
        (5, "reduction equivalence", c5),
        (6, "reduction witnesses", c6),
        (7, "gadget margin fidelity", reductions::criterion_7()),
        (8, "oracle self-consistency", oracles::criterion_8()),
        (9, "rule engine spot checks", rules::criterion_9()),
    ];
    let mut failed = 0;
    for (n, name, o) in &results {
        println!("criterion {n} [{name}]: {} :: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed ({:.1}s)",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
