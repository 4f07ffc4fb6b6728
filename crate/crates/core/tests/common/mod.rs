//! Independent oracles and helpers shared by the integration tests.
#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

/// `E|Σ ε_k a_k|^r / (Σ a_k²)^{r/2}` by enumerating every sign vector.
pub fn exact_khinchine_ratio(a: &[f64], r: f64) -> f64 {
    assert!(a.len() <= 20, "enumeration is exponential");
    let n = a.len();
    let norm2: f64 = a.iter().map(|x| x * x).sum();
    let total: f64 = (0u32..1 << n)
        .map(|mask| {
            let s: f64 = a.iter().enumerate().map(|(k, x)| if mask >> k & 1 == 1 { *x } else { -x }).sum();
            s.abs().powf(r)
        })
        .sum();
    total / (1u64 << n) as f64 / norm2.powf(r / 2.0)
}

/// At `r = 2` the Khinchine ratio is exactly one: the cross terms average out.
pub const SECOND_MOMENT_RATIO: f64 = 1.0;

/// Print the one-line verdict of an acceptance criterion.
pub fn report(criterion: u32, pass: bool, detail: &str) {
    println!("criterion {criterion}: {} | {detail}", if pass { "PASS" } else { "FAIL" });
}

pub fn seconds_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

/// Run the binary with the given worker cap.
pub fn run_cli(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bht-lab"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("BHT_LAB_THREADS", t.to_string()),
        None => cmd.env_remove("BHT_LAB_THREADS"),
    };
    cmd.output().expect("binary runs")
}

/// Relative paths and contents of every file below `dir`, sorted.
pub fn tree_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).expect("readable dir") {
            let p = entry.expect("entry").path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.push((rel, std::fs::read(&p).expect("readable file")));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn exact_ratio_small_cases() {
    // Two equal coefficients: |S| is 2 or 0 with equal probability.
    assert!((exact_khinchine_ratio(&[1.0, 1.0], 1.0) - 2f64.sqrt() / 2.0).abs() < 1e-15);
    for a in [vec![1.0], vec![1.0, 2.0, 3.0], vec![0.5; 9]] {
        assert!((exact_khinchine_ratio(&a, 2.0) - SECOND_MOMENT_RATIO).abs() < 1e-12);
    }
}
