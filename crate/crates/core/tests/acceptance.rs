//! Runs every end-to-end check, printing one PASS/FAIL line each; exits
//! nonzero if any fails. A numeric argument restricts the run to that check.

use std::process::ExitCode;

use torusgreen::acceptance::run;

fn main() -> ExitCode {
    let only: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<u8> = if only.is_empty() { (1..=12).collect() } else { only };
    let mut failed = 0;
    for id in ids {
        let r = run(id);
        println!("[{}] criterion {:>2} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.name, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        println!("all criteria passed");
        ExitCode::SUCCESS
    }
}
