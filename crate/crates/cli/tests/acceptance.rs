//! Acceptance criteria, one PASS/FAIL line each, followed by the evidence.
//!
//! Two criteria check claims that do not hold as stated and are listed as
//! known failures; the run fails if either ever starts passing, so the
//! discrepancy stays visible:
//!
//! * 7: the trinomial eigenvalue on `E_j` is `q2^(n-j)`, not `q2^j`;
//! * 9: `E f_j(X_t)` decays at rate `q2^j` but exceeds the stated bound
//!   `q2^(jt) f_j(X_0) max C(n'(u), anc(u)-1)` by a constant factor.

use std::process::ExitCode;

use hopfchain::Exec;
use hopfchain_cli::verify::{run_criterion, CRITERIA};

const KNOWN_FAILURES: &[u32] = &[7, 9];
const SHOWN_FLAGS: usize = 5;

fn main() -> ExitCode {
    let mut unexpected = Vec::new();
    for &(id, _) in CRITERIA {
        let outcome = run_criterion(id, Exec::default());
        println!("{}", outcome.line());
        for d in &outcome.details {
            println!("      {d}");
        }
        for f in outcome.flags.iter().take(SHOWN_FLAGS) {
            println!("      flag: {f}");
        }
        if outcome.flags.len() > SHOWN_FLAGS {
            println!("      … {} more flags", outcome.flags.len() - SHOWN_FLAGS);
        }
        if outcome.passed == KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: every criterion has its expected verdict (known failures: {KNOWN_FAILURES:?})");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected verdict for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
