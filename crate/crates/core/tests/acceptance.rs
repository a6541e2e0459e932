use std::process::ExitCode;

use coxforge_core::verify::{catalog, run_criterion, Profile};

fn main() -> ExitCode {
    let profile = match std::env::var("COXFORGE_PROFILE").as_deref() {
        Ok("quick") => Profile::Quick,
        _ => Profile::Full,
    };
    let mut failed = Vec::new();
    for c in catalog() {
        let rep = run_criterion(&c, profile);
        println!("{}", rep.line());
        if !rep.passed {
            failed.push(rep.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", catalog().len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
