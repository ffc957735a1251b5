//! One line per verification group; failing records are listed underneath.

use geoflex::suite::{Suite, SuiteOptions, GROUPS};
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let t0 = Instant::now();
    let mut suite = Suite::new(SuiteOptions::default());
    let mut failed = Vec::new();
    for (id, _) in GROUPS {
        let g = suite.run_group(id);
        let tag = if g.pass() { "PASS" } else { "FAIL" };
        println!("[{tag}] {:>2} {} ({} checks, {:.1}s)", g.id, g.title, g.records.len(), g.seconds);
        for r in g.records.iter().filter(|r| !r.pass) {
            println!("         {}: measured {:e}, expected {} [{}]", r.name, r.measured, r.relation.expected(), r.anchor);
            if let Some(n) = &r.note {
                println!("           {n}");
            }
        }
        if !g.pass() {
            failed.push(g.id);
        }
    }
    println!(
        "acceptance: {} of {} groups pass in {:.1}s",
        GROUPS.len() - failed.len(),
        GROUPS.len(),
        t0.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failing groups: {failed:?}");
        ExitCode::FAILURE
    }
}
