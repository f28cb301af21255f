// Run a few named property suites and print their reports.

use primefam::verify::{run_suite, Scale};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["intersection", "gap", "limits"] {
        let r = run_suite(name, 42, Scale::Small)?;
        println!("{}", serde_json::to_string(&r)?);
        assert!(r.passed());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
