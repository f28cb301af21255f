// One-sided limits of the embedding at 0, at 1 and around points of S.

use primefam::embedding::limit_point;
use primefam::{Context, LimitKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = Context::default();
    for kind in ["zero", "one", "left:1/5", "right:5,1", "right:2,3"] {
        let kind: LimitKind = kind.parse()?;
        let v = limit_point(&ctx, &kind, 5)?;
        println!("{kind}: {}", serde_json::to_string(&v)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
