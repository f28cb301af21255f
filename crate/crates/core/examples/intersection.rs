// Exact finite intersections of two families, checked by enumeration.

use primefam::family::{family_prefix, intersection_certificate};
use primefam::{Context, Rat};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = Context::default();
    for (a, b) in [("1/3", "1/2"), ("2/5", "1/2"), ("1/2", "3/4"), ("10/21", "1/2")] {
        let (t, tp): (Rat, Rat) = (a.parse()?, b.parse()?);
        let cert = intersection_certificate(&ctx, &t, &tp, 64)?;
        let f = family_prefix(&ctx, &t, cert.v_star + 3)?;
        let g = family_prefix(&ctx, &tp, cert.v_star + 3)?;
        let shared = f.f().iter().filter(|n| g.position(n).is_some()).count();
        assert_eq!(shared, cert.common.len());
        println!("{}", serde_json::to_string(&cert)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
