//! Classifies a few parameter triples and prints their stability verdicts and
//! energy-identity coefficients.
//!
//!     cargo run --example check_params

use savgl::gltd::{locus_margin, verdict, GltdParams, Preset};
use savgl::identities::{admissible_branches, discriminant, system_residual};

fn main() -> Result<(), savgl::error::Error> {
    let mut list: Vec<(String, GltdParams)> = Preset::ALL.iter().map(|p| (p.name().to_string(), p.params())).collect();
    // inside the four-inequality region but not A-stable
    list.push(("region-only".into(), GltdParams::new(0.5, 0.0, 2.0 / 3.0)?));

    for (name, p) in &list {
        let v = verdict(p);
        println!("{name}: alpha0 = {:.4}, beta0 = {:.4}, beta1 = {:.4}, beta2 = {:.4}", p.alpha0(), p.beta0(), p.beta1(), p.beta2());
        println!(
            "  {:?}, region {}, A-stable {} (locus margin {:.4}), algebraically stable {:?}",
            v.case,
            v.satisfies_parameter_region,
            v.a_stable,
            locus_margin(p),
            v.algebraically_stable
        );
        match admissible_branches(p) {
            Ok(branches) => {
                println!("  discriminant {:.3e}, {} admissible branch(es)", discriminant(p), branches.len());
                for (b, c) in branches {
                    println!(
                        "    {:?}/{:?}: a = {:.6}, b = {:.6}, d = {:.6}, c1 = {:.6}, c2 = {:.6}, c3 = {:.6}  (residual {:.1e})",
                        b.sign,
                        b.order,
                        c.a,
                        c.b,
                        c.d,
                        c.c1,
                        c.c2,
                        c.c3,
                        system_residual(p, &c)
                    );
                }
            }
            Err(e) => println!("  no energy identity: {e}"),
        }
    }
    Ok(())
}
