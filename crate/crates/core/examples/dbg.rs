use heun_core::suite::*;

fn main() {
    let cfg = SuiteConfig::default();
    let mut failed = 0;
    for r in run(&cfg, None) {
        println!("[{}] {} ({:?})", if r.passed { "PASS" } else { "FAIL" }, r.id, r.duration);
        if !r.passed { failed += 1; for d in &r.details { if d.starts_with("FAIL") { println!("    {}", d); } } }
    }
    println!("failed: {}", failed);
}
