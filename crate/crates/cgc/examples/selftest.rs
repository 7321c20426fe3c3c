//! Runs the acceptance suite and prints one line per criterion.
use cgc::selftest::{run_all, SelftestConfig};

fn main() {
    let results = run_all(&SelftestConfig::default());
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
