//! The eleven acceptance criteria, exact, one line each.

use cgc::selftest::{run_all, SelftestConfig};

#[test]
fn acceptance() {
    let results = run_all(&SelftestConfig::default());
    for r in &results {
        println!("{}", r.line());
    }
    assert_eq!(results.len(), 11);
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
