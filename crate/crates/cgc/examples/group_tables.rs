//! Enumerating small groups, caching them on disk, and counting centralizers two ways.
use std::time::Instant;

use cgc::gf::Fq;
use cgc::grp::{centralizer_order_filtered, default_cache_dir, Group, GroupTable};

fn main() -> cgc::Result<()> {
    let f = Fq::prime(3)?;
    let cache = default_cache_dir();
    println!("cache directory: {}", cache.display());
    for g in [Group::sp(&f, 1)?, Group::gl(&f, 2)?, Group::gl(&f, 3)?, Group::sp(&f, 2)?] {
        let t0 = Instant::now();
        let t = GroupTable::load_or_build(&g, Some(&cache), 1_000_000)?;
        println!("{}: {} elements, {} classes ({:.2?})", g.name(), t.len(), t.class_count(), t0.elapsed());
    }

    let g = Group::sp(&f, 2)?;
    let t = GroupTable::load_or_build(&g, Some(&cache), 1_000_000)?;
    let gram = g.gram().expect("symplectic");
    println!("class sizes and centralizers in {}:", g.name());
    for (r, size) in t.class_reps().into_iter().zip(t.class_sizes()) {
        let u = t.element(r);
        let scan = t.centralizer_order_scan(&u);
        let filtered = centralizer_order_filtered(&f, std::slice::from_ref(&u), Some(&gram), 100_000_000)?;
        assert_eq!(scan as u128, filtered);
        println!("  {:<60} |class| {size:>6}  |C| {scan:>6}", g.type_of(&u)?.describe(&f));
    }
    Ok(())
}
