//! The acceptance suite: eleven exact checks over small groups.

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::center::{
    block_combinations, growth_check_sp, intersection_growth_check, shape_check, Budgets, Center, Status, Term,
};
use crate::classify::{self, fixed_dim, refl_length, wall_forms};
use crate::combin::{ClassType, Kind, Partition};
use crate::error::{Error, Result};
use crate::fh_symmetric as fh;
use crate::gf::{Fe, Fq};
use crate::grp::{order_formula, Group, GroupTable};
use crate::mat;

const SEED: u64 = 0x5eed;

/// Class count of Sp_2(3), fixed by the first verified enumeration.
pub const SP2_3_CLASSES: usize = 34;

#[derive(Clone, Debug, Default)]
pub struct SelftestConfig {
    pub budgets: Budgets,
    pub cache: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<28} {}  ({} ms) {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.millis,
            self.detail
        )
    }
}

fn timed(id: u8, name: &'static str, run: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let t = Instant::now();
    let (passed, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { id, name, passed, detail, millis: t.elapsed().as_millis() }
}

fn f(q: usize) -> Fq {
    Fq::parse(&q.to_string()).expect("small prime power")
}

fn table(cfg: &SelftestConfig, g: &Group) -> Result<GroupTable> {
    let budget = cfg.budgets.orbit;
    match &cfg.cache {
        Some(dir) => GroupTable::load_or_build(g, Some(dir), budget),
        None => GroupTable::build(g, budget),
    }
}

/// Runs every criterion in order.
pub fn run_all(cfg: &SelftestConfig) -> Vec<CriterionResult> {
    let mut out = vec![
        criterion_1(cfg),
        criterion_2(cfg),
        criterion_3(),
        criterion_4(cfg),
        criterion_5(cfg),
        criterion_6(cfg),
    ];
    let (c7, sp_runs) = criterion_7(cfg);
    let (c8, gl_runs) = criterion_8(cfg);
    out.push(c7);
    out.push(c8);
    out.push(criterion_9());
    out.push(criterion_10());
    let mut runs = sp_runs;
    runs.extend(gl_runs);
    out.push(criterion_11(&runs));
    out
}

/// Group orders by closure, plus random closure spot checks.
pub fn criterion_1(cfg: &SelftestConfig) -> CriterionResult {
    timed(1, "group orders", || {
        let cases = [(Kind::Sp, 1, 3, 24u128), (Kind::Gl, 2, 3, 48), (Kind::Gl, 3, 3, 11232), (Kind::Sp, 2, 3, 51840), (Kind::Gl, 4, 2, 20160)];
        let mut ok = true;
        let mut detail = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for (kind, n, q, expected) in cases {
            let g = Group::new(kind, f(q), n)?;
            let t = table(cfg, &g)?;
            let fq = &g.field;
            let closed = (0..10_000).all(|_| {
                let a = t.element(rng.gen_range(0..t.len()));
                let b = t.element(rng.gen_range(0..t.len()));
                t.index_of(&a.mul(&b, fq)).is_some() && t.index_of(&a.inverse(fq).expect("invertible")).is_some()
            });
            let good = t.len() as u128 == expected && order_formula(kind, n, q as u64) == expected && closed;
            ok &= good;
            detail.push(format!("{}={}", g.name(), t.len()));
        }
        Ok((ok, detail.join(" ")))
    })
}

/// Class counts equal type counts, and types separate classes.
pub fn criterion_2(cfg: &SelftestConfig) -> CriterionResult {
    timed(2, "class parametrization", || {
        let cases = [(Kind::Sp, 1, 3, Some(7)), (Kind::Sp, 2, 3, Some(SP2_3_CLASSES)), (Kind::Gl, 2, 3, None), (Kind::Gl, 3, 3, None)];
        let mut ok = true;
        let mut detail = Vec::new();
        for (kind, n, q, expected) in cases {
            let g = Group::new(kind, f(q), n)?;
            let t = table(cfg, &g)?;
            let types = g.types()?;
            let reps = t.class_reps();
            let rep_types: Vec<ClassType> = reps.iter().map(|&i| g.type_of(&t.element(i))).collect::<Result<_>>()?;
            // every element has the type of its class representative
            let ids = t.class_ids();
            let uniform = (0..t.len())
                .into_par_iter()
                .map(|i| Ok(g.type_of(&t.element(i))? == rep_types[ids[i] as usize]))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .all(|b| b);
            let mut distinct = rep_types.clone();
            distinct.sort();
            distinct.dedup();
            let separated = distinct.len() == rep_types.len();
            let all_types = types.iter().all(|ty| rep_types.contains(ty));
            let good = t.class_count() == types.len()
                && expected.is_none_or(|e| e == types.len())
                && uniform
                && separated
                && all_types;
            ok &= good;
            detail.push(format!("{}:{}/{}", g.name(), t.class_count(), types.len()));
        }
        Ok((ok, detail.join(" ")))
    })
}

/// Wall signs of the rational unipotent blocks.
pub fn criterion_3() -> CriterionResult {
    timed(3, "Wall signs", || {
        let mut ok = true;
        let mut checked = 0;
        for q in [3, 5, 7] {
            let fq = f(q);
            let nu = fq.nonsquare().expect("odd q");
            for k in [1usize, 2] {
                for eps in [Fe::ONE, nu] {
                    let u = mat::j_block_eps(&fq, 2 * k, eps)?;
                    let r = wall_forms(&fq, &u, 1)?;
                    let two = fq.from_int(2);
                    let mut v = fq.mul(fq.pow(two, (2 * k - 1) as u64), eps);
                    if k % 2 == 0 {
                        v = fq.neg(v);
                    }
                    let expected = fq.sign_class(v)?;
                    ok &= r.len() == 1 && r[0].size as usize == 2 * k && r[0].mult == 1 && r[0].sign == expected;
                    checked += 1;
                }
                let u = mat::j_block(&fq, 4 * k + 2)?;
                let r = wall_forms(&fq, &u, 1)?;
                ok &= r.len() == 1 && r[0].mult == 2 && r[0].sign == -1 && r[0].size as usize == 2 * k + 1;
                checked += 1;
            }
        }
        Ok((ok, format!("{checked} blocks")))
    })
}

/// Reflection length against fixed space and modified weight, constant on classes.
pub fn criterion_4(cfg: &SelftestConfig) -> CriterionResult {
    timed(4, "reflection length", || {
        let g = Group::sp(&f(3), 2)?;
        let fq = &g.field;
        let t = table(cfg, &g)?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut ok = true;
        let reps = t.class_reps();
        for &r in &reps {
            let u = t.element(r);
            let rl = refl_length(fq, &u);
            let modified = g.type_of(&u)?.modify(fq);
            ok &= rl == 2 * g.n - fixed_dim(fq, &u) && rl == modified.weight();
            for _ in 0..1000 {
                let x = t.element(rng.gen_range(0..t.len()));
                let c = x.inverse(fq)?.mul(&u, fq).mul(&x, fq);
                ok &= refl_length(fq, &c) == rl;
            }
        }
        Ok((ok, format!("{} classes x 1000 conjugates", reps.len())))
    })
}

/// Class representatives of SL_2(3) = Sp_1(3), one per type.
fn sl2_reps() -> Result<Vec<mat::Matrix>> {
    let fq = f(3);
    Group::sp(&fq, 1)?.types()?.iter().map(|t| classify::build_rep(&fq, t)).collect()
}

/// Centralizer growth for the non-identity classes of Sp_1(3).
pub fn criterion_5(cfg: &SelftestConfig) -> CriterionResult {
    timed(5, "centralizer growth", || {
        let fq = f(3);
        let reps: Vec<_> = sl2_reps()?.into_iter().filter(|u| !u.is_identity()).collect();
        let mut ok = true;
        let mut covered = 0;
        let mut total = 0;
        for n in [2, 3] {
            for u in &reps {
                total += 1;
                match growth_check_sp(&fq, u, 1, n, cfg.budgets.filter) {
                    Ok(r) => {
                        covered += 1;
                        ok &= r.status == Status::Pass;
                    }
                    Err(Error::Budget { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        let coverage = covered as f64 / total as f64;
        Ok((ok && coverage >= 0.8, format!("{covered}/{total} checks within budget")))
    })
}

/// Intersection growth for all reflection-length additive pairs of SL_2(3).
pub fn criterion_6(cfg: &SelftestConfig) -> CriterionResult {
    timed(6, "intersection growth", || {
        let fq = f(3);
        let reps = sl2_reps()?;
        let (mut ok, mut pass, mut outside) = (true, 0, 0);
        for u1 in &reps {
            for u2 in &reps {
                if refl_length(&fq, u1) + refl_length(&fq, u2) != refl_length(&fq, &u1.mul(u2, &fq)) {
                    continue;
                }
                let r = intersection_growth_check(&fq, u1, u2, 1, 2, cfg.budgets.filter)?;
                match r.status {
                    Status::Pass => pass += 1,
                    Status::Fail => ok = false,
                    Status::OutOfHypothesis => outside += 1,
                }
            }
        }
        Ok((ok, format!("{pass} additive pairs equal, {outside} with identity-block product")))
    })
}

/// One product `K_λ K_μ` evaluated at two ranks.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionCheck {
    pub lambda: Value,
    pub mu: Value,
    /// `(Σ c |η|, |λ| |μ|)` at the lower and the upper rank.
    pub mass: [(u128, u128); 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleCheck {
    pub lambda: Value,
    pub mu: Value,
    pub eta: Value,
    pub c1: u64,
    pub c2: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub kind: &'static str,
    pub q: usize,
    pub n1: usize,
    pub n2: usize,
    pub triples: Vec<TripleCheck>,
    pub unstable: usize,
    pub non_monotone: usize,
    pub expansions: Vec<ExpansionCheck>,
    pub mass_failures: usize,
    pub passed: bool,
}

fn lookup(terms: &[Term], eta: &ClassType) -> u64 {
    terms.iter().find(|t| &t.eta == eta).map_or(0, |t| t.c)
}

/// Top-degree constants of GL or Sp at ranks n1 < n2, over all triples
/// realizable at n1, with mass checks on every expansion.
pub fn stability_check(kind: Kind, field: &Fq, n1: usize, n2: usize, budgets: Budgets) -> Result<StabilityReport> {
    if n1 > n2 {
        return Err(crate::error::invalid("n1 must not exceed n2"));
    }
    let lo = Center::new(Group::new(kind, field.clone(), n1)?, budgets);
    let hi = Center::new(Group::new(kind, field.clone(), n2)?, budgets);
    let types = lo.modified_types()?;
    let mut triples = Vec::new();
    let mut expansions = Vec::new();
    let (mut unstable, mut non_monotone, mut mass_failures) = (0, 0, 0);
    for lambda in &types {
        for mu in &types {
            let e1 = lo.product_expand(lambda, mu)?;
            let e2 = hi.product_expand(lambda, mu)?;
            let m1 = lo.mass(lambda, mu, &e1)?;
            let m2 = hi.mass(lambda, mu, &e2)?;
            mass_failures += (m1.0 != m1.1) as usize + (m2.0 != m2.1) as usize;
            expansions.push(ExpansionCheck { lambda: lambda.to_json(field), mu: mu.to_json(field), mass: [m1, m2] });
            for eta in &types {
                let (c1, c2) = (lookup(&e1, eta), lookup(&e2, eta));
                non_monotone += (c1 > c2) as usize;
                if eta.weight() == lambda.weight() + mu.weight() {
                    unstable += (c1 != c2) as usize;
                    triples.push(TripleCheck {
                        lambda: lambda.to_json(field),
                        mu: mu.to_json(field),
                        eta: eta.to_json(field),
                        c1,
                        c2,
                    });
                }
            }
        }
    }
    let passed = unstable == 0 && non_monotone == 0 && mass_failures == 0;
    Ok(StabilityReport {
        kind: kind.name(),
        q: field.q(),
        n1,
        n2,
        triples,
        unstable,
        non_monotone,
        expansions,
        mass_failures,
        passed,
    })
}

fn stability_summary(r: &StabilityReport) -> String {
    format!(
        "{}({}) n={}->{}: {} top triples, {} unstable, {} non-monotone",
        r.kind, r.q, r.n1, r.n2, r.triples.len(), r.unstable, r.non_monotone
    )
}

pub fn criterion_7(cfg: &SelftestConfig) -> (CriterionResult, Vec<StabilityReport>) {
    let mut runs = Vec::new();
    let res = timed(7, "stability (Sp)", || {
        let r = stability_check(Kind::Sp, &f(3), 1, 2, cfg.budgets)?;
        let out = (r.unstable == 0 && r.non_monotone == 0 && !r.triples.is_empty(), stability_summary(&r));
        runs.push(r);
        Ok(out)
    });
    (res, runs)
}

pub fn criterion_8(cfg: &SelftestConfig) -> (CriterionResult, Vec<StabilityReport>) {
    let mut runs = Vec::new();
    let res = timed(8, "stability (GL)", || {
        let mut ok = true;
        let mut detail = Vec::new();
        for (q, n1, n2) in [(3, 2, 3), (2, 3, 4)] {
            let r = stability_check(Kind::Gl, &f(q), n1, n2, cfg.budgets)?;
            ok &= r.unstable == 0 && r.non_monotone == 0 && !r.triples.is_empty();
            detail.push(stability_summary(&r));
            runs.push(r);
        }
        Ok((ok, detail.join("; ")))
    });
    (res, runs)
}

/// Top-degree triples of modified cycle types fitting `S_fit`, evaluated over `ns`.
#[derive(Clone, Debug, Serialize)]
pub struct SymStabilityReport {
    pub fit: usize,
    pub ns: Vec<usize>,
    pub triples: Vec<(Partition, Partition, Partition, Vec<u64>)>,
    pub unstable: usize,
    pub passed: bool,
}

pub fn stability_check_sym(fit: usize, ns: std::ops::RangeInclusive<usize>) -> Result<SymStabilityReport> {
    let types: Vec<Partition> = (0..=fit)
        .flat_map(|w| Partition::all(w).into_iter())
        .filter(|p| fh::min_degree(p) <= fit)
        .collect();
    let mut triples = Vec::new();
    let mut unstable = 0;
    for l in &types {
        for m in &types {
            for e in &types {
                if e.weight() != l.weight() + m.weight() {
                    continue;
                }
                let vals = fh::stability_sym(l, m, e, ns.clone())?;
                unstable += vals.iter().any(|&v| v != vals[0]) as usize;
                triples.push((l.clone(), m.clone(), e.clone(), vals));
            }
        }
    }
    Ok(SymStabilityReport { fit, ns: ns.collect(), triples, unstable, passed: unstable == 0 })
}

/// Index polynomiality for all pairs of S_m, over n = m .. m + max(4, deg + 1).
pub fn polynomiality_check_sym(m: usize) -> Result<(usize, usize)> {
    let perms: Vec<fh::Perm> = {
        let mut out = Vec::new();
        for full in Partition::all(m) {
            out.extend(fh::class_elements(&full)?);
        }
        out
    };
    let reps: Vec<fh::Perm> = Partition::all(m).iter().map(fh::perm_of_type).collect();
    let results: Vec<Result<bool>> = reps
        .par_iter()
        .flat_map_iter(|g| perms.iter().map(move |h| (g.clone(), h.clone())))
        .map(|(g, h)| {
            let union = fh::support(&g).union(&fh::support(&h)).count();
            let deg = union - fh::support(&g.compose(&h)).len();
            let top = m + 4.max(deg + 1);
            let vals = (m..=top).map(|n| fh::index_function(&g, &h, n).map(|v| v as i128)).collect::<Result<Vec<_>>>()?;
            Ok(fh::is_polynomial_of_degree(&vals, deg))
        })
        .collect();
    let mut good = 0;
    let total = results.len();
    for r in results {
        good += r? as usize;
    }
    Ok((good, total))
}

pub fn criterion_9() -> CriterionResult {
    timed(9, "symmetric group baseline", || {
        let one = Partition::new(vec![1]);
        let two = Partition::new(vec![2]);
        let base = fh::stability_sym(&one, &one, &two, 3..=8)?;
        let s = stability_check_sym(5, 5..=8)?;
        let (good, total) = polynomiality_check_sym(4)?;
        let ok = base.iter().all(|&c| c == 3) && s.passed && good == total;
        Ok((ok, format!("c=3 for n=3..8; {} triples stable; {good}/{total} windows polynomial", s.triples.len())))
    })
}

pub fn criterion_10() -> CriterionResult {
    timed(10, "commutant shapes", || {
        let mut ok = true;
        let mut count = 0;
        for q in [3, 5] {
            let fq = f(q);
            for blocks in block_combinations(&fq, 10) {
                let r = shape_check(&fq, &blocks)?;
                ok &= r.holds();
                count += 1;
            }
        }
        Ok((ok, format!("{count} block combinations")))
    })
}

pub fn criterion_11(runs: &[StabilityReport]) -> CriterionResult {
    timed(11, "mass conservation", || {
        let n: usize = runs.iter().map(|r| r.expansions.len() * 2).sum();
        let bad: usize = runs.iter().map(|r| r.mass_failures).sum();
        Ok((bad == 0 && n > 0, format!("{n} expansions, {bad} failures")))
    })
}
