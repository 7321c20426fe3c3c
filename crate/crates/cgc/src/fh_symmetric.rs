//! The symmetric group case: cycle types, reflection length, class algebra
//! structure constants and their behaviour in n.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rayon::prelude::*;

use crate::combin::Partition;
use crate::error::{invalid, Error, Result};

/// Largest n for which class orbits are enumerated.
pub const MAX_N: usize = 9;

/// A permutation of {0..n-1}, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u8).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(invalid("not a bijection"));
            }
        }
        Ok(Perm(images.into_iter().map(|i| i as u8).collect()))
    }

    /// From disjoint cycles written 1-based, e.g. `&[&[3, 4, 5], &[7, 8]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Perm> {
        let mut img: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for c in cycles {
            for (k, &a) in c.iter().enumerate() {
                if a == 0 || a > n || std::mem::replace(&mut used[a - 1], true) {
                    return Err(invalid("cycles are not disjoint points of 1..n"));
                }
                img[a - 1] = c[(k + 1) % c.len()] - 1;
            }
        }
        Perm::from_images(img)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.n()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm(inv)
    }

    /// Extends by fixed points to S_n.
    pub fn embed(&self, n: usize) -> Result<Perm> {
        if n < self.n() {
            return Err(invalid("cannot embed into a smaller symmetric group"));
        }
        let mut v = self.0.clone();
        v.extend(self.n() as u8..n as u8);
        Ok(Perm(v))
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }
}

/// Cycle lengths, fixed points included.
pub fn cycle_type(g: &Perm) -> Partition {
    Partition::new(g.cycles().iter().map(|c| c.len() as u32).collect())
}

/// Points moved by `g` (0-based).
pub fn support(g: &Perm) -> BTreeSet<usize> {
    (0..g.n()).filter(|&i| g.apply(i) != i).collect()
}

/// n minus the number of cycles.
pub fn refl_length_perm(g: &Perm) -> usize {
    g.n() - g.cycles().len()
}

/// Cycle type with every part shortened by one.
pub fn modified_cycle_type(g: &Perm) -> Partition {
    cycle_type(g).modify()
}

/// Smallest n at which a modified cycle type is realizable.
pub fn min_degree(modified: &Partition) -> usize {
    modified.weight() + modified.len()
}

/// Full cycle type in S_n of a modified cycle type.
pub fn ncomplete(modified: &Partition, n: usize) -> Result<Partition> {
    modified.ncomplete(n)
}

/// The permutation with consecutive cycles of the given lengths.
pub fn perm_of_type(full: &Partition) -> Perm {
    let n = full.weight();
    let mut img: Vec<usize> = (0..n).collect();
    let mut start = 0;
    for &l in full.parts() {
        let l = l as usize;
        for k in 0..l {
            img[start + k] = start + (k + 1) % l;
        }
        start += l;
    }
    Perm::from_images(img).expect("valid cycles")
}

/// |C_{S_n}(g)| for g of the given cycle type: Π i^{m_i} m_i!.
pub fn centralizer_order_sym(full: &Partition) -> u128 {
    full.multiplicities()
        .iter()
        .map(|&(i, m)| (i as u128).pow(m) * factorial(m as usize))
        .product()
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn class_size_sym(full: &Partition) -> u128 {
    factorial(full.weight()) / centralizer_order_sym(full)
}

/// The conjugacy class of a full cycle type, by BFS under adjacent transpositions.
pub fn class_elements(full: &Partition) -> Result<Vec<Perm>> {
    let n = full.weight();
    if n > MAX_N {
        return Err(Error::Budget { what: format!("S_{n} class enumeration"), limit: MAX_N as u64 });
    }
    let gens: Vec<Perm> = (0..n.saturating_sub(1))
        .map(|i| {
            let mut v: Vec<usize> = (0..n).collect();
            v.swap(i, i + 1);
            Perm::from_images(v).expect("transposition")
        })
        .collect();
    let start = perm_of_type(full);
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for s in &gens {
            let y = s.compose(&x).compose(s);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Perm> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// c^η_{λ,μ}(n) for modified cycle types, by counting the fiber over a fixed z of type η.
pub fn sc_symmetric(lambda: &Partition, mu: &Partition, eta: &Partition, n: usize) -> Result<u64> {
    if n > MAX_N {
        return Err(Error::Budget { what: format!("S_{n} structure constant"), limit: MAX_N as u64 });
    }
    let (lf, mf, ef) = (lambda.ncomplete(n)?, mu.ncomplete(n)?, eta.ncomplete(n)?);
    let z = perm_of_type(&ef);
    let class = class_elements(&lf)?;
    Ok(class.par_iter().filter(|x| cycle_type(&x.inverse().compose(&z)) == mf).count() as u64)
}

/// Nonzero terms of `K_λ K_μ` in the class algebra of S_n, keyed by modified type.
pub fn product_expand_sym(lambda: &Partition, mu: &Partition, n: usize) -> Result<Vec<(Partition, u64)>> {
    let mut out = Vec::new();
    for full in Partition::all(n) {
        let eta = full.modify();
        let c = sc_symmetric(lambda, mu, &eta, n)?;
        if c > 0 {
            out.push((eta, c));
        }
    }
    Ok(out)
}

/// |C(g) ∩ C(h)| in S_n, by backtracking over images compatible with both.
pub fn joint_centralizer_order(g: &Perm, h: &Perm) -> u128 {
    let n = g.n();
    assert_eq!(n, h.n(), "permutations of different degrees");
    let maps = [g.clone(), h.clone(), g.inverse(), h.inverse()];
    fn go(maps: &[Perm; 4], sigma: &mut Vec<Option<usize>>, used: &mut Vec<bool>) -> u128 {
        let Some(i) = sigma.iter().position(Option::is_none) else {
            return 1;
        };
        let n = sigma.len();
        let mut total = 0;
        for j in 0..n {
            if used[j] {
                continue;
            }
            // propagate σ(i) = j along the orbit of i under <g, h>
            let mut assigned = Vec::new();
            let mut ok = true;
            let mut stack = vec![(i, j)];
            while let Some((a, b)) = stack.pop() {
                match sigma[a] {
                    Some(x) if x == b => continue,
                    Some(_) => {
                        ok = false;
                        break;
                    }
                    None if used[b] => {
                        ok = false;
                        break;
                    }
                    None => {
                        sigma[a] = Some(b);
                        used[b] = true;
                        assigned.push(a);
                        for m in maps {
                            stack.push((m.apply(a), m.apply(b)));
                        }
                    }
                }
            }
            if ok {
                total += go(maps, sigma, used);
            }
            for a in assigned {
                used[sigma[a].take().expect("assigned")] = false;
            }
        }
        total
    }
    go(&maps, &mut vec![None; n], &mut vec![false; n])
}

/// |C_{S_n}(gh)| / |C_{S_n}(g) ∩ C_{S_n}(h)| for g, h embedded in S_n.
pub fn index_function(g: &Perm, h: &Perm, n: usize) -> Result<u128> {
    let (g, h) = (g.embed(n)?, h.embed(n)?);
    let num = centralizer_order_sym(&cycle_type(&g.compose(&h)));
    let den = joint_centralizer_order(&g, &h);
    if !num.is_multiple_of(den) {
        return Err(Error::Inconsistent(format!("index {num}/{den} is not an integer")));
    }
    Ok(num / den)
}

/// Forward differences of order k.
pub fn differences(values: &[i128], k: usize) -> Vec<i128> {
    let mut v = values.to_vec();
    for _ in 0..k {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    v
}

/// True if the values are those of a polynomial of exactly this degree:
/// the deg-th differences are a nonzero constant and the next ones vanish.
pub fn is_polynomial_of_degree(values: &[i128], deg: usize) -> bool {
    if values.len() < deg + 2 {
        return false;
    }
    let d = differences(values, deg);
    d.iter().all(|&x| x == d[0] && x != 0)
}

/// Value of c^η_{λ,μ}(n) for each n in the range, or the first disagreement.
pub fn stability_sym(lambda: &Partition, mu: &Partition, eta: &Partition, ns: std::ops::RangeInclusive<usize>) -> Result<Vec<u64>> {
    ns.map(|n| sc_symmetric(lambda, mu, eta, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    // Oracle: every permutation of S_n.
    fn all_perms(n: usize) -> Vec<Perm> {
        (0..n).permutations(n).map(|v| Perm::from_images(v).unwrap()).collect()
    }

    #[test]
    fn example_perm() {
        let g = Perm::from_cycles(8, &[&[3, 4, 5], &[7, 8]]).unwrap();
        assert_eq!(cycle_type(&g), p(&[3, 2, 1, 1, 1]));
        assert_eq!(refl_length_perm(&g), 3);
        assert_eq!(cycle_type(&g.embed(10).unwrap()), p(&[3, 2, 1, 1, 1, 1, 1]));
        assert_eq!(cycle_type(&Perm::identity(4)), p(&[1, 1, 1, 1]));
        assert_eq!(refl_length_perm(&Perm::identity(4)), 0);
        let n_cycle = Perm::from_cycles(5, &[&[1, 2, 3, 4, 5]]).unwrap();
        assert_eq!(refl_length_perm(&n_cycle), 4);
        assert_eq!(support(&g), BTreeSet::from([2, 3, 4, 6, 7]));
        assert_eq!(modified_cycle_type(&g).weight(), refl_length_perm(&g));
    }

    #[test]
    fn transpositions_to_three_cycle() {
        for n in 3..=8 {
            assert_eq!(sc_symmetric(&p(&[1]), &p(&[1]), &p(&[2]), n).unwrap(), 3);
        }
        // brute force in S_3
        let perms = all_perms(3);
        let z = perm_of_type(&p(&[3]));
        let c = perms
            .iter()
            .filter(|x| cycle_type(x) == p(&[2, 1]) && cycle_type(&x.inverse().compose(&z)) == p(&[2, 1]))
            .count();
        assert_eq!(c, 3);
        assert_eq!(sc_symmetric(&p(&[1]), &p(&[1]), &p(&[]), 4).unwrap(), 6);
        assert_eq!(sc_symmetric(&p(&[1]), &p(&[1]), &p(&[3]), 5).unwrap(), 0);
        assert!(sc_symmetric(&p(&[1]), &p(&[1]), &p(&[2]), 10).is_err());
    }

    #[test]
    fn class_sizes_and_mass() {
        for n in 1..=6 {
            let perms = all_perms(n);
            for full in Partition::all(n) {
                let k = perms.iter().filter(|g| cycle_type(g) == full).count() as u128;
                assert_eq!(k, class_size_sym(&full));
                assert_eq!(class_elements(&full).unwrap().len() as u128, k);
            }
        }
        let lam = p(&[1]);
        let mu = p(&[2]);
        let terms = product_expand_sym(&lam, &mu, 5).unwrap();
        let lhs: u128 = terms.iter().map(|(e, c)| *c as u128 * class_size_sym(&e.ncomplete(5).unwrap())).sum();
        let rhs = class_size_sym(&lam.ncomplete(5).unwrap()) * class_size_sym(&mu.ncomplete(5).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn joint_centralizer_matches_scan() {
        let perms = all_perms(5);
        for g in perms.iter().step_by(7) {
            for h in perms.iter().step_by(11) {
                let scan = perms
                    .iter()
                    .filter(|s| s.compose(g) == g.compose(s) && s.compose(h) == h.compose(s))
                    .count() as u128;
                assert_eq!(joint_centralizer_order(g, h), scan);
            }
        }
    }

    #[test]
    fn polynomial_detection() {
        let v: Vec<i128> = (4..10).map(|n: i128| n * (n - 1)).collect();
        assert!(is_polynomial_of_degree(&v, 2));
        assert!(!is_polynomial_of_degree(&v, 1));
        assert!(!is_polynomial_of_degree(&v, 3));
        assert!(is_polynomial_of_degree(&[5, 5, 5], 0));
    }
}
