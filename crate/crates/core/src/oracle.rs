//! Independent brute-force ground truth at order `p^3`: the group as a
//! multiplication table, its full automorphism group, every equivariant
//! anti-homomorphism `gamma : G -> Aut(G)` (equivalently, every normal
//! regular subgroup of the holomorph), and the count of those whose subgroup
//! is a copy of `G`. Nothing here depends on the structural pipeline.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;


use crate::multilinear::Wedge2Element;
use crate::pigroup::{CaseLabel, GElement, PiSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle supports order p^3 with p in {{3, 5}}, got p = {0}")]
    TooLarge(u64),
    #[error("candidate count {required} exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
}

/// A permutation of group-element indices; `perm[x]` is the image of `x`.
pub type Perm = Vec<u16>;

/// `apply f, then g` (maps compose left to right).
pub fn compose(f: &Perm, g: &Perm) -> Perm {
    f.iter().map(|&x| g[x as usize]).collect()
}

pub fn perm_inverse(f: &Perm) -> Perm {
    let mut inv = vec![0u16; f.len()];
    for (x, &y) in f.iter().enumerate() {
        inv[y as usize] = x as u16;
    }
    inv
}

pub fn perm_identity(n: usize) -> Perm {
    (0..n as u16).collect()
}

pub fn perm_pow(f: &Perm, mut e: u64) -> Perm {
    let mut acc = perm_identity(f.len());
    let mut base = f.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = compose(&acc, &base);
        }
        base = compose(&base, &base);
        e >>= 1;
    }
    acc
}

/// The order-`p^3` group as explicit tables.
pub struct SmallGroup {
    pub spec: PiSpec,
    pub elements: Vec<GElement>,
    pub mult: Vec<Vec<u16>>,
    pub inv: Vec<u16>,
    pub orders: Vec<u64>,
    pub id: u16,
    /// Indices of the generators x1, x2.
    pub gens: [u16; 2],
    index: HashMap<GElement, u16>,
}

impl SmallGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, x: &GElement) -> u16 {
        self.index[x]
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mult[a as usize][b as usize]
    }

    pub fn pow(&self, a: u16, mut e: u64) -> u16 {
        let mut acc = self.id;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn comm(&self, a: u16, b: u16) -> u16 {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv[ba as usize], ab)
    }

    /// Right-translation permutation `z -> z a`.
    pub fn rho(&self, a: u16) -> Perm {
        (0..self.order()).map(|z| self.mult[z][a as usize]).collect()
    }
}

/// Builds the order-`p^3` table group for the two-generator spec and verifies
/// it is a group.
pub fn build_small_group(spec: &PiSpec) -> Result<SmallGroup, OracleError> {
    assert_eq!(spec.n(), 2, "the oracle works at n = 2");
    let p = spec.p();
    if p != 3 && p != 5 {
        return Err(OracleError::TooLarge(p));
    }
    let order = (p * p * p) as usize;
    let mut elements = Vec::with_capacity(order);
    for v1 in 0..p {
        for v2 in 0..p {
            for w in 0..p {
                let v = crate::fp::FpVector::from_i64(&[v1 as i64, v2 as i64], p);
                let mut wc = crate::fp::FpVector::zeros(1, p);
                wc.set(0, w as i64);
                elements.push(spec.element(v, Wedge2Element::from_coeffs(wc)));
            }
        }
    }
    let index: HashMap<GElement, u16> =
        elements.iter().enumerate().map(|(i, e)| (e.clone(), i as u16)).collect();
    let mut mult = vec![vec![0u16; order]; order];
    for (a, x) in elements.iter().enumerate() {
        for (b, y) in elements.iter().enumerate() {
            mult[a][b] = index[&spec.mul(x, y)];
        }
    }
    let id = index[&spec.identity()];
    debug_assert_eq!(id, 0);
    let mut inv = vec![0u16; order];
    for a in 0..order {
        let found = (0..order)
            .find(|&b| mult[a][b] == id && mult[b][a] == id)
            .expect("every element has an inverse");
        inv[a] = found as u16;
    }
    // Group axioms on the finished table.
    for a in 0..order {
        assert_eq!(mult[a][id as usize], a as u16);
        assert_eq!(mult[id as usize][a], a as u16);
    }
    for a in 0..order {
        for b in 0..order {
            for c in 0..order {
                debug_assert_eq!(
                    mult[mult[a][b] as usize][c],
                    mult[a][mult[b][c] as usize],
                    "associativity"
                );
            }
        }
    }
    let mut orders = vec![1u64; order];
    for a in 0..order {
        let mut cur = a as u16;
        let mut ord = 1;
        while cur != id {
            cur = mult[cur as usize][a];
            ord += 1;
        }
        orders[a] = ord;
    }
    let gens = [index[&spec.generator(0)], index[&spec.generator(1)]];
    Ok(SmallGroup { spec: spec.clone(), elements, mult, inv, orders, id, gens, index })
}

/// Every automorphism, by exhaustive generator-image search: `x1 -> a`,
/// `x2 -> b` extends exactly when the defining relations hold and the induced
/// pair is a basis modulo the derived subgroup. Multiplicativity is verified
/// on all pairs rather than taken on faith.
pub fn enumerate_aut(g: &SmallGroup) -> Vec<Perm> {
    let p = g.spec.p();
    let order = g.order();
    let e1 = g.spec.pi().get(0, 0); // x1^p = z^{e1}
    let e2 = g.spec.pi().get(1, 0); // x2^p = z^{e2}
    let mut auts = Vec::new();
    for a in 0..order as u16 {
        for b in 0..order as u16 {
            let c = g.comm(a, b);
            if g.pow(a, p) != g.pow(c, e1) || g.pow(b, p) != g.pow(c, e2) {
                continue;
            }
            // Images must be a basis modulo the derived subgroup.
            let av = &g.elements[a as usize].v;
            let bv = &g.elements[b as usize].v;
            let det = (av.get(0) * bv.get(1) + p * p - av.get(1) * bv.get(0)) % p;
            if det == 0 {
                continue;
            }
            // phi(x1^{v1} x2^{v2} z^w) = a^{v1} b^{v2} c^w.
            let mut perm = vec![0u16; order];
            for (idx, elem) in g.elements.iter().enumerate() {
                let v1 = elem.v.get(0);
                let v2 = elem.v.get(1);
                let w = elem.w.coeffs.get(0);
                let image = g.mul(g.mul(g.pow(a, v1), g.pow(b, v2)), g.pow(c, w));
                perm[idx] = image;
            }
            let mut seen = vec![false; order];
            let bijective = perm.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true));
            if !bijective {
                continue;
            }
            let homomorphic = (0..order).all(|x| {
                (0..order).all(|y| {
                    perm[g.mult[x][y] as usize] == g.mult[perm[x] as usize][perm[y] as usize]
                })
            });
            if homomorphic {
                auts.push(perm);
            }
        }
    }
    auts
}

/// An equivariant anti-homomorphism, stored as the index of `gamma(x)` in the
/// automorphism list for every group element `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaMap {
    pub values: Vec<u16>,
}

/// All `gamma` determined by images of the two generators that extend to
/// well-defined anti-homomorphisms and are equivariant under every
/// automorphism.
pub fn enumerate_gamma(
    g: &SmallGroup,
    auts: &[Perm],
    budget: u128,
) -> Result<Vec<GammaMap>, OracleError> {
    let p = g.spec.p();
    let order = g.order();
    let required = (auts.len() as u128) * (auts.len() as u128);
    if required > budget {
        return Err(OracleError::BudgetExceeded { required, budget });
    }
    let aut_index: HashMap<Perm, u16> =
        auts.iter().enumerate().map(|(i, a)| (a.clone(), i as u16)).collect();
    let aut_inverses: Vec<Perm> = auts.iter().map(perm_inverse).collect();
    let aut_pth: Vec<Perm> = auts.iter().map(|a| perm_pow(a, p)).collect();
    let e1 = g.spec.pi().get(0, 0);

    // Pre-filter the second image: gamma(x2)^p = gamma(x2^p) = gamma(1) = 1.
    let b_candidates: Vec<usize> =
        (0..auts.len()).filter(|&bi| aut_pth[bi] == perm_identity(order)).collect();

    let mut out = Vec::new();
    for ai in 0..auts.len() {
        let a = &auts[ai];
        for &bi in &b_candidates {
            let b = &auts[bi];
            // gamma(z) = gamma(x1^{-1} x2^{-1} x1 x2) = B A B^{-1} A^{-1}.
            let gz = compose(&compose(&compose(b, a), &aut_inverses[bi]), &aut_inverses[ai]);
            // gamma(x1^p) = gamma(x1)^p must equal gamma(z)^{e1}.
            if aut_pth[ai] != perm_pow(&gz, e1) {
                continue;
            }
            // Extend by the normal form and check it stays inside Aut(G).
            let mut values = Vec::with_capacity(order);
            let mut valid = true;
            for elem in &g.elements {
                let v1 = elem.v.get(0);
                let v2 = elem.v.get(1);
                let w = elem.w.coeffs.get(0);
                let perm = compose(
                    &compose(&perm_pow(&gz, w), &perm_pow(b, v2)),
                    &perm_pow(a, v1),
                );
                match aut_index.get(&perm) {
                    Some(&idx) => values.push(idx),
                    None => {
                        valid = false;
                        break;
                    }
                }
            }
            if !valid {
                continue;
            }
            // Equivariance against every automorphism, on the generators.
            let equivariant = auts.iter().zip(&aut_inverses).all(|(beta, beta_inv)| {
                [ai, bi].into_iter().zip(g.gens).all(|(gi, gen)| {
                    let image = beta[gen as usize];
                    let lhs = &auts[values[image as usize] as usize];
                    let rhs = compose(&compose(beta_inv, &auts[gi]), beta);
                    *lhs == rhs
                })
            });
            if !equivariant {
                continue;
            }
            // Full anti-homomorphism consistency across all products.
            let antihom = (0..order).all(|x| {
                (0..order).all(|y| {
                    let lhs = &auts[values[g.mult[x][y] as usize] as usize];
                    let rhs = compose(
                        &auts[values[y] as usize],
                        &auts[values[x] as usize],
                    );
                    *lhs == rhs
                })
            });
            if !antihom {
                continue;
            }
            // Full equivariance across all elements.
            let fully_equivariant = auts.iter().zip(&aut_inverses).all(|(beta, beta_inv)| {
                (0..order).all(|x| {
                    let image = beta[x];
                    let lhs = &auts[values[image as usize] as usize];
                    let rhs =
                        compose(&compose(beta_inv, &auts[values[x] as usize]), beta);
                    *lhs == rhs
                })
            });
            if !fully_equivariant {
                continue;
            }
            debug_assert_eq!(values[g.id as usize], aut_index[&perm_identity(order)]);
            out.push(GammaMap { values });
        }
    }
    Ok(out)
}

/// The regular subgroup `N_gamma = {gamma(x) rho(x)}` as label tables, with
/// regularity and holomorph-normalization verified.
pub struct NGamma {
    pub mult: Vec<Vec<u16>>,
    pub orders: Vec<u64>,
}

pub fn n_gamma(g: &SmallGroup, auts: &[Perm], gamma: &GammaMap) -> NGamma {
    let order = g.order();
    // perm_x = gamma(x) then rho(x); its label product is x^(gamma(y)) y.
    let perms: Vec<Perm> = (0..order)
        .map(|x| compose(&auts[gamma.values[x] as usize], &g.rho(x as u16)))
        .collect();
    // Regularity: the perms are pairwise distinct and 1 -> x covers G.
    let distinct: HashSet<&Perm> = perms.iter().collect();
    assert_eq!(distinct.len(), order, "N_gamma is not regular");
    for (x, perm) in perms.iter().enumerate() {
        assert_eq!(perm[g.id as usize] as usize, x, "labels must be the images of 1");
    }
    // Closure as a permutation group, with the label table.
    let perm_label: HashMap<&Perm, u16> =
        perms.iter().enumerate().map(|(x, p)| (p, x as u16)).collect();
    let mut mult = vec![vec![0u16; order]; order];
    for x in 0..order {
        for y in 0..order {
            let prod = compose(&perms[x], &perms[y]);
            let label = perm_label.get(&prod).expect("N_gamma closed under composition");
            mult[x][y] = *label;
        }
    }
    // Normalized by the holomorph: conjugation by translations and by every
    // automorphism keeps the set.
    let perm_set: HashSet<Perm> = perms.iter().cloned().collect();
    for t in g.gens {
        let rho_t = g.rho(t);
        let rho_t_inv = perm_inverse(&rho_t);
        for perm in &perms {
            let conj = compose(&compose(&rho_t_inv, perm), &rho_t);
            assert!(perm_set.contains(&conj), "N_gamma not normalized by translations");
        }
    }
    for beta in auts {
        let beta_inv = perm_inverse(beta);
        for perm in &perms {
            let conj = compose(&compose(&beta_inv, perm), beta);
            assert!(perm_set.contains(&conj), "N_gamma not normalized by Aut(G)");
        }
    }
    let id = perm_label[&perm_identity(order)];
    debug_assert_eq!(id, g.id);
    let mut orders = vec![1u64; order];
    for a in 0..order {
        let mut cur = a as u16;
        let mut ord = 1;
        while cur != id {
            cur = mult[cur as usize][a];
            ord += 1;
        }
        orders[a] = ord;
    }
    NGamma { mult, orders }
}

/// Is the label group of `n` isomorphic to `g`? Brute-force generator-image
/// search with element-order pruning.
pub fn isomorphic_to_g(g: &SmallGroup, n: &NGamma) -> bool {
    let order = g.order();
    // Order multisets must match.
    let mut a_orders = n.orders.clone();
    let mut b_orders = g.orders.clone();
    a_orders.sort_unstable();
    b_orders.sort_unstable();
    if a_orders != b_orders {
        return false;
    }
    // Find a generating pair of n.
    let closure = |g1: u16, g2: u16| -> Option<Vec<(u16, Vec<u16>)>> {
        // BFS recording, for each reached element, its word over {g1, g2}.
        let mut words: HashMap<u16, Vec<u16>> = HashMap::new();
        words.insert(g.id, Vec::new());
        let mut queue = VecDeque::from([g.id]);
        while let Some(x) = queue.pop_front() {
            for (slot, gen) in [g1, g2].into_iter().enumerate() {
                let y = n.mult[x as usize][gen as usize];
                if !words.contains_key(&y) {
                    let mut w = words[&x].clone();
                    w.push(slot as u16);
                    words.insert(y, w);
                    queue.push_back(y);
                }
            }
        }
        (words.len() == order).then(|| {
            let mut list: Vec<(u16, Vec<u16>)> =
                words.into_iter().map(|(k, v)| (k, v)).collect();
            list.sort_unstable_by_key(|(k, _)| *k);
            list
        })
    };
    let mut pair = None;
    'outer: for g1 in 0..order as u16 {
        for g2 in 0..order as u16 {
            if let Some(words) = closure(g1, g2) {
                pair = Some((g1, g2, words));
                break 'outer;
            }
        }
    }
    let Some((g1, g2, words)) = pair else {
        return false; // not 2-generated, certainly not G
    };
    let (o1, o2) = (n.orders[g1 as usize], n.orders[g2 as usize]);
    for a in 0..order as u16 {
        if g.orders[a as usize] != o1 {
            continue;
        }
        for b in 0..order as u16 {
            if g.orders[b as usize] != o2 {
                continue;
            }
            // phi by words, then full multiplicativity with early exit.
            let mut phi = vec![0u16; order];
            for (x, word) in &words {
                let mut acc = g.id;
                for &slot in word {
                    acc = g.mul(acc, if slot == 0 { a } else { b });
                }
                phi[*x as usize] = acc;
            }
            let mut seen = vec![false; order];
            if !phi.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true)) {
                continue;
            }
            let hom = (0..order).all(|x| {
                (0..order).all(|y| {
                    phi[n.mult[x][y] as usize] == g.mult[phi[x] as usize][phi[y] as usize]
                })
            });
            if hom {
                return true;
            }
        }
    }
    false
}

/// Number of normal regular subgroups of the holomorph isomorphic to `G`:
/// the brute-force value of `|T(G)|`.
pub fn count_t(g: &SmallGroup, auts: &[Perm], gammas: &[GammaMap]) -> usize {
    gammas
        .iter()
        .filter(|gamma| {
            let n = n_gamma(g, auts, gamma);
            isomorphic_to_g(g, &n)
        })
        .count()
}

/// Anti-symmetric parameter of the form behind `gamma`, when its image fixes
/// cosets of the derived subgroup: `Delta(x, y) = x^{-1} x^{gamma(y)}` must be
/// central and bilinear, and its anti-symmetric part is `lambda (v1 ∧ v2)`.
pub fn extract_lambda(g: &SmallGroup, auts: &[Perm], gamma: &GammaMap) -> Option<u64> {
    let p = g.spec.p();
    let mut delta = [[0u64; 2]; 2];
    for (i, &xi) in g.gens.iter().enumerate() {
        for (j, &yj) in g.gens.iter().enumerate() {
            let moved = auts[gamma.values[yj as usize] as usize][xi as usize];
            let z = g.mul(g.inv[xi as usize], moved);
            let elem = &g.elements[z as usize];
            if !elem.v.is_zero() {
                return None; // image moved the coset: not a form over V
            }
            delta[i][j] = elem.w.coeffs.get(0);
        }
    }
    let half = crate::fp::FpScalar::new(2, p).inv().unwrap().value();
    Some(((delta[0][1] + p - delta[1][0]) % p * half) % p)
}

/// Convenience wrapper: the full oracle run for the order-`p^3` family.
pub fn oracle_count(p: u64, budget: u128) -> Result<OracleSummary, OracleError> {
    let spec = PiSpec::catalog(CaseLabel::N2, p).map_err(|_| OracleError::TooLarge(p))?;
    let g = build_small_group(&spec)?;
    let auts = enumerate_aut(&g);
    let gammas = enumerate_gamma(&g, &auts, budget)?;
    let count = count_t(&g, &auts, &gammas);
    Ok(OracleSummary {
        p,
        group_order: g.order(),
        aut_count: auts.len(),
        gamma_count: gammas.len(),
        t_count: count,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct OracleSummary {
    pub p: u64,
    pub group_order: usize,
    pub aut_count: usize,
    pub gamma_count: usize,
    pub t_count: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_group_basics() {
        let spec = PiSpec::catalog(CaseLabel::N2, 3).unwrap();
        let g = build_small_group(&spec).unwrap();
        assert_eq!(g.order(), 27);
        assert_eq!(g.mult[g.id as usize], (0..27).collect::<Vec<_>>());
        let col: Vec<u16> = (0..27).map(|r| g.mult[r][g.id as usize]).collect();
        assert_eq!(col, (0..27).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_large_primes() {
        let spec = PiSpec::catalog(CaseLabel::N2, 7).unwrap();
        assert!(matches!(build_small_group(&spec), Err(OracleError::TooLarge(7))));
    }

    #[test]
    fn aut_count_27() {
        let spec = PiSpec::catalog(CaseLabel::N2, 3).unwrap();
        let g = build_small_group(&spec).unwrap();
        let auts = enumerate_aut(&g);
        // Independent count: valid images are a = x1^i x2^j z^k with i != 0
        // (so a has order 9) and b = x2^v z^w with v = 1 forced by the power
        // relation; that is (p-1) p^3 pairs.
        assert_eq!(auts.len(), 54);
        for a in &auts {
            assert_eq!(a[g.id as usize], g.id);
        }
    }

    #[test]
    fn gamma_and_t_count_p3() {
        let spec = PiSpec::catalog(CaseLabel::N2, 3).unwrap();
        let g = build_small_group(&spec).unwrap();
        let auts = enumerate_aut(&g);
        let gammas = enumerate_gamma(&g, &auts, 1 << 30).unwrap();
        // At least the scalar-form family, one per lambda in F_3.
        assert!(gammas.len() >= 3, "found {}", gammas.len());
        // The constant-identity gamma is present.
        let id_perm = perm_identity(g.order());
        let id_idx = auts.iter().position(|a| *a == id_perm).unwrap() as u16;
        assert!(gammas.iter().any(|gm| gm.values.iter().all(|&v| v == id_idx)));
        assert_eq!(count_t(&g, &auts, &gammas), 2);
        // Counted gammas restrict to scalar forms with 1 + 2 lambda != 0.
        for gamma in &gammas {
            let n = n_gamma(&g, &auts, gamma);
            if isomorphic_to_g(&g, &n) {
                let lambda = extract_lambda(&g, &auts, gamma).expect("form-backed gamma");
                assert_ne!((1 + 2 * lambda) % 3, 0);
            }
        }
    }
}
