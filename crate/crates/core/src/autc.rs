//! The groups `Aut_c(pi) = { alpha in GL(V) : pi alpha_hat = alpha pi }`:
//! membership, explicit generating sets for the built-in families, exhaustive
//! enumeration at small primes, and the check that no non-trivial equivariant
//! homomorphism `V -> Aut_c(pi)` exists.

use std::collections::HashSet;

use thiserror::Error;

use crate::fp::{enumerate_matrices, FpError, FpMatrix, FpVector, ShapeMask};
use crate::multilinear::induced_hat;
use crate::pigroup::{CaseLabel, PiSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutcError {
    #[error("matrix is singular")]
    Singular,
    #[error("no generator catalog for label {0}")]
    UnknownLabel(String),
    #[error(transparent)]
    Budget(#[from] FpError),
}

/// An element of `Aut_c(pi)` with its induced action on `Λ²V` cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutcElement {
    pub alpha: FpMatrix,
    pub hat: FpMatrix,
}

impl AutcElement {
    pub fn new(spec: &PiSpec, alpha: FpMatrix) -> Result<Self, AutcError> {
        let hat = induced_hat(&alpha);
        if !alpha.is_invertible() {
            return Err(AutcError::Singular);
        }
        debug_assert!(
            spec.pi().mul(&hat) == alpha.mul(spec.pi()),
            "not a member of Aut_c(pi)"
        );
        Ok(AutcElement { alpha, hat })
    }
}

/// Generators split into the unipotent part `P` and the reductive part `Q` of
/// the semidirect decomposition `Aut_c(pi) = P ⋊ Q`.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub p_gens: Vec<AutcElement>,
    pub q_gens: Vec<AutcElement>,
}

impl GeneratorSet {
    pub fn all(&self) -> impl Iterator<Item = &AutcElement> {
        self.p_gens.iter().chain(self.q_gens.iter())
    }

    pub fn matrices(&self) -> Vec<FpMatrix> {
        self.all().map(|g| g.alpha.clone()).collect()
    }
}

/// Smallest positive primitive root modulo the odd prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    let order = p - 1;
    let mut prime_factors = Vec::new();
    let mut rem = order;
    let mut d = 2;
    while d * d <= rem {
        if rem % d == 0 {
            prime_factors.push(d);
            while rem % d == 0 {
                rem /= d;
            }
        }
        d += 1;
    }
    if rem > 1 {
        prime_factors.push(rem);
    }
    'candidate: for g in 2..p {
        for &q in &prime_factors {
            if crate::fp::FpScalar::new(g as i64, p).pow(order / q).value() == 1 {
                continue 'candidate;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

/// `pi alpha_hat = alpha pi`, with invertibility checked first.
pub fn is_autc(spec: &PiSpec, alpha: &FpMatrix) -> Result<bool, AutcError> {
    if !alpha.is_invertible() {
        return Err(AutcError::Singular);
    }
    let hat = induced_hat(alpha);
    Ok(spec.pi().mul(&hat) == alpha.mul(spec.pi()))
}

fn unit_with(n: usize, p: u64, cells: &[(usize, usize, i64)]) -> FpMatrix {
    let mut m = FpMatrix::identity(n, p);
    for &(i, j, v) in cells {
        m.set(i, j, v);
    }
    m
}

/// The standard generating triple of `GL_2(F_p)`: a primitive-root diagonal,
/// the elementary transvection, and the swap.
fn gl2_generators(p: u64) -> Vec<FpMatrix> {
    let g = primitive_root(p) as i64;
    vec![
        FpMatrix::from_rows_i64(&[vec![g, 0], vec![0, 1]], p),
        FpMatrix::from_rows_i64(&[vec![1, 1], vec![0, 1]], p),
        FpMatrix::from_rows_i64(&[vec![0, 1], vec![1, 0]], p),
    ]
}

/// Embeds a 2x2 block at rows/cols `(at, at+1)` of an identity, with an
/// optional scalar pinned at `(0, 0)`.
fn embed_gl2(n: usize, p: u64, a: &FpMatrix, at: usize, corner: Option<u64>) -> FpMatrix {
    let mut m = FpMatrix::identity(n, p);
    for i in 0..2 {
        for j in 0..2 {
            m.set(at + i, at + j, a.get(i, j) as i64);
        }
    }
    if let Some(c) = corner {
        m.set(0, 0, c as i64);
    }
    m
}

/// Generating set of `GL_n(F_p)`: primitive-root diagonal, one transvection,
/// and an n-cycle permutation.
fn gln_generators(n: usize, p: u64) -> Vec<FpMatrix> {
    let g = primitive_root(p) as i64;
    let mut diag = FpMatrix::identity(n, p);
    diag.set(0, 0, g);
    let trans = unit_with(n, p, &[(0, 1, 1)]);
    let mut cyc = FpMatrix::zeros(n, n, p);
    for i in 0..n {
        cyc.set(i, (i + 1) % n, 1);
    }
    vec![diag, trans, cyc]
}

/// Explicit `P` and `Q` generators for every built-in family. Each `P`
/// generator is the one-parameter matrix with a single parameter set to 1;
/// `Q` generators come from the primitive root and the `GL_2` triple.
pub fn generator_catalog(spec: &PiSpec) -> Result<GeneratorSet, AutcError> {
    let p = spec.p();
    let n = spec.n();
    let g = primitive_root(p) as i64;
    let (p_mats, q_mats): (Vec<FpMatrix>, Vec<FpMatrix>) = match spec.label() {
        CaseLabel::A => (
            vec![unit_with(3, p, &[(0, 1, 1)]), unit_with(3, p, &[(2, 1, 1)])],
            vec![
                unit_with(3, p, &[(0, 0, g)]),
                unit_with(3, p, &[(2, 2, g)]),
            ],
        ),
        CaseLabel::B => (
            vec![unit_with(3, p, &[(0, 1, 1)]), unit_with(3, p, &[(0, 2, 1)])],
            gl2_generators(p)
                .iter()
                .map(|a| embed_gl2(3, p, a, 1, Some(a.det().value())))
                .collect(),
        ),
        CaseLabel::C => {
            let mut q = vec![unit_with(4, p, &[(0, 0, g)])];
            q.extend(gl2_generators(p).iter().map(|a| embed_gl2(4, p, a, 2, None)));
            (
                vec![
                    unit_with(4, p, &[(0, 1, 1)]),
                    unit_with(4, p, &[(2, 1, 1)]),
                    unit_with(4, p, &[(3, 1, 1)]),
                ],
                q,
            )
        }
        CaseLabel::D => {
            let mut q = vec![unit_with(4, p, &[(1, 1, g)])];
            q.extend(
                gl2_generators(p)
                    .iter()
                    .map(|a| embed_gl2(4, p, a, 2, Some(a.det().value()))),
            );
            (
                vec![
                    unit_with(4, p, &[(0, 1, 1)]),
                    unit_with(4, p, &[(0, 2, 1)]),
                    unit_with(4, p, &[(1, 2, 1)]),
                    unit_with(4, p, &[(0, 3, 1)]),
                    unit_with(4, p, &[(1, 3, 1)]),
                ],
                q,
            )
        }
        CaseLabel::E => (
            vec![
                unit_with(4, p, &[(0, 1, 1)]),
                unit_with(4, p, &[(0, 3, 1), (2, 1, 1)]),
                unit_with(4, p, &[(0, 2, -1), (3, 1, 1)]),
            ],
            gl2_generators(p)
                .iter()
                .map(|a| embed_gl2(4, p, a, 2, Some(a.det().value())))
                .collect(),
        ),
        CaseLabel::N2 => (
            vec![unit_with(2, p, &[(0, 1, 1)])],
            vec![unit_with(2, p, &[(0, 0, g)])],
        ),
        CaseLabel::Zero3 | CaseLabel::Zero4 => (Vec::new(), gln_generators(n, p)),
        CaseLabel::Custom => return Err(AutcError::UnknownLabel("custom".into())),
    };
    let build = |mats: Vec<FpMatrix>| -> Result<Vec<AutcElement>, AutcError> {
        mats.into_iter()
            .map(|m| {
                assert!(
                    is_autc(spec, &m).unwrap_or(false),
                    "catalog generator fails membership for {}",
                    spec.label()
                );
                AutcElement::new(spec, m)
            })
            .collect()
    };
    Ok(GeneratorSet { p_gens: build(p_mats)?, q_gens: build(q_mats)? })
}

/// The catalog for built-in labels, or the catalog of the canonical form
/// conjugated back through the change of basis for a rank-one custom map.
/// `None` when neither applies (rank >= 2 custom maps).
pub fn effective_catalog(spec: &PiSpec) -> Result<Option<GeneratorSet>, AutcError> {
    if spec.label() != CaseLabel::Custom {
        return generator_catalog(spec).map(Some);
    }
    let Ok((label, m)) = crate::pigroup::canonical_rank_one(spec) else {
        return Ok(None);
    };
    let target = PiSpec::catalog(label, spec.p()).expect("canonical label");
    let set = generator_catalog(&target)?;
    let m_inv = m.inverse().expect("change of basis is invertible");
    let conjugate = |elems: &[AutcElement]| -> Result<Vec<AutcElement>, AutcError> {
        elems
            .iter()
            .map(|g| AutcElement::new(spec, m_inv.mul(&g.alpha).mul(&m)))
            .collect()
    };
    Ok(Some(GeneratorSet {
        p_gens: conjugate(&set.p_gens)?,
        q_gens: conjugate(&set.q_gens)?,
    }))
}

/// Generators to feed the linear solvers: the (possibly transported) catalog
/// where available, otherwise the full enumerated group.
pub fn generators_for(spec: &PiSpec, budget: u128) -> Result<Vec<AutcElement>, AutcError> {
    if let Some(set) = effective_catalog(spec)? {
        return Ok(set.all().cloned().collect());
    }
    enumerate_autc(spec, budget)?
        .into_iter()
        .map(|m| AutcElement::new(spec, m))
        .collect()
}

/// Deterministic closure of the generated matrix group (BFS order).
pub fn closure(gens: &[FpMatrix], cap: usize) -> Result<Vec<FpMatrix>, AutcError> {
    assert!(!gens.is_empty(), "closure of an empty generating set");
    let n = gens[0].rows();
    let p = gens[0].modulus();
    let mut seen = HashSet::new();
    let mut order = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let id = FpMatrix::identity(n, p);
    seen.insert(id.clone());
    order.push(id.clone());
    queue.push_back(id);
    while let Some(m) = queue.pop_front() {
        for gen in gens {
            let next = m.mul(gen);
            if seen.insert(next.clone()) {
                if order.len() >= cap {
                    return Err(AutcError::Budget(FpError::BudgetExceeded {
                        required: (order.len() + 1) as u128,
                        budget: cap as u128,
                    }));
                }
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(order)
}

/// Shape of candidate matrices: for the rank-one catalog the kernel
/// `<v_2,...,v_n>` must be invariant, pinning the first column below row 1
/// to zero. Zero and custom maps get the full shape.
fn candidate_mask(spec: &PiSpec) -> ShapeMask {
    let n = spec.n();
    let mut mask = ShapeMask::free(n, n);
    match spec.label() {
        CaseLabel::A
        | CaseLabel::B
        | CaseLabel::C
        | CaseLabel::D
        | CaseLabel::E
        | CaseLabel::N2 => {
            for i in 1..n {
                mask.pin(i, 0, 0);
            }
        }
        _ => {}
    }
    mask
}

/// Exhaustive list of `Aut_c(pi)`, searching the constrained shape only.
pub fn enumerate_autc(spec: &PiSpec, budget: u128) -> Result<Vec<FpMatrix>, AutcError> {
    let p = spec.p();
    let mask = candidate_mask(spec);
    let rank_one_shape = spec.label() != CaseLabel::Custom
        && spec.label() != CaseLabel::Zero3
        && spec.label() != CaseLabel::Zero4;
    let pi_row = spec.pi().row(0);
    let mut out = Vec::new();
    for cand in enumerate_matrices(p, &mask, budget)? {
        let member = if rank_one_shape {
            // Rows >= 2 of both sides vanish for the constrained shape, so
            // only the first row of the membership equation matters.
            row_one_member(spec, &pi_row, &cand) && cand.is_invertible()
        } else {
            cand.is_invertible() && is_autc(spec, &cand).unwrap_or(false)
        };
        if member {
            out.push(cand);
        }
    }
    Ok(out)
}

/// First row of `pi hat(alpha) = alpha pi` for a rank-one `pi` supported on
/// row 1: `pi_1 hat(alpha) = a_11 pi_1`.
fn row_one_member(spec: &PiSpec, pi_row: &FpVector, cand: &FpMatrix) -> bool {
    let p = spec.p();
    let basis = spec.wedge_basis();
    let dim = basis.dim();
    let mut lhs = FpVector::zeros(dim, p);
    for m in 0..dim {
        let c = pi_row.get(m);
        if c == 0 {
            continue;
        }
        let (j, k) = basis.pair(m);
        let hat_row = crate::multilinear::wedge(&cand.row(j), &cand.row(k));
        lhs = lhs.add(&hat_row.coeffs.scale(c));
    }
    let rhs = pi_row.scale(cand.get(0, 0));
    lhs == rhs
}

/// Searches for a non-trivial equivariant homomorphism `V -> Aut_c(pi)` with
/// values in the unipotent part `P` (where any such image must lie, since the
/// reductive part has no normal p-subgroup). Returns `true` when only the
/// trivial homomorphism exists.
pub fn check_no_equivariant_hom(spec: &PiSpec, budget: u128) -> Result<bool, AutcError> {
    let gens = effective_catalog(spec)?
        .ok_or_else(|| AutcError::UnknownLabel("custom of rank >= 2".into()))?;
    let candidates = if gens.p_gens.is_empty() {
        vec![FpMatrix::identity(spec.n(), spec.p())]
    } else {
        closure(&gens.p_gens.iter().map(|g| g.alpha.clone()).collect::<Vec<_>>(), 1 << 20)?
    };
    equivariant_hom_search(spec, &gens, &candidates, budget).map(|found| found.is_none())
}

/// Same search over an arbitrary candidate list (e.g. all of `Aut_c(pi)` at
/// p = 3) as a slower cross-check.
pub fn check_no_equivariant_hom_over(
    spec: &PiSpec,
    candidates: &[FpMatrix],
    budget: u128,
) -> Result<bool, AutcError> {
    let gens = generator_catalog(spec)?;
    equivariant_hom_search(spec, &gens, candidates, budget).map(|found| found.is_none())
}

/// Fully generic variant for custom maps: equivariance is imposed against the
/// supplied generators and candidates may be the whole enumerated group.
pub fn check_no_equivariant_hom_generic(
    spec: &PiSpec,
    gens: &[AutcElement],
    candidates: &[FpMatrix],
    budget: u128,
) -> Result<bool, AutcError> {
    let set = GeneratorSet { p_gens: gens.to_vec(), q_gens: Vec::new() };
    equivariant_hom_search(spec, &set, candidates, budget).map(|found| found.is_none())
}

/// Core search: assigns `gamma(v_i)` from per-variable filtered candidate
/// sets, pruning by pairwise commutation and by the equivariance relations
/// `gamma(v_i^alpha) = gamma(v_i)^alpha` as soon as their support is chosen.
/// Returns a witness assignment if a non-trivial homomorphism exists.
fn equivariant_hom_search(
    spec: &PiSpec,
    gens: &GeneratorSet,
    candidates: &[FpMatrix],
    budget: u128,
) -> Result<Option<Vec<FpMatrix>>, AutcError> {
    let n = spec.n();
    let p = spec.p();
    let id = FpMatrix::identity(n, p);
    let gen_mats: Vec<FpMatrix> = gens.all().map(|g| g.alpha.clone()).collect();
    let gen_invs: Vec<FpMatrix> =
        gen_mats.iter().map(|m| m.inverse().expect("generator invertible")).collect();

    // Per-variable filter: order p, plus every constraint involving v_i only.
    let mut filtered: Vec<Vec<FpMatrix>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut keep = Vec::new();
        'cand: for x in candidates {
            if !x.pow(p).is_identity() {
                continue;
            }
            for (a, ainv) in gen_mats.iter().zip(&gen_invs) {
                if let Some(c) = scalar_row(a, i) {
                    let lhs = x.pow(c);
                    let rhs = ainv.mul(x).mul(a);
                    if lhs != rhs {
                        continue 'cand;
                    }
                }
            }
            keep.push(x.clone());
        }
        filtered.push(keep);
    }

    let mut combos: u128 = 1;
    for f in &filtered {
        combos = combos.saturating_mul(f.len() as u128);
    }
    if combos > budget {
        return Err(AutcError::Budget(FpError::BudgetExceeded { required: combos, budget }));
    }

    let mut assignment: Vec<FpMatrix> = vec![id.clone(); n];
    let found = assign(spec, &gen_mats, &gen_invs, &filtered, &mut assignment, 0);
    Ok(found)
}

/// Row `i` of `a` equal to `c * e_i` yields a single-variable constraint.
fn scalar_row(a: &FpMatrix, i: usize) -> Option<u64> {
    let mut c = None;
    for j in 0..a.cols() {
        let v = a.get(i, j);
        if j == i {
            if v == 0 {
                return None;
            }
            c = Some(v);
        } else if v != 0 {
            return None;
        }
    }
    c
}

fn assign(
    spec: &PiSpec,
    gen_mats: &[FpMatrix],
    gen_invs: &[FpMatrix],
    filtered: &[Vec<FpMatrix>],
    assignment: &mut Vec<FpMatrix>,
    depth: usize,
) -> Option<Vec<FpMatrix>> {
    let n = spec.n();
    if depth == n {
        let nontrivial = assignment.iter().any(|x| !x.is_identity());
        return nontrivial.then(|| assignment.clone());
    }
    'next: for x in &filtered[depth] {
        for prev in assignment[..depth].iter() {
            if prev.mul(x) != x.mul(prev) {
                continue 'next;
            }
        }
        assignment[depth] = x.clone();
        // Equivariance rows whose support is already assigned.
        for (a, ainv) in gen_mats.iter().zip(gen_invs) {
            for i in 0..=depth {
                if (depth + 1..n).any(|j| a.get(i, j) != 0) {
                    continue;
                }
                let mut lhs = FpMatrix::identity(n, spec.p());
                for (j, val) in assignment.iter().enumerate().take(depth + 1) {
                    let e = a.get(i, j);
                    if e != 0 {
                        lhs = lhs.mul(&val.pow(e));
                    }
                }
                let rhs = ainv.mul(&assignment[i]).mul(a);
                if lhs != rhs {
                    assignment[depth] = FpMatrix::identity(n, spec.p());
                    continue 'next;
                }
            }
        }
        if let Some(found) = assign(spec, gen_mats, gen_invs, filtered, assignment, depth + 1) {
            return Some(found);
        }
        assignment[depth] = FpMatrix::identity(n, spec.p());
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
    }

    #[test]
    fn membership_examples() {
        let spec = PiSpec::catalog(CaseLabel::A, 5).unwrap();
        assert!(is_autc(&spec, &FpMatrix::identity(3, 5)).unwrap());
        for s in 1..5i64 {
            for t in 1..5i64 {
                let m = FpMatrix::from_rows_i64(
                    &[vec![s, 0, 0], vec![0, 1, 0], vec![0, 0, t]],
                    5,
                );
                assert!(is_autc(&spec, &m).unwrap());
            }
        }
        let bad = FpMatrix::from_rows_i64(&[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 1]], 5);
        assert!(!is_autc(&spec, &bad).unwrap());
        let singular = FpMatrix::zeros(3, 3, 5);
        assert_eq!(is_autc(&spec, &singular), Err(AutcError::Singular));
    }

    #[test]
    fn catalog_generators_pass_membership() {
        for label in CaseLabel::CATALOG {
            for p in [3u64, 5] {
                let spec = PiSpec::catalog(label, p).unwrap();
                let gens = generator_catalog(&spec).unwrap();
                for g in gens.all() {
                    assert!(
                        is_autc(&spec, &g.alpha).unwrap(),
                        "{label} p={p}: generator fails"
                    );
                }
                // Spot closure: pairwise products stay inside.
                let mats = gens.matrices();
                for a in &mats {
                    for b in &mats {
                        assert!(is_autc(&spec, &a.mul(b)).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn case_e_unipotent_shape() {
        let spec = PiSpec::catalog(CaseLabel::E, 5).unwrap();
        let gens = generator_catalog(&spec).unwrap();
        // The c-parameter generator places 1 at (1,4) and (3,2).
        let expected = FpMatrix::from_rows_i64(
            &[vec![1, 0, 0, 1], vec![0, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 0, 1]],
            5,
        );
        assert_eq!(gens.p_gens[1].alpha, expected);
    }

    #[test]
    fn case_b_q_block_example() {
        let spec = PiSpec::catalog(CaseLabel::B, 3).unwrap();
        // A = diag(2,1) embeds as diag(|A|, A) = diag(2, 2, 1).
        let m = FpMatrix::from_rows_i64(&[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 1]], 3);
        assert!(is_autc(&spec, &m).unwrap());
    }

    #[test]
    fn case_c_q_scalar_example() {
        let spec = PiSpec::catalog(CaseLabel::C, 3).unwrap();
        let m = FpMatrix::from_rows_i64(
            &[vec![2, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]],
            3,
        );
        assert!(is_autc(&spec, &m).unwrap());
    }

    #[test]
    fn enumerate_counts_n3_p3() {
        let budget = crate::DEFAULT_BUDGET;
        let a = enumerate_autc(&PiSpec::catalog(CaseLabel::A, 3).unwrap(), budget).unwrap();
        assert_eq!(a.len(), 36);
        let b = enumerate_autc(&PiSpec::catalog(CaseLabel::B, 3).unwrap(), budget).unwrap();
        assert_eq!(b.len(), 432);
    }

    #[test]
    fn enumerate_budget_exceeded_for_p5_n4() {
        let spec = PiSpec::catalog(CaseLabel::E, 5).unwrap();
        let err = enumerate_autc(&spec, crate::DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, AutcError::Budget(FpError::BudgetExceeded { .. })));
    }

    #[test]
    fn closure_matches_enumeration_case_a_p3() {
        let spec = PiSpec::catalog(CaseLabel::A, 3).unwrap();
        let gens = generator_catalog(&spec).unwrap();
        let closed = closure(&gens.matrices(), 1 << 20).unwrap();
        let listed = enumerate_autc(&spec, crate::DEFAULT_BUDGET).unwrap();
        let closed_set: HashSet<_> = closed.into_iter().collect();
        let listed_set: HashSet<_> = listed.into_iter().collect();
        assert_eq!(closed_set, listed_set);
    }

    #[test]
    fn semidirect_action_case_a_p3() {
        let spec = PiSpec::catalog(CaseLabel::A, 3).unwrap();
        let gens = generator_catalog(&spec).unwrap();
        let p_group: HashSet<FpMatrix> = closure(
            &gens.p_gens.iter().map(|g| g.alpha.clone()).collect::<Vec<_>>(),
            1 << 12,
        )
        .unwrap()
        .into_iter()
        .collect();
        for q in &gens.q_gens {
            let qinv = q.alpha.inverse().unwrap();
            for pg in &gens.p_gens {
                let conj = qinv.mul(&pg.alpha).mul(&q.alpha);
                assert!(p_group.contains(&conj), "P is not normalized by Q");
            }
        }
    }

    #[test]
    fn assumption_holds_examples() {
        let budget = crate::DEFAULT_BUDGET;
        let b3 = PiSpec::catalog(CaseLabel::B, 3).unwrap();
        assert!(check_no_equivariant_hom(&b3, budget).unwrap());
        let e5 = PiSpec::catalog(CaseLabel::E, 5).unwrap();
        assert!(check_no_equivariant_hom(&e5, budget).unwrap());
        let z3 = PiSpec::catalog(CaseLabel::Zero3, 3).unwrap();
        assert!(check_no_equivariant_hom(&z3, budget).unwrap());
    }

    /// At p = 3 the scalar constraints degenerate (s^2 = 1 for every unit),
    /// and the n2 family admits a genuine non-trivial equivariant
    /// homomorphism; the checker must report that.
    #[test]
    fn assumption_fails_for_n2_at_p3() {
        let spec = PiSpec::catalog(CaseLabel::N2, 3).unwrap();
        assert!(!check_no_equivariant_hom(&spec, crate::DEFAULT_BUDGET).unwrap());
        let spec5 = PiSpec::catalog(CaseLabel::N2, 5).unwrap();
        assert!(check_no_equivariant_hom(&spec5, crate::DEFAULT_BUDGET).unwrap());
    }

    /// Belt-and-braces: the same verdicts hold when searching over the whole
    /// of Aut_c(pi) at p = 3, not just its unipotent part.
    #[test]
    fn full_search_agrees_at_p3() {
        for label in [CaseLabel::B, CaseLabel::N2] {
            let spec = PiSpec::catalog(label, 3).unwrap();
            let all = enumerate_autc(&spec, crate::DEFAULT_BUDGET).unwrap();
            let restricted = check_no_equivariant_hom(&spec, crate::DEFAULT_BUDGET).unwrap();
            let full =
                check_no_equivariant_hom_over(&spec, &all, crate::DEFAULT_BUDGET).unwrap();
            assert_eq!(restricted, full, "{label}");
        }
    }
}
