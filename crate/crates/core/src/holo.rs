//! Assembly of `T(G) = NHol(G)/Hol(G)` for `G = G_pi`.
//!
//! Elements coming from anti-symmetric forms are keyed by the invertible
//! commutant element `tau = 1 + 2 sigma`; the criterion `pi eta_hat tau = eta
//! pi` decides whether the associated regular subgroup is a copy of `G` and
//! produces the restriction coset `(eta, eta_hat tau) Gamma(G)`. The group
//! `res(S')` is assembled from those cosets and combined with the symmetric
//! space `S` into the final report.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::autc::{
    check_no_equivariant_hom, check_no_equivariant_hom_generic, enumerate_autc, generators_for,
    is_autc, AutcElement, AutcError,
};
use crate::check::CheckReport;
use crate::forms::{
    delta_lambda, delta_sigma, delta_star, extract_sigma, solve_s, solve_sprime, BilinearForm,
    FormSpace, FormsError, Symmetry,
};
use crate::fp::{enumerate_matrices, FpError, FpMatrix, FpScalar, FpVector};
use crate::multilinear::induced_hat;
use crate::pigroup::{CaseLabel, PiSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HoloError {
    #[error("tau does not commute with the induced generator actions")]
    NotInCommutant,
    #[error("tau is not invertible")]
    NotInvertible,
    #[error("admissibility undecided: heuristics failed and exhaustive search is out of budget")]
    UnknownAdmissibility,
    #[error("composite form is not anti-symmetric of shape (u ∧ v)^sigma")]
    NotDeltaSigma,
    #[error("res(S') composition left the admissible set")]
    NotClosed,
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Autc(#[from] AutcError),
    #[error(transparent)]
    Fp(#[from] FpError),
}

/// The two roles a commutant element plays: a form parameter `sigma` or the
/// shifted `tau = 1 + 2 sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommutantRole {
    Sigma,
    Tau,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutantElement {
    pub mat: FpMatrix,
    pub role: CommutantRole,
}

/// A coset representative of `Gamma(G) = {(alpha, alpha_hat)}` inside
/// `Aut(G/G') x Aut(G')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResPair {
    pub eta: FpMatrix,
    pub zeta: FpMatrix,
}

/// Canonical basis of `{sigma : sigma g_hat = g_hat sigma}` over the
/// generator hats, via the nullspace of the stacked commutator system.
pub fn commutant(spec: &PiSpec, gens: &[AutcElement]) -> Vec<FpMatrix> {
    let dim = spec.wedge_dim();
    let p = spec.p();
    let unknowns = dim * dim;
    let mut rows = Vec::new();
    for gen in gens {
        let hat = &gen.hat;
        // (sigma hat - hat sigma)[a][b] = 0, linear in the entries of sigma.
        for a in 0..dim {
            for b in 0..dim {
                let mut row = FpVector::zeros(unknowns, p);
                for k in 0..dim {
                    let c1 = hat.get(k, b); // sigma[a][k] hat[k][b]
                    if c1 != 0 {
                        let col = a * dim + k;
                        let cur = row.get(col);
                        row.set(col, ((cur + c1) % p) as i64);
                    }
                    let c2 = hat.get(a, k); // - hat[a][k] sigma[k][b]
                    if c2 != 0 {
                        let col = k * dim + b;
                        let cur = row.get(col);
                        row.set(col, ((cur + p - c2) % p) as i64);
                    }
                }
                rows.push(row);
            }
        }
    }
    let mut system = FpMatrix::zeros(rows.len(), unknowns, p);
    for (i, r) in rows.iter().enumerate() {
        system.set_row(i, r);
    }
    system
        .nullspace()
        .into_iter()
        .map(|sol| {
            let mut m = FpMatrix::zeros(dim, dim, p);
            for a in 0..dim {
                for b in 0..dim {
                    m.set(a, b, sol.get(a * dim + b) as i64);
                }
            }
            m
        })
        .collect()
}

fn in_commutant(gens: &[AutcElement], tau: &FpMatrix) -> bool {
    gens.iter().all(|g| tau.mul(&g.hat) == g.hat.mul(tau))
}

/// Does `pi eta_hat tau = eta pi` hold?
pub fn criterion_holds(spec: &PiSpec, eta: &FpMatrix, tau: &FpMatrix) -> bool {
    let lhs = spec.pi().mul(&induced_hat(eta)).mul(tau);
    let rhs = eta.mul(spec.pi());
    lhs == rhs
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CriterionOutcome {
    Solved(ResPair),
    NoSolution,
    Unknown,
}

/// Searches for `eta` in `GL(V)` with `pi eta_hat tau = eta pi`, trying
/// scalars first, then the diagonal family for the double-wedge case, then an
/// exhaustive sweep over the constrained shape when it fits the budget.
/// `Unknown` is returned only when the heuristics fail and the sweep is out
/// of budget, and is never silently treated as inadmissible.
pub fn criterion_solve(
    spec: &PiSpec,
    gens: &[AutcElement],
    tau: &FpMatrix,
    budget: u128,
) -> Result<CriterionOutcome, HoloError> {
    if !tau.is_invertible() {
        return Err(HoloError::NotInvertible);
    }
    if !in_commutant(gens, tau) {
        return Err(HoloError::NotInCommutant);
    }
    let p = spec.p();
    let n = spec.n();
    let solved = |eta: FpMatrix| {
        let zeta = induced_hat(&eta).mul(tau);
        CriterionOutcome::Solved(ResPair { eta, zeta })
    };
    // Scalars: eta = cI has eta_hat = c^2 I.
    for c in 1..p {
        let eta = FpMatrix::scalar(n, c as i64, p);
        if criterion_holds(spec, &eta, tau) {
            return Ok(solved(eta));
        }
    }
    // Double-wedge diagonal family from the corner parameters of tau.
    if n == 4 {
        let basis = spec.wedge_basis();
        let front = basis.index(0, 1);
        let lk = FpScalar::new(
            (tau.get(front, front) + tau.get(front, basis.index(2, 3))) as i64,
            p,
        );
        if let Ok(inv) = lk.inv() {
            let mut eta = FpMatrix::identity(n, p);
            eta.set(0, 0, lk.value() as i64);
            eta.set(1, 1, inv.value() as i64);
            if criterion_holds(spec, &eta, tau) {
                return Ok(solved(eta));
            }
        }
    }
    // Exhaustive over the kernel-invariant shape: the criterion forces
    // ker(pi) to be eta-invariant, which pins the first column below row 1
    // when the kernel is spanned by the tail basis vectors.
    let mut mask = crate::fp::ShapeMask::free(n, n);
    if spec.pi().rank() == 1 && (1..n).all(|i| spec.pi().row(i).is_zero()) {
        for i in 1..n {
            mask.pin(i, 0, 0);
        }
    }
    match enumerate_matrices(p, &mask, budget) {
        Ok(iter) => {
            for cand in iter {
                if cand.is_invertible() && criterion_holds(spec, &cand, tau) {
                    return Ok(solved(cand));
                }
            }
            Ok(CriterionOutcome::NoSolution)
        }
        Err(FpError::BudgetExceeded { .. }) => Ok(CriterionOutcome::Unknown),
        Err(e) => Err(HoloError::Fp(e)),
    }
}

/// Gamma-coset equality: the quotient must lie in `Aut_c(pi)` with matching
/// induced action on `Λ²V`.
pub fn coset_equal(spec: &PiSpec, a: &ResPair, b: &ResPair) -> bool {
    let Ok(eta_inv) = a.eta.inverse() else { return false };
    let Ok(zeta_inv) = a.zeta.inverse() else { return false };
    let delta = b.eta.mul(&eta_inv);
    match is_autc(spec, &delta) {
        Ok(true) => b.zeta.mul(&zeta_inv) == induced_hat(&delta),
        _ => false,
    }
}

/// An admissible commutant element together with its restriction coset.
#[derive(Debug, Clone)]
pub struct AdmissibleTau {
    pub tau: FpMatrix,
    pub pair: ResPair,
    /// Coordinates of tau over the commutant basis; elements are listed in
    /// lexicographic coordinate order.
    pub coords: Vec<u64>,
}

/// All invertible commutant elements whose criterion has a solution.
pub fn admissible_taus(
    spec: &PiSpec,
    gens: &[AutcElement],
    budget: u128,
) -> Result<Vec<AdmissibleTau>, HoloError> {
    let basis = commutant(spec, gens);
    let p = spec.p();
    let dim = spec.wedge_dim();
    let k = basis.len();
    let total = (p as u128).saturating_pow(k as u32);
    if total > budget {
        return Err(HoloError::Fp(FpError::BudgetExceeded { required: total, budget }));
    }
    let mut out = Vec::new();
    let mut coords = vec![0u64; k];
    loop {
        let mut tau = FpMatrix::zeros(dim, dim, p);
        for (c, b) in coords.iter().zip(&basis) {
            tau = tau.add(&b.scale(*c as i64));
        }
        if tau.is_invertible() {
            match criterion_solve(spec, gens, &tau, budget)? {
                CriterionOutcome::Solved(pair) => {
                    out.push(AdmissibleTau { tau, pair, coords: coords.clone() });
                }
                CriterionOutcome::NoSolution => {}
                CriterionOutcome::Unknown => return Err(HoloError::UnknownAdmissibility),
            }
        }
        let mut done = true;
        for slot in (0..k).rev() {
            coords[slot] += 1;
            if coords[slot] < p {
                done = false;
                break;
            }
            coords[slot] = 0;
        }
        if done {
            break;
        }
    }
    Ok(out)
}

/// Composition of two `S'`-elements: acts on the first form by the second's
/// restriction pair, multiplies pointwise, and extracts the composite sigma.
pub fn sprime_compose(
    spec: &PiSpec,
    first: (&FpMatrix, &ResPair),
    second: (&FpMatrix, &ResPair),
) -> Result<(FpMatrix, ResPair), HoloError> {
    let (sigma1, r1) = first;
    let (sigma2, r2) = second;
    let form1 = delta_sigma(spec, sigma1);
    let form2 = delta_sigma(spec, sigma2);
    let acted = act_on_form(spec, &form1, r2);
    let product = acted.add(&form2);
    let sigma = extract_sigma(spec, &product).map_err(|_| HoloError::NotDeltaSigma)?;
    let pair = ResPair { eta: r1.eta.mul(&r2.eta), zeta: r1.zeta.mul(&r2.zeta) };
    Ok((sigma, pair))
}

/// `Delta^{(eta, zeta)}(u, v) = Delta(u eta^{-1}, v eta^{-1}) zeta`.
fn act_on_form(spec: &PiSpec, delta: &BilinearForm, r: &ResPair) -> BilinearForm {
    let n = spec.n();
    let p = spec.p();
    let eta_inv = r.eta.inverse().expect("restriction pair is invertible");
    let mut out = BilinearForm::zero(n, p, Symmetry::None);
    for i in 0..n {
        let ui = eta_inv.row(i);
        for j in 0..n {
            let vj = eta_inv.row(j);
            let value = delta.evaluate(&ui, &vj).coeffs.apply(&r.zeta);
            out.set_value(i, j, &value);
        }
    }
    out
}

/// Scalar parameter of a scalar tau, if it is one.
pub fn tau_scalar(tau: &FpMatrix) -> Option<u64> {
    let c = tau.get(0, 0);
    let scalar = FpMatrix::scalar(tau.rows(), c as i64, tau.modulus());
    (*tau == scalar).then_some(c)
}

/// Corner parameters `(lambda, kappa)` of a double-wedge tau.
pub fn tau_lambda_kappa(spec: &PiSpec, tau: &FpMatrix) -> (u64, u64) {
    let basis = spec.wedge_basis();
    let front = basis.index(0, 1);
    let back = basis.index(2, 3);
    (tau.get(front, front), tau.get(front, back))
}

/// The group `res(S')` with its full multiplication table and identified
/// abstract structure.
#[derive(Debug, Clone)]
pub struct ResSprimeGroup {
    pub elements: Vec<AdmissibleTau>,
    pub table: Vec<Vec<usize>>,
    pub orders: Vec<u64>,
    pub abelian: bool,
    pub structure: String,
}

impl ResSprimeGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// `sigma = (tau - 1) / 2`.
fn half_shift(tau: &FpMatrix) -> FpMatrix {
    let p = tau.modulus();
    let half = FpScalar::new(2, p).inv().expect("p odd").value();
    tau.sub(&FpMatrix::identity(tau.rows(), p)).scale(half as i64)
}

/// Assembles `res(S')` from the admissible set: composes every pair through
/// the bilinear-form product, checks closure onto admissible taus with
/// matching cosets, verifies the table is a group, and identifies the
/// structure from element orders.
pub fn res_sprime_group(
    spec: &PiSpec,
    gens: &[AutcElement],
    budget: u128,
) -> Result<ResSprimeGroup, HoloError> {
    let elements = admissible_taus(spec, gens, budget)?;
    let k = elements.len();
    let mut table = vec![vec![0usize; k]; k];
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            let (sigma, pair) = sprime_compose(
                spec,
                (&half_shift(&a.tau), &a.pair),
                (&half_shift(&b.tau), &b.pair),
            )?;
            let tau = FpMatrix::identity(sigma.rows(), spec.p()).add(&sigma.scale(2));
            let slot =
                elements.iter().position(|e| e.tau == tau).ok_or(HoloError::NotClosed)?;
            // The composed restriction pair must land in the stored coset.
            if !coset_equal(spec, &elements[slot].pair, &pair) {
                return Err(HoloError::NotClosed);
            }
            table[i][j] = slot;
        }
    }
    let id_slot =
        elements.iter().position(|e| e.tau.is_identity()).ok_or(HoloError::NotClosed)?;
    for i in 0..k {
        if table[i][id_slot] != i || table[id_slot][i] != i {
            return Err(HoloError::NotClosed);
        }
        if !table[i].contains(&id_slot) {
            return Err(HoloError::NotClosed); // no inverse
        }
    }
    // Associativity on the finished table.
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                if table[table[i][j]][l] != table[i][table[j][l]] {
                    return Err(HoloError::NotClosed);
                }
            }
        }
    }
    let mut orders = Vec::with_capacity(k);
    for i in 0..k {
        let mut cur = i;
        let mut ord = 1u64;
        while cur != id_slot {
            cur = table[cur][i];
            ord += 1;
        }
        orders.push(ord);
    }
    let abelian = (0..k).all(|i| (0..k).all(|j| table[i][j] == table[j][i]));
    let structure = identify_structure(&orders, abelian);
    Ok(ResSprimeGroup { elements, table, orders, abelian, structure })
}

/// Structure from element orders plus abelianness: enough to recognize the
/// cyclic groups and squares of cyclic groups that occur here.
fn identify_structure(orders: &[u64], abelian: bool) -> String {
    let g = orders.len() as u64;
    if g == 0 {
        return "empty".to_string();
    }
    let exponent = *orders.iter().max().expect("nonempty");
    if exponent == g {
        return format!("C{g}");
    }
    if abelian && exponent * exponent == g {
        let k = exponent;
        let is_square_of_cyclic = divisors(k).into_iter().all(|d| {
            let count = orders.iter().filter(|&&o| d % o == 0).count() as u64;
            count == d * d
        });
        if is_square_of_cyclic {
            return format!("C{k} x C{k}");
        }
    }
    if abelian {
        format!("abelian of order {g} and exponent {exponent}")
    } else {
        format!("group of order {g}")
    }
}

fn divisors(k: u64) -> Vec<u64> {
    (1..=k).filter(|d| k % d == 0).collect()
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(((t0 % m as i128 + m as i128) % m as i128) as u64)
}

/// Verifies that each admissible scalar parameter acts as the corresponding
/// power map: conjugating a right translation by `x -> x^kappa` (kappa the
/// inverse of `1 + 2 lambda`) agrees with the translation twisted by the
/// `Delta_[lambda]` automorphism family.
pub fn power_map_check(spec: &PiSpec, gens: &[AutcElement]) -> CheckReport {
    let mut report = CheckReport::new();
    let p = spec.p();
    let excluded = (p - FpScalar::new(2, p).inv().unwrap().value()) % p;
    report.push(
        "excluded_lambda_is_minus_half",
        (1 + 2 * excluded) % p == 0,
        Some(format!("lambda={excluded}")),
    );

    let elems = sample_elements(spec, 24);
    for lambda in 0..p {
        if (1 + 2 * lambda) % p == 0 {
            continue;
        }
        let kappa = FpScalar::new((1 + 2 * lambda) as i64, p).inv().unwrap().value();
        let kappa_bar = inv_mod(kappa, p * p).expect("kappa is a unit mod p^2");
        let delta = delta_lambda(spec, lambda as i64);
        let gamma = match crate::forms::delta_to_gamma(spec, gens, &delta) {
            Ok(g) => g,
            Err(_) => {
                report.push(
                    &format!("power_map_lambda_{lambda}"),
                    false,
                    Some("Delta_[lambda] failed equivariance".into()),
                );
                continue;
            }
        };
        let mut consistent = true;
        let mut bijective = true;
        let mut images = std::collections::HashSet::new();
        for x in &elems {
            if !images.insert(spec.pow(x, kappa as i64)) {
                bijective = false;
            }
        }
        for x in &elems {
            for y in &elems {
                // Conjugated translation: x -> (x^{kappa_bar} y)^{kappa}.
                let lhs =
                    spec.pow(&spec.mul(&spec.pow(x, kappa_bar as i64), y), kappa as i64);
                // Twisted translation: gamma(y^kappa) then multiply by y^kappa.
                let yk = spec.pow(y, kappa as i64);
                let rhs = spec.mul(&gamma.apply(spec, &yk, x), &yk);
                if lhs != rhs {
                    consistent = false;
                }
            }
        }
        report.push(
            &format!("power_map_lambda_{lambda}_kappa_{kappa}"),
            consistent && bijective,
            None,
        );
    }
    report
}

/// Deterministic element sample: exhaustive when the group is small, else
/// the generators plus reproducible pseudo-random elements.
fn sample_elements(spec: &PiSpec, want: usize) -> Vec<crate::pigroup::GElement> {
    let p = spec.p();
    let n = spec.n();
    let dim = spec.wedge_dim();
    let total = (p as u128).pow((n + dim) as u32);
    let mut out = Vec::new();
    if total <= 729 {
        let mut idx = vec![0u64; n + dim];
        loop {
            let v = FpVector::from_i64(
                &idx[..n].iter().map(|&x| x as i64).collect::<Vec<_>>(),
                p,
            );
            let w = FpVector::from_i64(
                &idx[n..].iter().map(|&x| x as i64).collect::<Vec<_>>(),
                p,
            );
            out.push(spec.element(v, crate::multilinear::Wedge2Element::from_coeffs(w)));
            let mut done = true;
            for slot in (0..idx.len()).rev() {
                idx[slot] += 1;
                if idx[slot] < p {
                    done = false;
                    break;
                }
                idx[slot] = 0;
            }
            if done {
                break;
            }
        }
    } else {
        let mut state = 0xfeed_face_cafe_beefu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for i in 0..n {
            out.push(spec.generator(i));
        }
        while out.len() < want {
            let v = FpVector::from_i64(
                &(0..n).map(|_| (next() % p) as i64).collect::<Vec<_>>(),
                p,
            );
            let w = FpVector::from_i64(
                &(0..dim).map(|_| (next() % p) as i64).collect::<Vec<_>>(),
                p,
            );
            out.push(spec.element(v, crate::multilinear::Wedge2Element::from_coeffs(w)));
        }
    }
    out
}

/// The final structural result for one spec.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TGReport {
    pub case: String,
    pub p: u64,
    pub n: usize,
    pub group_order: String,
    pub dim_s: usize,
    pub dim_sprime: usize,
    pub sprime_basis: String,
    pub admissible: usize,
    pub res_order: usize,
    pub res_structure: String,
    pub t_order: u64,
    pub t_structure: String,
    pub assumption_ok: bool,
    /// Comparison against the known classification for this family, when its
    /// hypotheses hold at this prime; `None` outside them or for custom maps.
    pub expected_match: Option<bool>,
}

/// The known `T(G)` for each built-in family at an admissible prime.
pub fn expected_t(label: CaseLabel, p: u64) -> Option<(u64, String)> {
    match label {
        CaseLabel::A | CaseLabel::C | CaseLabel::E if p < 5 => None,
        CaseLabel::E => Some(((p - 1) * (p - 1), format!("C{} x C{}", p - 1, p - 1))),
        CaseLabel::Custom => None,
        _ => Some((p - 1, format!("C{}", p - 1))),
    }
}

fn describe_sprime(spec: &PiSpec, space: &FormSpace) -> String {
    let mut span = vec![delta_lambda(spec, 1)];
    let mut names = vec!["Delta[1]".to_string()];
    if spec.label() == CaseLabel::E {
        span.push(delta_star(spec, 1).expect("case e"));
        names.push("Delta*[1]".to_string());
    }
    let probe = FormSpace { basis: span.clone(), symmetry: Symmetry::Antisymmetric };
    if space.dim() <= span.len() && probe.stacked_rank_with(&space.basis) == span.len() {
        format!("within span{{{}}}", names.join(", "))
    } else {
        format!("dimension {}", space.dim())
    }
}

/// Runs the full structural pipeline for a spec. The report is always
/// produced; `assumption_ok = false` marks it conditional, since the
/// semidirect decomposition is only guaranteed under the no-equivariant-hom
/// assumption.
pub fn t_g_report(spec: &PiSpec, budget: u128) -> Result<TGReport, HoloError> {
    let gens = generators_for(spec, budget)?;
    let assumption_ok = match check_no_equivariant_hom(spec, budget) {
        Ok(ok) => ok,
        // Rank >= 2 custom maps have no transported catalog: search the whole
        // enumerated group.
        Err(AutcError::UnknownLabel(_)) => {
            let all = enumerate_autc(spec, budget)?;
            check_no_equivariant_hom_generic(spec, &gens, &all, budget)?
        }
        Err(e) => return Err(e.into()),
    };
    let s_space = solve_s(spec, &gens)?;
    let sprime_space = solve_sprime(spec, &gens)?;
    let res = res_sprime_group(spec, &gens, budget)?;
    let dim_s = s_space.dim();
    let p = spec.p();
    let t_order = (p)
        .checked_pow(dim_s as u32)
        .and_then(|s| s.checked_mul(res.order() as u64))
        .unwrap_or(u64::MAX);
    let t_structure = if dim_s == 0 {
        res.structure.clone()
    } else {
        // Symmetric forms always give copies of G (licensed background), so
        // the symmetric side contributes an elementary abelian normal factor.
        format!("C{p}^{dim_s} x {}", res.structure)
    };
    let expected_match = expected_t(spec.label(), p)
        .map(|(order, structure)| order == t_order && structure == t_structure);
    Ok(TGReport {
        case: spec.label().to_string(),
        p,
        n: spec.n(),
        group_order: spec.group_order().to_string(),
        dim_s,
        dim_sprime: sprime_space.dim(),
        sprime_basis: describe_sprime(spec, &sprime_space),
        admissible: res.order(),
        res_order: res.order(),
        res_structure: res.structure.clone(),
        t_order,
        t_structure,
        assumption_ok,
        expected_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autc::generator_catalog;

    fn setup(label: CaseLabel, p: u64) -> (PiSpec, Vec<AutcElement>) {
        let spec = PiSpec::catalog(label, p).unwrap();
        let gens = generator_catalog(&spec).unwrap().all().cloned().collect();
        (spec, gens)
    }

    #[test]
    fn commutant_dimensions() {
        let (spec, gens) = setup(CaseLabel::Zero3, 3);
        assert_eq!(commutant(&spec, &gens).len(), 1);
        let (spec, gens) = setup(CaseLabel::C, 5);
        assert_eq!(commutant(&spec, &gens).len(), 1);
        let (spec, gens) = setup(CaseLabel::E, 5);
        let basis = commutant(&spec, &gens);
        assert_eq!(basis.len(), 2);
        // Spanned by the identity and the corner swap.
        let id = FpMatrix::identity(6, 5);
        let star = crate::forms::star_matrix(&spec).unwrap();
        let mut stack = FpMatrix::zeros(4, 36, 5);
        for (r, m) in [&id, &star, &basis[0], &basis[1]].iter().enumerate() {
            for a in 0..6 {
                for b in 0..6 {
                    stack.set(r, a * 6 + b, m.get(a, b) as i64);
                }
            }
        }
        assert_eq!(stack.rank(), 2);
    }

    /// Oracle at p = 3 for the zero map: sweep all 3^9 matrices on Λ²V and
    /// count those commuting with every generator hat.
    #[test]
    fn commutant_zero3_exhaustive() {
        let (spec, gens) = setup(CaseLabel::Zero3, 3);
        let mask = crate::fp::ShapeMask::free(3, 3);
        let mut count = 0;
        for cand in enumerate_matrices(3, &mask, 1 << 20).unwrap() {
            if in_commutant(&gens, &cand) {
                count += 1;
            }
        }
        assert_eq!(count, 3); // the scalar line over F_3
        assert_eq!(commutant(&spec, &gens).len(), 1);
    }

    #[test]
    fn criterion_scalar_case_a() {
        let (spec, gens) = setup(CaseLabel::A, 5);
        // tau = (1 + 2 lambda) I at lambda = 1 is 3I; eta must be 3^{-1} = 2.
        let tau = FpMatrix::scalar(3, 3, 5);
        let out = criterion_solve(&spec, &gens, &tau, crate::DEFAULT_BUDGET).unwrap();
        let CriterionOutcome::Solved(pair) = out else { panic!("expected a solution") };
        assert_eq!(pair.eta, FpMatrix::scalar(3, 2, 5));
        assert!(criterion_holds(&spec, &pair.eta, &tau));

        let id = FpMatrix::identity(3, 5);
        let CriterionOutcome::Solved(pair) =
            criterion_solve(&spec, &gens, &id, crate::DEFAULT_BUDGET).unwrap()
        else {
            panic!()
        };
        assert!(pair.eta.is_identity());
    }

    #[test]
    fn criterion_rejects_bad_tau() {
        let (spec, gens) = setup(CaseLabel::A, 5);
        let singular = FpMatrix::zeros(3, 3, 5);
        assert_eq!(
            criterion_solve(&spec, &gens, &singular, crate::DEFAULT_BUDGET),
            Err(HoloError::NotInvertible)
        );
        let outside =
            FpMatrix::from_rows_i64(&[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]], 5);
        assert_eq!(
            criterion_solve(&spec, &gens, &outside, crate::DEFAULT_BUDGET),
            Err(HoloError::NotInCommutant)
        );
    }

    #[test]
    fn case_e_diagonal_solution() {
        let (spec, gens) = setup(CaseLabel::E, 5);
        // tau with corner parameters (lambda, kappa) = (1, 2).
        let tau = crate::forms::star_matrix(&spec)
            .unwrap()
            .scale(2)
            .add(&FpMatrix::identity(6, 5));
        assert_eq!(tau_lambda_kappa(&spec, &tau), (1, 2));
        // The stated diagonal eta = diag(3, 3^{-1}, 1, 1) = diag(3, 2, 1, 1).
        let mut eta = FpMatrix::identity(4, 5);
        eta.set(0, 0, 3);
        eta.set(1, 1, 2);
        assert!(criterion_holds(&spec, &eta, &tau));
        // Whatever the solver returns lies in the same coset.
        let CriterionOutcome::Solved(pair) =
            criterion_solve(&spec, &gens, &tau, crate::DEFAULT_BUDGET).unwrap()
        else {
            panic!()
        };
        let stated = ResPair { zeta: induced_hat(&eta).mul(&tau), eta };
        assert!(coset_equal(&spec, &stated, &pair));
    }

    #[test]
    fn admissible_counts() {
        let (spec, gens) = setup(CaseLabel::B, 3);
        let taus = admissible_taus(&spec, &gens, crate::DEFAULT_BUDGET).unwrap();
        assert_eq!(taus.len(), 2);
        let scalars: Vec<u64> = taus.iter().map(|t| tau_scalar(&t.tau).unwrap()).collect();
        assert_eq!(scalars, vec![1, 2]);

        let (spec, gens) = setup(CaseLabel::A, 5);
        let taus = admissible_taus(&spec, &gens, crate::DEFAULT_BUDGET).unwrap();
        assert_eq!(taus.len(), 4);

        let (spec, gens) = setup(CaseLabel::E, 5);
        let taus = admissible_taus(&spec, &gens, crate::DEFAULT_BUDGET).unwrap();
        assert_eq!(taus.len(), 16);
        for t in &taus {
            let (l, k) = tau_lambda_kappa(&spec, &t.tau);
            assert!(k != l && (k + l) % 5 != 0, "kappa = ±lambda must be excluded");
        }
    }

    #[test]
    fn coset_distinguishes_scalars() {
        let (spec, _) = setup(CaseLabel::A, 5);
        let two = ResPair {
            eta: FpMatrix::scalar(3, 2, 5),
            zeta: induced_hat(&FpMatrix::scalar(3, 2, 5)),
        };
        let three = ResPair {
            eta: FpMatrix::scalar(3, 3, 5),
            zeta: induced_hat(&FpMatrix::scalar(3, 3, 5)),
        };
        assert!(coset_equal(&spec, &two, &two));
        assert!(!coset_equal(&spec, &two, &three));
        // (I, I) and a catalog generator pair land in the same coset.
        let gens = generator_catalog(&spec).unwrap();
        let g = &gens.q_gens[0];
        let gen_pair = ResPair { eta: g.alpha.clone(), zeta: g.hat.clone() };
        let triv =
            ResPair { eta: FpMatrix::identity(3, 5), zeta: FpMatrix::identity(3, 5) };
        assert!(coset_equal(&spec, &triv, &gen_pair));
    }

    #[test]
    fn res_group_structures() {
        let (spec, gens) = setup(CaseLabel::D, 3);
        let res = res_sprime_group(&spec, &gens, crate::DEFAULT_BUDGET).unwrap();
        assert_eq!(res.order(), 2);
        assert_eq!(res.structure, "C2");

        let (spec, gens) = setup(CaseLabel::A, 5);
        let res = res_sprime_group(&spec, &gens, crate::DEFAULT_BUDGET).unwrap();
        assert_eq!(res.order(), 4);
        assert_eq!(res.structure, "C4");

        let (spec, gens) = setup(CaseLabel::E, 5);
        let res = res_sprime_group(&spec, &gens, crate::DEFAULT_BUDGET).unwrap();
        assert_eq!(res.order(), 16);
        assert_eq!(res.structure, "C4 x C4");
        assert!(res.abelian);
        assert!(res.orders.iter().all(|&o| 4 % o == 0));
        let count4 = res.orders.iter().filter(|&&o| o == 4).count();
        assert!(count4 >= 2);
    }

    /// The tau -> coset map is an isomorphism from the scalar group.
    #[test]
    fn scalar_composition_matches_field_multiplication() {
        let (spec, gens) = setup(CaseLabel::C, 5);
        let res = res_sprime_group(&spec, &gens, crate::DEFAULT_BUDGET).unwrap();
        for (i, a) in res.elements.iter().enumerate() {
            for (j, b) in res.elements.iter().enumerate() {
                let prod = res.table[i][j];
                let sa = tau_scalar(&a.tau).unwrap();
                let sb = tau_scalar(&b.tau).unwrap();
                let sc = tau_scalar(&res.elements[prod].tau).unwrap();
                assert_eq!((sa * sb) % 5, sc);
            }
        }
    }

    /// Case (e): parameter composition is the symmetric 2x2 matrix product.
    #[test]
    fn case_e_parameter_law() {
        let (spec, gens) = setup(CaseLabel::E, 5);
        let res = res_sprime_group(&spec, &gens, crate::DEFAULT_BUDGET).unwrap();
        assert_eq!(res.order(), 16);
        for (i, a) in res.elements.iter().enumerate() {
            for (j, b) in res.elements.iter().enumerate() {
                let (l1, k1) = tau_lambda_kappa(&spec, &a.tau);
                let (l2, k2) = tau_lambda_kappa(&spec, &b.tau);
                let (lc, kc) = tau_lambda_kappa(&spec, &res.elements[res.table[i][j]].tau);
                assert_eq!((l1 * l2 + k1 * k2) % 5, lc);
                assert_eq!((l1 * k2 + l2 * k1) % 5, kc);
            }
        }
    }

    #[test]
    fn power_map_checks() {
        let (spec, gens) = setup(CaseLabel::B, 3);
        let report = power_map_check(&spec, &gens);
        assert!(report.passed(), "{report:?}");
        // lambda = 2 at p = 3 gives kappa = 5^{-1} = 2^{-1} = 2 (mod 3).
        assert!(report.checks.iter().any(|c| c.name == "power_map_lambda_2_kappa_2"));
        // lambda = 1 = -1/2 is excluded at p = 3.
        assert!(!report.checks.iter().any(|c| c.name.contains("lambda_1_")));

        let (spec, gens) = setup(CaseLabel::E, 5);
        let report = power_map_check(&spec, &gens);
        assert!(report.passed(), "{report:?}");
        // lambda = 2 = -1/2 is excluded at p = 5.
        assert!(!report.checks.iter().any(|c| c.name.contains("lambda_2_")));
    }

    #[test]
    fn reports_match_expected_table() {
        for (label, p, order, structure) in [
            (CaseLabel::B, 3, 2u64, "C2"),
            (CaseLabel::C, 5, 4, "C4"),
            (CaseLabel::E, 5, 16, "C4 x C4"),
        ] {
            let spec = PiSpec::catalog(label, p).unwrap();
            let report = t_g_report(&spec, crate::DEFAULT_BUDGET).unwrap();
            assert_eq!(report.t_order, order, "{label}");
            assert_eq!(report.t_structure, structure, "{label}");
            assert_eq!(report.dim_s, 0);
            assert!(report.assumption_ok);
            assert_eq!(report.expected_match, Some(true));
        }
    }

    #[test]
    fn n2_report_is_conditional_at_p3() {
        let spec = PiSpec::catalog(CaseLabel::N2, 3).unwrap();
        let report = t_g_report(&spec, crate::DEFAULT_BUDGET).unwrap();
        assert!(!report.assumption_ok);
        assert_eq!(report.t_order, 2);
        let spec5 = PiSpec::catalog(CaseLabel::N2, 5).unwrap();
        let report5 = t_g_report(&spec5, crate::DEFAULT_BUDGET).unwrap();
        assert!(report5.assumption_ok);
        assert_eq!(report5.t_order, 4);
    }

    #[test]
    fn inv_mod_works() {
        assert_eq!(inv_mod(2, 9).unwrap(), 5);
        assert_eq!(inv_mod(3, 25).unwrap(), 17);
        assert!(inv_mod(5, 25).is_none());
    }
}
