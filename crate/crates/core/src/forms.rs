//! Equivariant bilinear forms `Delta : V x V -> Λ²V` attached to `G_pi`:
//! assembly and solution of the equivariance constraints defining the spaces
//! `B`, `S` (symmetric) and `S'` (anti-symmetric), the canonical forms
//! `Delta_[lambda]`, `Delta_[sigma]`, `Delta*_[kappa]`, symmetric/anti-symmetric
//! splitting, and the translation from a form to the automorphism family it
//! induces on the group.

use thiserror::Error;

use crate::autc::AutcElement;
use crate::fp::{FpMatrix, FpScalar, FpVector};
use crate::multilinear::{Wedge2Element, WedgeBasis};
use crate::pigroup::{CaseLabel, GElement, PiSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormsError {
    #[error("constraint assembly needs at least one generator")]
    EmptyGenerators,
    #[error("operation requires the label {expected}, got {got}")]
    LabelMismatch { expected: &'static str, got: String },
    #[error("form does not satisfy the equivariance condition")]
    NotInB,
    #[error("anti-symmetric form is not of the shape (u ∧ v)^sigma")]
    NotDeltaSigma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    None,
    Symmetric,
    Antisymmetric,
}

/// Coefficient tensor of a bilinear map `V x V -> Λ²V`: entry `(i, j, m)` is
/// the coefficient of wedge-basis element `m` in `Delta(v_i, v_j)`.
#[derive(Debug, Clone)]
pub struct BilinearForm {
    n: usize,
    p: u64,
    dim: usize,
    symmetry: Symmetry,
    coeffs: Vec<u64>,
}

/// Equality is structural on the coefficients; the symmetry tag is a
/// constructor-side declaration, not part of the map itself.
impl PartialEq for BilinearForm {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.p == other.p && self.coeffs == other.coeffs
    }
}

impl Eq for BilinearForm {}

impl BilinearForm {
    pub fn zero(n: usize, p: u64, symmetry: Symmetry) -> Self {
        let dim = WedgeBasis::new(n).dim();
        BilinearForm { n, p, dim, symmetry, coeffs: vec![0; n * n * dim] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    fn idx(&self, i: usize, j: usize, m: usize) -> usize {
        (i * self.n + j) * self.dim + m
    }

    pub fn coeff(&self, i: usize, j: usize, m: usize) -> u64 {
        self.coeffs[self.idx(i, j, m)]
    }

    /// `Delta(v_i, v_j)` as a `Λ²V` coordinate vector.
    pub fn value(&self, i: usize, j: usize) -> FpVector {
        let mut v = FpVector::zeros(self.dim, self.p);
        for m in 0..self.dim {
            v.set(m, self.coeff(i, j, m) as i64);
        }
        v
    }

    /// Sets `Delta(v_i, v_j)` and mirrors it according to the symmetry tag.
    pub fn set_value(&mut self, i: usize, j: usize, value: &FpVector) {
        assert_eq!(value.len(), self.dim);
        for m in 0..self.dim {
            let idx = self.idx(i, j, m);
            self.coeffs[idx] = value.get(m);
        }
        if i != j {
            let mirrored = match self.symmetry {
                Symmetry::Symmetric => value.clone(),
                Symmetry::Antisymmetric => value.neg(),
                Symmetry::None => return,
            };
            for m in 0..self.dim {
                let idx = self.idx(j, i, m);
                self.coeffs[idx] = mirrored.get(m);
            }
        } else if self.symmetry == Symmetry::Antisymmetric {
            assert!(value.is_zero(), "anti-symmetric form with nonzero diagonal");
        }
    }

    /// Bilinear evaluation `Delta(u, v)`.
    pub fn evaluate(&self, u: &FpVector, v: &FpVector) -> Wedge2Element {
        assert_eq!(u.len(), self.n);
        assert_eq!(v.len(), self.n);
        let p = self.p;
        let mut out = FpVector::zeros(self.dim, p);
        for i in 0..self.n {
            let ui = u.get(i);
            if ui == 0 {
                continue;
            }
            for j in 0..self.n {
                let c = (ui * v.get(j)) % p;
                if c == 0 {
                    continue;
                }
                for m in 0..self.dim {
                    let cur = out.get(m);
                    out.set(m, ((cur + c * self.coeff(i, j, m)) % p) as i64);
                }
            }
        }
        Wedge2Element::from_coeffs(out)
    }

    pub fn add(&self, other: &BilinearForm) -> BilinearForm {
        assert_eq!((self.n, self.p), (other.n, other.p));
        let symmetry = if self.symmetry == other.symmetry { self.symmetry } else { Symmetry::None };
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % self.p)
            .collect();
        BilinearForm { n: self.n, p: self.p, dim: self.dim, symmetry, coeffs }
    }

    pub fn scale(&self, c: u64) -> BilinearForm {
        let c = c % self.p;
        let coeffs = self.coeffs.iter().map(|&a| (a * c) % self.p).collect();
        BilinearForm { coeffs, ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Flattened coefficient vector, used for rank/span computations.
    pub fn flatten(&self) -> FpVector {
        let mut v = FpVector::zeros(self.coeffs.len(), self.p);
        for (i, &c) in self.coeffs.iter().enumerate() {
            v.set(i, c as i64);
        }
        v
    }

    fn holds_symmetry(&self) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                for m in 0..self.dim {
                    let a = self.coeff(i, j, m);
                    let b = self.coeff(j, i, m);
                    let ok = match self.symmetry {
                        Symmetry::None => true,
                        Symmetry::Symmetric => a == b,
                        Symmetry::Antisymmetric => (a + b) % self.p == 0,
                    };
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A space of forms with a canonical ordered basis.
#[derive(Debug, Clone)]
pub struct FormSpace {
    pub basis: Vec<BilinearForm>,
    pub symmetry: Symmetry,
}

impl FormSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Rank of the stacked coefficient matrix of `self.basis ∪ others`.
    pub fn stacked_rank_with(&self, others: &[BilinearForm]) -> usize {
        let p = others
            .first()
            .map(|f| f.modulus())
            .or_else(|| self.basis.first().map(|f| f.modulus()))
            .expect("empty rank query");
        let width = others
            .first()
            .map(|f| f.flatten().len())
            .or_else(|| self.basis.first().map(|f| f.flatten().len()))
            .unwrap();
        let rows: Vec<FpVector> =
            self.basis.iter().chain(others.iter()).map(|f| f.flatten()).collect();
        let mut m = FpMatrix::zeros(rows.len(), width, p);
        for (i, r) in rows.iter().enumerate() {
            m.set_row(i, r);
        }
        m.rank()
    }
}

/// Ordered unknown pairs for each symmetry type.
fn unknown_pairs(n: usize, symmetry: Symmetry) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let keep = match symmetry {
                Symmetry::None => true,
                Symmetry::Symmetric => i <= j,
                Symmetry::Antisymmetric => i < j,
            };
            if keep {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Maps an ordered pair `(k, l)` onto its unknown index and sign.
fn pair_slot(
    pairs: &[(usize, usize)],
    symmetry: Symmetry,
    k: usize,
    l: usize,
) -> Option<(usize, i64)> {
    match symmetry {
        Symmetry::None => pairs.iter().position(|&q| q == (k, l)).map(|q| (q, 1)),
        Symmetry::Symmetric => {
            let key = if k <= l { (k, l) } else { (l, k) };
            pairs.iter().position(|&q| q == key).map(|q| (q, 1))
        }
        Symmetry::Antisymmetric => {
            if k == l {
                return None;
            }
            let (key, sign) = if k < l { ((k, l), 1) } else { ((l, k), -1) };
            pairs.iter().position(|&q| q == key).map(|q| (q, sign))
        }
    }
}

/// Stacks, for every generator and every unknown pair, the linear relations
/// `Delta(v_i^alpha, v_j^alpha) - Delta(v_i, v_j)^alpha_hat = 0` over the free
/// coefficients of the form.
pub fn assemble_system(
    spec: &PiSpec,
    gens: &[AutcElement],
    symmetry: Symmetry,
) -> Result<FpMatrix, FormsError> {
    if gens.is_empty() {
        return Err(FormsError::EmptyGenerators);
    }
    let n = spec.n();
    let p = spec.p();
    let dim = spec.wedge_dim();
    let pairs = unknown_pairs(n, symmetry);
    let unknowns = pairs.len() * dim;
    let mut rows: Vec<FpVector> = Vec::new();
    for gen in gens {
        let a = &gen.alpha;
        let hat = &gen.hat;
        for &(i, j) in &pairs {
            // One equation per wedge coordinate t.
            let mut eqs = vec![FpVector::zeros(unknowns, p); dim];
            for k in 0..n {
                let aik = a.get(i, k);
                if aik == 0 {
                    continue;
                }
                for l in 0..n {
                    let c = (aik * a.get(j, l)) % p;
                    if c == 0 {
                        continue;
                    }
                    if let Some((slot, sign)) = pair_slot(&pairs, symmetry, k, l) {
                        let signed = if sign >= 0 { c } else { (p - c) % p };
                        for (t, eq) in eqs.iter_mut().enumerate() {
                            let col = slot * dim + t;
                            let cur = eq.get(col);
                            eq.set(col, ((cur + signed) % p) as i64);
                        }
                    }
                }
            }
            // Subtract Delta(v_i, v_j)^hat.
            let (slot_ij, _) = pair_slot(&pairs, symmetry, i, j).expect("pair is an unknown");
            for m in 0..dim {
                for (t, eq) in eqs.iter_mut().enumerate() {
                    let hcoef = hat.get(m, t);
                    if hcoef == 0 {
                        continue;
                    }
                    let col = slot_ij * dim + m;
                    let cur = eq.get(col);
                    eq.set(col, ((cur + p - hcoef) % p) as i64);
                }
            }
            rows.extend(eqs);
        }
    }
    let mut system = FpMatrix::zeros(rows.len(), unknowns, p);
    for (r, row) in rows.iter().enumerate() {
        system.set_row(r, row);
    }
    Ok(system)
}

fn solution_to_form(
    spec: &PiSpec,
    pairs: &[(usize, usize)],
    symmetry: Symmetry,
    sol: &FpVector,
) -> BilinearForm {
    let dim = spec.wedge_dim();
    let mut form = BilinearForm::zero(spec.n(), spec.p(), symmetry);
    for (q, &(i, j)) in pairs.iter().enumerate() {
        let mut v = FpVector::zeros(dim, spec.p());
        for m in 0..dim {
            v.set(m, sol.get(q * dim + m) as i64);
        }
        form.set_value(i, j, &v);
    }
    debug_assert!(form.holds_symmetry());
    form
}

fn solve_space(
    spec: &PiSpec,
    gens: &[AutcElement],
    symmetry: Symmetry,
) -> Result<FormSpace, FormsError> {
    let system = assemble_system(spec, gens, symmetry)?;
    let pairs = unknown_pairs(spec.n(), symmetry);
    let basis = system
        .nullspace()
        .iter()
        .map(|sol| solution_to_form(spec, &pairs, symmetry, sol))
        .collect();
    Ok(FormSpace { basis, symmetry })
}

/// Canonical basis of the symmetric space `S`.
pub fn solve_s(spec: &PiSpec, gens: &[AutcElement]) -> Result<FormSpace, FormsError> {
    solve_space(spec, gens, Symmetry::Symmetric)
}

/// Canonical basis of the anti-symmetric space `S'`.
pub fn solve_sprime(spec: &PiSpec, gens: &[AutcElement]) -> Result<FormSpace, FormsError> {
    solve_space(spec, gens, Symmetry::Antisymmetric)
}

/// The full space `B` (no symmetry restriction), solvable on demand.
pub fn solve_b(spec: &PiSpec, gens: &[AutcElement]) -> Result<FormSpace, FormsError> {
    solve_space(spec, gens, Symmetry::None)
}

/// `Delta_[sigma](u, v) = (u ∧ v)^sigma` for an endomorphism of `Λ²V`.
pub fn delta_sigma(spec: &PiSpec, sigma: &FpMatrix) -> BilinearForm {
    let dim = spec.wedge_dim();
    assert_eq!((sigma.rows(), sigma.cols()), (dim, dim), "sigma must act on Λ²V");
    let basis = spec.wedge_basis();
    let mut form = BilinearForm::zero(spec.n(), spec.p(), Symmetry::Antisymmetric);
    for m in 0..dim {
        let (i, j) = basis.pair(m);
        form.set_value(i, j, &sigma.row(m));
    }
    form
}

/// `Delta_[lambda](u, v) = (u ∧ v)^lambda`.
pub fn delta_lambda(spec: &PiSpec, lambda: i64) -> BilinearForm {
    delta_sigma(spec, &FpMatrix::scalar(spec.wedge_dim(), lambda, spec.p()))
}

/// The corner-swap endomorphism of `Λ²V` in case (e): sends `v1∧v2 <-> v3∧v4`
/// and negates the four middle basis lines.
pub fn star_matrix(spec: &PiSpec) -> Result<FpMatrix, FormsError> {
    if spec.label() != CaseLabel::E {
        return Err(FormsError::LabelMismatch {
            expected: "e",
            got: spec.label().to_string(),
        });
    }
    let p = spec.p();
    let basis = spec.wedge_basis();
    let dim = basis.dim();
    let mut m = FpMatrix::zeros(dim, dim, p);
    let front = basis.index(0, 1);
    let back = basis.index(2, 3);
    m.set(front, back, 1);
    m.set(back, front, 1);
    for t in 0..dim {
        if t != front && t != back {
            m.set(t, t, -1);
        }
    }
    Ok(m)
}

/// `Delta*_[kappa]` of case (e).
pub fn delta_star(spec: &PiSpec, kappa: i64) -> Result<BilinearForm, FormsError> {
    Ok(delta_sigma(spec, &star_matrix(spec)?.scale(kappa)))
}

/// Splits a form into symmetric and anti-symmetric parts (p odd, so 2 is a
/// unit). Their sum recovers the input.
pub fn split(delta: &BilinearForm) -> (BilinearForm, BilinearForm) {
    let p = delta.p;
    let half = FpScalar::new(2, p).inv().expect("p odd").value();
    let n = delta.n;
    let mut sym = BilinearForm::zero(n, p, Symmetry::Symmetric);
    let mut anti = BilinearForm::zero(n, p, Symmetry::Antisymmetric);
    for i in 0..n {
        for j in 0..n {
            for m in 0..delta.dim {
                let a = delta.coeff(i, j, m);
                let b = delta.coeff(j, i, m);
                let s = ((a + b) % p * half) % p;
                let t = ((a + p - b) % p * half) % p;
                let si = sym.idx(i, j, m);
                sym.coeffs[si] = s;
                let ai = anti.idx(i, j, m);
                anti.coeffs[ai] = t;
            }
        }
    }
    debug_assert!(sym.holds_symmetry() && anti.holds_symmetry());
    (sym, anti)
}

/// Recovers `sigma` from an anti-symmetric form with `Delta = Delta_[sigma]`;
/// every anti-symmetric `Λ²V`-valued form on `V` has this shape, so failure
/// signals one of the inputs is not anti-symmetric at all.
pub fn extract_sigma(spec: &PiSpec, delta: &BilinearForm) -> Result<FpMatrix, FormsError> {
    let basis = spec.wedge_basis();
    let dim = basis.dim();
    let mut sigma = FpMatrix::zeros(dim, dim, spec.p());
    for m in 0..dim {
        let (i, j) = basis.pair(m);
        sigma.set_row(m, &delta.value(i, j));
    }
    if delta_sigma(spec, &sigma) != *delta {
        return Err(FormsError::NotDeltaSigma);
    }
    Ok(sigma)
}

/// Direct equivariance check of a single form against a generator list.
pub fn is_equivariant(spec: &PiSpec, gens: &[AutcElement], delta: &BilinearForm) -> bool {
    let n = spec.n();
    let p = spec.p();
    for gen in gens {
        for i in 0..n {
            for j in 0..n {
                let ui = FpVector::unit(n, i, p).apply(&gen.alpha);
                let vj = FpVector::unit(n, j, p).apply(&gen.alpha);
                let lhs = delta.evaluate(&ui, &vj);
                let rhs = delta.value(i, j).apply(&gen.hat);
                if lhs.coeffs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// The automorphism family induced by a form: `gamma(y)` shifts the central
/// coordinate of `x` by `Delta(x.v, y.v)`.
#[derive(Debug, Clone)]
pub struct GammaAction {
    delta: BilinearForm,
}

impl GammaAction {
    pub fn delta(&self) -> &BilinearForm {
        &self.delta
    }

    /// `x^{gamma(y)} = x * Delta(x.v, y.v)`.
    pub fn apply(&self, spec: &PiSpec, y: &GElement, x: &GElement) -> GElement {
        let shift = self.delta.evaluate(&x.v, &y.v);
        spec.element(x.v.clone(), x.w.add(&shift))
    }

    /// Checks, on the provided sample triples, that each `gamma(y)` preserves
    /// multiplication and that `gamma` reverses products.
    pub fn verify(&self, spec: &PiSpec, samples: &[(GElement, GElement, GElement)]) -> crate::check::CheckReport {
        let mut report = crate::check::CheckReport::new();
        let mut automorphism = true;
        let mut antihom = true;
        for (x1, x2, y) in samples {
            let lhs = self.apply(spec, y, &spec.mul(x1, x2));
            let rhs = spec.mul(&self.apply(spec, y, x1), &self.apply(spec, y, x2));
            if lhs != rhs {
                automorphism = false;
            }
            // gamma(x2 * y) = gamma(y) then gamma(x2) as maps.
            let prod = spec.mul(x2, y);
            let via_prod = self.apply(spec, &prod, x1);
            let via_comp = self.apply(spec, x2, &self.apply(spec, y, x1));
            if via_prod != via_comp {
                antihom = false;
            }
        }
        report.push("gamma_values_preserve_multiplication", automorphism, None);
        report.push("gamma_reverses_products", antihom, None);
        report
    }
}

/// Builds the `gamma` family for a form after checking it lies in `B`.
pub fn delta_to_gamma(
    spec: &PiSpec,
    gens: &[AutcElement],
    delta: &BilinearForm,
) -> Result<GammaAction, FormsError> {
    if !is_equivariant(spec, gens, delta) {
        return Err(FormsError::NotInB);
    }
    Ok(GammaAction { delta: delta.clone() })
}
