//! Command-line front end: reproduce the T(G) classification as a table, run
//! the verification suites, run the order-p^3 oracle, and canonicalize custom
//! maps. All commands are plain functions returning `(exit code, output)` so
//! they can be driven from tests.

use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::autc::{closure, enumerate_autc, generator_catalog, generators_for, is_autc};
use crate::check::CheckReport;
use crate::forms::{delta_lambda, delta_star, solve_s, solve_sprime, split, FormSpace, Symmetry};
use crate::fp::{is_odd_prime, FpScalar, FpVector};
use crate::holo::{
    admissible_taus, expected_t, power_map_check, res_sprime_group, t_g_report, tau_scalar,
};
use crate::multilinear::Wedge2Element;
use crate::oracle::oracle_count;
use crate::pigroup::{canonical_rank_one, CaseLabel, PiSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NOT_RANK_ONE: i32 = 3;

/// Parsed and validated run configuration shared by the subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub case: Option<CaseLabel>,
    pub custom_text: Option<String>,
    pub prime: u64,
    pub json: bool,
    pub allow_small_p: bool,
    pub budget: u128,
    pub workers: usize,
}

impl RunConfig {
    pub fn validate_prime(&self) -> Result<(), String> {
        if !is_odd_prime(self.prime) {
            return Err(format!("{} is not an odd prime in the supported range", self.prime));
        }
        Ok(())
    }

    /// The p >= 5 gate for the three families whose classification needs it.
    pub fn hypothesis_ok(&self, label: CaseLabel) -> bool {
        self.prime >= label.min_prime() || self.allow_small_p
    }

    fn spec(&self) -> Result<PiSpec, String> {
        if let Some(text) = &self.custom_text {
            return PiSpec::parse_text(text).map_err(|e| e.to_string());
        }
        let label = self.case.ok_or("no case or custom map given")?;
        PiSpec::catalog(label, self.prime).map_err(|e| e.to_string())
    }
}

/// JSON schema of the report command.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportJson {
    pub case: String,
    pub p: u64,
    pub n: usize,
    pub group_order: String,
    pub dim_s: usize,
    pub dim_sprime: usize,
    pub admissible: usize,
    pub t_order: u64,
    pub t_structure: String,
    pub assumption_ok: bool,
    pub checks: Vec<CheckJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckJson {
    pub name: String,
    pub pass: bool,
}

pub fn cmd_report(config: &RunConfig) -> (i32, String) {
    if let Err(e) = config.validate_prime() {
        return (EXIT_INVALID, format!("error: {e}\n"));
    }
    if let Some(label) = config.case {
        if !config.hypothesis_ok(label) {
            return (
                EXIT_INVALID,
                format!(
                    "error: case {label} is classified for p >= {}; rerun with --allow-small-p to compute outside the stated hypotheses\n",
                    label.min_prime()
                ),
            );
        }
    }
    let spec = match config.spec() {
        Ok(s) => s,
        Err(e) => return (EXIT_INVALID, format!("error: {e}\n")),
    };
    let report = match t_g_report(&spec, config.budget) {
        Ok(r) => r,
        Err(e) => return (EXIT_INVALID, format!("error: {e}\n")),
    };
    let mut checks = vec![CheckJson {
        name: "assumption_no_equivariant_hom".into(),
        pass: report.assumption_ok,
    }];
    checks.push(CheckJson {
        name: "sprime_basis_in_expected_span".into(),
        pass: report.sprime_basis.starts_with("within span"),
    });
    if let Some(matched) = report.expected_match {
        checks.push(CheckJson { name: "t_matches_known_classification".into(), pass: matched });
    }
    let outside = config.case.is_some_and(|l| config.prime < l.min_prime());
    let json = ReportJson {
        case: report.case.clone(),
        p: report.p,
        n: report.n,
        group_order: report.group_order.clone(),
        dim_s: report.dim_s,
        dim_sprime: report.dim_sprime,
        admissible: report.admissible,
        t_order: report.t_order,
        t_structure: report.t_structure.clone(),
        assumption_ok: report.assumption_ok,
        checks,
    };
    // Theorem mismatch is an exit-1 failure; an absent expectation is not.
    let failed = report.expected_match == Some(false);
    let code = if failed { EXIT_CHECK_FAILED } else { EXIT_OK };
    if config.json {
        let mut text = serde_json::to_string_pretty(&json).expect("serializable");
        text.push('\n');
        return (code, text);
    }
    let mut out = String::new();
    out.push_str(&format!("case:        {}\n", json.case));
    out.push_str(&format!("p:           {}\n", json.p));
    out.push_str(&format!("n:           {}\n", json.n));
    out.push_str(&format!("|G|:         {}\n", json.group_order));
    out.push_str(&format!("dim S:       {}\n", json.dim_s));
    out.push_str(&format!("dim S':      {} ({})\n", json.dim_sprime, report.sprime_basis));
    out.push_str(&format!("admissible:  {}\n", json.admissible));
    out.push_str(&format!(
        "res(S'):     {} (order {})\n",
        report.res_structure, report.res_order
    ));
    out.push_str(&format!("T(G):        order {}, {}\n", json.t_order, json.t_structure));
    out.push_str(&format!(
        "assumption:  {}\n",
        if json.assumption_ok { "holds" } else { "FAILS (result is conditional)" }
    ));
    match report.expected_match {
        Some(true) => out.push_str("expected:    match (PASS)\n"),
        Some(false) => out.push_str("expected:    MISMATCH (FAIL)\n"),
        None => {
            if outside {
                out.push_str("expected:    outside the stated hypotheses; no comparison\n");
            } else {
                out.push_str("expected:    no classification on record for this map\n");
            }
        }
    }
    (code, out)
}

/// One named verification suite over one spec.
fn run_suite(suite: &str, spec: &PiSpec, budget: u128, compare: bool) -> CheckReport {
    match suite {
        "group" => suite_group(spec),
        "autc" => suite_autc(spec, budget),
        "forms" => suite_forms(spec, budget, compare),
        "holo" => suite_holo(spec, budget, compare),
        other => {
            let mut r = CheckReport::new();
            r.push(&format!("unknown_suite_{other}"), false, None);
            r
        }
    }
}

fn xorshift(state: &mut u64) -> u64 {
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    *state
}

fn random_element(spec: &PiSpec, state: &mut u64) -> crate::pigroup::GElement {
    let p = spec.p();
    let v = FpVector::from_i64(
        &(0..spec.n()).map(|_| (xorshift(state) % p) as i64).collect::<Vec<_>>(),
        p,
    );
    let w = FpVector::from_i64(
        &(0..spec.wedge_dim()).map(|_| (xorshift(state) % p) as i64).collect::<Vec<_>>(),
        p,
    );
    spec.element(v, Wedge2Element::from_coeffs(w))
}

fn suite_group(spec: &PiSpec) -> CheckReport {
    let mut report = spec.verify_presentation();
    let mut state = SEED;
    let mut assoc = true;
    let mut units = true;
    let mut power_hom = true;
    for _ in 0..500 {
        let x = random_element(spec, &mut state);
        let y = random_element(spec, &mut state);
        let z = random_element(spec, &mut state);
        if spec.mul(&spec.mul(&x, &y), &z) != spec.mul(&x, &spec.mul(&y, &z)) {
            assoc = false;
        }
        if spec.mul(&spec.identity(), &x) != x || !spec.mul(&spec.inv(&x), &x).is_identity() {
            units = false;
        }
        let p = spec.p() as i64;
        if spec.pow(&spec.mul(&x, &y), p)
            != spec.mul(&spec.pow(&x, p), &spec.pow(&y, p))
        {
            power_hom = false;
        }
    }
    report.push("associativity_sampled", assoc, None);
    report.push("identity_and_inverses_sampled", units, None);
    report.push("pth_power_is_homomorphism_sampled", power_hom, None);
    report
}

const SEED: u64 = 0x00c0_ffee_0000_1234;

fn suite_autc(spec: &PiSpec, budget: u128) -> CheckReport {
    let mut report = CheckReport::new();
    let gens = match generator_catalog(spec) {
        Ok(g) => g,
        Err(e) => {
            report.push("generator_catalog", false, Some(e.to_string()));
            return report;
        }
    };
    let mats = gens.matrices();
    let membership = mats.iter().all(|m| is_autc(spec, m).unwrap_or(false));
    report.push("catalog_generators_pass_membership", membership, None);
    let closed = mats
        .iter()
        .all(|a| mats.iter().all(|b| is_autc(spec, &a.mul(b)).unwrap_or(false)));
    report.push("generator_products_pass_membership", closed, None);
    if let Some(expected) = expected_autc_order(spec.label(), spec.p()) {
        let free = enumeration_cost(spec);
        if free <= budget.min(2_000_000) {
            match enumerate_autc(spec, budget) {
                Ok(list) => {
                    report.push(
                        "enumerated_order_matches_semidirect_formula",
                        list.len() as u128 == expected,
                        Some(format!("enumerated {}, formula {}", list.len(), expected)),
                    );
                }
                Err(e) => report.push("enumeration", false, Some(e.to_string())),
            }
        }
    }
    if !gens.p_gens.is_empty() {
        let p_list: Vec<_> = gens.p_gens.iter().map(|g| g.alpha.clone()).collect();
        if let Ok(p_group) = closure(&p_list, 1 << 14) {
            let set: std::collections::HashSet<_> = p_group.into_iter().collect();
            let normalized = gens.q_gens.iter().all(|q| {
                let qinv = q.alpha.inverse().expect("invertible");
                gens.p_gens
                    .iter()
                    .all(|pg| set.contains(&qinv.mul(&pg.alpha).mul(&q.alpha)))
            });
            report.push("unipotent_part_normalized_by_reductive_part", normalized, None);
        }
    }
    report
}

/// `|P| * |Q|` for each built-in family.
fn expected_autc_order(label: CaseLabel, p: u64) -> Option<u128> {
    let p = p as u128;
    let gl2 = (p * p - 1) * (p * p - p);
    match label {
        CaseLabel::A => Some(p * p * (p - 1) * (p - 1)),
        CaseLabel::B => Some(p * p * gl2),
        CaseLabel::C => Some(p * p * p * (p - 1) * gl2),
        CaseLabel::D => Some(p.pow(5) * (p - 1) * gl2),
        CaseLabel::E => Some(p.pow(3) * gl2),
        CaseLabel::N2 => Some(p * (p - 1)),
        CaseLabel::Zero3 => Some((p.pow(3) - 1) * (p.pow(3) - p) * (p.pow(3) - p * p)),
        CaseLabel::Zero4 => {
            let q = p.pow(4);
            Some((q - 1) * (q - p) * (q - p * p) * (q - p.pow(3)))
        }
        CaseLabel::Custom => None,
    }
}

fn enumeration_cost(spec: &PiSpec) -> u128 {
    let n = spec.n() as u32;
    let free = match spec.label() {
        CaseLabel::Zero3 | CaseLabel::Zero4 | CaseLabel::Custom => n * n,
        _ => n * n - (n - 1),
    };
    (spec.p() as u128).saturating_pow(free)
}

fn suite_forms(spec: &PiSpec, budget: u128, compare: bool) -> CheckReport {
    let mut report = CheckReport::new();
    let gens = match generators_for(spec, budget) {
        Ok(g) => g,
        Err(e) => {
            report.push("generators", false, Some(e.to_string()));
            return report;
        }
    };
    let s = match solve_s(spec, &gens) {
        Ok(s) => s,
        Err(e) => {
            report.push("solve_s", false, Some(e.to_string()));
            return report;
        }
    };
    let sp = match solve_sprime(spec, &gens) {
        Ok(s) => s,
        Err(e) => {
            report.push("solve_sprime", false, Some(e.to_string()));
            return report;
        }
    };
    if compare {
        report.push("s_is_trivial", s.dim() == 0, Some(format!("dim S = {}", s.dim())));
        let expected_sp = if spec.label() == CaseLabel::E { 2 } else { 1 };
        report.push(
            "sprime_dimension",
            sp.dim() == expected_sp,
            Some(format!("dim S' = {}", sp.dim())),
        );
        let mut span = vec![delta_lambda(spec, 1)];
        if spec.label() == CaseLabel::E {
            span.push(delta_star(spec, 1).expect("case e"));
        }
        let probe = FormSpace { basis: span.clone(), symmetry: Symmetry::Antisymmetric };
        report.push(
            "sprime_basis_spanned_by_canonical_forms",
            probe.stacked_rank_with(&sp.basis) == span.len(),
            None,
        );
    }
    // Split round-trip on pseudo-random unstructured forms.
    let mut state = SEED;
    let mut roundtrip = true;
    for _ in 0..10 {
        let mut delta = crate::forms::BilinearForm::zero(spec.n(), spec.p(), Symmetry::None);
        for i in 0..spec.n() {
            for j in 0..spec.n() {
                let v = FpVector::from_i64(
                    &(0..spec.wedge_dim())
                        .map(|_| (xorshift(&mut state) % spec.p()) as i64)
                        .collect::<Vec<_>>(),
                    spec.p(),
                );
                delta.set_value(i, j, &v);
            }
        }
        let (sym, anti) = split(&delta);
        if sym.add(&anti) != delta {
            roundtrip = false;
        }
    }
    report.push("split_recombines", roundtrip, None);
    report
}

fn suite_holo(spec: &PiSpec, budget: u128, compare: bool) -> CheckReport {
    let mut report = CheckReport::new();
    let gens = match generators_for(spec, budget) {
        Ok(g) => g,
        Err(e) => {
            report.push("generators", false, Some(e.to_string()));
            return report;
        }
    };
    let taus = match admissible_taus(spec, &gens, budget) {
        Ok(t) => t,
        Err(e) => {
            report.push("admissible_taus", false, Some(e.to_string()));
            return report;
        }
    };
    if compare {
        let p = spec.p() as usize;
        let expected = if spec.label() == CaseLabel::E { (p - 1) * (p - 1) } else { p - 1 };
        report.push(
            "admissible_count",
            taus.len() == expected,
            Some(format!("{} admissible, expected {}", taus.len(), expected)),
        );
    }
    // The excluded scalar parameter is exactly lambda = -1/2.
    let p = spec.p();
    let minus_half = (p - FpScalar::new(2, p).inv().unwrap().value()) % p;
    let scalar_lambdas: Vec<u64> = taus
        .iter()
        .filter_map(|t| tau_scalar(&t.tau))
        .map(|c| {
            // c = 1 + 2 lambda  =>  lambda = (c - 1) / 2.
            let half = FpScalar::new(2, p).inv().unwrap().value();
            ((c + p - 1) % p) * half % p
        })
        .collect();
    report.push(
        "excluded_scalar_is_minus_half",
        !scalar_lambdas.contains(&minus_half)
            && scalar_lambdas.len() as u64 == p - 1
            && (0..p).filter(|&l| l != minus_half).all(|l| scalar_lambdas.contains(&l)),
        Some(format!("lambda = {minus_half} excluded")),
    );
    match res_sprime_group(spec, &gens, budget) {
        Ok(res) => {
            report.push("res_group_axioms", true, Some(res.structure.clone()));
            if compare {
                if let Some((order, structure)) = expected_t(spec.label(), spec.p()) {
                    report.push(
                        "res_structure_expected",
                        res.order() as u64 == order && res.structure == structure,
                        Some(format!("got {} of order {}", res.structure, res.order())),
                    );
                }
            }
        }
        Err(e) => report.push("res_group_axioms", false, Some(e.to_string())),
    }
    report.merge(power_map_check(spec, &gens));
    match t_g_report(spec, budget) {
        Ok(r) => {
            if compare {
                report.push(
                    "t_matches_known_classification",
                    r.expected_match != Some(false),
                    Some(format!("T(G) = {} of order {}", r.t_structure, r.t_order)),
                );
                if CaseLabel::MAIN.contains(&spec.label()) {
                    // Established for the five main families at their
                    // hypothesized primes.
                    report.push("assumption_no_equivariant_hom", r.assumption_ok, None);
                } else {
                    // The zero and order-p^3 families carry no such claim;
                    // report the computed verdict without failing on it.
                    report.push(
                        "assumption_status",
                        true,
                        Some(if r.assumption_ok {
                            "holds (structural result unconditional)".to_string()
                        } else {
                            "fails; structural result is conditional here".to_string()
                        }),
                    );
                }
            } else {
                report.push(
                    "t_computed",
                    true,
                    Some(format!(
                        "T(G) = {} of order {} (assumption {})",
                        r.t_structure,
                        r.t_order,
                        if r.assumption_ok { "holds" } else { "fails" }
                    )),
                );
            }
        }
        Err(e) => report.push("t_g_report", false, Some(e.to_string())),
    }
    report
}

fn suite_oracle(prime: u64, budget: u128) -> CheckReport {
    let mut report = CheckReport::new();
    let summary = match oracle_count(prime, budget) {
        Ok(s) => s,
        Err(e) => {
            report.push("oracle_run", false, Some(e.to_string()));
            return report;
        }
    };
    report.push(
        "oracle_t_count_is_p_minus_1",
        summary.t_count as u64 == prime - 1,
        Some(format!(
            "|Aut| = {}, equivariant anti-homs = {}, T count = {}",
            summary.aut_count, summary.gamma_count, summary.t_count
        )),
    );
    report.push(
        "oracle_gamma_count_at_least_p",
        summary.gamma_count as u64 >= prime,
        None,
    );
    let spec = PiSpec::catalog(CaseLabel::N2, prime).expect("n2 spec");
    match t_g_report(&spec, budget) {
        Ok(r) => {
            if r.assumption_ok {
                report.push(
                    "oracle_agrees_with_pipeline",
                    r.t_order as usize == summary.t_count,
                    Some(format!("pipeline {} vs oracle {}", r.t_order, summary.t_count)),
                );
            } else {
                report.push(
                    "oracle_pipeline_comparison_conditional",
                    true,
                    Some(format!(
                        "assumption fails at p = {prime}; oracle is authoritative (oracle {}, pipeline {})",
                        summary.t_count, r.t_order
                    )),
                );
            }
        }
        Err(e) => report.push("pipeline_for_n2", false, Some(e.to_string())),
    }
    report
}

pub fn cmd_verify(config: &RunConfig, suite: &str) -> (i32, String) {
    if let Err(e) = config.validate_prime() {
        return (EXIT_INVALID, format!("error: {e}\n"));
    }
    let known = ["group", "autc", "forms", "holo", "oracle", "all"];
    if !known.contains(&suite) {
        return (
            EXIT_INVALID,
            format!("error: unknown suite `{suite}` (expected one of {})\n", known.join(", ")),
        );
    }
    if suite == "oracle" && config.prime != 3 && config.prime != 5 {
        return (EXIT_INVALID, "error: the oracle runs at p in {3, 5}\n".to_string());
    }
    let cases: Vec<CaseLabel> = match config.case {
        Some(label) => vec![label],
        None => CaseLabel::CATALOG.to_vec(),
    };
    // group/autc checks are hypothesis-free; forms/holo compare against the
    // classification only where its hypotheses hold.
    let mut tasks: Vec<(String, Box<dyn FnOnce() -> CheckReport + Send>)> = Vec::new();
    let structural: Vec<String> = match suite {
        "all" => ["group", "autc", "forms", "holo"].iter().map(|s| s.to_string()).collect(),
        "oracle" => Vec::new(),
        s => vec![s.to_string()],
    };
    for sname in &structural {
        for &label in &cases {
            let comparisons_valid = config.prime >= label.min_prime();
            if matches!(sname.as_str(), "forms" | "holo")
                && !comparisons_valid
                && !config.allow_small_p
            {
                continue;
            }
            let spec = match PiSpec::catalog(label, config.prime) {
                Ok(s) => s,
                Err(e) => return (EXIT_INVALID, format!("error: {e}\n")),
            };
            let budget = config.budget;
            let name = format!("{sname} {label} p={}", config.prime);
            let sname = sname.to_string();
            tasks.push((
                name,
                Box::new(move || run_suite(&sname, &spec, budget, comparisons_valid)),
            ));
        }
    }
    if (suite == "oracle" || suite == "all") && (config.prime == 3 || config.prime == 5) {
        let prime = config.prime;
        let budget = config.budget;
        tasks
            .push((format!("oracle p={prime}"), Box::new(move || suite_oracle(prime, budget))));
    }
    let results = run_tasks(tasks, config.workers);
    let mut out = String::new();
    let mut all_pass = true;
    for (name, report) in &results {
        for check in &report.checks {
            let status = if check.pass { "PASS" } else { "FAIL" };
            all_pass &= check.pass;
            match &check.detail {
                Some(d) => out.push_str(&format!("{status}  [{name}] {}: {d}\n", check.name)),
                None => out.push_str(&format!("{status}  [{name}] {}\n", check.name)),
            }
        }
    }
    let total: usize = results.iter().map(|(_, r)| r.checks.len()).sum();
    out.push_str(&format!(
        "{}: {total} checks\n",
        if all_pass { "all passed" } else { "FAILURES PRESENT" }
    ));
    (if all_pass { EXIT_OK } else { EXIT_CHECK_FAILED }, out)
}

/// Runs tasks across `workers` threads, reassembling results in task order.
fn run_tasks(
    tasks: Vec<(String, Box<dyn FnOnce() -> CheckReport + Send>)>,
    workers: usize,
) -> Vec<(String, CheckReport)> {
    let workers = workers.max(1);
    if workers == 1 || tasks.len() <= 1 {
        return tasks.into_iter().map(|(name, f)| (name, f())).collect();
    }
    let mut slots: Vec<Option<(String, CheckReport)>> = Vec::new();
    slots.resize_with(tasks.len(), || None);
    let slots = Mutex::new(slots);
    let queue = Mutex::new(tasks.into_iter().enumerate().collect::<Vec<_>>());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let next = queue.lock().expect("queue").pop();
                let Some((idx, (name, f))) = next else { break };
                let report = f();
                slots.lock().expect("slots")[idx] = Some((name, report));
            });
        }
    });
    slots.into_inner().expect("slots").into_iter().map(|s| s.expect("task ran")).collect()
}

pub fn cmd_oracle(config: &RunConfig) -> (i32, String) {
    if let Err(e) = config.validate_prime() {
        return (EXIT_INVALID, format!("error: {e}\n"));
    }
    if config.prime != 3 && config.prime != 5 {
        return (EXIT_INVALID, "error: the oracle runs at p in {3, 5}\n".to_string());
    }
    let report = suite_oracle(config.prime, config.budget);
    if config.json {
        let summary = oracle_count(config.prime, config.budget).expect("validated");
        let mut text = serde_json::to_string_pretty(&summary).expect("serializable");
        text.push('\n');
        return (
            if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED },
            text,
        );
    }
    let mut out = String::new();
    for check in &report.checks {
        let status = if check.pass { "PASS" } else { "FAIL" };
        match &check.detail {
            Some(d) => out.push_str(&format!("{status}  {}: {d}\n", check.name)),
            None => out.push_str(&format!("{status}  {}\n", check.name)),
        }
    }
    (if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED }, out)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CanonicalizeJson {
    pub label: String,
    pub change_of_basis: Vec<Vec<u64>>,
}

pub fn cmd_canonicalize(config: &RunConfig) -> (i32, String) {
    let Some(text) = &config.custom_text else {
        return (EXIT_INVALID, "error: canonicalize needs --custom <path>\n".to_string());
    };
    let spec = match PiSpec::parse_text(text) {
        Ok(s) => s,
        Err(e) => return (EXIT_INVALID, format!("error: {e}\n")),
    };
    let (label, m) = match canonical_rank_one(&spec) {
        Ok(r) => r,
        Err(e) => return (EXIT_NOT_RANK_ONE, format!("error: {e}\n")),
    };
    if config.json {
        let rows = (0..m.rows())
            .map(|i| m.row(i).entries().to_vec())
            .collect::<Vec<_>>();
        let json = CanonicalizeJson { label: label.to_string(), change_of_basis: rows };
        let mut text = serde_json::to_string_pretty(&json).expect("serializable");
        text.push('\n');
        return (EXIT_OK, text);
    }
    let mut out = format!("label: {label}\nchange of basis (rows are the new basis):\n");
    out.push_str(&format!("{m}"));
    (EXIT_OK, out)
}

/// Small helper used by the Python bindings as well.
pub fn report_for(label: &str, p: u64, budget: u128) -> Result<crate::holo::TGReport, String> {
    let label = CaseLabel::parse(label).map_err(|e| e.to_string())?;
    let spec = PiSpec::catalog(label, p).map_err(|e| e.to_string())?;
    t_g_report(&spec, budget).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(case: Option<CaseLabel>, prime: u64) -> RunConfig {
        RunConfig {
            case,
            custom_text: None,
            prime,
            json: false,
            allow_small_p: false,
            budget: crate::DEFAULT_BUDGET,
            workers: 1,
        }
    }

    #[test]
    fn report_exit_codes() {
        let (code, out) = cmd_report(&config(Some(CaseLabel::B), 3));
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("order 2"));

        // p >= 5 gate for case (a).
        let (code, _) = cmd_report(&config(Some(CaseLabel::A), 3));
        assert_eq!(code, EXIT_INVALID);
        let mut cfg = config(Some(CaseLabel::A), 3);
        cfg.allow_small_p = true;
        let (code, _) = cmd_report(&cfg);
        assert_eq!(code, EXIT_OK);

        // Even prime is invalid.
        let (code, _) = cmd_report(&config(Some(CaseLabel::B), 4));
        assert_eq!(code, EXIT_INVALID);
    }

    #[test]
    fn report_json_roundtrip() {
        let mut cfg = config(Some(CaseLabel::E), 5);
        cfg.json = true;
        let (code, out) = cmd_report(&cfg);
        assert_eq!(code, EXIT_OK);
        let parsed: ReportJson = serde_json::from_str(&out).unwrap();
        assert_eq!(parsed.t_order, 16);
        assert_eq!(parsed.t_structure, "C4 x C4");
        let mut reemitted = serde_json::to_string_pretty(&parsed).unwrap();
        reemitted.push('\n');
        assert_eq!(out, reemitted, "JSON must round-trip byte-identically");
    }

    #[test]
    fn canonicalize_paths() {
        let spec = PiSpec::catalog(CaseLabel::D, 3).unwrap();
        let mut cfg = config(None, 3);
        cfg.custom_text = Some(spec.to_text());
        let (code, out) = cmd_canonicalize(&cfg);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("label: d"));

        // Rank-two map is rejected with exit 3.
        cfg.custom_text = Some("3 3\n1 0 0\n0 0 1\n0 0 0\n".to_string());
        let (code, _) = cmd_canonicalize(&cfg);
        assert_eq!(code, EXIT_NOT_RANK_ONE);

        // Parse error is exit 2.
        cfg.custom_text = Some("not numbers\n".to_string());
        let (code, _) = cmd_canonicalize(&cfg);
        assert_eq!(code, EXIT_INVALID);
    }

    #[test]
    fn verify_group_suite() {
        let (code, out) = cmd_verify(&config(Some(CaseLabel::B), 3), "group");
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.contains("all passed"));
        let (code, _) = cmd_verify(&config(None, 3), "nope");
        assert_eq!(code, EXIT_INVALID);
    }

    #[test]
    fn workers_do_not_change_output() {
        let mut cfg = config(None, 3);
        let (c1, o1) = cmd_verify(&cfg, "group");
        cfg.workers = 4;
        let (c2, o2) = cmd_verify(&cfg, "group");
        assert_eq!((c1, o1), (c2, o2));
    }
}
