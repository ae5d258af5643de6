//! Group-arithmetic invariants for the built-in families: exhaustive
//! associativity at order 27, randomized associativity at p = 3 and 5,
//! identity/inverse accounting, and the p-th power map.

use multiholo::multilinear::Wedge2Element;
use multiholo::pigroup::{CaseLabel, GElement, PiSpec};
use multiholo::FpVector;

fn xorshift(state: &mut u64) -> u64 {
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    *state
}

fn random_element(spec: &PiSpec, state: &mut u64) -> GElement {
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

/// Every element of the order-27 group, in index order.
fn all_order_27(spec: &PiSpec) -> Vec<GElement> {
    let p = spec.p();
    let mut out = Vec::new();
    for v1 in 0..p as i64 {
        for v2 in 0..p as i64 {
            for w in 0..p as i64 {
                out.push(spec.element(
                    FpVector::from_i64(&[v1, v2], p),
                    Wedge2Element::from_coeffs(FpVector::from_i64(&[w], p)),
                ));
            }
        }
    }
    out
}

#[test]
fn associativity_exhaustive_order_27() {
    let spec = PiSpec::catalog(CaseLabel::N2, 3).unwrap();
    let elems = all_order_27(&spec);
    assert_eq!(elems.len(), 27);
    for x in &elems {
        for y in &elems {
            let xy = spec.mul(x, y);
            for z in &elems {
                assert_eq!(spec.mul(&xy, z), spec.mul(x, &spec.mul(y, z)));
            }
        }
    }
}

#[test]
fn associativity_randomized_main_cases() {
    for label in CaseLabel::MAIN {
        for p in [3u64, 5] {
            let spec = PiSpec::catalog(label, p).unwrap();
            let mut state = 0x1357_9bdf_2468_aceu64 ^ p;
            for _ in 0..100_000 {
                let x = random_element(&spec, &mut state);
                let y = random_element(&spec, &mut state);
                let z = random_element(&spec, &mut state);
                assert_eq!(
                    spec.mul(&spec.mul(&x, &y), &z),
                    spec.mul(&x, &spec.mul(&y, &z)),
                    "{label} p={p}"
                );
            }
        }
    }
}

#[test]
fn identity_and_inverse_accounting() {
    for label in CaseLabel::CATALOG {
        for p in [3u64, 5] {
            let spec = PiSpec::catalog(label, p).unwrap();
            let mut state = 99u64.wrapping_mul(p);
            for _ in 0..500 {
                let x = random_element(&spec, &mut state);
                assert_eq!(spec.mul(&spec.identity(), &x), x);
                assert_eq!(spec.mul(&x, &spec.identity()), x);
                assert!(spec.mul(&x, &spec.inv(&x)).is_identity());
                assert!(spec.mul(&spec.inv(&x), &x).is_identity());
            }
        }
    }
}

/// The p-th power map is exactly pi: exhaustive over V at p = 3, sampled at
/// p = 5, and independent of the central coordinate.
#[test]
fn pth_power_is_pi() {
    for label in CaseLabel::CATALOG {
        let spec = PiSpec::catalog(label, 3).unwrap();
        let n = spec.n();
        let total = 3u64.pow(n as u32);
        for code in 0..total {
            let mut rest = code;
            let mut coords = Vec::with_capacity(n);
            for _ in 0..n {
                coords.push((rest % 3) as i64);
                rest /= 3;
            }
            let v = FpVector::from_i64(&coords, 3);
            let x = spec.element(v.clone(), Wedge2Element::zero(n, 3));
            let cubed = spec.pow(&x, 3);
            assert!(cubed.v.is_zero());
            assert_eq!(cubed.w, spec.apply_pi(&v), "{label}");
        }
    }
    for label in CaseLabel::MAIN {
        let spec = PiSpec::catalog(label, 5).unwrap();
        let mut state = 0xabcdu64;
        for _ in 0..200 {
            let x = random_element(&spec, &mut state);
            let fifth = spec.pow(&x, 5);
            assert!(fifth.v.is_zero());
            assert_eq!(fifth.w, spec.apply_pi(&x.v), "{label}");
        }
    }
}

/// Class two and odd p make the p-th power a homomorphism.
#[test]
fn pth_power_is_homomorphism() {
    for label in CaseLabel::MAIN {
        for p in [3u64, 5] {
            let spec = PiSpec::catalog(label, p).unwrap();
            let mut state = 0x600d_c0deu64 ^ p;
            for _ in 0..300 {
                let x = random_element(&spec, &mut state);
                let y = random_element(&spec, &mut state);
                assert_eq!(
                    spec.pow(&spec.mul(&x, &y), p as i64),
                    spec.mul(&spec.pow(&x, p as i64), &spec.pow(&y, p as i64))
                );
            }
        }
    }
}

#[test]
fn presentations_all_catalog() {
    for label in CaseLabel::CATALOG {
        for p in [3u64, 5] {
            let spec = PiSpec::catalog(label, p).unwrap();
            let report = spec.verify_presentation();
            assert!(report.passed(), "{label} p={p}: {report:?}");
        }
    }
}
