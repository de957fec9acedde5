mod common;

use std::collections::HashMap;

use knotflow::asymptotics::{family_scan, genus_sandwich, lemma2_schedule, quasimorphism_defect, AsymptoticsError};
use knotflow::braid::{knm_braid, torus_braid, BraidWord};
use knotflow::invariants::{signature, InvariantDescriptor, Theta};
use num_integer::Integer;
use num_rational::Ratio;
use rand::Rng;

use common::rng;

fn omega(p: i64, q: i64) -> InvariantDescriptor {
    InvariantDescriptor::omega_signature(Theta::new(p, q).unwrap())
}

fn grid(inv: &InvariantDescriptor, max: usize) -> HashMap<(usize, usize), f64> {
    family_scan(inv, max, max).unwrap().grid.into_iter().map(|c| ((c.n, c.m), c.normalized)).collect()
}

#[test]
fn defect_examples() {
    let sig = InvariantDescriptor::signature();
    assert_eq!(quasimorphism_defect(&sig, 1, 1, 2).unwrap(), 1.0);
    assert_eq!(quasimorphism_defect(&sig, 2, 2, 2).unwrap(), 1.0);
    assert!(matches!(
        quasimorphism_defect(&InvariantDescriptor::slice_genus(), 1, 1, 1),
        Err(AsymptoticsError::NotAdditive(_))
    ));
}

#[test]
fn random_defects_stay_below_m() {
    let mut r = rng(41);
    for inv in [InvariantDescriptor::signature(), omega(1, 3), omega(2, 5)] {
        for _ in 0..50 {
            let (n1, n2, m) = (r.random_range(1..9), r.random_range(1..9), r.random_range(1..8));
            let d = quasimorphism_defect(&inv, n1, n2, m).unwrap();
            assert!(d <= inv.saddle_constant * m as f64, "{} ({n1},{n2},{m}): {d}", inv.name);
        }
    }
}

#[test]
fn rescaling_inequality() {
    for (inv, max) in [(InvariantDescriptor::signature(), 8), (omega(1, 3), 5), (omega(1, 4), 5)] {
        let f = grid(&inv, 3 * max);
        for p in [2, 3] {
            for n in 1..=max {
                for m in 1..=max {
                    let d = (f[&(p * n, m)] - f[&(n, m)]).abs();
                    assert!(d <= inv.saddle_constant / n as f64 + 1e-12, "{} p={p} ({n},{m}): {d}", inv.name);
                }
            }
        }
        assert!(f.values().all(|v| v.abs() <= inv.saddle_constant));
    }
}

#[test]
fn cauchy_property() {
    let max = 12;
    for inv in [InvariantDescriptor::signature(), omega(1, 3)] {
        let f = grid(&inv, max);
        let pairs: Vec<(usize, usize)> = (4..=max).flat_map(|n| (4..=max).map(move |m| (n, m))).collect();
        for &(n, m) in &pairs {
            for &(p, q) in &pairs {
                let d = (f[&(p, q)] - f[&(n, m)]).abs();
                let bound = inv.saddle_constant * (1.0 / n as f64 + 1.0 / m as f64 + 1.0 / p as f64 + 1.0 / q as f64);
                assert!(d <= bound, "{} ({n},{m}) vs ({p},{q}): {d} > {bound}", inv.name);
            }
        }
    }
}

#[test]
fn rescale_schedule_exhaustive() {
    for n in 1..=40 {
        for m in 1..=40 {
            for a in 1..=n.min(m) {
                let s = lemma2_schedule(n, m, a).unwrap();
                let (k, r) = n.div_rem(&a);
                assert_eq!((s.k, s.r, s.b), (k, r, k * m));
                assert_eq!(s.moves_used, m + (k - 1) * (m + a) + r * m);
                assert!(s.within_bound(), "({n},{m},{a})");
                let bound = Ratio::from_integer((m + n + a * m) as i64) + Ratio::new((m * n) as i64, a as i64);
                assert_eq!(s.declared_bound, bound);
            }
            assert!(lemma2_schedule(n, m, n.min(m) + 1).is_err());
        }
    }
    assert!(lemma2_schedule(3, 3, 0).is_err());
}

#[test]
fn rescale_schedule_examples() {
    let s = lemma2_schedule(7, 5, 3).unwrap();
    assert_eq!((s.k, s.r, s.b, s.moves_used), (2, 1, 10, 18));
    assert_eq!(s.declared_bound, Ratio::new(116, 3));
    for n in 1..=10 {
        let s = lemma2_schedule(n, 12, n).unwrap();
        assert_eq!((s.k, s.r, s.b, s.moves_used), (1, 0, 12, 12));
    }
    let d = signature(&knm_braid(7, 5).unwrap()) - signature(&knm_braid(3, 10).unwrap());
    assert!(d.abs() <= 18);
}

#[test]
fn rescale_schedule_invariant_contract() {
    let mut r = rng(42);
    for inv in [InvariantDescriptor::signature(), omega(1, 3)] {
        for _ in 0..20 {
            let (n, m) = (r.random_range(1..13), r.random_range(1..11));
            let a = r.random_range(1..=n.min(m));
            let s = lemma2_schedule(n, m, a).unwrap();
            let x = inv.evaluate(&knm_braid(n, m).unwrap()).unwrap();
            let y = inv.evaluate(&knm_braid(a, s.b).unwrap()).unwrap();
            assert!((x - y).abs() <= inv.saddle_constant * s.moves_used as f64, "{} ({n},{m},{a})", inv.name);
        }
    }
}

#[test]
fn signature_scan_to_twenty() {
    let est = family_scan(&InvariantDescriptor::signature(), 20, 20).unwrap();
    assert!((est.tau_bar.abs() - 0.5).abs() <= 0.1, "{}", est.tau_bar);
    assert!(est.bounds_satisfied);
    assert!(est.grid.iter().all(|c| c.normalized.abs() <= 1.0));
    assert!(est.error_bound >= (est.grid.last().unwrap().normalized - est.tau_bar).abs());
}

#[test]
fn omega_scan_to_fourteen() {
    let est = family_scan(&omega(1, 3), 14, 14).unwrap();
    assert!((est.tau_bar.abs() - 4.0 / 9.0).abs() <= 0.12, "{}", est.tau_bar);
    assert!(est.bounds_satisfied);
}

#[test]
fn zero_invariant_scan() {
    let est = family_scan(&InvariantDescriptor::zero(), 6, 6).unwrap();
    assert_eq!((est.tau_bar, est.error_bound), (0.0, 0.0));
    assert!(family_scan(&InvariantDescriptor::slice_genus(), 4, 4).is_err());
    assert!(family_scan(&InvariantDescriptor::signature(), 0, 4).is_err());
}

#[test]
fn mirror_scan_flips_sign() {
    let sig = InvariantDescriptor::signature();
    let a = family_scan(&sig, 10, 10).unwrap();
    let b = family_scan(&sig.mirrored(), 10, 10).unwrap();
    assert_eq!(b.tau_bar, -a.tau_bar);
    assert!(a.grid.iter().zip(&b.grid).all(|(x, y)| x.value == -y.value));
}

#[test]
fn sandwich_examples() {
    let t = genus_sandwich(&torus_braid(2, 3).unwrap());
    assert_eq!((t.lower, t.upper), (1.0, 1.0));
    let u = genus_sandwich(&BraidWord::new(1, vec![]).unwrap());
    assert_eq!((u.lower, u.upper), (0.0, 0.0));
    let k = genus_sandwich(&knm_braid(5, 5).unwrap());
    assert!(k.lower <= k.upper);
    assert!((k.upper - k.lower) / 25.0 <= 0.2);
}

/// For knots |σ| ≤ 2g; links only satisfy |σ| ≤ 2g + ℓ − 1.
#[test]
fn sandwich_holds_on_the_grid() {
    for n in 1..=9 {
        for m in 1..=9 {
            let s = genus_sandwich(&knm_braid(n, m).unwrap());
            let slack = (n.gcd(&m) - 1) as f64 / 2.0;
            assert!(s.lower <= s.upper + slack, "K({n},{m})");
            if n.gcd(&m) == 1 {
                assert!(s.lower <= s.upper, "K({n},{m})");
            }
        }
    }
}
