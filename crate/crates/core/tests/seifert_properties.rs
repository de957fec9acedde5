mod common;

use knotflow::braid::{closure_info, knm_braid, torus_braid, BraidWord};
use knotflow::diagram::{vogel, Diagram};
use knotflow::invariants::signature;
use knotflow::seifert::{alexander_det, genus_data, seifert_matrix, split_parts};
use num_bigint::BigInt;
use num_integer::gcd;
use num_rational::Ratio;
use rand::Rng;

use common::{fox_determinant, random_braid, rng};

#[test]
fn matrix_examples() {
    let t = seifert_matrix(&torus_braid(2, 3).unwrap());
    assert_eq!(t.matrix.rows(), vec![vec![-1, 1], vec![0, -1]]);
    let u = seifert_matrix(&BraidWord::new(1, vec![]).unwrap());
    assert_eq!((u.matrix.dim(), u.genus), (0, Ratio::from_integer(0)));
    assert_eq!(seifert_matrix(&torus_braid(2, 2).unwrap()).matrix.rows(), vec![vec![-1]]);
}

#[test]
fn determinant_examples() {
    let det = |b: BraidWord| alexander_det(&seifert_matrix(&b).matrix);
    assert_eq!(det(torus_braid(2, 3).unwrap()), BigInt::from(3));
    assert_eq!(det(BraidWord::new(1, vec![]).unwrap()), BigInt::from(1));
    assert_eq!(det(torus_braid(2, 5).unwrap()), BigInt::from(5));
}

#[test]
fn genus_examples() {
    let g = genus_data(&knm_braid(2, 3).unwrap());
    assert_eq!((g.euler_characteristic, g.genus), (-1, Ratio::from_integer(1)));
    assert!(g.slice_genus.is_exact());
    assert_eq!(genus_data(&knm_braid(2, 2).unwrap()).slice_genus.value(), Ratio::from_integer(0));
    assert_eq!(genus_data(&knm_braid(30, 30).unwrap()).slice_genus.value(), Ratio::new(812, 2));
    assert!(!genus_data(&BraidWord::from_signed(3, &[1, -2]).unwrap()).slice_genus.is_exact());
}

#[test]
fn slice_genus_formula_on_grid() {
    for n in 1..=12 {
        for m in 1..=12 {
            let want = (n * m + 2 - n - m - gcd(n, m)) as i64;
            assert_eq!(genus_data(&knm_braid(n, m).unwrap()).slice_genus.value(), Ratio::new(want, 2), "K({n},{m})");
        }
    }
}

#[test]
fn dimension_of_connected_positive_closures() {
    for n in 1..=8 {
        for m in 1..=8 {
            let b = knm_braid(n, m).unwrap();
            assert_eq!(split_parts(&b).len(), 1);
            assert_eq!(seifert_matrix(&b).matrix.dim(), b.len() + 1 - b.strands(), "K({n},{m})");
        }
    }
}

#[test]
fn dimension_per_split_part() {
    let mut r = rng(21);
    for _ in 0..200 {
        let k = r.random_range(1..7);
        let len = r.random_range(0..15);
        let b = if k == 1 { BraidWord::new(1, vec![]).unwrap() } else { random_braid(&mut r, k, len, false) };
        let s = seifert_matrix(&b);
        assert_eq!(s.matrix.dim() as i64, b.len() as i64 - b.strands() as i64 + s.surface_parts as i64);
    }
}

#[test]
fn genus_bookkeeping() {
    let mut r = rng(22);
    for _ in 0..300 {
        let k = r.random_range(2..7);
        let len = r.random_range(0..18);
        let positive = r.random_bool(0.5);
        let b = random_braid(&mut r, k, len, positive);
        let s = seifert_matrix(&b);
        let parts = s.surface_parts as i64;
        let l = closure_info(&b).components as i64;
        // Per-part 2 − 2g − ℓ = χ, summed over the parts.
        assert_eq!(Ratio::from_integer(2 * parts - l) - s.genus * 2, Ratio::from_integer(b.strands() as i64 - b.len() as i64));
        if parts == 1 {
            assert_eq!(Ratio::from_integer(2 - l) - s.genus * 2, Ratio::from_integer(s.euler_characteristic));
        }
        assert!(s.genus >= Ratio::from_integer(0));
    }
}

#[test]
fn knm_equals_torus() {
    for n in 2..=6 {
        for m in 1..=6 {
            let k = knm_braid(n, m).unwrap();
            let t = torus_braid(n, m).unwrap();
            assert_eq!(signature(&k), signature(&t), "({n},{m})");
            assert_eq!(alexander_det(&seifert_matrix(&k).matrix), alexander_det(&seifert_matrix(&t).matrix));
            assert_eq!(closure_info(&k).components, closure_info(&t).components);
        }
    }
}

#[test]
fn determinant_matches_fox_colorings() {
    let mut r = rng(23);
    for _ in 0..300 {
        let k = r.random_range(2..6);
        let len = r.random_range(0..16);
        let b = random_braid(&mut r, k, len, false);
        // A split band surface gives the product of the parts' determinants, not 0.
        if split_parts(&b).len() > 1 {
            continue;
        }
        let fox = fox_determinant(&Diagram::from_braid(&b));
        assert_eq!(alexander_det(&seifert_matrix(&b).matrix), BigInt::from(fox), "{}", b.to_text());
    }
}

#[test]
fn determinant_survives_vogel_round_trip() {
    let mut r = rng(24);
    let mut checked = 0;
    while checked < 100 {
        let k = r.random_range(2..6);
        let len = r.random_range(1..16);
        let b = random_braid(&mut r, k, len, false);
        let d = Diagram::from_braid(&b);
        if !d.is_connected() {
            continue;
        }
        checked += 1;
        let back = vogel(&d).unwrap().braid;
        assert_eq!(alexander_det(&seifert_matrix(&back).matrix), alexander_det(&seifert_matrix(&b).matrix));
        assert_eq!(signature(&back), signature(&b));
    }
}
