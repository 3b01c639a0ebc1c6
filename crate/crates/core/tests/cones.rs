use std::sync::Arc;

use parahoric::cones::{rvec, CompactTraceFunctional, ConeContext, RVec, StdParabolic};
use parahoric::laurent::{MLaurent, Q, NVARS};
use parahoric::lattice::LatVec;
use parahoric::rootdata::{build_root_datum, DiagramAutomorphism};
use parahoric::spectral::UnramifiedCharacter;

fn ctx(tag: &str, theta: &str, r: usize) -> ConeContext {
    let d = build_root_datum(tag).unwrap();
    let t = DiagramAutomorphism::parse(&d, theta, r).unwrap();
    ConeContext::new(Arc::new(d), t).unwrap()
}

fn v(xs: &[i64]) -> LatVec {
    LatVec::from_slice(xs)
}

fn v_exp(k: i32) -> [i32; NVARS] {
    let mut e = [0; NVARS];
    e[0] = k;
    e
}

#[test]
fn h_map_examples() {
    let c = ctx("A2", "id", 1);
    let a1 = c.datum().simple_coroot(0);
    assert!(c.h_map(&a1, &[0, 1]).iter().all(|x| *x == Q::from_integer(0)));
    assert_eq!(c.h_map(&a1, &[]), rvec(&a1));
    let h = c.h_map(&a1, &[0]);
    assert!(h.iter().all(|x| *x == Q::from_integer(0)), "α1^∨ averages to zero over its own Levi: {h:?}");
    let a2 = c.datum().simple_coroot(1);
    let h2 = c.h_map(&a2, &[0]);
    assert_eq!(c.project(&[0], &h2), h2);
}

#[test]
fn acute_and_obtuse_examples() {
    let c = ctx("C2", "id", 1);
    let h = rvec(&c.datum().simple_coroot(0));
    assert!(!c.tau_hat(&StdParabolic::borel(), &h));
    assert!(c.tau_hat(&StdParabolic::new(vec![1]), &h));
    let rho = rvec(&(c.datum().simple_coroot(0) + c.datum().simple_coroot(1)));
    assert!(c.tau_hat(&StdParabolic::borel(), &rho));
    let whole = StdParabolic::whole(2);
    assert!(c.tau(&whole, &h) && c.tau_hat(&whole, &h));
}

#[test]
fn acute_cone_inside_obtuse_cone() {
    for tag in ["A2", "C2", "G2"] {
        let c = ctx(tag, "id", 1);
        for p in c.all_parabolics() {
            for a in -4..=4 {
                for b in -4..=4 {
                    let h: RVec = c.project(p.levi(), &rvec(&v(&[a, b])));
                    if c.tau(&p, &h) {
                        assert!(c.tau_hat(&p, &h), "{tag} {p} ({a},{b})");
                    }
                }
            }
        }
    }
}

#[test]
fn characteristic_functions_follow_norm() {
    for (tag, r) in [("A2", 1), ("C2", 2), ("G2", 3)] {
        let c = ctx(tag, "id", r);
        for p in c.theta_stable_parabolics() {
            for a in -3..=3 {
                for b in -3..=3 {
                    let l = v(&[a, b]);
                    let h = c.h_map(&l.scale(r as i64), p.levi());
                    assert_eq!(c.chi_n(&l, &p).unwrap(), c.tau(&p, &h));
                    assert_eq!(c.chi_hat_n(&l, &p).unwrap(), c.tau_hat(&p, &h));
                }
            }
        }
        for a in -3..=3 {
            for b in -3..=3 {
                let l = v(&[a, b]);
                assert_eq!(c.chi_n(&l, &StdParabolic::borel()).unwrap(), c.contracts_on_n(&l, &StdParabolic::borel()));
            }
        }
    }
    let f = ctx("A2", "flip", 2);
    assert!(f.chi_n(&v(&[1, 0]), &StdParabolic::new(vec![0])).is_err());
}

#[test]
fn arthur_identity_examples() {
    let c = ctx("A1", "id", 1);
    let (b, g) = (StdParabolic::borel(), StdParabolic::whole(1));
    for a in -6..=6 {
        let h = rvec(&v(&[a]));
        assert_eq!(c.arthur_sum(&g, &h), 1);
        assert_eq!(c.arthur_sum(&b, &h), i64::from(a > 0) - i64::from(2 * a > 0));
    }
    for (tag, theta, r) in [("A2", "id", 1), ("C2", "id", 2), ("G2", "id", 1), ("A2", "flip", 2), ("A3", "flip", 2)] {
        let t = ctx(tag, theta, r).arthur_sweep(500, 11, 12);
        assert_eq!(t.evaluations, 500 * ctx(tag, theta, r).all_parabolics().len());
        assert!(t.violations.is_empty(), "{tag}: {:?}", t.violations.first());
    }
}

#[test]
fn chamber_counts() {
    for (tag, theta, r, n) in [("A1", "id", 1, 2), ("A2", "id", 1, 12), ("C2", "id", 1, 8), ("A2", "flip", 2, 6)] {
        let c = ctx(tag, theta, r);
        let dec = c.hales_chambers(20, 3).unwrap();
        assert!(dec.exact);
        assert_eq!(dec.chambers.len(), n, "{tag} {theta}");
        let rep = c.chamber_constancy(&dec).unwrap();
        assert_eq!(rep.violations, 0);
        for ch in &dec.chambers {
            assert_eq!(c.locate(&dec, &ch.representative).map(|x| &x.signs), Some(&ch.signs));
        }
    }
}

#[test]
fn wprime_of_whole_group_is_everything() {
    let c = ctx("C2", "id", 1);
    let dec = c.hales_chambers(10, 5).unwrap();
    let rho = c.datum().simple_coroot(0).scale(3) + c.datum().simple_coroot(1).scale(2);
    let dominant = c.locate(&dec, &rho.scale(7)).expect("a regular dominant point");
    let all: Vec<usize> = c.datum().weyl().elements().collect();
    assert_eq!(c.wprime_set(&StdParabolic::whole(2), dominant).unwrap(), all);
    let b = c.wprime_set(&StdParabolic::borel(), dominant).unwrap();
    assert!(b.contains(&c.datum().weyl().identity()));
    assert!(b.len() < all.len());
}

#[test]
fn compact_trace_examples() {
    let c = ctx("A2", "id", 1);
    let xi = UnramifiedCharacter::generic(2);
    let zero = c.datum().zero();
    let e = c.datum().weyl().identity();
    let borel = CompactTraceFunctional { parabolic: StdParabolic::borel(), xi: xi.clone(), eta: e };
    assert_eq!(c.compact_trace(&borel, &zero).unwrap(), MLaurent::zero());
    let whole = CompactTraceFunctional { parabolic: StdParabolic::whole(2), xi, eta: e };
    assert_eq!(c.compact_trace(&whole, &zero).unwrap(), MLaurent::one());
    assert!(c.compact_trace(&borel, &v(&[-1, 0])).is_err());
}

/// A1 by hand, with `k = ⟨α, ν⟩ > 0`: the fixed points are `±ν`; the one
/// pairing positively with α carries the denominator.
#[test]
fn rank_one_atiyah_bott() {
    for r in 1..=3usize {
        let c = ctx("A1", "id", r);
        let xi = UnramifiedCharacter::generic(1);
        for a in [-2i64, -1, 1, 3] {
            let ab = c.atiyah_bott(&xi, &v(&[a])).unwrap();
            assert_eq!(ab.terms.len(), 2);
            let (ri, k) = (r as i32, 2 * a.unsigned_abs() as i32);
            let big = v(&[a.abs()]);
            let want = &xi.eval(&big).unwrap().mul_monomial(Q::from_integer(1), &v_exp(-3 * ri * k))
                + &xi.eval(&-big).unwrap().mul_monomial(Q::from_integer(1), &v_exp(ri * k));
            assert_eq!(ab.value, want, "r = {r}, ν = {a}");
        }
        assert!(c.atiyah_bott(&xi, &v(&[0])).is_err());
    }
}

#[test]
fn flip_atiyah_bott_fixed_points() {
    let c = ctx("A2", "flip", 2);
    assert_eq!(c.fixed_points_by_matrix(), c.fixed_points_by_action());
    assert_eq!(c.fixed_points_by_action().len(), 2);
    let xi = UnramifiedCharacter::generic(2);
    let ab = c.atiyah_bott(&xi, &v(&[1, 0])).unwrap();
    assert_eq!(ab.terms.len(), 2);
    let w1 = v(&[1, 0]);
    let w2 = v(&[0, 1]);
    assert!(!c.is_theta_regular(&(w1 - w2)));
    assert!(c.atiyah_bott(&xi, &(w1 - w2)).is_err());
}

#[test]
fn unitary_part_on_norm_kernel() {
    let c = ctx("A2", "flip", 2);
    let kernel = c.norm_kernel();
    assert_eq!(kernel.len(), 1);
    assert!(c.norm_cochar(&v(&[1, -1])).is_zero());
    let rep = c.unitary_part_invariance(20, 5, 9).unwrap();
    assert_eq!(rep.evaluations, 100);
    assert!(rep.max_deviation < 1e-10, "{rep:?}");

    let s = ctx("A1", "id", 2);
    assert!(s.norm_kernel().is_empty());
}
