use std::collections::BTreeSet;
use std::sync::Arc;

use parahoric::affine_weyl::Parahoric;
use parahoric::basechange::{format_orbit_sums, BaseChangeContext};
use parahoric::hecke::CentralElement;
use parahoric::laurent::{LaurentScalar, MLaurent, Q};
use parahoric::lattice::LatVec;
use parahoric::rootdata::{build_root_datum, DiagramAutomorphism};

fn ctx(tag: &str, theta: &str, r: usize) -> BaseChangeContext {
    let d = Arc::new(build_root_datum(tag).unwrap());
    let t = DiagramAutomorphism::parse(&d, theta, r).unwrap();
    BaseChangeContext::new(d, t).unwrap()
}

fn v(xs: &[i64]) -> LatVec {
    LatVec::from_slice(xs)
}

#[test]
fn split_norm_scales_by_degree() {
    for r in 1..=3 {
        let c = ctx("A2", "id", r);
        for nu in [v(&[1, 0]), v(&[2, -1]), v(&[0, 0])] {
            assert_eq!(c.norm_cochar(&nu), nu.scale(r as i64));
        }
    }
}

#[test]
fn flip_norm_lands_in_fixed_lattice() {
    let c = ctx("A2", "flip", 2);
    for nu in [v(&[1, 0]), v(&[0, 1]), v(&[3, -2])] {
        let n = c.theta().norm(&nu);
        assert_eq!(c.theta().apply(&n), n);
        assert_eq!(n, nu + c.theta().apply(&nu));
        assert_eq!(c.from_f(&c.norm_cochar(&nu)), n);
    }
}

#[test]
fn degree_one_is_identity() {
    let c = ctx("C2", "id", 1);
    for mu in c.datum().dominant_within(3) {
        let z = CentralElement::orbit_sum(c.datum(), &mu);
        for j in Parahoric::all(2) {
            assert_eq!(c.base_change(&z, j).unwrap(), z);
        }
    }
}

#[test]
fn split_base_change_of_orbit_sums() {
    for (tag, r) in [("A1", 2), ("A2", 3), ("C2", 2), ("GL2", 2)] {
        let c = ctx(tag, "id", r);
        for mu in c.datum().dominant_within(2) {
            let z = CentralElement::orbit_sum(c.datum(), &mu);
            let want = CentralElement::orbit_sum(c.datum(), &mu.scale(r as i64));
            assert_eq!(c.base_change(&z, Parahoric::IWAHORI).unwrap(), want, "{tag} {mu}");
            for j in [Parahoric::IWAHORI, Parahoric::hyperspecial(c.datum().rank())] {
                assert_eq!(c.verify_split_formula(&mu, j).unwrap(), Ok(()), "{tag} {mu} {}", j.label());
            }
        }
    }
}

/// By hand: the orbit of ω1 is {ω1, ω2 − ω1, −ω2}; the flip swaps ω1 and ω2,
/// so the norms are ω1 + ω2, 0 and −(ω1 + ω2).
#[test]
fn flip_base_change_of_minuscule_orbit() {
    let c = ctx("A2", "flip", 2);
    let d = c.datum().clone();
    let w = d.fundamental_coweights().unwrap();
    let z = CentralElement::orbit_sum(&d, &w[0]);
    let b = c.base_change(&z, Parahoric::IWAHORI).unwrap();
    let ambient: BTreeSet<LatVec> = b.terms().map(|(l, _)| c.from_f(l)).collect();
    let s = w[0] + w[1];
    assert_eq!(ambient, [s, d.zero(), -s].into_iter().collect());
    assert!(b.terms().all(|(_, k)| k.is_one()));

    let orbits = c.f_orbit_coefficients(&b).unwrap();
    assert_eq!(orbits.len(), 2);
    assert_eq!(format_orbit_sums(&orbits).matches("z").count(), 2);
}

#[test]
fn flip_rejects_unstable_parahorics() {
    let c = ctx("A2", "flip", 2);
    let z = CentralElement::orbit_sum(c.datum(), &v(&[1, 1]));
    let unstable = Parahoric::all(2).into_iter().filter(|j| !j.is_theta_stable(c.theta())).collect::<Vec<_>>();
    assert!(!unstable.is_empty());
    for j in unstable {
        assert!(c.base_change(&z, j).is_err(), "{}", j.label());
    }
    assert!(c.base_change(&z, Parahoric::IWAHORI).is_ok());
}

#[test]
fn dual_norm_examples() {
    let c = ctx("C2", "id", 3);
    let nt = c.dual_norm(&c.generic_f_character()).unwrap();
    for i in 0..2 {
        assert_eq!(nt.eval(&LatVec::unit(2, i)).unwrap(), MLaurent::s_pow(i + 1, 3));
    }

    let f = ctx("A2", "flip", 2);
    let t = f.generic_f_character();
    let nt = f.dual_norm(&t).unwrap();
    for nu in [v(&[1, 0]), v(&[0, 1]), v(&[2, -3])] {
        assert_eq!(nt.eval(&nu).unwrap(), t.eval(&f.norm_cochar(&nu)).unwrap(), "{nu}");
    }
}

#[test]
fn homomorphism_on_small_weights() {
    for (tag, theta, r) in [("A2", "flip", 2), ("C2", "id", 2), ("A3", "flip", 2)] {
        let c = ctx(tag, theta, r);
        let doms = c.datum().dominant_within(2);
        for mu in &doms {
            for nu in &doms {
                assert_eq!(c.verify_homomorphism(mu, nu).unwrap(), Ok(()), "{tag} {mu} {nu}");
            }
        }
    }
}

#[test]
fn dimension_constants() {
    let s = ctx("C2", "id", 2);
    for j in Parahoric::all(2) {
        assert_eq!(s.dimension_constant(j).unwrap(), Q::from_integer(1));
    }
    let f = ctx("A2", "flip", 2);
    assert_eq!(f.dimension_constant(Parahoric::IWAHORI).unwrap(), Q::from_integer(3));
    assert_eq!(f.dimension_constant(Parahoric::hyperspecial(2)).unwrap(), Q::from_integer(1));
}

#[test]
fn spectral_characterization_examples() {
    for (tag, theta, r) in [("A1", "id", 2), ("A2", "flip", 2), ("C2", "id", 2)] {
        let c = ctx(tag, theta, r);
        let t = c.generic_f_character();
        for mu in c.datum().dominant_within(1) {
            let z = CentralElement::orbit_sum(c.datum(), &mu);
            for j in [Parahoric::IWAHORI, Parahoric::hyperspecial(c.datum().rank())] {
                assert_eq!(c.verify_spectral_characterization(&z, &t, j).unwrap(), Ok(()), "{tag} {mu} {}", j.label());
            }
        }
    }
}

#[test]
fn diagram_examples() {
    let c = ctx("C2", "id", 2);
    let d = c.datum().clone();
    let wg = d.weyl();
    let z = CentralElement::orbit_sum(&d, &d.fundamental_coweights().unwrap()[0]);
    assert_eq!(c.verify_bc_change_parahoric(&z, Parahoric::IWAHORI, Parahoric::from_indices(&[1])).unwrap(), Ok(()));
    assert!(c.verify_bc_change_parahoric(&z, Parahoric::from_indices(&[1]), Parahoric::IWAHORI).is_err());
    assert_eq!(c.verify_bc_constant_term(&z, &[1]).unwrap(), Ok(()));
    assert_eq!(c.verify_bc_w_conjugation(&z, wg.from_word(&[0, 1]), Parahoric::IWAHORI).unwrap(), Ok(()));

    let a = ctx("A1", "id", 3);
    let za = CentralElement::orbit_sum(a.datum(), &v(&[1]));
    assert_eq!(a.verify_bc_w_conjugation(&za, a.datum().weyl().from_word(&[0]), Parahoric::IWAHORI).unwrap(), Ok(()));

    let f = ctx("A2", "flip", 2);
    let fw = f.datum().weyl();
    let zf = CentralElement::orbit_sum(f.datum(), &v(&[1, 1]));
    assert_eq!(f.verify_bc_constant_term(&zf, &[0, 1]).unwrap(), Ok(()));
    assert!(f.verify_bc_constant_term(&zf, &[0]).is_err());
    assert_eq!(f.verify_bc_w_conjugation(&zf, fw.longest(), Parahoric::IWAHORI).unwrap(), Ok(()));
    assert!(f.verify_bc_w_conjugation(&zf, fw.from_word(&[0]), Parahoric::IWAHORI).is_err());
}

#[test]
fn non_invariant_input_rejected() {
    let c = ctx("A2", "id", 2);
    let mut z = CentralElement::zero();
    z.add_term(v(&[1, 0]), &LaurentScalar::one());
    assert!(c.norm_invariants(&z).is_err());
}
