use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use parahoric::affine_weyl::{AffElem, AffineWeyl};
use parahoric::basechange::BaseChangeContext;
use parahoric::cones::{rvec, ConeContext, StdParabolic};
use parahoric::hecke::HeckeAlgebra;
use parahoric::laurent::{LaurentScalar, Q};
use parahoric::lattice::{integer_kernel, IntMat, LatVec};
use parahoric::rootdata::{build_root_datum, DiagramAutomorphism};

fn laurent() -> impl Strategy<Value = LaurentScalar> {
    prop::collection::vec((-3i64..=3, -4i32..=4), 0..5).prop_map(|terms| {
        terms.into_iter().fold(LaurentScalar::zero(), |acc, (c, e)| acc + LaurentScalar::monomial(Q::from_integer(c), e))
    })
}

struct Fixture {
    algebra: Arc<HeckeAlgebra>,
    ball: Vec<AffElem>,
}

fn a2() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let g = Arc::new(AffineWeyl::new(Arc::new(build_root_datum("A2").unwrap())));
        let ball = g.ball(4);
        Fixture { algebra: Arc::new(HeckeAlgebra::new(g)), ball }
    })
}

fn cones(tag: &str, theta: &str, r: usize) -> ConeContext {
    let d = build_root_datum(tag).unwrap();
    let t = DiagramAutomorphism::parse(&d, theta, r).unwrap();
    ConeContext::new(Arc::new(d), t).unwrap()
}

proptest! {
    #[test]
    fn laurent_ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, LaurentScalar::zero());
        prop_assert_eq!(&a * &LaurentScalar::one(), a.clone());
    }

    #[test]
    fn exact_division_round_trips(a in laurent(), b in laurent()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
    }

    #[test]
    fn length_laws(i in 0usize..1000, j in 0usize..1000) {
        let f = a2();
        let g = f.algebra.group();
        let (x, y) = (&f.ball[i % f.ball.len()], &f.ball[j % f.ball.len()]);
        let xy = g.mul(x, y);
        prop_assert_eq!(g.length(&g.inv(x)), g.length(x));
        prop_assert!(g.length(&xy) <= g.length(x) + g.length(y));
        prop_assert_eq!((g.length(&xy) + g.length(x) + g.length(y)) % 2, 0);
    }

    #[test]
    fn basis_multiplies_when_lengths_add(i in 0usize..1000, j in 0usize..1000) {
        let f = a2();
        let (a, g) = (&f.algebra, f.algebra.group());
        let (x, y) = (&f.ball[i % f.ball.len()], &f.ball[j % f.ball.len()]);
        let xy = g.mul(x, y);
        prop_assume!(g.length(&xy) == g.length(x) + g.length(y));
        prop_assert_eq!(a.multiply(&a.basis(x), &a.basis(y)).unwrap(), a.basis(&xy));
    }

    #[test]
    fn base_change_is_multiplicative(m in prop::array::uniform2(-2i64..=2), n in prop::array::uniform2(-2i64..=2), flip in any::<bool>()) {
        let d = Arc::new(build_root_datum("A2").unwrap());
        let (theta, r) = if flip { ("flip", 2) } else { ("id", 3) };
        let t = DiagramAutomorphism::parse(&d, theta, r).unwrap();
        let c = BaseChangeContext::new(d, t).unwrap();
        let check = c.verify_homomorphism(&LatVec::from_slice(&m), &LatVec::from_slice(&n)).unwrap();
        prop_assert!(check.is_ok(), "{:?}", check);
    }

    #[test]
    fn arthur_alternating_sum(x in prop::array::uniform2(-30i64..=30), which in 0usize..3) {
        let (tag, theta, r) = [("A2", "id", 1), ("C2", "id", 2), ("A2", "flip", 2)][which];
        let c = cones(tag, theta, r);
        let h = rvec(&LatVec::from_slice(&x));
        for q in c.all_parabolics() {
            let expect = i64::from(q.is_whole(2));
            prop_assert_eq!(c.arthur_sum(&q, &h), expect, "Q = {}", q);
        }
        prop_assert_eq!(c.arthur_sum(&StdParabolic::whole(2), &h), 1);
    }

    #[test]
    fn integer_kernel_is_annihilated(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 3)) {
        let a = IntMat::from_rows(&rows);
        for k in integer_kernel(&a) {
            prop_assert!(!k.is_zero());
            prop_assert!(a.apply(&k).is_zero());
        }
    }
}
