use std::collections::BTreeSet;

use parahoric::lattice::{IntMat, LatVec};
use parahoric::rootdata::{build_root_datum, fold, DiagramAutomorphism};

/// Closure of the simple reflections `x ↦ x − ⟨α_i, x⟩ α_i^∨`, built from scratch.
fn brute_force_weyl_order(tag: &str) -> usize {
    let d = build_root_datum(tag).unwrap();
    let n = d.dim();
    let gens: Vec<IntMat> = (0..d.rank())
        .map(|i| {
            let (a, c) = (d.simple_root(i), d.simple_coroot(i));
            let cols: Vec<LatVec> = (0..n).map(|k| LatVec::unit(n, k) - c.scale(a[k])).collect();
            IntMat::from_columns(&cols)
        })
        .collect();
    let mut seen: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
    let mut frontier = vec![IntMat::identity(n)];
    seen.insert(IntMat::identity(n).rows());
    while let Some(m) = frontier.pop() {
        for g in &gens {
            let p = g.mul(&m);
            if seen.insert(p.rows()) {
                frontier.push(p);
            }
        }
    }
    seen.len()
}

#[test]
fn a1_pairing_is_two() {
    let d = build_root_datum("A1").unwrap();
    assert_eq!(d.rank(), 1);
    assert_eq!(d.simple_root(0).dot(&d.simple_coroot(0)), 2);
}

#[test]
fn weyl_orders_match_closure() {
    for (tag, n) in [("A1", 2), ("A2", 6), ("C2", 8), ("B2", 8), ("G2", 12), ("A3", 24), ("B3", 48), ("C3", 48), ("GL3", 6)] {
        let d = build_root_datum(tag).unwrap();
        assert_eq!(d.weyl().order(), n, "{tag}");
        assert_eq!(brute_force_weyl_order(tag), n, "{tag}");
    }
}

#[test]
fn a2_longest_element() {
    let d = build_root_datum("A2").unwrap();
    let wg = d.weyl();
    assert_eq!(wg.length(wg.longest()), 3);
    let labels: BTreeSet<String> = wg.elements().map(|w| wg.word_label(w)).collect();
    assert_eq!(labels.len(), 6);
}

#[test]
fn theta_fixed_weyl_groups() {
    let d = build_root_datum("A2").unwrap();
    let flip = DiagramAutomorphism::parse(&d, "flip", 2).unwrap();
    let wf = fold(&d, &flip).unwrap().relative_weyl().to_vec();
    assert_eq!(wf.len(), 2);
    assert!(wf.contains(&d.weyl().identity()) && wf.contains(&d.weyl().longest()));

    let d3 = build_root_datum("A3").unwrap();
    let flip3 = DiagramAutomorphism::parse(&d3, "flip", 2).unwrap();
    assert_eq!(fold(&d3, &flip3).unwrap().relative_weyl().len(), 8);

    for tag in ["A1", "C2", "G2"] {
        let d = build_root_datum(tag).unwrap();
        let id = DiagramAutomorphism::parse(&d, "id", 1).unwrap();
        assert_eq!(fold(&d, &id).unwrap().relative_weyl().len(), d.weyl().order());
    }
}

#[test]
fn weyl_orbits() {
    let d = build_root_datum("A1").unwrap();
    assert_eq!(d.weyl_orbit(&d.zero()).len(), 1);
    let a = d.simple_coroot(0);
    assert_eq!(d.weyl_orbit(&a), [a, -a].into_iter().collect());

    let c2 = build_root_datum("C2").unwrap();
    let w1 = c2.fundamental_coweights().unwrap()[0];
    assert_eq!(c2.weyl_orbit(&w1).len(), 4);
}

#[test]
fn rejections() {
    assert!(build_root_datum("E8").is_err());
    assert!(build_root_datum("").is_err());
    let a2 = build_root_datum("A2").unwrap();
    assert!(DiagramAutomorphism::parse(&a2, "flip", 3).is_err());
    assert!(DiagramAutomorphism::parse(&a2, "1,1", 2).is_err());
    let c2 = build_root_datum("C2").unwrap();
    assert!(DiagramAutomorphism::parse(&c2, "flip", 2).is_err());
}
