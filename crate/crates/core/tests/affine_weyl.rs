use std::collections::BTreeSet;
use std::sync::Arc;

use parahoric::affine_weyl::{AffElem, AffineWeyl, AlcovePoint, Parahoric};
use parahoric::laurent::Q;
use parahoric::lattice::{solve_rational, LatVec};
use parahoric::rootdata::{build_root_datum, DiagramAutomorphism};

fn group(tag: &str) -> AffineWeyl {
    AffineWeyl::new(Arc::new(build_root_datum(tag).unwrap()))
}

fn word(g: &AffineWeyl, w: &[usize]) -> AffElem {
    g.from_word(w, &g.identity())
}

#[test]
fn lengths() {
    let g = group("A1");
    assert_eq!(g.length(&g.identity()), 0);
    let a = g.datum().simple_coroot(0);
    assert_eq!(g.length(&g.translation(&a)), 2);

    let pgl = group("PGL2");
    let w = pgl.datum().fundamental_coweights().unwrap()[0];
    let t = pgl.translation(&w);
    assert_eq!(pgl.length(&t), 1);
    let (word, omega) = pgl.reduced_word(&t);
    assert_eq!(word.len(), 1);
    assert_eq!(pgl.length(&omega), 0);
    assert_ne!(omega, pgl.identity());
}

/// Iwahori–Matsumoto: `ℓ(t_λ) = Σ_{α>0} |⟨α, λ⟩|`.
#[test]
fn translation_lengths_match_root_sum() {
    for tag in ["A2", "C2", "G2", "GL3", "B3"] {
        let g = group(tag);
        let d = g.datum().clone();
        let n = d.dim();
        for k in 0..200i64 {
            let lam = LatVec::from_slice(&(0..n).map(|i| (k * (7 + 3 * i as i64)) % 9 - 4).collect::<Vec<_>>());
            let im: i64 = d.positive().iter().map(|&r| d.root(r).covector.dot(&lam).abs()).sum();
            assert_eq!(g.length(&g.translation(&lam)) as i64, im, "{tag} {lam}");
        }
    }
}

/// Subword property: `x ≤ y` iff some subword of a reduced word of `y` gives `x`.
fn subword_leq(g: &AffineWeyl, x: &AffElem, y: &AffElem) -> bool {
    let (wy, oy) = g.reduced_word(y);
    (0u32..1 << wy.len()).any(|mask| {
        let sub: Vec<usize> = wy.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &s)| s).collect();
        g.from_word(&sub, &oy) == *x
    })
}

#[test]
fn bruhat_order_matches_subwords() {
    for tag in ["A1", "PGL2", "A2"] {
        let g = group(tag);
        let ball = g.ball(if tag == "A2" { 3 } else { 4 });
        for x in &ball {
            for y in &ball {
                assert_eq!(g.bruhat_leq(x, y), subword_leq(&g, x, y), "{tag}: {} ≤ {}", g.label(x), g.label(y));
            }
        }
    }
    let g = group("A1");
    let s0 = g.simple(0);
    assert!(g.bruhat_leq(&g.identity(), &s0));
    assert!(g.bruhat_leq(&s0, &s0));
    let t = g.translation(&g.datum().simple_coroot(0));
    let y = word(&g, &[0, 1, 0]);
    assert_eq!(g.bruhat_leq(&t, &y), subword_leq(&g, &t, &y));
}

#[test]
fn omega_orders() {
    assert_eq!(group("A1").omega().order(), Some(1));
    assert_eq!(group("PGL2").omega().order(), Some(2));
    assert_eq!(group("C2").omega().order(), Some(2));
    assert_eq!(group("A2").omega().order(), Some(3));
    assert_eq!(group("C2.sc").omega().order(), Some(1));
}

#[test]
fn minimal_coset_representatives() {
    let g = group("A2");
    let wg = g.datum().weyl();
    assert_eq!(g.min_coset_reps(&[0, 1]), vec![wg.identity()]);
    assert_eq!(g.min_coset_reps(&[]).len(), 6);
    let got: BTreeSet<usize> = g.min_coset_reps(&[0]).into_iter().collect();
    let want: BTreeSet<usize> = [wg.identity(), wg.from_word(&[1]), wg.from_word(&[1, 0])].into_iter().collect();
    assert_eq!(got, want);
}

#[test]
fn parabolic_parahoric_representatives() {
    let g = group("A2");
    assert_eq!(g.pgj_representatives(&[0], Parahoric::IWAHORI).unwrap().len(), 3);
    let k = Parahoric::hyperspecial(2);
    assert_eq!(g.pgj_representatives(&[], k).unwrap().len(), 1);
    for j in Parahoric::all(2) {
        let wbar = g.parahoric_finite_part(j).unwrap();
        assert_eq!(g.pgj_representatives(&[], j).unwrap().len(), 6 / wbar.len(), "{}", j.label());
    }
    let c2 = group("C2");
    assert_eq!(c2.pgj_representatives(&[1], Parahoric::hyperspecial(2)).unwrap().len(), 1);
}

#[test]
fn theta_fixed_representatives() {
    let g = group("A2");
    let flip = DiagramAutomorphism::parse(g.datum(), "flip", 2).unwrap();
    let table = g.theta_fixed_reps(&[], Parahoric::IWAHORI, &flip).unwrap();
    let wg = g.datum().weyl();
    let fixed: BTreeSet<usize> = table.fixed_representatives().into_iter().collect();
    assert_eq!(fixed, [wg.identity(), wg.longest()].into_iter().collect());

    let g3 = group("A3");
    let flip3 = DiagramAutomorphism::parse(g3.datum(), "flip", 2).unwrap();
    let t3 = g3.theta_fixed_reps(&[1], Parahoric::IWAHORI, &flip3).unwrap();
    assert_eq!(t3.entries.len(), 12);
    for e in &t3.entries {
        assert_eq!(e.theta_stable, e.theta_fixed);
        if e.theta_fixed {
            assert_eq!(flip3.on_weyl(e.representative), e.representative);
        }
    }

    let id = DiagramAutomorphism::parse(g.datum(), "id", 1).unwrap();
    let t = g.theta_fixed_reps(&[0], Parahoric::IWAHORI, &id).unwrap();
    assert!(t.entries.iter().all(|e| e.theta_stable && e.theta_fixed));
}

#[test]
fn iwasawa_cells() {
    let g = group("A1");
    for x in g.ball(4) {
        assert_eq!(g.iwasawa_cell(&x, Parahoric::IWAHORI).unwrap(), x);
    }
    let j = Parahoric::from_indices(&[0]);
    assert_eq!(g.iwasawa_cell(&g.simple(0), j).unwrap(), g.identity());
    let x = word(&g, &[1, 0]);
    assert_eq!(g.iwasawa_cell(&x, j).unwrap(), g.simple(1));
}

#[test]
fn cell_trichotomy_examples() {
    let g = group("A2");
    let wg = g.datum().weyl();
    let id = DiagramAutomorphism::parse(g.datum(), "id", 1).unwrap();
    let nu = LatVec::from_slice(&[1, -1]);
    let e = wg.identity();
    let o = g.v_lemma_check(&nu, &-nu, e, e, wg.from_word(&[0]), Parahoric::IWAHORI, &id).unwrap();
    assert!(o.theta_fixes_w && o.tau_equal && o.lambda_is_minus_nu && o.cells_equal);

    let flip = DiagramAutomorphism::parse(g.datum(), "flip", 2).unwrap();
    for w in wg.elements().filter(|&w| flip.on_weyl(w) != w) {
        for lam in g.translations_within(4) {
            let o = g.v_lemma_check(&-lam, &lam, e, e, w, Parahoric::IWAHORI, &flip).unwrap();
            assert!(!o.cells_equal, "w = {}", wg.word_label(w));
        }
    }
}

#[test]
fn trichotomy_sweep_at_cutoff_six() {
    for (tag, theta, r) in [("A2", "flip", 2), ("A3", "flip", 2), ("C2", "id", 1), ("G2", "id", 1)] {
        let g = group(tag);
        let th = DiagramAutomorphism::parse(g.datum(), theta, r).unwrap();
        let (n, bad) = g.v_lemma_sweep(&[], Parahoric::IWAHORI, &th, 6).unwrap();
        assert!(n > 0);
        assert!(bad.is_empty(), "{tag}: {:?}", bad.first());
    }
}

fn omega1_half() -> (AffineWeyl, AlcovePoint) {
    let g = group("C2.sc");
    let d = g.datum().clone();
    let rows: Vec<Vec<Q>> = (0..2).map(|i| d.simple_root(i).as_slice().iter().map(|&x| Q::from_integer(x)).collect()).collect();
    let w = solve_rational(&rows, &[Q::from_integer(1), Q::from_integer(0)]).unwrap();
    (g, AlcovePoint { coords: w.iter().map(|x| x / 2).collect() })
}

#[test]
fn sp4_vertex_counterexample() {
    let (g, half) = omega1_half();
    let d = g.datum().clone();
    assert_eq!(d.cartan()[1][0], -2, "α_2 should be the long root");
    let s1 = g.finite(d.weyl().gen(0));
    let s2 = g.finite(d.weyl().gen(1));
    assert!(g.fixes_facet(&s2, &half));
    assert!(!g.fixes_facet(&s2, &g.act_point(&s1, &half)));
    assert!(g.alcove_vertices().contains(&half));
}

#[test]
fn facet_fixing_basics() {
    let g = group("A2");
    let b = g.alcove_barycenter();
    assert!(g.in_base_alcove(&b));
    assert!(g.fixes_facet(&g.identity(), &b));
    for j in 0..3 {
        assert!(!g.fixes_facet(&g.simple(j), &b));
    }
}

#[test]
fn parahoric_groups_fix_their_facets() {
    for tag in ["A2", "C2", "G2"] {
        let g = group(tag);
        let verts = g.alcove_vertices();
        for j in Parahoric::all(g.datum().rank()) {
            for i in (0..verts.len()).filter(|i| !j.contains(*i)) {
                for x in g.parahoric_group(j).unwrap() {
                    assert!(g.fixes_facet(&x, &verts[i]), "{tag} J = {} vertex {i}", j.label());
                }
            }
        }
    }
}

#[test]
fn parahoric_parsing() {
    assert_eq!(Parahoric::parse("iwahori", 2).unwrap(), Parahoric::IWAHORI);
    assert_eq!(Parahoric::parse("K", 2).unwrap(), Parahoric::hyperspecial(2));
    assert_eq!(Parahoric::parse("s0,s2", 2).unwrap(), Parahoric::from_indices(&[0, 2]));
    assert!(Parahoric::parse("s0,s1,s2", 2).is_err());
    assert!(Parahoric::parse("s5", 2).is_err());
    assert_eq!(Parahoric::all(2).len(), 7);
}
