use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::{AffElem, AffineWeyl, Parahoric};
use crate::error::{Error, Result};
use crate::lattice::LatVec;
use crate::rootdata::DiagramAutomorphism;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CosetKind {
    Left,
    Right,
    Double,
    Iwasawa,
}

#[derive(Clone, Debug)]
pub struct CosetTable {
    pub kind: CosetKind,
    pub representatives: Vec<AffElem>,
}

impl CosetTable {
    /// One record per representative: `translation<TAB>finite word`.
    pub fn to_records(&self, g: &AffineWeyl) -> String {
        let wg = g.datum().weyl();
        self.representatives
            .iter()
            .map(|x| format!("{}\t{}\n", x.t.to_csv(), wg.word_label(x.w as usize)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaCosetEntry {
    /// Chosen representative (θ-fixed when the double coset is θ-stable).
    pub representative: usize,
    pub theta_stable: bool,
    pub theta_fixed: bool,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaCosetTable {
    pub entries: Vec<ThetaCosetEntry>,
}

impl ThetaCosetTable {
    pub fn fixed_representatives(&self) -> Vec<usize> {
        self.entries.iter().filter(|e| e.theta_fixed).map(|e| e.representative).collect()
    }

    pub fn stable_count(&self) -> usize {
        self.entries.iter().filter(|e| e.theta_stable).count()
    }
}

/// `(ν, λ, τ, τ₀, w)` for which the cell comparison broke the trichotomy.
pub type TrichotomyViolation = (LatVec, LatVec, usize, usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VLemmaOutcome {
    pub theta_fixes_w: bool,
    pub tau_equal: bool,
    pub lambda_is_minus_nu: bool,
    pub cells_equal: bool,
}

impl VLemmaOutcome {
    /// Equal cells force all three conditions, and conversely.
    pub fn consistent(&self) -> bool {
        let all = self.theta_fixes_w && self.tau_equal && self.lambda_is_minus_nu;
        self.cells_equal == all
    }
}

impl AffineWeyl {
    /// `(W_M\W)_min`: elements with `w^{-1}α > 0` for all `α ∈ Δ_M`.
    pub fn min_coset_reps(&self, levi: &[usize]) -> Vec<usize> {
        let d = self.datum();
        let wg = d.weyl();
        wg.elements()
            .filter(|&w| {
                let wi = wg.inv(w);
                levi.iter().all(|&i| {
                    let k = d.root_by_covector(&d.simple_root(i)).unwrap();
                    d.root(wg.root_image(wi, k)).is_positive()
                })
            })
            .collect()
    }

    /// Partition of W into `W_M w H` double cosets for a subgroup `H`,
    /// ordered by their first element.
    pub fn double_cosets(&self, levi: &[usize], h: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let wg = self.datum().weyl();
        let wm = wg.parabolic(levi);
        let mut owner = vec![usize::MAX; wg.order()];
        let mut out: Vec<BTreeSet<usize>> = Vec::new();
        for w in wg.elements() {
            if owner[w] != usize::MAX {
                continue;
            }
            let mut d = BTreeSet::new();
            for &a in &wm {
                for &b in h {
                    d.insert(wg.mul(wg.mul(a, w), b));
                }
            }
            for &x in &d {
                owner[x] = out.len();
            }
            out.push(d);
        }
        out
    }

    /// One representative per `W_M\W/W̄_J` double coset, each minimal in its
    /// `W_M`-coset and of minimal length in its double coset.
    pub fn pgj_representatives(&self, levi: &[usize], j: Parahoric) -> Result<CosetTable> {
        let wg = self.datum().weyl();
        let wbar = self.parahoric_finite_part(j)?;
        let wm = wg.parabolic(levi);
        let mut covered = BTreeSet::new();
        let mut reps = Vec::new();
        for w in self.min_coset_reps(levi) {
            if covered.contains(&w) {
                continue;
            }
            reps.push(self.finite(w));
            for &a in &wm {
                for &b in &wbar {
                    covered.insert(wg.mul(wg.mul(a, w), b));
                }
            }
        }
        Ok(CosetTable { kind: CosetKind::Double, representatives: reps })
    }

    /// Double cosets with θ-stability flags and θ-fixed minimal representatives.
    pub fn theta_fixed_reps(&self, levi: &[usize], j: Parahoric, theta: &DiagramAutomorphism) -> Result<ThetaCosetTable> {
        let wg = self.datum().weyl();
        let levi_img: BTreeSet<usize> = levi.iter().map(|&i| theta.perm()[i]).collect();
        if levi_img != levi.iter().copied().collect() {
            return Err(Error::NotThetaStable("Levi subset".into()));
        }
        if !j.is_theta_stable(theta) {
            return Err(Error::NotThetaStable(format!("parahoric {}", j.label())));
        }
        let wbar = self.parahoric_finite_part(j)?;
        let mins: BTreeSet<usize> = self.min_coset_reps(levi).into_iter().collect();
        let cosets = self.double_cosets(levi, &wbar);
        let mut entries = Vec::new();
        for d in &cosets {
            let first = *d.iter().next().unwrap();
            let stable = d.contains(&theta.on_weyl(first));
            let fixed = d.iter().copied().find(|&w| mins.contains(&w) && theta.on_weyl(w) == w);
            let min_rep = d.iter().copied().find(|w| mins.contains(w)).unwrap();
            if stable && fixed.is_none() {
                return Err(Error::Integrity(format!(
                    "θ-stable double coset of {} has no θ-fixed minimal representative",
                    wg.word_label(first)
                )));
            }
            entries.push(ThetaCosetEntry {
                representative: if stable { fixed.unwrap() } else { min_rep },
                theta_stable: stable,
                theta_fixed: stable,
                size: d.len(),
            });
        }
        Ok(ThetaCosetTable { entries })
    }

    /// Minimal representatives of `W_M / (W_M ∩ w W̄_J w^{-1})`.
    pub fn levi_side_reps(&self, levi: &[usize], w: usize, wbar: &BTreeSet<usize>) -> Vec<usize> {
        let wg = self.datum().weyl();
        let wm = wg.parabolic(levi);
        let wi = wg.inv(w);
        let h: Vec<usize> = wm.iter().copied().filter(|&a| wbar.contains(&wg.mul(wg.mul(wi, a), w))).collect();
        let mut covered = BTreeSet::new();
        let mut reps = Vec::new();
        for &t in &wm {
            if covered.contains(&t) {
                continue;
            }
            reps.push(t);
            for &x in &h {
                covered.insert(wg.mul(t, x));
            }
        }
        reps
    }

    /// Compares the cells of `t_{−λ} τ_0 w` and `t_ν τ θ(w)` in `W̃/W̃_J`.
    #[allow(clippy::too_many_arguments)]
    pub fn v_lemma_check(
        &self,
        nu: &LatVec,
        lambda: &LatVec,
        tau: usize,
        tau0: usize,
        w: usize,
        j: Parahoric,
        theta: &DiagramAutomorphism,
    ) -> Result<VLemmaOutcome> {
        let group = self.parahoric_group(j)?;
        let tw = theta.on_weyl(w);
        let left = self.mul(&self.translation(&-*lambda), &self.finite(self.datum().weyl().mul(tau0, w)));
        let right = self.mul(&self.translation(nu), &self.finite(self.datum().weyl().mul(tau, tw)));
        Ok(VLemmaOutcome {
            theta_fixes_w: tw == w,
            tau_equal: tau == tau0,
            lambda_is_minus_nu: *lambda == -*nu,
            cells_equal: self.iwasawa_cell_with(&left, &group) == self.iwasawa_cell_with(&right, &group),
        })
    }

    /// Exhaustive check of the cell trichotomy over translations with
    /// `ℓ(t) ≤ cutoff`. Returns the number of cell pairs examined and any
    /// inconsistent outcomes.
    pub fn v_lemma_sweep(
        &self,
        levi: &[usize],
        j: Parahoric,
        theta: &DiagramAutomorphism,
        cutoff: usize,
    ) -> Result<(usize, Vec<TrichotomyViolation>)> {
        let wg = self.datum().weyl();
        let group = self.parahoric_group(j)?;
        let wbar = self.parahoric_finite_part(j)?;
        let table = self.theta_fixed_reps(levi, j, theta)?;
        let lambdas = self.translations_within(cutoff);
        let mut checked = 0usize;
        let mut bad = Vec::new();
        for e in &table.entries {
            let w = e.representative;
            let tw = theta.on_weyl(w);
            let taus0 = self.levi_side_reps(levi, w, &wbar);
            let taus = self.levi_side_reps(levi, tw, &wbar);
            let mut right: HashMap<AffElem, Vec<(LatVec, usize)>> = HashMap::new();
            for &tau in &taus {
                for nu in &lambdas {
                    let x = self.mul(&self.translation(nu), &self.finite(wg.mul(tau, tw)));
                    right.entry(self.iwasawa_cell_with(&x, &group)).or_default().push((*nu, tau));
                }
            }
            for &tau0 in &taus0 {
                for lam in &lambdas {
                    let x = self.mul(&self.translation(&-*lam), &self.finite(wg.mul(tau0, w)));
                    let cell = self.iwasawa_cell_with(&x, &group);
                    checked += taus.len() * lambdas.len();
                    let hits = right.get(&cell).map(|v| v.as_slice()).unwrap_or(&[]);
                    let expected_hit = tw == w && taus.contains(&tau0) && lambdas.contains(&-*lam);
                    let mut found_expected = false;
                    for &(nu, tau) in hits {
                        let ok = tw == w && tau == tau0 && *lam == -nu;
                        if ok {
                            found_expected = true;
                        } else {
                            bad.push((nu, *lam, tau, tau0, w));
                        }
                    }
                    if expected_hit && !found_expected {
                        bad.push((-*lam, *lam, tau0, tau0, w));
                    }
                }
            }
        }
        Ok((checked, bad))
    }

    /// Orbit of θ on the double cosets, as a map from each coset's first
    /// element to the first element of its image.
    pub fn theta_on_double_cosets(
        &self,
        levi: &[usize],
        j: Parahoric,
        theta: &DiagramAutomorphism,
    ) -> Result<BTreeMap<usize, usize>> {
        let wbar = self.parahoric_finite_part(j)?;
        let cosets = self.double_cosets(levi, &wbar);
        let mut owner = BTreeMap::new();
        for d in &cosets {
            let first = *d.iter().next().unwrap();
            for &x in d {
                owner.insert(x, first);
            }
        }
        Ok(cosets
            .iter()
            .map(|d| {
                let first = *d.iter().next().unwrap();
                (first, owner[&theta.on_weyl(first)])
            })
            .collect())
    }
}
