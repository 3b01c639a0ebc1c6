//! Norm maps and the base change homomorphism on Bernstein centers.
//!
//! E-side objects live on the full lattice `X`; F-side objects live on the
//! θ-fixed sublattice, in the coordinates of [`RelativeDatum::fixed_basis`]
//! (or the ambient coordinates when θ is trivial).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::affine_weyl::{AffineWeyl, Parahoric};
use crate::error::{Error, Result};
use crate::hecke::{CentralElement, HeckeAlgebra, HeckeElement};
use crate::lattice::LatVec;
use crate::laurent::{LaurentScalar, MLaurent, Q};
use crate::rootdata::{fold, DiagramAutomorphism, RelativeDatum, RootDatum};
use crate::spectral::{central_scalar, PrincipalSeriesModel, UnramifiedCharacter};

pub struct BaseChangeContext {
    datum: Arc<RootDatum>,
    theta: DiagramAutomorphism,
    rel: RelativeDatum,
    e_alg: Arc<HeckeAlgebra>,
    f_alg: Option<Arc<HeckeAlgebra>>,
}

/// A failed identity with both sides rendered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub what: String,
    pub left: String,
    pub right: String,
}

pub type Check = std::result::Result<(), Mismatch>;

fn mismatch(what: impl Into<String>, l: impl std::fmt::Debug, r: impl std::fmt::Debug) -> Mismatch {
    Mismatch { what: what.into(), left: format!("{l:?}"), right: format!("{r:?}") }
}

impl BaseChangeContext {
    /// E-side algebra with `q_E = q^r`; split data also get an F-side algebra with `q`.
    pub fn new(datum: Arc<RootDatum>, theta: DiagramAutomorphism) -> Result<Self> {
        let rel = fold(&datum, &theta)?;
        let group = Arc::new(AffineWeyl::new(datum.clone()));
        let e_alg = Arc::new(HeckeAlgebra::uniform(group.clone(), theta.r() as i32));
        let f_alg = theta.is_identity().then(|| Arc::new(HeckeAlgebra::new(group)));
        Ok(BaseChangeContext { datum, theta, rel, e_alg, f_alg })
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn theta(&self) -> &DiagramAutomorphism {
        &self.theta
    }

    pub fn relative(&self) -> &RelativeDatum {
        &self.rel
    }

    pub fn r(&self) -> usize {
        self.theta.r()
    }

    pub fn is_split(&self) -> bool {
        self.theta.is_identity()
    }

    pub fn e_algebra(&self) -> &Arc<HeckeAlgebra> {
        &self.e_alg
    }

    /// Concrete F-side Hecke algebra; split data only.
    pub fn f_algebra(&self) -> Option<&Arc<HeckeAlgebra>> {
        self.f_alg.as_ref()
    }

    pub fn f_dim(&self) -> usize {
        if self.is_split() {
            self.datum.dim()
        } else {
            self.rel.fixed_rank()
        }
    }

    /// F-side coordinates of a θ-fixed vector.
    pub fn to_f(&self, x: &LatVec) -> Option<LatVec> {
        if self.is_split() {
            Some(*x)
        } else {
            self.rel.coordinates(x)
        }
    }

    pub fn from_f(&self, c: &LatVec) -> LatVec {
        if self.is_split() {
            *c
        } else {
            self.rel.from_coordinates(c)
        }
    }

    /// `W(F) = W^θ`, as indices into `W`.
    pub fn f_weyl(&self) -> Vec<usize> {
        if self.is_split() {
            self.datum.weyl().elements().collect()
        } else {
            self.rel.relative_weyl().to_vec()
        }
    }

    pub fn f_apply(&self, w: usize, c: &LatVec) -> LatVec {
        self.to_f(&self.datum.weyl().apply(w, &self.from_f(c))).expect("W^θ preserves the fixed lattice")
    }

    pub fn f_orbit(&self, c: &LatVec) -> BTreeSet<LatVec> {
        self.f_weyl().iter().map(|&w| self.f_apply(w, c)).collect()
    }

    /// F-side orbit sum `Σ_{λ ∈ W(F)μ} e^λ`.
    pub fn f_orbit_sum(&self, c: &LatVec) -> CentralElement {
        let mut z = CentralElement::zero();
        for l in self.f_orbit(c) {
            z.add_term(l, &LaurentScalar::one());
        }
        z
    }

    pub fn is_f_invariant(&self, z: &CentralElement) -> bool {
        let ws = self.f_weyl();
        z.terms().all(|(l, c)| ws.iter().all(|&w| z.coeff(&self.f_apply(w, l)) == *c))
    }

    /// Regroups an F-invariant function into orbit sums keyed by the orbit's
    /// dominant member (dominance read in the ambient lattice).
    pub fn f_orbit_coefficients(&self, z: &CentralElement) -> Result<BTreeMap<LatVec, LaurentScalar>> {
        if !self.is_f_invariant(z) {
            return Err(Error::NotInvariant("F-side function is not W(F)-invariant".into()));
        }
        let mut out = BTreeMap::new();
        for (l, c) in z.terms() {
            if self.datum.is_dominant(&self.from_f(l)) {
                out.insert(*l, c.clone());
            }
        }
        let covered: usize = out.keys().map(|l| self.f_orbit(l).len()).sum();
        if covered != z.len() {
            return Err(Error::Integrity("some W(F)-orbit has no dominant member".into()));
        }
        Ok(out)
    }

    /// `N(ν) = Σ_{i<r} θ^i ν`, in F-side coordinates.
    pub fn norm_cochar(&self, nu: &LatVec) -> LatVec {
        let n = self.theta.norm(nu);
        self.to_f(&n).expect("norms are θ-fixed")
    }

    /// Pushforward `e^ν ↦ e^{Nν}` on `R^{W(E)} → R^{W(F)}`.
    pub fn norm_invariants(&self, f: &CentralElement) -> Result<CentralElement> {
        if !f.is_weyl_invariant(&self.datum) {
            return Err(Error::NotInvariant("norm needs a W(E)-invariant function".into()));
        }
        let out = f.map_lattice(|l| self.norm_cochar(l));
        if !self.is_f_invariant(&out) {
            return Err(Error::Integrity("norm image is not W(F)-invariant".into()));
        }
        Ok(out)
    }

    /// `b(φ) = B_F(N(B_E^{-1}(φ)))`, reported on the invariant-ring side.
    pub fn base_change(&self, phi: &CentralElement, j: Parahoric) -> Result<CentralElement> {
        if !j.is_theta_stable(&self.theta) {
            return Err(Error::NotThetaStable(format!("parahoric {}", j.label())));
        }
        self.norm_invariants(phi)
    }

    /// Split data: T-basis form of `b(φ) · 𝕀_J` in the F-side algebra.
    pub fn base_change_hecke(&self, phi: &CentralElement, j: Parahoric) -> Result<HeckeElement> {
        let f = self.f_alg.as_ref().ok_or_else(|| Error::Invalid("F-side Hecke algebra exists for split data only".into()))?;
        f.to_parahoric(&self.base_change(phi, j)?, j)
    }

    /// Generic F-side character: coordinate `k` is `s_{k+1}`.
    pub fn generic_f_character(&self) -> UnramifiedCharacter {
        UnramifiedCharacter::generic(self.f_dim())
    }

    /// `(Nt)(ν) = t(Nν)` as an E-side character.
    pub fn dual_norm(&self, t: &UnramifiedCharacter) -> Result<UnramifiedCharacter> {
        let n = self.datum.dim();
        let coords = (0..n).map(|i| t.eval_monomial(&self.norm_cochar(&LatVec::unit(n, i)))).collect::<Result<_>>()?;
        UnramifiedCharacter::from_monomials(coords)
    }

    /// `ch_t` on the F side: through the F-side model when split, closed form otherwise.
    pub fn f_central_scalar(&self, z: &CentralElement, t: &UnramifiedCharacter, j: Parahoric) -> Result<MLaurent> {
        match &self.f_alg {
            Some(f) => central_scalar(f, z, t, j),
            None => t.eval_relem_inverse(z),
        }
    }

    /// `|B(E)\G(E)/J(E)| = |W / W̄_J|`.
    pub fn e_cells(&self, j: Parahoric) -> Result<usize> {
        Ok(self.e_alg.group().pgj_representatives(&[], j)?.len())
    }

    /// `|B(F)\G(F)/J(F)| = |W^θ / W̄_J^θ|`.
    pub fn f_cells(&self, j: Parahoric) -> Result<usize> {
        let wbar = self.e_alg.group().parahoric_finite_part(j)?;
        let wf: BTreeSet<usize> = self.f_weyl().into_iter().collect();
        let inter = wbar.intersection(&wf).count();
        Ok(wf.len() / inter)
    }

    /// `C = |B(E)\G(E)/J(E)| / |B(F)\G(F)/J(F)|`, with the F-side count
    /// cross-checked against the θ-stable E-side cosets.
    pub fn dimension_constant(&self, j: Parahoric) -> Result<Q> {
        let fc = self.f_cells(j)?;
        let stable = self.e_alg.group().theta_fixed_reps(&[], j, &self.theta)?.stable_count();
        if stable != fc {
            return Err(Error::Integrity(format!("{stable} θ-stable cosets against {fc} F-side cosets")));
        }
        Ok(Q::new(self.e_cells(j)? as i64, fc as i64))
    }

    /// `ch_t(bφ) = ch_{Nt}(φ)`, with the E side computed through the E-side model,
    /// and the Fourier-side constant `ẑ_E(Nt) = C · (bφ)^(t)`.
    pub fn verify_spectral_characterization(&self, phi: &CentralElement, t: &UnramifiedCharacter, j: Parahoric) -> Result<Check> {
        let b = self.base_change(phi, j)?;
        let lhs = self.f_central_scalar(&b, t, j)?;
        let nt = self.dual_norm(t)?;
        let rhs = central_scalar(&self.e_alg, phi, &nt, j)?;
        if lhs != rhs {
            return Ok(Err(mismatch("ch_t(bφ) = ch_Nt(φ)", lhs, rhs)));
        }
        let c = self.dimension_constant(j)?;
        let fe = rhs.scale(Q::from_integer(self.e_cells(j)? as i64));
        let ff = lhs.scale(Q::from_integer(self.f_cells(j)? as i64)).scale(c);
        if fe != ff {
            return Ok(Err(mismatch("Fourier transforms differ by C", fe, ff)));
        }
        Ok(Ok(()))
    }

    /// `b_2(φ·𝕀_{J2}) = b_1(φ)·𝕀_{J2}`: both routes recover `B^{-1}` from the
    /// E-side model, push by the norm, and compare on the F side.
    pub fn verify_bc_change_parahoric(&self, phi: &CentralElement, j1: Parahoric, j2: Parahoric) -> Result<Check> {
        if !j1.is_subset(&j2) {
            return Err(Error::InvalidParahoric(format!("{} is not contained in {}", j1.label(), j2.label())));
        }
        let e = &self.e_alg;
        let model = PrincipalSeriesModel::new(e.clone(), UnramifiedCharacter::generic(self.datum.dim()))?;
        let h1 = e.to_parahoric(phi, j1)?;
        let h2 = e.change_parahoric(&h1, j1, j2)?;
        let direct = e.to_parahoric(phi, j2)?;
        if h2 != direct {
            return Ok(Err(mismatch("E-side change of parahoric", e.format(&h2), e.format(&direct))));
        }
        let left = self.base_change(&model.bernstein_inverse(&h2, j2)?, j2)?;
        let right = self.base_change(&model.bernstein_inverse(&h1, j1)?, j1)?;
        if left != right {
            return Ok(Err(mismatch("b_2 against b_1 on invariants", left, right)));
        }
        if let Some(f) = &self.f_alg {
            let l = f.to_parahoric(&left, j2)?;
            let r = f.change_parahoric(&f.to_parahoric(&right, j1)?, j1, j2)?;
            if l != r {
                return Ok(Err(mismatch("F-side change of parahoric", f.format(&l), f.format(&r))));
            }
        }
        Ok(Ok(()))
    }

    /// Constant term then norm against norm then constant term, for a θ-stable Levi.
    pub fn verify_bc_constant_term(&self, phi: &CentralElement, levi: &[usize]) -> Result<Check> {
        let img: BTreeSet<usize> = levi.iter().map(|&i| self.theta.perm()[i]).collect();
        if img != levi.iter().copied().collect() {
            return Err(Error::NotThetaStable("Levi subset".into()));
        }
        let wg = self.datum.weyl();
        let wm_e = wg.parabolic(levi);
        let wf: BTreeSet<usize> = self.f_weyl().into_iter().collect();
        let wm_f: Vec<usize> = wm_e.iter().copied().filter(|w| wf.contains(w)).collect();
        let regroup = |z: &CentralElement| -> Result<BTreeMap<LatVec, LaurentScalar>> {
            let mut out = BTreeMap::new();
            let mut seen = BTreeSet::new();
            for (l, c) in z.terms() {
                if seen.contains(l) {
                    continue;
                }
                let orbit: BTreeSet<LatVec> = wm_f.iter().map(|&w| self.f_apply(w, l)).collect();
                for x in &orbit {
                    if z.coeff(x) != *c {
                        return Err(Error::NotInvariant("not W_M(F)-invariant".into()));
                    }
                }
                out.insert(*orbit.iter().next_back().unwrap(), c.clone());
                seen.extend(orbit);
            }
            Ok(out)
        };
        // route 1: b on G, then constant term to M_F
        let left = regroup(&self.base_change(phi, Parahoric::IWAHORI)?)?;
        // route 2: constant term to M_E as W_M(E)-orbit sums, then b_M orbit by orbit
        let (_, orbits) = crate::spectral::constant_term_spectral(&self.datum, phi, levi)?;
        let mut pushed = CentralElement::zero();
        for (rep, c) in &orbits {
            let orbit: BTreeSet<LatVec> = wm_e.iter().map(|&w| wg.apply(w, rep)).collect();
            for l in orbit {
                pushed.add_term(self.norm_cochar(&l), c);
            }
        }
        let right = regroup(&pushed)?;
        if left != right {
            return Ok(Err(mismatch("constant term and base change", left, right)));
        }
        Ok(Ok(()))
    }

    /// For `w ∈ W(F)`: invariance of φ and bφ under `w`, scalar invariance
    /// `ch_{^wχ}(φ) = ch_χ(φ)` through the E-side model, and transport of the
    /// coset table `W/W̄_J → W/wW̄_Jw^{-1}`.
    pub fn verify_bc_w_conjugation(&self, phi: &CentralElement, w: usize, j: Parahoric) -> Result<Check> {
        let wg = self.datum.weyl();
        if !self.f_weyl().contains(&w) {
            return Err(Error::Invalid(format!("{} is not θ-fixed", wg.word_label(w))));
        }
        let moved = phi.map_lattice(|l| wg.apply(w, l));
        if moved != *phi {
            return Ok(Err(mismatch("W-invariance of φ", moved, phi)));
        }
        let b = self.base_change(phi, j)?;
        let bm = b.map_lattice(|l| self.f_apply(w, l));
        if bm != b {
            return Ok(Err(mismatch("W(F)-invariance of bφ", bm, b)));
        }
        let chi = UnramifiedCharacter::generic(self.datum.dim());
        let wchi = chi.conjugate(&self.datum, w)?;
        let s1 = central_scalar(&self.e_alg, phi, &chi, j)?;
        let s2 = central_scalar(&self.e_alg, phi, &wchi, j)?;
        if s1 != s2 {
            return Ok(Err(mismatch("ch under conjugated character", s1, s2)));
        }
        let wbar = self.e_alg.group().parahoric_finite_part(j)?;
        let conj: BTreeSet<usize> = wbar.iter().map(|&u| wg.mul(wg.mul(w, u), wg.inv(w))).collect();
        let cosets = |h: &BTreeSet<usize>| -> BTreeSet<BTreeSet<usize>> {
            wg.elements().map(|x| h.iter().map(|&u| wg.mul(x, u)).collect()).collect()
        };
        let before = cosets(&wbar);
        let after = cosets(&conj);
        let transported: BTreeSet<BTreeSet<usize>> =
            before.iter().map(|c| c.iter().map(|&x| wg.mul(wg.mul(w, x), wg.inv(w))).collect()).collect();
        if transported != after {
            return Ok(Err(mismatch("coset transport", transported.len(), after.len())));
        }
        Ok(Ok(()))
    }

    /// `b(z_μ ⋆ z_ν) = b(z_μ) ⋆ b(z_ν)`.
    pub fn verify_homomorphism(&self, mu: &LatVec, nu: &LatVec) -> Result<Check> {
        let zm = CentralElement::orbit_sum(&self.datum, mu);
        let zn = CentralElement::orbit_sum(&self.datum, nu);
        let l = self.norm_invariants(&zm.mul(&zn))?;
        let r = self.norm_invariants(&zm)?.mul(&self.norm_invariants(&zn)?);
        Ok(if l == r { Ok(()) } else { Err(mismatch("b(z_μ z_ν)", l, r)) })
    }

    /// Split data: `b(z_μ) = z_{rμ}` on invariants and, through `𝕀_J`, in the T-basis.
    pub fn verify_split_formula(&self, mu: &LatVec, j: Parahoric) -> Result<Check> {
        if !self.is_split() {
            return Err(Error::Invalid("split formula needs θ = id".into()));
        }
        let r = self.r() as i64;
        let b = self.base_change(&CentralElement::orbit_sum(&self.datum, mu), j)?;
        let want = CentralElement::orbit_sum(&self.datum, &mu.scale(r));
        if b != want {
            return Ok(Err(mismatch("b(z_μ) = z_rμ", b, want)));
        }
        let f = self.f_alg.as_ref().unwrap();
        let hb = f.to_parahoric(&b, j)?;
        let (_, hz) = f.bernstein_function(&mu.scale(r), j)?;
        Ok(if hb == hz { Ok(()) } else { Err(mismatch("T-basis b(z_μ)𝕀_J", f.format(&hb), f.format(&hz))) })
    }
}

/// Renders an orbit-sum decomposition as `c·z[λ] + ...`.
pub fn format_orbit_sums(orbits: &BTreeMap<LatVec, LaurentScalar>) -> String {
    if orbits.is_empty() {
        return "0".into();
    }
    orbits
        .iter()
        .map(|(l, c)| if c.is_one() { format!("z{l}") } else { format!("({c})·z{l}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::build_root_datum;

    fn ctx(tag: &str, theta: &str, r: usize) -> BaseChangeContext {
        let d = Arc::new(build_root_datum(tag).unwrap());
        let t = DiagramAutomorphism::parse(&d, theta, r).unwrap();
        BaseChangeContext::new(d, t).unwrap()
    }

    #[test]
    fn split_norm_is_scaling() {
        let c = ctx("C2", "id", 3);
        assert_eq!(c.norm_cochar(&LatVec::from_slice(&[1, -2])), LatVec::from_slice(&[3, -6]));
    }

    #[test]
    fn flip_norm_is_fixed() {
        let c = ctx("A2", "flip", 2);
        let n = c.theta().norm(&LatVec::from_slice(&[1, 0]));
        assert_eq!(c.theta().apply(&n), n);
        assert_eq!(c.f_dim(), 1);
    }

    #[test]
    fn flip_spectral_identity() {
        let c = ctx("A2", "flip", 2);
        let t = c.generic_f_character();
        let z = CentralElement::orbit_sum(c.datum(), &LatVec::from_slice(&[1, 0]));
        assert_eq!(c.verify_spectral_characterization(&z, &t, Parahoric::IWAHORI).unwrap(), Ok(()));
    }
}

