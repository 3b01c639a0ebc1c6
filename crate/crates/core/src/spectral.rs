//! Unramified characters, the principal-series model `χ ⊗_R H`, and the
//! scalars through which central elements act on it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::affine_weyl::Parahoric;
use crate::error::{Error, Result};
use crate::hecke::{BernsteinForm, CentralElement, HeckeAlgebra, HeckeElement, RElem};
use crate::lattice::{rational_rank, LatVec};
use crate::laurent::{Exps, LaurentScalar, MLaurent, NVARS, Q};
use crate::rootdata::RootDatum;

pub type Matrix = Vec<Vec<MLaurent>>;

/// A character `X → K^×`, given by its values on the lattice basis.
#[derive(Clone, PartialEq)]
pub enum UnramifiedCharacter {
    /// Each coordinate is an invertible monomial `c · v^a s1^b s2^c s3^d`.
    Symbolic(Vec<(Q, Exps)>),
    /// Nonzero complex coordinates with `v` specialised to `√q`.
    Numeric { coords: Vec<Complex64>, v: f64 },
}

impl fmt::Debug for UnramifiedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UnramifiedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnramifiedCharacter::Symbolic(cs) => {
                let parts: Vec<String> =
                    cs.iter().enumerate().map(|(i, (c, e))| format!("x{}={}", i + 1, MLaurent::monomial(*c, *e))).collect();
                write!(f, "{}", parts.join(", "))
            }
            UnramifiedCharacter::Numeric { coords, v } => {
                let parts: Vec<String> = coords.iter().enumerate().map(|(i, z)| format!("x{}={z}", i + 1)).collect();
                write!(f, "{}, v={v}", parts.join(", "))
            }
        }
    }
}

fn mono_pow(c: Q, e: &Exps, k: i64) -> (Q, Exps) {
    let k32 = k as i32;
    let mut out = [0; NVARS];
    for i in 0..NVARS {
        out[i] = e[i] * k32;
    }
    (c.pow(k32), out)
}

fn mono_mul(a: (Q, Exps), b: (Q, Exps)) -> (Q, Exps) {
    let mut e = a.1;
    for i in 0..NVARS {
        e[i] += b.1[i];
    }
    (a.0 * b.0, e)
}

impl UnramifiedCharacter {
    /// Generic character: coordinate `i` is the indeterminate `s_{i+1}`.
    pub fn generic(dim: usize) -> Self {
        UnramifiedCharacter::Symbolic(
            (0..dim)
                .map(|i| {
                    let mut e = [0; NVARS];
                    e[i + 1] = 1;
                    (Q::one(), e)
                })
                .collect(),
        )
    }

    pub fn trivial(dim: usize) -> Self {
        UnramifiedCharacter::Symbolic(vec![(Q::one(), [0; NVARS]); dim])
    }

    pub fn from_monomials(coords: Vec<(Q, Exps)>) -> Result<Self> {
        if coords.iter().any(|(c, _)| c.is_zero()) {
            return Err(Error::Invalid("character coordinates must be invertible".into()));
        }
        Ok(UnramifiedCharacter::Symbolic(coords))
    }

    pub fn numeric(coords: Vec<Complex64>, v: f64) -> Result<Self> {
        if coords.iter().any(|z| z.norm() == 0.0) || v <= 0.0 {
            return Err(Error::Invalid("numeric character needs nonzero coordinates and v > 0".into()));
        }
        Ok(UnramifiedCharacter::Numeric { coords, v })
    }

    pub fn dim(&self) -> usize {
        match self {
            UnramifiedCharacter::Symbolic(c) => c.len(),
            UnramifiedCharacter::Numeric { coords, .. } => coords.len(),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, UnramifiedCharacter::Symbolic(_))
    }

    /// `χ(λ)` as a monomial.
    pub fn eval_monomial(&self, lambda: &LatVec) -> Result<(Q, Exps)> {
        match self {
            UnramifiedCharacter::Symbolic(cs) => {
                if cs.len() != lambda.dim() {
                    return Err(Error::Invalid("character and lattice dimensions differ".into()));
                }
                Ok(cs.iter().zip(lambda.as_slice()).fold((Q::one(), [0; NVARS]), |acc, ((c, e), &k)| mono_mul(acc, mono_pow(*c, e, k))))
            }
            UnramifiedCharacter::Numeric { .. } => Err(Error::Invalid("numeric character has no symbolic value".into())),
        }
    }

    pub fn eval(&self, lambda: &LatVec) -> Result<MLaurent> {
        let (c, e) = self.eval_monomial(lambda)?;
        Ok(MLaurent::monomial(c, e))
    }

    /// `χ°(λ) = χ(−λ)`, the value through which θ_λ acts on the model.
    pub fn eval_inverse(&self, lambda: &LatVec) -> Result<MLaurent> {
        self.eval(&-*lambda)
    }

    pub fn eval_numeric(&self, lambda: &LatVec) -> Result<Complex64> {
        match self {
            UnramifiedCharacter::Numeric { coords, .. } => {
                Ok(coords.iter().zip(lambda.as_slice()).fold(Complex64::one(), |acc, (z, &k)| acc * z.powi(k as i32)))
            }
            UnramifiedCharacter::Symbolic(_) => Err(Error::Invalid("symbolic character has no numeric value".into())),
        }
    }

    /// `χ(a)` for `a = Σ c_λ e^λ` in the group ring, coefficients in `v`.
    pub fn eval_relem(&self, r: &RElem) -> Result<MLaurent> {
        let mut out = MLaurent::zero();
        for (l, c) in r.terms() {
            let (k, e) = self.eval_monomial(l)?;
            out += &MLaurent::from_laurent(c).mul_monomial(k, &e);
        }
        Ok(out)
    }

    /// `Σ c_λ χ°(λ)`.
    pub fn eval_relem_inverse(&self, r: &RElem) -> Result<MLaurent> {
        self.eval_relem(&r.map_lattice(|l| -*l))
    }

    /// `(^wχ)(λ) = χ(w^{-1}λ)`.
    pub fn conjugate(&self, datum: &RootDatum, w: usize) -> Result<Self> {
        let wg = datum.weyl();
        let wi = wg.inv(w);
        let basis: Vec<LatVec> = (0..datum.dim()).map(|i| wg.apply(wi, &LatVec::unit(datum.dim(), i))).collect();
        match self {
            UnramifiedCharacter::Symbolic(_) => {
                Ok(UnramifiedCharacter::Symbolic(basis.iter().map(|b| self.eval_monomial(b)).collect::<Result<_>>()?))
            }
            UnramifiedCharacter::Numeric { v, .. } => Ok(UnramifiedCharacter::Numeric {
                coords: basis.iter().map(|b| self.eval_numeric(b)).collect::<Result<_>>()?,
                v: *v,
            }),
        }
    }

    /// Parses `s1=..., s2=..., v=...`. Values are monomials such as `2*s1^-1*v^3`
    /// (symbolic mode) or, when `v` is given, real or complex numbers `a+bi`.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let mut vals: BTreeMap<String, String> = BTreeMap::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected name=value, got {part:?}")))?;
            vals.insert(k.trim().to_string(), v.trim().to_string());
        }
        if let Some(vs) = vals.remove("v") {
            let v: f64 = vs.parse().map_err(|_| Error::Parse(format!("bad v {vs:?}")))?;
            let coords = (0..dim)
                .map(|i| match vals.get(&format!("s{}", i + 1)) {
                    Some(s) => parse_complex(s),
                    None => Ok(Complex64::one()),
                })
                .collect::<Result<_>>()?;
            return Self::numeric(coords, v);
        }
        let coords = (0..dim)
            .map(|i| match vals.get(&format!("s{}", i + 1)) {
                Some(s) => parse_monomial(s),
                None => {
                    let mut e = [0; NVARS];
                    e[i + 1] = 1;
                    Ok((Q::one(), e))
                }
            })
            .collect::<Result<_>>()?;
        Self::from_monomials(coords)
    }
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let err = || Error::Parse(format!("bad complex number {s:?}"));
    if let Some(body) = s.strip_suffix('i') {
        let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').last().map(|(i, _)| i);
        let (re, im) = match split {
            Some(i) => (body[..i].parse::<f64>().map_err(|_| err())?, body[i..].parse::<f64>().map_err(|_| err())?),
            None => (0.0, body.parse::<f64>().map_err(|_| err())?),
        };
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(s.parse::<f64>().map_err(|_| err())?, 0.0))
    }
}

fn parse_monomial(s: &str) -> Result<(Q, Exps)> {
    let err = || Error::Parse(format!("bad monomial {s:?}"));
    let mut c = Q::one();
    let mut e = [0; NVARS];
    for factor in s.split('*').map(str::trim) {
        let (base, pow) = match factor.split_once('^') {
            Some((b, p)) => (b, p.parse::<i32>().map_err(|_| err())?),
            None => (factor, 1),
        };
        let slot = match base {
            "v" => Some(0),
            "s1" => Some(1),
            "s2" => Some(2),
            "s3" => Some(3),
            _ => None,
        };
        match slot {
            Some(k) => e[k] += pow,
            None => {
                let q = match base.split_once('/') {
                    Some((n, d)) => Q::new(n.parse().map_err(|_| err())?, d.parse().map_err(|_| err())?),
                    None => Q::from_integer(base.parse().map_err(|_| err())?),
                };
                c *= q.pow(pow);
            }
        }
    }
    if c.is_zero() {
        return Err(err());
    }
    Ok((c, e))
}

/// `χ ⊗_R H` with basis `1 ⊗ T_w`, `w ∈ W`, and θ_λ acting through `χ°(λ)`.
pub struct PrincipalSeriesModel {
    alg: Arc<HeckeAlgebra>,
    chi: UnramifiedCharacter,
    /// `(w', i, w'')` with `w' = s_i w''` and `ℓ(w') = ℓ(w'') + 1`, in BFS order.
    order: Vec<(usize, usize, usize)>,
}

impl PrincipalSeriesModel {
    pub fn new(alg: Arc<HeckeAlgebra>, chi: UnramifiedCharacter) -> Result<Self> {
        let d = alg.group().datum().clone();
        if chi.dim() != d.dim() || !chi.is_symbolic() {
            return Err(Error::Invalid("model needs a symbolic character on the lattice".into()));
        }
        let wg = d.weyl();
        let mut order = Vec::new();
        for w in wg.elements().skip(1) {
            let word = wg.word(w);
            let rest = wg.from_word(&word[1..]);
            order.push((w, word[0], rest));
        }
        Ok(PrincipalSeriesModel { alg, chi, order })
    }

    pub fn dim(&self) -> usize {
        self.alg.group().datum().weyl().order()
    }

    pub fn character(&self) -> &UnramifiedCharacter {
        &self.chi
    }

    pub fn algebra(&self) -> &Arc<HeckeAlgebra> {
        &self.alg
    }

    /// Matrix of the right action of `Σ_u r_u T_u`: row `w'` holds `1 ⊗ T_{w'} F`.
    pub fn act_form(&self, f: &BernsteinForm) -> Result<Matrix> {
        let n = self.dim();
        let mut rows: Vec<Option<BernsteinForm>> = vec![None; n];
        rows[0] = Some(f.clone());
        for &(w, i, rest) in &self.order {
            let prev = rows[rest].as_ref().expect("BFS order");
            rows[w] = Some(self.alg.bernstein_left_simple(i, prev)?);
        }
        rows.into_iter()
            .map(|r| r.unwrap().coeffs.iter().map(|c| self.chi.eval_relem_inverse(c)).collect::<Result<Vec<_>>>())
            .collect()
    }

    /// Action matrix of a T-basis element, through its full Bernstein expansion.
    pub fn act(&self, h: &HeckeElement) -> Result<Matrix> {
        self.act_form(&self.alg.bernstein_form(h)?)
    }
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|k| {
                    let mut s = MLaurent::zero();
                    for (j, aij) in a[i].iter().enumerate() {
                        if !aij.is_zero() && !b[j][k].is_zero() {
                            s += &(aij * &b[j][k]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { MLaurent::one() } else { MLaurent::zero() }).collect()).collect()
}

/// Rank after substituting integers for every variable.
pub fn specialized_rank(m: &Matrix, vals: &[i64; NVARS]) -> usize {
    let vals: [BigRational; NVARS] = std::array::from_fn(|i| BigRational::from_integer(BigInt::from(vals[i])));
    let rows: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|x| x.eval_big(&vals)).collect()).collect();
    rational_rank(&rows)
}

/// `r · F` for `r` in the θ-subalgebra.
pub fn r_times_form(r: &RElem, f: &BernsteinForm) -> BernsteinForm {
    BernsteinForm { coeffs: f.coeffs.iter().map(|c| r.mul(c)).collect() }
}

/// Everything `central_scalar` computes, for reporting.
#[derive(Clone, Debug)]
pub struct ScalarAction {
    pub scalar: MLaurent,
    pub closed_form: MLaurent,
    /// `dim` of the `e_J`-image, read off the trace of the projector.
    pub image_dim: usize,
}

impl ScalarAction {
    pub fn matches(&self) -> bool {
        self.scalar == self.closed_form
    }
}

impl PrincipalSeriesModel {
    /// Matrix of `𝕀_J`.
    pub fn projector(&self, j: Parahoric) -> Result<Matrix> {
        self.act(&self.alg.indicator(j)?)
    }

    /// Scalar by which `z · 𝕀_J` acts on the `e_J`-image, computed from the
    /// action matrix, together with the closed-form orbit evaluation.
    pub fn scalar_action(&self, z: &CentralElement, j: Parahoric) -> Result<ScalarAction> {
        let d = self.alg.group().datum();
        if !z.is_weyl_invariant(d) {
            return Err(Error::NotInvariant("central scalar needs a W-invariant element".into()));
        }
        let ind = self.alg.indicator(j)?;
        let ind_form = self.alg.bernstein_form(&ind)?;
        let p = self.act_form(&ind_form)?;
        let a = self.act_form(&r_times_form(z, &ind_form))?;
        let m = mat_mul(&p, &a);
        let pj = MLaurent::from_laurent(&self.alg.poincare(j)?);
        let (i0, k0) = pivot(&p).ok_or_else(|| Error::Integrity("projector vanishes".into()))?;
        let lambda = m[i0][k0].div_exact(&p[i0][k0])?;
        for (mr, pr) in m.iter().zip(&p) {
            for (x, y) in mr.iter().zip(pr) {
                if *x != &lambda * y {
                    return Err(Error::Integrity(format!("action on the e_J-image is not scalar (J = {})", j.label())));
                }
            }
        }
        let scalar = lambda.div_exact(&pj)?;
        let mut tr = MLaurent::zero();
        for (i, r) in p.iter().enumerate() {
            tr += &r[i];
        }
        let image_dim = tr
            .div_exact(&pj)?
            .as_constant()
            .filter(|c| c.is_integer() && *c > Q::zero())
            .ok_or_else(|| Error::Integrity("projector trace is not a multiple of P_J".into()))?
            .to_integer() as usize;
        Ok(ScalarAction { scalar, closed_form: self.chi.eval_relem_inverse(z)?, image_dim })
    }

    /// Rank of the projector at a generic-looking integer specialisation.
    pub fn image_rank(&self, j: Parahoric) -> Result<usize> {
        Ok(specialized_rank(&self.projector(j)?, &[3, 2, 5, 7]))
    }
}

impl PrincipalSeriesModel {
    /// Scalar by which a Hecke element acts on the `e_J`-image, from its full
    /// Bernstein expansion. Fails when the action is not scalar.
    pub fn hecke_scalar(&self, h: &HeckeElement, j: Parahoric) -> Result<MLaurent> {
        let p = self.projector(j)?;
        let m = mat_mul(&p, &self.act(h)?);
        let (i0, k0) = pivot(&p).ok_or_else(|| Error::Integrity("projector vanishes".into()))?;
        let lambda = m[i0][k0].div_exact(&p[i0][k0])?;
        for (mr, pr) in m.iter().zip(&p) {
            for (x, y) in mr.iter().zip(pr) {
                if *x != &lambda * y {
                    return Err(Error::Integrity(format!("action on the e_J-image is not scalar (J = {})", j.label())));
                }
            }
        }
        lambda.div_exact(&MLaurent::from_laurent(&self.alg.poincare(j)?))
    }

    /// `B^{-1}(h)`: reads the group-ring element off the scalar as a function
    /// of the generic character. Requires the model's character to be generic.
    pub fn bernstein_inverse(&self, h: &HeckeElement, j: Parahoric) -> Result<CentralElement> {
        let dim = self.alg.group().datum().dim();
        if self.chi != UnramifiedCharacter::generic(dim) {
            return Err(Error::Invalid("inverse Bernstein map needs the generic character".into()));
        }
        let s = self.hecke_scalar(h, j)?;
        let mut z = CentralElement::zero();
        for (e, c) in s.by_s_monomial() {
            let lam = LatVec::from_slice(&e[..dim].iter().map(|&x| -(x as i64)).collect::<Vec<_>>());
            z.add_term(lam, &c);
        }
        Ok(z)
    }
}

fn pivot(p: &Matrix) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, r) in p.iter().enumerate() {
        for (k, x) in r.iter().enumerate() {
            if !x.is_zero() && best.is_none_or(|b| x.len() < b.2) {
                best = Some((i, k, x.len()));
            }
        }
    }
    best.map(|b| (b.0, b.1))
}

/// `ch_χ(z)` on `i(χ)^J`.
pub fn central_scalar(alg: &Arc<HeckeAlgebra>, z: &CentralElement, chi: &UnramifiedCharacter, j: Parahoric) -> Result<MLaurent> {
    let model = PrincipalSeriesModel::new(alg.clone(), chi.clone())?;
    let s = model.scalar_action(z, j)?;
    if !s.matches() {
        return Err(Error::Integrity(format!("act-derived scalar {} differs from orbit evaluation {}", s.scalar, s.closed_form)));
    }
    Ok(s.scalar)
}

/// `|W_M\W/W̄_J|`.
pub fn jfixed_dimension(alg: &HeckeAlgebra, levi: &[usize], j: Parahoric) -> Result<usize> {
    Ok(alg.group().pgj_representatives(levi, j)?.len())
}

/// `ẑ(t) = ch_t(z) · dim i(t)^J`.
pub fn fourier_transform(alg: &Arc<HeckeAlgebra>, z: &CentralElement, t: &UnramifiedCharacter, j: Parahoric) -> Result<MLaurent> {
    let c = central_scalar(alg, z, t, j)?;
    let n = jfixed_dimension(alg, &[], j)?;
    Ok(c.scale(Q::from_integer(n as i64)))
}

/// Closed-form Fourier transform without the model.
pub fn fourier_closed_form(alg: &HeckeAlgebra, z: &CentralElement, t: &UnramifiedCharacter, j: Parahoric) -> Result<MLaurent> {
    let n = jfixed_dimension(alg, &[], j)?;
    Ok(t.eval_relem_inverse(z)?.scale(Q::from_integer(n as i64)))
}

/// `R^{W_G} ↪ R^{W_M}`: the same function, checked `W_M`-invariant and
/// regrouped into `W_M`-orbit sums keyed by `M`-dominant representatives.
pub fn constant_term_spectral(datum: &RootDatum, z: &CentralElement, levi: &[usize]) -> Result<(CentralElement, BTreeMap<LatVec, LaurentScalar>)> {
    let wg = datum.weyl();
    let wm = wg.parabolic(levi);
    let mut seen = BTreeSet::new();
    let mut orbits = BTreeMap::new();
    for (l, c) in z.terms() {
        if seen.contains(l) {
            continue;
        }
        let orbit: BTreeSet<LatVec> = wm.iter().map(|&w| wg.apply(w, l)).collect();
        for x in &orbit {
            if z.coeff(x) != *c {
                return Err(Error::NotInvariant("constant term input is not W_M-invariant".into()));
            }
        }
        let rep = *orbit.iter().find(|x| levi.iter().all(|&i| datum.simple_root(i).dot(x) >= 0)).unwrap();
        orbits.insert(rep, c.clone());
        seen.extend(orbit);
    }
    Ok((z.clone(), orbits))
}

/// `Σ_O c_O Σ_{λ∈O} χ°(λ)` over `W_M`-orbits: the scalar of the constant term on the `M`-side.
pub fn levi_scalar(datum: &RootDatum, orbits: &BTreeMap<LatVec, LaurentScalar>, levi: &[usize], chi: &UnramifiedCharacter) -> Result<MLaurent> {
    let wg = datum.weyl();
    let wm = wg.parabolic(levi);
    let mut out = MLaurent::zero();
    for (rep, c) in orbits {
        let orbit: BTreeSet<LatVec> = wm.iter().map(|&w| wg.apply(w, rep)).collect();
        for l in orbit {
            out += &(&MLaurent::from_laurent(c) * &chi.eval_inverse(&l)?);
        }
    }
    Ok(out)
}

/// Evaluation matrix `[ẑ_μ(t_k)]` over integer specialisations of a generic `t`;
/// full column rank certifies that the transforms separate the `z_μ`.
pub fn fourier_separation_rank(datum: &RootDatum, mus: &[LatVec], samples: &[[i64; NVARS]]) -> usize {
    let chi = UnramifiedCharacter::generic(datum.dim());
    let vals: Vec<MLaurent> =
        mus.iter().map(|mu| chi.eval_relem_inverse(&CentralElement::orbit_sum(datum, mu)).unwrap()).collect();
    let rows: Vec<Vec<BigRational>> = samples
        .iter()
        .map(|s| {
            let sv: [BigRational; NVARS] = std::array::from_fn(|i| BigRational::from_integer(BigInt::from(s[i])));
            vals.iter().map(|f| f.eval_big(&sv)).collect()
        })
        .collect();
    rational_rank(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine_weyl::AffineWeyl;
    use crate::rootdata::build_root_datum;

    fn alg(tag: &str) -> Arc<HeckeAlgebra> {
        Arc::new(HeckeAlgebra::new(Arc::new(AffineWeyl::new(Arc::new(build_root_datum(tag).unwrap())))))
    }

    #[test]
    fn identity_acts_as_identity() {
        let a = alg("A2");
        let m = PrincipalSeriesModel::new(a.clone(), UnramifiedCharacter::generic(2)).unwrap();
        assert_eq!(m.act(&a.one()).unwrap(), mat_identity(6));
    }

    #[test]
    fn act_is_a_right_action() {
        let a = alg("C2");
        let m = PrincipalSeriesModel::new(a.clone(), UnramifiedCharacter::generic(2)).unwrap();
        let g = a.group();
        let x = a.basis(&g.mul(&g.simple(0), &g.simple(2)));
        let y = (*a.theta(&LatVec::from_slice(&[1, -1]))).clone();
        let xy = a.multiply(&x, &y).unwrap();
        assert_eq!(m.act(&xy).unwrap(), mat_mul(&m.act(&x).unwrap(), &m.act(&y).unwrap()));
    }

    #[test]
    fn parse_character() {
        let c = UnramifiedCharacter::parse("s1=2*s1^-1*v^3, s2=1/3", 2).unwrap();
        assert_eq!(c.eval(&LatVec::from_slice(&[1, 1])).unwrap(), MLaurent::monomial(Q::new(2, 3), [3, -1, 0, 0]));
        let n = UnramifiedCharacter::parse("s1=0.6+0.8i, v=1.5", 1).unwrap();
        assert!((n.eval_numeric(&LatVec::from_slice(&[2])).unwrap().norm() - 1.0).abs() < 1e-12);
    }
}

