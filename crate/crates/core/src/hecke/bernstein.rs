use super::{CentralElement, HeckeAlgebra, HeckeElement};
use crate::affine_weyl::AffElem;
use crate::error::{Error, Result};
use crate::lattice::LatVec;
use crate::laurent::LaurentScalar;

/// Element of the commutative subalgebra spanned by the θ_λ.
pub type RElem = CentralElement;

/// `Σ_w r_w T_w` with `r_w` in the θ-subalgebra and `w` in the finite Weyl group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernsteinForm {
    pub coeffs: Vec<RElem>,
}

impl BernsteinForm {
    pub fn zero(order: usize) -> Self {
        BernsteinForm { coeffs: vec![RElem::zero(); order] }
    }

    pub fn add_assign(&mut self, o: &BernsteinForm) {
        for (a, b) in self.coeffs.iter_mut().zip(&o.coeffs) {
            *a = a.add(b);
        }
    }

    pub fn scale(&self, k: &LaurentScalar) -> BernsteinForm {
        BernsteinForm { coeffs: self.coeffs.iter().map(|r| r.scale(k)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|r| r.is_empty())
    }
}

impl HeckeAlgebra {
    fn bernstein_q(&self) -> Result<LaurentScalar> {
        match self.uniform_k() {
            Some(k) => Ok(LaurentScalar::q_pow(k)),
            None => Err(Error::ParameterMismatch("Bernstein presentation needs uniform parameters".into())),
        }
    }

    /// `(θ_μ − θ_{sμ}) / (1 − θ_{−α^∨})` for the finite simple reflection `s_i`.
    pub fn bl_correction(&self, i: usize, r: &RElem) -> RElem {
        let d = self.group.datum();
        let a = d.simple_coroot(i);
        let alpha = d.simple_root(i);
        let mut out = RElem::zero();
        for (mu, c) in r.terms() {
            let n = alpha.dot(mu);
            if n > 0 {
                for k in 0..n {
                    out.add_term(*mu - a.scale(k), c);
                }
            } else if n < 0 {
                let neg = -c.clone();
                for k in 1..=-n {
                    out.add_term(*mu + a.scale(k), &neg);
                }
            }
        }
        out
    }

    /// `T_{s_i} · F` for the finite simple reflection `s_i` (0-based).
    pub fn bernstein_left_simple(&self, i: usize, f: &BernsteinForm) -> Result<BernsteinForm> {
        let q = self.bernstein_q()?;
        let qm1 = &q - &LaurentScalar::one();
        let d = self.group.datum();
        let wg = d.weyl();
        let s = wg.gen(i);
        let mut out = BernsteinForm::zero(wg.order());
        for (w, r) in f.coeffs.iter().enumerate() {
            if r.is_empty() {
                continue;
            }
            let sr = r.map_lattice(|l| wg.apply(s, l));
            let sw = wg.mul(s, w);
            if wg.length(sw) > wg.length(w) {
                out.coeffs[sw] = out.coeffs[sw].add(&sr);
            } else {
                out.coeffs[w] = out.coeffs[w].add(&sr.scale(&qm1));
                out.coeffs[sw] = out.coeffs[sw].add(&sr.scale(&q));
            }
            out.coeffs[w] = out.coeffs[w].add(&self.bl_correction(i, r).scale(&qm1));
        }
        Ok(out)
    }

    /// Bernstein form of a single basis element `T_x`.
    pub fn bernstein_basis(&self, x: &AffElem) -> Result<BernsteinForm> {
        let g = &self.group;
        let d = g.datum();
        let wg = d.weyl();
        let mut peeled = Vec::new();
        let mut y = *x;
        loop {
            let l = g.length(&y);
            match (1..g.n_simple()).find(|&j| g.length(&g.mul(&g.simple(j), &y)) < l) {
                Some(j) => {
                    peeled.push(j - 1);
                    y = g.mul(&g.simple(j), &y);
                }
                None => break,
            }
        }
        let lambda = y.t;
        let u = y.w as usize;
        let tl = g.translation(&lambda);
        let u_inv = g.finite(wg.inv(u));
        if !d.is_dominant(&lambda) || g.length(&tl) != g.length(&y) + g.length(&u_inv) {
            return Err(Error::Integrity(format!("W-minimal decomposition failed for {}", g.label(x))));
        }
        let fin = self.right_mul_basis_inv(&self.one(), &u_inv);
        let scale = LaurentScalar::v_pow(self.half_weight(&tl));
        let mut f = BernsteinForm::zero(wg.order());
        for (z, c) in fin.terms() {
            debug_assert!(z.t.is_zero());
            f.coeffs[z.w as usize].add_term(lambda, &(c * &scale));
        }
        for &i in peeled.iter().rev() {
            f = self.bernstein_left_simple(i, &f)?;
        }
        Ok(f)
    }

    /// Bernstein form `Σ_w r_w T_w` of an arbitrary element.
    pub fn bernstein_form(&self, h: &HeckeElement) -> Result<BernsteinForm> {
        let mut f = BernsteinForm::zero(self.group.datum().weyl().order());
        for (x, c) in h.terms() {
            f.add_assign(&self.bernstein_basis(x)?.scale(c));
        }
        Ok(f)
    }

    /// Back to the T-basis.
    pub fn from_bernstein(&self, f: &BernsteinForm) -> HeckeElement {
        let mut out = self.zero();
        for (w, r) in f.coeffs.iter().enumerate() {
            if !r.is_empty() {
                out.add_assign(&self.right_mul_basis(&self.realize(r), &self.group.finite(w)));
            }
        }
        out
    }

    /// θ_λ as a Bernstein form.
    pub fn bernstein_theta(&self, lambda: &LatVec) -> BernsteinForm {
        let mut f = BernsteinForm::zero(self.group.datum().weyl().order());
        f.coeffs[0].add_term(*lambda, &LaurentScalar::one());
        f
    }
}
