use clap::ValueEnum;
use serde_json::{json, Map, Value};

use super::{report::csv_field, CommonArgs, Format, Session};
use crate::affine_weyl::Parahoric;
use crate::basechange::format_orbit_sums;
use crate::cones::{ConeContext, StdParabolic};
use crate::error::{Error, Result};
use crate::hecke::CentralElement;
use crate::spectral::{fourier_closed_form, fourier_transform, UnramifiedCharacter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ComputeTarget {
    /// T-basis expansion of z_μ · 𝕀_J.
    Zmu,
    /// Base change of z_μ as F-orbit sums.
    Bc,
    /// P\G/J representatives with θ markers.
    Cosets,
    /// Fourier transform of z_μ against its closed form.
    Fourier,
    /// Fixed-point expansion of the twisted character at ν.
    AtiyahBott,
}

struct Table {
    title: String,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = format!("{}\n", self.title);
                for row in &self.rows {
                    s += &row.join("\t");
                    s.push('\n');
                }
                s
            }
            Format::Csv => {
                let mut s = self.header.join(",") + "\n";
                for row in &self.rows {
                    s += &row.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",");
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| Value::Object(self.header.iter().zip(row).map(|(h, v)| (h.to_string(), json!(v))).collect::<Map<_, _>>()))
                    .collect();
                serde_json::to_string_pretty(&json!({ "title": self.title, "rows": rows })).expect("table serializes") + "\n"
            }
        }
    }
}

pub fn compute(what: ComputeTarget, args: &CommonArgs) -> Result<String> {
    let cfg = args.config();
    let session = Session::new(cfg.clone())?;
    let mu = || -> Result<_> {
        let text = args.mu.as_deref().ok_or_else(|| Error::Invalid("--mu is required".into()))?;
        session.parse_vector(text)
    };
    let one_j = || -> Result<Parahoric> {
        match &cfg.j {
            Some(s) => Parahoric::parse(s, session.datum().rank()),
            None => Ok(Parahoric::IWAHORI),
        }
    };
    let table = match what {
        ComputeTarget::Zmu => {
            let alg = session.algebra()?;
            let (mu, j) = (mu()?, one_j()?);
            let (_, h) = alg.bernstein_function(&mu, j)?;
            let g = alg.group();
            let mut rows: Vec<_> = h.terms().map(|(x, c)| (g.shortlex_key(x), g.label(x), c.to_string())).collect();
            rows.sort();
            Table {
                title: format!("z_{{{mu}}} · 𝕀_{}: {} terms", j.label(), rows.len()),
                header: vec!["element", "coefficient"],
                rows: rows.into_iter().map(|(_, x, c)| vec![x, c]).collect(),
            }
        }
        ComputeTarget::Bc => {
            let ctx = session.base_change()?;
            let (mu, j) = (mu()?, one_j()?);
            if !session.datum().is_dominant(&mu) {
                return Err(Error::Invalid(format!("{mu} is not dominant")));
            }
            if !j.is_theta_stable(session.theta()) {
                return Err(Error::Invalid(format!("J = {} is not θ-stable", j.label())));
            }
            let bc = ctx.base_change(&CentralElement::orbit_sum(session.datum(), &mu), j)?;
            let orbits = ctx.f_orbit_coefficients(&bc)?;
            let mut rows: Vec<Vec<String>> = orbits.iter().map(|(c, k)| vec![c.to_string(), k.to_string()]).collect();
            rows.sort();
            Table {
                title: format!("b(z_{{{mu}}}) at J = {}: {}", j.label(), format_orbit_sums(&orbits)),
                header: vec!["f_orbit", "coefficient"],
                rows,
            }
        }
        ComputeTarget::Cosets => {
            let g = session.group()?;
            let rank = session.datum().rank();
            let levi = StdParabolic::parse(args.p.as_deref().unwrap_or("B"), rank)?.levi().to_vec();
            let j = one_j()?;
            let wg = session.datum().weyl();
            let stable = levi.iter().all(|i| levi.contains(&session.theta().perm()[*i])) && j.is_theta_stable(session.theta());
            let rows = if stable {
                g.theta_fixed_reps(&levi, j, session.theta())?
                    .entries
                    .iter()
                    .map(|e| vec![wg.word_label(e.representative), e.size.to_string(), e.theta_stable.to_string(), e.theta_fixed.to_string()])
                    .collect()
            } else {
                let reps = g.pgj_representatives(&levi, j)?;
                reps.representatives.iter().map(|x| vec![wg.word_label(x.w as usize), String::new(), String::new(), String::new()]).collect()
            };
            Table {
                title: format!("W_M\\W/W̄_J for M = {levi:?}, J = {}", j.label()),
                header: vec!["representative", "size", "theta_stable", "theta_fixed"],
                rows,
            }
        }
        ComputeTarget::Fourier => {
            let alg = session.algebra()?;
            let (mu, j) = (mu()?, one_j()?);
            let z = CentralElement::orbit_sum(session.datum(), &mu);
            let t = UnramifiedCharacter::generic(session.datum().dim());
            let model = fourier_transform(&alg, &z, &t, j)?;
            let closed = fourier_closed_form(&alg, &z, &t, j)?;
            let status = if model == closed { "agree" } else { "DIFFER" };
            Table {
                title: format!("Fourier transform of z_{{{mu}}} at J = {}: {status}", j.label()),
                header: vec!["source", "value"],
                rows: vec![vec!["model".into(), model.to_string()], vec!["closed-form".into(), closed.to_string()]],
            }
        }
        ComputeTarget::AtiyahBott => {
            let ctx = ConeContext::new(session.datum().clone(), session.theta().clone())?;
            let nu = mu()?;
            let xi = UnramifiedCharacter::generic(session.datum().dim());
            let ab = ctx.atiyah_bott(&xi, &nu)?;
            let wg = session.datum().weyl();
            let mut rows: Vec<Vec<String>> = ab
                .terms
                .iter()
                .map(|t| vec![wg.word_label(t.w), t.point.to_string(), t.denominator_v.to_string(), t.value.to_string()])
                .collect();
            rows.push(vec!["total".into(), String::new(), String::new(), ab.value.to_string()]);
            Table { title: format!("twisted character at ν = {nu}"), header: vec!["w", "point", "denominator_v", "value"], rows }
        }
    };
    session.finish()?;
    Ok(table.render(cfg.format))
}
