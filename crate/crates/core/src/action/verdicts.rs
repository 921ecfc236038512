use itertools::Itertools;

use super::{format_point, ActionSpec, AnalysisError, SamplePoint};
use crate::chart::{DiffForm, MultiVectorField, VectorField};
use crate::lie::{format_lie_vector, CohomologyResult};
use crate::report::{Dims, Outcome, Verdict};
use crate::scalar::{Rational, ScalarExpr};

/// Ordered verdicts of one analysis run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CochainReport {
    pub verdicts: Vec<Verdict>,
}

impl CochainReport {
    pub fn new() -> Self {
        CochainReport::default()
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn extend(&mut self, vs: impl IntoIterator<Item = Verdict>) {
        self.verdicts.extend(vs);
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(Verdict::passed)
    }
}

/// Input-level problems become skipped verdicts; other errors propagate.
fn skip_on_input(
    check: &str,
    subject: &str,
    r: Result<Verdict, AnalysisError>,
) -> Result<Verdict, AnalysisError> {
    match r {
        Err(
            e @ (AnalysisError::InvalidInput(_)
            | AnalysisError::NonInvariantR(_)
            | AnalysisError::NotProportional(_)
            | AnalysisError::NoFrameFound(_)),
        ) => Ok(Verdict::skipped(check, subject, e.to_string())),
        other => other,
    }
}

fn gen_reason(action: &ActionSpec, i: usize) -> String {
    format!(
        "along generator {} ({})",
        i + 1,
        action.generators()[i].pretty()
    )
}

/// Samples' coordinates only.
fn points(samples: &[SamplePoint]) -> Vec<Vec<Rational>> {
    samples.iter().map(|s| s.point.clone()).collect()
}

impl ActionSpec {
    /// Homomorphism, rank and effectiveness as verdicts.
    pub fn validation_verdicts(
        &self,
        samples: &[SamplePoint],
    ) -> Result<Vec<Verdict>, AnalysisError> {
        let mut out = Vec::new();
        let residuals = self.homomorphism_residuals();
        let mut v = Verdict::new(
            "homomorphism",
            self.name(),
            Outcome::from_bool(residuals.is_empty()),
        );
        if let Some((i, j, r)) = residuals.first() {
            v = v
                .with_witness(r.to_string())
                .with_reason(format!("bracket of generators {} and {}", i + 1, j + 1))
                .with_pretty(r.pretty());
        }
        out.push(v);
        for s in samples {
            let rank = self.generator_matrix_at(&s.point)?.rank();
            let mut v = Verdict::new(
                "rank",
                format!("{} at {}", self.name(), s.label),
                Outcome::from_bool(rank == self.orbit_dim()),
            )
            .with_value(rank.to_string())
            .with_point(format_point(&s.point));
            if rank != self.orbit_dim() {
                v = v.with_reason(format!("expected orbit dimension {}", self.orbit_dim()));
            }
            out.push(v);
        }
        let comps: Vec<Vec<ScalarExpr>> = self
            .generators()
            .iter()
            .map(|g| g.components().to_vec())
            .collect();
        let kernel = crate::scalar::constant_relations(&comps);
        let mut v = Verdict::new(
            "effective",
            self.name(),
            Outcome::from_bool(kernel.is_empty()),
        );
        if let Some(k) = kernel.first() {
            v = v.with_witness(format_lie_vector(k, self.algebra().labels()));
        }
        out.push(v);
        Ok(out)
    }

    pub fn isotropy_verdict(&self, sample: &SamplePoint) -> Result<Verdict, AnalysisError> {
        let iso = self.isotropy_algebra_at(&sample.point)?;
        let full = self.kappa_space_at(&iso, &sample.components)?;
        let labels = self.algebra().labels();
        let basis = if full.isotropy_basis.is_empty() {
            "0".to_string()
        } else {
            format!(
                "span{{{}}}",
                full.isotropy_basis
                    .iter()
                    .map(|v| format_lie_vector(v, labels))
                    .join(", ")
            )
        };
        let tangent = self
            .chart()
            .coords()
            .iter()
            .map(|c| format!("\u{2202}{c}"))
            .collect::<Vec<_>>();
        let fmt_vecs = |vs: &[Vec<Rational>]| {
            if vs.is_empty() {
                "0".to_string()
            } else {
                format!(
                    "span{{{}}}",
                    vs.iter().map(|v| format_lie_vector(v, &tangent)).join(", ")
                )
            }
        };
        Ok(Verdict::new(
            "isotropy",
            format!("{} at {}", self.name(), sample.label),
            Outcome::Pass,
        )
        .with_value(basis)
        .with_point(format_point(&sample.point))
        .with_dims(Dims {
            a_rel: 0,
            h: 0,
            h_abs: None,
            isotropy: Some(full.isotropy_basis.len()),
            kappa_tangent: Some(full.kappa_tangent.len()),
            kappa_vertical: Some(full.kappa_vertical.len()),
        })
        .with_pretty(format!(
            "κ(T) = {}, κ(Vert) = {}",
            fmt_vecs(&full.kappa_tangent),
            fmt_vecs(&full.kappa_vertical)
        )))
    }

    pub fn form_invariance_verdict(
        &self,
        name: &str,
        w: &DiffForm,
    ) -> Result<Verdict, AnalysisError> {
        Ok(match self.form_invariance_residual(w)? {
            None => Verdict::new("invariant", name, Outcome::Pass),
            Some((i, r)) => Verdict::new("invariant", name, Outcome::Fail)
                .with_witness(r.to_string())
                .with_reason(gen_reason(self, i))
                .with_pretty(r.pretty()),
        })
    }

    pub fn field_invariance_verdict(
        &self,
        name: &str,
        x: &VectorField,
    ) -> Result<Verdict, AnalysisError> {
        Ok(match self.field_invariance_residual(x)? {
            None => Verdict::new("invariant", name, Outcome::Pass),
            Some((i, r)) => Verdict::new("invariant", name, Outcome::Fail)
                .with_witness(r.to_string())
                .with_reason(gen_reason(self, i))
                .with_pretty(r.pretty()),
        })
    }

    pub fn chain_invariance_verdict(
        &self,
        name: &str,
        chi: &MultiVectorField,
    ) -> Result<Verdict, AnalysisError> {
        Ok(match self.chain_invariance_residual(chi)? {
            None => Verdict::new("invariant", name, Outcome::Pass),
            Some((i, r)) => Verdict::new("invariant", name, Outcome::Fail)
                .with_witness(r.to_string())
                .with_reason(gen_reason(self, i))
                .with_pretty(r.pretty()),
        })
    }

    pub fn scalar_invariance_verdict(&self, name: &str, f: &ScalarExpr) -> Verdict {
        match self.function_invariance_residual(f) {
            None => Verdict::new("invariant", name, Outcome::Pass),
            Some((i, r)) => Verdict::new("invariant", name, Outcome::Fail)
                .with_witness(r.to_string())
                .with_reason(gen_reason(self, i))
                .with_pretty(r.pretty()),
        }
    }

    pub fn vertical_verdict(
        &self,
        name: &str,
        chi: &MultiVectorField,
        samples: &[SamplePoint],
    ) -> Result<Verdict, AnalysisError> {
        match self.check_vertical(chi, &points(samples)) {
            Ok(f) => {
                let frame = f
                    .frame
                    .iter()
                    .map(|i| format!("X{}", i + 1))
                    .join("\u{2227}");
                let nonvanishing = !f.factor.is_zero();
                let mut v = Verdict::new("vertical", name, Outcome::from_bool(nonvanishing))
                    .with_value(f.factor.to_string())
                    .with_reason(format!("frame {frame}"))
                    .with_pretty(format!("J = {}", f.factor.pretty()));
                if !nonvanishing {
                    v = v.with_witness("0");
                }
                Ok(v)
            }
            Err(AnalysisError::NotProportional(_)) => {
                Ok(Verdict::new("vertical", name, Outcome::Fail)
                    .with_witness(chi.to_string())
                    .with_reason("not proportional to the generator frame")
                    .with_pretty(chi.pretty()))
            }
            Err(AnalysisError::NoFrameFound(q)) => {
                Ok(
                    Verdict::new("vertical", name, Outcome::Fail).with_reason(format!(
                        "every generator {q}-frame degenerates at the samples"
                    )),
                )
            }
            Err(e) => skip_on_input("vertical", name, Err(e)),
        }
    }

    pub fn semibasic_verdict(&self, name: &str, eta: &DiffForm) -> Result<Verdict, AnalysisError> {
        Ok(match self.semibasic_residual(eta)? {
            None => Verdict::new("semibasic", name, Outcome::Pass),
            Some((i, r)) => Verdict::new("semibasic", name, Outcome::Fail)
                .with_witness(r.to_string())
                .with_reason(format!("interior product {}", gen_reason(self, i)))
                .with_pretty(r.pretty()),
        })
    }

    pub fn rho_verdict(
        &self,
        chain: &str,
        chi: &MultiVectorField,
        form: &str,
        omega: &DiffForm,
        samples: &[SamplePoint],
    ) -> Result<Verdict, AnalysisError> {
        let subject = format!("{chain}, {form}");
        let r = self.rho(chi, omega, &points(samples)).map(|r| {
            let mut v = Verdict::new("rho", subject.as_str(), Outcome::from_bool(r.is_basic()))
                .with_value(r.value.to_string())
                .with_pretty(r.value.pretty());
            if let Some((i, w)) = &r.semibasic_residual {
                v = v
                    .with_witness(w.to_string())
                    .with_reason(format!("not semi-basic {}", gen_reason(self, *i)));
            } else if let Some((i, w)) = &r.invariance_residual {
                v = v
                    .with_witness(w.to_string())
                    .with_reason(format!("not invariant {}", gen_reason(self, *i)));
            }
            v
        });
        skip_on_input("rho", &subject, r)
    }

    pub fn coupling_verdict(
        &self,
        chain: &str,
        chi: &MultiVectorField,
        form: &str,
        omega: &DiffForm,
        samples: &[SamplePoint],
    ) -> Result<Verdict, AnalysisError> {
        let subject = format!("{chain}, {form}");
        let r = self.coupling_check(chi, omega, &points(samples)).map(|c| {
            let mut v = Verdict::new("coupling", subject.as_str(), Outcome::from_bool(c.holds()))
                .with_value(c.lhs.to_string());
            if c.holds() {
                v = v.with_pretty(c.lhs.pretty());
            } else {
                v = v
                    .with_witness(c.residual.to_string())
                    .with_pretty(c.residual.pretty());
            }
            v
        });
        skip_on_input("coupling", &subject, r)
    }

    pub fn chain_lie_verdict(
        &self,
        chain: &str,
        chi: &MultiVectorField,
        field: &str,
        r: &VectorField,
    ) -> Result<Verdict, AnalysisError> {
        let subject = format!("{chain}, {field}");
        let res = self.chain_lie_residual(chi, r).map(|l| {
            if l.is_zero() {
                Verdict::new("chain_lie", subject.as_str(), Outcome::Pass)
            } else {
                Verdict::new("chain_lie", subject.as_str(), Outcome::Fail)
                    .with_witness(l.to_string())
                    .with_pretty(l.pretty())
            }
        });
        skip_on_input("chain_lie", &subject, res)
    }

    pub fn lambda_verdict(
        &self,
        chain: &str,
        chi: &MultiVectorField,
        field: &str,
        r: &VectorField,
    ) -> Result<Verdict, AnalysisError> {
        let subject = format!("{chain}, {field}");
        let res = self.lambda_factor(chi, r).map(|l| {
            let mut v = Verdict::new(
                "lambda",
                subject.as_str(),
                Outcome::from_bool(l.invariance_residual.is_none()),
            )
            .with_value(l.lambda.to_string())
            .with_pretty(format!("λ = {}", l.lambda.pretty()));
            if let Some((i, w)) = &l.invariance_residual {
                v = v
                    .with_witness(w.to_string())
                    .with_reason(format!("λ is not invariant {}", gen_reason(self, *i)));
            }
            v
        });
        skip_on_input("lambda", &subject, res)
    }

    pub fn integrability_verdicts(
        &self,
        chain: &str,
        chi: &MultiVectorField,
        fields: &[(String, VectorField)],
    ) -> Result<Vec<Verdict>, AnalysisError> {
        let zs: Vec<VectorField> = fields.iter().map(|(_, z)| z.clone()).collect();
        match self.integrability_check(chi, &zs) {
            Ok(rs) => Ok(rs
                .into_iter()
                .map(|r| {
                    let subject = format!("{chain}, {}, {}", fields[r.s].0, fields[r.t].0);
                    let ok = r.residual.is_zero() && r.bracket_invariant;
                    let mut v = Verdict::new("integrability", subject, Outcome::from_bool(ok));
                    if !r.residual.is_zero() {
                        v = v
                            .with_witness(r.residual.to_string())
                            .with_pretty(r.residual.pretty());
                    } else if !r.bracket_invariant {
                        v = v.with_reason("bracket of the pair is not invariant");
                    }
                    v
                })
                .collect()),
            Err(e) => {
                let subject = format!(
                    "{chain}, {}",
                    fields.iter().map(|(n, _)| n.as_str()).join(", ")
                );
                skip_on_input("integrability", &subject, Err(e)).map(|v| vec![v])
            }
        }
    }

    pub fn rescale_verdicts(
        &self,
        chain: &str,
        chi0: &MultiVectorField,
        factor: &ScalarExpr,
        fields: &[(String, VectorField)],
    ) -> Result<Vec<Verdict>, AnalysisError> {
        let zs: Vec<VectorField> = fields.iter().map(|(_, z)| z.clone()).collect();
        match self.rescale_verify(chi0, factor, &zs) {
            Ok(rs) => Ok(rs
                .into_iter()
                .map(|r| {
                    let subject = format!("{chain}, {}", fields[r.index].0);
                    let mut v =
                        Verdict::new("rescale", subject, Outcome::from_bool(r.residual.is_zero()))
                            .with_value(factor.to_string());
                    if !r.residual.is_zero() {
                        v = v
                            .with_witness(r.residual.to_string())
                            .with_pretty(r.residual.pretty());
                    }
                    v
                })
                .collect()),
            Err(e) => skip_on_input("rescale", chain, Err(e)).map(|v| vec![v]),
        }
    }

    pub fn surjectivity_verdict(
        &self,
        chain: &str,
        chi: &MultiVectorField,
        form: &str,
        alpha: &DiffForm,
    ) -> Result<Verdict, AnalysisError> {
        let subject = format!("{chain}, {form}");
        let res = self.surjectivity_certificate(chi, alpha).map(|c| {
            let mut v = Verdict::new(
                "surjective",
                subject.as_str(),
                Outcome::from_bool(c.holds()),
            )
            .with_value(c.pairing.to_string())
            .with_pretty(format!("α(χ) = {}", c.pairing.pretty()));
            if let Some((i, w)) = &c.invariance_residual {
                v = v
                    .with_witness(w.to_string())
                    .with_reason(format!("form is not invariant {}", gen_reason(self, *i)));
            } else if !c.pairing.is_one() {
                v = v
                    .with_witness(c.pairing.to_string())
                    .with_reason("pairing is not 1");
            }
            v
        });
        skip_on_input("surjective", &subject, res)
    }

    /// Invariance and verticality of χ, the coupling identity for every
    /// form, the Lie derivative identity and λ for every field, and the
    /// integrability of the field family.
    pub fn cochain_report(
        &self,
        chain: &str,
        chi: &MultiVectorField,
        forms: &[(String, DiffForm)],
        fields: &[(String, VectorField)],
        samples: &[SamplePoint],
    ) -> Result<CochainReport, AnalysisError> {
        let mut rep = CochainReport::new();
        rep.push(self.chain_invariance_verdict(chain, chi)?);
        rep.push(self.vertical_verdict(chain, chi, samples)?);
        for (name, w) in forms {
            rep.push(self.coupling_verdict(chain, chi, name, w, samples)?);
        }
        for (name, r) in fields {
            rep.push(self.chain_lie_verdict(chain, chi, name, r)?);
            rep.push(self.lambda_verdict(chain, chi, name, r)?);
        }
        if fields.len() > 1 {
            rep.extend(self.integrability_verdicts(chain, chi, fields)?);
        }
        Ok(rep)
    }

    /// One verdict per sample plus the overall obstruction verdict.
    pub fn obstruction_verdicts(
        &self,
        samples: &[SamplePoint],
    ) -> Result<Vec<Verdict>, AnalysisError> {
        let report = self.obstruction_report(samples)?;
        let mut out = Vec::new();
        for p in &report.points {
            let a = p.relative_forms_dim();
            let h = p.relative.dimension;
            let ok = a > 0 && h > 0;
            let mut v = Verdict::new(
                "obstruction",
                format!("{} at {}", self.name(), p.label),
                Outcome::from_bool(ok),
            )
            .with_point(format_point(&p.point))
            .with_dims(Dims {
                a_rel: a,
                h,
                h_abs: Some(p.absolute_dim),
                isotropy: Some(p.subgroup.basis.len()),
                kappa_tangent: Some(p.kappa_tangent_dim),
                kappa_vertical: Some(p.kappa_vertical_dim),
            })
            .with_representatives(&p.relative);
            if a == 0 {
                v = v.with_reason(format!("A^{}(g, G_x) = 0", report.degree));
            } else if h == 0 {
                v = v.with_reason(format!("H^{}(g, G_x) = 0", report.degree));
            }
            out.push(v);
        }
        let ok = report.verdict == super::ObstructionVerdict::LocallyUnobstructed;
        out.push(
            Verdict::new("report", self.name(), Outcome::from_bool(ok))
                .with_value(report.verdict.as_str()),
        );
        Ok(out)
    }
}

impl Verdict {
    /// Cohomology representatives in surface syntax, paper notation in
    /// the pretty field.
    pub fn with_representatives(mut self, res: &CohomologyResult) -> Self {
        self.representatives = Some(res.representatives.iter().map(|r| r.to_string()).collect());
        let pretty = res.representatives.iter().map(|r| r.pretty()).join(", ");
        if !pretty.is_empty() && self.pretty.is_none() {
            self.pretty = Some(pretty);
        }
        self
    }
}

/// The cohomology verdict for a single algebra and subgroup.
pub fn cohomology_verdict(subject: &str, res: &CohomologyResult) -> Verdict {
    Verdict::new("cohomology", subject, Outcome::Pass)
        .with_value(res.dimension.to_string())
        .with_dims(Dims {
            a_rel: res.relative_dim(),
            h: res.dimension,
            h_abs: None,
            isotropy: None,
            kappa_tangent: None,
            kappa_vertical: None,
        })
        .with_representatives(res)
}
