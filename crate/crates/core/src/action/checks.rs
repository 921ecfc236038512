use itertools::Itertools;

use super::{ActionSpec, AnalysisError};
use crate::chart::{DiffForm, MultiVectorField, VectorField};
use crate::scalar::{Rational, ScalarExpr};

/// χ = factor · X_{i_1} ∧ … ∧ X_{i_q} for the chosen generator frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerticalFrame {
    pub frame: Vec<usize>,
    pub wedge: MultiVectorField,
    pub factor: ScalarExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoResult {
    pub value: DiffForm,
    pub sign: i32,
    pub semibasic_residual: Option<(usize, DiffForm)>,
    pub invariance_residual: Option<(usize, DiffForm)>,
}

impl RhoResult {
    pub fn is_basic(&self) -> bool {
        self.semibasic_residual.is_none() && self.invariance_residual.is_none()
    }
}

/// Both sides of ι_χ dω = (-1)^q d ι_χ ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingCheck {
    pub lhs: DiffForm,
    pub rhs: DiffForm,
    pub residual: DiffForm,
}

impl CouplingCheck {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaFactor {
    pub lambda: ScalarExpr,
    /// First generator derivative of λ that fails to vanish.
    pub invariance_residual: Option<(usize, ScalarExpr)>,
}

/// Z_s(λ_t) - Z_t(λ_s) - λ_{[Z_s,Z_t]} for one pair s < t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrabilityResidual {
    pub s: usize,
    pub t: usize,
    pub bracket_invariant: bool,
    pub residual: ScalarExpr,
}

/// Z_t(K) + K λ_{Z_t} for one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RescaleResidual {
    pub index: usize,
    pub residual: ScalarExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityCertificate {
    pub pairing: ScalarExpr,
    pub invariance_residual: Option<(usize, DiffForm)>,
}

impl SurjectivityCertificate {
    pub fn holds(&self) -> bool {
        self.pairing.is_one() && self.invariance_residual.is_none()
    }
}

fn sign_pow(e: usize) -> i32 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl ActionSpec {
    /// Frame selection and proportionality. With no samples a frame is
    /// accepted when its wedge is symbolically nonzero.
    pub fn check_vertical(
        &self,
        chi: &MultiVectorField,
        samples: &[Vec<Rational>],
    ) -> Result<VerticalFrame, AnalysisError> {
        let q = self.orbit_dim;
        if chi.degree() != q {
            return Err(AnalysisError::InvalidInput(format!(
                "chain has degree {} but orbits have dimension {q}",
                chi.degree()
            )));
        }
        crate::chart::Chart::same(self.chart(), chi.chart())?;
        for frame in (0..self.algebra().dim()).combinations(q) {
            let fields: Vec<&VectorField> = frame.iter().map(|&i| &self.generators()[i]).collect();
            let wedge = MultiVectorField::wedge_all(self.chart().clone(), &fields)?;
            let usable = if samples.is_empty() {
                !wedge.is_zero()
            } else {
                let mut any = false;
                for pt in samples {
                    self.check_point(pt)?;
                    if !wedge.evaluate_at(pt)?.is_empty() {
                        any = true;
                        break;
                    }
                }
                any
            };
            if !usable {
                continue;
            }
            return match chi.proportional_to(&wedge) {
                Some(factor) => Ok(VerticalFrame {
                    frame,
                    wedge,
                    factor,
                }),
                None => Err(AnalysisError::NotProportional(chi.to_string())),
            };
        }
        Err(AnalysisError::NoFrameFound(q))
    }

    fn require_invariant_chain(&self, chi: &MultiVectorField) -> Result<(), AnalysisError> {
        if let Some((i, r)) = self.chain_invariance_residual(chi)? {
            return Err(AnalysisError::InvalidInput(format!(
                "chain is not invariant: its Lie derivative along generator {} is {r}",
                i + 1
            )));
        }
        Ok(())
    }

    fn require_invariant_form(&self, w: &DiffForm) -> Result<(), AnalysisError> {
        if let Some((i, r)) = self.form_invariance_residual(w)? {
            return Err(AnalysisError::InvalidInput(format!(
                "form is not invariant: its Lie derivative along generator {} is {r}",
                i + 1
            )));
        }
        Ok(())
    }

    fn require_invariant_field(&self, x: &VectorField) -> Result<(), AnalysisError> {
        if self.field_invariance_residual(x)?.is_some() {
            return Err(AnalysisError::NonInvariantR(x.to_string()));
        }
        Ok(())
    }

    fn require_cochain_inputs(
        &self,
        chi: &MultiVectorField,
        samples: &[Vec<Rational>],
    ) -> Result<VerticalFrame, AnalysisError> {
        self.require_invariant_chain(chi)?;
        match self.check_vertical(chi, samples) {
            Ok(f) => Ok(f),
            Err(e @ (AnalysisError::Chart(_) | AnalysisError::PointDimension { .. })) => Err(e),
            Err(e) => Err(AnalysisError::InvalidInput(format!(
                "chain is not vertical: {e}"
            ))),
        }
    }

    /// (-1)^{(n-k)q} ι_χ ω together with its basicness residuals.
    pub fn rho(
        &self,
        chi: &MultiVectorField,
        omega: &DiffForm,
        samples: &[Vec<Rational>],
    ) -> Result<RhoResult, AnalysisError> {
        self.require_cochain_inputs(chi, samples)?;
        self.require_invariant_form(omega)?;
        let (n, k, q) = (self.chart().dim(), omega.degree(), chi.degree());
        if k < q {
            return Err(AnalysisError::InvalidInput(format!(
                "form degree {k} is below the chain degree {q}"
            )));
        }
        let sign = sign_pow((n - k) * q);
        let mut value = omega.contract(chi)?;
        if sign < 0 {
            value = value.neg();
        }
        Ok(RhoResult {
            semibasic_residual: self.semibasic_residual(&value)?,
            invariance_residual: self.form_invariance_residual(&value)?,
            value,
            sign,
        })
    }

    /// ι_χ dω against (-1)^q d ι_χ ω; d of a top-degree form is zero.
    pub fn coupling_check(
        &self,
        chi: &MultiVectorField,
        omega: &DiffForm,
        samples: &[Vec<Rational>],
    ) -> Result<CouplingCheck, AnalysisError> {
        self.require_cochain_inputs(chi, samples)?;
        self.require_invariant_form(omega)?;
        let chart = self.chart().clone();
        let (k, q) = (omega.degree(), chi.degree());
        if k + 1 < q {
            let zero = DiffForm::zero(chart, 0)?;
            return Ok(CouplingCheck {
                lhs: zero.clone(),
                rhs: zero.clone(),
                residual: zero,
            });
        }
        let out_degree = k + 1 - q;
        let lhs = match omega.exterior_derivative_or_top()? {
            Some(dw) => dw.contract(chi)?,
            None => DiffForm::zero(chart.clone(), out_degree)?,
        };
        let rhs = if k < q {
            DiffForm::zero(chart, out_degree)?
        } else {
            let d = omega.contract(chi)?.exterior_derivative()?;
            if q % 2 == 1 {
                d.neg()
            } else {
                d
            }
        };
        let residual = lhs.sub(&rhs)?;
        Ok(CouplingCheck { lhs, rhs, residual })
    }

    /// L_R χ for an invariant field R; zero when the identity holds.
    pub fn chain_lie_residual(
        &self,
        chi: &MultiVectorField,
        r: &VectorField,
    ) -> Result<MultiVectorField, AnalysisError> {
        self.require_invariant_field(r)?;
        Ok(chi.lie_derivative(r)?)
    }

    /// λ_R with L_R χ = λ_R χ.
    pub fn lambda_factor(
        &self,
        chi: &MultiVectorField,
        r: &VectorField,
    ) -> Result<LambdaFactor, AnalysisError> {
        self.require_invariant_field(r)?;
        self.require_invariant_chain(chi)?;
        if chi.is_zero() {
            return Err(AnalysisError::InvalidInput(
                "chain vanishes identically".into(),
            ));
        }
        let l = chi.lie_derivative(r)?;
        let lambda = l
            .proportional_to(chi)
            .ok_or_else(|| AnalysisError::NotProportional(l.to_string()))?;
        Ok(LambdaFactor {
            invariance_residual: self.function_invariance_residual(&lambda),
            lambda,
        })
    }

    /// Compatibility residuals for every pair of the family.
    pub fn integrability_check(
        &self,
        chi: &MultiVectorField,
        zs: &[VectorField],
    ) -> Result<Vec<IntegrabilityResidual>, AnalysisError> {
        let lambdas = zs
            .iter()
            .map(|z| self.lambda_factor(chi, z).map(|l| l.lambda))
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = Vec::new();
        for s in 0..zs.len() {
            for t in s + 1..zs.len() {
                let b = zs[s].bracket(&zs[t])?;
                let bracket_invariant = self.field_invariance_residual(&b)?.is_none();
                let lb = self.lambda_factor(chi, &b)?.lambda;
                let residual = zs[s]
                    .apply(&lambdas[t])
                    .sub(&zs[t].apply(&lambdas[s]))
                    .sub(&lb);
                out.push(IntegrabilityResidual {
                    s,
                    t,
                    bracket_invariant,
                    residual,
                });
            }
        }
        Ok(out)
    }

    /// Z_t(K) + K λ_{Z_t} for each field, which vanishes exactly when
    /// L_{Z_t}(K χ₀) = 0.
    pub fn rescale_verify(
        &self,
        chi0: &MultiVectorField,
        k: &ScalarExpr,
        zs: &[VectorField],
    ) -> Result<Vec<RescaleResidual>, AnalysisError> {
        if k.is_zero() {
            return Err(AnalysisError::InvalidInput(
                "rescaling factor is zero".into(),
            ));
        }
        if let Some((i, r)) = self.function_invariance_residual(k) {
            return Err(AnalysisError::InvalidInput(format!(
                "rescaling factor is not invariant: generator {} gives {r}",
                i + 1
            )));
        }
        zs.iter()
            .enumerate()
            .map(|(index, z)| {
                let lambda = self.lambda_factor(chi0, z)?.lambda;
                let residual = z.apply(k).add(&k.mul(&lambda));
                Ok(RescaleResidual { index, residual })
            })
            .collect()
    }

    /// α(χ) and the invariance of α.
    pub fn surjectivity_certificate(
        &self,
        chi: &MultiVectorField,
        alpha: &DiffForm,
    ) -> Result<SurjectivityCertificate, AnalysisError> {
        if alpha.degree() != chi.degree() {
            return Err(AnalysisError::InvalidInput(format!(
                "form degree {} differs from chain degree {}",
                alpha.degree(),
                chi.degree()
            )));
        }
        let pairing = alpha
            .contract(chi)?
            .as_function()
            .expect("full contraction is a function");
        Ok(SurjectivityCertificate {
            pairing,
            invariance_residual: self.form_invariance_residual(alpha)?,
        })
    }
}
