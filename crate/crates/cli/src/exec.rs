use std::fmt;

use liecochain::action::{cohomology_verdict, ComponentRep, SamplePoint};
use liecochain::chart::ChartError;
use liecochain::dsl::{CheckArg, CheckDirective, DeclKind};
use liecochain::lie::{absolute_cohomology, relative_cohomology};
use liecochain::linalg::RowSpace;
use liecochain::report::Outcome;
use liecochain::{
    ActionSpec, AnalysisError, DiffForm, LieError, MultiVectorField, SubgroupSpec, VectorField,
    Verdict, Workspace,
};

use crate::args::{CertifyCommand, CheckCommand, Command};

/// A problem with the input rather than with the mathematics; exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn input<T>(msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError(msg.into()))
}

/// One requested check with its operands resolved to names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Task {
    /// `None` validates every algebra and action in the workspace.
    Validate {
        action: Option<String>,
        points: Vec<String>,
    },
    Cohomology {
        algebra: String,
        subgroup: Option<String>,
        degree: usize,
    },
    Isotropy {
        action: String,
        point: String,
    },
    Invariant {
        action: String,
        object: String,
    },
    Vertical {
        action: String,
        chain: String,
    },
    Semibasic {
        action: String,
        form: String,
    },
    Cochain {
        action: String,
        chain: String,
        forms: Vec<String>,
        fields: Vec<String>,
    },
    Rho {
        action: String,
        chain: String,
        form: String,
    },
    Lambda {
        action: String,
        chain: String,
        field: String,
    },
    Integrability {
        action: String,
        chain: String,
        fields: Vec<String>,
    },
    Rescale {
        action: String,
        chain: String,
        factor: String,
        fields: Vec<String>,
    },
    Surjective {
        action: String,
        chain: String,
        form: String,
    },
    Report {
        action: String,
        points: Vec<String>,
        components: Vec<(String, String)>,
    },
}

/// Tasks for a command line invocation; `run` expands to the directives.
pub fn tasks_for(cmd: &Command, ws: &Workspace) -> Result<Vec<Task>, InputError> {
    let one = |t: Task| Ok(vec![t]);
    match cmd.clone() {
        Command::Validate { action } => one(Task::Validate {
            action,
            points: Vec::new(),
        }),
        Command::Cohomology {
            algebra,
            subgroup,
            degree,
        } => one(Task::Cohomology {
            algebra,
            subgroup,
            degree,
        }),
        Command::Isotropy { action, point } => one(Task::Isotropy { action, point }),
        Command::Check(c) => one(match c {
            CheckCommand::Invariant(a) => Task::Invariant {
                action: a.action,
                object: a.object,
            },
            CheckCommand::Vertical(a) => Task::Vertical {
                action: a.action,
                chain: a.object,
            },
            CheckCommand::Semibasic(a) => Task::Semibasic {
                action: a.action,
                form: a.object,
            },
            CheckCommand::Cochain {
                action,
                chain,
                forms,
                fields,
            } => Task::Cochain {
                action,
                chain,
                forms,
                fields,
            },
            CheckCommand::Lambda {
                action,
                chain,
                field,
            } => Task::Lambda {
                action,
                chain,
                field,
            },
            CheckCommand::Integrability {
                action,
                chain,
                fields,
            } => Task::Integrability {
                action,
                chain,
                fields,
            },
            CheckCommand::Rescale {
                action,
                chain,
                factor,
                fields,
            } => Task::Rescale {
                action,
                chain,
                factor,
                fields,
            },
        }),
        Command::Rho {
            action,
            chain,
            form,
        } => one(Task::Rho {
            action,
            chain,
            form,
        }),
        Command::Certify(CertifyCommand::Surjective {
            action,
            chain,
            form,
        }) => one(Task::Surjective {
            action,
            chain,
            form,
        }),
        Command::Report {
            action,
            points,
            components,
        } => {
            let components = components
                .iter()
                .map(|c| match c.split_once('=') {
                    Some((p, k)) if !p.is_empty() && !k.is_empty() => {
                        Ok((p.trim().to_string(), k.trim().to_string()))
                    }
                    _ => input(format!(
                        "--components expects POINT=SUBGROUP pairs, found `{c}`"
                    )),
                })
                .collect::<Result<_, _>>()?;
            one(Task::Report {
                action,
                points,
                components,
            })
        }
        Command::Run => ws
            .checks
            .iter()
            .map(|c| task_from_directive(c, ws))
            .collect(),
    }
}

fn names(arg: &CheckArg) -> Vec<String> {
    match arg {
        CheckArg::List(items) => items
            .iter()
            .filter_map(|i| match i {
                CheckArg::Name(n) => Some(n.clone()),
                _ => None,
            })
            .collect(),
        CheckArg::Name(n) => vec![n.clone()],
        _ => Vec::new(),
    }
}

fn pairs(arg: &CheckArg) -> Vec<(String, String)> {
    match arg {
        CheckArg::List(items) => items
            .iter()
            .filter_map(|i| match i {
                CheckArg::Pair(a, b) => Some((a.clone(), b.clone())),
                _ => None,
            })
            .collect(),
        _ => Vec::new(),
    }
}

fn is_pair_list(arg: &CheckArg) -> bool {
    matches!(arg, CheckArg::List(items) if items.iter().any(|i| matches!(i, CheckArg::Pair(..))))
}

/// Splits trailing name lists between form and field slots by the kind of
/// their entries; empty lists fill the slots in order.
fn forms_and_fields(rest: &[CheckArg], ws: &Workspace) -> (Vec<String>, Vec<String>) {
    let (mut forms, mut fields) = (None, None);
    for arg in rest {
        let ns = names(arg);
        let kind = ns.first().and_then(|n| ws.kind_of(n));
        match kind {
            Some(DeclKind::Form) => forms = Some(ns),
            Some(DeclKind::VectorField) => fields = Some(ns),
            _ if forms.is_none() => forms = Some(ns),
            _ => fields = Some(ns),
        }
    }
    (forms.unwrap_or_default(), fields.unwrap_or_default())
}

/// Decodes a directive that the parser has already type-checked.
pub fn task_from_directive(c: &CheckDirective, ws: &Workspace) -> Result<Task, InputError> {
    let name = |i: usize| match c.args.get(i) {
        Some(CheckArg::Name(n)) => Ok(n.clone()),
        _ => input(format!("{}: malformed `{}` directive", c.span, c.kind)),
    };
    let rest = c.args.get(2..).unwrap_or(&[]);
    Ok(match c.kind.as_str() {
        "validate" => Task::Validate {
            action: Some(name(0)?),
            points: c.args.get(1).map(names).unwrap_or_default(),
        },
        "cohomology" => {
            let (subgroup, degree) = match (c.args.get(1), c.args.get(2)) {
                (Some(CheckArg::Name(k)), Some(CheckArg::Int(r))) => (Some(k.clone()), *r),
                (Some(CheckArg::Int(r)), _) => (None, *r),
                _ => return input(format!("{}: malformed `cohomology` directive", c.span)),
            };
            Task::Cohomology {
                algebra: name(0)?,
                subgroup,
                degree,
            }
        }
        "isotropy" => Task::Isotropy {
            action: name(0)?,
            point: name(1)?,
        },
        "invariant" => Task::Invariant {
            action: name(0)?,
            object: name(1)?,
        },
        "vertical" => Task::Vertical {
            action: name(0)?,
            chain: name(1)?,
        },
        "semibasic" => Task::Semibasic {
            action: name(0)?,
            form: name(1)?,
        },
        "cochain" => {
            let (forms, fields) = forms_and_fields(rest, ws);
            Task::Cochain {
                action: name(0)?,
                chain: name(1)?,
                forms,
                fields,
            }
        }
        "rho" => Task::Rho {
            action: name(0)?,
            chain: name(1)?,
            form: name(2)?,
        },
        "lambda" => Task::Lambda {
            action: name(0)?,
            chain: name(1)?,
            field: name(2)?,
        },
        "integrability" => Task::Integrability {
            action: name(0)?,
            chain: name(1)?,
            fields: rest.first().map(names).unwrap_or_default(),
        },
        "rescale" => Task::Rescale {
            action: name(0)?,
            chain: name(1)?,
            factor: name(2)?,
            fields: c.args.get(3).map(names).unwrap_or_default(),
        },
        "surjective" => Task::Surjective {
            action: name(0)?,
            chain: name(1)?,
            form: name(2)?,
        },
        "report" => {
            let mut points = Vec::new();
            let mut components = Vec::new();
            for arg in c.args.iter().skip(1) {
                if is_pair_list(arg) {
                    components = pairs(arg);
                } else {
                    points = names(arg);
                }
            }
            Task::Report {
                action: name(0)?,
                points,
                components,
            }
        }
        other => return input(format!("{}: unknown check `{other}`", c.span)),
    })
}

/// Errors that describe a mathematical failure and therefore become failing
/// verdicts; everything else is an input problem.
fn is_mathematical(e: &AnalysisError) -> bool {
    matches!(
        e,
        AnalysisError::RankDeficit { .. }
            | AnalysisError::HomomorphismViolation { .. }
            | AnalysisError::NoFrameFound(_)
            | AnalysisError::NotProportional(_)
            | AnalysisError::NonInvariantR(_)
            | AnalysisError::Lie(LieError::RelativeComplexNotClosed(_))
            | AnalysisError::Chart(ChartError::Scalar(_))
    )
}

fn settle(
    check: &str,
    subject: &str,
    r: Result<Vec<Verdict>, AnalysisError>,
) -> Result<Vec<Verdict>, InputError> {
    match r {
        Ok(vs) => Ok(vs),
        Err(e) if is_mathematical(&e) => Ok(vec![
            Verdict::new(check, subject, Outcome::Fail).with_reason(e.to_string())
        ]),
        Err(e) => input(format!("{check} {subject}: {e}")),
    }
}

fn settle_one(
    check: &str,
    subject: &str,
    r: Result<Verdict, AnalysisError>,
) -> Result<Vec<Verdict>, InputError> {
    settle(check, subject, r.map(|v| vec![v]))
}

fn describe(k: DeclKind) -> &'static str {
    match k {
        DeclKind::LieAlgebra => "a Lie algebra",
        DeclKind::Subgroup => "a subgroup",
        DeclKind::Chart => "a chart",
        DeclKind::Function => "a function",
        DeclKind::Scalar => "a scalar",
        DeclKind::VectorField => "a vector field",
        DeclKind::Form => "a form",
        DeclKind::Chain => "a chain",
        DeclKind::Action => "an action",
        DeclKind::Point => "a point",
    }
}

/// Name lookups against one workspace, scoped to an action's chart.
struct Scope<'a> {
    ws: &'a Workspace,
}

impl<'a> Scope<'a> {
    fn unknown<T>(&self, what: &str, name: &str) -> Result<T, InputError> {
        match self.ws.kind_of(name) {
            Some(k) => input(format!("`{name}` is {}, not {what}", describe(k))),
            None => input(format!("no declaration named `{name}`; expected {what}")),
        }
    }

    fn action(&self, name: &str) -> Result<&'a ActionSpec, InputError> {
        match self.ws.actions.get(name) {
            Some(a) => Ok(&a.spec),
            None => self.unknown("an action", name),
        }
    }

    fn same_chart(&self, a: &ActionSpec, name: &str, chart: &str) -> Result<(), InputError> {
        if a.chart().name() == chart {
            Ok(())
        } else {
            input(format!(
                "`{name}` lives on chart `{chart}` but action `{}` acts on `{}`",
                a.name(),
                a.chart().name()
            ))
        }
    }

    fn chain(&self, a: &ActionSpec, name: &str) -> Result<&'a MultiVectorField, InputError> {
        let Some(c) = self.ws.chains.get(name) else {
            return self.unknown("a chain", name);
        };
        self.same_chart(a, name, c.chart().name())?;
        Ok(c)
    }

    fn form(&self, a: &ActionSpec, name: &str) -> Result<&'a DiffForm, InputError> {
        let Some(f) = self.ws.forms.get(name) else {
            return self.unknown("a form", name);
        };
        self.same_chart(a, name, f.chart().name())?;
        Ok(f)
    }

    fn field(&self, a: &ActionSpec, name: &str) -> Result<&'a VectorField, InputError> {
        let Some(x) = self.ws.vector_fields.get(name) else {
            return self.unknown("a vector field", name);
        };
        self.same_chart(a, name, x.chart().name())?;
        Ok(x)
    }

    fn forms(&self, a: &ActionSpec, ns: &[String]) -> Result<Vec<(String, DiffForm)>, InputError> {
        ns.iter()
            .map(|n| Ok((n.clone(), self.form(a, n)?.clone())))
            .collect()
    }

    fn fields(
        &self,
        a: &ActionSpec,
        ns: &[String],
    ) -> Result<Vec<(String, VectorField)>, InputError> {
        ns.iter()
            .map(|n| Ok((n.clone(), self.field(a, n)?.clone())))
            .collect()
    }

    fn subgroup(&self, algebra: &str, name: &str) -> Result<&'a SubgroupSpec, InputError> {
        let Some(s) = self.ws.subgroups.get(name) else {
            return self.unknown("a subgroup", name);
        };
        if s.algebra != algebra {
            return input(format!(
                "subgroup `{name}` belongs to `{}`, not `{algebra}`",
                s.algebra
            ));
        }
        Ok(&s.spec)
    }

    fn point(&self, a: &ActionSpec, name: &str) -> Result<SamplePoint, InputError> {
        let Some(p) = self.ws.points.get(name) else {
            return self.unknown("a point", name);
        };
        self.same_chart(a, name, &p.chart)?;
        Ok(SamplePoint::new(name, p.coords.clone()))
    }

    /// Named points, or every point on the action's chart when none are named.
    fn samples(
        &self,
        action: &str,
        names: &[String],
        components: &[(String, String)],
    ) -> Result<Vec<SamplePoint>, InputError> {
        let a = self.action(action)?;
        let mut samples: Vec<SamplePoint> = if names.is_empty() {
            self.ws
                .points_on(a.chart().name())
                .into_iter()
                .map(|(n, p)| SamplePoint::new(n, p))
                .collect()
        } else {
            names
                .iter()
                .map(|n| self.point(a, n))
                .collect::<Result<_, _>>()?
        };
        for (p, k) in components {
            let Some(sample) = samples.iter_mut().find(|s| &s.label == p) else {
                return input(format!(
                    "component data names `{p}`, which is not a sample point"
                ));
            };
            sample.components = self.component_reps(action, a, sample, k)?;
        }
        Ok(samples)
    }

    /// Component representatives of a declared subgroup whose span must be
    /// the isotropy algebra at the sample.
    fn component_reps(
        &self,
        action: &str,
        a: &ActionSpec,
        sample: &SamplePoint,
        subgroup: &str,
    ) -> Result<Vec<ComponentRep>, InputError> {
        let algebra = &self.ws.actions[action].algebra;
        let spec = self.subgroup(algebra, subgroup)?;
        let iso = a
            .isotropy_algebra_at(&sample.point)
            .or_else(|e| input(format!("isotropy at `{}`: {e}", sample.label)))?;
        let p = a.algebra().dim();
        let declared = RowSpace::spanned_by(p, &spec.basis);
        let computed = RowSpace::spanned_by(p, &iso.isotropy_basis);
        let same = declared.rank() == computed.rank()
            && iso.isotropy_basis.iter().all(|v| declared.contains(v));
        if !same {
            return input(format!(
                "subgroup `{subgroup}` does not span the isotropy algebra at `{}`",
                sample.label
            ));
        }
        let tangents = &self.ws.subgroups[subgroup].tangents;
        Ok(spec
            .components
            .iter()
            .enumerate()
            .map(|(i, m)| ComponentRep {
                adjoint: m.clone(),
                tangent: tangents.get(i).cloned().flatten(),
            })
            .collect())
    }
}

fn jacobi_verdict(ws: &Workspace, algebra: &str) -> Verdict {
    let l = &ws.lie_algebras[algebra];
    let report = l.validate();
    let mut v = Verdict::new("jacobi", algebra, Outcome::from_bool(report.is_ok()));
    if let Some(bad) = report.violations.first() {
        let (i, j, k) = bad.triple;
        v = v
            .with_witness(liecochain::lie::format_lie_vector(
                &bad.residual,
                l.labels(),
            ))
            .with_reason(format!("triple (e{}, e{}, e{})", i + 1, j + 1, k + 1));
    }
    v
}

/// Runs one task. Verdicts come back in a fixed order.
pub fn execute(ws: &Workspace, task: &Task) -> Result<Vec<Verdict>, InputError> {
    let sc = Scope { ws };
    match task {
        Task::Validate { action: None, .. } => {
            let mut out: Vec<Verdict> = ws
                .lie_algebras
                .keys()
                .map(|n| jacobi_verdict(ws, n))
                .collect();
            for name in ws.actions.keys() {
                let samples = sc.samples(name, &[], &[])?;
                let a = sc.action(name)?;
                out.extend(settle("validate", name, a.validation_verdicts(&samples))?);
            }
            Ok(out)
        }
        Task::Validate {
            action: Some(name),
            points,
        } => {
            let a = sc.action(name)?;
            let samples = sc.samples(name, points, &[])?;
            let mut out = vec![jacobi_verdict(ws, &ws.actions[name].algebra)];
            out.extend(settle("validate", name, a.validation_verdicts(&samples))?);
            Ok(out)
        }
        Task::Cohomology {
            algebra,
            subgroup,
            degree,
        } => {
            let Some(l) = ws.lie_algebras.get(algebra) else {
                return sc.unknown("a Lie algebra", algebra);
            };
            if *degree > l.dim() {
                return input(format!(
                    "--degree {degree} exceeds the dimension {} of `{algebra}`",
                    l.dim()
                ));
            }
            let subject = match subgroup {
                Some(k) => format!("{algebra}/{k}"),
                None => algebra.clone(),
            };
            let jacobi = jacobi_verdict(ws, algebra);
            if jacobi.verdict == Outcome::Fail {
                return Ok(vec![
                    jacobi,
                    Verdict::skipped(
                        "cohomology",
                        subject,
                        "the bracket violates the Jacobi identity",
                    ),
                ]);
            }
            let res = match subgroup {
                Some(k) => relative_cohomology(l, sc.subgroup(algebra, k)?, *degree),
                None => absolute_cohomology(l, *degree),
            };
            match res {
                Ok(r) => Ok(vec![cohomology_verdict(&subject, &r)]),
                Err(e) => settle("cohomology", &subject, Err(e.into())),
            }
        }
        Task::Isotropy { action, point } => {
            let a = sc.action(action)?;
            let sample = sc.point(a, point)?;
            settle_one(
                "isotropy",
                &format!("{action} at {point}"),
                a.isotropy_verdict(&sample),
            )
        }
        Task::Invariant { action, object } => {
            let a = sc.action(action)?;
            let r = if let Some(s) = ws.scalars.get(object) {
                sc.same_chart(a, object, &s.chart)?;
                Ok(a.scalar_invariance_verdict(object, &s.value))
            } else if ws.forms.contains_key(object) {
                a.form_invariance_verdict(object, sc.form(a, object)?)
            } else if ws.vector_fields.contains_key(object) {
                a.field_invariance_verdict(object, sc.field(a, object)?)
            } else if ws.chains.contains_key(object) {
                a.chain_invariance_verdict(object, sc.chain(a, object)?)
            } else {
                return sc.unknown("a scalar, form, vector field or chain", object);
            };
            settle_one("invariant", object, r)
        }
        Task::Vertical { action, chain } => {
            let a = sc.action(action)?;
            let chi = sc.chain(a, chain)?;
            let samples = sc.samples(action, &[], &[])?;
            settle_one("vertical", chain, a.vertical_verdict(chain, chi, &samples))
        }
        Task::Semibasic { action, form } => {
            let a = sc.action(action)?;
            settle_one(
                "semibasic",
                form,
                a.semibasic_verdict(form, sc.form(a, form)?),
            )
        }
        Task::Cochain {
            action,
            chain,
            forms,
            fields,
        } => {
            let a = sc.action(action)?;
            let chi = sc.chain(a, chain)?;
            let forms = sc.forms(a, forms)?;
            let fields = sc.fields(a, fields)?;
            let samples = sc.samples(action, &[], &[])?;
            settle(
                "cochain",
                chain,
                a.cochain_report(chain, chi, &forms, &fields, &samples)
                    .map(|r| r.verdicts),
            )
        }
        Task::Rho {
            action,
            chain,
            form,
        } => {
            let a = sc.action(action)?;
            let chi = sc.chain(a, chain)?;
            let omega = sc.form(a, form)?;
            let samples = sc.samples(action, &[], &[])?;
            settle_one(
                "rho",
                &format!("{chain}, {form}"),
                a.rho_verdict(chain, chi, form, omega, &samples),
            )
        }
        Task::Lambda {
            action,
            chain,
            field,
        } => {
            let a = sc.action(action)?;
            let chi = sc.chain(a, chain)?;
            let r = sc.field(a, field)?;
            settle_one(
                "lambda",
                &format!("{chain}, {field}"),
                a.lambda_verdict(chain, chi, field, r),
            )
        }
        Task::Integrability {
            action,
            chain,
            fields,
        } => {
            let a = sc.action(action)?;
            let chi = sc.chain(a, chain)?;
            let fields = sc.fields(a, fields)?;
            settle(
                "integrability",
                chain,
                a.integrability_verdicts(chain, chi, &fields),
            )
        }
        Task::Rescale {
            action,
            chain,
            factor,
            fields,
        } => {
            let a = sc.action(action)?;
            let chi = sc.chain(a, chain)?;
            let Some(s) = ws.scalars.get(factor) else {
                return sc.unknown("a scalar", factor);
            };
            sc.same_chart(a, factor, &s.chart)?;
            let fields = sc.fields(a, fields)?;
            settle(
                "rescale",
                chain,
                a.rescale_verdicts(chain, chi, &s.value, &fields),
            )
        }
        Task::Surjective {
            action,
            chain,
            form,
        } => {
            let a = sc.action(action)?;
            let chi = sc.chain(a, chain)?;
            let alpha = sc.form(a, form)?;
            settle_one(
                "surjective",
                &format!("{chain}, {form}"),
                a.surjectivity_verdict(chain, chi, form, alpha),
            )
        }
        Task::Report {
            action,
            points,
            components,
        } => {
            let a = sc.action(action)?;
            let samples = sc.samples(action, points, components)?;
            if samples.is_empty() {
                return input(format!(
                    "report needs sample points and chart `{}` declares none",
                    a.chart().name()
                ));
            }
            settle("report", action, a.obstruction_verdicts(&samples))
        }
    }
}

/// Runs tasks in order, stopping at the first input error.
pub fn execute_all(ws: &Workspace, tasks: &[Task]) -> Result<Vec<Verdict>, InputError> {
    let mut out = Vec::new();
    for t in tasks {
        out.extend(execute(ws, t)?);
    }
    Ok(out)
}
