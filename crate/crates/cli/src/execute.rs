//! Task dispatch.  Every task computes its artifacts, then runs the same
//! checker that `verify` runs on a saved bundle.

use crate::error::{CliError, CliResult};
use crate::problem::{parse_order, ProblemFile, Task};
use crate::schema::*;
use crate::verify::check_artifacts;
use std::time::Instant;
use zmtforge_core::hensel::{mhl_pipeline, newton_start, newton_step, HenselSystem};
use zmtforge_core::ideal::{groebner_tracked, member_traced, radical_member, Ideal};
use zmtforge_core::integrality::{CoefficientLocation, IntegralityCertificate};
use zmtforge_core::ring::{MonomialOrder, Polynomial};
use zmtforge_core::zmt::problem::element_relation;
use zmtforge_core::zmt::{find_residual, zmt_global, zmt_main, QuasiFiniteWitness, ZmtProblem};
use zmtforge_core::EngineError;

/// Command-line overrides; `None` keeps the value from the problem file.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub degree_cap: Option<u64>,
    pub exp_cap: Option<u32>,
    pub branch_cap: Option<u32>,
    pub order: Option<String>,
    pub trace: bool,
}

impl RunOptions {
    pub fn apply(&self, p: &ProblemFile) -> CliResult<ProblemFile> {
        let mut p = p.clone();
        let o = &mut p.options;
        o.degree_cap = self.degree_cap.or(o.degree_cap);
        o.exp_cap = self.exp_cap.or(o.exp_cap);
        o.branch_cap = self.branch_cap.or(o.branch_cap);
        if let Some(ord) = &self.order {
            parse_order(ord)?;
            o.order = Some(ord.clone());
        }
        o.trace |= self.trace;
        Ok(p)
    }
}

pub fn options_echo(p: &ProblemFile) -> OptionsEcho {
    let caps = p.caps();
    OptionsEcho {
        degree_cap: caps.degree,
        exp_cap: caps.exponent,
        branch_cap: caps.branch,
        order: p.options.order.clone().unwrap_or_else(|| "degrevlex".into()),
        trace: p.options.trace,
    }
}

fn eng<T>(stage: &str, r: zmtforge_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::engine(stage, e))
}

fn order_name(o: &MonomialOrder) -> String {
    match o {
        MonomialOrder::Lex => "lex".into(),
        _ => "degrevlex".into(),
    }
}

/// relations followed by the ideal, in Q[gens, base]
fn combined(p: &ProblemFile) -> CliResult<Vec<Polynomial>> {
    let ctx = p.ctx();
    let mut g = p.relations_in(&ctx)?;
    g.extend(p.ideal_in(&ctx)?);
    Ok(g)
}

pub fn hensel_system(p: &ProblemFile) -> CliResult<HenselSystem> {
    let base = p.base_algebra()?;
    let bctx = p.base_ctx();
    let maximal = p.ideal_in(&bctx)?;
    let eqs = p.relations_in(&p.ctx())?;
    eng("hensel system", HenselSystem::new(&base, &maximal, &p.gens, &eqs))
}

fn run_task(p: &ProblemFile, task: Task) -> CliResult<Artifacts> {
    let ctx = p.ctx();
    match task {
        Task::Gb => {
            let input = combined(p)?;
            let order = p.order();
            let gb = eng("gb", groebner_tracked(&input, input.len(), &ctx, &order))?;
            let cof = gb.cofactors().map(|c| c.to_vec()).unwrap_or_default();
            Ok(Artifacts::Gb {
                order: order_name(&order),
                input: texts(&input),
                basis: texts(gb.basis()),
                cofactors: cof.iter().map(|c| texts(c)).collect(),
            })
        }
        Task::Member => {
            let input = combined(p)?;
            let e = p.element_in(&ctx)?;
            let (member, cofactors) = if p.base.local_at.is_some() {
                let b = p.algebra()?.with_localization(p.base_localization()).map_err(|e| CliError::engine("algebra", e))?;
                (eng("member", b.in_ideal(&e, &p.ideal_in(&ctx)?))?, None)
            } else {
                let c = eng("member", member_traced(&e, &Ideal::new(&ctx, input.clone())))?;
                (c.is_some(), c.map(|c| texts(&c)))
            };
            Ok(Artifacts::Member { input: texts(&input), member, cofactors })
        }
        Task::Radical => {
            let input = combined(p)?;
            let e = p.element_in(&ctx)?;
            let ideal = Ideal::new(&ctx, input.clone());
            let v = eng("radical", radical_member(&e, &ideal))?;
            let cofactors = match v.exponent {
                Some(k) => eng("radical", member_traced(&e.pow(k), &ideal))?.map(|c| texts(&c)),
                None => None,
            };
            Ok(Artifacts::Radical { input: texts(&input), member: v.member, exponent: v.exponent, cofactors })
        }
        Task::IntegralCert => {
            let b = p.algebra()?;
            let e = p.element_in(&ctx)?;
            let coeffs = eng("integral-cert", element_relation(&b, &p.base.vars, &e))?.ok_or_else(|| {
                CliError::engine("integral-cert", EngineError::WitnessSearchExhausted(format!("no monic relation for {e} over the base")))
            })?;
            let cert = eng(
                "integral-cert",
                IntegralityCertificate::new(&b, e, &p.base.vars, coeffs, CoefficientLocation::OverBase, "Elimination"),
            )?;
            Ok(Artifacts::IntegralCert { cert: CertDoc::from_cert(&cert) })
        }
        Task::Zmt => {
            let b = p.algebra()?;
            let ideal = p.ideal_in(&ctx)?;
            let residual = eng("residual", find_residual(&b, &p.base.vars, &p.gens, &ideal))?;
            let zp = eng("zmt", ZmtProblem::new(&b, &p.base.vars, &p.gens, &ideal, residual.clone()))?;
            let r = eng("zmt", zmt_main(&zp))?;
            Ok(Artifacts::Zmt {
                residual: residual.iter().map(|c| texts(c)).collect(),
                s: text(&r.s),
                s_cert: CertDoc::from_cert(&r.s_cert),
                x_certs: certs_doc(&r.x_certs),
                one_minus_s: texts(&r.one_minus_s),
            })
        }
        Task::ZmtGlobal => {
            let b = p.algebra()?;
            let w = p.witness.as_ref().ok_or_else(|| CliError::Config("zmt-global needs `witness` elements".into()))?;
            let elems = p.polys("witness", w, &ctx)?;
            let wit = eng("witness", QuasiFiniteWitness::search(&b, &p.base.vars, &p.gens, &elems))?;
            let r = eng("zmt-global", zmt_global(&b, &p.base.vars, &p.gens, &wit))?;
            Ok(Artifacts::ZmtGlobal {
                family: texts(&r.family),
                comaximality: texts(&r.comaximality),
                certs: certs_doc(&r.certs),
                x_certs: r.x_certs.iter().map(|c| certs_doc(c)).collect(),
            })
        }
        Task::Newton => {
            let sys = hensel_system(p)?;
            let i = sys.maximal.clone();
            let mut st = eng("newton", newton_start(&sys, &i))?;
            let mut states = vec![st.clone()];
            for _ in 0..p.steps.unwrap_or(1) {
                st = eng("newton", newton_step(&sys, &i, &st))?;
                states.push(st.clone());
            }
            Ok(Artifacts::Newton {
                states: states
                    .iter()
                    .map(|s| NewtonStateDoc { k: s.k, point: texts(&s.point), u: MatrixDoc::from_matrix(&s.u) })
                    .collect(),
            })
        }
        Task::Hensel => {
            let sys = hensel_system(p)?;
            let r = eng("hensel", mhl_pipeline(&sys))?;
            let red = &r.reduction;
            let trace = p.options.trace.then(|| MhlTraceDoc {
                module_gens: texts(&red.module_gens),
                matrix: MatrixDoc::from_matrix(&red.matrix),
                mu0: texts(&red.mu0),
                d: text(&red.d),
                mu: text(&red.mu),
                qpoly: text(&red.qpoly),
            });
            Ok(Artifacts::Hensel {
                system_xs: r.system.xs.clone(),
                system_eqs: texts(&r.system.eqs),
                e: text(&r.isolation.e),
                s: text(&red.s),
                s_cert: CertDoc::from_cert(&r.zmt.s_cert),
                tvars: red.tctx.names().to_vec(),
                h: text(&red.h),
                r0: red.r0,
                q: red.q,
                n_exp: red.n_exp,
                fvars: red.fctx.names().to_vec(),
                f: text(&red.f),
                numerators: texts(&r.zero.numerators),
                denominator: text(&r.zero.denominator),
                monic: r.monic.as_ref().map(|m| MonicDoc { g_num: text(&m.g_num), den: text(&m.den) }),
                trace,
            })
        }
        Task::Verify => Err(CliError::Config("verify takes a bundle, not a problem file".into())),
    }
}

/// Run `task` on the problem, with the command-line overrides applied.
pub fn execute(problem: &ProblemFile, task: Task, opts: &RunOptions) -> CliResult<CertificateBundle> {
    if let Some(t) = problem.task {
        if t != task {
            return Err(CliError::Config(format!("the problem file is for `{}`, not `{}`", t.name(), task.name())));
        }
    }
    let p = opts.apply(problem)?;
    p.validate()?;
    p.caps().scope(|| {
        let t0 = Instant::now();
        let artifacts = run_task(&p, task)?;
        let t1 = Instant::now();
        let verdicts = check_artifacts(&p, &artifacts)?;
        let timing = p.options.trace.then(|| {
            vec![
                ("compute".to_string(), (t1 - t0).as_millis() as u64),
                ("verify".to_string(), t1.elapsed().as_millis() as u64),
            ]
        });
        Ok(CertificateBundle {
            schema: BUNDLE_SCHEMA.into(),
            version: BUNDLE_VERSION,
            engine_version: env!("CARGO_PKG_VERSION").into(),
            task,
            options: options_echo(&p),
            problem: p.clone(),
            artifacts,
            verdicts,
            timing_ms: timing,
        })
    })
}
