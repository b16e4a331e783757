//! The JSON problem file.  Polynomials are strings in the ring grammar;
//! the ring is Q[gens, base vars] with the generators first.

use crate::error::{CliError, CliResult};
use serde::{Deserialize, Serialize};
use zmtforge_core::ideal::{Algebra, AlgebraPresentation, Localization};
use zmtforge_core::ring::{parse_poly, Ctx, MonomialOrder, Polynomial, Vars};
use zmtforge_core::Caps;

pub const PROBLEM_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Gb,
    Member,
    Radical,
    IntegralCert,
    Zmt,
    ZmtGlobal,
    Newton,
    #[serde(alias = "mhl")]
    #[value(alias = "mhl")]
    Hensel,
    Verify,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Gb => "gb",
            Task::Member => "member",
            Task::Radical => "radical",
            Task::IntegralCert => "integral-cert",
            Task::Zmt => "zmt",
            Task::ZmtGlobal => "zmt-global",
            Task::Newton => "newton",
            Task::Hensel => "hensel",
            Task::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseDoc {
    pub vars: Vec<String>,
    /// localize at the origin in these variables
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_at: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exp_cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(default)]
    pub trace: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    pub base: BaseDoc,
    #[serde(default)]
    pub gens: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub ideal: Vec<String>,
    /// the element for member, radical and integral-cert
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    /// candidate elements for the quasi-finiteness witness of zmt-global
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    /// number of Newton steps
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<u32>,
    #[serde(default)]
    pub options: OptionsDoc,
}

pub fn parse_problem(text: &str) -> CliResult<ProblemFile> {
    let p: ProblemFile = serde_json::from_str(text)?;
    p.validate()?;
    Ok(p)
}

pub fn parse_order(s: &str) -> CliResult<MonomialOrder> {
    match s {
        "degrevlex" | "grevlex" => Ok(MonomialOrder::DegRevLex),
        "lex" => Ok(MonomialOrder::Lex),
        other => Err(CliError::Config(format!("unknown monomial order `{other}`"))),
    }
}

impl ProblemFile {
    pub fn validate(&self) -> CliResult<()> {
        if self.version != PROBLEM_VERSION {
            return Err(CliError::Config(format!("problem version {} is not supported", self.version)));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in self.gens.iter().chain(&self.base.vars) {
            if !seen.insert(v) {
                return Err(CliError::Config(format!("variable `{v}` is declared twice")));
            }
        }
        for v in self.base.local_at.iter().flatten() {
            if !self.base.vars.contains(v) {
                return Err(CliError::Config(format!("local_at variable `{v}` is not a base variable")));
            }
        }
        if let Some(o) = &self.options.order {
            parse_order(o)?;
        }
        let ctx = self.ctx();
        self.polys("relations", &self.relations, &ctx)?;
        self.polys("ideal", &self.ideal, &ctx)?;
        if let Some(e) = &self.element {
            self.poly_at("element", e, &ctx)?;
        }
        if let Some(w) = &self.witness {
            self.polys("witness", w, &ctx)?;
        }
        Ok(())
    }

    /// generators, then base variables
    pub fn ctx(&self) -> Ctx {
        let mut names = self.gens.clone();
        names.extend(self.base.vars.iter().cloned());
        Vars::new(&names)
    }

    pub fn base_ctx(&self) -> Ctx {
        Vars::new(&self.base.vars)
    }

    pub fn base_localization(&self) -> Localization {
        match &self.base.local_at {
            Some(vs) => Localization::PointIdeal(vs.clone()),
            None => Localization::None,
        }
    }

    pub fn poly_at(&self, field: &str, src: &str, ctx: &Ctx) -> CliResult<Polynomial> {
        parse_poly(src, ctx).map_err(|e| CliError::engine(field, e))
    }

    pub fn polys(&self, field: &str, srcs: &[String], ctx: &Ctx) -> CliResult<Vec<Polynomial>> {
        srcs.iter().enumerate().map(|(i, s)| self.poly_at(&format!("{field}[{i}]"), s, ctx)).collect()
    }

    pub fn relations_in(&self, ctx: &Ctx) -> CliResult<Vec<Polynomial>> {
        self.polys("relations", &self.relations, ctx)
    }

    pub fn ideal_in(&self, ctx: &Ctx) -> CliResult<Vec<Polynomial>> {
        self.polys("ideal", &self.ideal, ctx)
    }

    pub fn element_in(&self, ctx: &Ctx) -> CliResult<Polynomial> {
        let e = self.element.as_deref().ok_or_else(|| CliError::Config("this task needs an `element`".into()))?;
        self.poly_at("element", e, ctx)
    }

    /// B = Q[gens, base]/relations, not localized.
    pub fn algebra(&self) -> CliResult<Algebra> {
        let ctx = self.ctx();
        let rels = self.relations_in(&ctx)?;
        AlgebraPresentation::new(&ctx, rels, Localization::None).map_err(|e| CliError::engine("algebra", e))
    }

    /// A = Q[base], localized when `local_at` is present.
    pub fn base_algebra(&self) -> CliResult<Algebra> {
        AlgebraPresentation::new(&self.base_ctx(), vec![], self.base_localization()).map_err(|e| CliError::engine("base", e))
    }

    pub fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            degree: self.options.degree_cap.unwrap_or(d.degree),
            exponent: self.options.exp_cap.unwrap_or(d.exponent),
            branch: self.options.branch_cap.unwrap_or(d.branch),
        }
    }

    pub fn order(&self) -> MonomialOrder {
        self.options.order.as_deref().map(|o| parse_order(o).unwrap_or_default()).unwrap_or_default()
    }
}
