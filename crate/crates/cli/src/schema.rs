//! Bundle schema.  Polynomials are stored as their canonical text; every
//! stored polynomial lives in a context whose variable list is recorded
//! next to it or follows from the echoed problem.

use crate::error::{CliError, CliResult};
use crate::problem::{ProblemFile, Task};
use serde::{Deserialize, Serialize};
use zmtforge_core::ideal::{Algebra, AlgebraPresentation, Localization};
use zmtforge_core::integrality::{CoefficientLocation, IntegralityCertificate};
use zmtforge_core::ring::{parse_poly, Ctx, PolyMatrix, Polynomial, Vars};

pub const BUNDLE_SCHEMA: &str = "zmtforge-bundle";
pub const BUNDLE_VERSION: u32 = 1;

pub fn text(p: &Polynomial) -> String {
    p.to_string()
}

pub fn texts(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(text).collect()
}

pub fn read(field: &str, s: &str, ctx: &Ctx) -> CliResult<Polynomial> {
    parse_poly(s, ctx).map_err(|e| CliError::engine(field, e))
}

pub fn read_all(field: &str, ss: &[String], ctx: &Ctx) -> CliResult<Vec<Polynomial>> {
    ss.iter().enumerate().map(|(i, s)| read(&format!("{field}[{i}]"), s, ctx)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum LocalizationDoc {
    None,
    PointIdeal(Vec<String>),
    Monoid(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub vars: Vec<String>,
    pub relations: Vec<String>,
    pub localization: LocalizationDoc,
}

impl AlgebraDoc {
    pub fn from_algebra(a: &Algebra) -> Self {
        let localization = match a.localization() {
            Localization::None => LocalizationDoc::None,
            Localization::PointIdeal(vs) => LocalizationDoc::PointIdeal(vs.clone()),
            Localization::Monoid(ps) => LocalizationDoc::Monoid(texts(ps)),
        };
        AlgebraDoc { vars: a.ctx().names().to_vec(), relations: texts(a.relations().gens()), localization }
    }

    pub fn to_algebra(&self) -> CliResult<Algebra> {
        let ctx = Vars::new(&self.vars);
        let rels = read_all("relations", &self.relations, &ctx)?;
        let local = match &self.localization {
            LocalizationDoc::None => Localization::None,
            LocalizationDoc::PointIdeal(vs) => Localization::PointIdeal(vs.clone()),
            LocalizationDoc::Monoid(ps) => Localization::Monoid(read_all("monoid", ps, &ctx)?),
        };
        AlgebraPresentation::new(&ctx, rels, local).map_err(|e| CliError::engine("algebra", e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum LocationDoc {
    OverBase,
    OverIdeal(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertDoc {
    pub owner: AlgebraDoc,
    pub element: String,
    pub denominator: String,
    pub coeff_vars: Vec<String>,
    /// c_0 .. c_n, c_n = 1
    pub coeffs: Vec<String>,
    pub location: LocationDoc,
    pub provenance: Vec<String>,
    /// the relation written out in T, for reading
    pub relation: String,
}

impl CertDoc {
    pub fn from_cert(c: &IntegralityCertificate) -> Self {
        CertDoc {
            owner: AlgebraDoc::from_algebra(&c.owner),
            element: text(&c.element),
            denominator: text(&c.denominator),
            coeff_vars: c.coeff_vars.clone(),
            coeffs: texts(&c.coeffs),
            location: match &c.location {
                CoefficientLocation::OverBase => LocationDoc::OverBase,
                CoefficientLocation::OverIdeal(g) => LocationDoc::OverIdeal(texts(g)),
            },
            provenance: c.provenance.clone(),
            relation: c.monic_string("T"),
        }
    }

    pub fn to_cert(&self) -> CliResult<IntegralityCertificate> {
        let owner = self.owner.to_algebra()?;
        let ctx = owner.ctx().clone();
        Ok(IntegralityCertificate {
            element: read("element", &self.element, &ctx)?,
            denominator: read("denominator", &self.denominator, &ctx)?,
            coeff_vars: self.coeff_vars.clone(),
            coeffs: read_all("coeffs", &self.coeffs, &ctx)?,
            location: match &self.location {
                LocationDoc::OverBase => CoefficientLocation::OverBase,
                LocationDoc::OverIdeal(g) => CoefficientLocation::OverIdeal(read_all("location", g, &ctx)?),
            },
            provenance: self.provenance.clone(),
            owner,
        })
    }
}

pub fn certs_doc(cs: &[IntegralityCertificate]) -> Vec<CertDoc> {
    cs.iter().map(CertDoc::from_cert).collect()
}

pub fn certs_from(ds: &[CertDoc]) -> CliResult<Vec<IntegralityCertificate>> {
    ds.iter().map(CertDoc::to_cert).collect()
}

/// row-major square or rectangular matrix
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &PolyMatrix) -> Self {
        MatrixDoc { rows: m.rows(), cols: m.cols(), entries: texts(m.entries()) }
    }

    pub fn to_matrix(&self, ctx: &Ctx) -> CliResult<PolyMatrix> {
        let e = read_all("matrix", &self.entries, ctx)?;
        PolyMatrix::new(ctx, self.rows, self.cols, e).map_err(|e| CliError::engine("matrix", e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewtonStateDoc {
    pub k: u32,
    pub point: Vec<String>,
    pub u: MatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MhlTraceDoc {
    pub module_gens: Vec<String>,
    pub matrix: MatrixDoc,
    pub mu0: Vec<String>,
    pub d: String,
    pub mu: String,
    pub qpoly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonicDoc {
    pub g_num: String,
    pub den: String,
}

/// Artifacts, tagged by task.  Unless stated otherwise polynomials are in
/// Q[gens, base vars].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "kebab-case")]
pub enum Artifacts {
    Gb {
        order: String,
        /// relations followed by the ideal
        input: Vec<String>,
        basis: Vec<String>,
        /// basis[i] = Σ_j cofactors[i][j]·input[j]
        cofactors: Vec<Vec<String>>,
    },
    Member {
        input: Vec<String>,
        member: bool,
        /// element = Σ cofactors[j]·input[j], when known
        cofactors: Option<Vec<String>>,
    },
    Radical {
        input: Vec<String>,
        member: bool,
        exponent: Option<u32>,
        /// element^exponent = Σ cofactors[j]·input[j]
        cofactors: Option<Vec<String>>,
    },
    IntegralCert {
        cert: CertDoc,
    },
    Zmt {
        residual: Vec<Vec<String>>,
        s: String,
        s_cert: CertDoc,
        x_certs: Vec<CertDoc>,
        one_minus_s: Vec<String>,
    },
    ZmtGlobal {
        family: Vec<String>,
        comaximality: Vec<String>,
        certs: Vec<CertDoc>,
        x_certs: Vec<Vec<CertDoc>>,
    },
    Newton {
        /// states in the base ring, modulus I^(2^k)
        states: Vec<NewtonStateDoc>,
    },
    Hensel {
        /// unknowns and equations after the optional extension, in
        /// Q[system_xs, base vars]
        system_xs: Vec<String>,
        system_eqs: Vec<String>,
        /// the isolating idempotent, in Q[gens]
        e: String,
        s: String,
        s_cert: CertDoc,
        /// Hensel polynomial h(T) over A, in Q[tvars]
        tvars: Vec<String>,
        h: String,
        r0: u32,
        q: u32,
        n_exp: u32,
        /// f(X) = h(1 + X), in Q[fvars]
        fvars: Vec<String>,
        f: String,
        /// z_i = numerators[i]/denominator in A[X]/⟨f⟩, in Q[fvars]
        numerators: Vec<String>,
        denominator: String,
        monic: Option<MonicDoc>,
        trace: Option<MhlTraceDoc>,
    },
    Verify {
        /// the bundle that was checked
        checked_task: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Verdict {
    pub fn new(check: &str, failures: Vec<String>) -> Self {
        Verdict { check: check.to_string(), pass: failures.is_empty(), detail: failures.join("; ") }
    }

    pub fn passed(check: &str, detail: String) -> Self {
        Verdict { check: check.to_string(), pass: true, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsEcho {
    pub degree_cap: u64,
    pub exp_cap: u32,
    pub branch_cap: u32,
    pub order: String,
    pub trace: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateBundle {
    pub schema: String,
    pub version: u32,
    pub engine_version: String,
    pub task: Task,
    pub options: OptionsEcho,
    pub problem: ProblemFile,
    pub artifacts: Artifacts,
    pub verdicts: Vec<Verdict>,
    /// wall-clock milliseconds per stage; only recorded with --trace so
    /// that output is reproducible by default
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<Vec<(String, u64)>>,
}

impl CertificateBundle {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

pub fn parse_bundle(text: &str) -> CliResult<CertificateBundle> {
    let b: CertificateBundle = serde_json::from_str(text)?;
    if b.schema != BUNDLE_SCHEMA {
        return Err(CliError::Config(format!("not a certificate bundle (schema `{}`)", b.schema)));
    }
    if b.version != BUNDLE_VERSION {
        return Err(CliError::Config(format!("bundle version {} is not supported", b.version)));
    }
    Ok(b)
}
