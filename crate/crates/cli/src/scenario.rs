//! Scenario files: a versioned JSON schema describing rings, modules, and a
//! task list, executed deterministically. Unknown fields are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use vbass_core::bass::{self, PrimeSpec};
use vbass_core::error::Error as CoreError;
use vbass_core::field::Field;
use vbass_core::gmod::GradedModule;
use vbass_core::limits::GbLimits;
use vbass_core::localcoh;
use vbass_core::resolve;
use vbass_core::ring::GradedRing;
use vbass_core::veronese::{self, VeroneseRing};

use crate::tables;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    #[serde(default)]
    pub field: FieldSpec,
    #[serde(default)]
    pub rings: BTreeMap<String, RingSpec>,
    #[serde(default)]
    pub modules: Vec<ModuleSpec>,
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub limits: LimitsSpec,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(default)]
    pub characteristic: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub variables: Vec<String>,
    #[serde(default)]
    pub weights: Option<Vec<u32>>,
    #[serde(default)]
    pub relations: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub name: String,
    pub ring: String,
    /// "residue_field", "ring", or omitted for an explicit presentation.
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub twists: Option<Vec<i64>>,
    /// Row-major matrix of polynomial strings.
    #[serde(default)]
    pub matrix: Option<Vec<Vec<String>>>,
    #[serde(default, rename = "sourceTwists")]
    pub source_twists: Option<Vec<i64>>,
    /// Shift applied after construction.
    #[serde(default)]
    pub shift: Option<i64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsSpec {
    #[serde(default = "default_max_basis", rename = "maxBasis")]
    pub max_basis: usize,
    #[serde(default = "default_max_degree", rename = "maxDegree")]
    pub max_degree: i64,
    #[serde(default = "default_max_terms", rename = "maxTerms")]
    pub max_terms: usize,
    #[serde(default = "default_i_max", rename = "iMax")]
    pub i_max: usize,
    #[serde(default = "default_box", rename = "box")]
    pub box_bound: i64,
    #[serde(default = "default_degree_window", rename = "degreeWindow")]
    pub degree_window: (i64, i64),
}

fn default_max_basis() -> usize {
    10_000
}
fn default_max_degree() -> i64 {
    60
}
fn default_max_terms() -> usize {
    100_000
}
fn default_i_max() -> usize {
    4
}
fn default_box() -> i64 {
    6
}
fn default_degree_window() -> (i64, i64) {
    (-10, 10)
}

impl Default for LimitsSpec {
    fn default() -> Self {
        LimitsSpec {
            max_basis: default_max_basis(),
            max_degree: default_max_degree(),
            max_terms: default_max_terms(),
            i_max: default_i_max(),
            box_bound: default_box(),
            degree_window: default_degree_window(),
        }
    }
}

impl LimitsSpec {
    pub fn gb(&self) -> GbLimits {
        GbLimits {
            max_basis: self.max_basis,
            max_degree: self.max_degree,
            max_terms: self.max_terms,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.max_basis == 0 || self.max_degree <= 0 || self.max_terms == 0 {
            return Err("limits must be positive".into());
        }
        if self.box_bound <= 0 {
            return Err("box must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum Task {
    #[serde(rename = "betti")]
    Betti {
        module: String,
        #[serde(default, rename = "iMax")]
        i_max: Option<usize>,
        #[serde(default, rename = "expectTotals")]
        expect_totals: Option<Vec<usize>>,
    },
    #[serde(rename = "bass")]
    Bass {
        module: String,
        prime: Vec<String>,
        #[serde(default, rename = "iMax")]
        i_max: Option<usize>,
        #[serde(default)]
        expect: Option<Vec<usize>>,
        #[serde(default, rename = "degreeBound")]
        degree_bound: Option<i64>,
        #[serde(default)]
        strict: Option<bool>,
    },
    #[serde(rename = "veronese")]
    Veronese {
        what: String,
        n: u32,
        #[serde(default)]
        source: Option<String>,
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        module: Option<String>,
        #[serde(default)]
        prime: Option<Vec<String>>,
    },
    #[serde(rename = "bass-transfer")]
    BassTransfer {
        module: String,
        n: u32,
        prime: Vec<String>,
        #[serde(default, rename = "iMax")]
        i_max: Option<usize>,
    },
    #[serde(rename = "localcoh")]
    Localcoh {
        gens: Vec<Vec<u32>>,
        rank: usize,
        #[serde(default)]
        n: Option<u32>,
        index: usize,
        #[serde(default, rename = "box")]
        box_bound: Option<i64>,
        #[serde(default, rename = "totalWindow")]
        total_window: Option<(i64, i64)>,
        #[serde(default, rename = "expectCoarse")]
        expect_coarse: Option<BTreeMap<String, usize>>,
        /// Compare both sides of the Veronese (needs n).
        #[serde(default)]
        verify: bool,
    },
    #[serde(rename = "duality-check")]
    DualityCheck {
        module: String,
        #[serde(default, rename = "iMax")]
        i_max: Option<usize>,
    },
    #[serde(rename = "verify-all")]
    VerifyAll {
        #[serde(default, rename = "iMax")]
        i_max: Option<usize>,
    },
}

impl Task {
    pub fn kind(&self) -> &'static str {
        match self {
            Task::Betti { .. } => "betti",
            Task::Bass { .. } => "bass",
            Task::Veronese { .. } => "veronese",
            Task::BassTransfer { .. } => "bass-transfer",
            Task::Localcoh { .. } => "localcoh",
            Task::DualityCheck { .. } => "duality-check",
            Task::VerifyAll { .. } => "verify-all",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TaskReport {
    pub index: usize,
    #[serde(rename = "type")]
    pub kind: String,
    pub status: String,
    pub detail: String,
    pub flags: Vec<String>,
    pub files: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct RunMeta {
    pub schema: u32,
    pub seed: u64,
    #[serde(rename = "iMax")]
    pub i_max: usize,
    #[serde(rename = "maxBasis")]
    pub max_basis: usize,
    #[serde(rename = "maxDegree")]
    pub max_degree: i64,
    #[serde(rename = "maxTerms")]
    pub max_terms: usize,
    #[serde(rename = "box")]
    pub box_bound: i64,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub meta: RunMeta,
    pub status: String,
    pub tasks: Vec<TaskReport>,
}

/// Exit codes of the scenario runner.
pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_SCHEMA: i32 = 4;

struct Context {
    field: Field,
    degree_window: (i64, i64),
    strict: bool,
    rings: BTreeMap<String, GradedRing>,
    module_specs: BTreeMap<String, ModuleSpec>,
    modules: BTreeMap<String, GradedModule>,
    veroneses: BTreeMap<(String, u32), VeroneseRing>,
    limits: GbLimits,
    i_max_default: usize,
    box_default: i64,
    seed: u64,
}

impl Context {
    fn ring(&self, name: &str) -> Result<GradedRing, String> {
        self.rings
            .get(name)
            .cloned()
            .ok_or_else(|| format!("unknown ring `{name}`"))
    }

    fn module(&mut self, name: &str) -> Result<GradedModule, String> {
        if let Some(m) = self.modules.get(name) {
            return Ok(m.clone());
        }
        let spec = self
            .module_specs
            .get(name)
            .ok_or_else(|| format!("unknown module `{name}`"))?;
        let ring = self.ring(&spec.ring)?;
        let base = match spec.kind.as_deref() {
            Some("residue_field") => GradedModule::residue_field(&ring),
            Some("ring") => GradedModule::ring_module(&ring),
            Some(other) => return Err(format!("unknown module kind `{other}`")),
            None => {
                let twists = spec
                    .twists
                    .clone()
                    .ok_or_else(|| format!("module `{name}` needs twists"))?;
                let rows: Vec<Vec<&str>> = spec
                    .matrix
                    .as_ref()
                    .map(|m| m.iter().map(|r| r.iter().map(|s| s.as_str()).collect()).collect())
                    .unwrap_or_else(|| twists.iter().map(|_| Vec::new()).collect());
                let m = GradedModule::from_rows(&ring, twists, &rows)
                    .map_err(|e| format!("module `{name}`: {e}"))?;
                if let Some(st) = &spec.source_twists {
                    if st != m.source_twists() {
                        return Err(format!(
                            "module `{name}`: declared sourceTwists {:?} do not match the computed column degrees {:?}",
                            st,
                            m.source_twists()
                        ));
                    }
                }
                m
            }
        };
        let m = match spec.shift {
            Some(k) => base.shift(k),
            None => base,
        };
        self.modules.insert(name.to_string(), m.clone());
        Ok(m)
    }

    fn veronese(&mut self, source: &str, n: u32) -> Result<VeroneseRing, String> {
        let key = (source.to_string(), n);
        if let Some(v) = self.veroneses.get(&key) {
            return Ok(v.clone());
        }
        let ring = self.ring(source)?;
        let v = veronese::veronese_ring(&ring, n, &self.limits).map_err(|e| e.to_string())?;
        self.veroneses.insert(key, v.clone());
        Ok(v)
    }
}

fn is_resource(e: &CoreError) -> bool {
    matches!(e, CoreError::ResourceLimit { .. })
}

pub struct RunOutcome {
    pub report: RunReport,
    pub exit_code: i32,
}

/// Execute a parsed scenario, writing per-task outputs under `out_dir`.
/// `strict_all` turns on the primality sanity check for every bass task.
pub fn run_scenario(sc: &Scenario, out_dir: &Path, force: bool, strict_all: bool) -> RunOutcome {
    let mut tasks = Vec::new();
    let mut exit = EXIT_OK;
    let meta = RunMeta {
        schema: sc.schema,
        seed: sc.seed,
        i_max: sc.limits.i_max,
        max_basis: sc.limits.max_basis,
        max_degree: sc.limits.max_degree,
        max_terms: sc.limits.max_terms,
        box_bound: sc.limits.box_bound,
    };
    let field = match Field::new(sc.field.characteristic) {
        Ok(f) => f,
        Err(e) => {
            return RunOutcome {
                report: RunReport {
                    meta,
                    status: format!("schema error: {e}"),
                    tasks,
                },
                exit_code: EXIT_SCHEMA,
            }
        }
    };
    let mut ctx = Context {
        field,
        degree_window: sc.limits.degree_window,
        strict: strict_all,
        rings: BTreeMap::new(),
        module_specs: BTreeMap::new(),
        modules: BTreeMap::new(),
        veroneses: BTreeMap::new(),
        limits: sc.limits.gb(),
        i_max_default: sc.limits.i_max,
        box_default: sc.limits.box_bound,
        seed: sc.seed,
    };
    for (name, spec) in &sc.rings {
        let weights = spec
            .weights
            .clone()
            .unwrap_or_else(|| vec![1; spec.variables.len()]);
        let vars: Vec<&str> = spec.variables.iter().map(|s| s.as_str()).collect();
        let texts: Vec<&str> = spec.relations.iter().map(|s| s.as_str()).collect();
        let built = if texts.is_empty() {
            GradedRing::polynomial(ctx.field, &vars, &weights)
        } else {
            GradedRing::quotient(ctx.field, &vars, &weights, &texts)
        };
        match built {
            Ok(r) => {
                ctx.rings.insert(name.clone(), r);
            }
            Err(e) => {
                return RunOutcome {
                    report: RunReport {
                        meta,
                        status: format!("schema error in ring `{name}`: {e}"),
                        tasks,
                    },
                    exit_code: EXIT_SCHEMA,
                }
            }
        }
    }
    for m in &sc.modules {
        ctx.module_specs.insert(m.name.clone(), ModuleSpec {
            name: m.name.clone(),
            ring: m.ring.clone(),
            kind: m.kind.clone(),
            twists: m.twists.clone(),
            matrix: m.matrix.clone(),
            source_twists: m.source_twists.clone(),
            shift: m.shift,
        });
    }
    for (index, task) in sc.tasks.iter().enumerate() {
        let rep = run_task(&mut ctx, index, task, out_dir, force);
        match rep.status.as_str() {
            "mismatch" => exit = exit.max(EXIT_MISMATCH),
            "resource-limit" => exit = exit.max(EXIT_RESOURCE),
            "error" => exit = exit.max(EXIT_SCHEMA),
            _ => {}
        }
        tasks.push(rep);
    }
    let status = match exit {
        EXIT_OK => "pass".to_string(),
        EXIT_MISMATCH => "mismatch".to_string(),
        EXIT_RESOURCE => "resource-limit".to_string(),
        _ => "error".to_string(),
    };
    RunOutcome {
        report: RunReport { meta, status, tasks },
        exit_code: exit,
    }
}

fn task_error(index: usize, kind: &str, e: &str) -> TaskReport {
    TaskReport {
        index,
        kind: kind.to_string(),
        status: "error".to_string(),
        detail: e.to_string(),
        flags: Vec::new(),
        files: Vec::new(),
    }
}

fn core_error(index: usize, kind: &str, e: &CoreError) -> TaskReport {
    TaskReport {
        index,
        kind: kind.to_string(),
        status: if is_resource(e) {
            "resource-limit".to_string()
        } else {
            "error".to_string()
        },
        detail: e.to_string(),
        flags: Vec::new(),
        files: Vec::new(),
    }
}

fn write_json<T: Serialize>(
    out_dir: &Path,
    index: usize,
    kind: &str,
    value: &T,
    force: bool,
    files: &mut Vec<String>,
) -> Result<(), String> {
    let path = tables::out_path(out_dir, index, kind, "json");
    let body = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    tables::write_file(&path, &body, force).map_err(|e| e.to_string())?;
    files.push(path.file_name().unwrap().to_string_lossy().into_owned());
    Ok(())
}

fn write_text(
    out_dir: &Path,
    index: usize,
    kind: &str,
    ext: &str,
    body: &str,
    force: bool,
    files: &mut Vec<String>,
) -> Result<(), String> {
    let path = tables::out_path(out_dir, index, kind, ext);
    tables::write_file(&path, body, force).map_err(|e| e.to_string())?;
    files.push(path.file_name().unwrap().to_string_lossy().into_owned());
    Ok(())
}

fn run_task(ctx: &mut Context, index: usize, task: &Task, out_dir: &Path, force: bool) -> TaskReport {
    let kind = task.kind();
    let mut files = Vec::new();
    let mut flags = Vec::new();
    match task {
        Task::Betti {
            module,
            i_max,
            expect_totals,
        } => {
            let m = match ctx.module(module) {
                Ok(m) => m,
                Err(e) => return task_error(index, kind, &e),
            };
            let im = i_max.unwrap_or(ctx.i_max_default);
            let bt = match resolve::betti_table(&m, im, &ctx.limits) {
                Ok(t) => t,
                Err(e) => return core_error(index, kind, &e),
            };
            let payload = tables::betti_json(&bt);
            if let Err(e) = write_json(out_dir, index, kind, &payload, force, &mut files) {
                return task_error(index, kind, &e);
            }
            if let Err(e) = write_text(out_dir, index, kind, "csv", &tables::betti_csv(&bt), force, &mut files) {
                return task_error(index, kind, &e);
            }
            let (status, detail) = match expect_totals {
                Some(exp) => {
                    let got = bt.totals();
                    if &got == exp {
                        ("pass".to_string(), format!("totals {got:?}"))
                    } else {
                        let first = got
                            .iter()
                            .zip(exp)
                            .enumerate()
                            .find(|(_, (g, e))| g != e)
                            .map(|(i, (g, e))| format!("first mismatch at i={i}: got {g}, expected {e}"))
                            .unwrap_or_else(|| format!("length mismatch: got {got:?}, expected {exp:?}"));
                        ("mismatch".to_string(), first)
                    }
                }
                None => ("computed".to_string(), format!("totals {:?}", bt.totals())),
            };
            TaskReport {
                index,
                kind: kind.to_string(),
                status,
                detail,
                flags,
                files,
            }
        }
        Task::Bass {
            module,
            prime,
            i_max,
            expect,
            degree_bound,
            strict,
        } => {
            let m = match ctx.module(module) {
                Ok(m) => m,
                Err(e) => return task_error(index, kind, &e),
            };
            let ring = m.ring().clone();
            let texts: Vec<&str> = prime.iter().map(|s| s.as_str()).collect();
            let p = match PrimeSpec::parse(&ring, &texts) {
                Ok(p) => p,
                Err(e) => return core_error(index, kind, &e),
            };
            let im = i_max.unwrap_or(ctx.i_max_default);
            let table = if p.is_homogeneous {
                let irr = match p.is_irrelevant(&ctx.limits) {
                    Ok(b) => b,
                    Err(e) => return core_error(index, kind, &e),
                };
                let r = if irr {
                    bass::bass_at_irrelevant(&m, im, &ctx.limits)
                } else {
                    bass::bass_at_graded_prime(
                        &m,
                        &p,
                        im,
                        &ctx.limits,
                        ctx.seed,
                        strict.unwrap_or(ctx.strict),
                    )
                };
                match r {
                    Ok(t) => t,
                    Err(e) => return core_error(index, kind, &e),
                }
            } else {
                // non-homogeneous prime: translate through the homogeneous part
                let bound = degree_bound.unwrap_or(6);
                let star = match bass::star_ideal(&p, bound, 3, &ctx.limits) {
                    Ok(s) => s,
                    Err(e) => return core_error(index, kind, &e),
                };
                flags.extend(star.flags());
                if !star.exact() {
                    flags.push("translation used an uncertified homogeneous part".into());
                }
                let graded = match bass::bass_at_graded_prime(
                    &m,
                    &star.prime,
                    im.saturating_sub(1),
                    &ctx.limits,
                    ctx.seed,
                    strict.unwrap_or(ctx.strict),
                ) {
                    Ok(t) => t,
                    Err(e) => return core_error(index, kind, &e),
                };
                let label: Vec<String> = p.generators.iter().map(|g| ring.poly_string(g)).collect();
                bass::translate_bass(&graded, &format!("({})", label.join(", ")))
            };
            flags.extend(table.flags.clone());
            let payload = tables::bass_json(&table);
            if let Err(e) = write_json(out_dir, index, kind, &payload, force, &mut files) {
                return task_error(index, kind, &e);
            }
            if let Err(e) = write_text(out_dir, index, kind, "csv", &tables::bass_csv(&table), force, &mut files) {
                return task_error(index, kind, &e);
            }
            let (status, detail) = match expect {
                Some(exp) => {
                    let got = table.entry_vec();
                    if &got == exp {
                        ("pass".to_string(), format!("entries {got:?}"))
                    } else {
                        ("mismatch".to_string(), format!("got {got:?}, expected {exp:?}"))
                    }
                }
                None => ("computed".to_string(), format!("entries {:?}", table.entry_vec())),
            };
            TaskReport {
                index,
                kind: kind.to_string(),
                status,
                detail,
                flags,
                files,
            }
        }
        Task::Veronese {
            what,
            n,
            source,
            name,
            module,
            prime,
        } => {
            let src_name = source.clone().unwrap_or_else(|| "R".to_string());
            match what.as_str() {
                "ring" => {
                    let v = match ctx.veronese(&src_name, *n) {
                        Ok(v) => v,
                        Err(e) => return task_error(index, kind, &e),
                    };
                    if let Some(name) = name {
                        ctx.rings.insert(name.clone(), v.presentation.clone());
                    }
                    #[derive(Serialize)]
                    struct VeroneseRingJson {
                        source: String,
                        n: u32,
                        variables: Vec<String>,
                        weights: Vec<u32>,
                        relations: Vec<String>,
                        #[serde(rename = "liftMap")]
                        lift_map: BTreeMap<String, String>,
                    }
                    let pres = &v.presentation;
                    let payload = VeroneseRingJson {
                        source: src_name.clone(),
                        n: *n,
                        variables: pres.var_names().to_vec(),
                        weights: pres.weights().to_vec(),
                        relations: pres
                            .relations()
                            .iter()
                            .map(|r| pres.poly_string(r))
                            .collect(),
                        lift_map: pres
                            .var_names()
                            .iter()
                            .zip(&v.lift_monomials)
                            .map(|(a, m)| (a.clone(), v.source.monomial_string(m)))
                            .collect(),
                    };
                    if let Err(e) = write_json(out_dir, index, kind, &payload, force, &mut files) {
                        return task_error(index, kind, &e);
                    }
                    TaskReport {
                        index,
                        kind: kind.to_string(),
                        status: "computed".to_string(),
                        detail: format!("{} variables, {} relations", pres.nvars(), pres.relations().len()),
                        flags,
                        files,
                    }
                }
                "module" => {
                    let mod_name = match module {
                        Some(m) => m,
                        None => return task_error(index, kind, "veronese module needs `module`"),
                    };
                    let m = match ctx.module(mod_name) {
                        Ok(m) => m,
                        Err(e) => return task_error(index, kind, &e),
                    };
                    let v = match ctx.veronese(&src_name, *n) {
                        Ok(v) => v,
                        Err(e) => return task_error(index, kind, &e),
                    };
                    let mv = match veronese::veronese_module(&m, &v, &ctx.limits) {
                        Ok(mv) => mv,
                        Err(e) => return core_error(index, kind, &e),
                    };
                    #[derive(Serialize)]
                    struct VeroneseModuleJson {
                        twists: Vec<i64>,
                        matrix: Vec<Vec<String>>,
                        #[serde(rename = "sourceTwists")]
                        source_twists: Vec<i64>,
                        #[serde(rename = "generatorLifts")]
                        generator_lifts: Vec<String>,
                    }
                    let pres = &v.presentation;
                    let val = &mv.value;
                    let payload = VeroneseModuleJson {
                        twists: val.target_twists().to_vec(),
                        matrix: (0..val.ngens())
                            .map(|r| {
                                val.columns()
                                    .iter()
                                    .map(|c| pres.poly_string(&c.comps[r]))
                                    .collect()
                            })
                            .collect(),
                        source_twists: val.source_twists().to_vec(),
                        generator_lifts: mv
                            .generator_lifts
                            .iter()
                            .map(|(c, mono)| format!("e{} * {}", c, v.source.monomial_string(mono)))
                            .collect(),
                    };
                    if let Err(e) = write_json(out_dir, index, kind, &payload, force, &mut files) {
                        return task_error(index, kind, &e);
                    }
                    TaskReport {
                        index,
                        kind: kind.to_string(),
                        status: "computed".to_string(),
                        detail: format!("{} generators, {} relations", val.ngens(), val.columns().len()),
                        flags,
                        files,
                    }
                }
                "contract" => {
                    let pgens = match prime {
                        Some(p) => p,
                        None => return task_error(index, kind, "veronese contract needs `prime`"),
                    };
                    let ring = match ctx.ring(&src_name) {
                        Ok(r) => r,
                        Err(e) => return task_error(index, kind, &e),
                    };
                    let v = match ctx.veronese(&src_name, *n) {
                        Ok(v) => v,
                        Err(e) => return task_error(index, kind, &e),
                    };
                    let gens = match pgens
                        .iter()
                        .map(|t| ring.parse(t))
                        .collect::<Result<Vec<_>, _>>()
                    {
                        Ok(g) => g,
                        Err(e) => return core_error(index, kind, &e),
                    };
                    let out = match veronese::contract_prime_gens(&gens, &v, &ctx.limits) {
                        Ok(o) => o,
                        Err(e) => return core_error(index, kind, &e),
                    };
                    #[derive(Serialize)]
                    struct ContractJson {
                        generators: Vec<String>,
                    }
                    let payload = ContractJson {
                        generators: out.iter().map(|g| v.presentation.poly_string(g)).collect(),
                    };
                    if let Err(e) = write_json(out_dir, index, kind, &payload, force, &mut files) {
                        return task_error(index, kind, &e);
                    }
                    TaskReport {
                        index,
                        kind: kind.to_string(),
                        status: "computed".to_string(),
                        detail: format!("{} generators", out.len()),
                        flags,
                        files,
                    }
                }
                other => task_error(index, kind, &format!("unknown veronese task `{other}`")),
            }
        }
        Task::BassTransfer {
            module,
            n,
            prime,
            i_max,
        } => {
            let m = match ctx.module(module) {
                Ok(m) => m,
                Err(e) => return task_error(index, kind, &e),
            };
            let ring = m.ring().clone();
            let texts: Vec<&str> = prime.iter().map(|s| s.as_str()).collect();
            let p = match PrimeSpec::parse(&ring, &texts) {
                Ok(p) => p,
                Err(e) => return core_error(index, kind, &e),
            };
            let im = i_max.unwrap_or(ctx.i_max_default.min(2));
            let rep = match bass::verify_bass_transfer(&m, *n, &p, im, &ctx.limits, ctx.seed) {
                Ok(r) => r,
                Err(e) => return core_error(index, kind, &e),
            };
            flags.extend(rep.left.flags.clone());
            flags.extend(rep.right.flags.clone());
            #[derive(Serialize)]
            struct TransferJson {
                equal: bool,
                left: tables::BassJson,
                right: tables::BassJson,
                #[serde(rename = "firstMismatch")]
                first_mismatch: Option<(usize, usize, usize)>,
            }
            let payload = TransferJson {
                equal: rep.equal,
                left: tables::bass_json(&rep.left),
                right: tables::bass_json(&rep.right),
                first_mismatch: rep.first_mismatch,
            };
            if let Err(e) = write_json(out_dir, index, kind, &payload, force, &mut files) {
                return task_error(index, kind, &e);
            }
            TaskReport {
                index,
                kind: kind.to_string(),
                status: if rep.equal { "pass" } else { "mismatch" }.to_string(),
                detail: match rep.first_mismatch {
                    None => format!("tables agree: {:?}", rep.left.entry_vec()),
                    Some((i, l, r)) => format!("first mismatch at i={i}: {l} vs {r}"),
                },
                flags,
                files,
            }
        }
        Task::Localcoh {
            gens,
            rank,
            n,
            index: coh_index,
            box_bound,
            total_window,
            expect_coarse,
            verify,
        } => {
            let bb = box_bound.unwrap_or(ctx.box_default);
            if *verify {
                let nn = match n {
                    Some(n) => *n,
                    None => return task_error(index, kind, "verify needs n"),
                };
                let rep = match localcoh::verify_veronese_localcoh(
                    gens, *rank, nn, *coh_index, bb, &ctx.field,
                ) {
                    Ok(r) => r,
                    Err(e) => return core_error(index, kind, &e),
                };
                if rep.ambient_boundary {
                    flags.push("ambient boundaryFlag".into());
                }
                if rep.veronese_boundary {
                    flags.push("veronese boundaryFlag".into());
                }
                #[derive(Serialize)]
                struct VerifyJson {
                    pass: bool,
                    mismatches: Vec<(i64, usize, usize)>,
                    #[serde(rename = "ambientCoarse")]
                    ambient_coarse: BTreeMap<String, usize>,
                    #[serde(rename = "veroneseCoarse")]
                    veronese_coarse: BTreeMap<String, usize>,
                    #[serde(rename = "boundaryFlags")]
                    boundary: (bool, bool),
                }
                let payload = VerifyJson {
                    pass: rep.pass,
                    mismatches: rep.mismatches.clone(),
                    ambient_coarse: rep
                        .ambient_coarse
                        .iter()
                        .map(|(t, d)| (t.to_string(), *d))
                        .collect(),
                    veronese_coarse: rep
                        .veronese_coarse
                        .iter()
                        .map(|(t, d)| (t.to_string(), *d))
                        .collect(),
                    boundary: (rep.ambient_boundary, rep.veronese_boundary),
                };
                if let Err(e) = write_json(out_dir, index, kind, &payload, force, &mut files) {
                    return task_error(index, kind, &e);
                }
                return TaskReport {
                    index,
                    kind: kind.to_string(),
                    status: if rep.pass { "pass" } else { "mismatch" }.to_string(),
                    detail: if rep.pass {
                        "both sides agree on the window".to_string()
                    } else {
                        format!("mismatches: {:?}", rep.mismatches)
                    },
                    flags,
                    files,
                };
            }
            let s = match n {
                None => localcoh::SemigroupRing::full(*rank),
                Some(n) => localcoh::SemigroupRing::veronese(*rank, *n),
            };
            let window = total_window.or(Some(ctx.degree_window));
            let w = match localcoh::cech_window(&s, gens, *coh_index, bb, window, &ctx.field)
            {
                Ok(w) => w,
                Err(e) => return core_error(index, kind, &e),
            };
            if w.boundary_flag {
                flags.push("boundaryFlag: coarse sums may be incomplete".into());
            }
            let payload = tables::cech_json(&w);
            if let Err(e) = write_json(out_dir, index, kind, &payload, force, &mut files) {
                return task_error(index, kind, &e);
            }
            let (status, detail) = match expect_coarse {
                Some(exp) => {
                    let got: BTreeMap<String, usize> =
                        w.coarse.iter().map(|(t, d)| (t.to_string(), *d)).collect();
                    let mut bad = None;
                    for (t, e) in exp {
                        let g = got.get(t).copied().unwrap_or(0);
                        if g != *e {
                            bad = Some(format!("coarse at {t}: got {g}, expected {e}"));
                            break;
                        }
                    }
                    match bad {
                        None => ("pass".to_string(), "coarse dims as expected".to_string()),
                        Some(msg) => ("mismatch".to_string(), msg),
                    }
                }
                None => (
                    "computed".to_string(),
                    format!("{} nonzero multidegrees", w.dims.len()),
                ),
            };
            TaskReport {
                index,
                kind: kind.to_string(),
                status,
                detail,
                flags,
                files,
            }
        }
        Task::DualityCheck { module, i_max } => {
            let m = match ctx.module(module) {
                Ok(m) => m,
                Err(e) => return task_error(index, kind, &e),
            };
            let im = i_max.unwrap_or(ctx.i_max_default.min(3));
            match duality_check(&m, im, &ctx.limits) {
                Ok(None) => TaskReport {
                    index,
                    kind: kind.to_string(),
                    status: "pass".to_string(),
                    detail: format!("betti/bass identity holds through i = {im}"),
                    flags,
                    files,
                },
                Ok(Some(msg)) => TaskReport {
                    index,
                    kind: kind.to_string(),
                    status: "mismatch".to_string(),
                    detail: msg,
                    flags,
                    files,
                },
                Err(e) => core_error(index, kind, &e),
            }
        }
        Task::VerifyAll { i_max } => {
            let im = i_max.unwrap_or(ctx.i_max_default.min(3));
            let names: Vec<String> = ctx.module_specs.keys().cloned().collect();
            let mut checked = 0;
            for name in names {
                let m = match ctx.module(&name) {
                    Ok(m) => m,
                    Err(e) => return task_error(index, kind, &e),
                };
                let fl = match m.is_finite_length(&ctx.limits) {
                    Ok(b) => b,
                    Err(e) => return core_error(index, kind, &e),
                };
                if !fl {
                    continue;
                }
                match duality_check(&m, im, &ctx.limits) {
                    Ok(None) => checked += 1,
                    Ok(Some(msg)) => {
                        return TaskReport {
                            index,
                            kind: kind.to_string(),
                            status: "mismatch".to_string(),
                            detail: format!("module `{name}`: {msg}"),
                            flags,
                            files,
                        }
                    }
                    Err(e) => return core_error(index, kind, &e),
                }
            }
            TaskReport {
                index,
                kind: kind.to_string(),
                status: "pass".to_string(),
                detail: format!("duality identity verified on {checked} finite-length modules"),
                flags,
                files,
            }
        }
    }
}

/// Betti numbers of M against the refined Bass numbers of its dual; None
/// when they agree, otherwise the first discrepancy.
fn duality_check(
    m: &GradedModule,
    i_max: usize,
    limits: &GbLimits,
) -> Result<Option<String>, CoreError> {
    if !m.is_finite_length(limits)? {
        return Err(CoreError::NotFiniteLength(
            "duality check needs a finite-length module".into(),
        ));
    }
    let bt = resolve::betti_table(m, i_max, limits)?;
    let dual = m.matlis_dual(limits)?;
    let bass = bass::bass_at_irrelevant(&dual, i_max, limits)?;
    let mut keys: Vec<(usize, i64)> = bt.entries.keys().cloned().collect();
    keys.extend(bass.refined.keys().cloned());
    keys.sort();
    keys.dedup();
    for (i, z) in keys {
        if i > i_max {
            continue;
        }
        let b = bt.get(i, z);
        let mu = bass.refined_at(i, z);
        if b != mu {
            return Ok(Some(format!(
                "betti({i},{z}) = {b} but refined bass of the dual is {mu}"
            )));
        }
    }
    Ok(None)
}
