//! vbass: exact graded commutative algebra from the command line.
//!
//! `vbass run scenario.json [--out DIR] [--force] [--strict] [--seed N]`
//! executes a scenario file and writes deterministic JSON/CSV tables.
//! One-shot forms (`betti`, `bass`, `veronese`, `localcoh`) mirror the
//! scenario tasks and print JSON to stdout. The environment variable
//! `VBASS_LIMITS` may carry a JSON fragment overriding limits.

mod scenario;
mod tables;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use scenario::{LimitsSpec, RunOutcome, Scenario};
use vbass_core::bass::{self, PrimeSpec};
use vbass_core::error::Error as CoreError;
use vbass_core::field::Field;
use vbass_core::gmod::GradedModule;
use vbass_core::localcoh;
use vbass_core::resolve;
use vbass_core::ring::GradedRing;
use vbass_core::veronese;

const USAGE: &str = "\
usage:
  vbass run <scenario.json> [--out DIR] [--force] [--strict] [--seed N]
  vbass betti    --vars x,y [--weights 1,1] [--char P] [--relations \"f; g\"]
                 (--module k|ring | --twists t,.. --matrix \"a,b; c,d\") --imax N
  vbass bass     <ring/module flags> --prime \"f; g\" --imax N [--strict] [--seed N]
  vbass veronese (ring|module|contract) <ring/module flags> --n N [--prime \"f; g\"]
  vbass localcoh --gens \"1 0; 0 1\" --rank E [--n N] --i I [--box B]
                 [--total-window lo:hi] [--verify]

exit codes: 0 ok, 2 verification mismatch, 3 resource limit, 4 schema error.";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        eprintln!("{USAGE}");
        return ExitCode::from(4);
    }
    let code = match args[0].as_str() {
        "run" => cmd_run(&args[1..]),
        "betti" => cmd_betti(&args[1..]),
        "bass" => cmd_bass(&args[1..]),
        "veronese" => cmd_veronese(&args[1..]),
        "localcoh" => cmd_localcoh(&args[1..]),
        "--help" | "-h" | "help" => {
            println!("{USAGE}");
            0
        }
        other => {
            eprintln!("unknown command `{other}`\n{USAGE}");
            4
        }
    };
    ExitCode::from(code as u8)
}

// ---- shared flag parsing -----------------------------------------------------

struct Flags {
    map: BTreeMap<String, String>,
    bools: Vec<String>,
    positional: Vec<String>,
}

fn parse_flags(args: &[String], bool_flags: &[&str]) -> Result<Flags, String> {
    let mut map = BTreeMap::new();
    let mut bools = Vec::new();
    let mut positional = Vec::new();
    let mut i = 0;
    while i < args.len() {
        let a = &args[i];
        if let Some(name) = a.strip_prefix("--") {
            if bool_flags.contains(&name) {
                bools.push(name.to_string());
                i += 1;
            } else {
                let val = args
                    .get(i + 1)
                    .ok_or_else(|| format!("flag --{name} needs a value"))?;
                map.insert(name.to_string(), val.clone());
                i += 2;
            }
        } else {
            positional.push(a.clone());
            i += 1;
        }
    }
    Ok(Flags {
        map,
        bools,
        positional,
    })
}

impl Flags {
    fn get(&self, name: &str) -> Option<&str> {
        self.map.get(name).map(|s| s.as_str())
    }
    fn has(&self, name: &str) -> bool {
        self.bools.iter().any(|b| b == name)
    }
}

fn env_limits(mut limits: LimitsSpec) -> Result<LimitsSpec, String> {
    if let Ok(frag) = std::env::var("VBASS_LIMITS") {
        if !frag.trim().is_empty() {
            let patch: serde_json::Value =
                serde_json::from_str(&frag).map_err(|e| format!("VBASS_LIMITS: {e}"))?;
            let obj = patch
                .as_object()
                .ok_or("VBASS_LIMITS must be a JSON object")?;
            for (k, v) in obj {
                match (k.as_str(), v.as_u64(), v.as_i64()) {
                    ("maxBasis", Some(n), _) => limits.max_basis = n as usize,
                    ("maxDegree", _, Some(n)) => limits.max_degree = n,
                    ("maxTerms", Some(n), _) => limits.max_terms = n as usize,
                    ("iMax", Some(n), _) => limits.i_max = n as usize,
                    ("box", _, Some(n)) => limits.box_bound = n,
                    _ => return Err(format!("VBASS_LIMITS: unknown or malformed key `{k}`")),
                }
            }
        }
    }
    Ok(limits)
}

// ---- run ----------------------------------------------------------------------

fn cmd_run(args: &[String]) -> i32 {
    let flags = match parse_flags(args, &["force", "strict"]) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let path = match flags.positional.first() {
        Some(p) => p.clone(),
        None => {
            eprintln!("run needs a scenario file\n{USAGE}");
            return 4;
        }
    };
    let body = match std::fs::read_to_string(&path) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("cannot read {path}: {e}");
            return 4;
        }
    };
    let mut sc: Scenario = match serde_json::from_str(&body) {
        Ok(s) => s,
        Err(e) => {
            eprintln!(
                "schema error in {path}: {e} (line {}, column {})",
                e.line(),
                e.column()
            );
            return 4;
        }
    };
    if sc.schema != 1 {
        eprintln!("unsupported schema version {} (expected 1)", sc.schema);
        return 4;
    }
    sc.limits = match env_limits(sc.limits) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    if let Err(e) = sc.limits.validate() {
        eprintln!("schema error: {e}");
        return 4;
    }
    if let Some(seed) = flags.get("seed") {
        match seed.parse() {
            Ok(s) => sc.seed = s,
            Err(_) => {
                eprintln!("--seed needs an integer");
                return 4;
            }
        }
    }
    let out_dir = PathBuf::from(flags.get("out").unwrap_or("vbass-out"));
    let force = flags.has("force");
    let strict = flags.has("strict");
    let RunOutcome { report, exit_code } = scenario::run_scenario(&sc, &out_dir, force, strict);
    let report_json = serde_json::to_string_pretty(&report).expect("report serializes");
    let report_path = out_dir.join("report.json");
    if let Err(e) = tables::write_file(&report_path, &report_json, force) {
        eprintln!("cannot write report: {e}");
        return 1;
    }
    println!("{report_json}");
    exit_code
}

// ---- one-shot helpers ----------------------------------------------------------

fn ring_from_flags(flags: &Flags) -> Result<GradedRing, String> {
    let vars_s = flags.get("vars").ok_or("need --vars")?;
    let vars: Vec<&str> = vars_s.split(',').map(|s| s.trim()).collect();
    let weights: Vec<u32> = match flags.get("weights") {
        Some(w) => w
            .split(',')
            .map(|s| s.trim().parse().map_err(|_| format!("bad weight `{s}`")))
            .collect::<Result<_, _>>()?,
        None => vec![1; vars.len()],
    };
    let ch: u32 = match flags.get("char") {
        Some(c) => c.parse().map_err(|_| "bad --char".to_string())?,
        None => 0,
    };
    let field = Field::new(ch).map_err(|e| e.to_string())?;
    match flags.get("relations") {
        None => GradedRing::polynomial(field, &vars, &weights).map_err(|e| e.to_string()),
        Some(rels) => {
            let texts: Vec<&str> = rels
                .split(';')
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .collect();
            GradedRing::quotient(field, &vars, &weights, &texts).map_err(|e| e.to_string())
        }
    }
}

fn module_from_flags(flags: &Flags, ring: &GradedRing) -> Result<GradedModule, String> {
    match flags.get("module") {
        Some("k") => Ok(GradedModule::residue_field(ring)),
        Some("ring") => Ok(GradedModule::ring_module(ring)),
        Some(other) => Err(format!(
            "unknown module `{other}` (use k, ring, or --twists/--matrix)"
        )),
        None => {
            let twists: Vec<i64> = flags
                .get("twists")
                .ok_or("need --module or --twists")?
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| format!("bad twist `{s}`")))
                .collect::<Result<_, _>>()?;
            let rows: Vec<Vec<&str>> = match flags.get("matrix") {
                None => twists.iter().map(|_| Vec::new()).collect(),
                Some(m) => m
                    .split(';')
                    .map(|row| row.split(',').map(|s| s.trim()).collect())
                    .collect(),
            };
            let m = GradedModule::from_rows(ring, twists, &rows).map_err(|e| e.to_string())?;
            Ok(match flags.get("shift") {
                Some(k) => m.shift(k.parse().map_err(|_| "bad --shift".to_string())?),
                None => m,
            })
        }
    }
}

fn exit_for(e: &CoreError) -> i32 {
    if matches!(e, CoreError::ResourceLimit { .. }) {
        3
    } else {
        1
    }
}

fn oneshot_limits() -> Result<LimitsSpec, String> {
    env_limits(LimitsSpec::default())
}

fn cmd_betti(args: &[String]) -> i32 {
    let flags = match parse_flags(args, &[]) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let limits = match oneshot_limits() {
        Ok(l) => l,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let ring = match ring_from_flags(&flags) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let m = match module_from_flags(&flags, &ring) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let i_max = flags
        .get("imax")
        .and_then(|s| s.parse().ok())
        .unwrap_or(limits.i_max);
    match resolve::betti_table(&m, i_max, &limits.gb()) {
        Ok(bt) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&tables::betti_json(&bt)).unwrap()
            );
            0
        }
        Err(e) => {
            eprintln!("{e}");
            exit_for(&e)
        }
    }
}

fn cmd_bass(args: &[String]) -> i32 {
    let flags = match parse_flags(args, &["strict"]) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let limits = match oneshot_limits() {
        Ok(l) => l,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let ring = match ring_from_flags(&flags) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let m = match module_from_flags(&flags, &ring) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let texts: Vec<&str> = match flags.get("prime") {
        Some(p) => p
            .split(';')
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .collect(),
        None => {
            eprintln!("need --prime");
            return 4;
        }
    };
    let p = match PrimeSpec::parse(&ring, &texts) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let i_max = flags
        .get("imax")
        .and_then(|s| s.parse().ok())
        .unwrap_or(limits.i_max);
    let seed = flags.get("seed").and_then(|s| s.parse().ok()).unwrap_or(0u64);
    let strict = flags.has("strict");
    let result = if p.is_homogeneous {
        match p.is_irrelevant(&limits.gb()) {
            Ok(true) => bass::bass_at_irrelevant(&m, i_max, &limits.gb()),
            Ok(false) => bass::bass_at_graded_prime(&m, &p, i_max, &limits.gb(), seed, strict),
            Err(e) => Err(e),
        }
    } else {
        bass::star_ideal(&p, 6, 3, &limits.gb()).and_then(|star| {
            bass::bass_at_graded_prime(
                &m,
                &star.prime,
                i_max.saturating_sub(1),
                &limits.gb(),
                seed,
                strict,
            )
            .map(|graded| {
                let mut t = bass::translate_bass(&graded, "(non-homogeneous prime)");
                t.flags.extend(star.flags());
                t
            })
        })
    };
    match result {
        Ok(t) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&tables::bass_json(&t)).unwrap()
            );
            0
        }
        Err(e) => {
            eprintln!("{e}");
            exit_for(&e)
        }
    }
}

fn cmd_veronese(args: &[String]) -> i32 {
    let flags = match parse_flags(args, &[]) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let what = match flags.positional.first().map(|s| s.as_str()) {
        Some(w @ ("ring" | "module" | "contract")) => w.to_string(),
        _ => {
            eprintln!("veronese needs one of: ring, module, contract");
            return 4;
        }
    };
    let limits = match oneshot_limits() {
        Ok(l) => l,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let ring = match ring_from_flags(&flags) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let n: u32 = match flags.get("n").and_then(|s| s.parse().ok()) {
        Some(n) => n,
        None => {
            eprintln!("need --n");
            return 4;
        }
    };
    let v = match veronese::veronese_ring(&ring, n, &limits.gb()) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("{e}");
            return exit_for(&e);
        }
    };
    match what.as_str() {
        "ring" => {
            let pres = &v.presentation;
            let out = serde_json::json!({
                "variables": pres.var_names(),
                "weights": pres.weights(),
                "relations": pres.relations().iter().map(|r| pres.poly_string(r)).collect::<Vec<_>>(),
                "liftMap": pres.var_names().iter().zip(&v.lift_monomials)
                    .map(|(a, m)| (a.clone(), v.source.monomial_string(m)))
                    .collect::<BTreeMap<_,_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            0
        }
        "module" => {
            let m = match module_from_flags(&flags, &ring) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("{e}");
                    return 4;
                }
            };
            match veronese::veronese_module(&m, &v, &limits.gb()) {
                Ok(mv) => {
                    let pres = &v.presentation;
                    let val = &mv.value;
                    let matrix: Vec<Vec<String>> = (0..val.ngens())
                        .map(|r| {
                            val.columns()
                                .iter()
                                .map(|c| pres.poly_string(&c.comps[r]))
                                .collect()
                        })
                        .collect();
                    let out = serde_json::json!({
                        "twists": val.target_twists(),
                        "matrix": matrix,
                        "sourceTwists": val.source_twists(),
                    });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                    0
                }
                Err(e) => {
                    eprintln!("{e}");
                    exit_for(&e)
                }
            }
        }
        "contract" => {
            let texts: Vec<&str> = match flags.get("prime") {
                Some(p) => p
                    .split(';')
                    .map(|s| s.trim())
                    .filter(|s| !s.is_empty())
                    .collect(),
                None => {
                    eprintln!("need --prime");
                    return 4;
                }
            };
            let gens = match texts
                .iter()
                .map(|t| ring.parse(t))
                .collect::<Result<Vec<_>, _>>()
            {
                Ok(g) => g,
                Err(e) => {
                    eprintln!("{e}");
                    return 4;
                }
            };
            match veronese::contract_prime_gens(&gens, &v, &limits.gb()) {
                Ok(out) => {
                    let g: Vec<String> =
                        out.iter().map(|p| v.presentation.poly_string(p)).collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&serde_json::json!({ "generators": g }))
                            .unwrap()
                    );
                    0
                }
                Err(e) => {
                    eprintln!("{e}");
                    exit_for(&e)
                }
            }
        }
        _ => unreachable!(),
    }
}

fn cmd_localcoh(args: &[String]) -> i32 {
    let flags = match parse_flags(args, &["verify"]) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let limits = match oneshot_limits() {
        Ok(l) => l,
        Err(e) => {
            eprintln!("{e}");
            return 4;
        }
    };
    let gens: Vec<Vec<u32>> = match flags.get("gens") {
        Some(g) => {
            let mut out = Vec::new();
            for part in g.split(';') {
                let v: Result<Vec<u32>, _> = part
                    .split_whitespace()
                    .map(|s| s.parse().map_err(|_| format!("bad exponent `{s}`")))
                    .collect();
                match v {
                    Ok(v) if !v.is_empty() => out.push(v),
                    Ok(_) => {}
                    Err(e) => {
                        eprintln!("{e}");
                        return 4;
                    }
                }
            }
            out
        }
        None => {
            eprintln!("need --gens");
            return 4;
        }
    };
    let rank: usize = match flags.get("rank").and_then(|s| s.parse().ok()) {
        Some(r) => r,
        None => {
            eprintln!("need --rank");
            return 4;
        }
    };
    let index: usize = match flags.get("i").and_then(|s| s.parse().ok()) {
        Some(i) => i,
        None => {
            eprintln!("need --i");
            return 4;
        }
    };
    let n: Option<u32> = flags.get("n").and_then(|s| s.parse().ok());
    let box_bound: i64 = flags
        .get("box")
        .and_then(|s| s.parse().ok())
        .unwrap_or(limits.box_bound);
    let total_window: Option<(i64, i64)> = match flags.get("total-window") {
        None => None,
        Some(tw) => {
            let parts: Vec<&str> = tw.split(':').collect();
            match (
                parts.first().and_then(|s| s.parse().ok()),
                parts.get(1).and_then(|s| s.parse().ok()),
            ) {
                (Some(lo), Some(hi)) => Some((lo, hi)),
                _ => {
                    eprintln!("bad --total-window (want lo:hi)");
                    return 4;
                }
            }
        }
    };
    if flags.has("verify") {
        let n = match n {
            Some(n) => n,
            None => {
                eprintln!("--verify needs --n");
                return 4;
            }
        };
        match localcoh::verify_veronese_localcoh(
            &gens,
            rank,
            n,
            index,
            box_bound,
            &Field::Rationals,
        ) {
            Ok(rep) => {
                let out = serde_json::json!({
                    "pass": rep.pass,
                    "mismatches": rep.mismatches,
                    "ambientCoarse": rep.ambient_coarse.iter().map(|(t,d)| (t.to_string(), *d)).collect::<BTreeMap<_,_>>(),
                    "veroneseCoarse": rep.veronese_coarse.iter().map(|(t,d)| (t.to_string(), *d)).collect::<BTreeMap<_,_>>(),
                    "boundaryFlags": [rep.ambient_boundary, rep.veronese_boundary],
                });
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
                if rep.pass {
                    0
                } else {
                    2
                }
            }
            Err(e) => {
                eprintln!("{e}");
                exit_for(&e)
            }
        }
    } else {
        let s = match n {
            None => localcoh::SemigroupRing::full(rank),
            Some(n) => localcoh::SemigroupRing::veronese(rank, n),
        };
        match localcoh::cech_window(&s, &gens, index, box_bound, total_window, &Field::Rationals) {
            Ok(w) => {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&tables::cech_json(&w)).unwrap()
                );
                0
            }
            Err(e) => {
                eprintln!("{e}");
                exit_for(&e)
            }
        }
    }
}
