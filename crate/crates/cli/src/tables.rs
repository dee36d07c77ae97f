//! Deterministic table emission: JSON always, CSV for Betti and Bass
//! tables. Key ordering is stable everywhere (BTree maps and fixed field
//! order), so identical inputs produce bit-identical files.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use vbass_core::bass::BassTable;
use vbass_core::localcoh::CechWindow;
use vbass_core::resolve::BettiTable;

#[derive(Debug, Serialize)]
pub struct BettiJson {
    #[serde(rename = "iMax")]
    pub i_max: usize,
    pub totals: Vec<usize>,
    /// "i:z" -> count
    pub entries: BTreeMap<String, usize>,
}

pub fn betti_json(t: &BettiTable) -> BettiJson {
    BettiJson {
        i_max: t.i_max,
        totals: t.totals(),
        entries: t
            .entries
            .iter()
            .map(|((i, z), c)| (format!("{i}:{z}"), *c))
            .collect(),
    }
}

pub fn betti_csv(t: &BettiTable) -> String {
    let mut out = String::from("i,total,z:count...\n");
    for i in 0..=t.i_max {
        let mut row = format!("{i},{}", t.total(i));
        for ((bi, z), c) in &t.entries {
            if *bi == i {
                row.push_str(&format!(",{z}:{c}"));
            }
        }
        row.push('\n');
        out.push_str(&row);
    }
    out
}

#[derive(Debug, Serialize)]
pub struct PrimeJson {
    pub label: String,
}

#[derive(Debug, Serialize)]
pub struct BassJson {
    pub prime: PrimeJson,
    #[serde(rename = "iMax")]
    pub i_max: usize,
    pub entries: BTreeMap<String, usize>,
    pub refined: BTreeMap<String, usize>,
    pub flags: Vec<String>,
}

pub fn bass_json(t: &BassTable) -> BassJson {
    BassJson {
        prime: PrimeJson {
            label: t.prime_label.clone(),
        },
        i_max: t.i_max,
        entries: t.entries.iter().map(|(i, c)| (i.to_string(), *c)).collect(),
        refined: t
            .refined
            .iter()
            .map(|((i, z), c)| (format!("{i}:{z}"), *c))
            .collect(),
        flags: t.flags.clone(),
    }
}

pub fn bass_csv(t: &BassTable) -> String {
    let mut out = String::from("i,total,z:count...\n");
    for i in 0..=t.i_max {
        let mut row = format!("{i},{}", t.entry(i));
        for ((bi, z), c) in &t.refined {
            if *bi == i {
                row.push_str(&format!(",{z}:{c}"));
            }
        }
        row.push('\n');
        out.push_str(&row);
    }
    out
}

#[derive(Debug, Serialize)]
pub struct CechJson {
    pub gens: Vec<Vec<u32>>,
    pub index: usize,
    #[serde(rename = "box")]
    pub box_bound: i64,
    /// multidegree "a,b" -> dim
    pub dims: BTreeMap<String, usize>,
    /// total degree -> dim
    pub coarse: BTreeMap<String, usize>,
    #[serde(rename = "boundaryFlag")]
    pub boundary_flag: bool,
}

pub fn cech_json(w: &CechWindow) -> CechJson {
    CechJson {
        gens: w.gens.clone(),
        index: w.index,
        box_bound: w.box_bound,
        dims: w
            .dims
            .iter()
            .map(|(a, d)| {
                let key = a
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                (key, *d)
            })
            .collect(),
        coarse: w.coarse.iter().map(|(t, d)| (t.to_string(), *d)).collect(),
        boundary_flag: w.boundary_flag,
    }
}

/// Write a file, refusing to overwrite unless forced.
pub fn write_file(path: &Path, contents: &str, force: bool) -> std::io::Result<()> {
    if path.exists() && !force {
        return Err(std::io::Error::new(
            std::io::ErrorKind::AlreadyExists,
            format!("refusing to overwrite {} (use --force)", path.display()),
        ));
    }
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut f = fs::File::create(path)?;
    f.write_all(contents.as_bytes())
}

pub fn out_path(dir: &Path, index: usize, kind: &str, ext: &str) -> PathBuf {
    dir.join(format!("task_{index:02}_{kind}.{ext}"))
}
