//! Per-region metric dumps.

use std::fs;
use std::path::Path;

use kinopax_core::decomposition::Decomposition;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRow {
    pub region: usize,
    pub coords: Vec<u32>,
    pub n_valid: u32,
    pub n_invalid: u32,
    pub cov: u32,
    pub free_vol: f64,
    pub score: f64,
    pub p_accept: f64,
    pub available: bool,
}

/// Every region that has seen at least one propagation outcome or hosts a node.
pub fn collect(dec: &Decomposition) -> Vec<RegionRow> {
    (0..dec.region_count())
        .filter_map(|r| {
            let s = dec.snapshot(r as _);
            let touched = s.available || s.n_valid + s.n_invalid > 0;
            touched.then(|| RegionRow {
                region: r,
                coords: dec.region_coords(r as _),
                n_valid: s.n_valid,
                n_invalid: s.n_invalid,
                cov: s.cov,
                free_vol: s.free_vol,
                score: s.score,
                p_accept: s.p_accept,
                available: s.available,
            })
        })
        .collect()
}

pub fn to_csv(rows: &[RegionRow]) -> String {
    let mut out = String::from("region,coords,n_valid,n_invalid,cov,free_vol,score,p_accept,available\n");
    for r in rows {
        let coords: Vec<String> = r.coords.iter().map(u32::to_string).collect();
        out.push_str(&format!(
            "{},{},{},{},{},{:e},{:e},{:e},{}\n",
            r.region,
            coords.join(":"),
            r.n_valid,
            r.n_invalid,
            r.cov,
            r.free_vol,
            r.score,
            r.p_accept,
            r.available
        ));
    }
    out
}

pub fn write_csv(rows: &[RegionRow], path: &Path) -> Result<()> {
    fs::write(path, to_csv(rows)).map_err(|e| CliError::io(path, e))
}
