//! Helpers shared by the integration suites.

use forbcfg::config::Configuration;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[allow(dead_code)]
pub fn cfg(rows: &[&str]) -> Configuration {
    Configuration::from_dense(rows).unwrap()
}

/// Random configuration with 1..=max_rows rows, 1..=max_cols column
/// instances, per-column multiplicity capped at `max_mult`.
#[allow(dead_code)]
pub fn random_config(
    rng: &mut ChaCha8Rng,
    max_rows: usize,
    max_cols: usize,
    max_mult: u8,
) -> Configuration {
    let rows = rng.random_range(1..=max_rows);
    let n = rng.random_range(1..=max_cols);
    let mut mult = vec![0u8; 1 << rows];
    let mut placed = 0;
    while placed < n {
        let alpha = rng.random_range(0..1u32 << rows) as usize;
        if mult[alpha] < max_mult {
            mult[alpha] += 1;
            placed += 1;
        } else if mult.iter().all(|&c| c >= max_mult) {
            break;
        }
    }
    Configuration::new(rows, mult).unwrap()
}

/// All configurations on `rows` rows with exactly `n` column instances and
/// multiplicities at most `max_mult`.
#[allow(dead_code)]
pub fn enumerate_configs(rows: usize, n: usize, max_mult: u8) -> Vec<Configuration> {
    let mut out = Vec::new();
    let types = 1u32 << rows;
    let mut prefix: Vec<u32> = Vec::new();
    enumerate_rec(types, n, max_mult, &mut prefix, &mut out, rows);
    out
}

fn enumerate_rec(
    types: u32,
    remaining: usize,
    max_mult: u8,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Configuration>,
    rows: usize,
) {
    if remaining == 0 {
        let pairs: Vec<(u32, u8)> = prefix.iter().map(|&c| (c, 1)).collect();
        let cfg = Configuration::from_columns(rows, &pairs).unwrap();
        if cfg.mult().iter().all(|&c| c <= max_mult) {
            out.push(cfg);
        }
        return;
    }
    let start = prefix.last().copied().unwrap_or(0);
    for c in start..types {
        prefix.push(c);
        enumerate_rec(types, remaining - 1, max_mult, prefix, out, rows);
        prefix.pop();
    }
}
