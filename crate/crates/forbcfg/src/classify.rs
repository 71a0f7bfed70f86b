//! Boundary classification: enumerate the configurations on `s` rows with
//! exponent exactly `k` and report the minimal and maximal ones under the
//! subconfiguration order.
//!
//! The search grows configurations one column at a time (column indices
//! never decrease along a branch, so each multiset of columns is generated
//! once) and discards a branch as soon as the exponent exceeds `k` — adding
//! columns can only raise it. Column multiplicities stay at most 2.

use std::collections::HashSet;
use std::fmt;

use crate::config::{ConfigError, Configuration};
use crate::xcompute::{x_of, XError};

pub const CLASSIFY_MAX_ROWS: usize = 4;
pub const CLASSIFY_MAX_COLS: usize = 8;

/// Equivalence-dedup policy. Canonical keys are exact but slow, so they are
/// used only up to `canonical_depth` columns; deeper nodes dedup on the raw
/// representative, which costs nothing and still removes exact repeats.
#[derive(Clone, Copy, Debug)]
pub struct DedupPolicy {
    pub canonical_depth: usize,
}

impl DedupPolicy {
    /// Canonical keys at every depth (slowest, fully duplicate-free).
    pub fn full() -> Self {
        DedupPolicy { canonical_depth: usize::MAX }
    }
}

impl Default for DedupPolicy {
    fn default() -> Self {
        DedupPolicy { canonical_depth: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryReport {
    pub s: usize,
    pub k: u32,
    pub minimal: Vec<Configuration>,
    pub maximal: Vec<Configuration>,
    /// Number of tree nodes whose exponent was computed.
    pub explored_count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassifyError {
    RowGuard { s: usize },
    ColsGuard { max_cols: usize },
    X(XError),
    Config(ConfigError),
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::RowGuard { s } => {
                write!(f, "classification limited to {CLASSIFY_MAX_ROWS} rows, got {s}")
            }
            ClassifyError::ColsGuard { max_cols } => {
                write!(f, "classification limited to {CLASSIFY_MAX_COLS} columns, got {max_cols}")
            }
            ClassifyError::X(e) => write!(f, "{e}"),
            ClassifyError::Config(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ClassifyError {}

impl From<XError> for ClassifyError {
    fn from(e: XError) -> Self {
        ClassifyError::X(e)
    }
}

impl From<ConfigError> for ClassifyError {
    fn from(e: ConfigError) -> Self {
        ClassifyError::Config(e)
    }
}

pub fn enumerate_boundary(s: usize, k: u32, max_cols: usize) -> Result<BoundaryReport, ClassifyError> {
    enumerate_boundary_with(s, k, max_cols, DedupPolicy::default())
}

pub fn enumerate_boundary_with(
    s: usize,
    k: u32,
    max_cols: usize,
    dedup: DedupPolicy,
) -> Result<BoundaryReport, ClassifyError> {
    if s == 0 || s > CLASSIFY_MAX_ROWS {
        return Err(ClassifyError::RowGuard { s });
    }
    if max_cols == 0 || max_cols > CLASSIFY_MAX_COLS {
        return Err(ClassifyError::ColsGuard { max_cols });
    }
    let num_cols = 1u32 << s;

    let mut explored = 0u64;
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut candidates: Vec<Configuration> = Vec::new();
    let mut candidate_keys: HashSet<Vec<u8>> = HashSet::new();

    // Breadth-first over (configuration, smallest column allowed next).
    let mut frontier: Vec<(Configuration, u32)> = Vec::new();
    for alpha in 0..num_cols {
        let node = Configuration::from_columns(s, &[(alpha, 1)]).expect("within caps");
        frontier.push((node, alpha));
    }
    let mut depth = 1usize;
    while !frontier.is_empty() {
        let mut next_frontier = Vec::new();
        for (node, last) in frontier {
            let key = if depth <= dedup.canonical_depth {
                node.canonical_key()?
            } else {
                node.mult().to_vec()
            };
            if !seen.insert(key) {
                continue;
            }
            explored += 1;
            let x = x_of(&node)?.x_value;
            if x > k {
                continue;
            }
            if x == k {
                let ck = node.canonical_key()?;
                if candidate_keys.insert(ck) {
                    candidates.push(node.clone());
                }
            }
            if depth < max_cols {
                for alpha in last..num_cols {
                    if node.mult()[alpha as usize] < 2 {
                        let child = Configuration::from_columns(s, &[(alpha, 1)])
                            .and_then(|col| Configuration::concatenate(&[(&node, 1), (&col, 1)]))
                            .expect("within caps");
                        next_frontier.push((child, alpha));
                    }
                }
            }
        }
        frontier = next_frontier;
        depth += 1;
    }

    let mut minimal = Vec::new();
    let mut maximal = Vec::new();
    for node in &candidates {
        if is_minimal(node, k)? {
            minimal.push(node.clone());
        }
        if is_maximal(node, k, num_cols)? {
            maximal.push(node.clone());
        }
    }
    sort_report(&mut minimal)?;
    sort_report(&mut maximal)?;
    Ok(BoundaryReport { s, k, minimal, maximal, explored_count: explored })
}

/// Minimal iff deleting any single column changes the exponent (or empties
/// the configuration).
fn is_minimal(node: &Configuration, k: u32) -> Result<bool, ClassifyError> {
    for (alpha, _) in node.support() {
        let mut mult = node.mult().to_vec();
        mult[alpha as usize] -= 1;
        let smaller = Configuration::new(node.rows(), mult).expect("shape preserved");
        if smaller.num_columns() == 0 {
            continue;
        }
        if x_of(&smaller)?.x_value == k {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Maximal iff adding any column (within the multiplicity cap) raises the
/// exponent. Additions can never lower it.
fn is_maximal(node: &Configuration, k: u32, num_cols: u32) -> Result<bool, ClassifyError> {
    for alpha in 0..num_cols {
        if node.mult()[alpha as usize] >= 2 {
            continue;
        }
        let mut mult = node.mult().to_vec();
        mult[alpha as usize] += 1;
        let larger = Configuration::new(node.rows(), mult).expect("shape preserved");
        if x_of(&larger)?.x_value == k {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sort_report(list: &mut [Configuration]) -> Result<(), ClassifyError> {
    let mut keyed: Vec<(u64, Vec<u8>)> = Vec::with_capacity(list.len());
    for cfg in list.iter() {
        keyed.push((cfg.num_columns(), cfg.canonical_key()?));
    }
    let mut order: Vec<usize> = (0..list.len()).collect();
    order.sort_by(|&i, &j| keyed[i].cmp(&keyed[j]));
    let reordered: Vec<Configuration> = order.iter().map(|&i| list[i].clone()).collect();
    list.clone_from_slice(&reordered);
    Ok(())
}
