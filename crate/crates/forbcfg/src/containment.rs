//! Subconfiguration testing: does `F` occur in `A` up to row and column
//! permutation?
//!
//! The main search fixes the columns of both sides in multiplicity-vector
//! form, then ranges over row subsets of `A` and row permutations of `F`:
//! `F` occurs iff some permuted multiplicity vector of `F` is dominated
//! entrywise by the restriction of `A` to some subset. A literal
//! submatrix-search oracle (`contains_naive`) double-checks the fast path on
//! small inputs.

use std::fmt;

use crate::config::{next_permutation, permute_column, restrict_column, Configuration};

/// Witness that `F` is a subconfiguration of `A`.
///
/// `row_map[i]` is the row of `A` hosting row `i` of `F`; the image set is the
/// row subset and the order encodes the permutation. `witness_counts` records,
/// for every distinct column of `F`, how many matching columns the restriction
/// of `A` offers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub row_map: Vec<usize>,
    pub witness_counts: Vec<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingError {
    WrongLength { expected: usize, got: usize },
    RowOutOfRange { row: usize, rows: usize },
    DuplicateTarget { row: usize },
}

impl fmt::Display for EmbeddingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbeddingError::WrongLength { expected, got } => {
                write!(f, "row map has {got} entries, expected {expected}")
            }
            EmbeddingError::RowOutOfRange { row, rows } => {
                write!(f, "row map target {row} out of range for {rows} rows")
            }
            EmbeddingError::DuplicateTarget { row } => {
                write!(f, "row map targets row {row} twice")
            }
        }
    }
}

impl std::error::Error for EmbeddingError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleGuardError {
    pub rows: usize,
    pub cols: u64,
}

impl fmt::Display for OracleGuardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "naive containment limited to 7 rows and 12 columns in A, got {} rows, {} columns",
            self.rows, self.cols
        )
    }
}

impl std::error::Error for OracleGuardError {}

/// A containment searcher for a fixed pattern `F`, reusable across many `A`s.
/// The row-permutation variants of `F` are computed once; permutations
/// producing the same multiplicity vector (symmetric rows) are collapsed,
/// keeping the lexicographically first one.
pub struct Matcher {
    f: Configuration,
    cols: u64,
    ones: u64,
    /// (permutation, support of the permuted multiplicity vector)
    variants: Vec<(Vec<usize>, Vec<(u32, u8)>)>,
}

impl Matcher {
    pub fn new(f: &Configuration) -> Self {
        let m = f.rows();
        let mut variants: Vec<(Vec<usize>, Vec<u8>, Vec<(u32, u8)>)> = Vec::new();
        let mut perm: Vec<usize> = (0..m).collect();
        loop {
            let permuted = f.permute_rows(&perm);
            if !variants.iter().any(|(_, v, _)| v == permuted.mult()) {
                let support = permuted.support();
                variants.push((perm.clone(), permuted.mult().to_vec(), support));
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Matcher {
            f: f.clone(),
            cols: f.num_columns(),
            ones: f.ones_count(),
            variants: variants.into_iter().map(|(p, _, s)| (p, s)).collect(),
        }
    }

    pub(crate) fn variants(&self) -> impl Iterator<Item = (&[usize], &[(u32, u8)])> {
        self.variants.iter().map(|(p, s)| (p.as_slice(), s.as_slice()))
    }

    /// First embedding of the pattern into `a`, in (row subset, permutation)
    /// order; subsets ascend by bitmask value, permutations lexicographically.
    pub fn find_in(&self, a: &Configuration) -> Option<Embedding> {
        self.find_impl(a, true)
    }

    fn find_impl(&self, a: &Configuration, speedups: bool) -> Option<Embedding> {
        let s = self.f.rows();
        let m = a.rows();
        if s > m {
            return None;
        }
        if speedups {
            // Obvious impossibilities: more columns or more ones than A has.
            if self.cols > a.num_columns() || self.ones > a.ones_count() {
                return None;
            }
        }
        let a_support = a.support();
        let mut restricted = vec![0u32; 1usize << s];
        for sel in k_subset_masks(m, s) {
            restricted.iter_mut().for_each(|c| *c = 0);
            for &(alpha, count) in &a_support {
                restricted[restrict_column(m, alpha, sel) as usize] += count as u32;
            }
            for (perm, support) in &self.variants {
                if support.iter().all(|&(beta, need)| restricted[beta as usize] >= need as u32) {
                    return Some(build_embedding(&self.f, perm, sel, m, &restricted));
                }
            }
        }
        None
    }
}

/// Decides `F ≺ A` and returns the first embedding found.
pub fn contains(f: &Configuration, a: &Configuration) -> Option<Embedding> {
    Matcher::new(f).find_in(a)
}

/// `contains` with the early-reject speedups disabled. Exists so tests can
/// check the speedups never change an answer.
pub fn contains_no_speedups(f: &Configuration, a: &Configuration) -> Option<Embedding> {
    Matcher::new(f).find_impl(a, false)
}

fn build_embedding(
    f: &Configuration,
    perm: &[usize],
    sel: u32,
    a_rows: usize,
    restricted: &[u32],
) -> Embedding {
    let s = f.rows();
    // Selected rows of A in top-to-bottom order; row j of the restriction is
    // sel_rows[j], and it hosts row perm[j] of F.
    let sel_rows: Vec<usize> = (0..a_rows).filter(|&i| sel >> (a_rows - 1 - i) & 1 == 1).collect();
    let mut row_map = vec![0usize; s];
    for (j, &fj) in perm.iter().enumerate() {
        row_map[fj] = sel_rows[j];
    }
    let witness_counts = f
        .support()
        .iter()
        .map(|&(alpha, _)| (alpha, restricted[permute_column(alpha, perm, s) as usize]))
        .collect();
    Embedding { row_map, witness_counts }
}

/// Ascending bitmasks of the `k`-subsets of `n` positions (Gosper's hack).
pub(crate) fn k_subset_masks(n: usize, k: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << n;
    let mut v: u64 = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done || v >= limit {
            return None;
        }
        let current = v;
        if k == 0 {
            done = true;
        } else {
            let t = v | (v - 1);
            v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
        }
        Some(current as u32)
    })
}

/// Literal definition-level oracle: searches for a representative of `F` that
/// is a submatrix of `A`, over injective ordered row maps and injective
/// assignments of column instances. Doubly exponential; guarded to tiny inputs.
pub fn contains_naive(f: &Configuration, a: &Configuration) -> Result<bool, OracleGuardError> {
    if a.rows() > 7 || a.num_columns() > 12 {
        return Err(OracleGuardError { rows: a.rows(), cols: a.num_columns() });
    }
    let s = f.rows();
    let m = a.rows();
    if s > m || f.num_columns() > a.num_columns() {
        return Ok(false);
    }

    // Expand both sides to explicit column-instance lists.
    let f_cols: Vec<u32> = f
        .support()
        .iter()
        .flat_map(|&(alpha, c)| std::iter::repeat(alpha).take(c as usize))
        .collect();
    let a_cols: Vec<u32> = a
        .support()
        .iter()
        .flat_map(|&(alpha, c)| std::iter::repeat(alpha).take(c as usize))
        .collect();

    let mut map: Vec<usize> = Vec::with_capacity(s);
    let mut used_rows = vec![false; m];
    Ok(search_row_maps(&f_cols, &a_cols, s, m, &mut map, &mut used_rows))
}

fn search_row_maps(
    f_cols: &[u32],
    a_cols: &[u32],
    s: usize,
    m: usize,
    map: &mut Vec<usize>,
    used_rows: &mut [bool],
) -> bool {
    if map.len() == s {
        // Project A's column instances onto the mapped rows and match F's
        // instances injectively.
        let project = |alpha: u32| -> u32 {
            let mut out = 0u32;
            for (i, &ai) in map.iter().enumerate() {
                out |= (alpha >> (m - 1 - ai) & 1) << (s - 1 - i);
            }
            out
        };
        let projected: Vec<u32> = a_cols.iter().map(|&c| project(c)).collect();
        let mut used_cols = vec![false; projected.len()];
        return assign_columns(f_cols, &projected, 0, &mut used_cols);
    }
    for target in 0..m {
        if !used_rows[target] {
            used_rows[target] = true;
            map.push(target);
            if search_row_maps(f_cols, a_cols, s, m, map, used_rows) {
                return true;
            }
            map.pop();
            used_rows[target] = false;
        }
    }
    false
}

fn assign_columns(f_cols: &[u32], projected: &[u32], next: usize, used: &mut [bool]) -> bool {
    if next == f_cols.len() {
        return true;
    }
    for (j, &p) in projected.iter().enumerate() {
        if !used[j] && p == f_cols[next] {
            used[j] = true;
            if assign_columns(f_cols, projected, next + 1, used) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// Checks an explicit embedding: the row map must be injective and, for every
/// distinct column of `F`, the restriction of `A` to the mapped rows must
/// offer at least the required multiplicity. `Ok(false)` means the counts
/// fail; malformed row maps are a distinguished error.
pub fn verify_embedding(
    f: &Configuration,
    a: &Configuration,
    e: &Embedding,
) -> Result<bool, EmbeddingError> {
    let s = f.rows();
    let m = a.rows();
    if e.row_map.len() != s {
        return Err(EmbeddingError::WrongLength { expected: s, got: e.row_map.len() });
    }
    let mut seen = vec![false; m];
    for &target in &e.row_map {
        if target >= m {
            return Err(EmbeddingError::RowOutOfRange { row: target, rows: m });
        }
        if seen[target] {
            return Err(EmbeddingError::DuplicateTarget { row: target });
        }
        seen[target] = true;
    }

    let sel: u32 = e.row_map.iter().map(|&i| 1u32 << (m - 1 - i)).sum();
    let sel_rows: Vec<usize> = (0..m).filter(|&i| sel >> (m - 1 - i) & 1 == 1).collect();
    // Within the restriction, F's row i sits at the position of row_map[i]
    // among the selected rows.
    let pos_of: Vec<usize> = e
        .row_map
        .iter()
        .map(|&target| sel_rows.iter().position(|&r| r == target).expect("target is selected"))
        .collect();

    let mut restricted = vec![0u32; 1usize << s];
    for &(alpha, count) in &a.support() {
        restricted[restrict_column(m, alpha, sel) as usize] += count as u32;
    }
    for (alpha, need) in f.support() {
        let mut mapped = 0u32;
        for (i, &pos) in pos_of.iter().enumerate() {
            mapped |= (alpha >> (s - 1 - i) & 1) << (s - 1 - pos);
        }
        if restricted[mapped as usize] < need as u32 {
            return Ok(false);
        }
    }
    Ok(true)
}
