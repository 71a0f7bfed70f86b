//! Exact `forb(m, F)` at tiny scale: the maximum number of columns of a
//! simple `m`-row matrix containing no `F`, by branch and bound over the
//! `2^m` candidate columns.

use std::fmt;

use crate::config::{restrict_column, Configuration};
use crate::containment::{contains, k_subset_masks, Matcher};

/// Row guard: the search ranges over subsets of `2^m` columns.
pub const FORB_MAX_ROWS: u32 = 5;

/// The exact value together with a maximum avoiding witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbResult {
    pub value: u64,
    pub witness: Configuration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForbError {
    RowGuard { m: u32 },
    /// Every simple matrix contains the pattern (only possible for patterns
    /// with no columns), so no maximum avoider exists.
    Unavoidable,
}

impl fmt::Display for ForbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForbError::RowGuard { m } => {
                write!(f, "forb search limited to m <= {FORB_MAX_ROWS}, got m = {m}")
            }
            ForbError::Unavoidable => write!(f, "every simple matrix contains the pattern"),
        }
    }
}

impl std::error::Error for ForbError {}

/// Computes `forb(m, F)` exactly. Columns are considered in increasing index
/// order with include-before-exclude branching and best-so-far pruning; ties
/// among maximum witnesses break towards the smallest column-set bitmask, so
/// the witness is reproducible.
pub fn forb_exact(m: u32, f: &Configuration) -> Result<ForbResult, ForbError> {
    if m == 0 || m > FORB_MAX_ROWS {
        return Err(ForbError::RowGuard { m });
    }
    let rows = m as usize;
    let num_cols = 1u32 << rows;
    if f.rows() > rows {
        // The pattern has more rows than the matrices considered: avoidance
        // is vacuous and the complete simple matrix wins.
        let witness = Configuration::new(rows, vec![1; num_cols as usize]).expect("within caps");
        return Ok(ForbResult { value: num_cols as u64, witness });
    }
    if f.num_columns() == 0 {
        return Err(ForbError::Unavoidable);
    }

    // Restricted column counts are maintained incrementally: adding a column
    // touches one slot per row subset, and the avoidance check scans the
    // pattern variants against the updated counts.
    let matcher = Matcher::new(f);
    let subsets: Vec<u32> = k_subset_masks(rows, f.rows()).collect();
    let rest: Vec<Vec<u32>> = subsets.iter().map(|_| vec![0u32; 1usize << f.rows()]).collect();

    let mut search = Search {
        matcher: &matcher,
        rows,
        num_cols,
        subsets,
        rest,
        current_mask: 0,
        size: 0,
        best_size: 0,
        best_mask: 0,
    };
    search.run(0);

    let mut mult = vec![0u8; num_cols as usize];
    for alpha in 0..num_cols {
        if search.best_mask >> alpha & 1 == 1 {
            mult[alpha as usize] = 1;
        }
    }
    let witness = Configuration::new(rows, mult).expect("within caps");
    debug_assert!(contains(f, &witness).is_none());
    Ok(ForbResult { value: search.best_size, witness })
}

struct Search<'a> {
    matcher: &'a Matcher,
    rows: usize,
    num_cols: u32,
    subsets: Vec<u32>,
    rest: Vec<Vec<u32>>,
    current_mask: u64,
    size: u64,
    best_size: u64,
    best_mask: u64,
}

impl Search<'_> {
    fn run(&mut self, next: u32) {
        if self.size > self.best_size
            || (self.size == self.best_size && self.current_mask < self.best_mask)
        {
            self.best_size = self.size;
            self.best_mask = self.current_mask;
        }
        if next == self.num_cols {
            return;
        }
        // Even taking every remaining column cannot beat the best.
        let remaining = (self.num_cols - next) as u64;
        if self.size + remaining < self.best_size {
            return;
        }
        if self.try_add(next) {
            self.run(next + 1);
            self.remove(next);
        }
        self.run(next + 1);
    }

    /// Adds column `next` unless that completes an occurrence of the pattern.
    fn try_add(&mut self, next: u32) -> bool {
        for (si, &sel) in self.subsets.iter().enumerate() {
            let idx = restrict_column(self.rows, next, sel) as usize;
            self.rest[si][idx] += 1;
        }
        let contained = self.subsets.iter().enumerate().any(|(si, _)| {
            self.matcher.variants().any(|(_, support)| {
                support.iter().all(|&(beta, need)| self.rest[si][beta as usize] >= need as u32)
            })
        });
        if contained {
            self.undo_counts(next);
            return false;
        }
        self.current_mask |= 1 << next;
        self.size += 1;
        true
    }

    fn remove(&mut self, col: u32) {
        self.undo_counts(col);
        self.current_mask &= !(1 << col);
        self.size -= 1;
    }

    fn undo_counts(&mut self, col: u32) {
        for (si, &sel) in self.subsets.iter().enumerate() {
            let idx = restrict_column(self.rows, col, sel) as usize;
            self.rest[si][idx] -= 1;
        }
    }
}
