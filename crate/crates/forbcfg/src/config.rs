//! Configurations: {0,1}-matrices up to row and column permutation.
//!
//! A configuration on `m` rows is stored as a multiplicity vector of length
//! `2^m`, indexed by the column read as a binary number with the top row in
//! the most significant bit. `mult[alpha]` is the number of times column
//! `alpha` occurs. Multiplicities are capped at 255; exceeding the cap is a
//! construction error, never a silent saturation.

use std::fmt;
use std::sync::OnceLock;

/// Hard cap on the number of rows (the multiplicity vector has `2^m` entries).
pub const MAX_ROWS: usize = 20;

/// Row cap for `canonical_key`, which enumerates row permutations.
pub const CANONICAL_KEY_MAX_ROWS: usize = 12;

/// Largest row count for which the (subset, column) restriction table is
/// materialized; larger inputs fall back to per-call bit extraction.
const TABLE_MAX_ROWS: usize = 10;

/// Index of a column: an integer in `[0, 2^m)` whose bit `m-1-i` is the entry
/// of row `i` (rows counted from the top).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ColumnIndex(pub u32);

/// A set of rows of an `m`-row configuration, as a bitmask in the same
/// convention as [`ColumnIndex`]: row `i` is selected iff bit `m-1-i` is set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RowSet(pub u32);

impl RowSet {
    /// Builds a row set from 0-based row indices (top row is 0).
    pub fn from_rows<I: IntoIterator<Item = usize>>(rows: I, m: usize) -> Result<Self, ConfigError> {
        let mut mask = 0u32;
        for i in rows {
            if i >= m {
                return Err(ConfigError::RowSetOutOfRange { mask: 1 << i, rows: m });
            }
            mask |= 1 << (m - 1 - i);
        }
        Ok(RowSet(mask))
    }

    /// 0-based row indices selected by this set, top to bottom.
    pub fn rows(&self, m: usize) -> Vec<usize> {
        (0..m).filter(|&i| self.0 >> (m - 1 - i) & 1 == 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigError {
    TooManyRows { rows: usize },
    RaggedRow { row: usize, expected: usize, got: usize },
    InvalidChar { row: usize, col: usize, ch: char },
    MultiplicityOverflow { column: u32 },
    MultLengthMismatch { rows: usize, got: usize },
    ColumnOutOfRange { column: u32, rows: usize },
    RowSetOutOfRange { mask: u32, rows: usize },
    RowCountMismatch { expected: usize, got: usize },
    EmptyConcatenation,
    CanonicalKeyGuard { rows: usize },
    GeneratorSize { size: u32 },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::TooManyRows { rows } => {
                write!(f, "configuration has {rows} rows; at most {MAX_ROWS} supported")
            }
            ConfigError::RaggedRow { row, expected, got } => {
                write!(f, "row {row} has length {got}, expected {expected}")
            }
            ConfigError::InvalidChar { row, col, ch } => {
                write!(f, "invalid character {ch:?} at row {row}, column {col} (expected '0' or '1')")
            }
            ConfigError::MultiplicityOverflow { column } => {
                write!(f, "multiplicity of column {column} exceeds 255")
            }
            ConfigError::MultLengthMismatch { rows, got } => {
                write!(f, "multiplicity vector has length {got}, expected 2^{rows}")
            }
            ConfigError::ColumnOutOfRange { column, rows } => {
                write!(f, "column index {column} out of range for {rows} rows")
            }
            ConfigError::RowSetOutOfRange { mask, rows } => {
                write!(f, "row set {mask:#b} out of range for {rows} rows")
            }
            ConfigError::RowCountMismatch { expected, got } => {
                write!(f, "row count mismatch: expected {expected}, got {got}")
            }
            ConfigError::EmptyConcatenation => write!(f, "concatenation of zero parts"),
            ConfigError::CanonicalKeyGuard { rows } => {
                write!(f, "canonical key limited to {CANONICAL_KEY_MAX_ROWS} rows, got {rows}")
            }
            ConfigError::GeneratorSize { size } => {
                write!(f, "generator size {size} out of range 1..={MAX_ROWS}")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

/// The three building blocks of product constructions: the identity matrix
/// `I_r`, its complement `I^c_r`, and the tower (maximal chain) matrix `T_r`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum FactorKind {
    Identity,
    IdentityComplement,
    Tower,
}

impl FactorKind {
    pub const ALL: [FactorKind; 3] = [
        FactorKind::Identity,
        FactorKind::IdentityComplement,
        FactorKind::Tower,
    ];
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorKind::Identity => write!(f, "I"),
            FactorKind::IdentityComplement => write!(f, "Ic"),
            FactorKind::Tower => write!(f, "T"),
        }
    }
}

/// A {0,1}-matrix up to row and column permutation, stored as a multiplicity
/// vector over column indices.
///
/// `Eq` compares representatives (same row order); use [`Configuration::canonical_key`]
/// for equivalence as configurations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    rows: usize,
    mult: Vec<u8>,
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({} rows; mult {:?})", self.rows, self.mult)
    }
}

impl Configuration {
    /// Builds a configuration from an explicit multiplicity vector of length `2^rows`.
    pub fn new(rows: usize, mult: Vec<u8>) -> Result<Self, ConfigError> {
        if rows > MAX_ROWS {
            return Err(ConfigError::TooManyRows { rows });
        }
        if mult.len() != 1usize << rows {
            return Err(ConfigError::MultLengthMismatch { rows, got: mult.len() });
        }
        Ok(Configuration { rows, mult })
    }

    /// The configuration on `rows` rows with no columns.
    pub fn empty(rows: usize) -> Result<Self, ConfigError> {
        Self::new(rows, vec![0; 1usize << rows])
    }

    /// Parses a dense row-major representation: `rows[i]` is row `i` from the
    /// top, a string over `{0,1}`. Columns are read top to bottom, most
    /// significant bit first.
    pub fn from_dense<S: AsRef<str>>(rows: &[S]) -> Result<Self, ConfigError> {
        let m = rows.len();
        if m > MAX_ROWS {
            return Err(ConfigError::TooManyRows { rows: m });
        }
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut cols = vec![0u32; n];
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(ConfigError::RaggedRow { row: i, expected: n, got: row.len() });
            }
            for (j, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => cols[j] |= 1 << (m - 1 - i),
                    _ => return Err(ConfigError::InvalidChar { row: i, col: j, ch }),
                }
            }
        }
        let mut mult = vec![0u8; 1usize << m];
        for alpha in cols {
            let slot = &mut mult[alpha as usize];
            *slot = slot
                .checked_add(1)
                .ok_or(ConfigError::MultiplicityOverflow { column: alpha })?;
        }
        Ok(Configuration { rows: m, mult })
    }

    /// Builds from `(column, multiplicity)` pairs; repeated pairs accumulate.
    pub fn from_columns(rows: usize, cols: &[(u32, u8)]) -> Result<Self, ConfigError> {
        let mut cfg = Self::empty(rows)?;
        for &(alpha, count) in cols {
            if alpha as usize >= cfg.mult.len() {
                return Err(ConfigError::ColumnOutOfRange { column: alpha, rows });
            }
            let slot = &mut cfg.mult[alpha as usize];
            *slot = slot
                .checked_add(count)
                .ok_or(ConfigError::MultiplicityOverflow { column: alpha })?;
        }
        Ok(cfg)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// The multiplicity vector, index 0 first.
    pub fn mult(&self) -> &[u8] {
        &self.mult
    }

    /// Number of columns, counted with multiplicity.
    pub fn num_columns(&self) -> u64 {
        self.mult.iter().map(|&c| c as u64).sum()
    }

    /// Total number of ones, counted with column multiplicity.
    pub fn ones_count(&self) -> u64 {
        self.mult
            .iter()
            .enumerate()
            .map(|(alpha, &c)| c as u64 * (alpha as u32).count_ones() as u64)
            .sum()
    }

    /// True iff no column repeats.
    pub fn is_simple(&self) -> bool {
        self.mult.iter().all(|&c| c <= 1)
    }

    /// Multiplicity of the given column.
    pub fn multiplicity(&self, col: ColumnIndex) -> Result<u8, ConfigError> {
        self.mult
            .get(col.0 as usize)
            .copied()
            .ok_or(ConfigError::ColumnOutOfRange { column: col.0, rows: self.rows })
    }

    /// Distinct columns with their multiplicities, ascending by index.
    pub fn support(&self) -> Vec<(u32, u8)> {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(alpha, &c)| (alpha as u32, c))
            .collect()
    }

    /// The {0,1}-complement: every entry flipped.
    pub fn complement(&self) -> Configuration {
        let full = self.mult.len() - 1;
        let mut mult = vec![0u8; self.mult.len()];
        for (alpha, &c) in self.mult.iter().enumerate() {
            mult[full ^ alpha] = c;
        }
        Configuration { rows: self.rows, mult }
    }

    /// Restricts to the rows in `sel`, keeping the top-to-bottom order.
    pub fn restrict(&self, sel: RowSet) -> Result<Configuration, ConfigError> {
        if self.rows < 32 && sel.0 >= 1u32 << self.rows {
            return Err(ConfigError::RowSetOutOfRange { mask: sel.0, rows: self.rows });
        }
        let k = sel.len();
        let mut mult = vec![0u32; 1usize << k];
        for (alpha, &c) in self.mult.iter().enumerate() {
            if c > 0 {
                mult[restrict_column(self.rows, alpha as u32, sel.0) as usize] += c as u32;
            }
        }
        let mut out = vec![0u8; mult.len()];
        for (beta, &c) in mult.iter().enumerate() {
            out[beta] = u8::try_from(c)
                .map_err(|_| ConfigError::MultiplicityOverflow { column: beta as u32 })?;
        }
        Ok(Configuration { rows: k, mult: out })
    }

    /// Concatenation `[t_1·A_1 | t_2·A_2 | ...]`; all parts must share a row count.
    pub fn concatenate(parts: &[(&Configuration, u32)]) -> Result<Configuration, ConfigError> {
        let (first, _) = parts.first().ok_or(ConfigError::EmptyConcatenation)?;
        let rows = first.rows;
        let mut mult = vec![0u64; 1usize << rows];
        for (part, t) in parts {
            if part.rows != rows {
                return Err(ConfigError::RowCountMismatch { expected: rows, got: part.rows });
            }
            for (alpha, &c) in part.mult.iter().enumerate() {
                mult[alpha] += *t as u64 * c as u64;
            }
        }
        let mut out = vec![0u8; mult.len()];
        for (alpha, &c) in mult.iter().enumerate() {
            out[alpha] = u8::try_from(c)
                .map_err(|_| ConfigError::MultiplicityOverflow { column: alpha as u32 })?;
        }
        Ok(Configuration { rows, mult: out })
    }

    /// Shorthand for `t` copies of `self`.
    pub fn repeat(&self, t: u32) -> Result<Configuration, ConfigError> {
        Self::concatenate(&[(self, t)])
    }

    /// The product `self × other`: every column of `self` on top of every
    /// column of `other`.
    pub fn product(&self, other: &Configuration) -> Result<Configuration, ConfigError> {
        let rows = self.rows + other.rows;
        if rows > MAX_ROWS {
            return Err(ConfigError::TooManyRows { rows });
        }
        let mut mult = vec![0u8; 1usize << rows];
        for (alpha, &ca) in self.mult.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (beta, &cb) in other.mult.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                let idx = (alpha << other.rows) | beta;
                let prod = ca as u16 * cb as u16;
                mult[idx] = u8::try_from(prod)
                    .map_err(|_| ConfigError::MultiplicityOverflow { column: idx as u32 })?;
            }
        }
        Ok(Configuration { rows, mult })
    }

    /// Applies a row permutation: row `j` of the result is row `perm[j]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Configuration {
        assert_eq!(perm.len(), self.rows, "permutation length must match row count");
        let mut mult = vec![0u8; self.mult.len()];
        for (alpha, &c) in self.mult.iter().enumerate() {
            if c > 0 {
                mult[permute_column(alpha as u32, perm, self.rows) as usize] = c;
            }
        }
        Configuration { rows: self.rows, mult }
    }

    /// A byte string equal for exactly the configurations equivalent to `self`:
    /// the lexicographically smallest multiplicity vector over all row
    /// permutations. Guarded to small row counts (permutation enumeration).
    ///
    /// Vectors are compared through their supports: of two sorted nonzero
    /// lists, the one reaching an index the other leaves at zero is the
    /// larger vector. That keeps the scan proportional to the column count
    /// rather than to `2^m`.
    pub fn canonical_key(&self) -> Result<Vec<u8>, ConfigError> {
        if self.rows > CANONICAL_KEY_MAX_ROWS {
            return Err(ConfigError::CanonicalKeyGuard { rows: self.rows });
        }
        let m = self.rows;
        let base = self.support();
        let mut best: Option<Vec<(u32, u8)>> = None;
        let mut candidate: Vec<(u32, u8)> = Vec::with_capacity(base.len());
        let mut perm: Vec<usize> = (0..m).collect();
        loop {
            candidate.clear();
            candidate.extend(base.iter().map(|&(alpha, c)| (permute_column(alpha, &perm, m), c)));
            candidate.sort_unstable();
            let better = match &best {
                None => true,
                Some(best_support) => sparse_vector_less(&candidate, best_support),
            };
            if better {
                best = Some(candidate.clone());
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let best = best.expect("at least the identity permutation is considered");
        let mut key = vec![0u8; self.mult.len()];
        for (beta, c) in best {
            key[beta as usize] = c;
        }
        Ok(key)
    }

    /// Rows as `{0,1}` strings, columns ascending by index, repeats adjacent.
    pub fn dense_rows(&self) -> Vec<String> {
        let mut rows = vec![String::new(); self.rows];
        for (alpha, &c) in self.mult.iter().enumerate() {
            for _ in 0..c {
                for (i, row) in rows.iter_mut().enumerate() {
                    row.push(if alpha >> (self.rows - 1 - i) & 1 == 1 { '1' } else { '0' });
                }
            }
        }
        rows
    }
}

/// Compares two multiplicity vectors given as sorted supports: true iff the
/// dense vector of `a` is lexicographically smaller than that of `b`. At the
/// first index where the supports disagree, a zero beats a nonzero entry.
fn sparse_vector_less(a: &[(u32, u8)], b: &[(u32, u8)]) -> bool {
    let mut ia = 0;
    let mut ib = 0;
    loop {
        match (a.get(ia), b.get(ib)) {
            (Some(&(xa, ca)), Some(&(xb, cb))) => {
                if xa == xb {
                    if ca != cb {
                        return ca < cb;
                    }
                    ia += 1;
                    ib += 1;
                } else {
                    // The smaller index holds a nonzero where the other is 0.
                    return xb < xa;
                }
            }
            (Some(_), None) => return false,
            (None, Some(_)) => return true,
            (None, None) => return false,
        }
    }
}

/// Maps a column of an `m`-row matrix to the corresponding column of the
/// permuted matrix whose row `j` is row `perm[j]` of the original.
pub fn permute_column(alpha: u32, perm: &[usize], m: usize) -> u32 {
    let mut out = 0u32;
    for (j, &pj) in perm.iter().enumerate() {
        out |= (alpha >> (m - 1 - pj) & 1) << (m - 1 - j);
    }
    out
}

/// Restriction of column `alpha` to the rows selected by `mask`, preserving
/// top-to-bottom order. Table-accelerated for small `m`.
pub fn restrict_column(m: usize, alpha: u32, mask: u32) -> u32 {
    if m <= TABLE_MAX_ROWS {
        restriction_table(m)[((mask as usize) << m) | alpha as usize]
    } else {
        extract_bits(alpha, mask)
    }
}

/// Software bit extraction: packs the bits of `alpha` selected by `mask`
/// towards the low end, preserving their order.
pub(crate) fn extract_bits(alpha: u32, mask: u32) -> u32 {
    let mut out = 0u32;
    let mut bit = 0;
    let mut m = mask;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if alpha & low != 0 {
            out |= 1 << bit;
        }
        bit += 1;
        m ^= low;
    }
    out
}

/// Lazily built table of `restrict_column` for all `(mask, alpha)` pairs at a
/// fixed row count. Entry `(mask << m) | alpha` holds `alpha` restricted to `mask`.
fn restriction_table(m: usize) -> &'static [u32] {
    static TABLES: [OnceLock<Vec<u32>>; TABLE_MAX_ROWS + 1] =
        [const { OnceLock::new() }; TABLE_MAX_ROWS + 1];
    TABLES[m].get_or_init(|| {
        let size = 1usize << m;
        let mut table = vec![0u32; size * size];
        for mask in 0..size as u32 {
            let base = (mask as usize) << m;
            for alpha in 0..size as u32 {
                table[base | alpha as usize] = extract_bits(alpha, mask);
            }
        }
        table
    })
}

/// Advances `perm` to the next permutation in lexicographic order; returns
/// false after the last one.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// The generator matrices `I_r`, `I^c_r` and `T_r`.
pub fn generator(kind: FactorKind, r: u32) -> Result<Configuration, ConfigError> {
    if r == 0 || r as usize > MAX_ROWS {
        return Err(ConfigError::GeneratorSize { size: r });
    }
    let m = r as usize;
    let mut cfg = Configuration::empty(m)?;
    match kind {
        FactorKind::Identity => {
            for i in 0..m {
                cfg.mult[1usize << i] = 1;
            }
        }
        FactorKind::IdentityComplement => {
            let full = (1usize << m) - 1;
            for i in 0..m {
                cfg.mult[full ^ (1usize << i)] = 1;
            }
        }
        FactorKind::Tower => {
            // Column j has ones in the top j rows.
            for j in 0..=m {
                let alpha = if j == 0 { 0 } else { ((1usize << j) - 1) << (m - j) };
                cfg.mult[alpha] = 1;
            }
        }
    }
    Ok(cfg)
}
