//! Product families `P_r(a,b,c)` and the finite criterion deciding whether a
//! configuration embeds in some member of a family.
//!
//! The decision works on partitions of the rows of `F` into the product's
//! factors. A factor on `s` of the rows admits exactly the columns of a small
//! criterion matrix (`[t·0_s | I_s]`, `[t·1_s | I^c_s]`, or `t·T_s` with
//! `t = ‖F‖`), so containment in the family reduces to a search over row
//! assignments with per-factor feasibility checks. An independent oracle
//! builds the literal product for one sufficiently large `r` and runs the
//! containment search.

use std::fmt;

use crate::config::{generator, ConfigError, Configuration, FactorKind};
use crate::containment::contains;

/// Factor counts `(a, b, c)` of a product family: `a` identities, `b` identity
/// complements, `c` towers.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ProductShape {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl ProductShape {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        ProductShape { a, b, c }
    }

    pub fn total(&self) -> u32 {
        self.a + self.b + self.c
    }

    /// Kind of the factor at `index`: identities first, then complements,
    /// then towers.
    pub fn kind_of(&self, index: u32) -> FactorKind {
        if index < self.a {
            FactorKind::Identity
        } else if index < self.a + self.b {
            FactorKind::IdentityComplement
        } else {
            FactorKind::Tower
        }
    }

    /// True iff `self` dominates `other` componentwise.
    pub fn dominates(&self, other: &ProductShape) -> bool {
        self.a >= other.a && self.b >= other.b && self.c >= other.c
    }
}

impl fmt::Display for ProductShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.a, self.b, self.c)
    }
}

/// All shapes with `a+b+c = k`, ascending lexicographically.
pub fn compositions(k: u32) -> Vec<ProductShape> {
    let mut out = Vec::new();
    for a in 0..=k {
        for b in 0..=(k - a) {
            out.push(ProductShape::new(a, b, k - a - b));
        }
    }
    out
}

/// Assignment of the rows of `F` to the factors of a shape.
///
/// `factor_of[i]` is the factor hosting row `i`; `order_in_factor[i]` is the
/// position of row `i` within its factor, counted from the factor's top. The
/// order carries meaning for tower factors and is free for the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowPartition {
    pub factor_of: Vec<u32>,
    pub order_in_factor: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductsError {
    ExtremalArgs { x: u32, r: u32 },
    OracleInfeasible { r_max: u32, total: u32 },
    Config(ConfigError),
}

impl fmt::Display for ProductsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProductsError::ExtremalArgs { x, r } => {
                write!(f, "extremal submatrix needs 1 <= x <= r, got x={x}, r={r}")
            }
            ProductsError::OracleInfeasible { r_max, total } => {
                write!(f, "explicit product with r={r_max} and {total} factors exceeds the row cap")
            }
            ProductsError::Config(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ProductsError {}

impl From<ConfigError> for ProductsError {
    fn from(e: ConfigError) -> Self {
        ProductsError::Config(e)
    }
}

/// The criterion matrix for a factor hosting `s` rows, with replication `t`:
/// `[t·0_s | I_s]`, `[t·1_s | I^c_s]`, or `t·T_s`. For `s = 0` all three
/// degenerate to the empty column with multiplicity `t`.
pub fn avoid_factor_matrix(kind: FactorKind, s: u32, t: u32) -> Result<Configuration, ProductsError> {
    let t8 = u8::try_from(t).map_err(|_| ConfigError::MultiplicityOverflow { column: 0 })?;
    if s == 0 {
        return Ok(Configuration::new(0, vec![t8])?);
    }
    let m = s as usize;
    let full = (1u32 << m) - 1;
    let mut cols: Vec<(u32, u8)> = Vec::new();
    match kind {
        FactorKind::Identity => {
            cols.push((0, t8));
            cols.extend((0..m).map(|i| (1u32 << i, 1)));
        }
        FactorKind::IdentityComplement => {
            cols.push((full, t8));
            cols.extend((0..m).map(|i| (full ^ (1 << i), 1)));
        }
        FactorKind::Tower => {
            cols.push((0, t8));
            cols.extend((1..=m).map(|j| ((((1u32 << j) - 1) << (m - j)), t8)));
        }
    }
    Ok(Configuration::from_columns(m, &cols)?)
}

/// Multiplicity of a column in the criterion matrix, by the closed forms.
/// `bits` is the column top to bottom in the factor's row order. Agrees with
/// `avoid_factor_matrix` (tested) and runs in time linear in the factor size.
pub fn avoid_matrix_multiplicity(kind: FactorKind, bits: &[bool], t: u64) -> u64 {
    let ones = bits.iter().filter(|&&b| b).count();
    let zeros = bits.len() - ones;
    match kind {
        FactorKind::Identity => match ones {
            0 => t,
            1 => 1,
            _ => 0,
        },
        FactorKind::IdentityComplement => match zeros {
            0 => t,
            1 => 1,
            _ => 0,
        },
        FactorKind::Tower => {
            let prefix = bits.iter().take_while(|&&b| b).count();
            if prefix == ones {
                t
            } else {
                0
            }
        }
    }
}

/// The extremal `x`-row submatrix of the `r`-row generator:
/// `E_I(x,r) = [(r-x)·0_x | I_x]`, `E_I^c(x,r) = [(r-x)·1_x | I^c_x]`,
/// `E_T(x,r) = ⌊(r+1)/(x+1)⌋·T_x`.
///
/// The tower count is the exact maximum: restricting `T_r` to `x` rows splits
/// its `r+1` columns into `x+1` prefix classes, and even spacing of the rows
/// maximizes the smallest class.
pub fn extremal_sub(kind: FactorKind, x: u32, r: u32) -> Result<Configuration, ProductsError> {
    if x == 0 || x > r {
        return Err(ProductsError::ExtremalArgs { x, r });
    }
    let m = x as usize;
    let cfg = match kind {
        FactorKind::Identity => {
            let zeros = Configuration::from_columns(m, &[(0, 1)])?;
            let ident = generator(FactorKind::Identity, x)?;
            Configuration::concatenate(&[(&zeros, r - x), (&ident, 1)])?
        }
        FactorKind::IdentityComplement => {
            let full = (1u32 << m) - 1;
            let ones = Configuration::from_columns(m, &[(full, 1)])?;
            let comp = generator(FactorKind::IdentityComplement, x)?;
            Configuration::concatenate(&[(&ones, r - x), (&comp, 1)])?
        }
        FactorKind::Tower => generator(FactorKind::Tower, x)?.repeat((r + 1) / (x + 1))?,
    };
    Ok(cfg)
}

/// The literal product `P_r(a,b,c)`: `a` copies of `I_r`, `b` of `I^c_r`,
/// `c` of `T_r`, multiplied top to bottom. For the zero shape this is the
/// single empty column (the product identity).
pub fn explicit_product(shape: ProductShape, r: u32) -> Result<Configuration, ProductsError> {
    let total = shape.total();
    if r == 0 || (r as usize) * (total as usize) > crate::config::MAX_ROWS {
        return Err(ProductsError::OracleInfeasible { r_max: r, total });
    }
    let mut acc = Configuration::new(0, vec![1])?;
    for index in 0..total {
        let factor = generator(shape.kind_of(index), r)?;
        acc = acc.product(&factor)?;
    }
    Ok(acc)
}

/// Decides whether `F` embeds in `P_r(a,b,c)` for some `r`, returning a row
/// partition witness for the first (lexicographically smallest) assignment
/// that works. Assignments equal up to permuting same-kind factors are
/// enumerated once; empty factors are legal and act as unconstrained slack.
///
/// Requires `rows(F) >= 1` and `‖F‖ >= 1`.
pub fn member_of_family(f: &Configuration, shape: ProductShape) -> Option<RowPartition> {
    assert!(f.rows() >= 1 && f.num_columns() >= 1, "membership needs a nonempty pattern");
    let k = shape.total() as usize;
    if k == 0 {
        return None;
    }
    let mut search = PartitionSearch::new(f, shape);
    search.dfs(0)
}

struct PartitionSearch {
    m: usize,
    shape: ProductShape,
    kinds: Vec<FactorKind>,
    /// (column bits, multiplicity, needs a high-multiplicity factor)
    support: Vec<(u32, u8, bool)>,
    universe: u32,
    any_high: bool,
    factor_masks: Vec<u32>,
    /// Used factors form a prefix of each kind block.
    used_in_block: [usize; 3],
    assignment: Vec<u32>,
}

impl PartitionSearch {
    fn new(f: &Configuration, shape: ProductShape) -> Self {
        let m = f.rows();
        let k = shape.total() as usize;
        let kinds: Vec<FactorKind> = (0..k as u32).map(|i| shape.kind_of(i)).collect();
        let support: Vec<(u32, u8, bool)> =
            f.support().iter().map(|&(alpha, c)| (alpha, c, c >= 2)).collect();
        let any_high = support.iter().any(|&(_, _, h)| h);
        PartitionSearch {
            m,
            shape,
            kinds,
            support,
            universe: ((1u64 << m) - 1) as u32,
            any_high,
            factor_masks: vec![0; k],
            used_in_block: [0; 3],
            assignment: vec![0; m],
        }
    }

    fn block_bounds(&self, kind_index: usize) -> (usize, usize) {
        let (a, b, c) = (self.shape.a as usize, self.shape.b as usize, self.shape.c as usize);
        match kind_index {
            0 => (0, a),
            1 => (a, a + b),
            _ => (a + b, a + b + c),
        }
    }

    fn kind_index(kind: FactorKind) -> usize {
        match kind {
            FactorKind::Identity => 0,
            FactorKind::IdentityComplement => 1,
            FactorKind::Tower => 2,
        }
    }

    fn dfs(&mut self, row: usize) -> Option<RowPartition> {
        if row == self.m {
            return self.leaf();
        }
        let bit = 1u32 << (self.m - 1 - row);
        for fi in 0..self.kinds.len() {
            let kind = self.kinds[fi];
            let block = Self::kind_index(kind);
            let (start, _) = self.block_bounds(block);
            // Canonical assignments only: a factor is eligible if already
            // used or if it is the first unused factor of its kind.
            if fi > start + self.used_in_block[block] {
                continue;
            }
            let fresh = fi == start + self.used_in_block[block];
            if !self.admits(fi, bit) {
                continue;
            }
            self.factor_masks[fi] |= bit;
            self.assignment[row] = fi as u32;
            if fresh {
                self.used_in_block[block] += 1;
            }
            if let Some(witness) = self.dfs(row + 1) {
                return Some(witness);
            }
            if fresh {
                self.used_in_block[block] -= 1;
            }
            self.factor_masks[fi] &= !bit;
        }
        None
    }

    /// Can the row with mask `bit` join factor `fi` without making some
    /// column's availability zero? Violations are permanent as rows are added,
    /// so failing here prunes the whole subtree.
    fn admits(&self, fi: usize, bit: u32) -> bool {
        let old = self.factor_masks[fi];
        match self.kinds[fi] {
            FactorKind::Identity => self
                .support
                .iter()
                .all(|&(alpha, _, _)| alpha & bit == 0 || alpha & old == 0),
            FactorKind::IdentityComplement => self.support.iter().all(|&(alpha, _, _)| {
                let zeros = !alpha & self.universe;
                zeros & bit == 0 || zeros & old == 0
            }),
            FactorKind::Tower => {
                let mask = old | bit;
                let mut projs: Vec<u32> =
                    self.support.iter().map(|&(alpha, _, _)| alpha & mask).collect();
                projs.sort_unstable_by_key(|&p| (p.count_ones(), p));
                projs.dedup();
                projs.windows(2).all(|w| w[0] & !w[1] == 0)
            }
        }
    }

    /// All rows placed; every surviving factor availability is 1 or t. A
    /// column with multiplicity >= 2 still needs some factor contributing t.
    fn leaf(&self) -> Option<RowPartition> {
        if self.any_high && self.shape.c == 0 {
            let any_empty = self.factor_masks.iter().any(|&mask| mask == 0);
            if !any_empty {
                for &(alpha, _, high) in &self.support {
                    if !high {
                        continue;
                    }
                    let boosted = self.factor_masks.iter().zip(&self.kinds).any(|(&mask, kind)| {
                        match kind {
                            FactorKind::Identity => alpha & mask == 0,
                            FactorKind::IdentityComplement => !alpha & self.universe & mask == 0,
                            FactorKind::Tower => true,
                        }
                    });
                    if !boosted {
                        return None;
                    }
                }
            }
        }
        Some(self.build_partition())
    }

    fn build_partition(&self) -> RowPartition {
        let mut order = vec![0u32; self.m];
        for (fi, &mask) in self.factor_masks.iter().enumerate() {
            let rows: Vec<usize> =
                (0..self.m).filter(|&i| mask >> (self.m - 1 - i) & 1 == 1).collect();
            let sequence = match self.kinds[fi] {
                FactorKind::Tower => self.tower_order(mask, &rows),
                _ => rows,
            };
            for (pos, &row) in sequence.iter().enumerate() {
                order[row] = pos as u32;
            }
        }
        RowPartition { factor_of: self.assignment.clone(), order_in_factor: order }
    }

    /// An order making every projected column a prefix: walk the projection
    /// chain from smallest to largest, emitting each projection's new rows,
    /// then the rows hit by no column.
    fn tower_order(&self, mask: u32, rows: &[usize]) -> Vec<usize> {
        let mut projs: Vec<u32> = self.support.iter().map(|&(alpha, _, _)| alpha & mask).collect();
        projs.sort_unstable_by_key(|&p| (p.count_ones(), p));
        projs.dedup();
        let mut sequence = Vec::with_capacity(rows.len());
        let mut placed = 0u32;
        for proj in projs {
            let new = proj & !placed;
            sequence.extend(rows.iter().copied().filter(|&i| new >> (self.m - 1 - i) & 1 == 1));
            placed |= proj;
        }
        let rest = mask & !placed;
        sequence.extend(rows.iter().copied().filter(|&i| rest >> (self.m - 1 - i) & 1 == 1));
        sequence
    }
}

/// Independent family-membership oracle: builds the literal `P_r(a,b,c)` at
/// `r = r_max` and runs the containment search. Factor monotonicity makes a
/// single sufficiently large `r` equivalent to testing all `r <= r_max`.
pub fn family_membership_oracle(
    f: &Configuration,
    shape: ProductShape,
    r_max: u32,
) -> Result<bool, ProductsError> {
    let product = explicit_product(shape, r_max)?;
    Ok(contains(f, &product).is_some())
}

/// A replication parameter large enough that testing the single product
/// `P_r(a,b,c)` at this `r` decides membership for every `r`: each growing
/// multiplicity in the factors must reach the largest column multiplicity of
/// `f`. The binding case is a tower factor hosting `s` rows, whose prefix
/// columns repeat `⌊(r+1)/(s+1)⌋` times; with at least two factors a tower
/// can only host all rows when another (then empty) factor supplies slack,
/// which caps `s` at `rows - 1` for the tower bound.
pub fn required_oracle_r(f: &Configuration, shape: ProductShape) -> u32 {
    let m = f.rows() as u32;
    let lam = (f.mult().iter().copied().max().unwrap_or(0) as u32).max(1);
    let tower_bound = if shape.total() >= 2 {
        (lam * m).saturating_sub(1).max(lam).max(m)
    } else {
        lam * (m + 1) - 1
    };
    tower_bound.max(m + lam)
}
