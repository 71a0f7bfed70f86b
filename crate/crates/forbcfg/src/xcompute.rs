//! The exponent `X(F)`: the largest `a+b+c` such that some product family
//! `P_r(a,b,c)` never contains `F`, found by an ascending level search over
//! the shape lattice, with checkable certificates for the upper level.

use std::collections::HashSet;
use std::fmt;

use crate::config::Configuration;
use crate::products::{
    avoid_matrix_multiplicity, compositions, member_of_family, ProductShape, RowPartition,
};

/// Row guard for the level search; beyond this the search is impractical.
pub const X_MAX_ROWS: usize = 12;

/// Result of the exponent search. `avoiding_shape` is the lexicographically
/// smallest shape at the top level that avoids `F`; the certificate proves
/// `X(F) < x_value + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XResult {
    pub x_value: u32,
    pub avoiding_shape: ProductShape,
    pub certificate: Certificate,
}

/// Proof that `X(F) < k`: one verified row partition per shape with
/// `a+b+c = k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub k: u32,
    pub entries: Vec<(ProductShape, RowPartition)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XError {
    ZeroRows,
    EmptyConfiguration,
    RowGuard { rows: usize },
    CertificateLevel { k: u32, rows: usize },
}

impl fmt::Display for XError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XError::ZeroRows => write!(f, "X is undefined for configurations with no rows"),
            XError::EmptyConfiguration => write!(f, "X is undefined for configurations with no columns"),
            XError::RowGuard { rows } => {
                write!(f, "X search limited to {X_MAX_ROWS} rows, got {rows}")
            }
            XError::CertificateLevel { k, rows } => {
                write!(f, "certificate level {k} out of range 1..={} for {rows} rows", rows + 1)
            }
        }
    }
}

impl std::error::Error for XError {}

/// Verdict of the certificate checker. Structural damage (unassigned rows,
/// out-of-range factors, broken orders) is distinguished from a well-formed
/// certificate whose counts fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateVerdict {
    Accepted,
    Rejected(String),
    Malformed(String),
}

impl CertificateVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, CertificateVerdict::Accepted)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct XOptions {
    /// Cap column multiplicities at 2 before searching. The exponent is
    /// invariant under the cap; disabling it serves the tests that prove so.
    pub reduce: bool,
    /// Worker threads for testing the shapes of one level.
    pub jobs: usize,
}

impl Default for XOptions {
    fn default() -> Self {
        XOptions { reduce: true, jobs: 1 }
    }
}

/// Caps every column multiplicity at 2. Replicating a column beyond twice
/// never changes `X`.
pub fn reduce_multiplicities(f: &Configuration) -> Configuration {
    let mult: Vec<u8> = f.mult().iter().map(|&c| c.min(2)).collect();
    Configuration::new(f.rows(), mult).expect("shape preserved")
}

/// Computes `X(F)` with default options.
pub fn x_of(f: &Configuration) -> Result<XResult, XError> {
    x_of_with(f, XOptions::default())
}

/// Level search: ascend `k = 1, 2, ...`, testing every shape with
/// `a+b+c = k`. A shape dominating a containing shape of the previous level
/// is marked as containing without a test. The first level whose shapes all
/// contain `F` ends the search with `X = k - 1`; its witnesses become the
/// certificate.
pub fn x_of_with(f: &Configuration, opts: XOptions) -> Result<XResult, XError> {
    if f.rows() == 0 {
        return Err(XError::ZeroRows);
    }
    if f.num_columns() == 0 {
        return Err(XError::EmptyConfiguration);
    }
    if f.rows() > X_MAX_ROWS {
        return Err(XError::RowGuard { rows: f.rows() });
    }
    let work = if opts.reduce { reduce_multiplicities(f) } else { f.clone() };
    let rows = work.rows() as u32;

    let mut containing: HashSet<ProductShape> = HashSet::new();
    let mut last_avoider: Option<ProductShape> = None;
    for k in 1..=rows + 1 {
        let shapes = compositions(k);
        let propagated: Vec<bool> = shapes
            .iter()
            .map(|s| {
                let mut preds = Vec::new();
                if s.a > 0 {
                    preds.push(ProductShape::new(s.a - 1, s.b, s.c));
                }
                if s.b > 0 {
                    preds.push(ProductShape::new(s.a, s.b - 1, s.c));
                }
                if s.c > 0 {
                    preds.push(ProductShape::new(s.a, s.b, s.c - 1));
                }
                preds.iter().any(|p| containing.contains(p))
            })
            .collect();

        let to_test: Vec<ProductShape> = shapes
            .iter()
            .zip(&propagated)
            .filter(|(_, &prop)| !prop)
            .map(|(&s, _)| s)
            .collect();
        let tested = test_shapes(&work, &to_test, opts.jobs);

        let mut witnesses: Vec<Option<RowPartition>> = vec![None; shapes.len()];
        let mut level_avoider: Option<ProductShape> = None;
        let mut test_iter = tested.into_iter();
        for (i, shape) in shapes.iter().enumerate() {
            if propagated[i] {
                containing.insert(*shape);
                continue;
            }
            match test_iter.next().expect("one result per tested shape") {
                Some(witness) => {
                    witnesses[i] = Some(witness);
                    containing.insert(*shape);
                }
                None => {
                    if level_avoider.is_none() {
                        level_avoider = Some(*shape);
                    }
                }
            }
        }

        match level_avoider {
            Some(shape) => last_avoider = Some(shape),
            None => {
                // Every shape of this level contains F. Fill in witnesses for
                // the propagated shapes and assemble the certificate.
                let entries: Vec<(ProductShape, RowPartition)> = shapes
                    .iter()
                    .zip(witnesses)
                    .map(|(&shape, w)| {
                        let witness = w.unwrap_or_else(|| {
                            member_of_family(&work, shape)
                                .expect("propagated shape must contain F")
                        });
                        (shape, witness)
                    })
                    .collect();
                return Ok(XResult {
                    x_value: k - 1,
                    avoiding_shape: last_avoider.unwrap_or(ProductShape::new(0, 0, 0)),
                    certificate: Certificate { k, entries },
                });
            }
        }
    }
    unreachable!("a level with k = rows + 1 places every row in its own factor");
}

fn test_shapes(
    work: &Configuration,
    shapes: &[ProductShape],
    jobs: usize,
) -> Vec<Option<RowPartition>> {
    if jobs <= 1 || shapes.len() <= 1 {
        return shapes.iter().map(|&s| member_of_family(work, s)).collect();
    }
    let workers = jobs.min(shapes.len());
    let mut results: Vec<Option<Option<RowPartition>>> = vec![None; shapes.len()];
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    let mut out = Vec::new();
                    let mut i = w;
                    while i < shapes.len() {
                        out.push((i, member_of_family(work, shapes[i])));
                        i += workers;
                    }
                    out
                })
            })
            .collect();
        for handle in handles {
            for (i, r) in handle.join().expect("shape worker panicked") {
                results[i] = Some(r);
            }
        }
    });
    results.into_iter().map(|r| r.expect("every index computed")).collect()
}

/// Produces a certificate for `X(F) < k` when one exists, i.e. when every
/// shape at level `k` contains `F`.
pub fn emit_certificate(f: &Configuration, k: u32) -> Result<Option<Certificate>, XError> {
    if f.rows() == 0 {
        return Err(XError::ZeroRows);
    }
    if f.num_columns() == 0 {
        return Err(XError::EmptyConfiguration);
    }
    if k == 0 || k > f.rows() as u32 + 1 {
        return Err(XError::CertificateLevel { k, rows: f.rows() });
    }
    let work = reduce_multiplicities(f);
    let mut entries = Vec::new();
    for shape in compositions(k) {
        match member_of_family(&work, shape) {
            Some(witness) => entries.push((shape, witness)),
            None => return Ok(None),
        }
    }
    Ok(Some(Certificate { k, entries }))
}

/// Checks one certificate entry against `f`. `Err` is a malformed partition;
/// `Ok(false)` means the counts fail.
pub fn entry_satisfies(
    f: &Configuration,
    shape: ProductShape,
    partition: &RowPartition,
) -> Result<bool, String> {
    let m = f.rows();
    let total = shape.total();
    if partition.factor_of.len() != m || partition.order_in_factor.len() != m {
        return Err(format!(
            "partition assigns {} of {m} rows",
            partition.factor_of.len().min(partition.order_in_factor.len())
        ));
    }
    for (row, &fi) in partition.factor_of.iter().enumerate() {
        if fi >= total {
            return Err(format!("row {row} assigned to factor {fi}, but the shape has {total}"));
        }
    }
    // Rows of each factor ordered by their stated positions; the positions
    // must be exactly 0..count.
    let mut factor_rows: Vec<Vec<(u32, usize)>> = vec![Vec::new(); total as usize];
    for row in 0..m {
        factor_rows[partition.factor_of[row] as usize].push((partition.order_in_factor[row], row));
    }
    for (fi, rows) in factor_rows.iter_mut().enumerate() {
        rows.sort_unstable();
        for (expect, &(pos, _)) in rows.iter().enumerate() {
            if pos as usize != expect {
                return Err(format!("factor {fi} has a broken row order"));
            }
        }
    }

    let t = f.num_columns();
    for (alpha, need) in f.support() {
        let mut product: u128 = 1;
        for (fi, rows) in factor_rows.iter().enumerate() {
            let bits: Vec<bool> =
                rows.iter().map(|&(_, row)| alpha >> (m - 1 - row) & 1 == 1).collect();
            let avail = avoid_matrix_multiplicity(shape.kind_of(fi as u32), &bits, t);
            product = product.saturating_mul(avail as u128);
            if product == 0 {
                break;
            }
        }
        if product < need as u128 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verifies a certificate for `X(F) < cert.k`: the entries must cover every
/// shape of the level exactly once and each row partition must pass the
/// count check. Polynomial in `‖F‖`, `rows(F)` and `k`.
pub fn verify_certificate(f: &Configuration, cert: &Certificate) -> CertificateVerdict {
    if cert.k == 0 {
        return CertificateVerdict::Malformed("certificate level k must be positive".into());
    }
    let expected = compositions(cert.k);
    let mut seen: HashSet<ProductShape> = HashSet::new();
    for (shape, _) in &cert.entries {
        if shape.total() != cert.k {
            return CertificateVerdict::Rejected(format!(
                "shape {shape} does not sum to k={}",
                cert.k
            ));
        }
        if !seen.insert(*shape) {
            return CertificateVerdict::Rejected(format!("shape {shape} appears twice"));
        }
    }
    if seen.len() != expected.len() {
        return CertificateVerdict::Rejected(format!(
            "coverage incomplete: {} of {} shapes present",
            seen.len(),
            expected.len()
        ));
    }
    for (shape, partition) in &cert.entries {
        match entry_satisfies(f, *shape, partition) {
            Err(reason) => return CertificateVerdict::Malformed(reason),
            Ok(false) => {
                return CertificateVerdict::Rejected(format!("entry for shape {shape} fails"))
            }
            Ok(true) => {}
        }
    }
    CertificateVerdict::Accepted
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{generator, Configuration, FactorKind};

    fn cfg(rows: &[&str]) -> Configuration {
        Configuration::from_dense(rows).unwrap()
    }

    #[test]
    fn reduce_caps_at_two() {
        let f = cfg(&["11111", "11111"]);
        let reduced = reduce_multiplicities(&f);
        assert_eq!(reduced, cfg(&["11", "11"]));
        let simple = cfg(&["01", "10"]);
        assert_eq!(reduce_multiplicities(&simple), simple);
    }

    #[test]
    fn x_of_single_one() {
        let r = x_of(&cfg(&["1"])).unwrap();
        assert_eq!(r.x_value, 0);
        assert_eq!(r.avoiding_shape, ProductShape::new(0, 0, 0));
    }

    #[test]
    fn x_of_full_column() {
        let r = x_of(&cfg(&["1", "1"])).unwrap();
        assert_eq!(r.x_value, 1);
        assert_eq!(r.avoiding_shape, ProductShape::new(1, 0, 0));
    }

    #[test]
    fn x_of_mixed_column() {
        let r = x_of(&cfg(&["1", "0"])).unwrap();
        assert_eq!(r.x_value, 0);
    }

    #[test]
    fn x_of_identity() {
        let i2 = generator(FactorKind::Identity, 2).unwrap();
        let r = x_of(&i2).unwrap();
        assert_eq!(r.x_value, 1);
        assert_eq!(r.avoiding_shape, ProductShape::new(0, 0, 1));
    }

    #[test]
    fn x_of_doubled_full_column() {
        let r = x_of(&cfg(&["11", "11"])).unwrap();
        assert_eq!(r.x_value, 2);
        assert_eq!(r.avoiding_shape, ProductShape::new(2, 0, 0));
        assert!(member_of_family(&cfg(&["11", "11"]), r.avoiding_shape).is_none());
    }

    #[test]
    fn x_respects_row_bound() {
        for f in [cfg(&["101", "011", "110"]), cfg(&["111", "111", "111"]), cfg(&["100", "010", "001"])] {
            let r = x_of(&f).unwrap();
            assert!(r.x_value <= 3);
        }
    }

    #[test]
    fn x_reduction_invariance() {
        let doubled = cfg(&["11", "11"]);
        let tripled = cfg(&["111", "111"]);
        let unreduced = x_of_with(&tripled, XOptions { reduce: false, jobs: 1 }).unwrap();
        assert_eq!(unreduced.x_value, x_of(&doubled).unwrap().x_value);
        assert_eq!(unreduced.x_value, 2);
    }

    #[test]
    fn x_input_validation() {
        assert!(matches!(x_of(&Configuration::new(0, vec![1]).unwrap()), Err(XError::ZeroRows)));
        assert!(matches!(x_of(&Configuration::empty(2).unwrap()), Err(XError::EmptyConfiguration)));
        let tall = Configuration::from_columns(13, &[(0, 1)]).unwrap();
        assert!(matches!(x_of(&tall), Err(XError::RowGuard { rows: 13 })));
    }

    #[test]
    fn jobs_do_not_change_results() {
        for f in [cfg(&["11", "11"]), cfg(&["10", "01"]), cfg(&["110", "011", "101"])] {
            let seq = x_of(&f).unwrap();
            let par = x_of_with(&f, XOptions { reduce: true, jobs: 4 }).unwrap();
            assert_eq!(seq, par);
        }
    }

    #[test]
    fn certificate_for_mixed_column() {
        let f = cfg(&["1", "0"]);
        let cert = emit_certificate(&f, 1).unwrap().expect("X([1;0]) = 0 < 1");
        assert_eq!(cert.entries.len(), 3);
        assert!(verify_certificate(&f, &cert).is_accepted());
    }

    #[test]
    fn certificate_absent_below_x() {
        let i2 = generator(FactorKind::Identity, 2).unwrap();
        assert!(emit_certificate(&i2, 1).unwrap().is_none());
        assert!(emit_certificate(&i2, 2).unwrap().is_some());
    }

    #[test]
    fn certificate_at_rows_plus_one_always_exists() {
        for f in [cfg(&["1", "0"]), cfg(&["11", "11"]), cfg(&["101", "011", "110"])] {
            let k = f.rows() as u32 + 1;
            assert!(emit_certificate(&f, k).unwrap().is_some());
        }
        assert!(matches!(
            emit_certificate(&cfg(&["1"]), 3),
            Err(XError::CertificateLevel { k: 3, .. })
        ));
    }

    #[test]
    fn certificate_roundtrip_with_x() {
        for f in [cfg(&["11", "11"]), cfg(&["10", "01"]), cfg(&["1", "1"])] {
            let r = x_of(&f).unwrap();
            assert_eq!(r.certificate.k, r.x_value + 1);
            assert!(verify_certificate(&f, &r.certificate).is_accepted());
        }
    }

    #[test]
    fn certificate_coverage_deletion_rejected() {
        let f = cfg(&["1", "0"]);
        let mut cert = emit_certificate(&f, 1).unwrap().unwrap();
        cert.entries.remove(0);
        assert!(matches!(verify_certificate(&f, &cert), CertificateVerdict::Rejected(_)));
    }

    #[test]
    fn certificate_tower_order_reversal_rejected() {
        let f = cfg(&["1", "0"]);
        let mut cert = emit_certificate(&f, 1).unwrap().unwrap();
        let tower_entry = cert
            .entries
            .iter_mut()
            .find(|(shape, _)| shape.c == 1)
            .expect("level 1 includes the tower shape");
        tower_entry.1.order_in_factor.reverse();
        assert!(matches!(verify_certificate(&f, &cert), CertificateVerdict::Rejected(_)));
    }

    #[test]
    fn certificate_malformed_partition() {
        let f = cfg(&["1", "0"]);
        let mut cert = emit_certificate(&f, 1).unwrap().unwrap();
        cert.entries[0].1.factor_of[1] = 7;
        assert!(matches!(verify_certificate(&f, &cert), CertificateVerdict::Malformed(_)));
        let mut cert2 = emit_certificate(&f, 1).unwrap().unwrap();
        cert2.entries[0].1.factor_of.pop();
        assert!(matches!(verify_certificate(&f, &cert2), CertificateVerdict::Malformed(_)));
    }
}
