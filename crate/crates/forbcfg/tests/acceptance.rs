//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its elapsed time (run with `--nocapture` to see them).

mod common;

use std::time::Instant;

use common::{cfg, enumerate_configs, random_config};
use forbcfg::config::{generator, Configuration, FactorKind};
use forbcfg::containment::{contains, contains_naive};
use forbcfg::forb::forb_exact;
use forbcfg::hardness::{chromatic_number, check_reduction, reduction_matrix, Graph};
use forbcfg::products::{
    compositions, explicit_product, family_membership_oracle, member_of_family,
    required_oracle_r, ProductShape,
};
use forbcfg::xcompute::{
    emit_certificate, entry_satisfies, verify_certificate, x_of, x_of_with, CertificateVerdict,
    XError, XOptions,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn criterion_1_worked_forb_values() {
    let start = Instant::now();
    let full = cfg(&["1", "1"]);
    for m in 1..=4u32 {
        assert_eq!(forb_exact(m, &full).unwrap().value, m as u64 + 1, "forb({m}, [1;1])");
    }
    let mixed = cfg(&["1", "0"]);
    for m in 2..=4u32 {
        assert_eq!(forb_exact(m, &mixed).unwrap().value, 2, "forb({m}, [1;0])");
    }
    let block = cfg(&["11", "11"]);
    assert_eq!(forb_exact(4, &block).unwrap().value, 11);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 5, "criterion 1 exceeded 5 s: {elapsed:?}");
    println!("criterion 1: PASS (worked forb values, {elapsed:?})");
}

/// Membership and the explicit-product oracle must agree on every shape up
/// to the given level, with the oracle run at its sufficiency radius.
fn cross_validate_levels(f: &Configuration, max_level: u32) {
    for shape in (1..=max_level).flat_map(compositions) {
        let r = required_oracle_r(f, shape);
        assert!(
            (r * shape.total()) as usize <= forbcfg::config::MAX_ROWS,
            "oracle infeasible for shape {shape} at r = {r}"
        );
        let fast = member_of_family(f, shape).is_some();
        let oracle = family_membership_oracle(f, shape, r).unwrap();
        assert_eq!(fast, oracle, "disagreement on {f:?}, shape {shape}, r = {r}");
    }
}

#[test]
fn criterion_2_x_values_cross_validated() {
    let start = Instant::now();
    let cases = [
        (cfg(&["1", "0"]), 0u32),
        (cfg(&["1", "1"]), 1),
        (generator(FactorKind::Identity, 2).unwrap(), 1),
        (cfg(&["11", "11"]), 2),
    ];
    for (f, expected) in &cases {
        let result = x_of(f).unwrap();
        assert_eq!(result.x_value, *expected, "X({f:?})");
        cross_validate_levels(f, expected + 1);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "criterion 2 exceeded 10 s: {elapsed:?}");
    println!("criterion 2: PASS (X values with oracle cross-validation, {elapsed:?})");
}

#[test]
fn criterion_3_row_bound_sweep() {
    let start = Instant::now();
    let mut checked = 0u64;
    for rows in 1..=2usize {
        for n in 1..=3usize {
            for f in enumerate_configs(rows, n, 2) {
                let x = x_of(&f).unwrap().x_value;
                assert!(x as usize <= rows, "X({f:?}) = {x} exceeds {rows} rows");
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion 3 exceeded 60 s: {elapsed:?}");
    println!("criterion 3: PASS (X <= rows on {checked} configurations, {elapsed:?})");
}

#[test]
fn criterion_4_multiplicity_cap_invariance() {
    let start = Instant::now();
    let seed = 0xc0de_0004u64;
    println!("seed: {seed:#x}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < 50 {
        let rows = rng.random_range(1..=3usize);
        // Disjoint simple column sets for the common part and the repeated part.
        let universe = 1u32 << rows;
        let mut h_cols: Vec<u32> = Vec::new();
        for alpha in 0..universe {
            if rng.random_bool(0.4) {
                h_cols.push(alpha);
            }
        }
        if h_cols.is_empty() {
            continue;
        }
        let mut g_cols: Vec<u32> = Vec::new();
        for alpha in 0..universe {
            if !h_cols.contains(&alpha) && rng.random_bool(0.3) {
                g_cols.push(alpha);
            }
        }
        let build = |t: u8| -> Configuration {
            let mut pairs: Vec<(u32, u8)> = g_cols.iter().map(|&c| (c, 1)).collect();
            pairs.extend(h_cols.iter().map(|&c| (c, t)));
            Configuration::from_columns(rows, &pairs).unwrap()
        };
        let doubled = build(2);
        let tripled = build(3);
        let x2 = x_of(&doubled).unwrap().x_value;
        let x3 = x_of_with(&tripled, XOptions { reduce: false, jobs: 1 }).unwrap().x_value;
        assert_eq!(x2, x3, "X([G|2H]) != X([G|3H]) for G={g_cols:?}, H={h_cols:?}");
        done += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "criterion 4 exceeded 10 min: {elapsed:?}");
    println!("criterion 4: PASS (50 seeded pairs, {elapsed:?})");
}

#[test]
fn criterion_5_oracle_equivalence() {
    let start = Instant::now();

    // Exhaustive containment suite: every pair with <= 3 rows, <= 4 columns.
    let mut suite: Vec<Configuration> = vec![Configuration::new(0, vec![0]).unwrap()];
    for rows in 0..=3usize {
        for n in 0..=4usize {
            if n == 0 {
                if rows > 0 {
                    suite.push(Configuration::empty(rows).unwrap());
                }
                continue;
            }
            suite.extend(enumerate_configs(rows, n, 4));
        }
    }
    let mut pairs = 0u64;
    for f in &suite {
        for a in &suite {
            assert_eq!(
                contains(f, a).is_some(),
                contains_naive(f, a).unwrap(),
                "containment disagreement: {f:?} in {a:?}"
            );
            pairs += 1;
        }
    }

    // 500 seeded random pairs inside the naive oracle's guard.
    let seed = 0xc0de_0005u64;
    println!("seed: {seed:#x}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..500 {
        let f = random_config(&mut rng, 3, 4, 2);
        let a = random_config(&mut rng, 5, 8, 2);
        assert_eq!(contains(&f, &a).is_some(), contains_naive(&f, &a).unwrap());
    }

    // Family membership against explicit products, exhaustively on <= 3 rows,
    // <= 3 columns, shapes with at most two factors.
    let mut member_checks = 0u64;
    for rows in 1..=3usize {
        for n in 1..=3usize {
            for f in enumerate_configs(rows, n, 3) {
                for shape in (1..=2u32).flat_map(compositions) {
                    let r = required_oracle_r(&f, shape);
                    let fast = member_of_family(&f, shape).is_some();
                    let oracle = family_membership_oracle(&f, shape, r).unwrap();
                    assert_eq!(fast, oracle, "membership disagreement: {f:?}, {shape}, r={r}");
                    member_checks += 1;
                }
            }
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "criterion 5 exceeded 10 min: {elapsed:?}");
    println!(
        "criterion 5: PASS ({pairs} containment pairs + 500 random, {member_checks} membership checks, {elapsed:?})"
    );
}

#[test]
fn criterion_6_certificate_soundness() {
    let start = Instant::now();
    let seed = 0xc0de_0006u64;
    println!("seed: {seed:#x}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut patterns = Vec::new();
    while patterns.len() < 20 {
        let f = random_config(&mut rng, 4, 5, 2);
        patterns.push(f);
    }
    for f in &patterns {
        let x = x_of(f).unwrap().x_value;
        let cert = emit_certificate(f, x + 1).unwrap().expect("level X+1 certifies");
        assert!(verify_certificate(f, &cert).is_accepted(), "roundtrip failed for {f:?}");
    }

    // 200 single-field mutations that genuinely break validity must all be
    // rejected. Mutations that happen to leave a still-valid witness (a row
    // moved into an equally accommodating factor) are skipped, since
    // accepting a different true certificate is correct behavior.
    let mut rejected = 0u32;
    let mut attempts = 0u32;
    while rejected < 200 {
        attempts += 1;
        assert!(attempts < 20_000, "mutation generation stalled");
        let f = &patterns[rng.random_range(0..patterns.len())];
        let x = x_of(f).unwrap().x_value;
        let mut cert = emit_certificate(f, x + 1).unwrap().unwrap();
        match rng.random_range(0..3u32) {
            0 => {
                // Coverage deletion: always invalid.
                let idx = rng.random_range(0..cert.entries.len());
                cert.entries.remove(idx);
            }
            1 => {
                // Assign perturbation; keep only if the entry stops verifying.
                let idx = rng.random_range(0..cert.entries.len());
                let (shape, partition) = &mut cert.entries[idx];
                let row = rng.random_range(0..partition.factor_of.len());
                let new_factor = rng.random_range(0..shape.total());
                if partition.factor_of[row] == new_factor {
                    continue;
                }
                partition.factor_of[row] = new_factor;
                // Re-number positions so the mutation hits the counts, not
                // the well-formedness check.
                renumber_orders(partition);
                if entry_satisfies(f, *shape, partition).unwrap_or(false) {
                    continue;
                }
            }
            _ => {
                // Tower order reversal; keep only if a prefix pattern breaks.
                let idx = rng.random_range(0..cert.entries.len());
                let (shape, partition) = &mut cert.entries[idx];
                if shape.c == 0 {
                    continue;
                }
                reverse_tower_orders(partition, shape);
                if entry_satisfies(f, *shape, partition).unwrap_or(false) {
                    continue;
                }
            }
        }
        match verify_certificate(f, &cert) {
            CertificateVerdict::Accepted => panic!("mutated certificate accepted for {f:?}"),
            _ => rejected += 1,
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "criterion 6 exceeded 5 min: {elapsed:?}");
    println!("criterion 6: PASS (20 roundtrips, {rejected} mutations rejected in {attempts} attempts, {elapsed:?})");
}

fn renumber_orders(partition: &mut forbcfg::products::RowPartition) {
    let factors = partition.factor_of.iter().copied().max().unwrap_or(0) + 1;
    for fi in 0..factors {
        let mut pos = 0;
        for row in 0..partition.factor_of.len() {
            if partition.factor_of[row] == fi {
                partition.order_in_factor[row] = pos;
                pos += 1;
            }
        }
    }
}

fn reverse_tower_orders(partition: &mut forbcfg::products::RowPartition, shape: &ProductShape) {
    for fi in (shape.a + shape.b)..shape.total() {
        let rows: Vec<usize> = (0..partition.factor_of.len())
            .filter(|&r| partition.factor_of[r] == fi)
            .collect();
        let size = rows.len() as u32;
        for &r in &rows {
            partition.order_in_factor[r] = size - 1 - partition.order_in_factor[r];
        }
    }
}

#[test]
fn criterion_7_hardness_reduction_desk_scale() {
    let start = Instant::now();
    let k2 = Graph::new(2, [(1, 2)]).unwrap();

    let build = Instant::now();
    let f = reduction_matrix(&k2, 4).unwrap();
    assert!(build.elapsed().as_secs() < 1, "construction exceeded 1 s");
    assert_eq!((f.rows(), f.num_columns()), (10, 6));
    assert!(f.is_simple());

    let result = x_of(&f).unwrap();
    assert_eq!(result.x_value, 9, "X(F(K2))");
    assert!(result.x_value as usize <= f.rows());
    let chi = chromatic_number(&k2).unwrap();
    assert_eq!(chi, 2);
    assert_eq!(result.x_value as i64, 2 * 4 + chi as i64 - 1);
    // The pure-identity shape realizes the maximum avoider. Its mirror
    // (0,9,0) avoids as well (F(K2) has both constant columns), so the
    // lex-smallest reported avoider is the mirror.
    assert!(member_of_family(&f, ProductShape::new(9, 0, 0)).is_none());
    assert_eq!(result.avoiding_shape, ProductShape::new(0, 9, 0));
    assert!(check_reduction(&k2, 4).unwrap());

    // K3 needs 2M + n = 13 rows, beyond the search guard; documented, not run.
    let k3 = Graph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
    let f3 = reduction_matrix(&k3, 5).unwrap();
    assert!(matches!(x_of(&f3), Err(XError::RowGuard { rows: 13 })));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 1800, "criterion 7 exceeded 30 min: {elapsed:?}");
    println!("criterion 7: PASS (X(F(K2)) = 9 = 2M + chi - 1, {elapsed:?})");
}

#[test]
fn criterion_8_forb_order_and_complement_invariance() {
    let start = Instant::now();
    let mut suite = Vec::new();
    for rows in 1..=2usize {
        for n in 1..=2usize {
            suite.extend(enumerate_configs(rows, n, 2));
        }
    }
    let mut checked = 0u64;
    for f in &suite {
        for g in &suite {
            if contains(f, g).is_none() {
                continue;
            }
            for m in 1..=4u32 {
                let vf = forb_exact(m, f).unwrap().value;
                let vg = forb_exact(m, g).unwrap().value;
                assert!(vf <= vg, "forb({m},{f:?}) = {vf} > {vg} = forb({m},{g:?})");
                checked += 1;
            }
        }
    }
    for f in &suite {
        for m in 1..=4u32 {
            assert_eq!(
                forb_exact(m, f).unwrap().value,
                forb_exact(m, &f.complement()).unwrap().value,
                "complement invariance failed for {f:?} at m={m}"
            );
        }
    }
    let elapsed = start.elapsed();
    println!("criterion 8: PASS ({checked} order checks + complement invariance, {elapsed:?})");
}

#[test]
fn criterion_9_asymptotics_by_property_substitution() {
    // The asymptotic statements themselves (growth of forb, the general
    // polynomial bound) are not reproducible at desk scale. They are covered
    // here by their finite shadows: avoiding products of the reported shape
    // grow as r^X and stay avoiding, including after trimming rows, and the
    // row bound on X holds throughout the sweeps of criterion 3.
    let start = Instant::now();
    let cases = [
        (cfg(&["1", "1"]), ProductShape::new(1, 0, 0)),
        (cfg(&["11", "11"]), ProductShape::new(2, 0, 0)),
        (generator(FactorKind::Identity, 2).unwrap(), ProductShape::new(0, 0, 1)),
    ];
    for (f, shape) in &cases {
        let result = x_of(f).unwrap();
        assert_eq!(result.avoiding_shape, *shape);
        for r in 1..=4u32 {
            let p = explicit_product(*shape, r).unwrap();
            let expected = (r as u64).pow(shape.a + shape.b) * (r as u64 + 1).pow(shape.c);
            assert_eq!(p.num_columns(), expected, "norm growth at r={r}");
            assert!(contains(f, &p).is_none(), "{f:?} appears in its avoider at r={r}");
            // Trimming rows preserves avoidance.
            for keep in f.rows()..=p.rows().min(6) {
                let sel = forbcfg::config::RowSet::from_rows(0..keep, p.rows()).unwrap();
                let trimmed = p.restrict(sel).unwrap();
                assert!(contains(f, &trimmed).is_none(), "trimmed product contains {f:?}");
            }
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 9: PASS (asymptotics covered by finite property checks only, {elapsed:?})"
    );
}
