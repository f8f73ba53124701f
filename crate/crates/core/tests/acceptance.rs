//! The ten acceptance criteria. Each test writes one line
//! `criterion N: PASS|FAIL ...` to stderr, captured or not.

use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use weylkit::clifford::max_ext_suite;
use weylkit::levi::{all_normalized, decompose};
use weylkit::report::{check_wreath, quaternion_control, two_class_record, wreath_fixtures, Status};
use weylkit::shadow::{enumerate_shadows, random_shadow, representative_weights, table_case, EnumCaps, TableRow};
use weylkit::signed::{check_rel_weyl, GROUP_CAP};
use weylkit::spin::relation_suite;
use weylkit::torus::{center_summary, TorusModel};

fn verdict(n: u32, ok: bool, t: Instant, msg: String) {
    // straight to stderr so the line shows even when libtest captures output
    let line = format!("criterion {n}: {} ({:.1} s) {msg}\n", if ok { "PASS" } else { "FAIL" }, t.elapsed().as_secs_f64());
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {msg}");
}

#[test]
fn criterion_01_relative_weyl_groups() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for l in [4, 5] {
        for lv in all_normalized(l) {
            count += 1;
            let c = check_rel_weyl(&decompose(&lv), GROUP_CAP).unwrap();
            if !c.ok() {
                bad.push(format!("l={l} {:?}", lv.delta));
            }
        }
    }
    verdict(1, bad.is_empty() && t.elapsed().as_secs() < 240, t, format!("{count} Levi data, mismatches {bad:?}"));
}

#[test]
fn criterion_02_relation_suite() {
    let t = Instant::now();
    let mut failed = Vec::new();
    let mut count = 0;
    for l in [4, 5] {
        for (levi, rels) in relation_suite(l, 3).unwrap() {
            for r in rels {
                count += 1;
                if !r.holds {
                    failed.push(format!("l={l} {levi}: {} ({})", r.name, r.detail));
                }
            }
        }
    }
    verdict(2, failed.is_empty(), t, format!("{count} relations checked, {} fail: {failed:?}", failed.len()));
}

#[test]
fn criterion_03_max_extendibility() {
    let t = Instant::now();
    let mut msgs = Vec::new();
    let mut ok = true;
    for l in 2..=4 {
        let r = max_ext_suite(l, true).unwrap();
        let witnesses = r.characters.iter().filter(|c| c.witness && c.table_extends == Some(true)).count();
        ok &= r.characters.len() == 1 << l && witnesses == r.characters.len() && r.all_extend && r.structure_holds;
        msgs.push(format!("l'={l}: {witnesses}/{} witnessed, structure {}", r.characters.len(), r.structure_holds));
    }
    verdict(3, ok, t, msgs.join("; "));
}

#[test]
fn criterion_04_quaternion_obstruction() {
    let t = Instant::now();
    let (status, details) = quaternion_control();
    verdict(4, status == Status::Pass, t, details.to_string());
}

#[test]
fn criterion_05_two_orbit_weight_two() {
    let t = Instant::now();
    let (status, details) = two_class_record();
    verdict(5, status == Status::Pass, t, details["orders"].to_string());
}

#[test]
fn criterion_06_stable_cover() {
    let t = Instant::now();
    let mut total = 0;
    let mut failures = Vec::new();
    for ws in representative_weights(4) {
        let list = enumerate_shadows(&ws, EnumCaps::default());
        total += list.len();
        failures.extend(
            list.par_iter()
                .filter(|s| !s.verify_stable_cover().map(|r| r.ok()).unwrap_or(false))
                .map(|s| s.to_json().to_string())
                .collect::<Vec<_>>(),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let sample: Vec<_> = (0..100).map(|i| random_shadow(&mut rng, 5 + i % 2)).collect();
    failures.extend(
        sample
            .par_iter()
            .filter(|s| !s.verify_stable_cover().map(|r| r.ok()).unwrap_or(false))
            .map(|s| s.to_json().to_string())
            .collect::<Vec<_>>(),
    );
    failures.truncate(3);
    let ok = failures.is_empty() && t.elapsed().as_secs() < 15 * 60;
    verdict(6, ok, t, format!("{total} exhaustive + 100 random shadows, first failures {failures:?}"));
}

#[test]
fn criterion_07_table_rows() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for row in TableRow::ALL {
        for l1 in 1..=3 {
            for l2 in 1..=3 {
                if !table_case(l1, l2, row).unwrap().matches() {
                    bad.push(format!("{row:?} ({l1},{l2})"));
                }
            }
        }
    }
    verdict(7, bad.is_empty(), t, format!("27 cases, mismatches {bad:?}"));
}

#[test]
fn criterion_08_wreath_equivariance() {
    let t = Instant::now();
    let mut msgs = Vec::new();
    let mut ok = true;
    for (id, setup) in wreath_fixtures() {
        let r = check_wreath(&setup.unwrap());
        ok &= r.is_ok();
        msgs.push(format!("({id}) {}", if r.is_ok() { "ok".to_string() } else { r.unwrap_err() }));
    }
    verdict(8, ok, t, msgs.join("; "));
}

#[test]
fn criterion_09_formula_vs_oracle() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let sample: Vec<_> = (0..500).map(|i| random_shadow(&mut rng, 1 + i % 5)).collect();
    let bad: Vec<String> =
        sample.par_iter().filter(|s| !s.oracle().matches(&s.rel_weyl())).map(|s| s.to_json().to_string()).collect();
    verdict(9, bad.is_empty() && t.elapsed().as_secs() < 300, t, format!("500 shadows, {} mismatches", bad.len()));
}

#[test]
fn criterion_10_center() {
    let t = Instant::now();
    let mut msgs = Vec::new();
    let mut ok = true;
    for l in 4..=7 {
        let (order, cyclic) = center_summary(&TorusModel::new(l, 3).unwrap());
        ok &= order == 4 && cyclic == (l % 2 == 1);
        msgs.push(format!("l={l}: order {order}, cyclic {cyclic}"));
    }
    verdict(10, ok, t, msgs.join("; "));
}
