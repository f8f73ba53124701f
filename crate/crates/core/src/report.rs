//! Verification suites and the report they produce.
//!
//! A report is a flat list of records in a fixed order. Wall times are
//! only included when asked for, so that two runs with the same flags and
//! seed produce byte-identical JSON.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::clifford::{max_ext_suite, WreathSetup};
use crate::error::Result;
use crate::group::{FiniteGroup, GroupElement, Perm};
use crate::levi::{all_normalized, decompose};
use crate::shadow::{
    clifford_rows, enumerate_shadows, random_shadow, representative_weights, table_case, two_class_weight_two,
    CuspidalShadow, EnumCaps, Stab, TableRow,
};
use crate::signed::{check_rel_weyl, GROUP_CAP};
use crate::small::{cyclic, quaternion, symmetric};
use crate::spin::relation_suite;
use crate::torus::{center_summary, TorusModel};

pub const SCHEMA_VERSION: u32 = 1;

/// Default enumeration cap for the relweyl suite; admits `l ≤ 6`.
pub const RELWEYL_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub id: String,
    pub status: Status,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub suite: String,
    pub rank: usize,
    pub seed: u64,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(suite: &str, rank: usize, seed: u64, records: Vec<Record>) -> Self {
        let mut summary = Summary::default();
        for r in &records {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            suite: suite.to_string(),
            rank,
            seed,
            records,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("suite {} (rank {}, seed {})\n", self.suite, self.rank, self.seed);
        for r in &self.records {
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            let time = r.wall_ms.map(|t| format!(" [{t} ms]")).unwrap_or_default();
            let details = match &r.details {
                Value::Null => String::new(),
                Value::String(d) => format!("  {d}"),
                d => format!("  {d}"),
            };
            s.push_str(&format!("{status}  {}{time}{details}\n", r.id));
        }
        s.push_str(&format!(
            "{} passed, {} failed, {} skipped\n",
            self.summary.pass, self.summary.fail, self.summary.skipped
        ));
        s
    }
}

/// Options shared by all suites.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub rank: usize,
    pub seed: u64,
    /// largest `|W(B_l)|` the relweyl suite enumerates
    pub cap: usize,
    pub max_orbits: usize,
    pub timings: bool,
    /// random shadows checked against the stabilizer oracle
    pub oracle_samples: usize,
    /// random shadows with 5 or 6 orbits run through the cover check
    pub large_samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            rank: 4,
            seed: 0,
            cap: RELWEYL_CAP,
            max_orbits: 4,
            timings: false,
            oracle_samples: 500,
            large_samples: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Relations,
    RelWeyl,
    Extend,
    Shadows,
    Table1,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Relations => "relations",
            Suite::RelWeyl => "relweyl",
            Suite::Extend => "extend",
            Suite::Shadows => "shadows",
            Suite::Table1 => "table1",
            Suite::All => "all",
        }
    }
}

struct Timed<'a> {
    timings: bool,
    out: &'a mut Vec<Record>,
}

impl Timed<'_> {
    fn run(&mut self, id: impl Into<String>, f: impl FnOnce() -> (Status, Value)) {
        let t = Instant::now();
        let (status, details) = f();
        let wall_ms = self.timings.then(|| t.elapsed().as_millis() as u64);
        self.out.push(Record { id: id.into(), status, details, wall_ms });
    }
}

fn error_record(e: crate::error::Error) -> (Status, Value) {
    (Status::Fail, json!({ "error": e.to_string() }))
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Report {
    let mut records = Vec::new();
    let mut t = Timed { timings: opts.timings, out: &mut records };
    let all = suite == Suite::All;
    if all || suite == Suite::Relations {
        relations(&mut t, opts);
    }
    if all || suite == Suite::RelWeyl {
        relweyl(&mut t, opts);
    }
    if all || suite == Suite::Extend {
        extend(&mut t);
    }
    if all || suite == Suite::Shadows {
        shadows(&mut t, opts);
    }
    if all || suite == Suite::Table1 {
        table1(&mut t);
    }
    Report::new(suite.name(), opts.rank, opts.seed, records)
}

fn relations(t: &mut Timed, opts: &SuiteOptions) {
    let l = opts.rank;
    match relation_suite(l, 3) {
        Ok(map) => {
            for (levi, rels) in map {
                for r in rels {
                    let details = if r.detail.is_empty() { Value::Null } else { json!(r.detail) };
                    t.run(format!("relations/l{l}/{levi}/{}", r.name), || (Status::of(r.holds), details));
                }
            }
        }
        Err(e) => t.run(format!("relations/l{l}"), || error_record(e)),
    }
    t.run(format!("center/l{l}"), || match TorusModel::new(l, 3) {
        Ok(m) => {
            let (order, cyclic) = center_summary(&m);
            (Status::of(order == 4 && cyclic == (l % 2 == 1)), json!({ "order": order, "cyclic": cyclic }))
        }
        Err(e) => error_record(e),
    });
}

fn relweyl(t: &mut Timed, opts: &SuiteOptions) {
    let l = opts.rank;
    let order_b: usize = (1usize << l) * (1..=l).product::<usize>();
    if order_b > opts.cap {
        t.run(format!("relweyl/l{l}"), || {
            (Status::Skipped, json!(format!("|W(B{l})| = {order_b} exceeds the enumeration cap {}", opts.cap)))
        });
        return;
    }
    for lv in all_normalized(l) {
        let dec = decompose(&lv);
        t.run(format!("relweyl/l{l}/{:?}", lv.delta), || match check_rel_weyl(&dec, GROUP_CAP) {
            Ok(c) => (Status::of(c.ok()), serde_json::to_value(&c).unwrap()),
            Err(e) => error_record(e),
        });
    }
}

fn extend(t: &mut Timed) {
    for l in 2..=4 {
        t.run(format!("extend/max-ext/l{l}"), || match max_ext_suite(l, true) {
            Ok(r) => (Status::of(r.all_extend && r.structure_holds), serde_json::to_value(&r).unwrap()),
            Err(e) => error_record(e),
        });
    }
    t.run("extend/quaternion-center", quaternion_control);
    for (id, setup) in wreath_fixtures() {
        t.run(format!("extend/wreath/{id}"), || match setup.map(|s| check_wreath(&s)) {
            Ok(Ok(())) => (Status::Pass, Value::Null),
            Ok(Err(e)) => (Status::Fail, json!(e)),
            Err(e) => error_record(e),
        });
    }
}

/// The faithful character of `Z(Q₈)` is `Q₈`-stable and has no extension.
pub fn quaternion_control() -> (Status, Value) {
    use crate::chars::{extends_to, linear_ext_cocycle, CharTable, LinearExtension};
    let q = quaternion();
    let z = q.filter(|x| q.element_order(x) <= 2);
    let minus = z.elements().iter().find(|x| **x != *z.identity()).cloned().expect("Z(Q8) has order 2");
    let lambda = |x: &Perm| if *x == minus { 1 } else { 0 };
    let run = || -> Result<(LinearExtension, bool)> {
        let cert = linear_ext_cocycle(&z, &q, lambda, 2)?;
        let tq = CharTable::new(&q)?;
        let tz = CharTable::with_prime(&z, tq.p)?;
        let chi = tz.irr.iter().find(|c| tz.value(c, &minus) != 1).expect("faithful character").clone();
        Ok((cert, extends_to(&tz, &chi, &tq)?))
    };
    match run() {
        Ok((cert, extends)) => {
            let obstruction = match cert {
                LinearExtension::Obstruction { residue, modulus } => Some((residue, modulus)),
                LinearExtension::Witness { .. } => None,
            };
            (
                Status::of(obstruction.is_some_and(|(r, _)| r != 0) && !extends),
                json!({ "obstruction": obstruction, "extends_by_degree": extends }),
            )
        }
        Err(e) => error_record(e),
    }
}

type Fixture = (&'static str, Result<WreathSetup>);

/// `(X, Y, a)` for `C₂`, `C₃ ⋊ C₂` and `(C₂ × C₂) ⋊ C₂`, all with `a = 2`.
pub fn wreath_fixtures() -> Vec<Fixture> {
    let c2 = cyclic(2);
    let s3 = symmetric(3);
    let c3 = FiniteGroup::generate(Perm::identity(3), vec![Perm::from_cycles(3, &[&[0, 1, 2]])]);
    let d8 = FiniteGroup::generate(
        Perm::identity(4),
        vec![Perm::from_cycles(4, &[&[0, 1]]), Perm::from_cycles(4, &[&[2, 3]]), Perm::from_cycles(4, &[&[0, 2], &[1, 3]])],
    );
    let v4 = FiniteGroup::generate(Perm::identity(4), vec![Perm::from_cycles(4, &[&[0, 1]]), Perm::from_cycles(4, &[&[2, 3]])]);
    vec![
        ("C2,1,2", WreathSetup::new(&c2, &c2, &[], 2)),
        ("C3,C2,2", WreathSetup::new(&s3, &c3, &[Perm::from_cycles(3, &[&[0, 1]])], 2)),
        ("C2xC2,C2,2", WreathSetup::new(&d8, &v4, &[Perm::from_cycles(4, &[&[0, 2], &[1, 3]])], 2)),
    ]
}

/// Builds the extension map for `X^a ◁ (X ⋊ Y) ≀ 𝒮_a` and checks it is
/// equivariant under every generator of the acting group.
pub fn check_wreath(setup: &WreathSetup) -> std::result::Result<(), String> {
    let input = setup.input_map().map_err(|e| e.to_string())?;
    let map = setup.extend(&input).map_err(|e| e.to_string())?;
    map.check_extensions()?;
    map.check_equivariant(setup.acting.gens(), |a, x| a.conj(x))
}

fn stab_counts(list: &[CuspidalShadow]) -> Value {
    let n = |s: Stab| list.iter().filter(|x| x.stab == s).count();
    json!({ "L": n(Stab::L), "Lhat": n(Stab::LHat), "Ltilde": n(Stab::LTilde) })
}

fn cover_status(s: &CuspidalShadow) -> (bool, Value) {
    match s.verify_stable_cover() {
        Ok(r) if r.ok() => (true, Value::Null),
        Ok(r) => (false, json!({ "shadow": s.to_json(), "failures": r.failures })),
        Err(e) => (false, json!({ "shadow": s.to_json(), "error": e.to_string() })),
    }
}

fn shadows(t: &mut Timed, opts: &SuiteOptions) {
    // exhaustive sweep, one record per weight vector
    for ws in representative_weights(opts.max_orbits) {
        t.run(format!("shadows/cover/{ws:?}"), || {
            let list = enumerate_shadows(&ws, EnumCaps::default());
            let results: Vec<(bool, Value)> = list.par_iter().map(cover_status).collect();
            let failures: Vec<Value> = results.into_iter().filter(|r| !r.0).map(|r| r.1).take(5).collect();
            let mixed = list.iter().filter(|s| s.stab == Stab::LHat).count();
            (
                Status::of(failures.is_empty()),
                json!({ "shadows": list.len(), "by_stab": stab_counts(&list), "mixed_stratum": mixed, "failures": failures }),
            )
        });
    }
    t.run("shadows/cover/random-5-6", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let list: Vec<CuspidalShadow> = (0..opts.large_samples).map(|i| random_shadow(&mut rng, 5 + i % 2)).collect();
        let results: Vec<(bool, Value)> = list.par_iter().map(cover_status).collect();
        let failures: Vec<Value> = results.into_iter().filter(|r| !r.0).map(|r| r.1).take(5).collect();
        (Status::of(failures.is_empty()), json!({ "shadows": list.len(), "by_stab": stab_counts(&list), "failures": failures }))
    });
    t.run("shadows/oracle/random", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
        let list: Vec<CuspidalShadow> =
            (0..opts.oracle_samples).map(|i| random_shadow(&mut rng, 1 + i % 5)).collect();
        let bad: Vec<Value> = list
            .par_iter()
            .filter(|s| !s.oracle().matches(&s.rel_weyl()))
            .map(|s| s.to_json())
            .collect();
        (Status::of(bad.is_empty()), json!({ "shadows": list.len(), "mismatches": bad.into_iter().take(5).collect::<Vec<_>>() }))
    });
    t.run("shadows/two-class-weight-two", two_class_record);
}

/// Two weight-2 orbits: the nontrivial character of `W(λ̃)` is
/// `W(λ)`-stable, does not extend, and occurs with multiplicity 2.
pub fn two_class_record() -> (Status, Value) {
    let s = two_class_weight_two();
    let rw = s.rel_weyl();
    match clifford_rows(&rw.w_tilde, &rw.w_lambda) {
        Ok(rows) => {
            let ok = rw.w_tilde.order() == 2
                && rows.iter().any(|r| r.degree == 1 && r.stable && !r.extends && r.max_multiplicity == 2)
                && rows.iter().filter(|r| !r.extends).count() == 1;
            (
                Status::of(ok),
                json!({
                    "orders": [rw.w_hat.order(), rw.w_tilde.order(), rw.w_lambda.order()],
                    "rows": rows,
                    "admissible": s.is_admissible(),
                }),
            )
        }
        Err(e) => error_record(e),
    }
}

fn table1(t: &mut Timed) {
    for row in TableRow::ALL {
        for l1 in 1..=3 {
            for l2 in 1..=3 {
                t.run(format!("table1/{row:?}/{l1},{l2}"), || match table_case(l1, l2, row) {
                    Ok(c) => (Status::of(c.matches()), serde_json::to_value(&c).unwrap()),
                    Err(e) => error_record(e),
                });
            }
        }
    }
}
