//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines are always shown.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qpfu::commands::corrupted_family;
use qpfu::document::ExtensiveDocument;
use qpfu::{parse_family, DEFAULT_SEED};
use qpfu_core::gamecore::{
    is_nash, nash_support_enumeration, reduce_strategic, reduce_with_classes,
    strategic_from_extensive, zero_sum_value, MixedStrategy, Profile, StrategicGame,
};
use qpfu_core::pennyflip::{
    self, classical_matrix, example3_matrix, gamma1, misleading_matrix, preset_family, qc_payoff,
    Preset,
};
use qpfu_core::qlinalg::{named_gate, NamedGate};
use qpfu_core::unaware::{solve_ene, validate_family, ExtendedProfile, GameFamily, SolveOptions};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: f64) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(
        t.as_secs_f64() < limit,
        format!("took {t:?}, limit {limit} s"),
    )?;
    Ok(t)
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn read(name: &str) -> Result<String, String> {
    std::fs::read_to_string(fixture(name)).map_err(|e| format!("{name}: {e}"))
}

fn load_family(name: &str) -> Result<GameFamily, String> {
    parse_family(&read(name)?).map_err(|e| format!("{name}: {e}"))
}

fn load_tree(name: &str) -> Result<StrategicGame, String> {
    let tree = ExtensiveDocument::parse(&read(name)?)
        .and_then(|d| d.to_game())
        .map_err(|e| format!("{name}: {e}"))?;
    strategic_from_extensive(&tree).map_err(|e| e.to_string())
}

fn mixed(w: &[f64]) -> MixedStrategy {
    MixedStrategy::new(w.to_vec()).expect("distribution")
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn plays(
    f: &GameFamily,
    e: &ExtendedProfile,
    view: &str,
    player: u8,
    expected: &[(&str, f64)],
) -> bool {
    let Some(w) = e.weights_at(f, &view.parse().expect("view"), player) else {
        return false;
    };
    let expected: BTreeMap<String, f64> =
        expected.iter().map(|(k, x)| (k.to_string(), *x)).collect();
    let keys: BTreeSet<&String> = w.keys().chain(expected.keys()).collect();
    let close = keys.into_iter().all(|k| {
        (w.get(k).copied().unwrap_or(0.0) - expected.get(k).copied().unwrap_or(0.0)).abs() < 1e-9
    });
    close
}

fn classical_game() -> Check {
    let start = Instant::now();
    let g = classical_matrix();
    let sol = zero_sum_value(&g).map_err(|e| e.to_string())?;
    ensure(sol.value.abs() <= 1e-9, format!("value {}", sol.value))?;
    let q = sol.col_strategy.weights();
    ensure(
        max_diff(q, &[0.5, 0.5]) <= 1e-9,
        format!("player 2 optimum {q:?}"),
    )?;
    let half = MixedStrategy::uniform(2);
    for p in [
        [0.5, 0.5, 0.0, 0.0],
        [0.5, 0.0, 0.5, 0.0],
        [0.0, 0.0, 0.5, 0.5],
        [0.0, 0.5, 0.0, 0.5],
    ] {
        let profile = Profile::new(&g, vec![mixed(&p), half.clone()]).map_err(|e| e.to_string())?;
        ensure(
            is_nash(&g, &profile, 1e-8),
            format!("{p:?} is not a best reply"),
        )?;
    }
    let t = within(start, 1.0)?;
    Ok(format!(
        "value {:.1e}, q = {q:?}, 4/4 optimal distributions, {t:.1?}",
        sol.value
    ))
}

fn backward_solution() -> Check {
    let start = Instant::now();
    let g = gamma1();
    let nash = nash_support_enumeration(&g).map_err(|e| e.to_string())?;
    let a1b2 = Profile::pure_labels(&g, &["a1", "b2"]).map_err(|e| e.to_string())?;
    ensure(
        nash.equilibria.iter().any(|e| e.max_abs_diff(&a1b2) < 1e-9),
        "(a1, b2) missing from the enumeration",
    )?;
    for (q, expected) in [(0.0, true), (0.2, true), (1.0 / 3.0, true), (0.5, false)] {
        let profile = Profile::new(&g, vec![MixedStrategy::pure(3, 0), mixed(&[q, 1.0 - q])])
            .map_err(|e| e.to_string())?;
        ensure(
            is_nash(&g, &profile, 1e-8) == expected,
            format!("membership wrong at q = {q}"),
        )?;
    }
    let f = load_family("example1.family")?;
    let sol = solve_ene(&f, &SolveOptions::default());
    let found = sol.equilibria.iter().any(|e| {
        ["", "1"]
            .iter()
            .all(|v| plays(&f, e, v, 1, &[("a3", 1.0)]) && plays(&f, e, v, 2, &[("b1", 1.0)]))
            && ["2", "12", "21", "121", "212"]
                .iter()
                .all(|v| plays(&f, e, v, 1, &[("a2", 1.0)]) && plays(&f, e, v, 2, &[("b1", 1.0)]))
            && e.modeler_payoff(&f)
                .is_ok_and(|u| max_diff(&u, &[4.0, 0.0]) < 1e-9)
    });
    ensure(
        found,
        "no solution with (a3, b1) at {∅, 1} and (a2, b1) elsewhere",
    )?;
    let t = within(start, 5.0)?;
    Ok(format!(
        "{} equilibria, backward solution found with payoff (4, 0), {t:.1?}",
        sol.equilibria.len()
    ))
}

fn hadamard_solution() -> Check {
    let start = Instant::now();
    let g = example3_matrix();
    let printed: [[f64; 3]; 9] = [
        [1.0, -1.0, 1.0],
        [-1.0, 1.0, -1.0],
        [0.0, 0.0, 0.0],
        [-1.0, 1.0, -1.0],
        [1.0, -1.0, 1.0],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0],
        [1.0, 1.0, -1.0],
    ];
    ensure(
        g.strategy_count(0) == 9 && g.strategy_count(1) == 3,
        "shape is not 9×3",
    )?;
    for (r, row) in printed.iter().enumerate() {
        for (c, &x) in row.iter().enumerate() {
            let u = g.payoff(&[r, c]);
            ensure(
                u == [x, -x],
                format!("cell ({r}, {c}) is {u:?}, expected {x}"),
            )?;
        }
    }
    let reduced = reduce_strategic(&g);
    ensure(
        reduced.strategy_count(0) == 4,
        format!("{} reduced rows", reduced.strategy_count(0)),
    )?;
    let sol = zero_sum_value(&reduced).map_err(|e| e.to_string())?;
    let q = sol.col_strategy.weights();
    ensure(
        sol.value.abs() <= 1e-9,
        format!("reduced value {}", sol.value),
    )?;
    ensure(
        max_diff(q, &[0.0, 0.5, 0.5]) <= 1e-9,
        format!("player 2 optimum {q:?}"),
    )?;
    let f = load_family("example3.family")?;
    let sol = solve_ene(&f, &SolveOptions::default());
    let half = [("I", 0.5), ("X", 0.5)];
    let found = sol.equilibria.iter().any(|e| {
        ["", "2"]
            .iter()
            .all(|v| plays(&f, e, v, 1, &[("HH", 1.0)]) && plays(&f, e, v, 2, &[("Z", 1.0)]))
            && ["1", "21"]
                .iter()
                .all(|v| plays(&f, e, v, 1, &[("HH", 1.0)]) && plays(&f, e, v, 2, &half))
            && e.modeler_payoff(&f)
                .is_ok_and(|u| (u[0] + 1.0).abs() <= 1e-9)
    });
    ensure(found, "no solution with (HH, Z) at ∅ and payoff -1")?;
    let t = within(start, 10.0)?;
    Ok(format!(
        "27/27 cells exact, reduced 9 -> 4, q = {q:?}, (HH, Z) at ∅ with payoff -1, {t:.1?}"
    ))
}

fn hh_line() -> Check {
    let h = named_gate(NamedGate::H);
    let mut worst: f64 = 0.0;
    for k in 0..=10 {
        let p = k as f64 / 10.0;
        worst = worst.max((qc_payoff(&h, &h, p).map_err(|e| e.to_string())? - 1.0).abs());
    }
    ensure(worst <= 1e-12, format!("max deviation {worst:e}"))?;
    Ok(format!("11 values of p, max deviation {worst:.1e}"))
}

fn suite(r: pennyflip::VerificationReport, checks: usize) -> Check {
    ensure(
        r.checks == checks,
        format!("{} checks, expected {checks}", r.checks),
    )?;
    ensure(
        r.passed(),
        format!("{} failures, max error {:e}", r.failures.len(), r.max_error),
    )?;
    Ok(format!(
        "{} checks, 0 failures, max error {:.1e}",
        r.checks, r.max_error
    ))
}

fn lemma_v1v3() -> Check {
    suite(pennyflip::verify_v1v3(1000, DEFAULT_SEED, 1e-9), 3000)
}

fn lemma_v2() -> Check {
    suite(pennyflip::verify_v2(1000, DEFAULT_SEED, 1e-9), 2000)
}

fn cq_outcome() -> Check {
    let grid = suite(
        pennyflip::verify_cq_outcome(5, DEFAULT_SEED, 1e-10),
        11 * 6 * 5,
    )?;
    let w2 = pennyflip::verify_w2(1000, DEFAULT_SEED, 1e-9);
    ensure(
        w2.passed(),
        format!("W2 family: {} failures", w2.failures.len()),
    )?;
    Ok(format!(
        "{grid}; W2 against pure classical play: {} checks pass",
        w2.checks
    ))
}

fn w2_surface() -> Check {
    let start = Instant::now();
    let r = pennyflip::verify_w2_surface(20, 100_000, DEFAULT_SEED);
    ensure(r.grid == 20, "grid is not 20×20")?;
    ensure(
        r.grid_max_error <= 1e-10,
        format!("grid error {:e}", r.grid_max_error),
    )?;
    ensure(r.mean.abs() < 0.02, format!("mean {}", r.mean))?;
    let t = within(start, 10.0)?;
    Ok(format!(
        "grid error {:.1e}, mean of {} samples {:.5}, {t:.1?}",
        r.grid_max_error, r.samples, r.mean
    ))
}

fn euler() -> Check {
    suite(pennyflip::verify_euler(1000, DEFAULT_SEED, 1e-9), 1000)
}

fn sorted_rows(g: &StrategicGame) -> Vec<Vec<f64>> {
    let mut rows = g.row_matrix();
    rows.sort_by(|a, b| a.partial_cmp(b).expect("finite payoffs"));
    rows
}

fn reduction() -> Check {
    let top = load_tree("fig1.extensive")?;
    let bottom = load_tree("fig1_bottom.extensive")?;
    ensure(
        top.strategy_count(0) == 8,
        format!("top tree has {} plans", top.strategy_count(0)),
    )?;
    let reduced = reduce_with_classes(&top);
    ensure(
        reduced.game.strategy_count(0) == 4,
        format!("top tree reduces to {}", reduced.game.strategy_count(0)),
    )?;
    let bottom_reduced = reduce_strategic(&bottom);
    ensure(
        sorted_rows(&reduced.game) == sorted_rows(&bottom_reduced),
        "reduced forms differ beyond row order",
    )?;
    Ok(format!(
        "8 -> 4 plans; bottom tree {} -> {}; reduced forms agree up to row order",
        bottom.strategy_count(0),
        bottom_reduced.strategy_count(0)
    ))
}

fn axioms() -> Check {
    let mut checked = 0;
    for p in Preset::ALL {
        let r = validate_family(&preset_family(p));
        ensure(r.is_valid(), format!("preset {p}: {:?}", r.violations))?;
        checked += 1;
    }
    for name in [
        "example1.family",
        "example2.family",
        "example2prime.family",
        "example3.family",
        "prop3.family",
        "prop4.family",
        "fig2.family",
    ] {
        load_family(name)?;
        checked += 1;
    }
    let r = validate_family(&corrupted_family());
    ensure(
        r.has_property(2),
        format!("corrupted family not flagged: {:?}", r.violations),
    )?;
    let witness = r
        .violations
        .iter()
        .find(|v| v.property == 2)
        .expect("property 2");
    Ok(format!(
        "{checked} families valid; corrupted family flagged: {witness}"
    ))
}

fn discrepancy() -> Check {
    let (_, report) = misleading_matrix();
    ensure(
        report.total == 18,
        format!("{} cells compared", report.total),
    )?;
    ensure(
        report.matching >= 16,
        format!("only {} cells match", report.matching),
    )?;
    let flagged = report
        .mismatches
        .iter()
        .find(|m| m.row == "XX" && m.col == "X")
        .ok_or("the XX/X cell is not flagged")?;
    ensure(
        flagged.computed == (-1.0, 1.0),
        format!("XX/X computed as {:?}", flagged.computed),
    )?;
    Ok(format!(
        "{}/{} cells match; XX/X computed {:?}, printed {:?}",
        report.matching, report.total, flagged.computed, flagged.published
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("classical game", classical_game),
        ("three-strategy family", backward_solution),
        ("Hadamard against Z", hadamard_solution),
        ("HH dominance line", hh_line),
        ("lemma V1/V3", lemma_v1v3),
        ("lemma V2", lemma_v2),
        ("CQ outcome and W2 family", cq_outcome),
        ("W2 payoff surface", w2_surface),
        ("Euler decomposition", euler),
        ("tree reduction", reduction),
        ("axiom validation", axioms),
        ("nine-row table discrepancy", discrepancy),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let result =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
