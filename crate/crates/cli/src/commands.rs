//! Command implementations. Each returns a report, a text rendering and an
//! exit code.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use qpfu_core::gamecore::{
    reduce_with_classes, strategic_from_extensive, MixedStrategy, StrategicGame,
};
use qpfu_core::gate::GateExpr;
use qpfu_core::pennyflip::{
    self, final_bloch, preset_family, qq_payoff, qq_vs_w2_payoff, Preset, VerificationReport,
    W2SurfaceReport,
};
use qpfu_core::unaware::{
    solve_ene, validate_family, GameFamily, SolveOptions, ValidationReport, View,
};
use serde::Serialize;

use crate::document::{parse_family, parse_game_input, FamilyDocument, GameInput};
use crate::error::{CliError, EXIT_INPUT, EXIT_NO_SOLUTION, EXIT_OK, EXIT_VERIFICATION};
use crate::report::{Inputs, Report};

pub const DEFAULT_SEED: u64 = 20_190_601;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const FORMULA_TOL: f64 = 1e-10;
pub const SURFACE_GRID: usize = 20;

/// Weights below this are left out of printed strategies.
const PRINT_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub text: String,
    pub exit_code: i32,
}

/// Where a family comes from.
#[derive(Debug, Clone)]
pub enum FamilySource<'a> {
    File(&'a Path),
    Preset(Preset),
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_text(path: &Path) -> Result<(String, Vec<u8>), CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Invalid(format!("{} is not UTF-8", path.display())))?;
    Ok((text, bytes))
}

fn load_family(
    source: &FamilySource,
    inputs: Inputs,
    check: bool,
) -> Result<(GameFamily, Inputs), CliError> {
    match source {
        FamilySource::Preset(p) => Ok((preset_family(*p), inputs.arg("preset", p))),
        FamilySource::File(path) => {
            let (text, bytes) = read_text(path)?;
            let family = if check {
                parse_family(&text)?
            } else {
                FamilyDocument::parse(&text)?.to_family()?
            };
            Ok((family, inputs.bytes("file", &bytes)))
        }
    }
}

fn label_weights(game: &StrategicGame, pos: usize, s: &MixedStrategy) -> BTreeMap<String, f64> {
    game.labels(pos)
        .iter()
        .zip(s.weights())
        .filter(|(_, &w)| w > PRINT_CUTOFF)
        .map(|(l, &w)| (l.clone(), w))
        .collect()
}

fn strategy_text(w: &BTreeMap<String, f64>) -> String {
    match w.iter().next() {
        Some((label, _)) if w.len() == 1 => label.clone(),
        _ => {
            let parts: Vec<String> = w.iter().map(|(l, x)| format!("{l}: {x:.6}")).collect();
            format!("{{{}}}", parts.join(", "))
        }
    }
}

#[derive(Serialize)]
struct ViewProfile {
    view: String,
    symbol: String,
    strategies: BTreeMap<String, BTreeMap<String, f64>>,
}

#[derive(Serialize)]
struct EquilibriumOut {
    modeler_payoff: Vec<f64>,
    views: Vec<ViewProfile>,
    /// Profile at every view not listed.
    otherwise: BTreeMap<String, BTreeMap<String, f64>>,
}

#[derive(Serialize)]
struct ClassOut {
    views: Vec<String>,
    tail: bool,
}

#[derive(Serialize)]
struct SolveOut {
    count: usize,
    max_solutions: usize,
    classes: Vec<ClassOut>,
    equilibria: Vec<EquilibriumOut>,
    diagnostics: Vec<String>,
}

fn profile_map(
    game: &StrategicGame,
    strategies: &[MixedStrategy],
) -> BTreeMap<String, BTreeMap<String, f64>> {
    game.players()
        .iter()
        .enumerate()
        .map(|(pos, p)| (p.to_string(), label_weights(game, pos, &strategies[pos])))
        .collect()
}

/// Extended Nash equilibria of a family.
pub fn solve(
    source: &FamilySource,
    tol: f64,
    max_solutions: usize,
    seed: u64,
) -> Result<Outcome, CliError> {
    let inputs = Inputs::new("solve")
        .arg("tol", tol)
        .arg("max_solutions", max_solutions);
    let (f, inputs) = load_family(source, inputs, true)?;
    let options = SolveOptions {
        tol,
        max_solutions,
        ..SolveOptions::default()
    };
    let solution = solve_ene(&f, &options);
    let views = f.relevant_views(f.depth() + 1);
    let mut text = String::new();
    let mut equilibria = Vec::new();
    for (k, e) in solution.equilibria.iter().enumerate() {
        let payoff = e.modeler_payoff(&f)?;
        let rows: Vec<ViewProfile> = views
            .iter()
            .map(|v| ViewProfile {
                view: v.to_string(),
                symbol: v.symbol(),
                strategies: profile_map(f.game_at(v), e.profile_at(v).strategies()),
            })
            .collect();
        let otherwise = profile_map(f.fallback(), e.fallback().strategies());
        let _ = writeln!(text, "equilibrium {}: modeler payoff {:?}", k + 1, payoff);
        for row in &rows {
            let _ = writeln!(
                text,
                "  {:>6}  {}",
                row.symbol,
                render_profile(&row.strategies)
            );
        }
        let _ = writeln!(text, "  {:>6}  {}", "else", render_profile(&otherwise));
        equilibria.push(EquilibriumOut {
            modeler_payoff: payoff,
            views: rows,
            otherwise,
        });
    }
    let classes = solution
        .classes
        .iter()
        .map(|c| ClassOut {
            views: c.views.iter().map(View::to_string).collect(),
            tail: c.is_tail,
        })
        .collect();
    for d in &solution.diagnostics {
        let _ = writeln!(text, "note: {d}");
    }
    let count = equilibria.len();
    let header = format!("solve: {count} extended Nash equilibria\n");
    let out = SolveOut {
        count,
        max_solutions,
        classes,
        equilibria,
        diagnostics: solution.diagnostics.clone(),
    };
    Ok(Outcome {
        report: Report::new("solve", seed, &inputs, &[("tol", tol)], out),
        text: header + &text,
        exit_code: if count > 0 { EXIT_OK } else { EXIT_NO_SOLUTION },
    })
}

fn render_profile(p: &BTreeMap<String, BTreeMap<String, f64>>) -> String {
    p.iter()
        .map(|(player, w)| format!("{player}: {}", strategy_text(w)))
        .collect::<Vec<_>>()
        .join("  ")
}

/// Verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    #[value(name = "lemma-v1v3")]
    LemmaV1V3,
    #[value(name = "lemma-v2")]
    LemmaV2,
    #[value(name = "lemma-w2")]
    LemmaW2,
    #[value(name = "eq56")]
    CqOutcome,
    #[value(name = "eq65")]
    W2Surface,
    #[value(name = "prop2")]
    Euler,
    #[value(name = "axioms")]
    Axioms,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Self::LemmaV1V3 => "lemma-v1v3",
            Self::LemmaV2 => "lemma-v2",
            Self::LemmaW2 => "lemma-w2",
            Self::CqOutcome => "eq56",
            Self::W2Surface => "eq65",
            Self::Euler => "prop2",
            Self::Axioms => "axioms",
        }
    }

    pub fn default_samples(self) -> usize {
        match self {
            Self::CqOutcome => 5,
            Self::W2Surface => 100_000,
            Self::Axioms => 0,
            _ => 1000,
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            Self::CqOutcome | Self::W2Surface => FORMULA_TOL,
            _ => DEFAULT_TOL,
        }
    }
}

/// Largest number of failures listed in a report.
const LISTED_FAILURES: usize = 50;

#[derive(Serialize)]
struct FailureOut {
    params: BTreeMap<String, f64>,
    message: String,
    error: f64,
}

#[derive(Serialize)]
struct SuiteOut {
    suite: String,
    samples: usize,
    checks: usize,
    max_error: f64,
    passed: bool,
    failure_count: usize,
    failures: Vec<FailureOut>,
}

impl From<&VerificationReport> for SuiteOut {
    fn from(r: &VerificationReport) -> Self {
        Self {
            suite: r.name.clone(),
            samples: r.samples,
            checks: r.checks,
            max_error: r.max_error,
            passed: r.passed(),
            failure_count: r.failures.len(),
            failures: r
                .failures
                .iter()
                .take(LISTED_FAILURES)
                .map(|f| FailureOut {
                    params: f.params.iter().cloned().collect(),
                    message: f.message.clone(),
                    error: f.error,
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct SurfaceOut {
    suite: &'static str,
    passed: bool,
    grid: usize,
    grid_max_error: f64,
    samples: usize,
    mean: f64,
    std_dev: f64,
    std_error: f64,
    /// Three standard errors of the Monte Carlo mean.
    bound: f64,
    family_deviation: f64,
    /// Grid points in `[0, 2π)` shared by both axes.
    angles: Vec<f64>,
    /// `−sin β sin δ`, indexed `[β][δ]`.
    values: Vec<Vec<f64>>,
}

fn surface_out(r: &W2SurfaceReport, tol: f64) -> SurfaceOut {
    let angles: Vec<f64> = (0..r.grid)
        .map(|i| 2.0 * PI * i as f64 / r.grid as f64)
        .collect();
    let values = angles
        .iter()
        .map(|&b| angles.iter().map(|&d| qq_vs_w2_payoff(b, d)).collect())
        .collect();
    let bound = 3.0 * r.std_error;
    SurfaceOut {
        suite: "eq65",
        passed: r.grid_max_error <= tol && r.mean.abs() <= bound,
        grid: r.grid,
        grid_max_error: r.grid_max_error,
        samples: r.samples,
        mean: r.mean,
        std_dev: r.std_dev,
        std_error: r.std_error,
        bound,
        family_deviation: r.family_deviation,
        angles,
        values,
    }
}

#[derive(Serialize)]
struct ViolationOut {
    property: u8,
    views: Vec<String>,
    message: String,
}

#[derive(Serialize)]
struct ValidationOut {
    valid: bool,
    violations: Vec<ViolationOut>,
    notes: Vec<String>,
}

impl From<&ValidationReport> for ValidationOut {
    fn from(r: &ValidationReport) -> Self {
        Self {
            valid: r.is_valid(),
            violations: r
                .violations
                .iter()
                .map(|v| ViolationOut {
                    property: v.property,
                    views: v.views.iter().map(View::to_string).collect(),
                    message: v.message.clone(),
                })
                .collect(),
            notes: r.notes.clone(),
        }
    }
}

#[derive(Serialize)]
struct AxiomsOut {
    suite: &'static str,
    passed: bool,
    presets: BTreeMap<String, ValidationOut>,
    /// Family with a strategy superset below its parent; must fail.
    corrupted: ValidationOut,
}

/// `Γ₂` at ∅ and `Γ₁` at view 1: player 1 gains a strategy one level down.
pub fn corrupted_family() -> GameFamily {
    GameFamily::from_cases(
        vec![1, 2],
        [
            (View::empty(), pennyflip::gamma2()),
            ("1".parse().expect("static view"), pennyflip::gamma1()),
        ],
        pennyflip::gamma2(),
    )
    .expect("static family")
}

/// Runs one verification suite.
pub fn verify(suite: Suite, samples: Option<usize>, tol: Option<f64>, seed: u64) -> Outcome {
    let samples = samples.unwrap_or(suite.default_samples());
    let tol = tol.unwrap_or(suite.default_tol());
    let inputs = Inputs::new("verify")
        .arg("suite", suite.name())
        .arg("samples", samples)
        .arg("tol", tol)
        .arg("seed", seed);
    let (passed, results, text) = match suite {
        Suite::W2Surface => {
            let out = surface_out(
                &pennyflip::verify_w2_surface(SURFACE_GRID, samples, seed),
                tol,
            );
            let text = format!(
                "eq65: grid max error {:.3e}, mean {:.5} (bound {:.5}), family deviation {:.3e}",
                out.grid_max_error, out.mean, out.bound, out.family_deviation
            );
            (out.passed, serde_json::to_value(out), text)
        }
        Suite::Axioms => {
            let presets: BTreeMap<String, ValidationOut> = Preset::ALL
                .iter()
                .map(|&p| (p.to_string(), (&validate_family(&preset_family(p))).into()))
                .collect();
            let corrupted = validate_family(&corrupted_family());
            let passed = presets.values().all(|v| v.valid) && corrupted.has_property(2);
            let mut text = String::from("axioms:");
            for (name, v) in &presets {
                let _ = write!(
                    text,
                    "\n  {name}: {}",
                    if v.valid { "valid" } else { "INVALID" }
                );
            }
            for v in &corrupted.violations {
                let _ = write!(text, "\n  corrupted: {v}");
            }
            let out = AxiomsOut {
                suite: "axioms",
                passed,
                presets,
                corrupted: (&corrupted).into(),
            };
            (passed, serde_json::to_value(out), text)
        }
        _ => {
            let r = match suite {
                Suite::LemmaV1V3 => pennyflip::verify_v1v3(samples, seed, tol),
                Suite::LemmaV2 => pennyflip::verify_v2(samples, seed, tol),
                Suite::LemmaW2 => pennyflip::verify_w2(samples, seed, tol),
                Suite::CqOutcome => pennyflip::verify_cq_outcome(samples, seed, tol),
                _ => pennyflip::verify_euler(samples, seed, tol),
            };
            let text = format!(
                "{}: {} checks over {} samples, max error {:.3e}, {} failures",
                suite.name(),
                r.checks,
                r.samples,
                r.max_error,
                r.failures.len()
            );
            let mut out = SuiteOut::from(&r);
            out.suite = suite.name().into();
            (r.passed(), serde_json::to_value(out), text)
        }
    };
    let results = results.expect("results serialize");
    Outcome {
        report: Report::new("verify", seed, &inputs, &[("tol", tol)], results),
        text: format!("{text}\n{}\n", if passed { "PASS" } else { "FAIL" }),
        exit_code: if passed { EXIT_OK } else { EXIT_VERIFICATION },
    }
}

/// Twelve decimals, without a sign on values that round to zero.
fn decimal(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

#[derive(Serialize)]
struct PayoffOut {
    u1: String,
    u2: String,
    u3: String,
    payoff: [f64; 2],
    bloch: [f64; 3],
}

fn gate(label: &str, text: &str) -> Result<(GateExpr, qpfu_core::qlinalg::Unitary2), CliError> {
    let e: GateExpr = text
        .parse()
        .map_err(|e| CliError::Invalid(format!("--{label} {text:?}: {e}")))?;
    let u = e.unitary()?;
    Ok((e, u))
}

/// Payoff of one play `(U₁, U₂, U₃)`.
pub fn payoff(u1: &str, u2: &str, u3: &str, seed: u64) -> Result<Outcome, CliError> {
    let (e1, g1) = gate("u1", u1)?;
    let (e2, g2) = gate("u2", u2)?;
    let (e3, g3) = gate("u3", u3)?;
    let inputs = Inputs::new("payoff")
        .arg("u1", &e1)
        .arg("u2", &e2)
        .arg("u3", &e3);
    let (a, b) = qq_payoff(&g1, &g2, &g3);
    let (a, b) = (a + 0.0, b + 0.0);
    let bloch = final_bloch(&g1, &g2, &g3);
    let text = format!(
        "payoff ({}, {})\nbloch ({}, {}, {})\n",
        decimal(a),
        decimal(b),
        decimal(bloch[0]),
        decimal(bloch[1]),
        decimal(bloch[2])
    );
    let out = PayoffOut {
        u1: e1.to_string(),
        u2: e2.to_string(),
        u3: e3.to_string(),
        payoff: [a, b],
        bloch,
    };
    Ok(Outcome {
        report: Report::new("payoff", seed, &inputs, &[], out),
        text,
        exit_code: EXIT_OK,
    })
}

#[derive(Serialize)]
struct GameOut {
    players: Vec<u8>,
    strategies: Vec<Vec<String>>,
    /// `[row][column]` payoff vectors.
    payoffs: Vec<Vec<Vec<f64>>>,
}

impl From<&StrategicGame> for GameOut {
    fn from(g: &StrategicGame) -> Self {
        let payoffs = if g.player_count() == 2 {
            (0..g.strategy_count(0))
                .map(|r| {
                    (0..g.strategy_count(1))
                        .map(|c| g.payoff(&[r, c]).to_vec())
                        .collect()
                })
                .collect()
        } else {
            vec![g.payoff_table().to_vec()]
        };
        Self {
            players: g.players().to_vec(),
            strategies: g.all_labels().to_vec(),
            payoffs,
        }
    }
}

#[derive(Serialize)]
struct ReduceOut {
    strategic: GameOut,
    reduced: GameOut,
    /// Per player, the original labels merged into each reduced strategy.
    classes: Vec<Vec<Vec<String>>>,
}

/// Strategic form and reduced strategic form of a game or game tree.
pub fn reduce(path: &Path, seed: u64) -> Result<Outcome, CliError> {
    let (text, bytes) = read_text(path)?;
    let game = match parse_game_input(&text)? {
        GameInput::Strategic(g) => g,
        GameInput::Extensive(t) => strategic_from_extensive(&t)?,
    };
    let r = reduce_with_classes(&game);
    let classes: Vec<Vec<Vec<String>>> = r
        .classes
        .iter()
        .enumerate()
        .map(|(pos, cs)| {
            cs.iter()
                .map(|c| c.iter().map(|&k| game.labels(pos)[k].clone()).collect())
                .collect()
        })
        .collect();
    let mut out_text = format!("strategic form:\n{game}\nreduced form:\n{}\n", r.game);
    for (pos, p) in game.players().iter().enumerate() {
        let _ = writeln!(
            out_text,
            "player {p}: {} strategies reduce to {}",
            game.strategy_count(pos),
            r.game.strategy_count(pos)
        );
    }
    let out = ReduceOut {
        strategic: (&game).into(),
        reduced: (&r.game).into(),
        classes,
    };
    let inputs = Inputs::new("reduce").bytes("file", &bytes);
    Ok(Outcome {
        report: Report::new("reduce", seed, &inputs, &[], out),
        text: out_text,
        exit_code: EXIT_OK,
    })
}

/// Axiom check of a family document.
pub fn validate(source: &FamilySource, seed: u64) -> Result<Outcome, CliError> {
    let (f, inputs) = load_family(source, Inputs::new("validate"), false)?;
    let r = validate_family(&f);
    let mut text = String::from(if r.is_valid() { "valid\n" } else { "invalid\n" });
    for v in &r.violations {
        let _ = writeln!(text, "  {v}");
    }
    for n in &r.notes {
        let _ = writeln!(text, "  note: {n}");
    }
    Ok(Outcome {
        report: Report::new("validate", seed, &inputs, &[], ValidationOut::from(&r)),
        text,
        exit_code: if r.is_valid() { EXIT_OK } else { EXIT_INPUT },
    })
}
