//! Quantum penny flip.
//!
//! Player 1 acts twice (`U₁` then `U₃`) and player 2 once (`U₂`) on a qubit
//! prepared in `|0⟩`; player 1 receives `tr(ρ_f P)` with
//! `ρ_f = U₃U₂U₁|0⟩⟨0|U₁†U₂†U₃†` and player 2 the negative.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gamecore::{MixedStrategy, StrategicGame};
use crate::qlinalg::{
    bloch, equal_up_to_phase, euler_zxz, evolve, expectation, haar_unitary, named_gate,
    payoff_observable, ry, rz, Complex2x2, Density2, NamedGate, Unitary2, COMPARE_TOL,
};
use crate::unaware::{GameFamily, View};

/// Which players are restricted to the classical actions `{𝟙, σ_x}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    CC,
    QC,
    CQ,
    QQ,
}

impl Variant {
    fn classical_first(self) -> bool {
        matches!(self, Self::CC | Self::CQ)
    }

    fn classical_second(self) -> bool {
        matches!(self, Self::CC | Self::QC)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::CC => "CC",
            Self::QC => "QC",
            Self::CQ => "CQ",
            Self::QQ => "QQ",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "CC" => Ok(Self::CC),
            "QC" => Ok(Self::QC),
            "CQ" => Ok(Self::CQ),
            "QQ" => Ok(Self::QQ),
            _ => Err(Error::Domain(format!("unknown variant {s:?}"))),
        }
    }
}

/// A unitary with the name used for it in strategy labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub name: String,
    pub unitary: Unitary2,
}

impl Gate {
    pub fn new(name: impl Into<String>, unitary: Unitary2) -> Self {
        Self {
            name: name.into(),
            unitary,
        }
    }

    pub fn named(g: NamedGate) -> Self {
        Self::new(g.name(), named_gate(g))
    }

    /// `𝟙` or `σ_x` up to global phase.
    pub fn is_classical(&self) -> bool {
        [NamedGate::I, NamedGate::X]
            .iter()
            .any(|&g| equal_up_to_phase(self.unitary.matrix(), named_gate(g).matrix(), COMPARE_TOL))
    }
}

/// Label of player 1's action pair: plain concatenation when both names are
/// alphanumeric, otherwise each name in brackets.
pub fn pair_label(first: &str, third: &str) -> String {
    let simple = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric());
    if simple(first) && simple(third) {
        format!("{first}{third}")
    } else {
        format!("[{first}][{third}]")
    }
}

/// All ordered pairs from `gates`, first action major.
pub fn all_pairs(gates: &[Gate]) -> Vec<(Gate, Gate)> {
    gates
        .iter()
        .flat_map(|a| gates.iter().map(move |b| (a.clone(), b.clone())))
        .collect()
}

pub fn classical_gates() -> Vec<Gate> {
    vec![Gate::named(NamedGate::I), Gate::named(NamedGate::X)]
}

/// `γ` used by the `V₁` and `V₂` representatives of the default grid.
pub const GRID_GAMMA: f64 = -FRAC_PI_2;

/// `{𝟙, σ_x, σ_z, H, V₁(0,γ*), V₂(0,γ*), W₂(0,π/2,π/2)}` with `γ* = −π/2`.
pub fn default_grid() -> Vec<Gate> {
    vec![
        Gate::named(NamedGate::I),
        Gate::named(NamedGate::X),
        Gate::named(NamedGate::Z),
        Gate::named(NamedGate::H),
        Gate::new("V1", v1(&ParamV1::new(0.0, GRID_GAMMA).expect("a = 0"))),
        Gate::new(
            "V2",
            v2(&ParamV2 {
                alpha: 0.0,
                gamma: GRID_GAMMA,
            }),
        ),
        Gate::new(
            "W2",
            w2(&ParamW2 {
                alpha: 0.0,
                beta: FRAC_PI_2,
                delta: FRAC_PI_2,
            }),
        ),
    ]
}

/// Final state `U₃U₂U₁|0⟩⟨0|U₁†U₂†U₃†`.
pub fn final_state(u1: &Unitary2, u2: &Unitary2, u3: &Unitary2) -> Density2 {
    let rho = evolve(&Density2::ket0(), u1);
    let rho = evolve(&rho, u2);
    evolve(&rho, u3)
}

/// `(tr ρ_f P, −tr ρ_f P)`.
pub fn qq_payoff(u1: &Unitary2, u2: &Unitary2, u3: &Unitary2) -> (f64, f64) {
    let x = expectation(&final_state(u1, u2, u3), &payoff_observable());
    (x, -x)
}

/// Bloch vector of the final state.
pub fn final_bloch(u1: &Unitary2, u2: &Unitary2, u3: &Unitary2) -> [f64; 3] {
    bloch(&final_state(u1, u2, u3))
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {p} is not a probability")))
    }
}

/// Player 1's payoff for `(U₁, U₃)` when player 2 plays `𝟙` with
/// probability `p` and `σ_x` otherwise.
pub fn qc_payoff(u1: &Unitary2, u3: &Unitary2, p: f64) -> Result<f64> {
    check_probability("p", p)?;
    let id = named_gate(NamedGate::I);
    let x = named_gate(NamedGate::X);
    Ok(p * qq_payoff(u1, &id, u3).0 + (1.0 - p) * qq_payoff(u1, &x, u3).0)
}

/// Player 1's payoff for a mixture over `{𝟙𝟙, 𝟙σ_x, σ_x𝟙, σ_xσ_x}` against
/// the unitary `u2`.
pub fn cq_payoff(mix: &[f64; 4], u2: &Unitary2) -> Result<f64> {
    MixedStrategy::new(mix.to_vec())?;
    let id = named_gate(NamedGate::I);
    let x = named_gate(NamedGate::X);
    let actions = [(id, id), (id, x), (x, id), (x, x)];
    let parts = mix
        .iter()
        .zip(&actions)
        .map(|(&w, (a1, a3))| (w, final_state(a1, u2, a3)))
        .collect::<Vec<_>>();
    let rho = Density2::mixture(&parts)?;
    Ok(expectation(&rho, &payoff_observable()))
}

/// `(2cos²(γ/2) − 1)(1 − 2p₂ − 2p₃)`, where `p₂` weighs `𝟙σ_x` and `p₃`
/// weighs `σ_x𝟙`.
pub fn cq_payoff_formula(gamma: f64, p2: f64, p3: f64) -> Result<f64> {
    check_probability("p2", p2)?;
    check_probability("p3", p3)?;
    if p2 + p3 > 1.0 + 1e-12 {
        return Err(Error::InvalidDistribution(format!(
            "p2 + p3 = {} exceeds 1",
            p2 + p3
        )));
    }
    let c = (0.5 * gamma).cos();
    Ok((2.0 * c * c - 1.0) * (1.0 - 2.0 * p2 - 2.0 * p3))
}

/// Parameters of player 1's first optimal action; `a` is `0` or `−π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamV1 {
    a: f64,
    pub gamma: f64,
}

impl ParamV1 {
    pub fn new(a: f64, gamma: f64) -> Result<Self> {
        if a == 0.0 || a == -PI {
            Ok(Self { a, gamma })
        } else {
            Err(Error::Domain(format!("V1 needs a in {{-pi, 0}}, got {a}")))
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

/// `V₃ = R_z(α)·V₁†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamV3 {
    pub alpha: f64,
    pub source: ParamV1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamV2 {
    pub alpha: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamW2 {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
}

/// `R_z(a)/√2 · [[e^{−iγ/2}, −i e^{iγ/2}], [e^{−iγ/2}, i e^{iγ/2}]]`.
pub fn v1(p: &ParamV1) -> Unitary2 {
    let l = Complex64::from_polar(FRAC_1_SQRT_2, -0.5 * p.gamma);
    let r = Complex64::from_polar(FRAC_1_SQRT_2, 0.5 * p.gamma) * Complex64::i();
    let core = Unitary2::trusted(Complex2x2::raw([l, -r, l, r]));
    rz(p.a) * core
}

pub fn v3(p: &ParamV3) -> Unitary2 {
    rz(p.alpha) * v1(&p.source).dagger()
}

/// `e^{iα}[[i cos(γ/2), −sin(γ/2)], [sin(γ/2), −i cos(γ/2)]]`.
pub fn v2(p: &ParamV2) -> Unitary2 {
    let (s, c) = (0.5 * p.gamma).sin_cos();
    let m = Complex2x2::raw([
        Complex64::new(0.0, c),
        Complex64::new(-s, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(0.0, -c),
    ]);
    Unitary2::trusted(m).with_phase(p.alpha)
}

/// `e^{iα}/√2 [[e^{−i(β+δ)/2}, −e^{i(δ−β)/2}], [e^{i(β−δ)/2}, e^{i(β+δ)/2}]]`,
/// which is `e^{iα}R_z(β)R_y(π/2)R_z(δ)`.
pub fn w2(p: &ParamW2) -> Unitary2 {
    let e = |theta: f64| Complex64::from_polar(FRAC_1_SQRT_2, 0.5 * theta);
    let m = Complex2x2::raw([
        e(-p.beta - p.delta),
        -e(p.delta - p.beta),
        e(p.beta - p.delta),
        e(p.beta + p.delta),
    ]);
    Unitary2::trusted(m).with_phase(p.alpha)
}

/// One failed sample of a verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleFailure {
    pub params: Vec<(String, f64)>,
    pub message: String,
    pub error: f64,
}

/// Outcome of a sampling-based verification.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub name: String,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Number of individual equalities evaluated.
    pub checks: usize,
    /// Largest deviation seen over all checks.
    pub max_error: f64,
    pub failures: Vec<SampleFailure>,
}

impl VerificationReport {
    fn new(name: &str, samples: usize, seed: u64, tol: f64) -> Self {
        Self {
            name: name.into(),
            samples,
            seed,
            tol,
            checks: 0,
            max_error: 0.0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, error: f64, params: &[(&str, f64)], message: impl FnOnce() -> String) {
        self.checks += 1;
        let error = if error.is_nan() { f64::INFINITY } else { error };
        self.max_error = self.max_error.max(error);
        if error > self.tol {
            self.failures.push(SampleFailure {
                params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
                message: message(),
                error,
            });
        }
    }
}

fn angle<R: Rng>(rng: &mut R) -> f64 {
    rng.random_range(-2.0 * PI..2.0 * PI)
}

fn sample_v1<R: Rng>(rng: &mut R) -> ParamV1 {
    let a = if rng.random_bool(0.5) { 0.0 } else { -PI };
    ParamV1::new(a, angle(rng)).expect("a drawn from the allowed pair")
}

/// Deviations of `(V₃V₁|0⟩⟨0|V₁†V₃†, V₃σ_xV₁|0⟩⟨0|V₁†σ_xV₃†)` from
/// `|0⟩⟨0|`, and the worst shortfall of the payoff from 1 over the
/// mixtures `p ∈ {0, 0.25, 0.5, 0.75, 1}`.
pub fn v1v3_errors(u1: &Unitary2, u3: &Unitary2) -> [f64; 3] {
    let ket0 = *Density2::ket0().matrix();
    let id = named_gate(NamedGate::I);
    let x = named_gate(NamedGate::X);
    let e1 = final_state(u1, &id, u3).matrix().distance(&ket0);
    let e2 = final_state(u1, &x, u3).matrix().distance(&ket0);
    let e3 = [0.0, 0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|&p| (qc_payoff(u1, u3, p).expect("p in range") - 1.0).abs())
        .fold(0.0, f64::max);
    [e1, e2, e3]
}

/// Samples `(a, γ, α)` and checks that `(V₁, V₃)` returns the coin to heads
/// whether or not it is flipped in between.
pub fn verify_v1v3(samples: usize, seed: u64, tol: f64) -> VerificationReport {
    let mut report = VerificationReport::new("lemma-v1v3", samples, seed, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let p1 = sample_v1(&mut rng);
        let p3 = ParamV3 {
            alpha: angle(&mut rng),
            source: p1,
        };
        let params = [("a", p1.a), ("gamma", p1.gamma), ("alpha", p3.alpha)];
        let [e1, e2, e3] = v1v3_errors(&v1(&p1), &v3(&p3));
        report.record(e1, &params, || "V3 V1 does not return |0>".into());
        report.record(e2, &params, || "V3 X V1 does not return |0>".into());
        report.record(e3, &params, || {
            "payoff against a classical mixture is not 1".into()
        });
    }
    report
}

/// Deviation of `V₂|+⟩⟨+|V₂†` from `|−⟩⟨−|` and of the payoff against
/// `(V₁, V₃)` from −1.
pub fn v2_errors(u1: &Unitary2, u2: &Unitary2, u3: &Unitary2) -> [f64; 2] {
    let flipped = evolve(&Density2::plus(), u2)
        .matrix()
        .distance(Density2::minus().matrix());
    let payoff = (qq_payoff(u1, u2, u3).0 + 1.0).abs();
    [flipped, payoff]
}

/// Samples `V₂(α, γ)` against sampled optimal `(V₁, V₃)`.
pub fn verify_v2(samples: usize, seed: u64, tol: f64) -> VerificationReport {
    let mut report = VerificationReport::new("lemma-v2", samples, seed, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let p1 = sample_v1(&mut rng);
        let p3 = ParamV3 {
            alpha: angle(&mut rng),
            source: p1,
        };
        let p2 = ParamV2 {
            alpha: angle(&mut rng),
            gamma: angle(&mut rng),
        };
        let params = [
            ("a", p1.a),
            ("gamma1", p1.gamma),
            ("alpha3", p3.alpha),
            ("alpha2", p2.alpha),
            ("gamma2", p2.gamma),
        ];
        let [e1, e2] = v2_errors(&v1(&p1), &v2(&p2), &v3(&p3));
        report.record(e1, &params, || "V2 does not map |+> to |->".into());
        report.record(e2, &params, || "payoff is not -1".into());
    }
    report
}

/// Mixtures `(p₂, p₃)` used when comparing the classical-versus-unitary
/// payoff with its closed form.
pub const CQ_MIXTURES: [(f64, f64); 6] = [
    (0.0, 0.0),
    (1.0, 0.0),
    (0.0, 1.0),
    (0.5, 0.5),
    (0.25, 0.25),
    (0.1, 0.6),
];

/// Number of `γ` values in `[0, 2π]` used by [`verify_cq_outcome`].
pub const CQ_GAMMA_STEPS: usize = 11;

/// Full mixture with the given `p₂, p₃` and the remainder split 1:2 between
/// `𝟙𝟙` and `σ_xσ_x`.
pub fn cq_mixture(p2: f64, p3: f64) -> [f64; 4] {
    let rest = 1.0 - p2 - p3;
    [rest / 3.0, p2, p3, 2.0 * rest / 3.0]
}

/// `e^{iα}R_z(β)R_y(γ)R_z(δ)`.
pub fn zyz(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Unitary2 {
    (rz(beta) * ry(gamma) * rz(delta)).with_phase(alpha)
}

/// Checks that `W₂(α, β, δ)` holds every pure classical strategy of player 1
/// to 0.
pub fn verify_w2(samples: usize, seed: u64, tol: f64) -> VerificationReport {
    let mut report = VerificationReport::new("lemma-w2", samples, seed, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let p = ParamW2 {
            alpha: angle(&mut rng),
            beta: angle(&mut rng),
            delta: angle(&mut rng),
        };
        let w = w2(&p);
        for k in 0..4 {
            let mut mix = [0.0; 4];
            mix[k] = 1.0;
            let value = cq_payoff(&mix, &w).expect("pure mixture");
            let params = [
                ("alpha", p.alpha),
                ("beta", p.beta),
                ("delta", p.delta),
                ("strategy", k as f64),
            ];
            report.record(value.abs(), &params, || {
                format!("W2 concedes {value} to a pure classical strategy")
            });
        }
    }
    report
}

/// Compares the mixed classical payoff against `e^{iα}R_z(β)R_y(γ)R_z(δ)`
/// with its closed form over [`CQ_GAMMA_STEPS`] values of `γ`, the
/// [`CQ_MIXTURES`] and `samples` random `(α, β, δ)`.
pub fn verify_cq_outcome(samples: usize, seed: u64, tol: f64) -> VerificationReport {
    let mut report = VerificationReport::new("cq-outcome", samples, seed, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let (alpha, beta, delta) = (angle(&mut rng), angle(&mut rng), angle(&mut rng));
        for step in 0..CQ_GAMMA_STEPS {
            let gamma = 2.0 * PI * step as f64 / (CQ_GAMMA_STEPS - 1) as f64;
            let u = zyz(alpha, beta, gamma, delta);
            for &(p2, p3) in &CQ_MIXTURES {
                let direct = cq_payoff(&cq_mixture(p2, p3), &u).expect("valid mixture");
                let closed = cq_payoff_formula(gamma, p2, p3).expect("valid mixture");
                let params = [
                    ("alpha", alpha),
                    ("beta", beta),
                    ("gamma", gamma),
                    ("delta", delta),
                    ("p2", p2),
                    ("p3", p3),
                ];
                report.record((direct - closed).abs(), &params, || {
                    format!("payoff {direct} differs from closed form {closed}")
                });
            }
        }
    }
    report
}

/// `−sin β · sin δ`.
pub fn qq_vs_w2_payoff(beta: f64, delta: f64) -> f64 {
    -beta.sin() * delta.sin()
}

/// Player 1's payoff for `(H, W₂(α, β, δ), H)`.
pub fn qq_vs_w2_direct(alpha: f64, beta: f64, delta: f64) -> f64 {
    let h = named_gate(NamedGate::H);
    qq_payoff(&h, &w2(&ParamW2 { alpha, beta, delta }), &h).0
}

/// Results for the payoff of the `(H, H)` strategy against `W₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct W2SurfaceReport {
    pub grid: usize,
    /// Largest `|direct − (−sin β sin δ)|` over the grid.
    pub grid_max_error: f64,
    pub samples: usize,
    pub seed: u64,
    pub mean: f64,
    pub std_dev: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    /// Largest deviation from `−sin β sin δ` when `(V₁, V₃)` is drawn from
    /// the whole optimal family instead of `(H, H)`.
    pub family_deviation: f64,
    /// Mean payoff on a `grid × grid` midpoint rule over `[0, 2π]²`.
    pub grid_mean: f64,
}

/// Compares the direct payoff with `−sin β sin δ` on a `grid × grid` lattice
/// over `[0, 2π]²`, estimates its mean under uniform `(β, δ)` by Monte Carlo,
/// and probes other members of the optimal `(V₁, V₃)` family.
pub fn verify_w2_surface(grid: usize, samples: usize, seed: u64) -> W2SurfaceReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = 2.0 * PI / grid.max(1) as f64;
    let mut grid_max_error: f64 = 0.0;
    let mut grid_sum = 0.0;
    for i in 0..grid {
        for j in 0..grid {
            let (beta, delta) = (i as f64 * step, j as f64 * step);
            let alpha = angle(&mut rng);
            let direct = qq_vs_w2_direct(alpha, beta, delta);
            grid_max_error = grid_max_error.max((direct - qq_vs_w2_payoff(beta, delta)).abs());
            grid_sum += qq_vs_w2_payoff((i as f64 + 0.5) * step, (j as f64 + 0.5) * step);
        }
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let beta = rng.random_range(0.0..2.0 * PI);
        let delta = rng.random_range(0.0..2.0 * PI);
        let x = qq_vs_w2_payoff(beta, delta);
        sum += x;
        sum_sq += x * x;
    }
    let n = samples.max(1) as f64;
    let mean = sum / n;
    let std_dev = (sum_sq / n - mean * mean).max(0.0).sqrt();

    let mut family_deviation: f64 = 0.0;
    for _ in 0..32 {
        let p1 = sample_v1(&mut rng);
        let p3 = ParamV3 {
            alpha: angle(&mut rng),
            source: p1,
        };
        let w = ParamW2 {
            alpha: angle(&mut rng),
            beta: angle(&mut rng),
            delta: angle(&mut rng),
        };
        let direct = qq_payoff(&v1(&p1), &w2(&w), &v3(&p3)).0;
        family_deviation = family_deviation.max((direct - qq_vs_w2_payoff(w.beta, w.delta)).abs());
    }

    W2SurfaceReport {
        grid,
        grid_max_error,
        samples,
        seed,
        mean,
        std_dev,
        std_error: std_dev / n.sqrt(),
        family_deviation,
        grid_mean: grid_sum / (grid * grid).max(1) as f64,
    }
}

/// Decomposes Haar-random unitaries into Z-X-Z rotations and checks the
/// recomposition up to global phase.
pub fn verify_euler(samples: usize, seed: u64, tol: f64) -> VerificationReport {
    let mut report = VerificationReport::new("euler", samples, seed, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..samples {
        let u = haar_unitary(&mut rng);
        let e = euler_zxz(&u);
        let direct = e.recompose().matrix().distance(u.matrix());
        let params = [
            ("sample", k as f64),
            ("beta", e.beta),
            ("gamma", e.gamma),
            ("delta", e.delta),
            ("phase", e.phase),
        ];
        report.record(direct, &params, || {
            "recomposition differs from the sample".into()
        });
    }
    report
}

/// `{𝟙𝟙, 𝟙σ_x, σ_x𝟙, σ_xσ_x} × {𝟙, σ_x}` zero-sum game.
pub fn classical_matrix() -> StrategicGame {
    let l = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    StrategicGame::zero_sum(
        &l(&["II", "IX", "XI", "XX"]),
        &l(&["I", "X"]),
        &[
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
            vec![-1.0, 1.0],
            vec![1.0, -1.0],
        ],
    )
    .expect("static game")
}

/// Finite penny-flip game over explicit action lists. Player 1 chooses a
/// pair `(U₁, U₃)`, player 2 a single `U₂`.
pub fn discretize(
    variant: Variant,
    first: &[(Gate, Gate)],
    second: &[Gate],
) -> Result<StrategicGame> {
    if first.is_empty() || second.is_empty() {
        return Err(Error::Structure("empty gate set".into()));
    }
    if variant.classical_first() {
        if let Some((a, b)) = first
            .iter()
            .find(|(a, b)| !a.is_classical() || !b.is_classical())
        {
            return Err(Error::Domain(format!(
                "{variant} restricts player 1 to I and X, got ({}, {})",
                a.name, b.name
            )));
        }
    }
    if variant.classical_second() {
        if let Some(g) = second.iter().find(|g| !g.is_classical()) {
            return Err(Error::Domain(format!(
                "{variant} restricts player 2 to I and X, got {}",
                g.name
            )));
        }
    }
    for g in first.iter().flat_map(|(a, b)| [a, b]).chain(second) {
        let err = g.unitary.unitarity_error();
        if err >= 1e-9 {
            return Err(Error::NotUnitary(err));
        }
    }
    let rows: Vec<String> = first
        .iter()
        .map(|(a, b)| pair_label(&a.name, &b.name))
        .collect();
    let cols: Vec<String> = second.iter().map(|g| g.name.clone()).collect();
    let a: Vec<Vec<f64>> = first
        .iter()
        .map(|(u1, u3)| {
            second
                .iter()
                .map(|u2| clean(qq_payoff(&u1.unitary, &u2.unitary, &u3.unitary).0))
                .collect()
        })
        .collect();
    StrategicGame::zero_sum(&rows, &cols, &a)
}

/// Snaps values within `1e-12` of an integer, so that equal outcomes reached
/// through different products compare exactly.
fn clean(x: f64) -> f64 {
    let r = x.round();
    let x = if (x - r).abs() < 1e-12 { r } else { x };
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn named(gates: &[NamedGate]) -> Vec<Gate> {
    gates.iter().map(|&g| Gate::named(g)).collect()
}

/// `{𝟙, σ_x, H}²` against `{𝟙, σ_x, σ_z}`.
pub fn example3_matrix() -> StrategicGame {
    use NamedGate::{H, I, X, Z};
    discretize(
        Variant::QQ,
        &all_pairs(&named(&[I, X, H])),
        &named(&[I, X, Z]),
    )
    .expect("named gates are unitary")
}

/// Row order of the nine-row table: the classical pairs first, then the pairs
/// involving `H`.
pub const MISLEADING_ROWS: [&str; 9] = ["II", "IX", "XI", "XX", "IH", "XH", "HI", "HX", "HH"];

/// Player-1 payoffs of the nine-row table as published, by
/// [`MISLEADING_ROWS`] × `{I, X}`.
pub const MISLEADING_PUBLISHED: [[f64; 2]; 9] = [
    [1.0, -1.0],
    [-1.0, 1.0],
    [-1.0, 1.0],
    [1.0, 1.0],
    [0.0, 0.0],
    [0.0, 0.0],
    [0.0, 0.0],
    [0.0, 0.0],
    [1.0, 1.0],
];

/// A cell where the computed table differs from the published one.
#[derive(Debug, Clone, PartialEq)]
pub struct CellMismatch {
    pub row: String,
    pub col: String,
    pub computed: (f64, f64),
    pub published: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyReport {
    /// Number of compared payoff pairs.
    pub total: usize,
    pub matching: usize,
    pub mismatches: Vec<CellMismatch>,
}

/// The `{𝟙, σ_x, H}² × {𝟙, σ_x}` game computed from the dynamics, with a
/// cell-by-cell comparison against [`MISLEADING_PUBLISHED`].
pub fn misleading_matrix() -> (StrategicGame, DiscrepancyReport) {
    use NamedGate::{H, I, X};
    let gates: BTreeMap<&str, Gate> = [("I", I), ("X", X), ("H", H)]
        .into_iter()
        .map(|(k, g)| (k, Gate::named(g)))
        .collect();
    let pairs: Vec<(Gate, Gate)> = MISLEADING_ROWS
        .iter()
        .map(|r| (gates[&r[..1]].clone(), gates[&r[1..]].clone()))
        .collect();
    let game = discretize(Variant::QC, &pairs, &named(&[I, X])).expect("named gates are unitary");
    let mut report = DiscrepancyReport {
        total: 0,
        matching: 0,
        mismatches: Vec::new(),
    };
    for (r, row) in MISLEADING_ROWS.iter().enumerate() {
        for (c, col) in ["I", "X"].iter().enumerate() {
            let u = game.payoff(&[r, c]);
            let computed = (u[0], u[1]);
            let p = MISLEADING_PUBLISHED[r][c];
            let published = (p, -p);
            report.total += 1;
            if (computed.0 - published.0).abs() < 1e-9 && (computed.1 - published.1).abs() < 1e-9 {
                report.matching += 1;
            } else {
                report.mismatches.push(CellMismatch {
                    row: row.to_string(),
                    col: col.to_string(),
                    computed,
                    published,
                });
            }
        }
    }
    (game, report)
}

/// Bundled families of games with unawareness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Preset {
    Example1,
    Example2G,
    Example2GPrime,
    Example3,
    Prop3,
    Prop4,
    Fig2Message,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Self::Example1,
        Self::Example2G,
        Self::Example2GPrime,
        Self::Example3,
        Self::Prop3,
        Self::Prop4,
        Self::Fig2Message,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Example1 => "example1",
            Self::Example2G => "example2_G",
            Self::Example2GPrime => "example2_Gprime",
            Self::Example3 => "example3",
            Self::Prop3 => "prop3",
            Self::Prop4 => "prop4",
            Self::Fig2Message => "fig2_message",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown preset {s:?}")))
    }
}

/// `Γ₁`: `{a₁, a₂, a₃} × {b₁, b₂}`.
pub fn gamma1() -> StrategicGame {
    StrategicGame::bimatrix(
        &["a1", "a2", "a3"],
        &["b1", "b2"],
        &[
            vec![(2.0, 2.0), (2.0, 2.0)],
            vec![(3.0, 3.0), (1.0, 2.0)],
            vec![(4.0, 0.0), (1.0, 2.0)],
        ],
    )
    .expect("static game")
}

/// `Γ₂`: `Γ₁` without `a₃`.
pub fn gamma2() -> StrategicGame {
    StrategicGame::bimatrix(
        &["a1", "a2"],
        &["b1", "b2"],
        &[vec![(2.0, 2.0), (2.0, 2.0)], vec![(3.0, 3.0), (1.0, 2.0)]],
    )
    .expect("static game")
}

/// A penny-flip variant discretised over the default grid.
pub fn grid_game(variant: Variant) -> StrategicGame {
    let grid = default_grid();
    let classical = classical_gates();
    let first = if variant.classical_first() {
        &classical
    } else {
        &grid
    };
    let second = if variant.classical_second() {
        &classical
    } else {
        &grid
    };
    discretize(variant, &all_pairs(first), second).expect("grid gates are unitary")
}

fn family(cases: &[(&str, StrategicGame)], otherwise: StrategicGame) -> GameFamily {
    GameFamily::from_cases(
        vec![1, 2],
        cases
            .iter()
            .map(|(v, g)| (v.parse::<View>().expect("static view"), g.clone())),
        otherwise,
    )
    .expect("static family")
}

pub fn preset_family(preset: Preset) -> GameFamily {
    let qq = || grid_game(Variant::QQ);
    let cc = || grid_game(Variant::CC);
    match preset {
        Preset::Example1 => family(
            &[
                ("", gamma1()),
                ("1", gamma1()),
                ("2", gamma1()),
                ("12", gamma1()),
            ],
            gamma2(),
        ),
        Preset::Example2G => family(&[("", qq()), ("1", grid_game(Variant::QC))], cc()),
        Preset::Example2GPrime => family(&[("", qq()), ("1", qq())], cc()),
        Preset::Example3 => {
            let big = example3_matrix();
            family(
                &[
                    ("", big.clone()),
                    ("1", big.clone()),
                    ("2", big.clone()),
                    ("21", big),
                ],
                cc(),
            )
        }
        Preset::Prop3 => family(&[("", qq()), ("1", qq()), ("2", qq()), ("21", qq())], cc()),
        Preset::Prop4 => family(&[("", qq()), ("1", qq()), ("2", qq())], cc()),
        Preset::Fig2Message => {
            let cases: Vec<(&str, StrategicGame)> = ["", "1", "2", "12", "21", "121"]
                .iter()
                .map(|&v| (v, qq()))
                .collect();
            family(&cases, cc())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::rx;

    fn h() -> Unitary2 {
        named_gate(NamedGate::H)
    }

    fn gate(g: NamedGate) -> Unitary2 {
        named_gate(g)
    }

    #[test]
    fn classical_matrix_entries() {
        let g = classical_matrix();
        assert_eq!(g.payoff(&[0, 0]), &[1.0, -1.0]);
        assert_eq!(g.payoff(&[2, 1]), &[1.0, -1.0]);
        assert_eq!(g.zero_sum_defect(), 0.0);
    }

    #[test]
    fn qq_payoff_examples() {
        let id = gate(NamedGate::I);
        assert_eq!(qq_payoff(&id, &id, &id), (1.0, -1.0));
        for g in [NamedGate::I, NamedGate::X] {
            let (a, b) = qq_payoff(&h(), &gate(g), &h());
            assert!((a - 1.0).abs() < 1e-12 && (b + 1.0).abs() < 1e-12);
        }
        let (a, _) = qq_payoff(&h(), &gate(NamedGate::Z), &h());
        assert!((a + 1.0).abs() < 1e-12);
    }

    #[test]
    fn qc_payoff_examples() {
        assert!((qc_payoff(&h(), &h(), 0.3).unwrap() - 1.0).abs() < 1e-12);
        let id = gate(NamedGate::I);
        assert_eq!(qc_payoff(&id, &id, 1.0).unwrap(), 1.0);
        assert_eq!(qc_payoff(&id, &id, 0.0).unwrap(), -1.0);
        assert!(qc_payoff(&id, &id, 1.5).is_err());
    }

    #[test]
    fn cq_payoff_examples() {
        assert_eq!(
            cq_payoff(&[1.0, 0.0, 0.0, 0.0], &gate(NamedGate::I)).unwrap(),
            1.0
        );
        let w = w2(&ParamW2 {
            alpha: 0.0,
            beta: 0.4,
            delta: 1.9,
        });
        assert!(cq_payoff(&[1.0, 0.0, 0.0, 0.0], &w).unwrap().abs() < 1e-12);
        for gamma in [0.3_f64, 1.7, 2.9] {
            let c = (0.5 * gamma).cos();
            let expected = -(2.0 * c * c - 1.0);
            let value = cq_payoff(&[0.0, 1.0, 0.0, 0.0], &ry(gamma)).unwrap();
            assert!((value - expected).abs() < 1e-12);
        }
        assert!(cq_payoff(&[0.5, 0.5, 0.5, 0.0], &h()).is_err());
    }

    #[test]
    fn cq_formula_examples() {
        assert_eq!(cq_payoff_formula(0.0, 0.0, 0.0).unwrap(), 1.0);
        assert!(cq_payoff_formula(FRAC_PI_2, 0.3, 0.2).unwrap().abs() < 1e-15);
        assert!((cq_payoff_formula(PI, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(cq_payoff_formula(0.0, 0.7, 0.7).is_err());
    }

    #[test]
    fn v1_matches_hadamard_at_positive_quarter_turn() {
        let u = v1(&ParamV1::new(0.0, FRAC_PI_2).unwrap());
        assert!(equal_up_to_phase(u.matrix(), h().matrix(), 1e-12));
    }

    #[test]
    fn v1_at_negative_quarter_turn_is_y_rotation() {
        let u = v1(&ParamV1::new(0.0, -FRAC_PI_2).unwrap());
        assert!(equal_up_to_phase(u.matrix(), ry(FRAC_PI_2).matrix(), 1e-12));
        assert!(!equal_up_to_phase(u.matrix(), h().matrix(), 1e-6));
    }

    #[test]
    fn v1_rejects_other_offsets() {
        assert!(ParamV1::new(0.5, 0.0).is_err());
    }

    #[test]
    fn v2_at_zero_is_phase_times_z() {
        let u = v2(&ParamV2 {
            alpha: 0.0,
            gamma: 0.0,
        });
        let iz = gate(NamedGate::Z).matrix().scale(Complex64::i());
        assert!(u.matrix().distance(&iz) < 1e-15);
        assert!(equal_up_to_phase(
            u.matrix(),
            gate(NamedGate::Z).matrix(),
            1e-12
        ));
    }

    #[test]
    fn w2_at_origin_is_quarter_y_rotation() {
        let u = w2(&ParamW2 {
            alpha: 0.0,
            beta: 0.0,
            delta: 0.0,
        });
        let expected =
            Complex2x2::from_real(FRAC_1_SQRT_2, -FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2);
        assert!(u.matrix().distance(&expected) < 1e-15);
        assert!(u.matrix().distance(ry(FRAC_PI_2).matrix()) < 1e-15);
    }

    #[test]
    fn w2_is_zyz_with_quarter_turn() {
        for (a, b, d) in [(0.3, 1.1, -2.0), (2.5, -0.7, 0.9)] {
            let lhs = w2(&ParamW2 {
                alpha: a,
                beta: b,
                delta: d,
            });
            let rhs = zyz(a, b, FRAC_PI_2, d);
            assert!(lhs.matrix().distance(rhs.matrix()) < 1e-14);
        }
    }

    #[test]
    fn hadamard_pair_is_optimal_first_player_strategy() {
        let [e1, e2, e3] = v1v3_errors(&h(), &h());
        assert!(e1 < 1e-12 && e2 < 1e-12 && e3 < 1e-12);
        let p1 = ParamV1::new(-PI, 1.1).unwrap();
        let p3 = ParamV3 {
            alpha: 2.2,
            source: p1,
        };
        assert!(v1v3_errors(&v1(&p1), &v3(&p3)).iter().all(|&e| e < 1e-9));
    }

    #[test]
    fn x_rotation_in_place_of_v3_fails() {
        let p1 = ParamV1::new(0.0, 0.8).unwrap();
        let corrupted = rx(1.3) * v1(&p1).dagger();
        assert!(v1v3_errors(&v1(&p1), &corrupted).iter().any(|&e| e > 1e-3));
    }

    #[test]
    fn z_answers_hadamard_pair() {
        let [e1, e2] = v2_errors(&h(), &gate(NamedGate::Z), &h());
        assert!(e1 < 1e-12 && e2 < 1e-12);
        let [_, e] = v2_errors(&h(), &gate(NamedGate::I), &h());
        assert!((e - 2.0).abs() < 1e-12);
    }

    #[test]
    fn w2_verification_flags_identity() {
        let value = cq_payoff(&[1.0, 0.0, 0.0, 0.0], &ry(0.0)).unwrap();
        assert_eq!(value, 1.0);
        assert!(verify_w2(3, 1, 1e-9).passed());
        assert!(verify_cq_outcome(3, 1, 1e-10).passed());
    }

    #[test]
    fn qq_vs_w2_examples() {
        assert_eq!(qq_vs_w2_payoff(FRAC_PI_2, FRAC_PI_2), -1.0);
        assert_eq!(qq_vs_w2_payoff(0.0, 1.234), 0.0);
        assert!((qq_vs_w2_direct(0.7, FRAC_PI_2, FRAC_PI_2) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn nine_by_three_rows() {
        let g = example3_matrix();
        let hh = g.label_index(0, "HH").unwrap();
        let row: Vec<f64> = (0..3).map(|c| g.payoff(&[hh, c])[0]).collect();
        assert_eq!(row, vec![1.0, 1.0, -1.0]);
        let ih = g.label_index(0, "IH").unwrap();
        assert!((0..3).all(|c| g.payoff(&[ih, c])[0] == 0.0));
        assert_eq!(crate::gamecore::reduce_strategic(&g).strategy_count(0), 4);
    }

    #[test]
    fn misleading_report_flags_one_cell() {
        let (_, report) = misleading_matrix();
        assert_eq!(report.total, 18);
        assert_eq!(report.matching, 17);
        let m = &report.mismatches[0];
        assert_eq!((m.row.as_str(), m.col.as_str()), ("XX", "X"));
        assert_eq!(m.computed, (-1.0, 1.0));
    }

    #[test]
    fn discretize_examples() {
        let cc = grid_game(Variant::CC);
        assert_eq!(cc, classical_matrix());
        let single = discretize(
            Variant::QQ,
            &[(Gate::named(NamedGate::H), Gate::named(NamedGate::H))],
            &[Gate::named(NamedGate::Z)],
        )
        .unwrap();
        assert_eq!(single.payoff(&[0, 0]), &[-1.0, 1.0]);
        assert!(discretize(
            Variant::CC,
            &all_pairs(&named(&[NamedGate::H])),
            &classical_gates()
        )
        .is_err());
        assert!(discretize(Variant::QQ, &[], &classical_gates()).is_err());
    }

    #[test]
    fn pair_labels() {
        assert_eq!(pair_label("H", "V1"), "HV1");
        assert_eq!(pair_label("Rx(0.3)", "H"), "[Rx(0.3)][H]");
    }

    #[test]
    fn presets_round_trip_names() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
    }
}
