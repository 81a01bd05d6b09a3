//! Single-qubit linear algebra.
//!
//! Everything here works on 2x2 complex matrices stored row-major. The three
//! validated wrappers ([`Unitary2`], [`Density2`], [`Hermitian2`]) check their
//! invariant once at construction; operations between validated values return
//! validated values without re-checking.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance used when validating constructed matrices.
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Default tolerance for comparing results of short matrix products.
pub const COMPARE_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A 2x2 complex matrix `[[m0, m1], [m2, m3]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex2x2 {
    m: [Complex64; 4],
}

impl Complex2x2 {
    /// Builds a matrix from row-major entries, rejecting NaN and infinities.
    pub fn new(entries: [Complex64; 4]) -> Result<Self> {
        if entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(Self { m: entries })
        } else {
            Err(Error::NonFinite)
        }
    }

    pub(crate) const fn raw(entries: [Complex64; 4]) -> Self {
        Self { m: entries }
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::raw([a.into(), b.into(), c.into(), d.into()])
    }

    pub const fn identity() -> Self {
        Self::raw([ONE, ZERO, ZERO, ONE])
    }

    pub const fn zero() -> Self {
        Self::raw([ZERO; 4])
    }

    pub fn entries(&self) -> &[Complex64; 4] {
        &self.m
    }

    /// Entry at `(row, col)`.
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.m[2 * row + col]
    }

    pub fn dagger(&self) -> Self {
        let [a, b, c, d] = self.m;
        Self::raw([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0] + self.m[3]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::raw(self.m.map(|z| z * s))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.m;
        for (o, z) in out.iter_mut().zip(other.m) {
            *o += z;
        }
        Self::raw(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale((-1.0).into()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self − other‖_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).frobenius_norm()
    }
}

impl Mul for Complex2x2 {
    type Output = Complex2x2;

    fn mul(self, rhs: Complex2x2) -> Complex2x2 {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = rhs.m;
        Complex2x2::raw([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl fmt::Display for Complex2x2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "[[{a:.6}, {b:.6}], [{c:.6}, {d:.6}]]")
    }
}

/// A 2x2 unitary matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2(Complex2x2);

impl Unitary2 {
    /// Validates `UU† = 𝟙` to [`CONSTRUCTION_TOL`].
    pub fn new(m: Complex2x2) -> Result<Self> {
        Self::with_tolerance(m, CONSTRUCTION_TOL)
    }

    pub fn with_tolerance(m: Complex2x2, tol: f64) -> Result<Self> {
        Complex2x2::new(m.m)?;
        let err = (m * m.dagger()).distance(&Complex2x2::identity());
        if err < tol {
            Ok(Self(m))
        } else {
            Err(Error::NotUnitary(err))
        }
    }

    pub(crate) const fn trusted(m: Complex2x2) -> Self {
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Complex2x2::identity())
    }

    pub fn matrix(&self) -> &Complex2x2 {
        &self.0
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.dagger())
    }

    /// Multiplies by the unit-modulus scalar `e^{iφ}`.
    pub fn with_phase(&self, phi: f64) -> Self {
        Self(self.0.scale(Complex64::from_polar(1.0, phi)))
    }

    pub fn unitarity_error(&self) -> f64 {
        (self.0 * self.0.dagger()).distance(&Complex2x2::identity())
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        Unitary2(self.0 * rhs.0)
    }
}

/// A single-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density2(Complex2x2);

impl Density2 {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(m: Complex2x2) -> Result<Self> {
        Complex2x2::new(m.m)?;
        let herm = m.distance(&m.dagger());
        if herm >= CONSTRUCTION_TOL {
            return Err(Error::NotDensity(format!("not Hermitian ({herm:e})")));
        }
        let tr = m.trace();
        if (tr - ONE).norm() >= CONSTRUCTION_TOL {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let min = hermitian_eigenvalues(&m).0;
        if min < -CONSTRUCTION_TOL {
            return Err(Error::NotDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self(m))
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(amplitudes: [Complex64; 2]) -> Result<Self> {
        let norm = (amplitudes[0].norm_sqr() + amplitudes[1].norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotDensity("zero state vector".into()));
        }
        let [a, b] = amplitudes.map(|z| z / norm);
        Self::new(Complex2x2::raw([
            a * a.conj(),
            a * b.conj(),
            b * a.conj(),
            b * b.conj(),
        ]))
    }

    /// `|0⟩⟨0|`.
    pub fn ket0() -> Self {
        Self(Complex2x2::from_real(1.0, 0.0, 0.0, 0.0))
    }

    /// `|1⟩⟨1|`.
    pub fn ket1() -> Self {
        Self(Complex2x2::from_real(0.0, 0.0, 0.0, 1.0))
    }

    /// `|+⟩⟨+|`.
    pub fn plus() -> Self {
        Self(Complex2x2::from_real(0.5, 0.5, 0.5, 0.5))
    }

    /// `|−⟩⟨−|`.
    pub fn minus() -> Self {
        Self(Complex2x2::from_real(0.5, -0.5, -0.5, 0.5))
    }

    /// `𝟙/2`.
    pub fn maximally_mixed() -> Self {
        Self(Complex2x2::from_real(0.5, 0.0, 0.0, 0.5))
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights must form a distribution.
    pub fn mixture(parts: &[(f64, Density2)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if parts.iter().any(|(w, _)| *w < -1e-12) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "mixture weights sum to {total}"
            )));
        }
        let m = parts.iter().fold(Complex2x2::zero(), |acc, (w, rho)| {
            acc.add(&rho.0.scale((*w).into()))
        });
        Ok(Self(hermitize(&m)))
    }

    pub fn matrix(&self) -> &Complex2x2 {
        &self.0
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        hermitian_eigenvalues(&self.0)
    }
}

/// A 2x2 Hermitian operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hermitian2(Complex2x2);

impl Hermitian2 {
    pub fn new(m: Complex2x2) -> Result<Self> {
        Complex2x2::new(m.m)?;
        let err = m.distance(&m.dagger());
        if err < CONSTRUCTION_TOL {
            Ok(Self(m))
        } else {
            Err(Error::NotHermitian(err))
        }
    }

    pub fn matrix(&self) -> &Complex2x2 {
        &self.0
    }
}

fn hermitize(m: &Complex2x2) -> Complex2x2 {
    m.add(&m.dagger()).scale(0.5.into())
}

/// Sorted eigenvalues `(min, max)` of a Hermitian 2x2 matrix.
fn hermitian_eigenvalues(m: &Complex2x2) -> (f64, f64) {
    let a = m.at(0, 0).re;
    let d = m.at(1, 1).re;
    let b = m.at(0, 1);
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d).powi(2) + b.norm_sqr()).sqrt();
    (mean - radius, mean + radius)
}

/// Fixed single-qubit gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedGate {
    I,
    X,
    Y,
    Z,
    H,
}

impl NamedGate {
    pub const ALL: [NamedGate; 5] = [Self::I, Self::X, Self::Y, Self::Z, Self::H];

    pub fn name(self) -> &'static str {
        match self {
            Self::I => "I",
            Self::X => "X",
            Self::Y => "Y",
            Self::Z => "Z",
            Self::H => "H",
        }
    }
}

impl fmt::Display for NamedGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Matrix of a named gate; `H = (1/√2)[[1, 1], [1, −1]]`.
pub fn named_gate(gate: NamedGate) -> Unitary2 {
    let m = match gate {
        NamedGate::I => Complex2x2::identity(),
        NamedGate::X => Complex2x2::from_real(0.0, 1.0, 1.0, 0.0),
        NamedGate::Y => Complex2x2::raw([ZERO, -I, I, ZERO]),
        NamedGate::Z => Complex2x2::from_real(1.0, 0.0, 0.0, -1.0),
        NamedGate::H => {
            Complex2x2::from_real(FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2)
        }
    };
    Unitary2::trusted(m)
}

/// Counterclockwise rotation by `theta` about the unit axis `axis`:
/// `cos(θ/2)𝟙 − i sin(θ/2)(n·σ)`.
pub fn rotation(axis: [f64; 3], theta: f64) -> Result<Unitary2> {
    let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NonUnitAxis(norm));
    }
    if !theta.is_finite() {
        return Err(Error::Domain(format!("rotation angle {theta}")));
    }
    let [nx, ny, nz] = axis;
    let (s, c) = (0.5 * theta).sin_cos();
    let m = Complex2x2::raw([
        Complex64::new(c, -s * nz),
        Complex64::new(-s * ny, -s * nx),
        Complex64::new(s * ny, -s * nx),
        Complex64::new(c, s * nz),
    ]);
    Ok(Unitary2::trusted(m))
}

pub fn rx(theta: f64) -> Unitary2 {
    rotation([1.0, 0.0, 0.0], theta).expect("x axis is a unit vector")
}

pub fn ry(theta: f64) -> Unitary2 {
    rotation([0.0, 1.0, 0.0], theta).expect("y axis is a unit vector")
}

pub fn rz(theta: f64) -> Unitary2 {
    rotation([0.0, 0.0, 1.0], theta).expect("z axis is a unit vector")
}

/// `UρU†`.
pub fn evolve(rho: &Density2, u: &Unitary2) -> Density2 {
    let m = *u.matrix() * *rho.matrix() * u.matrix().dagger();
    Density2(hermitize(&m))
}

/// The penny-flip payoff observable `P = |0⟩⟨0| − |1⟩⟨1|`.
pub fn payoff_observable() -> Hermitian2 {
    Hermitian2(Complex2x2::from_real(1.0, 0.0, 0.0, -1.0))
}

/// `tr(ρ·A)`, real for Hermitian `A`.
pub fn expectation(rho: &Density2, obs: &Hermitian2) -> f64 {
    (*rho.matrix() * *obs.matrix()).trace().re
}

/// Bloch vector `(tr ρσx, tr ρσy, tr ρσz)`.
pub fn bloch(rho: &Density2) -> [f64; 3] {
    [NamedGate::X, NamedGate::Y, NamedGate::Z]
        .map(|g| (*rho.matrix() * *named_gate(g).matrix()).trace().re)
}

/// Z-X-Z Euler angles with an explicit global phase:
/// `U = e^{iφ} R_z(β) R_x(γ) R_z(δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerZXZ {
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub phase: f64,
}

impl EulerZXZ {
    pub fn recompose(&self) -> Unitary2 {
        (rz(self.beta) * rx(self.gamma) * rz(self.delta)).with_phase(self.phase)
    }
}

/// Decomposes a unitary into Z-X-Z rotations.
///
/// The global phase is fixed by `det U = e^{2iφ}`, so the remaining factor is
/// in SU(2). When `γ` is 0 or π only one combination of `β` and `δ` is
/// determined; `δ = 0` is returned in that case.
pub fn euler_zxz(u: &Unitary2) -> EulerZXZ {
    let phase = 0.5 * u.matrix().det().arg();
    let v = u.matrix().scale(Complex64::from_polar(1.0, -phase));
    // v = [[c e^{-i(β+δ)/2}, .], [-i s e^{i(β-δ)/2}, .]]
    let top = v.at(0, 0);
    let bottom = v.at(1, 0);
    let gamma = 2.0 * bottom.norm().atan2(top.norm());
    let sum = -2.0 * top.arg();
    let diff = 2.0 * (I * bottom).arg();
    let (beta, delta) = if bottom.norm() < CONSTRUCTION_TOL {
        (sum, 0.0)
    } else if top.norm() < CONSTRUCTION_TOL {
        (diff, 0.0)
    } else {
        (0.5 * (sum + diff), 0.5 * (sum - diff))
    };
    EulerZXZ {
        beta,
        gamma,
        delta,
        phase,
    }
}

/// True iff `‖a − e^{iφ}b‖_F < tol` for the phase `φ` read off the
/// largest-magnitude entry of `b`. Two zero matrices compare equal.
pub fn equal_up_to_phase(a: &Complex2x2, b: &Complex2x2, tol: f64) -> bool {
    phase_distance(a, b) < tol
}

/// The distance minimised over the global phase estimate used by
/// [`equal_up_to_phase`].
pub fn phase_distance(a: &Complex2x2, b: &Complex2x2) -> f64 {
    let (k, bk) = b
        .entries()
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(k, z)| (k, *z))
        .expect("four entries");
    if bk.norm() == 0.0 {
        return a.frobenius_norm();
    }
    let ak = a.entries()[k];
    let phi = if ak.norm() == 0.0 {
        0.0
    } else {
        ak.arg() - bk.arg()
    };
    a.distance(&b.scale(Complex64::from_polar(1.0, phi)))
}

/// Haar-random unitary from a complex Gaussian matrix orthonormalised by
/// Gram-Schmidt (the R factor then has a positive diagonal, which is the
/// phase correction that makes the distribution Haar).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> Unitary2 {
    loop {
        let mut z = [ZERO; 4];
        for entry in z.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *entry = Complex64::new(re, im) * FRAC_1_SQRT_2;
        }
        let col0 = [z[0], z[2]];
        let col1 = [z[1], z[3]];
        let n0 = (col0[0].norm_sqr() + col0[1].norm_sqr()).sqrt();
        if n0 < 1e-8 {
            continue;
        }
        let q0 = col0.map(|x| x / n0);
        let proj = q0[0].conj() * col1[0] + q0[1].conj() * col1[1];
        let r1 = [col1[0] - proj * q0[0], col1[1] - proj * q0[1]];
        let n1 = (r1[0].norm_sqr() + r1[1].norm_sqr()).sqrt();
        if n1 < 1e-8 {
            continue;
        }
        let q1 = r1.map(|x| x / n1);
        let m = Complex2x2::raw([q0[0], q1[0], q0[1], q1[1]]);
        if let Ok(u) = Unitary2::new(m) {
            return u;
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rotation_z_pi_is_minus_i_sigma_z() {
        let u = rotation([0.0, 0.0, 1.0], PI).unwrap();
        let expected = Complex2x2::raw([c(0.0, -1.0), ZERO, ZERO, c(0.0, 1.0)]);
        assert!(u.matrix().distance(&expected) < 1e-15);
        let minus_i_z = named_gate(NamedGate::Z).matrix().scale(-I);
        assert!(u.matrix().distance(&minus_i_z) < 1e-15);
    }

    #[test]
    fn rotation_zero_is_identity() {
        let u = rotation([1.0, 0.0, 0.0], 0.0).unwrap();
        assert_eq!(*u.matrix(), Complex2x2::identity());
    }

    #[test]
    fn rotation_y_quarter_turn() {
        let u = rotation([0.0, 1.0, 0.0], FRAC_PI_2).unwrap();
        let s = FRAC_1_SQRT_2;
        assert!(u.matrix().distance(&Complex2x2::from_real(s, -s, s, s)) < 1e-15);
    }

    #[test]
    fn rotation_rejects_non_unit_axis() {
        assert!(matches!(
            rotation([1.0, 1.0, 0.0], 0.3),
            Err(Error::NonUnitAxis(_))
        ));
    }

    #[test]
    fn full_turn_is_minus_identity() {
        let u = rotation([0.6, 0.0, 0.8], 2.0 * PI).unwrap();
        let minus = Complex2x2::identity().scale((-1.0).into());
        assert!(u.matrix().distance(&minus) < 1e-12);
    }

    #[test]
    fn named_gates() {
        assert_eq!(*named_gate(NamedGate::I).matrix(), Complex2x2::identity());
        assert_eq!(
            *named_gate(NamedGate::X).matrix(),
            Complex2x2::from_real(0.0, 1.0, 1.0, 0.0)
        );
        for g in NamedGate::ALL {
            assert!(named_gate(g).unitarity_error() < 1e-15, "{g}");
        }
        let plus = evolve(&Density2::ket0(), &named_gate(NamedGate::H));
        assert!(plus.matrix().distance(Density2::plus().matrix()) < 1e-15);
    }

    #[test]
    fn evolve_examples() {
        let x = named_gate(NamedGate::X);
        let flipped = evolve(&Density2::ket0(), &x);
        assert!(flipped.matrix().distance(Density2::ket1().matrix()) < 1e-15);
        let still_plus = evolve(&Density2::plus(), &x);
        assert!(still_plus.matrix().distance(Density2::plus().matrix()) < 1e-15);
    }

    #[test]
    fn observable_and_expectation() {
        let p = payoff_observable();
        assert_eq!(*p.matrix(), Complex2x2::from_real(1.0, 0.0, 0.0, -1.0));
        assert_eq!(expectation(&Density2::ket0(), &p), 1.0);
        assert_eq!(expectation(&Density2::ket1(), &p), -1.0);
        assert_eq!(expectation(&Density2::maximally_mixed(), &p), 0.0);
        assert!(expectation(&Density2::plus(), &p).abs() < 1e-15);

        let h = named_gate(NamedGate::H);
        let x = named_gate(NamedGate::X);
        let rho = evolve(&Density2::ket0(), &(h * x * h));
        assert!((expectation(&rho, &p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bloch_points() {
        let close = |a: [f64; 3], b: [f64; 3]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15);
        assert!(close(bloch(&Density2::ket0()), [0.0, 0.0, 1.0]));
        assert!(close(bloch(&Density2::plus()), [1.0, 0.0, 0.0]));
        assert!(close(bloch(&Density2::maximally_mixed()), [0.0, 0.0, 0.0]));
        // (|0⟩ + i|1⟩)/√2 sits on +y
        let b = Density2::pure([ONE, I]).unwrap();
        assert!(close(bloch(&b), [0.0, 1.0, 0.0]));
    }

    #[test]
    fn euler_examples() {
        let id = euler_zxz(&Unitary2::identity());
        assert_eq!(
            (id.beta, id.gamma, id.delta, id.phase),
            (0.0, 0.0, 0.0, 0.0)
        );

        let h = named_gate(NamedGate::H);
        let e = euler_zxz(&h);
        assert!(e.recompose().matrix().distance(h.matrix()) < 1e-9);

        let e = euler_zxz(&rx(0.7));
        assert!((e.gamma - 0.7).abs() < 1e-12);
        assert!(e.beta.abs() < 1e-12 && e.delta.abs() < 1e-12 && e.phase.abs() < 1e-12);
    }

    #[test]
    fn euler_degenerate_angles_use_zero_delta() {
        let u = rz(0.4) * rx(PI) * rz(1.1);
        let e = euler_zxz(&u);
        assert_eq!(e.delta, 0.0);
        assert!((e.gamma - PI).abs() < 1e-12);
        assert!(e.recompose().matrix().distance(u.matrix()) < 1e-9);

        let u = rz(0.4) * rz(1.1);
        let e = euler_zxz(&u);
        assert_eq!(e.delta, 0.0);
        assert!(e.recompose().matrix().distance(u.matrix()) < 1e-9);
    }

    #[test]
    fn euler_recomposes_haar_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let u = haar_unitary(&mut rng);
            assert!(u.unitarity_error() < 1e-12);
            let e = euler_zxz(&u);
            assert!(e.recompose().matrix().distance(u.matrix()) < 1e-9);
        }
    }

    #[test]
    fn phase_equality() {
        let z = *named_gate(NamedGate::Z).matrix();
        let x = *named_gate(NamedGate::X).matrix();
        assert!(equal_up_to_phase(&z, &z.scale(I), 1e-9));
        assert!(!equal_up_to_phase(&z, &x, 1e-9));
        assert!(equal_up_to_phase(
            &Complex2x2::zero(),
            &Complex2x2::zero(),
            1e-9
        ));
        assert!(!equal_up_to_phase(&z, &Complex2x2::zero(), 1e-9));
    }

    #[test]
    fn validated_constructors_reject_bad_input() {
        assert!(matches!(
            Unitary2::new(Complex2x2::from_real(1.0, 1.0, 0.0, 1.0)),
            Err(Error::NotUnitary(_))
        ));
        assert!(Density2::new(Complex2x2::from_real(0.5, 0.0, 0.0, 0.4)).is_err());
        assert!(Density2::new(Complex2x2::from_real(1.5, 0.0, 0.0, -0.5)).is_err());
        assert!(Hermitian2::new(Complex2x2::raw([ONE, I, I, ONE])).is_err());
        assert_eq!(
            Complex2x2::new([c(f64::NAN, 0.0), ZERO, ZERO, ONE]),
            Err(Error::NonFinite)
        );
    }
}
