//! Gate constructors.
//!
//! Qubit matrices are written in the `{e, g}` basis (e = index 0). Every
//! constructor goes through [`Operator::unitary`], so a returned operator has
//! passed the unitarity check.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hilbert::{ComplexMatrix, Operator, Register};
use crate::scalar::Real;

/// One red-sideband pulse. `gt` is the dimensionless product of the Rabi
/// frequency and the pulse duration; `phi` is the laser phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseConfig<T> {
    gt: T,
    phi: T,
    mode_dim: usize,
}

impl<T: Real> PulseConfig<T> {
    pub fn new(gt: T, phi: T, mode_dim: usize) -> Result<Self> {
        if !gt.is_finite() {
            return Err(Error::InvalidPulse("gt must be finite"));
        }
        if gt < T::zero() {
            return Err(Error::InvalidPulse("gt must be non-negative"));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidPulse("phi must be finite"));
        }
        if mode_dim < 2 {
            return Err(Error::ModeTooSmall(mode_dim));
        }
        Ok(Self { gt, phi, mode_dim })
    }

    pub fn gt(&self) -> T {
        self.gt
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    pub fn mode_dim(&self) -> usize {
        self.mode_dim
    }
}

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

fn single<T: Real>(q: u32, m: ComplexMatrix<T>) -> Operator<T> {
    Operator::unitary(vec![Register::Qubit(q)], m).expect("fixed single-qubit gate is unitary")
}

pub fn hadamard<T: Real>(q: u32) -> Operator<T> {
    let h = T::FRAC_1_SQRT_2();
    single(q, ComplexMatrix::from_real(2, &[h, h, h, -h]).expect("2x2"))
}

pub fn pauli_x<T: Real>(q: u32) -> Operator<T> {
    let (o, z) = (T::one(), T::zero());
    single(q, ComplexMatrix::from_real(2, &[z, o, o, z]).expect("2x2"))
}

pub fn pauli_z<T: Real>(q: u32) -> Operator<T> {
    let (o, z) = (T::one(), T::zero());
    single(q, ComplexMatrix::from_real(2, &[o, z, z, -o]).expect("2x2"))
}

/// Controlled NOT that flips `target` when `control` is in `g` (basis index 1).
///
/// This is the convention under which C-NOT(1→3), C-NOT(2→5) followed by
/// Hadamards on 1 and 2 produce the branch table of the teleportation stage.
pub fn cnot<T: Real>(control: u32, target: u32) -> Operator<T> {
    let mut m = ComplexMatrix::zeros(4);
    let one = c(T::one(), T::zero());
    m.set(0, 0, one); // ee
    m.set(1, 1, one); // eg
    m.set(2, 3, one); // gg -> ge
    m.set(3, 2, one); // ge -> gg
    Operator::unitary(vec![Register::Qubit(control), Register::Qubit(target)], m)
        .expect("permutation matrix is unitary")
}

/// Red-sideband propagator for a single ion coupled to the mode.
///
/// On the truncated space `{|e,n⟩, |g,n⟩}` (ion index most significant):
///
/// ```text
/// |e,n⟩   → cos(gt√(n+1)) |e,n⟩   − i e^{ iφ} sin(gt√(n+1)) |g,n+1⟩
/// |g,n+1⟩ → cos(gt√(n+1)) |g,n+1⟩ − i e^{−iφ} sin(gt√(n+1)) |e,n⟩
/// ```
///
/// `|g,0⟩` is a dark state. `|e,N−1⟩` would couple outside the truncation and
/// is held fixed instead; callers must keep it unpopulated.
pub fn sideband_unitary<T: Real>(ion: u32, cfg: &PulseConfig<T>) -> Operator<T> {
    let n_max = cfg.mode_dim;
    let e = |n: usize| n;
    let g = |n: usize| n_max + n;
    let mut m = ComplexMatrix::identity(2 * n_max);
    let (sin_phi, cos_phi) = cfg.phi.sin_cos();
    let minus_i = c(T::zero(), -T::one());
    let fwd = minus_i * c(cos_phi, sin_phi);
    let back = minus_i * c(cos_phi, -sin_phi);
    for n in 0..n_max - 1 {
        let omega = cfg.gt * T::from(n + 1).expect("small integer").sqrt();
        let (s, co) = omega.sin_cos();
        m.set(e(n), e(n), c(co, T::zero()));
        m.set(g(n + 1), g(n + 1), c(co, T::zero()));
        // column e(n): e(n) gets cos, g(n+1) gets -i e^{iφ} sin
        m.set(g(n + 1), e(n), fwd.scale(s));
        m.set(e(n), g(n + 1), back.scale(s));
    }
    Operator::unitary(vec![Register::Qubit(ion), Register::Mode], m)
        .expect("sideband blocks are unitary")
}

/// `diag(1, e^{−iφ₁}, e^{−iφ₂}, e^{−i(φ₁+φ₂)})` on `(first, second)` in the
/// basis `{ee, eg, ge, gg}`.
pub fn collective_phase<T: Real>(first: u32, second: u32, phi1: T, phi2: T) -> Operator<T> {
    let p = |x: T| Complex::from_polar(T::one(), -x);
    let m = ComplexMatrix::diagonal(&[c(T::one(), T::zero()), p(phi1), p(phi2), p(phi1 + phi2)]);
    Operator::unitary(vec![Register::Qubit(first), Register::Qubit(second)], m)
        .expect("diagonal phase matrix is unitary")
}
