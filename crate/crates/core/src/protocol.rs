//! Probabilistic teleportation of a two-ion state through two partially
//! entangled ion pairs.
//!
//! Ions 1 and 2 hold the unknown state `α|ee⟩ + β|eg⟩ + γ|ge⟩ + δ|gg⟩`; pairs
//! (3,4) and (5,6) hold `a|ee⟩ + b|gg⟩` and `c|ee⟩ + d|gg⟩`. Alice entangles
//! and measures ions (1,3) and (2,5); Bob filters the amplitudes of ions 6 and
//! 4 with red-sideband pulses, post-selects on the phonon vacuum and applies a
//! branch-dependent correction. A run succeeds with probability `4|b|²|d|²`.

use std::fmt;

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hilbert::{inner, fidelity_mod_phase, Level, Operator, Register, RegisterLayout, StateVector};
use crate::measure::{measure_phonon, measure_qubits, sample, MeasurementDistribution, RngSeed};
use crate::ops::{cnot, collective_phase, hadamard, pauli_x, pauli_z, sideband_unitary, PulseConfig};
use crate::scalar::Real;

pub const IONS: [u32; 6] = [1, 2, 3, 4, 5, 6];
/// Alice's measured ions, in outcome-label order.
pub const ALICE_IONS: [u32; 4] = [1, 3, 2, 5];
pub const OUTPUT_IONS: [u32; 2] = [4, 6];
pub const DEFAULT_MODE_DIM: usize = 4;

/// Unvalidated amplitudes; see [`validate_params`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RawParams<T> {
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
    pub gamma: Complex<T>,
    pub delta: Complex<T>,
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> RawParams<T> {
    pub fn validate(self) -> Result<ProtocolParams<T>> {
        validate_params(self)
    }
}

/// Validated protocol amplitudes. The channel phases `θ₁..θ₄` are the
/// arguments of `a, b, c, d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProtocolParams<T> {
    raw: RawParams<T>,
}

fn norm_check<T: Real>(what: &'static str, values: &[Complex<T>]) -> Result<()> {
    let n: T = values.iter().map(|z| z.norm_sqr()).sum();
    if (n - T::one()).abs() > T::norm_tol() {
        return Err(Error::NotNormalized {
            what,
            norm_sqr: n.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Checks normalization of the input state and both channels, and the
/// ordering `|a| ≥ |b|`, `|c| ≥ |d|`. Nothing is renormalized.
pub fn validate_params<T: Real>(raw: RawParams<T>) -> Result<ProtocolParams<T>> {
    let named = [
        ("alpha", raw.alpha),
        ("beta", raw.beta),
        ("gamma", raw.gamma),
        ("delta", raw.delta),
        ("a", raw.a),
        ("b", raw.b),
        ("c", raw.c),
        ("d", raw.d),
    ];
    for (name, z) in named {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite(name));
        }
    }
    norm_check("input state", &[raw.alpha, raw.beta, raw.gamma, raw.delta])?;
    norm_check("channel (3,4)", &[raw.a, raw.b])?;
    norm_check("channel (5,6)", &[raw.c, raw.d])?;
    if raw.a.norm() < raw.b.norm() {
        return Err(Error::OrderingViolated {
            channel: "channel (3,4)",
            first: "a",
            second: "b",
        });
    }
    if raw.c.norm() < raw.d.norm() {
        return Err(Error::OrderingViolated {
            channel: "channel (5,6)",
            first: "c",
            second: "d",
        });
    }
    Ok(ProtocolParams { raw })
}

impl<T: Real> ProtocolParams<T> {
    /// Builds channels from their weights `|b|²`, `|d|²` and phases
    /// `[θ₁, θ₂, θ₃, θ₄]`.
    pub fn from_weights(input: [Complex<T>; 4], b2: T, d2: T, thetas: [T; 4]) -> Result<Self> {
        let polar = |w: T, th: T| Complex::from_polar(w.max(T::zero()).sqrt(), th);
        RawParams {
            alpha: input[0],
            beta: input[1],
            gamma: input[2],
            delta: input[3],
            a: polar(T::one() - b2, thetas[0]),
            b: polar(b2, thetas[1]),
            c: polar(T::one() - d2, thetas[2]),
            d: polar(d2, thetas[3]),
        }
        .validate()
    }

    pub fn raw(&self) -> &RawParams<T> {
        &self.raw
    }

    /// `[α, β, γ, δ]` on `{ee, eg, ge, gg}`.
    pub fn input(&self) -> [Complex<T>; 4] {
        [self.raw.alpha, self.raw.beta, self.raw.gamma, self.raw.delta]
    }

    /// `[a, b]`: amplitudes of `|ee⟩₃₄` and `|gg⟩₃₄`.
    pub fn channel_34(&self) -> [Complex<T>; 2] {
        [self.raw.a, self.raw.b]
    }

    /// `[c, d]`: amplitudes of `|ee⟩₅₆` and `|gg⟩₅₆`.
    pub fn channel_56(&self) -> [Complex<T>; 2] {
        [self.raw.c, self.raw.d]
    }

    /// `[θ₁, θ₂, θ₃, θ₄]`, the arguments of `a, b, c, d`.
    pub fn thetas(&self) -> [T; 4] {
        [self.raw.a.arg(), self.raw.b.arg(), self.raw.c.arg(), self.raw.d.arg()]
    }

    pub fn b2(&self) -> T {
        self.raw.b.norm_sqr()
    }

    pub fn d2(&self) -> T {
        self.raw.d.norm_sqr()
    }
}

/// Random valid parameters: Gaussian complex input state, channel weights
/// `|b|², |d|² ∈ (0, 0.5]` and uniform phases.
pub fn random_params<T: Real, R: Rng + ?Sized>(rng: &mut R) -> ProtocolParams<T> {
    let mut input = [Complex::new(0.0f64, 0.0); 4];
    for z in &mut input {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        *z = Complex::new(re, im);
    }
    let norm = input.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let input = input.map(|z| {
        let z = z / norm;
        Complex::new(T::lit(z.re), T::lit(z.im))
    });
    let mut weight = || T::lit(0.5 * (1.0 - rng.random::<f64>()));
    let (b2, d2) = (weight(), weight());
    let thetas = [(); 4].map(|_| T::lit(std::f64::consts::TAU * rng.random::<f64>()));
    ProtocolParams::from_weights(input, b2, d2, thetas).expect("random parameters are valid")
}

pub fn six_ion_layout(mode_dim: usize) -> Result<RegisterLayout> {
    RegisterLayout::new(IONS.to_vec(), mode_dim)
}

/// `|φ⟩₁₂ ⊗ |ψ⟩₃₄ ⊗ |ψ⟩₅₆ ⊗ |0⟩`.
pub fn prepare_initial<T: Real>(params: &ProtocolParams<T>, mode_dim: usize) -> Result<StateVector<T>> {
    let layout = six_ion_layout(mode_dim)?;
    let input = params.input();
    let ch34 = params.channel_34();
    let ch56 = params.channel_56();
    let mut amps = vec![Complex::new(T::zero(), T::zero()); layout.dim()];
    for l1 in Level::BOTH {
        for l2 in Level::BOTH {
            for l34 in Level::BOTH {
                for l56 in Level::BOTH {
                    let idx = layout.index_of(
                        &[
                            (Register::Qubit(1), l1.index()),
                            (Register::Qubit(2), l2.index()),
                            (Register::Qubit(3), l34.index()),
                            (Register::Qubit(4), l34.index()),
                            (Register::Qubit(5), l56.index()),
                            (Register::Qubit(6), l56.index()),
                            (Register::Mode, 0),
                        ]
                        .into_iter()
                        .collect(),
                    )?;
                    amps[idx] =
                        input[2 * l1.index() + l2.index()] * ch34[l34.index()] * ch56[l56.index()];
                }
            }
        }
    }
    StateVector::from_amplitudes(layout, amps)
}

/// C-NOT(1→3), C-NOT(2→5), then Hadamards on ions 1 and 2.
pub fn alice_stage<T: Real>(state: &StateVector<T>) -> Result<StateVector<T>> {
    state
        .apply(&cnot(1, 3))?
        .apply(&cnot(2, 5))?
        .apply(&hadamard(1))?
        .apply(&hadamard(2))
}

/// Alice's four readouts on ions (1, 3, 2, 5).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AliceOutcome {
    pub bits: [Level; 4],
}

impl AliceOutcome {
    pub fn new(ion1: Level, ion3: Level, ion2: Level, ion5: Level) -> Self {
        Self {
            bits: [ion1, ion3, ion2, ion5],
        }
    }

    /// Outcome number `0..16`, ion 1 most significant, `e` = 0.
    pub fn from_index(index: usize) -> Result<Self> {
        if index >= 16 {
            return Err(Error::UnknownOutcome(index));
        }
        let bit = |k: usize| Level::from_index((index >> (3 - k)) & 1).expect("bit");
        Ok(Self {
            bits: [bit(0), bit(1), bit(2), bit(3)],
        })
    }

    pub fn index(&self) -> usize {
        self.bits.iter().fold(0, |acc, l| (acc << 1) | l.index())
    }

    pub fn all() -> impl Iterator<Item = AliceOutcome> {
        (0..16).map(|i| Self::from_index(i).expect("in range"))
    }

    pub fn ion1(&self) -> Level {
        self.bits[0]
    }
    pub fn ion3(&self) -> Level {
        self.bits[1]
    }
    pub fn ion2(&self) -> Level {
        self.bits[2]
    }
    pub fn ion5(&self) -> Level {
        self.bits[3]
    }
}

impl fmt::Display for AliceOutcome {
    /// `"ee-eg"` = ions (1,3) then ions (2,5).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [l1, l3, l2, l5] = self.bits;
        write!(f, "{l1}{l3}-{l2}{l5}")
    }
}

impl Serialize for AliceOutcome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Dimensionless pulse areas for the two filtering pulses.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PulseSchedule<T> {
    /// Pulse on ion 6: `arccos(|d|/|c|)`.
    pub gt1: T,
    /// Pulse on ion 4: `arccos(|b|/|a|)`.
    pub gt2: T,
    pub phi: T,
}

pub fn pulse_times<T: Real>(params: &ProtocolParams<T>) -> PulseSchedule<T> {
    let ratio = |small: Complex<T>, large: Complex<T>| (small.norm() / large.norm()).min(T::one());
    PulseSchedule {
        gt1: ratio(params.raw.d, params.raw.c).acos(),
        gt2: ratio(params.raw.b, params.raw.a).acos(),
        phi: T::zero(),
    }
}

/// Bob's corrections for one Alice outcome, in application order.
///
/// The filtered branch state on ions (4,6) is, up to the global factor
/// `|bd| e^{i(θ₁+θ₃)}`,
/// `Σ (−1)^{s₁(j₄⊕s₃) + s₂(j₆⊕s₅)} x[j₄⊕s₃, j₆⊕s₅] e^{i(θ(j₄) − θ₁ + θ(j₆) − θ₃)} |j₄ j₆⟩`
/// where `s` are Alice's readouts (g = 1). The collective phase removes the
/// channel phases, `Z` undoes the Hadamard signs and `X` undoes the C-NOT
/// relabeling.
pub fn correction_for<T: Real>(outcome: AliceOutcome, params: &ProtocolParams<T>) -> Vec<Operator<T>> {
    let [t1, t2, t3, t4] = params.thetas();
    let mut ops = vec![collective_phase(4, 6, t4 - t3, t2 - t1)];
    if outcome.ion1() == Level::G {
        ops.push(pauli_z(4));
    }
    if outcome.ion2() == Level::G {
        ops.push(pauli_z(6));
    }
    if outcome.ion3() == Level::G {
        ops.push(pauli_x(4));
    }
    if outcome.ion5() == Level::G {
        ops.push(pauli_x(6));
    }
    ops
}

/// [`correction_for`] addressed by outcome number.
pub fn correction_for_index<T: Real>(index: usize, params: &ProtocolParams<T>) -> Result<Vec<Operator<T>>> {
    Ok(correction_for(AliceOutcome::from_index(index)?, params))
}

/// Full readout record of one shot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BranchOutcome {
    pub alice: AliceOutcome,
    pub phonon_1: usize,
    /// Absent when the first readout already failed.
    pub phonon_2: Option<usize>,
}

impl BranchOutcome {
    pub fn success(&self) -> bool {
        self.phonon_1 == 0 && self.phonon_2 == Some(0)
    }
}

/// Everything Bob's stage produces for one Alice branch.
#[derive(Clone, Debug)]
pub struct BobStage<T> {
    pub outcome: AliceOutcome,
    pub after_first_pulse: StateVector<T>,
    pub first_readout: MeasurementDistribution<usize, T>,
    /// Pulse on ion 4 applied to the phonon-vacuum collapse of the first readout.
    pub after_second_pulse: Option<StateVector<T>>,
    pub second_readout: Option<MeasurementDistribution<usize, T>>,
    /// Normalized state after both vacuum readouts, before correction.
    pub filtered: Option<StateVector<T>>,
    pub corrected: Option<StateVector<T>>,
    /// Probability of both readouts being vacuum, given this branch.
    pub success_probability: T,
}

impl<T: Real> BobStage<T> {
    /// Joint phonon-readout distribution, conditional on the Alice branch.
    pub fn paths(&self) -> Vec<(BranchOutcome, T)> {
        let mut out = Vec::new();
        for first in self.first_readout.outcomes() {
            if first.label == 0 {
                match &self.second_readout {
                    Some(second) => {
                        for o in second.outcomes() {
                            out.push((
                                BranchOutcome {
                                    alice: self.outcome,
                                    phonon_1: 0,
                                    phonon_2: Some(o.label),
                                },
                                first.probability * o.probability,
                            ));
                        }
                    }
                    None => out.push((
                        BranchOutcome {
                            alice: self.outcome,
                            phonon_1: 0,
                            phonon_2: None,
                        },
                        first.probability,
                    )),
                }
            } else {
                out.push((
                    BranchOutcome {
                        alice: self.outcome,
                        phonon_1: first.label,
                        phonon_2: None,
                    },
                    first.probability,
                ));
            }
        }
        out
    }
}

fn check_leakage<T: Real>(state: &StateVector<T>) -> Result<()> {
    let n = state.layout().mode_dim();
    let worst = state
        .amps()
        .iter()
        .enumerate()
        .filter(|(i, _)| i % n == n - 1)
        .map(|(_, z)| z.norm())
        .fold(T::zero(), T::max);
    if worst > T::unitary_tol() {
        return Err(Error::PhononLeakage(worst.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// Pulse on ion 6, phonon readout, pulse on ion 4, phonon readout, and the
/// correction on the double-vacuum path.
pub fn bob_stage<T: Real>(
    branch_state: &StateVector<T>,
    outcome: AliceOutcome,
    schedule: &PulseSchedule<T>,
    params: &ProtocolParams<T>,
) -> Result<BobStage<T>> {
    let mode_dim = branch_state.layout().mode_dim();
    check_leakage(branch_state)?;
    let first_pulse = sideband_unitary(6, &PulseConfig::new(schedule.gt1, schedule.phi, mode_dim)?);
    let second_pulse = sideband_unitary(4, &PulseConfig::new(schedule.gt2, schedule.phi, mode_dim)?);

    let after_first_pulse = branch_state.apply(&first_pulse)?;
    let first_readout = measure_phonon(&after_first_pulse);
    let vacuum_1 = &first_readout.outcomes()[0];

    let mut stage = BobStage {
        outcome,
        success_probability: T::zero(),
        after_second_pulse: None,
        second_readout: None,
        filtered: None,
        corrected: None,
        after_first_pulse: after_first_pulse.clone(),
        first_readout: first_readout.clone(),
    };
    let Some(kept) = &vacuum_1.collapsed else {
        return Ok(stage);
    };
    check_leakage(kept)?;
    let after_second = kept.apply(&second_pulse)?;
    let second_readout = measure_phonon(&after_second);
    let vacuum_2 = &second_readout.outcomes()[0];
    stage.success_probability = vacuum_1.probability * vacuum_2.probability;
    if let Some(filtered) = &vacuum_2.collapsed {
        let mut corrected = filtered.clone();
        for op in correction_for(outcome, params) {
            corrected = corrected.apply(&op)?;
        }
        stage.filtered = Some(filtered.clone());
        stage.corrected = Some(corrected);
    }
    stage.after_second_pulse = Some(after_second);
    stage.second_readout = Some(second_readout);
    Ok(stage)
}

/// `(α|ee⟩ + β|eg⟩ + γ|ge⟩ + δ|gg⟩)₄₆ ⊗ |0⟩`.
pub fn target_state<T: Real>(params: &ProtocolParams<T>, mode_dim: usize) -> Result<StateVector<T>> {
    let layout = RegisterLayout::new(OUTPUT_IONS.to_vec(), mode_dim)?;
    let mut amps = vec![Complex::new(T::zero(), T::zero()); layout.dim()];
    for (k, z) in params.input().into_iter().enumerate() {
        amps[k * mode_dim] = z;
    }
    StateVector::from_amplitudes(layout, amps)
}

/// Fidelity of a corrected six-ion state with the target on ions (4,6), and
/// the leftover global phase `arg⟨target|output⟩`.
pub fn output_fidelity<T: Real>(
    corrected: &StateVector<T>,
    params: &ProtocolParams<T>,
) -> Result<(T, T)> {
    let out = corrected.factor_onto(&OUTPUT_IONS)?;
    let target = target_state(params, corrected.layout().mode_dim())?;
    let fid = fidelity_mod_phase(&out, &target)?;
    let phase = inner(&target, &out)?.arg();
    Ok((fid, phase))
}

/// `4|b|²|d|²`.
pub fn analytic_success<T: Real>(params: &ProtocolParams<T>) -> T {
    T::lit(4.0) * params.b2() * params.d2()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchRecord<T> {
    pub outcome: AliceOutcome,
    /// Probability of this Alice outcome.
    pub probability: T,
    /// Probability of both phonon readouts being vacuum, given the outcome.
    pub success_probability: T,
    /// `probability · success_probability`.
    pub joint_success: T,
    pub fidelity: Option<T>,
    pub residual_phase: Option<T>,
    pub shots: Option<u64>,
    pub successes: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RunMode {
    Enumerate,
    Sampled { shots: u64, seed: u64, successes: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolResult<T> {
    pub per_branch: Vec<BranchRecord<T>>,
    /// Exact success probability from the branch tree.
    pub total_success: T,
    pub analytic_success: T,
    pub mode: RunMode,
}

impl<T: Real> ProtocolResult<T> {
    pub fn abs_deviation(&self) -> T {
        (self.total_success - self.analytic_success).abs()
    }

    pub fn branch_probability_sum(&self) -> T {
        self.per_branch.iter().map(|b| b.probability).sum()
    }

    /// Successes / shots in sampled mode.
    pub fn empirical_rate(&self) -> Option<f64> {
        match self.mode {
            RunMode::Sampled { shots, successes, .. } => Some(successes as f64 / shots as f64),
            RunMode::Enumerate => None,
        }
    }

    /// Normal-approximation interval `rate ± z·√(rate(1−rate)/shots)`, clipped to [0, 1].
    pub fn confidence_interval(&self, z: f64) -> Option<(f64, f64)> {
        let RunMode::Sampled { shots, .. } = self.mode else {
            return None;
        };
        let p = self.empirical_rate()?;
        let half = z * (p * (1.0 - p) / shots as f64).sqrt();
        Some(((p - half).max(0.0), (p + half).min(1.0)))
    }
}

struct BranchTree<T> {
    alice: MeasurementDistribution<Vec<Level>, T>,
    stages: Vec<Option<BobStage<T>>>,
}

fn build_tree<T: Real>(params: &ProtocolParams<T>, mode_dim: usize) -> Result<BranchTree<T>> {
    let state = alice_stage(&prepare_initial(params, mode_dim)?)?;
    let alice = measure_qubits(&state, &ALICE_IONS)?;
    let schedule = pulse_times(params);
    let stages = alice
        .outcomes()
        .iter()
        .enumerate()
        .map(|(k, o)| {
            let outcome = AliceOutcome::from_index(k)?;
            o.collapsed
                .as_ref()
                .map(|s| bob_stage(s, outcome, &schedule, params))
                .transpose()
        })
        .collect::<Result<_>>()?;
    Ok(BranchTree { alice, stages })
}

fn branch_records<T: Real>(tree: &BranchTree<T>, params: &ProtocolParams<T>) -> Result<Vec<BranchRecord<T>>> {
    tree.alice
        .outcomes()
        .iter()
        .zip(&tree.stages)
        .enumerate()
        .map(|(k, (o, stage))| {
            let (success, fid) = match stage {
                Some(st) => (
                    st.success_probability,
                    st.corrected.as_ref().map(|c| output_fidelity(c, params)).transpose()?,
                ),
                None => (T::zero(), None),
            };
            Ok(BranchRecord {
                outcome: AliceOutcome::from_index(k)?,
                probability: o.probability,
                success_probability: success,
                joint_success: o.probability * success,
                fidelity: fid.map(|f| f.0),
                residual_phase: fid.map(|f| f.1),
                shots: None,
                successes: None,
            })
        })
        .collect()
}

/// Exact walk over all 16 Alice outcomes and every phonon readout path.
pub fn run_enumerate<T: Real>(params: &ProtocolParams<T>, mode_dim: usize) -> Result<ProtocolResult<T>> {
    let tree = build_tree(params, mode_dim)?;
    let per_branch = branch_records(&tree, params)?;
    Ok(ProtocolResult {
        total_success: per_branch.iter().map(|b| b.joint_success).sum(),
        analytic_success: analytic_success(params),
        per_branch,
        mode: RunMode::Enumerate,
    })
}

/// Monte Carlo run on the rayon global pool. Shot `k` draws from stream
/// `(seed, k)`, so counts do not depend on the number of workers.
pub fn run_sampled<T: Real>(
    params: &ProtocolParams<T>,
    shots: u64,
    seed: u64,
    mode_dim: usize,
) -> Result<ProtocolResult<T>> {
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let tree = build_tree(params, mode_dim)?;
    let counts = (0..shots)
        .into_par_iter()
        .fold(
            || [[0u64; 2]; 16],
            |mut acc, shot| {
                let (branch, ok) = run_shot(&tree, RngSeed::new(seed, shot));
                acc[branch][0] += 1;
                acc[branch][1] += ok as u64;
                acc
            },
        )
        .reduce(
            || [[0u64; 2]; 16],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    a[0] += b[0];
                    a[1] += b[1];
                }
                x
            },
        );

    let mut per_branch = branch_records(&tree, params)?;
    for (rec, c) in per_branch.iter_mut().zip(counts) {
        rec.shots = Some(c[0]);
        rec.successes = Some(c[1]);
    }
    let successes = counts.iter().map(|c| c[1]).sum();
    Ok(ProtocolResult {
        total_success: per_branch.iter().map(|b| b.joint_success).sum(),
        analytic_success: analytic_success(params),
        per_branch,
        mode: RunMode::Sampled { shots, seed, successes },
    })
}

/// [`run_sampled`] on a dedicated pool with `workers` threads.
pub fn run_sampled_with_workers<T: Real>(
    params: &ProtocolParams<T>,
    shots: u64,
    seed: u64,
    mode_dim: usize,
    workers: usize,
) -> Result<ProtocolResult<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| run_sampled(params, shots, seed, mode_dim))
}

/// One shot: one uniform per measurement event. Returns the Alice branch
/// index and whether both phonon readouts were vacuum.
fn run_shot<T: Real>(tree: &BranchTree<T>, seed: RngSeed) -> (usize, bool) {
    let mut rng = seed.rng();
    let alice = sample(&tree.alice, &mut rng);
    let branch = tree
        .alice
        .outcomes()
        .iter()
        .position(|o| std::ptr::eq(o, alice))
        .expect("sampled from this distribution");
    let stage = tree.stages[branch]
        .as_ref()
        .expect("sampled branches have positive probability");
    if sample(&stage.first_readout, &mut rng).label != 0 {
        return (branch, false);
    }
    let second = stage
        .second_readout
        .as_ref()
        .expect("vacuum readout sampled with positive probability");
    (branch, sample(second, &mut rng).label == 0)
}
