//! Projective measurements in the computational basis, returned as complete
//! outcome distributions, and seeded sampling from them.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{Level, Register, StateVector};
use crate::scalar::Real;

/// Random stream used for one Monte Carlo shot.
pub type ShotRng = ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome<L, T> {
    pub label: L,
    pub probability: T,
    /// Renormalized post-measurement state; `None` when the outcome cannot occur.
    pub collapsed: Option<StateVector<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementDistribution<L, T> {
    outcomes: Vec<Outcome<L, T>>,
}

impl<L, T: Real> MeasurementDistribution<L, T> {
    pub fn outcomes(&self) -> &[Outcome<L, T>] {
        &self.outcomes
    }

    pub fn into_outcomes(self) -> Vec<Outcome<L, T>> {
        self.outcomes
    }

    pub fn total_probability(&self) -> T {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    pub fn get(&self, label: &L) -> Option<&Outcome<L, T>>
    where
        L: PartialEq,
    {
        self.outcomes.iter().find(|o| &o.label == label)
    }
}

/// `(seed, stream)` pair identifying an independent random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ShotRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Probabilities at or below this are reported as exactly zero.
fn zero_cut<T: Real>() -> T {
    T::epsilon() * T::epsilon()
}

/// Groups amplitudes by `key(index)` over `0..n_outcomes` and builds the
/// distribution.
fn project<L, T, F>(state: &StateVector<T>, labels: Vec<L>, key: F) -> MeasurementDistribution<L, T>
where
    T: Real,
    F: Fn(usize) -> usize,
{
    let mut weights = vec![T::zero(); labels.len()];
    for (i, z) in state.amps().iter().enumerate() {
        weights[key(i)] += z.norm_sqr();
    }
    let total = state.norm_sqr();
    let outcomes = labels
        .into_iter()
        .enumerate()
        .map(|(k, label)| {
            let w = weights[k];
            if w <= zero_cut::<T>() * total.max(T::one()) {
                return Outcome {
                    label,
                    probability: T::zero(),
                    collapsed: None,
                };
            }
            let scale = Complex::new(w.sqrt().recip(), T::zero());
            let amps = state
                .amps()
                .iter()
                .enumerate()
                .map(|(i, &z)| {
                    if key(i) == k {
                        z * scale
                    } else {
                        Complex::new(T::zero(), T::zero())
                    }
                })
                .collect();
            Outcome {
                label,
                probability: w / total,
                collapsed: Some(
                    StateVector::from_amplitudes(state.layout().clone(), amps)
                        .expect("same layout"),
                ),
            }
        })
        .collect();
    MeasurementDistribution { outcomes }
}

/// Measures `targets` in the `{e, g}` basis.
///
/// Outcomes are listed in lexicographic order of the target levels with the
/// first target most significant (so `e…e` first).
pub fn measure_qubits<T: Real>(
    state: &StateVector<T>,
    targets: &[u32],
) -> Result<MeasurementDistribution<Vec<Level>, T>> {
    let layout = state.layout();
    let mut strides = Vec::with_capacity(targets.len());
    for (i, &q) in targets.iter().enumerate() {
        if targets[..i].contains(&q) {
            return Err(Error::DuplicateRegister(Register::Qubit(q)));
        }
        strides.push(layout.place(Register::Qubit(q))?.0);
    }
    let n = targets.len();
    let labels = (0..1usize << n)
        .map(|k| {
            (0..n)
                .map(|t| Level::from_index((k >> (n - 1 - t)) & 1).expect("bit"))
                .collect()
        })
        .collect();
    Ok(project(state, labels, |i| {
        strides
            .iter()
            .fold(0, |acc, &s| (acc << 1) | ((i / s) & 1))
    }))
}

/// Measures the phonon number, one outcome per Fock level.
pub fn measure_phonon<T: Real>(state: &StateVector<T>) -> MeasurementDistribution<usize, T> {
    let n = state.layout().mode_dim();
    project(state, (0..n).collect(), |i| i % n)
}

/// Inverse-CDF draw from a single uniform variate.
///
/// Zero-probability outcomes are never returned.
pub fn sample<'a, L, T, R>(dist: &'a MeasurementDistribution<L, T>, rng: &mut R) -> &'a Outcome<L, T>
where
    T: Real,
    R: Rng + ?Sized,
{
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = None;
    for o in &dist.outcomes {
        let p = o.probability.to_f64().unwrap_or(0.0);
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = Some(o);
        if u < acc {
            return o;
        }
    }
    // Rounding left the cumulative sum just under 1.
    last.expect("distribution has at least one possible outcome")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::RegisterLayout;

    type C = Complex<f64>;

    fn sample_state() -> StateVector<f64> {
        let l = RegisterLayout::new(vec![1, 2, 3], 3).unwrap();
        let amps = (0..l.dim())
            .map(|k| C::new((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos()))
            .collect();
        StateVector::from_amplitudes(l, amps).unwrap().normalized().unwrap()
    }

    #[test]
    fn eigenstate_measures_with_certainty() {
        let l = RegisterLayout::new(vec![1, 2], 2).unwrap();
        let s: StateVector<f64> = crate::hilbert::new_basis_state(
            l,
            [(Register::Qubit(1), 0), (Register::Qubit(2), 1), (Register::Mode, 0)],
        )
        .unwrap();
        let d = measure_qubits(&s, &[1]).unwrap();
        assert_eq!(d.outcomes()[0].label, vec![Level::E]);
        assert_eq!(d.outcomes()[0].probability, 1.0);
        assert_eq!(d.outcomes()[1].probability, 0.0);
        assert!(d.outcomes()[1].collapsed.is_none());

        let p = measure_phonon(&s);
        assert_eq!(p.outcomes()[0].probability, 1.0);
    }

    #[test]
    fn probabilities_complete_and_collapse_is_fixed_point() {
        let s = sample_state();
        let d = measure_qubits(&s, &[3, 1]).unwrap();
        assert_eq!(d.outcomes().len(), 4);
        assert!((d.total_probability() - 1.0).abs() < 1e-12);
        for o in d.outcomes() {
            let c = o.collapsed.as_ref().unwrap();
            assert!((c.norm_sqr() - 1.0).abs() < 1e-12);
            let again = measure_qubits(c, &[3, 1]).unwrap();
            let same = again.get(&o.label).unwrap();
            assert!((same.probability - 1.0).abs() < 1e-12);
        }
        let p = measure_phonon(&s);
        assert_eq!(p.outcomes().len(), 3);
        assert!((p.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_or_repeated_targets() {
        let s = sample_state();
        assert_eq!(
            measure_qubits(&s, &[4]).unwrap_err(),
            Error::UnknownRegister(Register::Qubit(4))
        );
        assert!(measure_qubits(&s, &[1, 1]).is_err());
    }

    #[test]
    fn degenerate_distribution_ignores_seed() {
        let l = RegisterLayout::new(vec![1], 2).unwrap();
        let s: StateVector<f64> =
            crate::hilbert::new_basis_state(l, [(Register::Qubit(1), 1), (Register::Mode, 0)])
                .unwrap();
        let d = measure_qubits(&s, &[1]).unwrap();
        for seed in 0..50 {
            let mut rng = RngSeed::new(seed, seed * 7).rng();
            assert_eq!(sample(&d, &mut rng).label, vec![Level::G]);
        }
    }

    #[test]
    fn stream_is_deterministic() {
        let a: Vec<u64> = {
            let mut r = RngSeed::new(42, 3).rng();
            (0..8).map(|_| r.random()).collect()
        };
        let b: Vec<u64> = {
            let mut r = RngSeed::new(42, 3).rng();
            (0..8).map(|_| r.random()).collect()
        };
        let other: Vec<u64> = {
            let mut r = RngSeed::new(42, 4).rng();
            (0..8).map(|_| r.random()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, other);
    }

    #[test]
    fn empirical_frequency_within_binomial_bound() {
        // |ψ⟩ = (|e⟩ + √3 |g⟩)/2 → P(e) = 0.25
        let l = RegisterLayout::new(vec![1], 2).unwrap();
        let mut amps = vec![C::new(0.0, 0.0); 4];
        amps[0] = C::new(0.5, 0.0);
        amps[2] = C::new(3f64.sqrt() / 2.0, 0.0);
        let s = StateVector::from_amplitudes(l, amps).unwrap();
        let d = measure_qubits(&s, &[1]).unwrap();
        let n = 100_000u64;
        let hits = (0..n)
            .filter(|&k| {
                let mut rng = RngSeed::new(2024, k).rng();
                sample(&d, &mut rng).label == vec![Level::E]
            })
            .count() as f64;
        let p = 0.25;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((hits / n as f64 - p).abs() < 4.0 * sigma);
    }
}
