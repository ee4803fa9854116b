//! Reference oracles shared by the integration tests. Nothing here calls the
//! kernel it is used to check.

#![allow(dead_code)]

use iontrap_teleport::hilbert::{ComplexMatrix, Operator, Register, RegisterLayout, StateVector};
use iontrap_teleport::measure::measure_qubits;
use iontrap_teleport::protocol::*;
use iontrap_teleport::{Level, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

pub fn random_state(layout: RegisterLayout, rng: &mut impl Rng) -> StateVector<f64> {
    let amps: Vec<C64> = (0..layout.dim()).map(|_| gaussian(rng)).collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(layout, amps.into_iter().map(|z| z / norm).collect()).unwrap()
}

/// Haar-ish random unitary by Gram-Schmidt on Gaussian columns.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix<f64> {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    let rows = (0..dim).map(|r| (0..dim).map(|c| cols[c][r]).collect()).collect();
    ComplexMatrix::from_rows(rows).unwrap()
}

/// Register sizes and strides computed from scratch, first qubit most significant.
fn digits(layout: &RegisterLayout, mut index: usize) -> Vec<(Register, usize)> {
    let mut regs: Vec<(Register, usize)> = layout
        .qubits()
        .iter()
        .map(|&q| (Register::Qubit(q), 2))
        .collect();
    regs.push((Register::Mode, layout.mode_dim()));
    let mut out = vec![(Register::Mode, 0); regs.len()];
    for (k, &(reg, dim)) in regs.iter().enumerate().rev() {
        out[k] = (reg, index % dim);
        index /= dim;
    }
    out
}

/// Explicit `op ⊗ I` over the whole layout.
pub fn dense_embed(op: &Operator<f64>, layout: &RegisterLayout) -> Vec<Vec<C64>> {
    let dim = layout.dim();
    let targets = op.targets();
    let local = |d: &[(Register, usize)]| {
        targets.iter().fold(0, |acc, t| {
            let (_, v) = d.iter().find(|(r, _)| r == t).unwrap();
            let size = if *t == Register::Mode { layout.mode_dim() } else { 2 };
            acc * size + v
        })
    };
    let mut m = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    for (r, row) in m.iter_mut().enumerate() {
        let dr = digits(layout, r);
        for (c, entry) in row.iter_mut().enumerate() {
            let dc = digits(layout, c);
            let spectators_agree = dr
                .iter()
                .zip(&dc)
                .all(|((reg, a), (_, b))| targets.contains(reg) || a == b);
            if spectators_agree {
                *entry = op.matrix().get(local(&dr), local(&dc));
            }
        }
    }
    m
}

pub fn dense_apply(m: &[Vec<C64>], v: &[C64]) -> Vec<C64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Flat index in the six-ion layout, computed independently of the crate.
pub fn six_index(levels: [Level; 6], phonon: usize, mode_dim: usize) -> usize {
    levels.iter().fold(0, |acc, l| acc * 2 + l.index()) * mode_dim + phonon
}

pub fn lv(s: &str) -> Vec<Level> {
    s.chars()
        .map(|ch| match ch {
            'e' => Level::E,
            'g' => Level::G,
            _ => panic!("bad level {ch}"),
        })
        .collect()
}

/// One term of the Alice-stage expansion: `sign · x · ch34 · ch56 |ion4 ion6⟩`.
pub struct Term {
    pub ions13: &'static str,
    pub ions25: &'static str,
    pub sign: f64,
    /// Index into `[α, β, γ, δ]`.
    pub input: usize,
    /// 'a' or 'b'.
    pub ch34: char,
    /// 'c' or 'd'.
    pub ch56: char,
    pub ions46: &'static str,
}

const A: usize = 0;
const B: usize = 1;
const G: usize = 2;
const D: usize = 3;

macro_rules! terms {
    ($( $o13:literal $o25:literal : $( $s:tt $x:ident $c1:literal $c2:literal $k:literal ),* ; )*) => {
        vec![ $( $( Term {
            ions13: $o13, ions25: $o25,
            sign: if stringify!($s) == "+" { 1.0 } else { -1.0 },
            input: $x, ch34: $c1, ch56: $c2, ions46: $k,
        }, )* )* ]
    };
}

/// The 64 terms of the post-Alice state, each with overall amplitude factor 1/2,
/// transcribed bracket by bracket.
pub fn alice_table() -> Vec<Term> {
    terms! {
        "ee" "ee": + A 'a' 'c' "ee", + B 'a' 'd' "eg", + G 'b' 'c' "ge", + D 'b' 'd' "gg";
        "ee" "eg": + A 'a' 'd' "eg", + B 'a' 'c' "ee", + G 'b' 'd' "gg", + D 'b' 'c' "ge";
        "ee" "ge": + A 'a' 'c' "ee", - B 'a' 'd' "eg", + G 'b' 'c' "ge", - D 'b' 'd' "gg";
        "ee" "gg": + A 'a' 'd' "eg", - B 'a' 'c' "ee", + G 'b' 'd' "gg", - D 'b' 'c' "ge";
        "eg" "ee": + A 'b' 'c' "ge", + B 'b' 'd' "gg", + G 'a' 'c' "ee", + D 'a' 'd' "eg";
        "eg" "eg": + A 'b' 'd' "gg", + B 'b' 'c' "ge", + G 'a' 'd' "eg", + D 'a' 'c' "ee";
        "eg" "ge": + A 'b' 'c' "ge", - B 'b' 'd' "gg", + G 'a' 'c' "ee", - D 'a' 'd' "eg";
        "eg" "gg": + A 'b' 'd' "gg", - B 'b' 'c' "ge", + G 'a' 'd' "eg", - D 'a' 'c' "ee";
        "ge" "ee": + A 'a' 'c' "ee", + B 'a' 'd' "eg", - G 'b' 'c' "ge", - D 'b' 'd' "gg";
        "ge" "eg": + A 'a' 'd' "eg", + B 'a' 'c' "ee", - G 'b' 'd' "gg", - D 'b' 'c' "ge";
        "ge" "ge": + A 'a' 'c' "ee", - B 'a' 'd' "eg", - G 'b' 'c' "ge", + D 'b' 'd' "gg";
        "ge" "gg": + A 'a' 'd' "eg", - B 'a' 'c' "ee", - G 'b' 'd' "gg", + D 'b' 'c' "ge";
        "gg" "ee": + A 'b' 'c' "ge", + B 'b' 'd' "gg", - G 'a' 'c' "ee", - D 'a' 'd' "eg";
        "gg" "eg": + A 'b' 'd' "gg", + B 'b' 'c' "ge", - G 'a' 'd' "eg", - D 'a' 'c' "ee";
        "gg" "ge": + A 'b' 'c' "ge", - B 'b' 'd' "gg", - G 'a' 'c' "ee", + D 'a' 'd' "eg";
        "gg" "gg": + A 'b' 'd' "gg", - B 'b' 'c' "ge", - G 'a' 'd' "eg", + D 'a' 'c' "ee";
    }
}

impl Term {
    pub fn coefficient(&self, p: &ProtocolParams<f64>) -> C64 {
        let raw = p.raw();
        let x = [raw.alpha, raw.beta, raw.gamma, raw.delta][self.input];
        let c34 = if self.ch34 == 'a' { raw.a } else { raw.b };
        let c56 = if self.ch56 == 'c' { raw.c } else { raw.d };
        x * c34 * c56 * self.sign
    }

    /// Ion levels `[1..6]` of this term.
    pub fn levels(&self) -> [Level; 6] {
        let o13 = lv(self.ions13);
        let o25 = lv(self.ions25);
        let k = lv(self.ions46);
        [o13[0], o25[0], o13[1], k[0], o25[1], k[1]]
    }
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Real, pairwise distinct amplitudes.
pub fn distinct_real() -> ProtocolParams<f64> {
    let input = [0.1f64, 0.3, 0.5, 0.7];
    let n = input.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (0.8f64, 0.6f64);
    let (c, d) = (0.9f64, (1.0f64 - 0.81).sqrt());
    RawParams {
        alpha: re(input[0] / n),
        beta: re(input[1] / n),
        gamma: re(-input[2] / n),
        delta: re(input[3] / n),
        a: re(a),
        b: re(b),
        c: re(c),
        d: re(d),
    }
    .validate()
    .unwrap()
}

pub fn complex_params() -> ProtocolParams<f64> {
    ProtocolParams::from_weights(
        [C64::new(0.4, 0.1), C64::new(-0.2, 0.5), C64::new(0.3, -0.3), C64::new(0.1, 0.0)]
            .map(|z| z / (0.17f64 + 0.29 + 0.18 + 0.01).sqrt()),
        0.27,
        0.12,
        [0.4, -1.3, 2.2, 0.9],
    )
    .unwrap()
}

/// Max deviation of the Alice-stage output from the transcribed table.
pub fn check_alice_table(p: &ProtocolParams<f64>, mode_dim: usize) -> f64 {
    let out = alice_stage(&prepare_initial(p, mode_dim).unwrap()).unwrap();
    let mut expected = vec![C64::new(0.0, 0.0); out.amps().len()];
    for t in alice_table() {
        expected[six_index(t.levels(), 0, mode_dim)] += t.coefficient(p) * 0.5;
    }
    max_diff(out.amps(), &expected)
}

/// Waypoints of the (ee,ee) branch written out from the closed-form expressions.
pub struct Waypoints {
    pub after_first: Vec<C64>,
    pub after_second: Vec<C64>,
    pub filtered: Vec<C64>,
}

pub fn waypoints(p: &ProtocolParams<f64>, phi: f64, mode_dim: usize) -> Waypoints {
    let raw = *p.raw();
    let [t1, t2, t3, t4] = p.thetas();
    let (alpha, beta, gamma, delta) = (raw.alpha, raw.beta, raw.gamma, raw.delta);
    let (a, b, c, d) = (raw.a, raw.b, raw.c, raw.d);
    let (ma, mb, md) = (a.norm(), b.norm(), d.norm());
    let gt1 = (md / c.norm()).acos();
    let gt2 = (mb / ma).acos();
    let ph = |x: f64| C64::from_polar(1.0, x);
    let mi = C64::new(0.0, -1.0) * ph(phi);
    let idx = |k46: &str, n: usize| {
        let k = lv(k46);
        six_index([Level::E, Level::E, Level::E, k[0], Level::E, k[1]], n, mode_dim)
    };
    let dim = 64 * mode_dim;
    let branch_norm = ((alpha * a * c).norm_sqr()
        + (beta * a * d).norm_sqr()
        + (gamma * b * c).norm_sqr()
        + (delta * b * d).norm_sqr())
    .sqrt();

    let mut after_first = vec![C64::new(0.0, 0.0); dim];
    after_first[idx("ee", 0)] = ph(t1 + t3) * (ma * md) * alpha;
    after_first[idx("eg", 0)] = ph(t1 + t4) * (ma * md) * beta;
    after_first[idx("ge", 0)] = ph(t2 + t3) * (mb * md) * gamma;
    after_first[idx("gg", 0)] = ph(t2 + t4) * (mb * md) * delta;
    after_first[idx("eg", 1)] = mi * gt1.sin() * alpha * a * c;
    after_first[idx("gg", 1)] = mi * gt1.sin() * gamma * b * c;
    for z in &mut after_first {
        *z /= branch_norm;
    }

    let vacuum_norm = ((ma * md) * alpha).norm_sqr()
        + ((ma * md) * beta).norm_sqr()
        + ((mb * md) * gamma).norm_sqr()
        + ((mb * md) * delta).norm_sqr();
    let vacuum_norm = vacuum_norm.sqrt();
    let pre = ph(t1 + t3) * (mb * md);
    let mut after_second = vec![C64::new(0.0, 0.0); dim];
    after_second[idx("ee", 0)] = pre * alpha;
    after_second[idx("eg", 0)] = pre * ph(t4 - t3) * beta;
    after_second[idx("ge", 0)] = pre * ph(t2 - t1) * gamma;
    after_second[idx("gg", 0)] = pre * ph(t2 + t4 - t1 - t3) * delta;
    after_second[idx("ge", 1)] = mi * gt2.sin() * ph(t1 + t3) * (ma * md) * alpha;
    after_second[idx("gg", 1)] = mi * gt2.sin() * ph(t1 + t4) * (ma * md) * beta;
    for z in &mut after_second {
        *z /= vacuum_norm;
    }

    let mut filtered = vec![C64::new(0.0, 0.0); dim];
    filtered[idx("ee", 0)] = ph(t1 + t3) * alpha;
    filtered[idx("eg", 0)] = ph(t1 + t3) * ph(t4 - t3) * beta;
    filtered[idx("ge", 0)] = ph(t1 + t3) * ph(t2 - t1) * gamma;
    filtered[idx("gg", 0)] = ph(t1 + t3) * ph(t2 + t4 - t1 - t3) * delta;

    Waypoints {
        after_first,
        after_second,
        filtered,
    }
}

pub fn first_branch_stage(p: &ProtocolParams<f64>, phi: f64, mode_dim: usize) -> BobStage<f64> {
    let out = alice_stage(&prepare_initial(p, mode_dim).unwrap()).unwrap();
    let branch = measure_qubits(&out, &ALICE_IONS).unwrap().outcomes()[0]
        .collapsed
        .clone()
        .unwrap();
    let mut sched = pulse_times(p);
    sched.phi = phi;
    bob_stage(&branch, AliceOutcome::from_index(0).unwrap(), &sched, p).unwrap()
}

