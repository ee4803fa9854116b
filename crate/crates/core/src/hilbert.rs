//! Labeled-register state vectors and the local-operator kernel.
//!
//! A [`RegisterLayout`] is an ordered list of qubit labels (the ions) followed
//! by a single truncated bosonic mode. Basis indices are mixed-radix with the
//! first qubit most significant and the mode least significant; within a qubit
//! `e` is index 0 and `g` is index 1.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Electronic level of one ion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Level {
    /// Excited, basis index 0.
    E,
    /// Ground, basis index 1.
    G,
}

impl Level {
    pub const BOTH: [Level; 2] = [Level::E, Level::G];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Level::E => 0,
            Level::G => 1,
        }
    }

    #[inline]
    pub fn from_index(i: usize) -> Option<Level> {
        match i {
            0 => Some(Level::E),
            1 => Some(Level::G),
            _ => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::E => "e",
            Level::G => "g",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Register {
    Qubit(u32),
    Mode,
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Register::Qubit(q) => write!(f, "ion {q}"),
            Register::Mode => f.write_str("mode"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    qubits: Vec<u32>,
    mode_dim: usize,
}

impl RegisterLayout {
    pub fn new(qubits: impl Into<Vec<u32>>, mode_dim: usize) -> Result<Self> {
        let qubits = qubits.into();
        if mode_dim < 2 {
            return Err(Error::ModeTooSmall(mode_dim));
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::DuplicateRegister(Register::Qubit(*q)));
            }
        }
        Ok(Self { qubits, mode_dim })
    }

    pub fn qubits(&self) -> &[u32] {
        &self.qubits
    }

    pub fn mode_dim(&self) -> usize {
        self.mode_dim
    }

    pub fn dim(&self) -> usize {
        (1usize << self.qubits.len()) * self.mode_dim
    }

    /// Registers in index order: qubits (most significant first), then the mode.
    pub fn registers(&self) -> impl Iterator<Item = Register> + '_ {
        self.qubits
            .iter()
            .map(|&q| Register::Qubit(q))
            .chain(std::iter::once(Register::Mode))
    }

    pub fn contains(&self, reg: Register) -> bool {
        match reg {
            Register::Qubit(q) => self.qubits.contains(&q),
            Register::Mode => true,
        }
    }

    /// Local dimension of a register (2 for qubits).
    pub fn register_dim(&self, reg: Register) -> Result<usize> {
        self.place(reg).map(|(_, d)| d)
    }

    /// `(stride, dim)` of a register inside a flat index.
    pub fn place(&self, reg: Register) -> Result<(usize, usize)> {
        match reg {
            Register::Mode => Ok((1, self.mode_dim)),
            Register::Qubit(q) => {
                let pos = self
                    .qubits
                    .iter()
                    .position(|&l| l == q)
                    .ok_or(Error::UnknownRegister(reg))?;
                let shift = self.qubits.len() - 1 - pos;
                Ok((self.mode_dim << shift, 2))
            }
        }
    }

    /// Basis index of `reg` within flat index `index`.
    pub fn digit(&self, index: usize, reg: Register) -> Result<usize> {
        let (stride, dim) = self.place(reg)?;
        Ok((index / stride) % dim)
    }

    /// Flat index of a full assignment of basis indices.
    pub fn index_of(&self, assignment: &BTreeMap<Register, usize>) -> Result<usize> {
        for reg in assignment.keys() {
            if !self.contains(*reg) {
                return Err(Error::UnknownRegister(*reg));
            }
        }
        let mut index = 0;
        for reg in self.registers() {
            let value = *assignment.get(&reg).ok_or(Error::MissingRegister(reg))?;
            let (stride, dim) = self.place(reg)?;
            if value >= dim {
                return Err(Error::IndexOutOfRange {
                    register: reg,
                    index: value,
                    dim,
                });
            }
            index += value * stride;
        }
        Ok(index)
    }
}

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn diagonal(entries: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m.set(i, i, z);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from real entries given row by row.
    pub fn from_real(dim: usize, entries: &[T]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self {
            dim,
            data: entries.iter().map(|&x| Complex::new(x, T::zero())).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, z: Complex<T>) {
        self.data[row * self.dim + col] = z;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..n {
                    acc += self.get(r, k) * rhs.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Kronecker product, `self` on the more significant index.
    pub fn kron(&self, rhs: &Self) -> Self {
        let n = self.dim * rhs.dim;
        let mut out = Self::zeros(n);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.get(r1, c1);
                for r2 in 0..rhs.dim {
                    for c2 in 0..rhs.dim {
                        out.set(r1 * rhs.dim + r2, c1 * rhs.dim + c2, a * rhs.get(r2, c2));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.dim)
            .map(|r| {
                let row = &self.data[r * self.dim..(r + 1) * self.dim];
                row.iter().zip(v).map(|(&m, &x)| m * x).sum()
            })
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_deviation(&self) -> T {
        let prod = self.adjoint().matmul(self).expect("square");
        prod.max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self.get(r, c).norm() == T::zero()))
    }
}

/// Dense operator on an ordered list of target registers.
///
/// The matrix index is mixed-radix over `targets`, first target most
/// significant, using each register's local basis order.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<T> {
    targets: Vec<Register>,
    matrix: ComplexMatrix<T>,
}

impl<T: Real> Operator<T> {
    pub fn new(targets: Vec<Register>, matrix: ComplexMatrix<T>) -> Result<Self> {
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(Error::DuplicateRegister(*t));
            }
        }
        // Qubit-only operators have a fixed dimension; with the mode it is
        // checked against the layout on application.
        if !targets.contains(&Register::Mode) {
            let expected = 1usize << targets.len();
            if matrix.dim() != expected {
                return Err(Error::DimensionMismatch {
                    expected,
                    found: matrix.dim(),
                });
            }
        }
        Ok(Self { targets, matrix })
    }

    /// Like [`Operator::new`] but rejects matrices that are not unitary.
    pub fn unitary(targets: Vec<Register>, matrix: ComplexMatrix<T>) -> Result<Self> {
        let dev = matrix.unitarity_deviation();
        if dev > T::unitary_tol() {
            return Err(Error::NotUnitary(dev.to_f64().unwrap_or(f64::NAN)));
        }
        Self::new(targets, matrix)
    }

    pub fn targets(&self) -> &[Register] {
        &self.targets
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// `self · inner`: apply `inner` first, then `self`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.targets != inner.targets {
            return Err(Error::LayoutMismatch);
        }
        Ok(Self {
            targets: self.targets.clone(),
            matrix: self.matrix.matmul(&inner.matrix)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    layout: RegisterLayout,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::DimensionMismatch {
                expected: layout.dim(),
                found: amps.len(),
            });
        }
        Ok(Self { layout, amps })
    }

    pub fn zeros(layout: RegisterLayout) -> Self {
        let amps = vec![Complex::new(T::zero(), T::zero()); layout.dim()];
        Self { layout, amps }
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amps(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn amplitude<I>(&self, assignment: I) -> Result<Complex<T>>
    where
        I: IntoIterator<Item = (Register, usize)>,
    {
        let map: BTreeMap<_, _> = assignment.into_iter().collect();
        Ok(self.amps[self.layout.index_of(&map)?])
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        Self {
            layout: self.layout.clone(),
            amps: self.amps.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Returns `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm_sqr().sqrt();
        if n == T::zero() {
            return None;
        }
        Some(self.scaled(Complex::new(n.recip(), T::zero())))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max))
    }

    pub fn apply(&self, op: &Operator<T>) -> Result<Self> {
        apply_local(op, self)
    }

    /// Restricts the state to the listed qubits (plus the mode), provided every
    /// other qubit is in a single definite basis level.
    ///
    /// The definite levels are read off the largest-magnitude amplitude.
    pub fn factor_onto(&self, keep: &[u32]) -> Result<Self> {
        for &q in keep {
            self.layout.place(Register::Qubit(q))?;
        }
        let sub_layout = RegisterLayout::new(keep.to_vec(), self.layout.mode_dim)?;
        let (pivot, _) = self
            .amps
            .iter()
            .enumerate()
            .fold((0, T::zero()), |(bi, bn), (i, z)| {
                let n = z.norm_sqr();
                if n > bn {
                    (i, n)
                } else {
                    (bi, bn)
                }
            });

        // Zero out the kept digits of the pivot to get the base index.
        let mut base = pivot;
        for reg in sub_layout.registers() {
            let (stride, dim) = self.layout.place(reg)?;
            base -= ((pivot / stride) % dim) * stride;
        }
        let amps: Vec<_> = (0..sub_layout.dim())
            .map(|sub| {
                let mut idx = base;
                for reg in sub_layout.registers() {
                    let (sub_stride, dim) = sub_layout.place(reg).expect("own register");
                    let (stride, _) = self.layout.place(reg).expect("checked above");
                    idx += ((sub / sub_stride) % dim) * stride;
                }
                self.amps[idx]
            })
            .collect();
        let captured: T = amps.iter().map(|z| z.norm_sqr()).sum();
        let total = self.norm_sqr();
        if (total - captured).abs() > T::norm_tol() * total.max(T::one()) {
            return Err(Error::NotProduct(captured.to_f64().unwrap_or(f64::NAN)));
        }
        StateVector::from_amplitudes(sub_layout, amps)
    }
}

/// Computational basis state with the given register assignment.
pub fn new_basis_state<T, I>(layout: RegisterLayout, assignment: I) -> Result<StateVector<T>>
where
    T: Real,
    I: IntoIterator<Item = (Register, usize)>,
{
    let map: BTreeMap<_, _> = assignment.into_iter().collect();
    let index = layout.index_of(&map)?;
    let mut state = StateVector::zeros(layout);
    state.amps[index] = Complex::new(T::one(), T::zero());
    Ok(state)
}

/// Applies `op ⊗ I` (identity on every register `op` does not target).
pub fn apply_local<T: Real>(op: &Operator<T>, state: &StateVector<T>) -> Result<StateVector<T>> {
    let layout = &state.layout;
    let mut places = Vec::with_capacity(op.targets.len());
    for &t in &op.targets {
        places.push(layout.place(t)?);
    }
    let local_dim: usize = places.iter().map(|&(_, d)| d).product();
    if local_dim != op.matrix.dim() {
        return Err(Error::DimensionMismatch {
            expected: local_dim,
            found: op.matrix.dim(),
        });
    }

    // Flat offset of every local basis index, first target most significant.
    let offsets: Vec<usize> = (0..local_dim)
        .map(|mut l| {
            let mut off = 0;
            for &(stride, dim) in places.iter().rev() {
                off += (l % dim) * stride;
                l /= dim;
            }
            off
        })
        .collect();

    let mut out = state.amps.clone();
    let mut local = vec![Complex::new(T::zero(), T::zero()); local_dim];
    for base in 0..layout.dim() {
        if places.iter().any(|&(stride, dim)| (base / stride) % dim != 0) {
            continue;
        }
        for (slot, &off) in local.iter_mut().zip(&offsets) {
            *slot = state.amps[base + off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (c, &x) in local.iter().enumerate() {
                acc += op.matrix.get(r, c) * x;
            }
            out[base + off] = acc;
        }
    }
    Ok(StateVector {
        layout: layout.clone(),
        amps: out,
    })
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<Complex<T>> {
    if a.layout != b.layout {
        return Err(Error::LayoutMismatch);
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// `|⟨state|target⟩|²` for normalized arguments; insensitive to global phase.
pub fn fidelity_mod_phase<T: Real>(state: &StateVector<T>, target: &StateVector<T>) -> Result<T> {
    if state.layout != target.layout {
        return Err(Error::LayoutMismatch);
    }
    for (what, s) in [("state", state), ("target", target)] {
        let n = s.norm_sqr();
        if (n - T::one()).abs() > T::input_norm_tol() {
            return Err(Error::NotNormalized {
                what,
                norm_sqr: n.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let f = inner(state, target)?.norm_sqr();
    Ok(f.max(T::zero()).min(T::one()))
}
