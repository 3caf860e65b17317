//! Sparse operators on a truncated Fock basis.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{ModeSpace, StateVector};

/// Tolerance for the hermitian flag: `max |M - M^dagger| <= HERMITIAN_TOL`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Largest negative variance silently clamped to zero.
pub const VARIANCE_CLAMP: f64 = 1e-12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Lower,
    Raise,
}

/// Compressed-sparse-row complex matrix bound to a [`ModeSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperator {
    space: Arc<ModeSpace>,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<Complex64>,
    hermitian: bool,
}

impl ModeOperator {
    fn from_rows(space: Arc<ModeSpace>, rows: impl IntoIterator<Item = Vec<(usize, Complex64)>>) -> Self {
        let dim = space.total_dim();
        let mut indptr = Vec::with_capacity(dim + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut last: Option<usize> = None;
            for (c, v) in row {
                if last == Some(c) {
                    *values.last_mut().unwrap() += v;
                } else {
                    indices.push(c);
                    values.push(v);
                    last = Some(c);
                }
            }
            indptr.push(indices.len());
        }
        debug_assert_eq!(indptr.len(), dim + 1);
        let mut op = Self { space, indptr, indices, values, hermitian: false };
        op.prune();
        op
    }

    /// Builds an operator from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(space: Arc<ModeSpace>, triplets: &[(usize, usize, Complex64)]) -> Result<Self> {
        let dim = space.total_dim();
        let mut rows = vec![Vec::new(); dim];
        for &(r, c, v) in triplets {
            if r >= dim || c >= dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.max(c) + 1 });
            }
            rows[r].push((c, v));
        }
        Ok(Self::from_rows(space, rows))
    }

    pub fn zero(space: Arc<ModeSpace>) -> Self {
        let dim = space.total_dim();
        Self { space, indptr: vec![0; dim + 1], indices: Vec::new(), values: Vec::new(), hermitian: true }
    }

    pub fn identity(space: Arc<ModeSpace>) -> Self {
        Self::diagonal(space, |_| 1.0)
    }

    /// Real diagonal operator with entry `f(basis index)`.
    pub fn diagonal(space: Arc<ModeSpace>, f: impl Fn(usize) -> f64) -> Self {
        let dim = space.total_dim();
        let rows = (0..dim).map(|i| vec![(i, Complex64::new(f(i), 0.0))]);
        let mut op = Self::from_rows(space, rows);
        op.hermitian = true;
        op
    }

    /// Diagonal operator `f(n)` acting on the occupation of `mode`.
    pub fn mode_function(space: Arc<ModeSpace>, mode: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        space.check_mode(mode)?;
        let s = space.clone();
        Ok(Self::diagonal(space, move |i| f(s.occupation(i, mode))))
    }

    fn prune(&mut self) {
        if self.values.iter().all(|v| *v != ZERO) {
            return;
        }
        let mut indptr = Vec::with_capacity(self.indptr.len());
        let mut indices = Vec::with_capacity(self.indices.len());
        let mut values = Vec::with_capacity(self.values.len());
        indptr.push(0);
        for r in 0..self.dim() {
            for k in self.indptr[r]..self.indptr[r + 1] {
                if self.values[k] != ZERO {
                    indices.push(self.indices[k]);
                    values.push(self.values[k]);
                }
            }
            indptr.push(indices.len());
        }
        self.indptr = indptr;
        self.indices = indices;
        self.values = values;
    }

    pub fn space(&self) -> &Arc<ModeSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Iterator over `(col, value)` in row `r`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let range = self.indptr[r]..self.indptr[r + 1];
        self.indices[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        let range = self.indptr[r]..self.indptr[r + 1];
        match self.indices[range.clone()].binary_search(&c) {
            Ok(k) => self.values[range.start + k],
            Err(_) => ZERO,
        }
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Verifies hermiticity and sets the flag.
    pub fn into_hermitian(mut self) -> Result<Self> {
        let deviation = self.max_abs_diff(&self.adjoint(), None)?;
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let rows = (0..self.dim()).map(|r| self.row(r).chain(other.row(r)).collect::<Vec<_>>());
        let mut op = Self::from_rows(self.space.clone(), rows);
        op.hermitian = self.hermitian && other.hermitian;
        Ok(op)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale_real(-1.0))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut op = self.clone();
        op.values.iter_mut().for_each(|v| *v *= s);
        op.hermitian = self.hermitian && s.im == 0.0;
        op.prune();
        op
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Matrix product `self * other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        let dim = self.dim();
        let mut acc = vec![ZERO; dim];
        let mut marker = vec![usize::MAX; dim];
        let mut touched = Vec::new();
        let mut indptr = Vec::with_capacity(dim + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for r in 0..dim {
            touched.clear();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if marker[c] != r {
                        marker[c] = r;
                        acc[c] = ZERO;
                        touched.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                if acc[c] != ZERO {
                    indices.push(c);
                    values.push(acc[c]);
                }
            }
            indptr.push(indices.len());
        }
        Ok(Self { space: self.space.clone(), indptr, indices, values, hermitian: false })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let dim = self.dim();
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
        for r in 0..dim {
            for (c, v) in self.row(r) {
                rows[c].push((r, v.conj()));
            }
        }
        let mut op = Self::from_rows(self.space.clone(), rows);
        op.hermitian = self.hermitian;
        op
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::identity(self.space.clone());
        for _ in 0..k {
            out = out.multiply(self)?;
        }
        out.hermitian = self.hermitian;
        Ok(out)
    }

    /// `M v` on a raw amplitude slice.
    pub fn apply_raw(&self, v: &[Complex64], out: &mut [Complex64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let mut s = ZERO;
            for k in self.indptr[r]..self.indptr[r + 1] {
                s += self.values[k] * v[self.indices[k]];
            }
            *o = s;
        }
    }

    /// `M psi` as an unnormalized vector.
    pub fn apply(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        if *self.space != **state.space() {
            return Err(Error::SpaceMismatch);
        }
        let mut out = vec![ZERO; self.dim()];
        self.apply_raw(state.amplitudes(), &mut out);
        Ok(out)
    }

    /// Largest entry of `|self - other|`, optionally restricted to rows and
    /// columns where `mask` is true.
    pub fn max_abs_diff(&self, other: &Self, mask: Option<&[bool]>) -> Result<f64> {
        self.same_space(other)?;
        let keep = |i: usize| mask.map_or(true, |m| m[i]);
        let mut worst = 0.0f64;
        for r in (0..self.dim()).filter(|&r| keep(r)) {
            let (mut a, mut b) = (self.row(r).peekable(), other.row(r).peekable());
            loop {
                let (c, d) = match (a.peek().copied(), b.peek().copied()) {
                    (None, None) => break,
                    (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                        a.next();
                        b.next();
                        (ca, va - vb)
                    }
                    (Some((ca, va)), Some((cb, _))) if ca < cb => {
                        a.next();
                        (ca, va)
                    }
                    (Some((ca, va)), None) => {
                        a.next();
                        (ca, va)
                    }
                    (_, Some((cb, vb))) => {
                        b.next();
                        (cb, -vb)
                    }
                };
                if keep(c) {
                    worst = worst.max(d.norm());
                }
            }
        }
        Ok(worst)
    }

    /// Largest absolute row sum, an upper bound on the spectral norm for hermitian operators.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim()).map(|r| self.row(r).map(|(_, v)| v.norm()).sum::<f64>()).fold(0.0, f64::max)
    }
}

impl Add for &ModeOperator {
    type Output = ModeOperator;
    fn add(self, rhs: Self) -> ModeOperator {
        ModeOperator::add(self, rhs).expect("operands share a space")
    }
}

impl Sub for &ModeOperator {
    type Output = ModeOperator;
    fn sub(self, rhs: Self) -> ModeOperator {
        ModeOperator::sub(self, rhs).expect("operands share a space")
    }
}

impl Mul for &ModeOperator {
    type Output = ModeOperator;
    fn mul(self, rhs: Self) -> ModeOperator {
        self.multiply(rhs).expect("operands share a space")
    }
}

impl Mul<&ModeOperator> for Complex64 {
    type Output = ModeOperator;
    fn mul(self, rhs: &ModeOperator) -> ModeOperator {
        rhs.scale(self)
    }
}

impl Mul<&ModeOperator> for f64 {
    type Output = ModeOperator;
    fn mul(self, rhs: &ModeOperator) -> ModeOperator {
        rhs.scale_real(self)
    }
}

impl Neg for &ModeOperator {
    type Output = ModeOperator;
    fn neg(self) -> ModeOperator {
        self.scale_real(-1.0)
    }
}

/// Lowering (`|n> -> sqrt(n)|n-1>`) or raising operator on `mode`.
pub fn ladder(space: &Arc<ModeSpace>, mode: usize, direction: Ladder) -> Result<ModeOperator> {
    space.check_mode(mode)?;
    let stride = space.stride(mode);
    let dim = space.total_dim();
    let rows = (0..dim).map(|r| {
        let n = space.occupation(r, mode);
        match direction {
            // <n-1| a |n> = sqrt(n): row r (occupation n) couples to column with n+1.
            Ladder::Lower if n < space.cutoffs()[mode] => {
                vec![(r + stride, Complex64::new(((n + 1) as f64).sqrt(), 0.0))]
            }
            Ladder::Raise if n > 0 => vec![(r - stride, Complex64::new((n as f64).sqrt(), 0.0))],
            _ => Vec::new(),
        }
    });
    Ok(ModeOperator::from_rows(space.clone(), rows))
}

pub fn lower(space: &Arc<ModeSpace>, mode: usize) -> Result<ModeOperator> {
    ladder(space, mode, Ladder::Lower)
}

pub fn raise(space: &Arc<ModeSpace>, mode: usize) -> Result<ModeOperator> {
    ladder(space, mode, Ladder::Raise)
}

/// Number operator on `mode`.
pub fn number_op(space: &Arc<ModeSpace>, mode: usize) -> Result<ModeOperator> {
    ModeOperator::mode_function(space.clone(), mode, |n| n as f64)
}

/// Largest modulus in a raw vector.
pub fn max_entry(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `<psi|M|psi>`.
pub fn expectation(state: &StateVector, op: &ModeOperator) -> Result<Complex64> {
    let mv = op.apply(state)?;
    Ok(state.amplitudes().iter().zip(&mv).map(|(a, b)| a.conj() * b).sum())
}

/// `<M^2> - <M>^2` for a hermitian `M`.
pub fn variance(state: &StateVector, op: &ModeOperator) -> Result<f64> {
    if !op.is_hermitian() {
        return Err(Error::NonHermitianVariance);
    }
    let mv = op.apply(state)?;
    let mean: f64 = state.amplitudes().iter().zip(&mv).map(|(a, b)| (a.conj() * b).re).sum();
    // M hermitian: <M^2> = ||M psi||^2
    let second: f64 = mv.iter().map(|z| z.norm_sqr()).sum();
    let var = second - mean * mean;
    if var >= 0.0 {
        Ok(var)
    } else if var >= -VARIANCE_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeVariance { value: var })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_pump_state, ModeRole::*, PumpAmplitude};
    use approx::assert_abs_diff_eq;

    fn single(cutoff: usize) -> Arc<ModeSpace> {
        Arc::new(ModeSpace::new(&[Pump], &[cutoff]).unwrap())
    }

    #[test]
    fn lowering_action() {
        let s = single(3);
        let a = lower(&s, 0).unwrap();
        let out = a.apply(&StateVector::basis(s.clone(), &[1]).unwrap()).unwrap();
        assert_eq!(out[0], Complex64::new(1.0, 0.0));
        assert!(out[1..].iter().all(|z| *z == ZERO));
        let out = a.apply(&StateVector::vacuum(s.clone())).unwrap();
        assert!(out.iter().all(|z| *z == ZERO));
        let out = a.apply(&StateVector::basis(s, &[3]).unwrap()).unwrap();
        assert_abs_diff_eq!(out[2].re, 3f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn raise_is_adjoint_of_lower() {
        let s = Arc::new(ModeSpace::new(&[Pump, Stokes], &[4, 3]).unwrap());
        for m in 0..2 {
            let a = lower(&s, m).unwrap();
            let ad = raise(&s, m).unwrap();
            assert_eq!(a.adjoint().max_abs_diff(&ad, None).unwrap(), 0.0);
        }
        assert_eq!(lower(&s, 2).unwrap_err(), Error::InvalidModeIndex { mode: 2, modes: 2 });
    }

    #[test]
    fn number_operator() {
        let s = single(4);
        let n = number_op(&s, 0).unwrap();
        assert!(n.is_hermitian());
        let out = n.apply(&StateVector::basis(s.clone(), &[2]).unwrap()).unwrap();
        assert_eq!(out[2], Complex64::new(2.0, 0.0));
        assert!(n.apply(&StateVector::vacuum(s.clone())).unwrap().iter().all(|z| *z == ZERO));
        let ada = &raise(&s, 0).unwrap() * &lower(&s, 0).unwrap();
        assert!(n.max_abs_diff(&ada, None).unwrap() <= 1e-12);
    }

    #[test]
    fn canonical_commutator_on_interior() {
        let s = Arc::new(ModeSpace::new(&[Pump, Signal], &[5, 4]).unwrap());
        let interior = s.interior_mask(&[1, 1]);
        let id = ModeOperator::identity(s.clone());
        for m in 0..2 {
            let comm = lower(&s, m).unwrap().commutator(&raise(&s, m).unwrap()).unwrap();
            assert!(comm.max_abs_diff(&id, Some(&interior)).unwrap() <= 1e-12);
            // broken at the cutoff level
            assert!(comm.max_abs_diff(&id, None).unwrap() > 1.0);
        }
    }

    #[test]
    fn number_lowering_commutator() {
        let s = single(6);
        let n = number_op(&s, 0).unwrap();
        let a = lower(&s, 0).unwrap();
        let comm = n.commutator(&a).unwrap();
        let interior = s.interior_mask(&[1]);
        assert!(comm.max_abs_diff(&-&a, Some(&interior)).unwrap() <= 1e-12);
    }

    #[test]
    fn algebra_identities() {
        let s = Arc::new(ModeSpace::new(&[Pump, Stokes], &[3, 2]).unwrap());
        let a = lower(&s, 0).unwrap();
        let b = raise(&s, 1).unwrap();
        let m = &(&a * &b) + &(Complex64::new(0.3, -1.2) * &a);
        assert_eq!(m.adjoint().adjoint(), m);
        assert_eq!(m.commutator(&m).unwrap().nnz(), 0);

        let x = (&a + &a.adjoint()).into_hermitian().unwrap();
        let n = number_op(&s, 1).unwrap();
        let c = x.commutator(&n).unwrap();
        // commutator of hermitians is anti-hermitian
        assert!(c.adjoint().max_abs_diff(&-&c, None).unwrap() <= 1e-12);
        assert!(matches!(a.clone().into_hermitian(), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn space_mismatch() {
        let a = lower(&single(3), 0).unwrap();
        let b = lower(&single(4), 0).unwrap();
        assert_eq!(a.add(&b).unwrap_err(), Error::SpaceMismatch);
        assert_eq!(a.multiply(&b).unwrap_err(), Error::SpaceMismatch);
        let psi = StateVector::vacuum(single(4));
        assert_eq!(expectation(&psi, &a).unwrap_err(), Error::SpaceMismatch);
    }

    #[test]
    fn coherent_moments() {
        let s = Arc::new(ModeSpace::new(&[Pump, Stokes], &[23, 2]).unwrap());
        let n = number_op(&s, 0).unwrap();
        let a = lower(&s, 0).unwrap();

        let psi = coherent_pump_state(s.clone(), PumpAmplitude::from_mean_photons(1.0, 0.0).unwrap(), 1e-8).unwrap();
        assert_abs_diff_eq!(expectation(&psi, &n).unwrap().re, 1.0, epsilon = 1e-9);

        let theta = std::f64::consts::FRAC_PI_4;
        let psi = coherent_pump_state(s.clone(), PumpAmplitude::from_mean_photons(4.0, theta).unwrap(), 1e-8).unwrap();
        let mean_a = expectation(&psi, &a).unwrap();
        assert!((mean_a - Complex64::from_polar(2.0, theta)).norm() <= 1e-8);

        let psi = coherent_pump_state(s.clone(), PumpAmplitude::from_mean_photons(2.0, 0.7).unwrap(), 1e-8).unwrap();
        assert_abs_diff_eq!(variance(&psi, &n).unwrap(), 2.0, epsilon = 1e-8);

        let vac = StateVector::vacuum(s.clone());
        assert_eq!(expectation(&vac, &ModeOperator::identity(s.clone())).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(expectation(&vac, &a).unwrap(), ZERO);
        assert_eq!(variance(&vac, &a).unwrap_err(), Error::NonHermitianVariance);
    }
}
