//! Symmetric (block-)Toeplitz storage for periodic lattice matrices.
//!
//! A translation-invariant matrix on an `N_1 x ... x N_n` torus is fixed by
//! its first block-row: `M[p][q] = first_row[(q - p) mod N]`, flattened in
//! row-major order over the displacement.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};
use crate::spectral::{fft_nd, strides, unflatten, Direction};

/// Sign convention of an assembled matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// Fractional Laplacian `-mu * f`, negative semidefinite.
    #[default]
    Laplacian,
    /// Characteristic matrix `f = omega_sq * L^(alpha/2)`, positive semidefinite.
    Characteristic,
}

impl Convention {
    pub fn definiteness(self) -> Definiteness {
        match self {
            Convention::Laplacian => Definiteness::NegSemiDef,
            Convention::Characteristic => Definiteness::PosSemiDef,
        }
    }

    /// Factor applied to characteristic elements.
    pub fn scale<T: Real>(self, mass: T) -> T {
        match self {
            Convention::Laplacian => -mass,
            Convention::Characteristic => T::one(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::Laplacian => "laplacian",
            Convention::Characteristic => "characteristic",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "laplacian" | "negsemidef" | "neg" => Ok(Convention::Laplacian),
            "characteristic" | "possemidef" | "pos" => Ok(Convention::Characteristic),
            other => Err(Error::domain(format!("unknown convention '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Definiteness {
    NegSemiDef,
    PosSemiDef,
}

/// Immutable symmetric Toeplitz / block-Toeplitz matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymToeplitz<T> {
    dims: Vec<usize>,
    first_row: Vec<T>,
    definiteness: Definiteness,
}

impl<T: Real> SymToeplitz<T> {
    pub fn new(dims: Vec<usize>, first_row: Vec<T>, definiteness: Definiteness) -> Result<Self> {
        let total: usize = dims.iter().product();
        if first_row.len() != total {
            return Err(Error::DimensionMismatch { expected: total, got: first_row.len() });
        }
        Ok(Self { dims, first_row, definiteness })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total number of sites (matrix order).
    pub fn order(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[T] {
        &self.first_row
    }

    pub fn definiteness(&self) -> Definiteness {
        self.definiteness
    }

    /// Element at a signed displacement, folded into the periodic cell.
    pub fn at_offset(&self, offset: &[i64]) -> Result<T> {
        if offset.len() != self.dims.len() {
            return Err(Error::DimensionMismatch { expected: self.dims.len(), got: offset.len() });
        }
        let st = strides(&self.dims);
        let flat = offset
            .iter()
            .zip(&self.dims)
            .zip(&st)
            .map(|((&d, &n), &s)| d.rem_euclid(n as i64) as usize * s)
            .sum::<usize>();
        Ok(self.first_row[flat])
    }

    /// Matrix entry `M[p][q]` for flat site indices.
    pub fn entry(&self, p: usize, q: usize) -> T {
        let n = self.dims.len();
        let mut pi = vec![0usize; n];
        let mut qi = vec![0usize; n];
        unflatten(p, &self.dims, &mut pi);
        unflatten(q, &self.dims, &mut qi);
        let st = strides(&self.dims);
        let flat = (0..n).map(|j| ((qi[j] + self.dims[j] - pi[j]) % self.dims[j]) * st[j]).sum::<usize>();
        self.first_row[flat]
    }

    /// Sum of one row (equal for every row).
    pub fn row_sum(&self) -> T {
        self.first_row.iter().copied().collect::<CompensatedSum<T>>().value()
    }

    /// Dense matrix, row-major. Intended for small lattices.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let n = self.order();
        (0..n).map(|p| (0..n).map(|q| self.entry(p, q)).collect()).collect()
    }

    /// Direct matrix-vector product, `O(N^2)`.
    pub fn matvec(&self, u: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.order();
        if u.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: u.len() });
        }
        Ok((0..n)
            .map(|p| {
                let mut re = CompensatedSum::new();
                let mut im = CompensatedSum::new();
                for (q, uq) in u.iter().enumerate() {
                    let m = self.entry(p, q);
                    re.add(m * uq.re);
                    im.add(m * uq.im);
                }
                Complex::new(re.value(), im.value())
            })
            .collect())
    }

    /// Eigenvalues in Bloch order, from the DFT of the first row.
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut buf: Vec<Complex<T>> = self.first_row.iter().map(|&v| Complex::new(v, T::zero())).collect();
        fft_nd(&mut buf, &self.dims, Direction::Forward);
        buf.into_iter().map(|c| c.re).collect()
    }

    /// Largest deviation from `f(d) = f(-d)` over all displacements.
    pub fn symmetry_defect(&self) -> T {
        let n = self.dims.len();
        let mut idx = vec![0usize; n];
        let st = strides(&self.dims);
        let mut worst = T::zero();
        for flat in 0..self.order() {
            unflatten(flat, &self.dims, &mut idx);
            let mirror: usize = (0..n).map(|j| ((self.dims[j] - idx[j]) % self.dims[j]) * st[j]).sum();
            worst = worst.max((self.first_row[flat] - self.first_row[mirror]).abs());
        }
        worst
    }
}
