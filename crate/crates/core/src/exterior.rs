//! 1-forms, 2-forms and matrices of 2-forms over a fixed basis `e¹,…,eⁿ`.
//!
//! All indices are zero-based. The wedge basis of `∧²V` is the list of pairs
//! `(i, j)` with `i < j` in lexicographic order, so for `n = 3` the slots are
//! `e¹∧e², e¹∧e³, e²∧e³`.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Conjugator, Matrix};

/// A basis element `eⁱ∧eʲ` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wedge {
    pub i: usize,
    pub j: usize,
}

impl Wedge {
    /// Orients an arbitrary pair, returning the canonical element and the
    /// sign relating `eⁱ∧eʲ` to it. Fails for `i == j`.
    pub fn oriented(i: usize, j: usize) -> Result<(Wedge, f64)> {
        match i.cmp(&j) {
            core::cmp::Ordering::Less => Ok((Wedge { i, j }, 1.0)),
            core::cmp::Ordering::Greater => Ok((Wedge { i: j, j: i }, -1.0)),
            core::cmp::Ordering::Equal => Err(Error::InvalidLabel { i, j }),
        }
    }
}

impl fmt::Display for Wedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}^e{}", self.i + 1, self.j + 1)
    }
}

/// The standard basis of `∧²V` for `dim V = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FormBasis {
    n: usize,
}

impl FormBasis {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyBasis);
        }
        Ok(Self { n })
    }

    /// Smallest basis with at least `count` wedge slots.
    pub fn with_capacity(count: usize) -> Self {
        let mut n = 1;
        while n * (n - 1) / 2 < count {
            n += 1;
        }
        Self { n }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of wedge slots, `n(n−1)/2`.
    pub fn len(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn wedges(&self) -> impl Iterator<Item = Wedge> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| Wedge { i, j }))
    }

    pub fn wedge_at(&self, k: usize) -> Option<Wedge> {
        self.wedges().nth(k)
    }

    /// Slot of `w` in lexicographic order.
    pub fn slot(&self, w: Wedge) -> Result<usize> {
        if w.i >= w.j || w.j >= self.n {
            return Err(Error::InvalidLabel { i: w.i, j: w.j });
        }
        // pairs before row i: sum_{r<i} (n-1-r)
        let before = w.i * (2 * self.n - w.i - 1) / 2;
        Ok(before + (w.j - w.i - 1))
    }

    /// Slot and sign for an arbitrary ordered pair `eⁱ∧eʲ`.
    pub fn oriented_slot(&self, i: usize, j: usize) -> Result<(usize, f64)> {
        let (w, sign) = Wedge::oriented(i, j)?;
        Ok((self.slot(w)?, sign))
    }
}

/// An element of `∧²V` as coefficients over the wedge basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoForm {
    basis: FormBasis,
    coeffs: Vec<f64>,
}

impl TwoForm {
    pub fn zero(basis: FormBasis) -> Self {
        Self {
            basis,
            coeffs: alloc::vec![0.0; basis.len()],
        }
    }

    pub fn from_coeffs(basis: FormBasis, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: coeffs.len(),
            });
        }
        Ok(Self { basis, coeffs })
    }

    /// Adds `c · eⁱ∧eʲ`; a reversed pair contributes `−c` to slot `(j, i)`.
    pub fn add_term(&mut self, i: usize, j: usize, c: f64) -> Result<()> {
        let (k, sign) = self.basis.oriented_slot(i, j)?;
        self.coeffs[k] += sign * c;
        Ok(())
    }

    /// Coefficient of `eⁱ∧eʲ` (antisymmetric in the two indices, zero on the
    /// diagonal).
    pub fn coeff(&self, i: usize, j: usize) -> Result<f64> {
        if i == j {
            if i >= self.basis.dim() {
                return Err(Error::InvalidLabel { i, j });
            }
            return Ok(0.0);
        }
        let (k, sign) = self.basis.oriented_slot(i, j)?;
        Ok(sign * self.coeffs[k])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn basis(&self) -> FormBasis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }
}

/// `u ∧ v`, with coefficient `uᵢvⱼ − uⱼvᵢ` on slot `(i, j)`.
pub fn wedge(u: &[f64], v: &[f64], basis: FormBasis) -> Result<TwoForm> {
    let n = basis.dim();
    for len in [u.len(), v.len()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    let coeffs = basis
        .wedges()
        .map(|w| u[w.i] * v[w.j] - u[w.j] * v[w.i])
        .collect();
    Ok(TwoForm { basis, coeffs })
}

/// A 1-form `Σ cᵢ eⁱ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm {
    coeffs: Vec<f64>,
}

impl OneForm {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            coeffs: alloc::vec![0.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// An `m × m` matrix of 2-forms `Ω = Σₖ wₖ Sₖ`, stored as one real term
/// matrix `Sₖ` per wedge slot `wₖ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormMatrix {
    size: usize,
    basis: FormBasis,
    terms: Vec<Matrix>,
}

impl FormMatrix {
    pub fn new(basis: FormBasis, size: usize, terms: Vec<Matrix>) -> Result<Self> {
        if terms.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: terms.len(),
            });
        }
        check_square_terms(size, &terms)?;
        Ok(Self { size, basis, terms })
    }

    pub fn zero(basis: FormBasis, size: usize) -> Self {
        Self {
            size,
            basis,
            terms: alloc::vec![Matrix::zeros(size, size); basis.len()],
        }
    }

    /// Builds `Ω` from `(eⁱ∧eʲ, M)` pairs in any order or orientation.
    /// A reversed pair contributes `−M`; repeated unordered pairs are rejected.
    pub fn from_labeled_terms<I>(basis: FormBasis, size: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Matrix)>,
    {
        let mut out = Self::zero(basis, size);
        let mut seen = alloc::vec![false; basis.len()];
        for ((i, j), m) in terms {
            let (k, sign) = basis.oriented_slot(i, j)?;
            if seen[k] {
                let w = basis.wedge_at(k).expect("slot in range");
                return Err(Error::DuplicateLabel { i: w.i, j: w.j });
            }
            seen[k] = true;
            check_square_terms(size, core::slice::from_ref(&m))?;
            out.terms[k] = m * sign;
        }
        Ok(out)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn basis(&self) -> FormBasis {
        self.basis
    }

    pub fn terms(&self) -> &[Matrix] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Matrix> {
        self.terms
    }

    /// Term matrix attached to `eⁱ∧eʲ`, sign-adjusted for reversed pairs.
    pub fn term(&self, i: usize, j: usize) -> Result<Matrix> {
        let (k, sign) = self.basis.oriented_slot(i, j)?;
        Ok(&self.terms[k] * sign)
    }

    /// Entry `Ω_ij = Σₖ (Sₖ)_ij wₖ`.
    pub fn entry(&self, i: usize, j: usize) -> Result<TwoForm> {
        if i >= self.size || j >= self.size {
            return Err(Error::IndexOutOfRange {
                i,
                j,
                size: self.size,
            });
        }
        let coeffs = self.terms.iter().map(|s| s[(i, j)]).collect();
        Ok(TwoForm {
            basis: self.basis,
            coeffs,
        })
    }

    /// `U⁻¹ Ω U`, applied term by term.
    pub fn conjugate(&self, u: &Matrix) -> Result<Self> {
        let conj = conjugator(self.size, u)?;
        Ok(Self {
            size: self.size,
            basis: self.basis,
            terms: self.terms.iter().map(|s| conj.apply(s)).collect(),
        })
    }
}

/// An `m × m` matrix of 1-forms `ω = Σᵢ eⁱ Θᵢ`, stored as one real matrix per
/// basis covector.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionMatrix {
    size: usize,
    terms: Vec<Matrix>,
}

impl ConnectionMatrix {
    /// `terms[i]` is the coefficient matrix of `eⁱ`.
    pub fn new(size: usize, terms: Vec<Matrix>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyBasis);
        }
        check_square_terms(size, &terms)?;
        Ok(Self { size, terms })
    }

    /// Builds the matrix from its entries, all of which must share one
    /// dimension.
    pub fn from_entries(entries: &[Vec<OneForm>]) -> Result<Self> {
        let size = entries.len();
        let n = entries
            .first()
            .and_then(|row| row.first())
            .map(OneForm::dim)
            .ok_or(Error::EmptyBasis)?;
        let mut terms = alloc::vec![Matrix::zeros(size, size); n];
        for (r, row) in entries.iter().enumerate() {
            if row.len() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: row.len(),
                });
            }
            for (c, form) in row.iter().enumerate() {
                if form.dim() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: form.dim(),
                    });
                }
                for (t, &v) in terms.iter_mut().zip(form.coeffs()) {
                    t[(r, c)] = v;
                }
            }
        }
        Self::new(size, terms)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn form_dim(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Matrix] {
        &self.terms
    }

    pub fn entry(&self, i: usize, j: usize) -> Result<OneForm> {
        if i >= self.size || j >= self.size {
            return Err(Error::IndexOutOfRange {
                i,
                j,
                size: self.size,
            });
        }
        Ok(OneForm::new(self.terms.iter().map(|t| t[(i, j)]).collect()))
    }

    /// `B⁻¹ ω B` for a constant frame change `B`.
    pub fn conjugate(&self, b: &Matrix) -> Result<Self> {
        let conj = conjugator(self.size, b)?;
        Ok(Self {
            size: self.size,
            terms: self.terms.iter().map(|t| conj.apply(t)).collect(),
        })
    }
}

fn conjugator(size: usize, u: &Matrix) -> Result<Conjugator> {
    if u.nrows() != size || u.ncols() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            found: if u.nrows() != size {
                u.nrows()
            } else {
                u.ncols()
            },
        });
    }
    Conjugator::new(u)
}

fn check_square_terms(size: usize, terms: &[Matrix]) -> Result<()> {
    for t in terms {
        for d in [t.nrows(), t.ncols()] {
            if d != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: d,
                });
            }
        }
    }
    Ok(())
}
