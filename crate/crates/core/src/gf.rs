//! Exact linear algebra over the prime field Z_b.
//!
//! Digits are stored as plain `u8` values in `{0, .., b-1}`; bases are tiny
//! primes, so there is no packed-bitfield fast path. All arithmetic is exact.

use crate::error::{Error, Result};

/// Trial-division primality check; bases never exceed two digits in practice.
pub fn is_prime(b: u64) -> bool {
    if b < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= b {
        if b % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_base(base: u8) -> Result<()> {
    if is_prime(base as u64) {
        Ok(())
    } else {
        Err(Error::NotPrime(base as u64))
    }
}

fn check_digits(entries: &[u8], base: u8) -> Result<()> {
    for &e in entries {
        if e >= base {
            return Err(Error::DigitOutOfRange {
                digit: e as u64,
                base: base as u64,
            });
        }
    }
    Ok(())
}

/// Multiplicative inverse in Z_b, `a` nonzero.
fn inv_mod(a: u8, base: u8) -> u8 {
    debug_assert!(a != 0 && a < base);
    // Fermat: a^(b-2) mod b.
    let mut result = 1u32;
    let mut pow = a as u32;
    let mut exp = base as u32 - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * pow % base as u32;
        }
        pow = pow * pow % base as u32;
        exp >>= 1;
    }
    result as u8
}

/// A dense matrix over Z_b, row-major. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfMatrix {
    base: u8,
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl GfMatrix {
    pub fn new(base: u8, rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self> {
        check_base(base)?;
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        check_digits(&entries, base)?;
        Ok(Self {
            base,
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(base: u8, rows: usize, cols: usize) -> Result<Self> {
        Self::new(base, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(base: u8, size: usize) -> Result<Self> {
        let mut m = Self::zero(base, size, size)?;
        for i in 0..size {
            m.entries[i * size + i] = 1;
        }
        Ok(m)
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn transpose(&self) -> GfMatrix {
        let mut entries = vec![0u8; self.rows * self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                entries[c * self.rows + r] = self.get(r, c);
            }
        }
        GfMatrix {
            base: self.base,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// M·v mod b.
    pub fn mul_vec(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                v.len()
            )));
        }
        check_digits(v, self.base)?;
        let b = self.base as u32;
        let mut out = vec![0u8; self.rows];
        for (r, o) in out.iter_mut().enumerate() {
            let row = self.row(r);
            let mut acc = 0u32;
            for (&a, &x) in row.iter().zip(v) {
                acc += a as u32 * x as u32;
            }
            *o = (acc % b) as u8;
        }
        Ok(out)
    }

    /// M·N mod b.
    pub fn mul(&self, other: &GfMatrix) -> Result<GfMatrix> {
        if self.base != other.base {
            return Err(Error::DimensionMismatch("base mismatch in product".into()));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let b = self.base as u32;
        let mut entries = vec![0u8; self.rows * other.cols];
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = 0u32;
                for k in 0..self.cols {
                    acc += self.get(r, k) as u32 * other.get(k, c) as u32;
                    // Keep the accumulator small; bases are < 2^8.
                    acc %= b;
                }
                entries[r * other.cols + c] = acc as u8;
            }
        }
        Ok(GfMatrix {
            base: self.base,
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// Upper-left `rows` x `cols` block.
    pub fn submatrix(&self, rows: usize, cols: usize) -> Result<GfMatrix> {
        if rows > self.rows || cols > self.cols {
            return Err(Error::DimensionMismatch(format!(
                "submatrix {}x{} of a {}x{} matrix",
                rows, cols, self.rows, self.cols
            )));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            entries.extend_from_slice(&self.row(r)[..cols]);
        }
        Ok(GfMatrix {
            base: self.base,
            rows,
            cols,
            entries,
        })
    }

    /// Rank over Z_b by Gaussian elimination with first-nonzero pivoting.
    pub fn rank(&self) -> usize {
        rank_of_rows(self.base, self.rows, self.cols, self.entries.clone())
    }
}

fn rank_of_rows(base: u8, rows: usize, cols: usize, mut m: Vec<u8>) -> usize {
    let b = base as u32;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows).find(|&r| m[r * cols + col] != 0);
        let Some(p) = pivot else { continue };
        if p != rank {
            for c in 0..cols {
                m.swap(p * cols + c, rank * cols + c);
            }
        }
        let inv = inv_mod(m[rank * cols + col], base) as u32;
        for r in rank + 1..rows {
            let factor = m[r * cols + col] as u32 * inv % b;
            if factor == 0 {
                continue;
            }
            for c in col..cols {
                let sub = factor * m[rank * cols + c] as u32 % b;
                let cur = m[r * cols + c] as u32;
                m[r * cols + c] = ((cur + b - sub) % b) as u8;
            }
        }
        rank += 1;
    }
    rank
}

/// True iff the given rows are linearly independent over Z_b.
/// The empty collection is independent.
pub fn rows_independent(rows: &[impl AsRef<[u8]>], base: u8) -> Result<bool> {
    check_base(base)?;
    if rows.is_empty() {
        return Ok(true);
    }
    let cols = rows[0].as_ref().len();
    let mut flat = Vec::with_capacity(rows.len() * cols);
    for row in rows {
        let row = row.as_ref();
        if row.len() != cols {
            return Err(Error::DimensionMismatch(
                "rows of unequal length".to_string(),
            ));
        }
        check_digits(row, base)?;
        flat.extend_from_slice(row);
    }
    if rows.len() > cols {
        return Ok(false);
    }
    Ok(rank_of_rows(base, rows.len(), cols, flat) == rows.len())
}
