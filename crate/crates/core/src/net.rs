//! Digital net construction: generating matrices, point generation and
//! digit interlacing.
//!
//! A digital net over Z_b is the image of the counter digits under s linear
//! maps: point h with base-b digits (eta_0, .., eta_{m-1}) (eta_0 least
//! significant) gets coordinate j with fraction digits C_j * eta. All digits
//! are kept exact; conversion to binary floats happens at the edge.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::gf::GfMatrix;
use crate::sobol_tables::{SobolRow, MAX_SOBOL_DIMENSION, SOBOL_ROWS};

/// The s generating matrices of a digital net, all of shape n x m over Z_b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingMatrices {
    base: u8,
    rows: usize,
    cols: usize,
    mats: Vec<GfMatrix>,
}

impl GeneratingMatrices {
    pub fn new(mats: Vec<GfMatrix>) -> Result<Self> {
        let first = mats
            .first()
            .ok_or_else(|| Error::InvalidParameter("need at least one matrix".into()))?;
        let (base, rows, cols) = (first.base(), first.rows(), first.cols());
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("empty matrix shape".into()));
        }
        for m in &mats {
            if m.base() != base || m.rows() != rows || m.cols() != cols {
                return Err(Error::DimensionMismatch(
                    "generating matrices must share base and shape".into(),
                ));
            }
        }
        Ok(Self {
            base,
            rows,
            cols,
            mats,
        })
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    /// Digit depth n (rows per matrix).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns m; the net has b^m points.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dimension(&self) -> usize {
        self.mats.len()
    }

    pub fn matrix(&self, j: usize) -> &GfMatrix {
        &self.mats[j]
    }

    pub fn matrices(&self) -> &[GfMatrix] {
        &self.mats
    }
}

/// One coordinate of a net point: an exact n-digit base-b fraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinate {
    base: u8,
    digits: Vec<u8>,
}

impl Coordinate {
    pub fn new(base: u8, digits: Vec<u8>) -> Result<Self> {
        for &d in &digits {
            if d >= base {
                return Err(Error::DigitOutOfRange {
                    digit: d as u64,
                    base: base as u64,
                });
            }
        }
        Ok(Self { base, digits })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    /// Exact value as numerator over base^depth.
    pub fn numerator(&self) -> u128 {
        let mut acc: u128 = 0;
        for &d in &self.digits {
            acc = acc * self.base as u128 + d as u128;
        }
        acc
    }

    /// Value in [0,1). Exact whenever base^depth <= 2^52; at most a couple
    /// of ulps otherwise.
    pub fn to_f64(&self) -> f64 {
        digits_to_f64(self.base, &self.digits)
    }
}

pub(crate) fn digits_to_f64(base: u8, digits: &[u8]) -> f64 {
    debug_assert!(digits.len() as f64 * (base as f64).log2() < 127.0);
    let mut num: u128 = 0;
    let mut den: u128 = 1;
    for &d in digits {
        num = num * base as u128 + d as u128;
        den *= base as u128;
    }
    num as f64 / den as f64
}

/// Largest digit depth d with base^d <= 2^52, so digit-to-float conversion
/// stays exact.
pub fn exact_float_digits(base: u8) -> usize {
    let mut d = 0;
    let mut acc: u128 = 1;
    let cap: u128 = 1 << 52;
    while acc * base as u128 <= cap {
        acc *= base as u128;
        d += 1;
    }
    d
}

/// All b^m points of a digital net, digits stored exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    base: u8,
    dimension: usize,
    digit_depth: usize,
    log_count: usize,
    /// [point][coordinate][digit], flattened.
    digits: Vec<u8>,
}

impl PointSet {
    pub(crate) fn from_raw(
        base: u8,
        dimension: usize,
        digit_depth: usize,
        log_count: usize,
        digits: Vec<u8>,
    ) -> Self {
        debug_assert_eq!(
            digits.len(),
            (base as usize).pow(log_count as u32) * dimension * digit_depth
        );
        Self {
            base,
            dimension,
            digit_depth,
            log_count,
            digits,
        }
    }

    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn digit_depth(&self) -> usize {
        self.digit_depth
    }

    /// The m of b^m.
    pub fn log_count(&self) -> usize {
        self.log_count
    }

    pub fn len(&self) -> usize {
        (self.base as usize).pow(self.log_count as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coord_digits(&self, h: usize, j: usize) -> &[u8] {
        let stride = self.dimension * self.digit_depth;
        let start = h * stride + j * self.digit_depth;
        &self.digits[start..start + self.digit_depth]
    }

    pub fn coordinate(&self, h: usize, j: usize) -> Coordinate {
        Coordinate {
            base: self.base,
            digits: self.coord_digits(h, j).to_vec(),
        }
    }

    /// Row-major N x s matrix of float coordinates.
    pub fn to_floats(&self) -> Vec<f64> {
        let n = self.len();
        let mut out = Vec::with_capacity(n * self.dimension);
        for h in 0..n {
            for j in 0..self.dimension {
                out.push(digits_to_f64(self.base, self.coord_digits(h, j)));
            }
        }
        out
    }
}

/// Digits of h in base b, least significant first, padded to `len`.
pub(crate) fn counter_digits(mut h: u64, base: u8, len: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    for slot in out.iter_mut() {
        *slot = (h % base as u64) as u8;
        h /= base as u64;
    }
    debug_assert_eq!(h, 0);
    out
}

/// Generate all b^m points of the net defined by `g`, in counter order.
pub fn generate_points(g: &GeneratingMatrices) -> Result<PointSet> {
    let b = g.base();
    let m = g.cols();
    let n = g.rows();
    let s = g.dimension();
    if (m as f64) * (b as f64).log2() > 30.0 {
        return Err(Error::SizeOverflow {
            base: b as u64,
            m: m as u32,
        });
    }
    let count = (b as u64).pow(m as u32);
    let mut digits = Vec::with_capacity(count as usize * s * n);
    for h in 0..count {
        let eta = counter_digits(h, b, m);
        for j in 0..s {
            digits.extend_from_slice(&g.matrix(j).mul_vec(&eta)?);
        }
    }
    Ok(PointSet::from_raw(b, s, n, m, digits))
}

/// Binomial table mod b up to row `size`.
fn pascal_matrix(base: u8, size: usize) -> GfMatrix {
    // entry (r, c) = binom(c, r) mod b, upper triangular
    let mut binom = vec![vec![0u16; size]; size];
    for c in 0..size {
        binom[0][c] = 1;
    }
    for r in 1..size {
        for c in r..size {
            binom[r][c] = (binom[r - 1][c - 1] + if c > 0 { binom[r][c - 1] } else { 0 })
                % base as u16;
        }
    }
    let mut entries = Vec::with_capacity(size * size);
    for r in 0..size {
        for c in 0..size {
            entries.push(binom[r][c] as u8);
        }
    }
    GfMatrix::new(base, size, size, entries).expect("pascal digits in range")
}

/// Faure generating matrices: C_j = P^(j-1) with P the upper-triangular
/// Pascal matrix mod b. Yields a (0, m, s)-net whenever b >= s.
pub fn faure_matrices(base: u8, s: usize, m: usize) -> Result<GeneratingMatrices> {
    if (base as usize) < s {
        return Err(Error::InvalidParameter(format!(
            "faure construction needs base >= dimension, got b={} s={}",
            base, s
        )));
    }
    if s == 0 || m == 0 {
        return Err(Error::InvalidParameter("need s >= 1 and m >= 1".into()));
    }
    let pascal = pascal_matrix(base, m);
    let mut mats = Vec::with_capacity(s);
    let mut current = GfMatrix::identity(base, m)?;
    for _ in 0..s {
        mats.push(current.clone());
        current = current.mul(&pascal)?;
    }
    GeneratingMatrices::new(mats)
}

fn sobol_direction_numbers(row: &SobolRow, m: usize) -> Vec<u64> {
    let g = row.poly_degree as usize;
    let mut dir: Vec<u64> = row.initial.iter().map(|&v| v as u64).collect();
    dir.truncate(m);
    for k in dir.len()..m {
        // m_k = 2 a_1 m_{k-1} ^ ... ^ 2^{g-1} a_{g-1} m_{k-g+1} ^ 2^g m_{k-g} ^ m_{k-g}
        let mut v = dir[k - g] ^ (dir[k - g] << g);
        for i in 1..g {
            if row.poly_coeffs >> (g - 1 - i) & 1 == 1 {
                v ^= dir[k - i] << i;
            }
        }
        dir.push(v);
    }
    dir
}

/// Base-2 Sobol' generating matrices from the embedded direction-number
/// table; coordinate 1 is the van der Corput identity.
pub fn sobol_matrices(s: usize, m: usize) -> Result<GeneratingMatrices> {
    if s == 0 || s > MAX_SOBOL_DIMENSION {
        return Err(Error::InvalidParameter(format!(
            "sobol table covers dimensions 1..={}, requested {}",
            MAX_SOBOL_DIMENSION, s
        )));
    }
    if m == 0 || m > 31 {
        return Err(Error::InvalidParameter(format!(
            "sobol matrices support 1 <= m <= 31, requested {}",
            m
        )));
    }
    let mut mats = vec![GfMatrix::identity(2, m)?];
    for row in SOBOL_ROWS.iter().take(s - 1) {
        let dir = sobol_direction_numbers(row, m);
        let mut entries = vec![0u8; m * m];
        for (k, &mk) in dir.iter().enumerate() {
            // column k holds the binary fraction digits of m_k / 2^(k+1)
            for i in 0..=k {
                entries[i * m + k] = (mk >> (k - i) & 1) as u8;
            }
        }
        mats.push(GfMatrix::new(2, m, m, entries)?);
    }
    GeneratingMatrices::new(mats)
}

/// Restrict stored square generating matrices to their upper-left m x m
/// block, the finite net of a digital sequence.
pub fn sequence_to_net(g: &GeneratingMatrices, m: usize) -> Result<GeneratingMatrices> {
    if g.rows() != g.cols() {
        return Err(Error::InvalidParameter(
            "sequence matrices must be square".into(),
        ));
    }
    if m == 0 || m > g.cols() {
        return Err(Error::InvalidParameter(format!(
            "target size {} out of range 1..={}",
            m,
            g.cols()
        )));
    }
    let mats = g
        .matrices()
        .iter()
        .map(|c| c.submatrix(m, m))
        .collect::<Result<Vec<_>>>()?;
    GeneratingMatrices::new(mats)
}

/// Digit interlacing composition: fold factor-alpha groups of coordinates of
/// a square order-1 net into one coordinate each, interleaving matrix rows.
/// Row alpha*(h-1)+i of D_j is row h of C_{alpha*(j-1)+i}.
pub fn interlace(q: &GeneratingMatrices, alpha: usize) -> Result<GeneratingMatrices> {
    if alpha == 0 {
        return Err(Error::InvalidParameter("interlacing factor 0".into()));
    }
    if q.dimension() % alpha != 0 {
        return Err(Error::InvalidParameter(format!(
            "dimension {} not divisible by interlacing factor {}",
            q.dimension(),
            alpha
        )));
    }
    if q.rows() != q.cols() {
        return Err(Error::InvalidParameter(
            "interlacing expects square source matrices".into(),
        ));
    }
    let m = q.cols();
    let s_out = q.dimension() / alpha;
    let mut mats = Vec::with_capacity(s_out);
    for j in 0..s_out {
        let mut entries = Vec::with_capacity(alpha * m * m);
        for h in 0..m {
            for i in 0..alpha {
                entries.extend_from_slice(q.matrix(alpha * j + i).row(h));
            }
        }
        mats.push(GfMatrix::new(q.base(), alpha * m, m, entries)?);
    }
    GeneratingMatrices::new(mats)
}

/// t-value guaranteed for a factor-alpha interlaced net built from an
/// order-1 (t', m, alpha*s)-net: alpha * min(m, t' + floor(s(alpha-1)/2)).
pub fn interlaced_t_bound(t_prime: usize, alpha: usize, s: usize, m: usize) -> usize {
    alpha * m.min(t_prime + s * (alpha - 1) / 2)
}

/// Write the plain-text matrix format: header `b n m s`, then for each
/// matrix n lines of m digits, matrices separated by a blank line.
pub fn write_matrices(g: &GeneratingMatrices, w: &mut impl Write) -> std::io::Result<()> {
    writeln!(
        w,
        "{} {} {} {}",
        g.base(),
        g.rows(),
        g.cols(),
        g.dimension()
    )?;
    for j in 0..g.dimension() {
        for r in 0..g.rows() {
            let line: Vec<String> = g.matrix(j).row(r).iter().map(|d| d.to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        if j + 1 < g.dimension() {
            writeln!(w)?;
        }
    }
    Ok(())
}

/// Read the plain-text matrix format written by [`write_matrices`].
pub fn read_matrices(r: impl BufRead) -> Result<GeneratingMatrices> {
    let bad = |msg: &str| Error::InvalidParameter(format!("matrix file: {}", msg));
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| bad("missing header"))?
        .map_err(|e| bad(&e.to_string()))?;
    let fields: Vec<u64> = header
        .split_whitespace()
        .map(|f| f.parse().map_err(|_| bad("non-integer header field")))
        .collect::<Result<_>>()?;
    let [b, n, m, s] = fields[..] else {
        return Err(bad("header must be `b n m s`"));
    };
    if b > u8::MAX as u64 {
        return Err(bad("base too large"));
    }
    let mut mats = Vec::with_capacity(s as usize);
    let mut rows: Vec<Vec<u8>> = Vec::with_capacity(n as usize);
    for line in lines {
        let line = line.map_err(|e| bad(&e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let digits: Vec<u8> = line
            .split_whitespace()
            .map(|f| f.parse().map_err(|_| bad("non-integer digit")))
            .collect::<Result<_>>()?;
        if digits.len() != m as usize {
            return Err(bad("row length does not match header"));
        }
        rows.push(digits);
        if rows.len() == n as usize {
            mats.push(GfMatrix::new(
                b as u8,
                n as usize,
                m as usize,
                rows.concat(),
            )?);
            rows.clear();
        }
    }
    if !rows.is_empty() || mats.len() != s as usize {
        return Err(bad("matrix count does not match header"));
    }
    GeneratingMatrices::new(mats)
}
