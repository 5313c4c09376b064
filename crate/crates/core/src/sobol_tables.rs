//! Embedded Sobol' direction-number data for dimensions 2..=10.
//!
//! Values are the first rows of the Joe & Kuo "new-joe-kuo-6.21201" table
//! (S. Joe and F. Y. Kuo, "Constructing Sobol sequences with better
//! two-dimensional projections", SIAM J. Sci. Comput. 30, 2008;
//! data file at <https://web.maths.unsw.edu.au/~fkuo/sobol/>, public domain).
//! Dimension 1 is the van der Corput sequence (identity matrix) and carries
//! no table entry.

/// One row of the direction-number table.
///
/// `poly_degree` is the degree of the primitive polynomial over F_2,
/// `poly_coeffs` encodes its interior coefficients a_1..a_{degree-1} as the
/// bits of an integer (most significant bit = a_1), and `initial` holds the
/// odd initial direction numbers m_1..m_degree.
pub(crate) struct SobolRow {
    pub poly_degree: u32,
    pub poly_coeffs: u32,
    pub initial: &'static [u32],
}

/// Rows for dimensions 2..=10 in order.
pub(crate) const SOBOL_ROWS: &[SobolRow] = &[
    SobolRow { poly_degree: 1, poly_coeffs: 0, initial: &[1] },
    SobolRow { poly_degree: 2, poly_coeffs: 1, initial: &[1, 3] },
    SobolRow { poly_degree: 3, poly_coeffs: 1, initial: &[1, 3, 1] },
    SobolRow { poly_degree: 3, poly_coeffs: 2, initial: &[1, 1, 1] },
    SobolRow { poly_degree: 4, poly_coeffs: 1, initial: &[1, 1, 3, 3] },
    SobolRow { poly_degree: 4, poly_coeffs: 4, initial: &[1, 3, 5, 13] },
    SobolRow { poly_degree: 5, poly_coeffs: 2, initial: &[1, 1, 5, 5, 17] },
    SobolRow { poly_degree: 5, poly_coeffs: 4, initial: &[1, 1, 5, 5, 5] },
    SobolRow { poly_degree: 5, poly_coeffs: 7, initial: &[1, 1, 7, 11, 19] },
];

/// Highest dimension covered by the embedded table.
pub const MAX_SOBOL_DIMENSION: usize = SOBOL_ROWS.len() + 1;
