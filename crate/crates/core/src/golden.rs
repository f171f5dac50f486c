//! The 3 × 3 worked example: a matrix of 2-forms over a 3-dimensional `V`
//! written in the cyclic basis `e¹∧e², e²∧e³, e³∧e¹`, one positive-definite
//! solution of its Sylvester system, and the printed (6-digit) square root and
//! conjugates.

use crate::exterior::{FormBasis, FormMatrix};
use crate::linalg::Matrix;

fn m3(rows: [[f64; 3]; 3]) -> Matrix {
    Matrix::from_fn(3, 3, |r, c| rows[r][c])
}

/// Coefficient of `e¹∧e²`.
pub fn s1() -> Matrix {
    m3([[-1.0, -2.0, -1.0], [1.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
}

/// Coefficient of `e²∧e³`.
pub fn s2() -> Matrix {
    m3([[0.0, -1.0, -2.0], [0.0, 1.0, 2.0], [0.0, -1.0, -1.0]])
}

/// Coefficient of `e³∧e¹`.
pub fn s3() -> Matrix {
    m3([[-1.0, -1.0, 1.0], [1.0, 1.0, 0.0], [-1.0, -1.0, 0.0]])
}

/// Cyclic labels `(e¹∧e², e²∧e³, e³∧e¹)` paired with `s1, s2, s3`.
pub fn cyclic_terms() -> [((usize, usize), Matrix); 3] {
    [((0, 1), s1()), ((1, 2), s2()), ((2, 0), s3())]
}

/// `Ω = e¹∧e² S₁ + e²∧e³ S₂ + e³∧e¹ S₃`.
pub fn omega() -> FormMatrix {
    let basis = FormBasis::new(3).expect("n = 3");
    FormMatrix::from_labeled_terms(basis, 3, cyclic_terms()).expect("well-formed example")
}

/// Positive-definite solution of `SᵢA + ASᵢᵀ = 0` (trace 6).
pub fn a() -> Matrix {
    m3([[3.0, -2.0, 1.0], [-2.0, 2.0, -1.0], [1.0, -1.0, 1.0]])
}

/// Symmetric square root of [`a`], rounded to 6 significant digits.
pub fn u_printed() -> Matrix {
    m3([
        [1.56022, -0.689101, 0.301417],
        [-0.689101, 1.17254, -0.387684],
        [0.301417, -0.387684, 0.871119],
    ])
}

/// `U⁻¹S₁U`, rounded.
pub fn conjugate_s1() -> Matrix {
    m3([
        [0.0, -0.87112, -0.387685],
        [0.87112, 0.0, -0.301416],
        [0.387685, 0.301416, 0.0],
    ])
}

/// `U⁻¹S₂U`, rounded.
pub fn conjugate_s2() -> Matrix {
    m3([
        [0.0, -0.086268, -0.483435],
        [0.086268, 0.0, 0.871119],
        [0.483435, -0.871119, 0.0],
    ])
}

/// `U⁻¹S₃U`, rounded.
pub fn conjugate_s3() -> Matrix {
    m3([
        [0.0, -0.483435, 0.784851],
        [0.483435, 0.0, 0.387685],
        [-0.784851, -0.387685, 0.0],
    ])
}
