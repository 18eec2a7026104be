//! The probability-sum operator `Π_S = |a,0⟩⟨a,0| + |0,a⟩⟨0,a| + |1,1⟩⟨1,1|`
//! and the coefficient representation of states in its eigenbasis.
//!
//! The eigenbasis is written down in closed form:
//!
//! ```text
//! |φ₀⟩ = (|0,0⟩ + |0,1⟩ + |1,0⟩)/√3        eigenvalue 0
//! |ν₁⟩ = (|0,1⟩ − |1,0⟩)/√2                eigenvalue 1/2
//! |ν₂⟩ = |1,1⟩                             eigenvalue 1
//! |ν₃⟩ = (2|0,0⟩ − |0,1⟩ − |1,0⟩)/√6       eigenvalue 3/2
//! ```
//!
//! so that `P_S = ½|c₁|² + |c₂|² + (3/2)|c₃|²` and
//! `P_WW(a,a) = |c₀/(2√3) − c₂/2 − √(2/3) c₃|²`.

use crate::error::Result;
use crate::hilbert::{ket_0a, ket_11, ket_a0, phi0, StateVector};
use crate::linalg::{hermitian_eigen, inner, CMatrix, CVector, Complex, SpectralDecomposition};

/// Eigenvalues of `Π_S` in the order of [`nu_basis`].
pub const NU_EIGENVALUES: [f64; 4] = [0.0, 0.5, 1.0, 1.5];

/// `⟨νᵢ|a,a⟩` for the four basis states (all real).
pub fn aa_overlaps() -> [f64; 4] {
    [-1.0 / (2.0 * 3f64.sqrt()), 0.0, 0.5, (2.0f64 / 3.0).sqrt()]
}

/// The Hermitian operator whose expectation value is `P_S`.
#[derive(Debug, Clone)]
pub struct PiS {
    matrix: CMatrix,
}

impl PiS {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Numerical eigendecomposition.
    pub fn spectral_decomposition(&self) -> Result<SpectralDecomposition> {
        hermitian_eigen(&self.matrix)
    }

    /// `⟨ψ|Π_S|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> f64 {
        self.matrix
            .expectation(psi.amplitudes())
            .expect("four-dimensional")
            .re
    }
}

pub fn build_pi_s() -> PiS {
    let matrix = [ket_a0(), ket_0a(), ket_11()]
        .iter()
        .map(|s| CMatrix::projector(s.amplitudes()).expect("dim 4"))
        .fold(CMatrix::zeros(4).expect("dim 4"), |acc, p| &acc + &p);
    PiS { matrix }
}

/// `(|φ₀⟩, |ν₁⟩, |ν₂⟩, |ν₃⟩)`.
pub fn nu_basis() -> [StateVector; 4] {
    let r2 = 2f64.sqrt();
    let r6 = 6f64.sqrt();
    let nu1 = StateVector::from_real([0.0, 1.0 / r2, -1.0 / r2, 0.0]).expect("unit");
    let nu2 = StateVector::from_real([0.0, 0.0, 0.0, 1.0]).expect("unit");
    let nu3 = StateVector::from_real([2.0 / r6, -1.0 / r6, -1.0 / r6, 0.0]).expect("unit");
    [
        phi0(),
        nu1.with_label("ν₁"),
        nu2.with_label("ν₂"),
        nu3.with_label("ν₃"),
    ]
}

/// Amplitudes of a state in the `Π_S` eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuCoefficients {
    pub c0: Complex,
    pub c1: Complex,
    pub c2: Complex,
    pub c3: Complex,
}

impl NuCoefficients {
    pub fn new(c0: Complex, c1: Complex, c2: Complex, c3: Complex) -> Self {
        Self { c0, c1, c2, c3 }
    }

    pub fn from_real(c: [f64; 4]) -> Self {
        Self::new(
            Complex::new(c[0], 0.0),
            Complex::new(c[1], 0.0),
            Complex::new(c[2], 0.0),
            Complex::new(c[3], 0.0),
        )
    }

    pub fn as_array(&self) -> [Complex; 4] {
        [self.c0, self.c1, self.c2, self.c3]
    }

    pub fn magnitudes(&self) -> [f64; 4] {
        self.as_array().map(|z| z.norm())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.as_array().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Σ cᵢ |basisᵢ⟩` as a product-basis vector.
    pub fn to_vector(&self) -> CVector {
        let basis = nu_basis();
        let mut acc = CVector::zeros(4).expect("dim 4");
        for (c, b) in self.as_array().iter().zip(&basis) {
            acc = &acc + &b.amplitudes().scale(*c);
        }
        acc
    }

    /// Reconstructed state; fails unless `Σ|cᵢ|²` is one within tolerance.
    pub fn to_state(&self) -> Result<StateVector> {
        StateVector::new(self.to_vector())
    }
}

pub fn to_nu(psi: &StateVector) -> NuCoefficients {
    let [c0, c1, c2, c3] =
        nu_basis().map(|b| inner(b.amplitudes(), psi.amplitudes()).expect("dim 4"));
    NuCoefficients { c0, c1, c2, c3 }
}

pub fn p_sum_from_nu(c: &NuCoefficients) -> f64 {
    0.5 * c.c1.norm_sqr() + c.c2.norm_sqr() + 1.5 * c.c3.norm_sqr()
}

pub fn p_ww_from_nu(c: &NuCoefficients) -> f64 {
    let [w0, _, w2, w3] = aa_overlaps();
    // ⟨a,a|ψ⟩ = Σ ⟨a,a|νᵢ⟩ cᵢ; the overlaps are real
    (c.c0 * w0 + c.c2 * w2 + c.c3 * w3).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{born_probability, context_probabilities, ket_aa};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn pi_s_trace_and_hermiticity() {
        let pi = build_pi_s();
        assert!(close(pi.matrix().trace().re, 3.0, 1e-15));
        assert!(pi.matrix().trace().im.abs() < 1e-16);
        assert!(pi.matrix().is_hermitian(1e-15));
    }

    #[test]
    fn pi_s_matches_closed_form_entries() {
        // |a,0⟩⟨a,0| + |0,a⟩⟨0,a| + |1,1⟩⟨1,1| written out by hand
        let want = CMatrix::from_rows(
            &[
                [1.0, -0.5, -0.5, 0.0],
                [-0.5, 0.5, 0.0, 0.0],
                [-0.5, 0.0, 0.5, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ]
            .map(|r| r.iter().map(|&x| Complex::new(x, 0.0)).collect()),
        )
        .unwrap();
        assert!(build_pi_s().matrix().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn nu_basis_states_are_eigenvectors() {
        let pi = build_pi_s();
        for (b, &lambda) in nu_basis().iter().zip(&NU_EIGENVALUES) {
            let image = pi.matrix().mul_vec(b.amplitudes()).unwrap();
            let want = b.amplitudes().scale(Complex::new(lambda, 0.0));
            assert!(image.max_abs_diff(&want) < 1e-14, "eigenvalue {lambda}");
        }
    }

    #[test]
    fn nu_basis_is_orthonormal() {
        let basis = nu_basis();
        for i in 0..4 {
            for j in 0..4 {
                let g = inner(basis[i].amplitudes(), basis[j].amplitudes()).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - Complex::new(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn nu2_is_11_and_nu1_is_orthogonal_to_aa() {
        let basis = nu_basis();
        assert_eq!(basis[2].amplitudes(), crate::hilbert::ket_11().amplitudes());
        assert!(
            inner(basis[1].amplitudes(), ket_aa().amplitudes())
                .unwrap()
                .norm()
                < 1e-16
        );
    }

    #[test]
    fn coefficients_of_named_states() {
        let c = to_nu(&phi0());
        assert!((c.c0 - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!(c.c1.norm() + c.c2.norm() + c.c3.norm() < 1e-15);

        let c = to_nu(&ket_aa());
        let want = [-1.0 / (2.0 * 3f64.sqrt()), 0.0, 0.5, (2.0f64 / 3.0).sqrt()];
        for (got, w) in c.as_array().iter().zip(want) {
            assert!((got - Complex::new(w, 0.0)).norm() < 1e-15);
        }

        let c = to_nu(&crate::hilbert::ket_11());
        assert!((c.c2 - Complex::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn p_sum_examples() {
        assert_eq!(
            p_sum_from_nu(&NuCoefficients::from_real([1.0, 0.0, 0.0, 0.0])),
            0.0
        );
        assert_eq!(
            p_sum_from_nu(&NuCoefficients::from_real([0.0, 0.0, 0.0, 1.0])),
            1.5
        );
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let ps = p_sum_from_nu(&NuCoefficients::from_real([0.0, h, h, 0.0]));
        assert!(close(ps, 0.75, 1e-15));
    }

    #[test]
    fn p_ww_examples() {
        let p = |c| p_ww_from_nu(&NuCoefficients::from_real(c));
        assert!(close(p([1.0, 0.0, 0.0, 0.0]), 1.0 / 12.0, 1e-16));
        assert_eq!(p([0.0, 1.0, 0.0, 0.0]), 0.0);
        assert!(close(p([0.0, 0.0, 1.0, 0.0]), 0.25, 1e-16));
    }

    #[test]
    fn coefficient_formulas_match_born_rule_for_nu3() {
        let nu3 = &nu_basis()[3];
        let p = context_probabilities(nu3);
        assert!(close(p.p_sum(), 1.5, 1e-14));
        assert!(close(p.p_ww_aa, 2.0 / 3.0, 1e-14));
        let e00 = StateVector::from_real([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(close(born_probability(nu3, &e00), 2.0 / 3.0, 1e-15));
    }

    #[test]
    fn reconstruction_round_trip() {
        let c = NuCoefficients::new(
            Complex::new(0.6, 0.0),
            Complex::new(0.0, 0.48),
            Complex::new(-0.36, 0.0),
            Complex::new(0.3, 0.19f64.sqrt()),
        );
        let psi = c.to_state().unwrap();
        let back = to_nu(&psi);
        for (a, b) in back.as_array().iter().zip(c.as_array()) {
            assert!((a - b).norm() < 1e-12);
        }
        let pi = build_pi_s();
        assert!(close(pi.expectation(&psi), p_sum_from_nu(&c), 1e-12));
    }
}
