//! Property tests for the linear algebra and probability formulas.

use proptest::prelude::*;

use ctx_paradox::hilbert::{born_probability, context_probabilities, ket_aa};
use ctx_paradox::linalg::{hermitian_eigen, inner, kron, CMatrix, CVector, Complex};
use ctx_paradox::spectral::{build_pi_s, p_sum_from_nu, p_ww_from_nu, to_nu};
use ctx_paradox::StateVector;

fn complex() -> impl Strategy<Value = Complex> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex::new(re, im))
}

fn vector(dim: usize) -> impl Strategy<Value = CVector> {
    prop::collection::vec(complex(), dim).prop_map(|v| CVector::new(v).unwrap())
}

fn state() -> impl Strategy<Value = StateVector> {
    vector(4)
        .prop_filter("nonzero", |v| v.norm() > 1e-3)
        .prop_map(|v| StateVector::normalize(v).unwrap().0)
}

fn hermitian(dim: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(complex(), dim * dim).prop_map(move |raw| {
        let mut entries = vec![Complex::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = if i == j {
                    Complex::new(raw[i * dim + i].re, 0.0)
                } else if i < j {
                    raw[i * dim + j]
                } else {
                    raw[j * dim + i].conj()
                };
            }
        }
        CMatrix::new(dim, entries).unwrap()
    })
}

fn close(a: Complex, b: Complex, tol: f64) -> bool {
    (a - b).norm() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn inner_is_conjugate_symmetric(u in vector(4), v in vector(4)) {
        let uv = inner(&u, &v).unwrap();
        let vu = inner(&v, &u).unwrap();
        prop_assert!(close(uv, vu.conj(), 1e-14));
        prop_assert!(inner(&u, &u).unwrap().im.abs() <= 1e-15);
    }

    #[test]
    fn eigen_round_trip(m in hermitian(4)) {
        let d = hermitian_eigen(&m).unwrap();
        prop_assert!(d.reconstruct().max_abs_diff(&m) <= 1e-10);
        prop_assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        for (i, a) in d.eigenvectors.iter().enumerate() {
            for (j, b) in d.eigenvectors.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!(close(inner(a, b).unwrap(), Complex::new(expected, 0.0), 1e-10));
            }
        }
    }

    #[test]
    fn eigen_handles_smaller_dimensions(m in hermitian(3)) {
        let d = hermitian_eigen(&m).unwrap();
        prop_assert!(d.reconstruct().max_abs_diff(&m) <= 1e-10);
    }

    #[test]
    fn kron_is_bilinear(a in vector(2), b in vector(2), c in vector(2), s in complex()) {
        let lhs = kron(&(&a + &b.scale(s)), &c).unwrap();
        let rhs = &kron(&a, &c).unwrap() + &kron(&b, &c).unwrap().scale(s);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-14);
        let lhs = kron(&a, &(&b + &c)).unwrap();
        let rhs = &kron(&a, &b).unwrap() + &kron(&a, &c).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-14);
    }

    #[test]
    fn kron_preserves_inner_products(a in vector(2), b in vector(2), c in vector(2), d in vector(2)) {
        let lhs = inner(&kron(&a, &b).unwrap(), &kron(&c, &d).unwrap()).unwrap();
        let rhs = inner(&a, &c).unwrap() * inner(&b, &d).unwrap();
        prop_assert!(close(lhs, rhs, 1e-14));
    }

    #[test]
    fn global_phase_does_not_change_probabilities(psi in state(), phase in 0.0f64..std::f64::consts::TAU) {
        let a = context_probabilities(&psi);
        let b = context_probabilities(&psi.with_global_phase(phase));
        prop_assert!((a.p_sum() - b.p_sum()).abs() <= 1e-14);
        prop_assert!((a.p_ww_aa - b.p_ww_aa).abs() <= 1e-14);
    }

    #[test]
    fn probability_sum_is_pi_s_expectation(psi in state()) {
        let direct = context_probabilities(&psi).p_sum();
        prop_assert!((build_pi_s().expectation(&psi) - direct).abs() <= 1e-13);
        prop_assert!((-1e-14..=1.5 + 1e-12).contains(&direct));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn coefficient_formulas_match_born_rule(psi in state()) {
        let c = to_nu(&psi);
        prop_assert!((c.norm_sqr() - 1.0).abs() <= 1e-12);
        prop_assert!((p_ww_from_nu(&c) - born_probability(&psi, &ket_aa())).abs() <= 1e-12);
        prop_assert!((p_sum_from_nu(&c) - context_probabilities(&psi).p_sum()).abs() <= 1e-12);
    }
}

#[test]
fn gram_matrix_of_named_states() {
    use ctx_paradox::hilbert::{ket_0a, ket_11, ket_a0, phi0};
    let states = [phi0(), ket_a0(), ket_0a(), ket_11()];
    // φ₀ is orthogonal to all three outcome states
    for s in &states[1..] {
        assert!(
            inner(states[0].amplitudes(), s.amplitudes())
                .unwrap()
                .norm()
                <= 1e-15
        );
    }
    let overlap =
        |i: usize, j: usize| inner(states[i].amplitudes(), states[j].amplitudes()).unwrap();
    assert!(close(overlap(1, 2), Complex::new(0.5, 0.0), 1e-15));
    assert!(close(overlap(1, 3), Complex::new(0.0, 0.0), 1e-15));
    assert!(close(overlap(2, 3), Complex::new(0.0, 0.0), 1e-15));
    for i in 0..4 {
        assert!(close(overlap(i, i), Complex::new(1.0, 0.0), 1e-15));
    }
}
