//! Named states of the paradox, Born probabilities, and the
//! non-contextual inequality `P_WW(a,a) ≤ P_WF(a,0) + P_FW(0,a) + P_FF(1,1)`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{inner, kron, CVector, Complex};

/// Inputs whose norm deviates from one by more than this are rejected.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Single-system outcome: `0`/`1` for the F measurement, `a`/`b` for W.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    Zero,
    One,
    A,
    B,
}

impl Qubit {
    pub fn label(self) -> &'static str {
        match self {
            Qubit::Zero => "0",
            Qubit::One => "1",
            Qubit::A => "a",
            Qubit::B => "b",
        }
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `|0⟩`, `|1⟩`, `|a⟩ = (|0⟩−|1⟩)/√2`, `|b⟩ = (|0⟩+|1⟩)/√2`.
pub fn basis_state(which: Qubit) -> CVector {
    let (x, y) = match which {
        Qubit::Zero => (1.0, 0.0),
        Qubit::One => (0.0, 1.0),
        Qubit::A => (FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
        Qubit::B => (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    };
    CVector::from_real(&[x, y]).expect("two finite entries")
}

/// A normalized two-qubit pure state in the (F₁,F₂) product basis.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
    label: Option<String>,
}

impl StateVector {
    /// Accepts `amplitudes` if its norm is within [`NORMALIZATION_TOL`] of
    /// one; the residual deviation is divided out.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        Self::check_dim(&amplitudes)?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amplitudes: amplitudes.normalized()?,
            label: None,
        })
    }

    /// Normalizes an arbitrary nonzero vector. Also returns `|‖v‖ − 1|`.
    pub fn normalize(amplitudes: CVector) -> Result<(Self, f64)> {
        Self::check_dim(&amplitudes)?;
        let deviation = (amplitudes.norm() - 1.0).abs();
        Ok((
            Self {
                amplitudes: amplitudes.normalized()?,
                label: None,
            },
            deviation,
        ))
    }

    pub fn from_complex(amplitudes: [Complex; 4]) -> Result<Self> {
        Self::new(CVector::new(amplitudes.to_vec())?)
    }

    pub fn from_real(amplitudes: [f64; 4]) -> Result<Self> {
        Self::new(CVector::from_real(&amplitudes)?)
    }

    /// `|x, y⟩` for single-system outcomes `x` and `y`.
    pub fn product(first: Qubit, second: Qubit) -> Self {
        let v = kron(&basis_state(first), &basis_state(second)).expect("qubit factors");
        Self {
            amplitudes: v.with_canonical_phase(1e-15),
            label: Some(format!("|{first},{second}⟩")),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Multiplies by a global phase `e^{iφ}`.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        Self {
            amplitudes: self.amplitudes.scale(Complex::from_polar(1.0, phi)),
            label: self.label.clone(),
        }
    }

    fn check_dim(v: &CVector) -> Result<()> {
        if v.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: v.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateVector")
            .field("label", &self.label)
            .field("amplitudes", &self.amplitudes)
            .finish()
    }
}

/// `|φ₀⟩ = (|0,0⟩ + |0,1⟩ + |1,0⟩)/√3`, the unique state orthogonal to
/// `|a,0⟩`, `|0,a⟩` and `|1,1⟩`.
pub fn phi0() -> StateVector {
    let x = 1.0 / 3f64.sqrt();
    StateVector::from_real([x, x, x, 0.0])
        .expect("unit norm")
        .with_label("φ₀")
}

pub fn ket_a0() -> StateVector {
    StateVector::product(Qubit::A, Qubit::Zero)
}

pub fn ket_0a() -> StateVector {
    StateVector::product(Qubit::Zero, Qubit::A)
}

pub fn ket_11() -> StateVector {
    StateVector::product(Qubit::One, Qubit::One)
}

pub fn ket_aa() -> StateVector {
    StateVector::product(Qubit::A, Qubit::A)
}

/// `|⟨outcome|psi⟩|²`.
pub fn born_probability(psi: &StateVector, outcome: &StateVector) -> f64 {
    let amp = inner(outcome.amplitudes(), psi.amplitudes()).expect("both four-dimensional");
    amp.norm_sqr().min(1.0)
}

/// The four probabilities entering the inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContextProbabilities {
    pub p_wf_a0: f64,
    pub p_fw_0a: f64,
    pub p_ff_11: f64,
    pub p_ww_aa: f64,
}

impl ContextProbabilities {
    /// `P_S`, the total probability of the three error outcomes.
    pub fn p_sum(&self) -> f64 {
        self.p_wf_a0 + self.p_fw_0a + self.p_ff_11
    }

    /// `P_WW(a,a) − P_S`; positive means the inequality is violated.
    pub fn slack(&self) -> f64 {
        self.p_ww_aa - self.p_sum()
    }
}

pub fn context_probabilities(psi: &StateVector) -> ContextProbabilities {
    ContextProbabilities {
        p_wf_a0: born_probability(psi, &ket_a0()),
        p_fw_0a: born_probability(psi, &ket_0a()),
        p_ff_11: born_probability(psi, &ket_11()),
        p_ww_aa: born_probability(psi, &ket_aa()),
    }
}

/// `P_WW(a,a) − P_S` for `psi`. A strictly positive value certifies a
/// violation of the non-contextual inequality.
pub fn noncontextual_slack(psi: &StateVector) -> f64 {
    context_probabilities(psi).slack()
}
