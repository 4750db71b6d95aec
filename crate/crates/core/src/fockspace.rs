//! Operators on the truncated two-mode Fock space.
//!
//! Basis ordering: `|n_a, n_b⟩ ↦ n_a · dim + n_b`, cavity A is the first
//! tensor factor everywhere.

use crate::error::{Error, Result};
use crate::numerics::{kron, ComplexMatrix, C64, I};

/// Physical parameters of the coupled-cavity Hamiltonian.
///
/// The coupling is `g_AB = g·r` for the A→B exchange (`a b†`) and
/// `g_BA = g` for B→A (`a† b`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianSpec {
    pub omega0: f64,
    pub g: f64,
    pub r: f64,
    /// Fock levels kept per mode.
    pub dim: usize,
}

impl Default for HamiltonianSpec {
    fn default() -> Self {
        Self { omega0: 1.0, g: 0.1, r: 1.0, dim: 25 }
    }
}

impl HamiltonianSpec {
    pub fn new(omega0: f64, g: f64, r: f64, dim: usize) -> Result<Self> {
        let spec = Self { omega0, g, r, dim };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidParameter(format!("dim must be at least 2, got {}", self.dim)));
        }
        if !(self.g >= 0.0 && self.g.is_finite()) {
            return Err(Error::InvalidParameter(format!("g must be finite and nonnegative, got {}", self.g)));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::InvalidParameter(format!("r must be finite and positive, got {}", self.r)));
        }
        if !self.omega0.is_finite() {
            return Err(Error::InvalidParameter(format!("omega0 must be finite, got {}", self.omega0)));
        }
        Ok(())
    }

    pub fn g_ab(&self) -> f64 {
        self.g * self.r
    }

    pub fn g_ba(&self) -> f64 {
        self.g
    }

    /// Dimension of the composite space.
    pub fn composite_dim(&self) -> usize {
        self.dim * self.dim
    }
}

/// Single-mode annihilation operator on `dim` Fock levels: `a[n−1, n] = √n`.
pub fn annihilation(dim: usize) -> Result<ComplexMatrix> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("dim must be at least 2, got {dim}")));
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// The fixed operator set on the composite space.
#[derive(Debug, Clone)]
pub struct TwoModeOperators {
    pub spec: HamiltonianSpec,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub n_total: ComplexMatrix,
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
    /// `S₊ = S_x + iS_y = a†b`
    pub splus: ComplexMatrix,
    /// `S₋ = S_x − iS_y = b†a`
    pub sminus: ComplexMatrix,
    pub sx2: ComplexMatrix,
    pub sy2: ComplexMatrix,
    pub sz2: ComplexMatrix,
    /// `S_x² + S_y² + S_z²`
    pub s2: ComplexMatrix,
    pub h: ComplexMatrix,
    pub h_plus: ComplexMatrix,
    pub h_minus: ComplexMatrix,
}

impl TwoModeOperators {
    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn composite_dim(&self) -> usize {
        self.spec.composite_dim()
    }
}

/// `H = ω₀(a†a + b†b) + g_AB a b† + g_BA a† b`
pub fn hamiltonian_mode_form(spec: &HamiltonianSpec, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let ad = a.adjoint();
    let bd = b.adjoint();
    let n = &ad.matmul(a)? + &bd.matmul(b)?;
    let hop_ab = a.matmul(&bd)?;
    let hop_ba = ad.matmul(b)?;
    Ok(&(&n.scale_real(spec.omega0) + &hop_ab.scale_real(spec.g_ab())) + &hop_ba.scale_real(spec.g_ba()))
}

/// The same Hamiltonian written with the pseudo-spin ladder operators,
/// `H = ω₀N + g_AB S₋ + g_BA S₊`. With `S₊ = S_x + iS_y = a†b` the `a b†`
/// exchange is `S₋`, which is what makes this agree with the mode form.
pub fn hamiltonian_spin_form(
    spec: &HamiltonianSpec,
    n_total: &ComplexMatrix,
    splus: &ComplexMatrix,
    sminus: &ComplexMatrix,
) -> ComplexMatrix {
    &(&n_total.scale_real(spec.omega0) + &sminus.scale_real(spec.g_ab())) + &splus.scale_real(spec.g_ba())
}

/// `H₊ = ½(H + H†)`, `H₋ = ½(H − H†)`.
pub fn split(h: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    h.ensure_square()?;
    let hd = h.adjoint();
    let plus = (h + &hd).scale_real(0.5);
    // H₋ = H − H₊ so the parts sum back to H to within one rounding.
    let minus = h - &plus;
    Ok((plus, minus))
}

pub fn build_operators(spec: &HamiltonianSpec) -> Result<TwoModeOperators> {
    spec.validate()?;
    let single = annihilation(spec.dim)?;
    let id = ComplexMatrix::identity(spec.dim);
    let a = kron(&single, &id);
    let b = kron(&id, &single);
    let ad = a.adjoint();
    let bd = b.adjoint();

    let na = ad.matmul(&a)?;
    let nb = bd.matmul(&b)?;
    let adb = ad.matmul(&b)?;
    let bda = bd.matmul(&a)?;

    let n_total = &na + &nb;
    let sx = (&adb + &bda).scale_real(0.5);
    let sy = (&adb - &bda).scale(-0.5 * I);
    let sz = (&na - &nb).scale_real(0.5);
    let splus = adb;
    let sminus = splus.adjoint();
    let sx2 = sx.matmul(&sx)?;
    let sy2 = sy.matmul(&sy)?;
    let sz2 = sz.matmul(&sz)?;
    let s2 = &(&sx2 + &sy2) + &sz2;

    let h = hamiltonian_mode_form(spec, &a, &b)?;
    let h_spin = hamiltonian_spin_form(spec, &n_total, &splus, &sminus);
    let mismatch = h.max_abs_diff(&h_spin);
    if mismatch > 1e-12 {
        return Err(Error::Consistency(format!("mode-form and spin-form Hamiltonians differ by {mismatch:e}")));
    }
    let (h_plus, h_minus) = split(&h)?;

    Ok(TwoModeOperators {
        spec: *spec,
        a,
        b,
        n_total,
        sx,
        sy,
        sz,
        splus,
        sminus,
        sx2,
        sy2,
        sz2,
        s2,
        h,
        h_plus,
        h_minus,
    })
}

/// Composite-basis index of `|n_a, n_b⟩`.
#[inline]
pub fn basis_index(n_a: usize, n_b: usize, dim: usize) -> usize {
    n_a * dim + n_b
}

/// Indices of basis states with total excitation `n_a + n_b ≤ max_total`.
pub fn low_excitation_indices(dim: usize, max_total: usize) -> Vec<usize> {
    let mut idx = Vec::new();
    for n_a in 0..dim {
        for n_b in 0..dim {
            if n_a + n_b <= max_total {
                idx.push(basis_index(n_a, n_b, dim));
            }
        }
    }
    idx
}
