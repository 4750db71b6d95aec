//! Initial states: cavity A in a Fock, coherent or displaced-squeezed state,
//! cavity B in vacuum.

use log::warn;

use crate::error::{Error, Result};
use crate::fockspace::annihilation;
use crate::numerics::{kron_vec, mat_exp, ComplexMatrix, C64, ONE, ZERO};

/// Truncation loss above which coherent preparation logs a warning.
pub const COHERENT_DEFICIT_WARN: f64 = 1e-8;
/// Truncation loss at which squeezed preparation is refused.
pub const SQUEEZED_DEFICIT_MAX: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Fock { n: usize },
    Coherent { alpha: C64 },
    /// `D(α) S(ε) |0⟩`
    Squeezed { alpha: C64, epsilon: C64 },
}

impl StateSpec {
    /// `|α|² + sinh²|ε|` (or `n` for a Fock state).
    pub fn mean_photons(&self) -> f64 {
        match *self {
            StateSpec::Fock { n } => n as f64,
            StateSpec::Coherent { alpha } => alpha.norm_sqr(),
            StateSpec::Squeezed { alpha, epsilon } => alpha.norm_sqr() + epsilon.norm().sinh().powi(2),
        }
    }

    /// The single-mode state of cavity A.
    pub fn cavity_a(&self, dim: usize) -> Result<PureState> {
        let mean = self.mean_photons();
        if mean > dim as f64 / 4.0 {
            warn!("mean photon number {mean:.3} is large for a truncation of {dim} levels");
        }
        match *self {
            StateSpec::Fock { n } => fock_ket(n, dim),
            StateSpec::Coherent { alpha } => coherent_ket(alpha, dim),
            StateSpec::Squeezed { alpha, epsilon } => squeezed_ket(alpha, epsilon, dim),
        }
    }

    /// `|ψ_A⟩|0⟩` on the composite space.
    pub fn initial_ket(&self, dim: usize) -> Result<PureState> {
        Ok(two_mode_ket(&self.cavity_a(dim)?, &vacuum(dim)?))
    }

    pub fn initial_density(&self, dim: usize) -> Result<ComplexMatrix> {
        product_density(&self.cavity_a(dim)?, &vacuum(dim)?)
    }
}

/// State vector together with the norm lost to truncation before it was
/// renormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    norm_deficit: f64,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Self {
        Self { amplitudes, norm_deficit: 0.0 }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `1 − ‖ψ‖²` of the truncated state before renormalization.
    pub fn norm_deficit(&self) -> f64 {
        self.norm_deficit
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self { amplitudes: self.amplitudes.iter().map(|z| z / n).collect(), norm_deficit: self.norm_deficit }
    }

    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    /// `⟨ψ|Q|ψ⟩ / ⟨ψ|ψ⟩`
    pub fn expectation(&self, q: &ComplexMatrix) -> Result<C64> {
        let qpsi = q.mat_vec(&self.amplitudes)?;
        let num: C64 = self.amplitudes.iter().zip(&qpsi).map(|(a, b)| a.conj() * b).sum();
        Ok(num / self.norm().powi(2))
    }
}

pub fn vacuum(dim: usize) -> Result<PureState> {
    fock_ket(0, dim)
}

pub fn fock_ket(n: usize, dim: usize) -> Result<PureState> {
    if n >= dim {
        return Err(Error::FockOutOfRange { n, dim });
    }
    let mut amps = vec![ZERO; dim];
    amps[n] = ONE;
    Ok(PureState::new(amps))
}

/// `c_n = e^{−|α|²/2} αⁿ/√(n!)` for `n < dim`, renormalized.
pub fn coherent_ket(alpha: C64, dim: usize) -> Result<PureState> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("dim must be at least 2, got {dim}")));
    }
    let mut amps = Vec::with_capacity(dim);
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(c);
    for n in 1..dim {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let deficit = 1.0 - kept;
    if deficit > COHERENT_DEFICIT_WARN {
        warn!("coherent state with |alpha|={:.3} loses {deficit:.3e} of its norm at dim {dim}", alpha.norm());
    }
    let scale = kept.sqrt();
    Ok(PureState { amplitudes: amps.into_iter().map(|z| z / scale).collect(), norm_deficit: deficit })
}

/// `D(α) S(ε) |0⟩` with `D(α) = exp(α a† − α* a)` and
/// `S(ε) = exp(½(ε* a² − ε a†²))`.
///
/// The operators are exponentiated on a Fock space twice as large as `dim` and
/// the result is cut back, so the amplitudes below the cutoff are free of
/// truncation artifacts and the discarded weight is a real measure of the
/// truncation error.
pub fn squeezed_ket(alpha: C64, epsilon: C64, dim: usize) -> Result<PureState> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("dim must be at least 2, got {dim}")));
    }
    let ext = 2 * dim;
    let a = annihilation(ext)?;
    let ad = a.adjoint();
    let a2 = a.matmul(&a)?;
    let ad2 = ad.matmul(&ad)?;

    let displace = mat_exp(&(&ad.scale(alpha) - &a.scale(alpha.conj())))?;
    let squeeze = mat_exp(&(&a2.scale(epsilon.conj()) - &ad2.scale(epsilon)).scale_real(0.5))?;

    let mut vac = vec![ZERO; ext];
    vac[0] = ONE;
    let full = displace.mat_vec(&squeeze.mat_vec(&vac)?)?;
    let total: f64 = full.iter().map(|z| z.norm_sqr()).sum();
    let kept: f64 = full[..dim].iter().map(|z| z.norm_sqr()).sum();
    let deficit = 1.0 - kept / total;
    if deficit >= SQUEEZED_DEFICIT_MAX {
        return Err(Error::InsufficientDimension { dim, deficit });
    }
    let scale = kept.sqrt();
    Ok(PureState { amplitudes: full[..dim].iter().map(|z| z / scale).collect(), norm_deficit: deficit })
}

pub fn two_mode_ket(a: &PureState, b: &PureState) -> PureState {
    PureState { amplitudes: kron_vec(&a.amplitudes, &b.amplitudes), norm_deficit: 0.0 }
}

/// `|ψ_A ⊗ ψ_B⟩⟨ψ_A ⊗ ψ_B|`
pub fn product_density(a: &PureState, b: &PureState) -> Result<ComplexMatrix> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("single-mode kets of length {} and {}", a.len(), b.len())));
    }
    Ok(two_mode_ket(&a.normalized(), &b.normalized()).density())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn fock_single_photon() {
        let k = fock_ket(1, 25).unwrap();
        assert_eq!(k.amplitudes()[1], ONE);
        assert_eq!(k.norm(), 1.0);
        assert_eq!(fock_ket(0, 2).unwrap().amplitudes(), &[ONE, ZERO]);
        assert_eq!(fock_ket(5, 4), Err(Error::FockOutOfRange { n: 5, dim: 4 }));
    }

    #[test]
    fn coherent_zero_is_vacuum() {
        assert_eq!(coherent_ket(c(0.0), 6).unwrap().amplitudes(), vacuum(6).unwrap().amplitudes());
    }

    #[test]
    fn coherent_vacuum_amplitude_and_deficit() {
        let k = coherent_ket(c(1.0), 25).unwrap();
        assert!((k.amplitudes()[0].re - (-0.5f64).exp()).abs() < 1e-15);
        assert!((k.amplitudes()[0].re - 0.6065307).abs() < 1e-7);
        assert!(k.norm_deficit().abs() < 1e-10);
        assert!((k.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_matches_displaced_vacuum() {
        let alpha = C64::new(0.8, -0.6);
        let dim = 25;
        let k = coherent_ket(alpha, dim).unwrap();
        // D(α) on a larger space, applied to vacuum.
        let a = annihilation(60).unwrap();
        let d = mat_exp(&(&a.adjoint().scale(alpha) - &a.scale(alpha.conj()))).unwrap();
        let col: Vec<C64> = (0..dim).map(|i| d[(i, 0)]).collect();
        for (x, y) in k.amplitudes().iter().zip(&col) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn coherent_eigenvalue_property() {
        let alpha = C64::new(1.0, 0.5);
        let dim = 25;
        let k = coherent_ket(alpha, dim).unwrap();
        let ak = annihilation(dim).unwrap().mat_vec(k.amplitudes()).unwrap();
        for i in 0..dim - 5 {
            assert!((ak[i] - alpha * k.amplitudes()[i]).norm() < 1e-8);
        }
    }

    #[test]
    fn squeezed_without_squeezing_is_coherent() {
        let alpha = C64::new(1.0, 0.0);
        let s = squeezed_ket(alpha, c(0.0), 25).unwrap();
        let k = coherent_ket(alpha, 25).unwrap();
        for (x, y) in s.amplitudes().iter().zip(k.amplitudes()) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn squeezed_mean_photon_number() {
        let dim = 25;
        let s = squeezed_ket(c(1.0), c(0.1), dim).unwrap();
        let a = annihilation(dim).unwrap();
        let n = s.expectation(&a.adjoint().matmul(&a).unwrap()).unwrap().re;
        let expected = 1.0 + 0.1f64.sinh().powi(2);
        assert!((expected - 1.0100334).abs() < 1e-7);
        assert!((n - expected).abs() < 1e-6, "⟨n⟩ = {n}");
    }

    #[test]
    fn squeezed_vacuum_has_even_support() {
        let s = squeezed_ket(c(0.0), c(0.1), 25).unwrap();
        for (i, z) in s.amplitudes().iter().enumerate() {
            if i % 2 == 1 {
                assert!(z.norm() < 1e-12);
            }
        }
        assert!(s.amplitudes()[2].norm() > 1e-3);
    }

    #[test]
    fn squeezed_refuses_tiny_truncation() {
        assert!(matches!(squeezed_ket(c(3.0), c(0.5), 6), Err(Error::InsufficientDimension { .. })));
    }

    #[test]
    fn product_density_is_pure_with_unit_trace() {
        let rho = product_density(&coherent_ket(c(1.0), 8).unwrap(), &vacuum(8).unwrap()).unwrap();
        assert!((rho.trace().unwrap() - ONE).norm() < 1e-12);
        let purity = rho.trace_product(&rho).unwrap();
        assert!((purity - ONE).norm() < 1e-12);
        assert!(product_density(&vacuum(3).unwrap(), &vacuum(4).unwrap()).is_err());
    }
}
