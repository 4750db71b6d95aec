//! Reference RK4 on the full composite space using dense products.

use super::rhs;
use crate::error::Result;
use crate::fockspace::TwoModeOperators;
use crate::numerics::ComplexMatrix;

pub(super) struct DenseRk4 {
    ops: TwoModeOperators,
    dt: f64,
    rho: ComplexMatrix,
}

impl DenseRk4 {
    pub(super) fn new(ops: &TwoModeOperators, dt: f64, rho0: ComplexMatrix) -> Self {
        Self { ops: ops.clone(), dt, rho: rho0 }
    }

    pub(super) fn current(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub(super) fn advance(&mut self, steps: usize) -> Result<()> {
        let h = self.dt;
        for _ in 0..steps {
            let y = &self.rho;
            let k1 = rhs(y, &self.ops)?;
            let k2 = rhs(&(y + &k1.scale_real(h / 2.0)), &self.ops)?;
            let k3 = rhs(&(y + &k2.scale_real(h / 2.0)), &self.ops)?;
            let k4 = rhs(&(y + &k3.scale_real(h)), &self.ops)?;
            let mut incr = &k1 + &k4;
            incr += &(&k2 + &k3).scale_real(2.0);
            self.rho = y + &incr.scale_real(h / 6.0);
        }
        Ok(())
    }
}
