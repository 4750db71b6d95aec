//! Block RK4 for `ρ̇ = −i(Hρ − ρH†)` when `H` conserves total excitation.
//!
//! In the basis grouped by `k = n_a + n_b` the Hamiltonian is block diagonal
//! with real tridiagonal blocks `H_k`, so each block `ρ_kl` obeys its own
//! equation `ρ̇_kl = −i(H_k ρ_kl − ρ_kl H_lᵀ)` and can be stepped in isolation.
//! Only blocks with `k ≤ l` are stored; `ρ_lk = ρ_kl†`. Blocks that start
//! exactly zero stay zero and are never allocated.

use rayon::prelude::*;

use crate::numerics::{ComplexMatrix, C64};

/// Basis states grouped by total excitation number.
#[derive(Debug, Clone)]
pub struct SectorLayout {
    dim: usize,
    sectors: Vec<Vec<usize>>,
}

impl SectorLayout {
    pub fn new(dim: usize) -> Self {
        let sectors = (0..=2 * (dim - 1))
            .map(|k| {
                let lo = k.saturating_sub(dim - 1);
                let hi = k.min(dim - 1);
                (lo..=hi).map(|n_a| n_a * dim + (k - n_a)).collect()
            })
            .collect();
        Self { dim, sectors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sectors(&self) -> &[Vec<usize>] {
        &self.sectors
    }

    fn sector_of(&self, global: usize) -> usize {
        global / self.dim + global % self.dim
    }
}

/// Real tridiagonal block; `sub[0]` and `sup[d−1]` are zero.
#[derive(Debug, Clone)]
struct Tridiag {
    diag: Vec<f64>,
    sub: Vec<f64>,
    sup: Vec<f64>,
}

/// Why a Hamiltonian cannot use the block integrator.
#[derive(Debug, Clone, PartialEq)]
pub enum Unsupported {
    Complex,
    CrossSector,
    NotTridiagonal,
}

fn extract_blocks(h: &ComplexMatrix, layout: &SectorLayout) -> Result<Vec<Tridiag>, Unsupported> {
    let n = h.rows();
    for p in 0..n {
        let sp = layout.sector_of(p);
        for (q, z) in h.row(p).iter().enumerate() {
            if z.im != 0.0 {
                return Err(Unsupported::Complex);
            }
            if z.re != 0.0 && layout.sector_of(q) != sp {
                return Err(Unsupported::CrossSector);
            }
        }
    }
    layout
        .sectors()
        .iter()
        .map(|idx| {
            let d = idx.len();
            let mut t = Tridiag { diag: vec![0.0; d], sub: vec![0.0; d], sup: vec![0.0; d] };
            for i in 0..d {
                for j in 0..d {
                    let v = h[(idx[i], idx[j])].re;
                    match j as isize - i as isize {
                        0 => t.diag[i] = v,
                        -1 => t.sub[i] = v,
                        1 => t.sup[i] = v,
                        _ if v != 0.0 => return Err(Unsupported::NotTridiagonal),
                        _ => {}
                    }
                }
            }
            Ok(t)
        })
        .collect()
}

/// One `ρ_kl` block, zero-padded by one row/column on each side so the
/// tridiagonal stencils need no edge cases.
struct Block {
    k: usize,
    l: usize,
    rows: usize,
    cols: usize,
    y: Planes,
    s0: Planes,
    s1: Planes,
}

/// Split real/imaginary storage.
struct Planes {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Planes {
    fn zeros(len: usize) -> Self {
        Self { re: vec![0.0; len], im: vec![0.0; len] }
    }
}

impl Block {
    fn stride(&self) -> usize {
        self.cols + 2
    }
}

pub struct SectorPropagator {
    layout: SectorLayout,
    blocks_h: Vec<Tridiag>,
    blocks: Vec<Block>,
    dt: f64,
}

impl SectorPropagator {
    pub fn new(h: &ComplexMatrix, dim: usize, dt: f64) -> Result<Self, Unsupported> {
        let layout = SectorLayout::new(dim);
        let blocks_h = extract_blocks(h, &layout)?;
        Ok(Self { layout, blocks_h, blocks: Vec::new(), dt })
    }

    /// Replaces the current state by `rho` (assumed Hermitian; only blocks with
    /// `k ≤ l` are read).
    pub fn load(&mut self, rho: &ComplexMatrix) {
        let sectors = self.layout.sectors();
        let mut blocks = Vec::new();
        for k in 0..sectors.len() {
            for l in k..sectors.len() {
                let (ik, il) = (&sectors[k], &sectors[l]);
                if ik.iter().all(|&p| il.iter().all(|&q| rho[(p, q)] == C64::new(0.0, 0.0))) {
                    continue;
                }
                let (rows, cols) = (ik.len(), il.len());
                let len = (rows + 2) * (cols + 2);
                let mut y = Planes::zeros(len);
                let w = cols + 2;
                for (i, &p) in ik.iter().enumerate() {
                    for (j, &q) in il.iter().enumerate() {
                        let z = rho[(p, q)];
                        y.re[(i + 1) * w + j + 1] = z.re;
                        y.im[(i + 1) * w + j + 1] = z.im;
                    }
                }
                blocks.push(Block {
                    k,
                    l,
                    rows,
                    cols,
                    y,
                    s0: Planes::zeros(len),
                    s1: Planes::zeros(len),
                });
            }
        }
        self.blocks = blocks;
    }

    /// Number of stored `(k ≤ l)` blocks.
    pub fn active_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Advances every block by `steps` RK4 steps.
    pub fn advance(&mut self, steps: usize) {
        let dt = self.dt;
        let hs = &self.blocks_h;
        self.blocks.par_iter_mut().for_each(|b| {
            let (hk, hl) = (&hs[b.k], &hs[b.l]);
            for _ in 0..steps {
                rk4_step(b, hk, hl, dt);
            }
        });
    }

    pub fn assemble(&self) -> ComplexMatrix {
        let n = self.layout.dim() * self.layout.dim();
        let sectors = self.layout.sectors();
        let mut rho = ComplexMatrix::zeros(n, n);
        for b in &self.blocks {
            let w = b.stride();
            for (i, &p) in sectors[b.k].iter().enumerate() {
                for (j, &q) in sectors[b.l].iter().enumerate() {
                    let at = (i + 1) * w + j + 1;
                    let z = C64::new(b.y.re[at], b.y.im[at]);
                    rho[(p, q)] = z;
                    if b.k != b.l {
                        rho[(q, p)] = z.conj();
                    }
                }
            }
        }
        rho
    }
}

/// One classical RK4 step. For the linear constant-coefficient system
/// `ẏ = Ly` it equals `y ← Σ_{m≤4} (hL)^m/m! y`, evaluated here in nested form
/// `y + hL(y + h/2 L(y + h/3 L(y + h/4 Ly)))`.
fn rk4_step(b: &mut Block, hk: &Tridiag, hl: &Tridiag, h: f64) {
    let Block { rows, cols, y, s0, s1, .. } = b;
    let (rows, cols) = (*rows, *cols);
    {
        let y0: &Planes = y;
        stage(rows, cols, hk, hl, y0, y0, s0, h / 4.0);
        stage(rows, cols, hk, hl, s0, y0, s1, h / 3.0);
        stage(rows, cols, hk, hl, s1, y0, s0, h / 2.0);
        stage(rows, cols, hk, hl, s0, y0, s1, h);
    }
    std::mem::swap(y, s1);
}

/// `out ← y + c·L(src)` with `L(X) = −i(H_k X − X H_lᵀ)`.
#[inline(always)]
#[allow(clippy::too_many_arguments)]
fn stage(rows: usize, cols: usize, hk: &Tridiag, hl: &Tridiag, src: &Planes, y: &Planes, out: &mut Planes, c: f64) {
    dispatch::stage(rows, cols, hk, hl, src, y, out, c)
}

mod dispatch {
    use super::{stage_generic, Planes, Tridiag};

    #[inline(always)]
    #[allow(clippy::too_many_arguments)]
    pub(super) fn stage(
        rows: usize,
        cols: usize,
        hk: &Tridiag,
        hl: &Tridiag,
        src: &Planes,
        y: &Planes,
        out: &mut Planes,
        c: f64,
    ) {
        #[cfg(target_arch = "x86_64")]
        {
            if std::is_x86_feature_detected!("avx2") {
                // SAFETY: the CPU supports AVX2, checked just above.
                unsafe { stage_avx2(rows, cols, hk, hl, src, y, out, c) };
                return;
            }
        }
        stage_generic(rows, cols, hk, hl, src, y, out, c)
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    #[allow(clippy::too_many_arguments)]
    unsafe fn stage_avx2(
        rows: usize,
        cols: usize,
        hk: &Tridiag,
        hl: &Tridiag,
        src: &Planes,
        y: &Planes,
        out: &mut Planes,
        c: f64,
    ) {
        stage_generic(rows, cols, hk, hl, src, y, out, c)
    }
}

#[inline(always)]
#[allow(clippy::too_many_arguments)]
fn stage_generic(
    rows: usize,
    cols: usize,
    hk: &Tridiag,
    hl: &Tridiag,
    src: &Planes,
    y: &Planes,
    out: &mut Planes,
    c: f64,
) {
    let w = cols + 2;
    let n = cols;
    let dl = &hl.diag[..n];
    let sl = &hl.sub[..n];
    let ul = &hl.sup[..n];
    for i in 1..=rows {
        let (dk, sk, uk) = (hk.diag[i - 1], hk.sub[i - 1], hk.sup[i - 1]);
        let base = i * w;
        let mid = base + 1;

        // F(X) = H_k X − X H_lᵀ on each real plane; L = −i F.
        let cr = &src.re[mid..mid + n];
        let ur = &src.re[mid - w..mid - w + n];
        let wr = &src.re[mid + w..mid + w + n];
        let lr = &src.re[base..base + n];
        let rr = &src.re[base + 2..base + 2 + n];
        let ci = &src.im[mid..mid + n];
        let ui = &src.im[mid - w..mid - w + n];
        let wi = &src.im[mid + w..mid + w + n];
        let li = &src.im[base..base + n];
        let ri = &src.im[base + 2..base + 2 + n];

        let yr = &y.re[mid..mid + n];
        let yi = &y.im[mid..mid + n];
        let (or, oi) = (&mut out.re[mid..mid + n], &mut out.im[mid..mid + n]);

        for j in 0..n {
            let fr = (dk - dl[j]) * cr[j] + sk * ur[j] + uk * wr[j] - sl[j] * lr[j] - ul[j] * rr[j];
            let fi = (dk - dl[j]) * ci[j] + sk * ui[j] + uk * wi[j] - sl[j] * li[j] - ul[j] * ri[j];
            or[j] = yr[j] + c * fi;
            oi[j] = yi[j] - c * fr;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{basis_index, build_operators, HamiltonianSpec};

    #[test]
    fn layout_covers_basis_once() {
        let layout = SectorLayout::new(4);
        assert_eq!(layout.sectors().len(), 7);
        let mut all: Vec<usize> = layout.sectors().concat();
        all.sort_unstable();
        assert_eq!(all, (0..16).collect::<Vec<_>>());
        assert_eq!(layout.sectors()[3].len(), 4);
        assert_eq!(layout.sectors()[6], vec![basis_index(3, 3, 4)]);
        for (k, sec) in layout.sectors().iter().enumerate() {
            assert!(sec.iter().all(|&g| layout.sector_of(g) == k));
        }
    }

    #[test]
    fn rejects_sector_mixing_and_complex_h() {
        let mut h = ComplexMatrix::zeros(9, 9);
        h[(basis_index(1, 0, 3), basis_index(0, 0, 3))] = C64::new(1.0, 0.0);
        assert_eq!(SectorPropagator::new(&h, 3, 1e-3).err(), Some(Unsupported::CrossSector));
        let mut h = ComplexMatrix::zeros(9, 9);
        h[(0, 0)] = C64::new(0.0, 1.0);
        assert_eq!(SectorPropagator::new(&h, 3, 1e-3).err(), Some(Unsupported::Complex));
        // |2,0⟩ and |0,2⟩ share a sector but are not neighbours.
        let mut h = ComplexMatrix::zeros(9, 9);
        h[(basis_index(2, 0, 3), basis_index(0, 2, 3))] = C64::new(1.0, 0.0);
        assert_eq!(SectorPropagator::new(&h, 3, 1e-3).err(), Some(Unsupported::NotTridiagonal));
    }

    #[test]
    fn load_assemble_round_trip_skips_zero_blocks() {
        let ops = build_operators(&HamiltonianSpec::new(1.0, 0.1, 2.0, 4).unwrap()).unwrap();
        let mut p = SectorPropagator::new(&ops.h, 4, 1e-3).unwrap();
        let mut v = vec![C64::new(0.0, 0.0); 16];
        v[basis_index(1, 0, 4)] = C64::new(0.6, 0.0);
        v[basis_index(2, 1, 4)] = C64::new(0.0, 0.8);
        let rho = ComplexMatrix::outer(&v, &v);
        p.load(&rho);
        // Sectors 1 and 3 only: blocks (1,1), (1,3), (3,3).
        assert_eq!(p.active_blocks(), 3);
        assert_eq!(p.assemble(), rho);
    }

    #[test]
    fn single_step_matches_taylor_polynomial() {
        let ops = build_operators(&HamiltonianSpec::new(0.7, 0.3, 2.5, 3).unwrap()).unwrap();
        let h = 0.05;
        let mut v = vec![C64::new(0.0, 0.0); 9];
        v[basis_index(1, 0, 3)] = C64::new(0.8, 0.0);
        v[basis_index(1, 1, 3)] = C64::new(0.0, 0.6);
        let rho = ComplexMatrix::outer(&v, &v);
        let mut p = SectorPropagator::new(&ops.h, 3, h).unwrap();
        p.load(&rho);
        p.advance(1);
        // Σ_{m≤4} (hL)^m/m! ρ with L(X) = −i(HX − XH†).
        let lmap = |x: &ComplexMatrix| {
            (&ops.h.matmul(x).unwrap() - &x.matmul(&ops.h.adjoint()).unwrap()).scale(C64::new(0.0, -1.0))
        };
        let mut term = rho.clone();
        let mut want = rho.clone();
        for m in 1..=4 {
            term = lmap(&term).scale_real(h / m as f64);
            want += &term;
        }
        assert!(p.assemble().max_abs_diff(&want) < 1e-15);
    }
}
