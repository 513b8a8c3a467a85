//! Second-order cell-centered finite-volume discretization: limited
//! reconstruction, Rusanov (local Lax-Friedrichs) fluxes, the explicit
//! hydrodynamics + radiation material-motion partition, the central-difference
//! diffusion operator, and the temperature source L_T.

use crate::error::{Error, Result};
use crate::physics::{radiation_pressure, Constants, IdealGasEos};
use crate::state::{CellRates, CellState, Grid1D, PrimitiveCell};

/// Boundary treatment for ghost cells and boundary-face fluxes.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCondition {
    /// Ghost cells hold fixed primitive states, constant in time.
    FixedState {
        left: PrimitiveCell,
        right: PrimitiveCell,
    },
    /// All boundary-face fluxes (advective and diffusive) are exactly zero;
    /// ghosts mirror the nearest interior cell.
    NoFlux,
}

/// Fill both ghost layers per the boundary condition.
pub fn fill_ghosts(
    grid: &Grid1D,
    state: &mut CellState,
    bc: &BoundaryCondition,
    eos: &IdealGasEos,
) {
    let g = grid.n_ghost;
    let n = grid.n_cells;
    match bc {
        BoundaryCondition::FixedState { left, right } => {
            for j in 0..g {
                state.set_primitive(j, left, eos);
                state.set_primitive(g + n + j, right, eos);
            }
        }
        BoundaryCondition::NoFlux => {
            for j in 0..g {
                for arr in [
                    &mut state.rho,
                    &mut state.mom,
                    &mut state.rho_et,
                    &mut state.er,
                    &mut state.temp,
                ] {
                    arr[j] = arr[g];
                    arr[g + n + j] = arr[g + n - 1];
                }
            }
        }
    }
}

/// Limited linear reconstruction of one variable.
/// Arrays run over cells `g-1 ..= g+n` of the padded state (interior plus
/// one ring), so entry `i` belongs to padded cell `g - 1 + i`.
#[derive(Debug, Clone)]
pub struct VarReconstruction {
    /// Value at the cell's left face.
    pub left: Vec<f64>,
    /// Value at the cell's right face.
    pub right: Vec<f64>,
    /// Barth-Jespersen limiter coefficient, in [0, 1].
    pub phi: Vec<f64>,
}

/// Reconstruction of the primitive set (rho, u, p, E_r).
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub rho: VarReconstruction,
    pub u: VarReconstruction,
    pub p: VarReconstruction,
    pub er: VarReconstruction,
}

/// Face state assembled from reconstructed primitives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacePrimitive {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
    pub er: f64,
}

impl FacePrimitive {
    /// Material energy density rho e_t = p/(gamma-1) + rho u^2 / 2.
    pub fn rho_et(&self, eos: &IdealGasEos) -> f64 {
        self.p / (eos.gamma - 1.0) + 0.5 * self.rho * self.u * self.u
    }
}

/// Conserved-component flux vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxVector {
    pub rho: f64,
    pub mom: f64,
    pub rho_et: f64,
    pub er: f64,
}

/// Numerical fluxes on the n+1 interior-bounding faces, plus the shared
/// viscosity coefficient alpha per face.
#[derive(Debug, Clone)]
pub struct FaceFluxes {
    pub rho: Vec<f64>,
    pub mom: Vec<f64>,
    pub rho_et: Vec<f64>,
    pub er: Vec<f64>,
    pub alpha: Vec<f64>,
}

impl FaceFluxes {
    /// Total-energy flux rho_et + er at face `i`.
    pub fn energy(&self, i: usize) -> f64 {
        self.rho_et[i] + self.er[i]
    }
}

fn limit_barth_jespersen(wm: f64, w0: f64, wp: f64, half_slope: f64) -> f64 {
    let scale = wm.abs().max(w0.abs()).max(wp.abs()).max(1e-300);
    if half_slope.abs() <= 1e-14 * scale {
        return 1.0;
    }
    let d_max = wm.max(w0).max(wp) - w0;
    let d_min = wm.min(w0).min(wp) - w0;
    let mut phi = 1.0f64;
    for delta in [half_slope, -half_slope] {
        let r = if delta > 0.0 {
            (d_max / delta).min(1.0)
        } else {
            (d_min / delta).min(1.0)
        };
        phi = phi.min(r.max(0.0));
    }
    phi
}

fn reconstruct_var(values: &[f64], g: usize, n: usize, h: f64) -> VarReconstruction {
    let m = n + 2;
    let mut out = VarReconstruction {
        left: vec![0.0; m],
        right: vec![0.0; m],
        phi: vec![0.0; m],
    };
    for i in 0..m {
        let idx = g - 1 + i;
        let (wm, w0, wp) = (values[idx - 1], values[idx], values[idx + 1]);
        // least-squares slope on a uniform 1D stencil reduces to the
        // central difference
        let half_slope = 0.25 * (wp - wm);
        let _ = h;
        let phi = limit_barth_jespersen(wm, w0, wp, half_slope);
        out.left[i] = w0 - phi * half_slope;
        out.right[i] = w0 + phi * half_slope;
        out.phi[i] = phi;
    }
    out
}

/// Limited linear reconstruction of (rho, u, p, E_r) over the interior plus
/// one ghost ring. Requires ghost cells filled per the boundary condition.
pub fn reconstruct(grid: &Grid1D, state: &CellState, eos: &IdealGasEos) -> Result<Reconstruction> {
    let len = grid.padded_len();
    let mut rho = vec![0.0; len];
    let mut u = vec![0.0; len];
    let mut p = vec![0.0; len];
    let mut er = vec![0.0; len];
    for idx in 0..len {
        let e_i = state.internal_energy(idx)?;
        rho[idx] = state.rho[idx];
        u[idx] = state.mom[idx] / state.rho[idx];
        p[idx] = eos.pressure(state.rho[idx], e_i);
        er[idx] = state.er[idx];
    }
    let (g, n, h) = (grid.n_ghost, grid.n_cells, grid.h);
    Ok(Reconstruction {
        rho: reconstruct_var(&rho, g, n, h),
        u: reconstruct_var(&u, g, n, h),
        p: reconstruct_var(&p, g, n, h),
        er: reconstruct_var(&er, g, n, h),
    })
}

impl Reconstruction {
    /// Left/right face states at face `i` (0 ..= n): the right-face value of
    /// the cell left of the face, and the left-face value of the cell right
    /// of it.
    pub fn face_pair(&self, i: usize) -> (FacePrimitive, FacePrimitive) {
        let l = FacePrimitive {
            rho: self.rho.right[i],
            u: self.u.right[i],
            p: self.p.right[i],
            er: self.er.right[i],
        };
        let r = FacePrimitive {
            rho: self.rho.left[i + 1],
            u: self.u.left[i + 1],
            p: self.p.left[i + 1],
            er: self.er.left[i + 1],
        };
        (l, r)
    }
}

fn physical_flux(s: &FacePrimitive, eos: &IdealGasEos) -> FluxVector {
    let pr = radiation_pressure(s.er);
    let rho_et = s.rho_et(eos);
    FluxVector {
        rho: s.rho * s.u,
        mom: s.rho * s.u * s.u + s.p + pr,
        rho_et: (rho_et + s.p + pr) * s.u,
        er: s.er * s.u,
    }
}

/// Rusanov (local Lax-Friedrichs) flux for the conserved components
/// (rho, rho u, rho e_t, E_r) with a single viscosity coefficient
/// alpha = max(|u_L| + c_L, |u_R| + c_R) shared across components.
pub fn rusanov_flux(
    left: &FacePrimitive,
    right: &FacePrimitive,
    eos: &IdealGasEos,
) -> Result<(FluxVector, f64)> {
    let cl = eos.sound_speed(left.rho, left.p)?;
    let cr = eos.sound_speed(right.rho, right.p)?;
    let alpha = (left.u.abs() + cl).max(right.u.abs() + cr);
    let fl = physical_flux(left, eos);
    let fr = physical_flux(right, eos);
    let flux = FluxVector {
        rho: 0.5 * (fl.rho + fr.rho) - 0.5 * alpha * (right.rho - left.rho),
        mom: 0.5 * (fl.mom + fr.mom) - 0.5 * alpha * (right.rho * right.u - left.rho * left.u),
        rho_et: 0.5 * (fl.rho_et + fr.rho_et)
            - 0.5 * alpha * (right.rho_et(eos) - left.rho_et(eos)),
        er: 0.5 * (fl.er + fr.er) - 0.5 * alpha * (right.er - left.er),
    };
    Ok((flux, alpha))
}

/// Explicit hydrodynamics and radiation material-motion rates:
///
/// d_rho    = -dF_rho/h,
/// d_mom    = -dF_mom/h,
/// d_rho_et = -dF_rho_et/h + p_r (div u),
/// d_er     = -dF_er/h    - p_r (div u),
/// d_temp   =  0,
///
/// with cell-centered p_r and the same face-velocity divergence in both
/// energy equations so their sum keeps no p_r div(u) remainder. Requires
/// ghost cells filled per `bc`.
pub fn explicit_operator(
    grid: &Grid1D,
    state: &CellState,
    bc: &BoundaryCondition,
    eos: &IdealGasEos,
    _constants: &Constants,
) -> Result<(CellRates, FaceFluxes)> {
    let n = grid.n_cells;
    let g = grid.n_ghost;
    let h = grid.h;
    let recon = reconstruct(grid, state, eos)?;

    let mut faces = FaceFluxes {
        rho: vec![0.0; n + 1],
        mom: vec![0.0; n + 1],
        rho_et: vec![0.0; n + 1],
        er: vec![0.0; n + 1],
        alpha: vec![0.0; n + 1],
    };
    let mut u_face = vec![0.0; n + 1];
    let no_flux = matches!(bc, BoundaryCondition::NoFlux);
    for i in 0..=n {
        let (l, r) = recon.face_pair(i);
        u_face[i] = 0.5 * (l.u + r.u);
        if no_flux && (i == 0 || i == n) {
            continue;
        }
        let (f, alpha) = rusanov_flux(&l, &r, eos)?;
        faces.rho[i] = f.rho;
        faces.mom[i] = f.mom;
        faces.rho_et[i] = f.rho_et;
        faces.er[i] = f.er;
        faces.alpha[i] = alpha;
    }

    let mut rates = CellRates::zeros(n);
    for k in 0..n {
        let idx = g + k;
        rates.rho[k] = -(faces.rho[k + 1] - faces.rho[k]) / h;
        rates.mom[k] = -(faces.mom[k + 1] - faces.mom[k]) / h;
        let div_u = (u_face[k + 1] - u_face[k]) / h;
        let pr_div_u = radiation_pressure(state.er[idx]) * div_u;
        rates.rho_et[k] = -(faces.rho_et[k + 1] - faces.rho_et[k]) / h + pr_div_u;
        rates.er[k] = -(faces.er[k + 1] - faces.er[k]) / h - pr_div_u;
    }
    Ok((rates, faces))
}

/// Conservative central-difference divergence of D grad E_r.
///
/// `er` and `d` are padded arrays; face coefficients are harmonic means of
/// the adjacent cell values. Returns per-interior-cell rates and the
/// boundary face fluxes (G_left, G_right), where G = D dE_r/dx. NoFlux
/// boundaries force both boundary fluxes to zero.
pub fn diffusion_operator(
    grid: &Grid1D,
    er: &[f64],
    d: &[f64],
    bc: &BoundaryCondition,
) -> (Vec<f64>, (f64, f64)) {
    let n = grid.n_cells;
    let g = grid.n_ghost;
    let h = grid.h;
    let no_flux = matches!(bc, BoundaryCondition::NoFlux);
    let mut flux = vec![0.0; n + 1];
    for i in 0..=n {
        if no_flux && (i == 0 || i == n) {
            continue;
        }
        let dl = d[g - 1 + i];
        let dr = d[g + i];
        let d_face = if dl > 0.0 && dr > 0.0 {
            2.0 * dl * dr / (dl + dr)
        } else {
            0.0
        };
        flux[i] = d_face * (er[g + i] - er[g - 1 + i]) / h;
    }
    let mut rates = vec![0.0; n];
    for k in 0..n {
        rates[k] = (flux[k + 1] - flux[k]) / h;
    }
    (rates, (flux[0], flux[n]))
}

/// Temperature source L_T = N_E^{rho e_t} - u N_E^{rho u} + (u^2 - e_t) N_E^rho,
/// combining the explicit hydro rates with cell-centered u and e_t from the
/// same state the rates were evaluated at.
pub fn temperature_source(state: &CellState, rates: &CellRates) -> Vec<f64> {
    let g = state.n_ghost;
    let mut lt = vec![0.0; state.n_cells];
    for k in 0..state.n_cells {
        let idx = g + k;
        let u = state.mom[idx] / state.rho[idx];
        let e_t = state.rho_et[idx] / state.rho[idx];
        lt[k] = rates.rho_et[k] - u * rates.mom[k] + (u * u - e_t) * rates.rho[k];
    }
    lt
}
