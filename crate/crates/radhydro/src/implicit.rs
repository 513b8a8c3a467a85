//! Linearly implicit radiation-temperature stage solve.
//!
//! Given frozen (starred) coefficients and stage right-hand sides, solve the
//! coupled nonlinear system
//!
//! ```text
//! E_r = b_E + w ( div(D* grad E_r) - sigma_E* c E_r + sigma_p* a c T^4 )
//! T   = b_T + (w / (rho* c_v*)) ( sigma_E* c E_r - sigma_p* a c T^4 + L_T* )
//! ```
//!
//! and update the material energy algebraically,
//! `rho e_t = b_e + w (sigma_E* c E_r - sigma_p* a c T^4)`.
//!
//! The emission term is linearized about the current temperature iterate,
//! T^4 ~ T_m^4 + 4 T_m^3 (T - T_m); the temperature is then eliminated
//! cell-locally and the remaining system in E_r is a single tridiagonal
//! solve per outer iteration. The same linearized exchange value is used in
//! all three updates, which makes the per-cell energy-exchange antisymmetry
//! exact regardless of how far the outer iteration has converged.

use crate::error::{Error, Result};
use crate::physics::{diffusion_coefficient_floored, Constants, IdealGasEos, OpacityModel};
use crate::spatial::{diffusion_operator, temperature_source, BoundaryCondition};
use crate::state::{CellRates, CellState, Grid1D};

/// Tolerances and safeguards for the stage solve.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    /// Relative tolerance on the scaled max-norm residual of both equations.
    pub rel_tol: f64,
    /// Absolute temperature tolerance [eV]; sets the floor of the residual
    /// scaling for the temperature equation.
    pub abs_tol_t: f64,
    /// Maximum outer (linearization) iterations.
    pub max_outer_iters: u32,
    /// Temperature floor [eV].
    pub temperature_floor: f64,
    /// Radiation energy floor [erg/cm^3].
    pub er_floor: f64,
    /// Error out once floors have engaged this many times in one solve.
    pub max_floor_hits: u32,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            rel_tol: 1e-10,
            abs_tol_t: 1e-8,
            max_outer_iters: 100,
            temperature_floor: 1e-6,
            er_floor: 0.0,
            max_floor_hits: 100,
        }
    }
}

/// Frozen (starred) coefficients for one linearly implicit stage solve.
/// All arrays are built from a single starred state and stay immutable
/// during the solve.
#[derive(Debug, Clone)]
pub struct StageContext {
    pub grid: Grid1D,
    pub bc: BoundaryCondition,
    /// Energy-mean absorption opacity sigma_E* [1/cm], interior cells.
    pub sigma_e_star: Vec<f64>,
    /// Planck-mean emission opacity sigma_p* [1/cm], interior cells.
    pub sigma_p_star: Vec<f64>,
    /// Diffusion coefficient D* on the padded array (ghosts included, for
    /// harmonic face means at the boundary).
    pub d_star: Vec<f64>,
    /// Starred density [g/cm^3], interior cells.
    pub rho_star: Vec<f64>,
    /// Starred specific heat [erg/eV/g], interior cells.
    pub c_v_star: Vec<f64>,
    /// Frozen temperature source L_T*, interior cells.
    pub l_t_star: Vec<f64>,
    /// Starred radiation energy in the first ghost cell on each side,
    /// coupled through the boundary diffusion flux under FixedState.
    pub er_ghost: (f64, f64),
    pub constants: Constants,
}

impl StageContext {
    /// Apply the frozen diffusion operator to an interior E_r array.
    /// Returns per-cell rates and the boundary face fluxes.
    pub fn apply_diffusion(&self, er: &[f64]) -> (Vec<f64>, (f64, f64)) {
        let g = self.grid.n_ghost;
        let n = self.grid.n_cells;
        let mut padded = vec![0.0; self.grid.padded_len()];
        for j in 0..g {
            padded[j] = self.er_ghost.0;
            padded[g + n + j] = self.er_ghost.1;
        }
        padded[g..g + n].copy_from_slice(er);
        diffusion_operator(&self.grid, &padded, &self.d_star, &self.bc)
    }

    fn face_diffusion(&self, i: usize) -> f64 {
        if matches!(self.bc, BoundaryCondition::NoFlux) && (i == 0 || i == self.grid.n_cells) {
            return 0.0;
        }
        let g = self.grid.n_ghost;
        let dl = self.d_star[g - 1 + i];
        let dr = self.d_star[g + i];
        if dl > 0.0 && dr > 0.0 {
            2.0 * dl * dr / (dl + dr)
        } else {
            0.0
        }
    }
}

/// Freeze starred coefficients from a state. `rates` must be the explicit
/// operator evaluated at this same state; it supplies L_T*.
pub fn freeze(
    grid: &Grid1D,
    state: &CellState,
    bc: &BoundaryCondition,
    eos: &IdealGasEos,
    constants: &Constants,
    opacity: &OpacityModel,
    rates: &CellRates,
) -> Result<StageContext> {
    let l_t_star = temperature_source(state, rates);
    freeze_with_source(grid, state, bc, eos, constants, opacity, l_t_star)
}

/// Freeze starred coefficients with an explicitly supplied L_T* array
/// (the operator split uses zeros).
pub fn freeze_with_source(
    grid: &Grid1D,
    state: &CellState,
    bc: &BoundaryCondition,
    eos: &IdealGasEos,
    constants: &Constants,
    opacity: &OpacityModel,
    l_t_star: Vec<f64>,
) -> Result<StageContext> {
    let n = grid.n_cells;
    let g = grid.n_ghost;
    let len = grid.padded_len();
    let mut d_star = vec![0.0; len];
    let mut sigma_e_star = vec![0.0; n];
    let mut sigma_p_star = vec![0.0; n];
    for idx in 0..len {
        let o = opacity.evaluate(state.rho[idx], state.temp[idx])?;
        d_star[idx] = diffusion_coefficient_floored(constants, o.sigma_a, o.sigma_s);
        if idx >= g && idx < g + n {
            sigma_e_star[idx - g] = o.sigma_e;
            sigma_p_star[idx - g] = o.sigma_p;
        }
    }
    Ok(StageContext {
        grid: grid.clone(),
        bc: bc.clone(),
        sigma_e_star,
        sigma_p_star,
        d_star,
        rho_star: state.rho[g..g + n].to_vec(),
        c_v_star: vec![eos.c_v; n],
        l_t_star,
        er_ghost: (state.er[g - 1], state.er[g + n]),
        constants: *constants,
    })
}

/// Known parts of the stage equations: Y = y_n + dt sum_{j<i} a_ij N_j plus
/// the diagonal explicit contributions, and the implicit weight w = a_ii dt.
#[derive(Debug, Clone)]
pub struct StageRhs {
    pub b_rho_et: Vec<f64>,
    pub b_er: Vec<f64>,
    pub b_temp: Vec<f64>,
    /// Implicit weight [s]; zero means no implicit work.
    pub w: f64,
}

/// Converged stage values plus the rate components needed to record the
/// stage rate without re-evaluating any operator.
#[derive(Debug, Clone)]
pub struct StageSolution {
    pub er: Vec<f64>,
    pub temp: Vec<f64>,
    pub rho_et: Vec<f64>,
    /// Energy exchange X = sigma_E* c E_r - sigma_p* a c T^4 (linearized at
    /// the final iterate), per cell.
    pub exchange: Vec<f64>,
    /// Diffusion rates div(D* grad E_r) of the returned E_r, per cell.
    pub diffusion: Vec<f64>,
    /// Temperature rate (X + L_T*) / (rho* c_v*), per cell.
    pub temp_rate: Vec<f64>,
    /// Boundary diffusion face fluxes (G_left, G_right) of the returned E_r.
    pub boundary_diffusive: (f64, f64),
    pub iters: u32,
    pub floor_hits: u32,
}

/// Solve the coupled (E_r, T) stage system and update rho e_t algebraically.
pub fn solve_stage(
    ctx: &StageContext,
    rhs: &StageRhs,
    settings: &SolverSettings,
) -> Result<StageSolution> {
    let n = ctx.grid.n_cells;
    assert_eq!(rhs.b_er.len(), n);
    assert_eq!(rhs.b_temp.len(), n);
    assert_eq!(rhs.b_rho_et.len(), n);
    let w = rhs.w;
    let c = ctx.constants.c;
    let a = ctx.constants.a;

    if w == 0.0 {
        let er = rhs.b_er.clone();
        let temp = rhs.b_temp.clone();
        let (diffusion, boundary_diffusive) = ctx.apply_diffusion(&er);
        let mut exchange = vec![0.0; n];
        let mut temp_rate = vec![0.0; n];
        for k in 0..n {
            exchange[k] =
                ctx.sigma_e_star[k] * c * er[k] - ctx.sigma_p_star[k] * a * c * temp[k].powi(4);
            temp_rate[k] = (exchange[k] + ctx.l_t_star[k]) / (ctx.rho_star[k] * ctx.c_v_star[k]);
        }
        return Ok(StageSolution {
            er,
            temp,
            rho_et: rhs.b_rho_et.clone(),
            exchange,
            diffusion,
            temp_rate,
            boundary_diffusive,
            iters: 0,
            floor_hits: 0,
        });
    }
    if w < 0.0 {
        return Err(Error::Domain(format!("stage weight must be >= 0 (got {w:e})")));
    }

    let h2 = ctx.grid.h * ctx.grid.h;
    let eta: Vec<f64> = ctx.sigma_e_star.iter().map(|s| s * c).collect();
    let kap: Vec<f64> = ctx.sigma_p_star.iter().map(|s| s * a * c).collect();
    let beta: Vec<f64> = (0..n)
        .map(|k| w / (ctx.rho_star[k] * ctx.c_v_star[k]))
        .collect();
    let face_d: Vec<f64> = (0..=n).map(|i| ctx.face_diffusion(i)).collect();
    let fixed_bc = !matches!(ctx.bc, BoundaryCondition::NoFlux);

    let mut floor_hits: u32 = 0;
    let mut tm: Vec<f64> = rhs
        .b_temp
        .iter()
        .map(|&t| {
            if t < settings.temperature_floor {
                floor_hits += 1;
                settings.temperature_floor
            } else {
                t
            }
        })
        .collect();

    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut sys_rhs = vec![0.0; n];
    let mut pcoef = vec![0.0; n];
    let mut qcoef = vec![0.0; n];
    let machine_floor = 32.0 * f64::EPSILON;

    let mut residual = f64::INFINITY;
    for it in 1..=settings.max_outer_iters {
        for k in 0..n {
            let tm3 = tm[k] * tm[k] * tm[k];
            let tm4 = tm3 * tm[k];
            let den = 1.0 + 4.0 * beta[k] * kap[k] * tm3;
            pcoef[k] = (rhs.b_temp[k] + beta[k] * (3.0 * kap[k] * tm4 + ctx.l_t_star[k])) / den;
            qcoef[k] = beta[k] * eta[k] / den;
            let al = w * face_d[k] / h2;
            let ar = w * face_d[k + 1] / h2;
            lower[k] = -al;
            upper[k] = -ar;
            diag[k] = 1.0 + w * eta[k] - 4.0 * w * kap[k] * tm3 * qcoef[k] + al + ar;
            sys_rhs[k] = rhs.b_er[k] + w * kap[k] * (tm4 + 4.0 * tm3 * (pcoef[k] - tm[k]));
        }
        if fixed_bc {
            sys_rhs[0] += w * face_d[0] / h2 * ctx.er_ghost.0;
            sys_rhs[n - 1] += w * face_d[n] / h2 * ctx.er_ghost.1;
        }
        let mut er = tridiagonal_solve(&lower, &diag, &upper, &sys_rhs)?;

        let mut t_new = vec![0.0; n];
        for k in 0..n {
            if er[k] < settings.er_floor {
                er[k] = settings.er_floor;
                floor_hits += 1;
            }
            t_new[k] = pcoef[k] + qcoef[k] * er[k];
            if t_new[k] < settings.temperature_floor {
                t_new[k] = settings.temperature_floor;
                floor_hits += 1;
            }
        }
        if floor_hits > settings.max_floor_hits {
            return Err(Error::NegativeState {
                hits: floor_hits,
                limit: settings.max_floor_hits,
            });
        }

        // residual of the original nonlinear equations at (er, t_new)
        let (diffusion, boundary_diffusive) = ctx.apply_diffusion(&er);
        residual = 0.0f64;
        for k in 0..n {
            let t4 = t_new[k].powi(4);
            let exch = eta[k] * er[k] - kap[k] * t4;
            let r_e = er[k] - rhs.b_er[k] - w * (diffusion[k] + exch);
            let scale_e = er[k]
                .abs()
                .max(rhs.b_er[k].abs())
                .max(w * (eta[k] * er[k]).abs())
                .max(w * kap[k] * t4)
                .max(w * diffusion[k].abs())
                .max(1e-300);
            let r_t = t_new[k] - rhs.b_temp[k] - beta[k] * (exch + ctx.l_t_star[k]);
            let scale_t = t_new[k]
                .abs()
                .max(rhs.b_temp[k].abs())
                .max((beta[k] * ctx.l_t_star[k]).abs())
                .max(settings.abs_tol_t / settings.rel_tol);
            residual = residual.max((r_e / scale_e).abs()).max((r_t / scale_t).abs());
        }

        if residual <= settings.rel_tol || residual <= machine_floor {
            // final consistent set: the same linearized exchange enters all
            // three updates, so (rho_et - b_e) + (er - b_Er) = w * diffusion
            // holds to roundoff
            let mut exchange = vec![0.0; n];
            let mut temp_rate = vec![0.0; n];
            let mut rho_et = vec![0.0; n];
            let mut er_final = vec![0.0; n];
            let mut temp_final = vec![0.0; n];
            for k in 0..n {
                let tm3 = tm[k] * tm[k] * tm[k];
                let t4lin = tm3 * tm[k] + 4.0 * tm3 * (t_new[k] - tm[k]);
                exchange[k] = eta[k] * er[k] - kap[k] * t4lin;
                temp_rate[k] =
                    (exchange[k] + ctx.l_t_star[k]) / (ctx.rho_star[k] * ctx.c_v_star[k]);
                rho_et[k] = rhs.b_rho_et[k] + w * exchange[k];
                er_final[k] = rhs.b_er[k] + w * (diffusion[k] - exchange[k]);
                temp_final[k] = rhs.b_temp[k] + w * temp_rate[k];
            }
            return Ok(StageSolution {
                er: er_final,
                temp: temp_final,
                rho_et,
                exchange,
                diffusion,
                temp_rate,
                boundary_diffusive,
                iters: it,
                floor_hits,
            });
        }
        for k in 0..n {
            tm[k] = t_new[k].max(settings.temperature_floor);
        }
    }
    Err(Error::NonConvergence {
        residual,
        iters: settings.max_outer_iters,
    })
}

/// Thomas algorithm for a tridiagonal system. `lower[0]` and
/// `upper[n-1]` are ignored. Errors on a vanishing pivot.
pub fn tridiagonal_solve(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>> {
    let n = diag.len();
    assert!(n > 0 && lower.len() == n && upper.len() == n && rhs.len() == n);
    let mut c_prime = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut piv = diag[0];
    if piv.abs() < 1e-300 {
        return Err(Error::SingularPivot { row: 0 });
    }
    c_prime[0] = upper[0] / piv;
    x[0] = rhs[0] / piv;
    for k in 1..n {
        piv = diag[k] - lower[k] * c_prime[k - 1];
        if piv.abs() < 1e-300 {
            return Err(Error::SingularPivot { row: k });
        }
        c_prime[k] = upper[k] / piv;
        x[k] = (rhs[k] - lower[k] * x[k - 1]) / piv;
    }
    for k in (0..n - 1).rev() {
        x[k] -= c_prime[k] * x[k + 1];
    }
    Ok(x)
}
