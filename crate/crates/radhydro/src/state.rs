//! 1D uniform grid, cell-averaged state storage, and conversions among
//! conserved, primitive, and temperature-carrying representations.

use crate::error::{Error, Result};
use crate::physics::{radiation_pressure, IdealGasEos};
use std::io::Write;
use std::path::Path;

/// Uniform 1D grid with ghost layers on both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub n_ghost: usize,
    /// Cell width, (x_max - x_min) / n_cells.
    pub h: f64,
}

impl Grid1D {
    /// Two ghost layers per side, enough for second-order reconstruction.
    pub const DEFAULT_GHOST: usize = 2;

    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if !(x_max > x_min) || n_cells == 0 {
            return Err(Error::Domain(format!(
                "grid needs x_max > x_min and n_cells > 0 (got [{x_min}, {x_max}], {n_cells})"
            )));
        }
        let h = (x_max - x_min) / n_cells as f64;
        Ok(Grid1D {
            x_min,
            x_max,
            n_cells,
            n_ghost: Self::DEFAULT_GHOST,
            h,
        })
    }

    /// Total storage length including ghosts.
    pub fn padded_len(&self) -> usize {
        self.n_cells + 2 * self.n_ghost
    }

    /// Index of the first interior cell in padded arrays.
    pub fn first_interior(&self) -> usize {
        self.n_ghost
    }

    /// Padded-array index range of the interior cells.
    pub fn interior(&self) -> std::ops::Range<usize> {
        self.n_ghost..self.n_ghost + self.n_cells
    }

    /// Center coordinate of interior cell `k` (0-based, interior numbering).
    pub fn cell_center(&self, k: usize) -> f64 {
        self.x_min + (k as f64 + 0.5) * self.h
    }

    /// Center coordinate of a padded-array cell index (ghosts extrapolate).
    pub fn padded_center(&self, idx: usize) -> f64 {
        self.x_min + (idx as f64 - self.n_ghost as f64 + 0.5) * self.h
    }
}

/// Primitive description of a single cell state.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PrimitiveCell {
    /// Density [g/cm^3].
    pub rho: f64,
    /// Velocity [cm/s].
    pub u: f64,
    /// Gas pressure [erg/cm^3].
    pub p: f64,
    /// Material temperature [eV].
    pub temperature: f64,
    /// Radiation energy density [erg/cm^3].
    pub er: f64,
    /// Radiation pressure [erg/cm^3].
    pub pr: f64,
}

impl PrimitiveCell {
    pub fn new(rho: f64, u: f64, p: f64, temperature: f64, er: f64) -> Self {
        PrimitiveCell {
            rho,
            u,
            p,
            temperature,
            er,
            pr: radiation_pressure(er),
        }
    }
}

/// Per-cell rates of change for the five carried fields. Explicit operator
/// output keeps `temp` identically zero; full stage rates fill all five.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRates {
    pub rho: Vec<f64>,
    pub mom: Vec<f64>,
    pub rho_et: Vec<f64>,
    pub er: Vec<f64>,
    pub temp: Vec<f64>,
}

impl CellRates {
    pub fn zeros(n: usize) -> Self {
        CellRates {
            rho: vec![0.0; n],
            mom: vec![0.0; n],
            rho_et: vec![0.0; n],
            er: vec![0.0; n],
            temp: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }
}

/// Cell-averaged conserved state plus the auxiliary temperature field.
/// Arrays span interior cells and `n_ghost` ghost layers per side.
#[derive(Debug, Clone, PartialEq)]
pub struct CellState {
    pub n_cells: usize,
    pub n_ghost: usize,
    /// Density [g/cm^3].
    pub rho: Vec<f64>,
    /// Momentum density rho*u [g cm^-2 s^-1].
    pub mom: Vec<f64>,
    /// Total material energy density rho*e_t [erg/cm^3].
    pub rho_et: Vec<f64>,
    /// Radiation energy density [erg/cm^3].
    pub er: Vec<f64>,
    /// Material temperature [eV].
    pub temp: Vec<f64>,
}

impl CellState {
    pub fn zeros(grid: &Grid1D) -> Self {
        let n = grid.padded_len();
        CellState {
            n_cells: grid.n_cells,
            n_ghost: grid.n_ghost,
            rho: vec![0.0; n],
            mom: vec![0.0; n],
            rho_et: vec![0.0; n],
            er: vec![0.0; n],
            temp: vec![0.0; n],
        }
    }

    pub fn padded_len(&self) -> usize {
        self.n_cells + 2 * self.n_ghost
    }

    pub fn interior(&self) -> std::ops::Range<usize> {
        self.n_ghost..self.n_ghost + self.n_cells
    }

    /// Specific internal energy of padded cell `idx`,
    /// e_i = rho_et/rho - (mom/rho)^2 / 2.
    pub fn internal_energy(&self, idx: usize) -> Result<f64> {
        let rho = self.rho[idx];
        if !(rho > 0.0) {
            return Err(Error::Positivity {
                quantity: "rho",
                cell: idx,
                value: rho,
            });
        }
        let u = self.mom[idx] / rho;
        let e_i = self.rho_et[idx] / rho - 0.5 * u * u;
        if !(e_i > 0.0) {
            return Err(Error::Positivity {
                quantity: "internal energy",
                cell: idx,
                value: e_i,
            });
        }
        Ok(e_i)
    }

    /// Overwrite the temperature field from the EOS at the current
    /// hydrodynamic variables. Applied at the start of each time step,
    /// never mid-step.
    pub fn sync_temperature(&mut self, eos: &IdealGasEos) -> Result<()> {
        for idx in 0..self.padded_len() {
            let e_i = self.internal_energy(idx)?;
            self.temp[idx] = eos.temperature(self.rho[idx], e_i);
        }
        Ok(())
    }

    /// Primitive view of padded cell `idx`.
    pub fn primitive(&self, idx: usize, eos: &IdealGasEos) -> Result<PrimitiveCell> {
        let e_i = self.internal_energy(idx)?;
        let rho = self.rho[idx];
        Ok(PrimitiveCell::new(
            rho,
            self.mom[idx] / rho,
            eos.pressure(rho, e_i),
            self.temp[idx],
            self.er[idx],
        ))
    }

    /// Set padded cell `idx` from a primitive description. The temperature
    /// field stores the primitive temperature as given.
    pub fn set_primitive(&mut self, idx: usize, prim: &PrimitiveCell, eos: &IdealGasEos) {
        let e_i = eos.internal_energy_from_pressure(prim.rho, prim.p);
        self.rho[idx] = prim.rho;
        self.mom[idx] = prim.rho * prim.u;
        self.rho_et[idx] = prim.rho * (e_i + 0.5 * prim.u * prim.u);
        self.er[idx] = prim.er;
        self.temp[idx] = prim.temperature;
    }

    /// Add `scale * rates` to the interior cells of all five fields.
    pub fn add_scaled_rates(&mut self, rates: &CellRates, scale: f64) {
        debug_assert_eq!(rates.len(), self.n_cells);
        let g = self.n_ghost;
        for k in 0..self.n_cells {
            self.rho[g + k] += scale * rates.rho[k];
            self.mom[g + k] += scale * rates.mom[k];
            self.rho_et[g + k] += scale * rates.rho_et[k];
            self.er[g + k] += scale * rates.er[k];
            self.temp[g + k] += scale * rates.temp[k];
        }
    }

    /// Check interior-cell invariants: finite fields, rho > 0, E_r >= 0,
    /// T > 0, positive internal energy.
    pub fn validate_interior(&self) -> Result<()> {
        for idx in self.interior() {
            for (name, v) in [
                ("rho", self.rho[idx]),
                ("mom", self.mom[idx]),
                ("rho_et", self.rho_et[idx]),
                ("er", self.er[idx]),
                ("temp", self.temp[idx]),
            ] {
                if !v.is_finite() {
                    return Err(Error::Positivity {
                        quantity: name,
                        cell: idx,
                        value: v,
                    });
                }
            }
            self.internal_energy(idx)?;
            if self.er[idx] < 0.0 {
                return Err(Error::Positivity {
                    quantity: "er",
                    cell: idx,
                    value: self.er[idx],
                });
            }
            if !(self.temp[idx] > 0.0) {
                return Err(Error::Positivity {
                    quantity: "temp",
                    cell: idx,
                    value: self.temp[idx],
                });
            }
        }
        Ok(())
    }
}

/// Discrete total energy over the interior, sum_k h (rho_et + E_r).
pub fn total_energy(grid: &Grid1D, state: &CellState) -> f64 {
    let mut sum = 0.0;
    for idx in grid.interior() {
        sum += grid.h * (state.rho_et[idx] + state.er[idx]);
    }
    sum
}

/// Write the interior state as CSV with header `x,rho,u,p,T,Er` at full
/// double precision (17 significant digits).
pub fn write_snapshot_csv(
    path: &Path,
    grid: &Grid1D,
    state: &CellState,
    eos: &IdealGasEos,
) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "x,rho,u,p,T,Er")?;
    for k in 0..grid.n_cells {
        let idx = grid.first_interior() + k;
        let prim = state.primitive(idx, eos)?;
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            grid.cell_center(k),
            prim.rho,
            prim.u,
            prim.p,
            prim.temperature,
            prim.er
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Read a snapshot CSV produced by [`write_snapshot_csv`].
/// Returns (x, primitives) over interior cells.
pub fn read_snapshot_csv(path: &Path) -> Result<(Vec<f64>, Vec<PrimitiveCell>)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "x,rho,u,p,T,Er" => {}
        other => {
            return Err(Error::Config(format!(
                "snapshot {} has unexpected header {:?}",
                path.display(),
                other
            )))
        }
    }
    let mut xs = Vec::new();
    let mut prims = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| {
                Error::Config(format!(
                    "snapshot {} line {}: {}",
                    path.display(),
                    ln + 2,
                    e
                ))
            })?;
        if fields.len() != 6 {
            return Err(Error::Config(format!(
                "snapshot {} line {}: expected 6 fields, got {}",
                path.display(),
                ln + 2,
                fields.len()
            )));
        }
        xs.push(fields[0]);
        prims.push(PrimitiveCell::new(
            fields[1], fields[2], fields[3], fields[4], fields[5],
        ));
    }
    Ok((xs, prims))
}
