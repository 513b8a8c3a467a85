//! Equation of state, opacity models, radiation closure quantities, and
//! physical constants.
//!
//! Units are cgs with temperature in eV: lengths in cm, time in s, mass
//! density in g/cm^3, energies in erg/cm^3, opacities in 1/cm.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Speed of light [cm/s].
pub const SPEED_OF_LIGHT: f64 = 2.99792458e10;

/// Radiation constant [erg cm^-3 eV^-4], a = 4 sigma_SB / c converted to
/// eV temperature units with 1 eV = 11604.5 K.
pub const RADIATION_CONSTANT: f64 = 137.2008356319964;

/// Stefan-Boltzmann constant [erg cm^-2 s^-1 K^-4].
pub const STEFAN_BOLTZMANN: f64 = 5.670374419e-5;

/// Kelvin per eV.
pub const KELVIN_PER_EV: f64 = 11604.5;

/// Floor applied to the total opacity before forming the diffusion
/// coefficient, so that zero-opacity cells do not divide by zero.
pub const OPACITY_FLOOR: f64 = 1e-10;

/// Physical constants in the fixed cgs-eV unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Speed of light [cm/s].
    pub c: f64,
    /// Radiation constant [erg cm^-3 eV^-4].
    pub a: f64,
}

impl Constants {
    pub fn new(c: f64, a: f64) -> Result<Self> {
        if !(c > 0.0) || !(a > 0.0) {
            return Err(Error::Domain(format!(
                "constants must be positive (c = {c:e}, a = {a:e})"
            )));
        }
        Ok(Constants { c, a })
    }

    /// cgs constants with temperature measured in eV.
    pub fn cgs_ev() -> Self {
        Constants {
            c: SPEED_OF_LIGHT,
            a: RADIATION_CONSTANT,
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Constants::cgs_ev()
    }
}

/// Ideal gas equation of state with constant specific heat.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealGasEos {
    /// Adiabatic index, > 1.
    pub gamma: f64,
    /// Specific heat at constant volume [erg eV^-1 g^-1].
    pub c_v: f64,
}

impl IdealGasEos {
    pub fn new(gamma: f64, c_v: f64) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(Error::Domain(format!("gamma must exceed 1 (got {gamma})")));
        }
        if !(c_v > 0.0) {
            return Err(Error::Domain(format!("c_v must be positive (got {c_v:e})")));
        }
        Ok(IdealGasEos { gamma, c_v })
    }

    /// Gas pressure p = (gamma - 1) rho e_i.
    ///
    /// Negative internal energy yields negative pressure; unphysical states
    /// are flagged by the caller, not here.
    pub fn pressure(&self, rho: f64, e_i: f64) -> f64 {
        (self.gamma - 1.0) * rho * e_i
    }

    /// Temperature from specific internal energy, T = e_i / c_v.
    ///
    /// The density argument keeps the tabular-EOS call shape; an ideal gas
    /// with constant c_v does not use it.
    pub fn temperature(&self, _rho: f64, e_i: f64) -> f64 {
        e_i / self.c_v
    }

    /// Specific internal energy at a given temperature, e_i = c_v T.
    pub fn internal_energy(&self, temperature: f64) -> f64 {
        self.c_v * temperature
    }

    /// Internal energy from pressure, e_i = p / ((gamma - 1) rho).
    pub fn internal_energy_from_pressure(&self, rho: f64, p: f64) -> f64 {
        p / ((self.gamma - 1.0) * rho)
    }

    /// Adiabatic sound speed c_s = sqrt(gamma p / rho).
    pub fn sound_speed(&self, rho: f64, p: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(Error::Domain(format!(
                "sound speed needs rho > 0 (got {rho:e})"
            )));
        }
        if p < 0.0 || !p.is_finite() {
            return Err(Error::Domain(format!(
                "sound speed needs p >= 0 (got {p:e})"
            )));
        }
        Ok((self.gamma * p / rho).sqrt())
    }
}

/// Evaluated opacities [1/cm]. The gray energy and Planck means coincide
/// with the absorption opacity; scattering enters only the diffusion
/// coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Opacities {
    pub sigma_a: f64,
    pub sigma_s: f64,
    pub sigma_e: f64,
    pub sigma_p: f64,
}

/// Absorption/scattering opacity model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OpacityModel {
    /// State-independent opacities.
    Constant { sigma_a: f64, sigma_s: f64 },
    /// Power-law opacities sigma_a = coeff_a rho^rho_exp_a T^t_exp_a,
    /// sigma_s = coeff_s rho^rho_exp_s (cgs-eV units).
    PowerLaw {
        coeff_a: f64,
        rho_exp_a: f64,
        t_exp_a: f64,
        coeff_s: f64,
        rho_exp_s: f64,
    },
}

impl OpacityModel {
    /// Evaluate the opacities at the given density and temperature.
    pub fn evaluate(&self, rho: f64, temperature: f64) -> Result<Opacities> {
        let (sigma_a, sigma_s) = match *self {
            OpacityModel::Constant { sigma_a, sigma_s } => (sigma_a, sigma_s),
            OpacityModel::PowerLaw {
                coeff_a,
                rho_exp_a,
                t_exp_a,
                coeff_s,
                rho_exp_s,
            } => {
                if temperature <= 0.0 && t_exp_a != 0.0 {
                    return Err(Error::Domain(format!(
                        "power-law opacity needs T > 0 (got {temperature:e})"
                    )));
                }
                let sa = coeff_a * rho.powf(rho_exp_a) * temperature.powf(t_exp_a);
                let ss = coeff_s * rho.powf(rho_exp_s);
                (sa, ss)
            }
        };
        Ok(Opacities {
            sigma_a,
            sigma_s,
            sigma_e: sigma_a,
            sigma_p: sigma_a,
        })
    }
}

/// Gray diffusion coefficient D = c / (3 (sigma_a + sigma_s)).
///
/// Callers are expected to apply [`OPACITY_FLOOR`] before reaching a true
/// zero; a zero total opacity here is an error.
pub fn diffusion_coefficient(constants: &Constants, sigma_a: f64, sigma_s: f64) -> Result<f64> {
    let sigma_t = sigma_a + sigma_s;
    if sigma_t <= 0.0 {
        return Err(Error::Domain(format!(
            "diffusion coefficient needs sigma_a + sigma_s > 0 (got {sigma_t:e})"
        )));
    }
    Ok(constants.c / (3.0 * sigma_t))
}

/// Diffusion coefficient with the opacity floor applied.
pub fn diffusion_coefficient_floored(
    constants: &Constants,
    sigma_a: f64,
    sigma_s: f64,
) -> f64 {
    let sigma_t = (sigma_a + sigma_s).max(OPACITY_FLOOR);
    constants.c / (3.0 * sigma_t)
}

/// Isotropic (Eddington) radiation pressure p_r = E_r / 3.
pub fn radiation_pressure(er: f64) -> f64 {
    er / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn radiation_constant_from_stefan_boltzmann() {
        // a = 4 sigma_SB / c, rescaled to eV^4 temperature units.
        let a = 4.0 * STEFAN_BOLTZMANN / SPEED_OF_LIGHT * KELVIN_PER_EV.powi(4);
        assert_relative_eq!(a, RADIATION_CONSTANT, max_relative = 1e-13);
    }

    #[test]
    fn pressure_table1_upstream() {
        // gamma = 5/3, c_v = 1.447e12, T = 100 eV: p = (2/3) rho c_v T.
        let eos = IdealGasEos::new(5.0 / 3.0, 1.447e12).unwrap();
        let p = eos.pressure(1.0, 1.447e14);
        assert_relative_eq!(p, 9.646666666666667e13, max_relative = 1e-14);
    }

    #[test]
    fn pressure_trivial() {
        let eos = IdealGasEos::new(5.0 / 3.0, 1.447e12).unwrap();
        assert_eq!(eos.pressure(3.0, 0.0), 0.0);
        let eos2 = IdealGasEos::new(2.0, 1.0).unwrap();
        assert_eq!(eos2.pressure(2.0, 3.0), 6.0);
    }

    #[test]
    fn temperature_table1_upstream() {
        let eos = IdealGasEos::new(5.0 / 3.0, 1.447e12).unwrap();
        assert_relative_eq!(eos.temperature(1.0, 1.447e14), 100.0, max_relative = 1e-14);
        assert_eq!(eos.temperature(1.0, 0.0), 0.0);
    }

    #[test]
    fn temperature_energy_round_trip() {
        let eos = IdealGasEos::new(5.0 / 3.0, 1.447e12).unwrap();
        for t in [1e-3, 0.7, 100.0, 8359.0] {
            let back = eos.temperature(1.0, eos.internal_energy(t));
            assert_relative_eq!(back, t, max_relative = 1e-14);
        }
    }

    #[test]
    fn constant_opacity_passthrough() {
        let model = OpacityModel::Constant {
            sigma_a: 577.35,
            sigma_s: 0.0,
        };
        let o = model.evaluate(2.0, 55.0).unwrap();
        assert_eq!(o.sigma_a, 577.35);
        assert_eq!(o.sigma_s, 0.0);
        assert_eq!(o.sigma_e, 577.35);
        assert_eq!(o.sigma_p, 577.35);
    }

    #[test]
    fn power_law_opacity_problem3() {
        // Table-row interpretation: sigma_a = 4.494e8 rho^2 T^-3.5.
        let model = OpacityModel::PowerLaw {
            coeff_a: 4.494e8,
            rho_exp_a: 2.0,
            t_exp_a: -3.5,
            coeff_s: 0.4006,
            rho_exp_s: 1.0,
        };
        let o = model.evaluate(1.0, 100.0).unwrap();
        assert_relative_eq!(o.sigma_a, 44.94, max_relative = 1e-12);
        assert_relative_eq!(o.sigma_s, 0.4006, max_relative = 1e-14);
        // zero density kills both power laws
        let z = model.evaluate(0.0, 100.0).unwrap();
        assert_eq!(z.sigma_a, 0.0);
        assert_eq!(z.sigma_s, 0.0);
        // T <= 0 is outside the fractional-power domain
        assert!(model.evaluate(1.0, 0.0).is_err());
    }

    #[test]
    fn power_law_monotonicity() {
        let model = OpacityModel::PowerLaw {
            coeff_a: 4.494e8,
            rho_exp_a: 2.0,
            t_exp_a: -3.5,
            coeff_s: 0.0,
            rho_exp_s: 1.0,
        };
        let base = model.evaluate(1.0, 100.0).unwrap().sigma_a;
        assert!(model.evaluate(1.0, 150.0).unwrap().sigma_a < base);
        assert!(model.evaluate(2.0, 100.0).unwrap().sigma_a > base);
    }

    #[test]
    fn diffusion_coefficient_value_and_scaling() {
        let k = Constants::cgs_ev();
        let d = diffusion_coefficient(&k, 577.35, 0.0).unwrap();
        assert_relative_eq!(d, 1.7308533702837678e7, max_relative = 1e-13);
        let d2 = diffusion_coefficient(&k, 2.0 * 577.35, 0.0).unwrap();
        assert_relative_eq!(d2, d / 2.0, max_relative = 1e-14);
        assert!(diffusion_coefficient(&k, 0.0, 0.0).is_err());
        // floored variant is inert when sigma_t is far above the floor
        assert_eq!(diffusion_coefficient_floored(&k, 577.35, 0.0), d);
    }

    #[test]
    fn radiation_pressure_values() {
        assert_eq!(radiation_pressure(3.0), 1.0);
        assert_eq!(radiation_pressure(0.0), 0.0);
        let k = Constants::cgs_ev();
        let er = k.a * 100f64.powi(4);
        assert_relative_eq!(radiation_pressure(er), 4.5733611877332134e9, max_relative = 1e-12);
    }

    #[test]
    fn sound_speed_upstream_and_scaling() {
        let eos = IdealGasEos::new(5.0 / 3.0, 1.447e12).unwrap();
        let cs = eos.sound_speed(1.0, 9.646666666666667e13).unwrap();
        assert_relative_eq!(cs,  1.2679817734406823e7, max_relative = 1e-13);
        // sqrt(gamma (gamma-1) c_v T) route
        let alt = (eos.gamma * (eos.gamma - 1.0) * eos.c_v * 100.0).sqrt();
        assert_relative_eq!(cs, alt, max_relative = 1e-13);
        assert_eq!(eos.sound_speed(1.0, 0.0).unwrap(), 0.0);
        let c4 = eos.sound_speed(1.0, 4.0 * 9.646666666666667e13).unwrap();
        assert_relative_eq!(c4, 2.0 * cs, max_relative = 1e-14);
        assert!(eos.sound_speed(1.0, -1.0).is_err());
        assert!(eos.sound_speed(0.0, 1.0).is_err());
    }

    #[test]
    fn homogeneity() {
        let k = Constants::cgs_ev();
        for s in [0.5, 2.0, 17.0] {
            assert_relative_eq!(
                radiation_pressure(s * 9.0),
                s * radiation_pressure(9.0),
                max_relative = 1e-15
            );
            let d1 = diffusion_coefficient(&k, 10.0, 5.0).unwrap();
            let d2 = diffusion_coefficient(&k, s * 10.0, s * 5.0).unwrap();
            assert_relative_eq!(d2, d1 / s, max_relative = 1e-14);
        }
    }
}
