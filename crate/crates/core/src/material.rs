//! Isotropic damage with linear softening and Kuhn-Tucker history.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Elastic and damage parameters of the bar material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    /// Young's modulus (MPa).
    pub youngs_modulus: f64,
    /// History value at damage onset.
    pub kappa0: f64,
    /// History value at complete loss of stiffness.
    pub kappa_c: f64,
    /// Gradient length scale `c` (mm). Zero gives the local model.
    pub length_scale: f64,
}

impl MaterialParams {
    pub fn new(youngs_modulus: f64, kappa0: f64, kappa_c: f64, length_scale: f64) -> Result<Self> {
        let p = MaterialParams {
            youngs_modulus,
            kappa0,
            kappa_c,
            length_scale,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.youngs_modulus > 0.0) || !self.youngs_modulus.is_finite() {
            return Err(Error::Config("Young's modulus must be positive"));
        }
        if !(self.kappa0 > 0.0 && self.kappa0 < self.kappa_c) || !self.kappa_c.is_finite() {
            return Err(Error::Config("require 0 < kappa0 < kappa_c"));
        }
        if !(self.length_scale >= 0.0) || !self.length_scale.is_finite() {
            return Err(Error::Config("length scale must be non-negative"));
        }
        Ok(())
    }

    /// Damage `omega(kappa)`: zero up to `kappa0`, one from `kappa_c` on.
    pub fn damage(&self, kappa: f64) -> Result<f64> {
        check_kappa(kappa)?;
        Ok(self.damage_unchecked(kappa))
    }

    /// `d omega / d kappa`. Zero on both flat branches and exactly at the kinks.
    pub fn damage_derivative(&self, kappa: f64) -> Result<f64> {
        check_kappa(kappa)?;
        Ok(self.damage_derivative_unchecked(kappa))
    }

    pub(crate) fn damage_unchecked(&self, kappa: f64) -> f64 {
        let (k0, kc) = (self.kappa0, self.kappa_c);
        if kappa <= k0 {
            0.0
        } else if kappa >= kc {
            1.0
        } else {
            let w = 1.0 - k0 * (kc - kappa) / (kappa * (kc - k0));
            w.clamp(0.0, 1.0)
        }
    }

    pub(crate) fn damage_derivative_unchecked(&self, kappa: f64) -> f64 {
        let (k0, kc) = (self.kappa0, self.kappa_c);
        if kappa <= k0 || kappa >= kc {
            0.0
        } else {
            k0 * kc / (kappa * kappa * (kc - k0))
        }
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa >= 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "history parameter",
            value: kappa,
        })
    }
}

/// Uniaxial stress `(1 - omega) E strain`.
pub fn stress(strain: f64, omega: f64, youngs_modulus: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::Domain {
            what: "damage",
            value: omega,
        });
    }
    Ok((1.0 - omega) * youngs_modulus * strain)
}

/// Local equivalent strain. In one dimension this is the strain itself, so
/// its derivative with respect to the strain is one.
#[inline]
pub fn equivalent_strain(strain: f64) -> f64 {
    strain
}

/// Derivative of [`equivalent_strain`] with respect to the strain.
#[inline]
pub fn equivalent_strain_derivative(_strain: f64) -> f64 {
    1.0
}

/// Kuhn-Tucker update: `kappa_new = max(kappa, eps_bar)`, loading when the
/// trial value strictly exceeds the committed history. Non-positive trial
/// values never raise `kappa`.
#[inline]
pub fn update_history(kappa_committed: f64, eps_bar_trial: f64) -> (f64, bool) {
    if eps_bar_trial > kappa_committed && eps_bar_trial > 0.0 {
        (eps_bar_trial, true)
    } else {
        (kappa_committed, false)
    }
}

/// Committed history parameter per element.
#[derive(Debug, Clone, PartialEq)]
pub struct DamageHistory {
    kappa: Vec<f64>,
}

impl DamageHistory {
    /// Virgin history, `kappa = 0` in every element.
    pub fn new(n_elements: usize) -> Self {
        DamageHistory {
            kappa: vec![0.0; n_elements],
        }
    }

    pub fn from_values(kappa: Vec<f64>) -> Result<Self> {
        if let Some(&k) = kappa.iter().find(|&&k| !(k >= 0.0) || !k.is_finite()) {
            return Err(Error::Domain {
                what: "history parameter",
                value: k,
            });
        }
        Ok(DamageHistory { kappa })
    }

    pub fn len(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappa.is_empty()
    }

    pub fn committed(&self) -> &[f64] {
        &self.kappa
    }

    /// Trial history of element `e` for a given `eps_bar`, without committing.
    #[inline]
    pub fn trial(&self, e: usize, eps_bar: f64) -> (f64, bool) {
        update_history(self.kappa[e], eps_bar)
    }

    /// Commit converged `eps_bar` values. Returns the number of loading elements.
    pub fn commit(&mut self, eps_bar: &[f64]) -> Result<usize> {
        if eps_bar.len() != self.kappa.len() {
            return Err(Error::Size {
                what: "eps_bar",
                expected: self.kappa.len(),
                got: eps_bar.len(),
            });
        }
        let mut loading = 0;
        for (k, &e) in self.kappa.iter_mut().zip(eps_bar) {
            let (next, l) = update_history(*k, e);
            *k = next;
            loading += l as usize;
        }
        Ok(loading)
    }
}
