//! Gaussian beam geometry: divergence, waist at range and transverse intensity.

use std::f64::consts::PI;

use crate::error::{positive, non_negative, OislError, Result};

/// Speed of light in vacuum, m/s (SI exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Largest divergence accepted by [`BeamParams`]; the linear cone model is a
/// small-angle model.
pub const MAX_DIVERGENCE: f64 = 1e-3;

/// Transmitter optics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParams {
    w0: f64,
    frequency: f64,
}

impl BeamParams {
    /// `w0` is the waist at the transmitter in metres, `frequency` in Hz.
    pub fn new(w0: f64, frequency: f64) -> Result<Self> {
        let beam = Self {
            w0: positive("w0", w0)?,
            frequency: positive("frequency", frequency)?,
        };
        let theta = beam.divergence();
        if theta >= MAX_DIVERGENCE {
            return Err(OislError::InvalidParameter {
                name: "divergence",
                value: theta,
                reason: "beam divergence must stay below 1e-3 rad",
            });
        }
        Ok(beam)
    }

    pub fn from_wavelength(w0: f64, wavelength: f64) -> Result<Self> {
        Self::new(w0, SPEED_OF_LIGHT / positive("wavelength", wavelength)?)
    }

    pub fn with_frequency(&self, frequency: f64) -> Result<Self> {
        Self::new(self.w0, frequency)
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency
    }

    /// Divergence half-angle `λ / (π w0)`.
    pub fn divergence(&self) -> f64 {
        self.wavelength() / (PI * self.w0)
    }
}

/// Divergence half-angle `λ / (π w0)` in radians.
pub fn divergence_angle(wavelength: f64, w0: f64) -> Result<f64> {
    Ok(positive("wavelength", wavelength)? / (PI * positive("w0", w0)?))
}

/// How the waist grows with range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WaistMode {
    /// `z tanθ + w0`.
    Exact,
    /// `z tanθ`; used by every downstream statistic.
    #[default]
    FarField,
}

/// Beam waist at range `z`.
pub fn beam_waist(z: f64, beam: &BeamParams, mode: WaistMode) -> Result<f64> {
    let cone = non_negative("z", z)? * beam.divergence().tan();
    Ok(match mode {
        WaistMode::Exact => cone + beam.w0,
        WaistMode::FarField => cone,
    })
}

/// Normalised transverse intensity `2/(π w_z²) exp(-2 r²/w_z²)` at radial
/// offset `r` and range `z` (far-field waist). Integrates to one over the plane.
pub fn intensity(r: f64, z: f64, beam: &BeamParams) -> Result<f64> {
    let r = non_negative("r", r)?;
    let wz = beam_waist(z, beam, WaistMode::FarField)?;
    if wz == 0.0 {
        return Err(OislError::SingularGeometry("far-field waist is zero at z = 0"));
    }
    Ok(gaussian_intensity(r, wz))
}

#[inline]
pub(crate) fn gaussian_intensity(r: f64, wz: f64) -> f64 {
    let w2 = wz * wz;
    2.0 / (PI * w2) * (-2.0 * r * r / w2).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadOptions};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn divergence_examples() {
        assert!(rel(divergence_angle(PI, 1.0).unwrap(), 1.0) < 1e-15);
        let lambda = SPEED_OF_LIGHT / 200e12;
        assert!(rel(lambda, 1.49896229e-6) < 1e-8);
        let theta = divergence_angle(lambda, 0.1).unwrap();
        // c / (200e12 * π * 0.1), evaluated by hand.
        assert!(rel(theta, 4.771_345_159e-6) < 1e-9);
        let theta50 = divergence_angle(SPEED_OF_LIGHT / 50e12, 0.1).unwrap();
        assert!(rel(theta50, 1.908_538_064e-5) < 1e-9);
        assert!(rel(theta50, 4.0 * theta) < 1e-14);
    }

    #[test]
    fn divergence_rejects_nonpositive() {
        assert!(divergence_angle(0.0, 1.0).is_err());
        assert!(divergence_angle(1.0, -1.0).is_err());
        assert!(BeamParams::new(0.1, 0.0).is_err());
        // 1 GHz with a 0.1 m waist diverges far beyond the small-angle limit.
        assert!(BeamParams::new(0.1, 1e9).is_err());
    }

    #[test]
    fn waist_examples() {
        let beam = BeamParams::new(0.1, 200e12).unwrap();
        assert_eq!(beam_waist(0.0, &beam, WaistMode::Exact).unwrap(), 0.1);
        let far = beam_waist(1e6, &beam, WaistMode::FarField).unwrap();
        assert!(rel(far, 4.771_345_159) < 1e-9);
        let exact = beam_waist(1e6, &beam, WaistMode::Exact).unwrap();
        assert!((exact - far - 0.1).abs() < 1e-12);
        assert!(beam_waist(-1.0, &beam, WaistMode::Exact).is_err());
    }

    #[test]
    fn doubling_frequency_halves_far_field_waist() {
        let a = BeamParams::new(0.1, 100e12).unwrap();
        let b = a.with_frequency(200e12).unwrap();
        let wa = beam_waist(5e5, &a, WaistMode::FarField).unwrap();
        let wb = beam_waist(5e5, &b, WaistMode::FarField).unwrap();
        assert!(rel(wa, 2.0 * wb) < 1e-10);
    }

    #[test]
    fn intensity_peak_and_waist() {
        let beam = BeamParams::new(0.1, 200e12).unwrap();
        let z = 1e6;
        let wz = beam_waist(z, &beam, WaistMode::FarField).unwrap();
        let peak = intensity(0.0, z, &beam).unwrap();
        assert!(rel(peak, 2.0 / (PI * wz * wz)) < 1e-15);
        let at_w = intensity(wz, z, &beam).unwrap();
        assert!(rel(at_w, peak * (-2.0f64).exp()) < 1e-14);
        assert!(matches!(intensity(0.0, 0.0, &beam), Err(OislError::SingularGeometry(_))));
    }

    #[test]
    fn intensity_normalises() {
        let beam = BeamParams::new(0.1, 200e12).unwrap();
        for z in [1e5, 1e6, 3e6] {
            let wz = beam_waist(z, &beam, WaistMode::FarField).unwrap();
            let total = integrate(
                |r| 2.0 * PI * r * intensity(r, z, &beam).unwrap(),
                0.0,
                10.0 * wz,
                QuadOptions::new(1e-13, 1e-13),
            )
            .unwrap();
            assert!((total.value - 1.0).abs() < 1e-9, "z={z}: {}", total.value);
        }
    }

    #[test]
    fn intensity_monotone() {
        let beam = BeamParams::new(0.1, 200e12).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let v = intensity(i as f64 * 0.3, 1e6, &beam).unwrap();
            assert!(v < prev);
            prev = v;
        }
        // Decreasing in z only while r < w_z/√2; w_z(1e5 m) ≈ 0.477 m.
        let mut prev = f64::INFINITY;
        for i in 1..50 {
            let v = intensity(0.3, i as f64 * 1e5, &beam).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }
}
