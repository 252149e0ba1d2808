//! Conserved and tracked quantities: mass, energy, peak density, error norms
//! and the blow-up detector.

use crate::error::{Error, Result};
use crate::grid::Field2D;
use crate::model::{Model, NonlinearitySpec, Potential};
use crate::spectral::SpectralPlan;

pub const DEFAULT_BLOWUP_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// Discrete L² norm.
    pub mass: f64,
    pub energy: f64,
    pub max_density: f64,
    pub finite: bool,
}

impl DiagnosticsRecord {
    pub fn measure(f: &Field2D, t: f64, model: &Model, plan: &SpectralPlan) -> Result<Self> {
        if !f.is_finite() {
            return Ok(Self::non_finite(t));
        }
        Ok(DiagnosticsRecord {
            t,
            mass: f.l2_norm()?,
            energy: energy(f, &model.potential, &model.nonlinearity, plan)?,
            max_density: max_density(f),
            finite: true,
        })
    }

    /// Record for a field that has left the finite numbers.
    pub fn non_finite(t: f64) -> Self {
        DiagnosticsRecord {
            t,
            mass: f64::NAN,
            energy: f64::NAN,
            max_density: f64::INFINITY,
            finite: false,
        }
    }
}

/// `<L psi, psi> + 2 kappa / (p+1) ||psi||_{p+1}^{p+1}` with `L = -1/2 Lap + V`.
///
/// The kinetic part is spectral; potential and nonlinear parts use the nodal
/// quadrature that also defines the mass.
pub fn energy(
    f: &Field2D,
    potential: &Potential,
    nl: &NonlinearitySpec,
    plan: &SpectralPlan,
) -> Result<f64> {
    if f.grid() != potential.grid() {
        return Err(Error::GridMismatch);
    }
    let kinetic = plan.kinetic_energy(f)?;
    let w = f.grid().cell_area();
    let (mut pot, mut nonlin) = (0.0, 0.0);
    for (z, &v) in f.values().iter().zip(potential.values()) {
        let rho = z.norm_sqr();
        pot += v * rho;
        nonlin += nl.energy_density(rho);
    }
    Ok(kinetic + w * pot + 2.0 * nl.kappa / (nl.p + 1.0) * w * nonlin)
}

/// `max |psi|^2` over the nodes; `+inf` if any sample is not finite.
pub fn max_density(f: &Field2D) -> f64 {
    if !f.is_finite() {
        return f64::INFINITY;
    }
    f.values().iter().map(|z| z.norm_sqr()).fold(0.0, f64::max)
}

/// `||f - reference||` in the discrete L² norm.
pub fn l2_error(f: &Field2D, reference: &Field2D) -> Result<f64> {
    f.ensure_same_grid(reference)?;
    if !(f.is_finite() && reference.is_finite()) {
        return Err(Error::NonFinite("l2 error"));
    }
    let sum: f64 = f
        .values()
        .iter()
        .zip(reference.values())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    Ok((sum * f.grid().cell_area()).sqrt())
}

/// Flags a run as blown up once the peak density exceeds
/// `threshold_factor` times its initial value, or stops being finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupDetector {
    pub threshold_factor: f64,
}

impl Default for BlowupDetector {
    fn default() -> Self {
        BlowupDetector {
            threshold_factor: DEFAULT_BLOWUP_FACTOR,
        }
    }
}

impl BlowupDetector {
    pub fn new(threshold_factor: f64) -> Result<Self> {
        if !(threshold_factor.is_finite() && threshold_factor > 1.0) {
            return Err(Error::spec(
                "blow-up detector",
                format!("threshold_factor must be > 1, got {threshold_factor}"),
            ));
        }
        Ok(BlowupDetector { threshold_factor })
    }

    pub fn check(&self, record: &DiagnosticsRecord, initial_max_density: f64) -> bool {
        !record.finite || record.max_density > self.threshold_factor * initial_max_density
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::model::{InitialDataSpec, PotentialSpec};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn ground_state(g: GridSpec) -> Field2D {
        InitialDataSpec::Gaussian { sigma: 1.0 }.sample(&g).unwrap()
    }

    #[test]
    fn energy_of_zero_field() {
        let g = GridSpec::square(8.0, 32).unwrap();
        let plan = SpectralPlan::new(g);
        let v = PotentialSpec::quadratic(1.0, 1.0, 1.0).unwrap().eval(&g).unwrap();
        let e = energy(&Field2D::zeros(g), &v, &NonlinearitySpec::default(), &plan).unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn harmonic_ground_state_energy_is_one() {
        let g = GridSpec::square(8.0, 128).unwrap();
        let plan = SpectralPlan::new(g);
        let v = PotentialSpec::quadratic(1.0, 1.0, 1.0).unwrap().eval(&g).unwrap();
        let e = energy(&ground_state(g), &v, &NonlinearitySpec::linear(), &plan).unwrap();
        assert!((e - 1.0).abs() < 1e-8, "{e}");
    }

    #[test]
    fn plane_wave_energy() {
        let g = GridSpec::square(8.0, 64).unwrap();
        let plan = SpectralPlan::new(g);
        let (kx, ky) = (plan.wavenumbers().kx[7], plan.wavenumbers().ky[60]);
        let f = Field2D::from_fn(g, |x, y| Complex64::from_polar(1.0 / 16.0, kx * x + ky * y));
        let e = energy(&f, &Potential::zero(g), &NonlinearitySpec::linear(), &plan).unwrap();
        assert!((e - (kx * kx + ky * ky) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn cubic_energy_of_gaussian() {
        // kappa/2 * integral |g_1|^4 = kappa / (4 pi)
        let g = GridSpec::square(8.0, 128).unwrap();
        let plan = SpectralPlan::new(g);
        let nl = NonlinearitySpec::new(2.0, 3.0).unwrap();
        let e = energy(&ground_state(g), &Potential::zero(g), &nl, &plan).unwrap();
        assert!((e - (0.5 + 2.0 / (4.0 * PI))).abs() < 1e-10);
    }

    #[test]
    fn energy_is_phase_invariant() {
        let g = GridSpec::square(8.0, 64).unwrap();
        let plan = SpectralPlan::new(g);
        let v = PotentialSpec::quadratic(1.0, -10.0, 1.0).unwrap().eval(&g).unwrap();
        let nl = NonlinearitySpec::new(-1.9718, 3.0).unwrap();
        let f = ground_state(g);
        let e0 = energy(&f, &v, &nl, &plan).unwrap();
        let e1 = energy(&f.scaled(Complex64::from_polar(1.0, 1.1)), &v, &nl, &plan).unwrap();
        assert!((e0 - e1).abs() <= 1e-14 * e0.abs().max(1.0));
    }

    #[test]
    fn max_density_cases() {
        let g = GridSpec::square(8.0, 64).unwrap();
        assert!((max_density(&ground_state(g)) - 1.0 / PI).abs() < 1e-15);
        let hat = InitialDataSpec::Hat { half_width: None }.sample(&g).unwrap();
        assert_eq!(max_density(&hat), 4096.0);
        assert_eq!(max_density(&Field2D::zeros(g)), 0.0);
        let mut f = Field2D::zeros(g);
        f.values_mut()[9] = Complex64::new(f64::NAN, 0.0);
        assert_eq!(max_density(&f), f64::INFINITY);
    }

    #[test]
    fn l2_error_cases() {
        let g = GridSpec::square(8.0, 32).unwrap();
        let f = ground_state(g);
        assert_eq!(l2_error(&f, &f).unwrap(), 0.0);
        let twice = f.scaled(Complex64::new(2.0, 0.0));
        assert!((l2_error(&twice, &f).unwrap() - f.l2_norm().unwrap()).abs() < 1e-15);
        let other = Field2D::zeros(GridSpec::square(8.0, 16).unwrap());
        assert!(matches!(l2_error(&f, &other), Err(Error::GridMismatch)));
    }

    #[test]
    fn blowup_detector_rules() {
        let d = BlowupDetector::default();
        let rec = DiagnosticsRecord {
            t: 0.0,
            mass: 1.0,
            energy: 0.5,
            max_density: 0.3,
            finite: true,
        };
        assert!(!d.check(&rec, 0.3));
        assert!(d.check(&DiagnosticsRecord::non_finite(0.2), 0.3));
        let hot = DiagnosticsRecord {
            max_density: 30.01,
            ..rec
        };
        assert!(d.check(&hot, 0.3));
        assert!(BlowupDetector::new(1.0).is_err());
        assert!(BlowupDetector::new(f64::NAN).is_err());
    }

    #[test]
    fn record_of_non_finite_field() {
        let g = GridSpec::square(8.0, 16).unwrap();
        let plan = SpectralPlan::new(g);
        let model = crate::model::ModelSpec::default().prepare(&g).unwrap();
        let mut f = Field2D::zeros(g);
        f.values_mut()[0].re = f64::NAN;
        let rec = DiagnosticsRecord::measure(&f, 0.5, &model, &plan).unwrap();
        assert!(!rec.finite);
        assert_eq!(rec.max_density, f64::INFINITY);
    }
}
