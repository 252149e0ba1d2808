//! Problem definition: trap potential, power nonlinearity, initial data, and
//! the exact flow of the pointwise part `i psi_t = (V + kappa |psi|^(p-1)) psi`.
//!
//! That flow multiplies `psi` by a real function of `|psi|`, so `|psi|` is
//! frozen along it and the solution is the nodal phase rotation
//! `psi <- psi * exp(-i (V + kappa |psi|^(p-1)) dt)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Field2D, GridSpec};

/// Half-width of the square domain on which the hat `(8-|x|)(8-|y|)` lives.
pub const HAT_HALF_WIDTH: f64 = 8.0;

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Zero,
    /// `V(x, y) = (cx x^2 + cy y^2) / (2 eps)`.
    Quadratic { cx: f64, cy: f64, eps: f64 },
    /// Node values in storage order.
    Tabulated(Vec<f64>),
}

impl PotentialSpec {
    pub fn quadratic(cx: f64, cy: f64, eps: f64) -> Result<Self> {
        let spec = PotentialSpec::Quadratic { cx, cy, eps };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::Zero => Ok(()),
            PotentialSpec::Quadratic { cx, cy, eps } => {
                if !(cx.is_finite() && cy.is_finite()) {
                    return Err(Error::spec("potential", "coefficients must be finite"));
                }
                if !(eps.is_finite() && *eps > 0.0) {
                    return Err(Error::spec("potential", format!("eps must be > 0, got {eps}")));
                }
                Ok(())
            }
            PotentialSpec::Tabulated(v) => {
                if v.iter().all(|x| x.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::spec("potential", "tabulated samples must be finite"))
                }
            }
        }
    }

    pub fn value_at(&self, x: f64, y: f64) -> Option<f64> {
        match *self {
            PotentialSpec::Zero => Some(0.0),
            PotentialSpec::Quadratic { cx, cy, eps } => Some((cx * x * x + cy * y * y) / (2.0 * eps)),
            PotentialSpec::Tabulated(_) => None,
        }
    }

    /// Samples the potential at every node of `grid`.
    pub fn eval(&self, grid: &GridSpec) -> Result<Potential> {
        self.validate()?;
        let values = match self {
            PotentialSpec::Tabulated(v) => {
                if v.len() != grid.len() {
                    return Err(Error::SizeMismatch {
                        expected: grid.len(),
                        actual: v.len(),
                    });
                }
                v.clone()
            }
            _ => {
                let (xs, ys) = grid.coordinates();
                let mut values = Vec::with_capacity(grid.len());
                for &y in &ys {
                    for &x in &xs {
                        values.push(self.value_at(x, y).unwrap_or_default());
                    }
                }
                values
            }
        };
        Ok(Potential { grid: *grid, values })
    }
}

/// A potential sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    grid: GridSpec,
    values: Vec<f64>,
}

impl Potential {
    pub fn zero(grid: GridSpec) -> Self {
        Potential {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[self.grid.index(ix, iy)]
    }
}

/// `kappa |psi|^(p-1) psi`; `kappa > 0` is defocusing, `kappa < 0` focusing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NonlinearitySpec {
    pub kappa: f64,
    pub p: f64,
}

impl Default for NonlinearitySpec {
    fn default() -> Self {
        NonlinearitySpec { kappa: 1.0, p: 3.0 }
    }
}

impl NonlinearitySpec {
    pub fn new(kappa: f64, p: f64) -> Result<Self> {
        let nl = NonlinearitySpec { kappa, p };
        nl.validate()?;
        Ok(nl)
    }

    pub fn linear() -> Self {
        NonlinearitySpec { kappa: 0.0, p: 3.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.kappa.is_finite() {
            return Err(Error::spec("nonlinearity", "kappa must be finite"));
        }
        if !(self.p.is_finite() && self.p >= 1.0) {
            return Err(Error::spec("nonlinearity", format!("p must be >= 1, got {}", self.p)));
        }
        Ok(())
    }

    /// `|psi|^(p-1)` given `|psi|^2`, with integer fast paths.
    #[inline]
    pub fn modulus_power(&self, density: f64) -> f64 {
        if self.p == 3.0 {
            density
        } else if self.p == 5.0 {
            density * density
        } else if self.p == 1.0 {
            1.0
        } else if density == 0.0 {
            0.0
        } else {
            // |psi|^(p-1) = exp((p-1)/2 * ln |psi|^2)
            ((self.p - 1.0) * 0.5 * density.ln()).exp()
        }
    }

    /// Nodal density of the nonlinear energy term, `|psi|^(p+1)`.
    #[inline]
    pub fn energy_density(&self, density: f64) -> f64 {
        self.modulus_power(density) * density
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialDataSpec {
    /// `g_sigma = (sigma pi)^{-1/2} exp(-(x^2 + y^2) / (2 sigma))`.
    Gaussian { sigma: f64 },
    /// `(L - |x|)(L - |y|)`, clipped at zero; `None` means `L = 8` on `[-8,8]^2`.
    Hat { half_width: Option<f64> },
    /// Node values in storage order.
    Custom(Vec<Complex64>),
}

impl Default for InitialDataSpec {
    fn default() -> Self {
        InitialDataSpec::Gaussian { sigma: 1.0 }
    }
}

impl InitialDataSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            InitialDataSpec::Gaussian { sigma } if !(sigma.is_finite() && *sigma > 0.0) => Err(
                Error::spec("initial data", format!("sigma must be > 0, got {sigma}")),
            ),
            InitialDataSpec::Hat {
                half_width: Some(l),
            } if !(l.is_finite() && *l > 0.0) => Err(Error::spec(
                "initial data",
                format!("hat half_width must be > 0, got {l}"),
            )),
            _ => Ok(()),
        }
    }

    pub fn sample(&self, grid: &GridSpec) -> Result<Field2D> {
        self.validate()?;
        match self {
            InitialDataSpec::Gaussian { sigma } => Ok(Field2D::from_fn(*grid, |x, y| {
                Complex64::new(gaussian(*sigma, x, y), 0.0)
            })),
            InitialDataSpec::Hat { half_width } => {
                let l = match half_width {
                    Some(l) => *l,
                    None => {
                        let h = HAT_HALF_WIDTH;
                        if grid.bounds() != (-h, h, -h, h) {
                            return Err(Error::HatDomain);
                        }
                        h
                    }
                };
                Ok(Field2D::from_fn(*grid, |x, y| {
                    let v = (l - x.abs()).max(0.0) * (l - y.abs()).max(0.0);
                    Complex64::new(v, 0.0)
                }))
            }
            InitialDataSpec::Custom(values) => Field2D::from_values(*grid, values.clone()),
        }
    }
}

/// `g_sigma(x, y)`, unit L² norm on the plane.
pub fn gaussian(sigma: f64, x: f64, y: f64) -> f64 {
    (-(x * x + y * y) / (2.0 * sigma)).exp() / (sigma * PI).sqrt()
}

/// Everything that defines the equation apart from the state itself.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub potential: PotentialSpec,
    pub nonlinearity: NonlinearitySpec,
    pub initial: InitialDataSpec,
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec {
            potential: PotentialSpec::Zero,
            nonlinearity: NonlinearitySpec::default(),
            initial: InitialDataSpec::default(),
        }
    }
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        self.potential.validate()?;
        self.nonlinearity.validate()?;
        self.initial.validate()
    }

    /// Samples the potential on `grid` and pairs it with the nonlinearity.
    pub fn prepare(&self, grid: &GridSpec) -> Result<Model> {
        self.validate()?;
        Ok(Model {
            potential: self.potential.eval(grid)?,
            nonlinearity: self.nonlinearity,
        })
    }
}

/// A model bound to a grid: what the stepper actually consumes.
#[derive(Debug, Clone)]
pub struct Model {
    pub potential: Potential,
    pub nonlinearity: NonlinearitySpec,
}

impl Model {
    pub fn new(potential: Potential, nonlinearity: NonlinearitySpec) -> Result<Self> {
        nonlinearity.validate()?;
        Ok(Model {
            potential,
            nonlinearity,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        self.potential.grid()
    }
}

pub(crate) fn pointwise_in_place(
    values: &mut [Complex64],
    potential: &[f64],
    nl: &NonlinearitySpec,
    dt: f64,
) -> Result<()> {
    let mut finite = true;
    for (z, &v) in values.iter_mut().zip(potential) {
        let angle = -(v + nl.kappa * nl.modulus_power(z.norm_sqr())) * dt;
        finite &= angle.is_finite();
        let (s, c) = angle.sin_cos();
        *z *= Complex64::new(c, s);
    }
    if finite {
        Ok(())
    } else {
        Err(Error::NonFinite("pointwise phase"))
    }
}

/// Exact flow of `i psi_t = (V + kappa |psi|^(p-1)) psi` over `dt` (any sign).
pub fn potential_nonlinear_step(
    f: &Field2D,
    potential: &Potential,
    nl: &NonlinearitySpec,
    dt: f64,
) -> Result<Field2D> {
    if f.grid() != potential.grid() {
        return Err(Error::GridMismatch);
    }
    let mut out = f.clone();
    pointwise_in_place(out.values_mut(), potential.values(), nl, dt)?;
    Ok(out)
}
