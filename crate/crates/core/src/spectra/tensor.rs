use serde::Serialize;

use crate::error::{Error, Result};

/// Axis labelling of a [`NoiseTensor`]. In both conventions the third axis
/// runs along the wire, parallel to the field at the guide centre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axes {
    /// (x, y, z) with y the surface normal and z along the wire.
    CartesianSurface,
    /// (azimuthal, radial, longitudinal) around a wire.
    CylindricalWire,
}

impl Axes {
    pub fn labels(self) -> [&'static str; 3] {
        match self {
            Axes::CartesianSurface => ["x (in-plane)", "y (surface normal)", "z (along wire)"],
            Axes::CylindricalWire => ["azimuthal", "radial", "longitudinal"],
        }
    }
}

/// 3×3 magnetic noise spectrum at one point and frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseTensor {
    /// T²/Hz
    pub components: [[f64; 3]; 3],
    pub axes: Axes,
    /// Distance from the source, m.
    pub position: f64,
    /// rad/s
    pub frequency: f64,
}

impl NoiseTensor {
    pub fn diagonal(diag: [f64; 3], axes: Axes, position: f64, frequency: f64) -> Self {
        let mut components = [[0.0; 3]; 3];
        for (i, d) in diag.into_iter().enumerate() {
            components[i][i] = d;
        }
        NoiseTensor { components, axes, position, frequency }
    }

    /// `s · 1` in the given axes.
    pub fn isotropic(s: f64, axes: Axes) -> Self {
        Self::diagonal([s; 3], axes, 0.0, 0.0)
    }

    pub fn diag(&self) -> [f64; 3] {
        [self.components[0][0], self.components[1][1], self.components[2][2]]
    }

    pub fn trace(&self) -> f64 {
        self.diag().iter().sum()
    }

    /// Component along the wire (the quantization axis).
    pub fn parallel(&self) -> f64 {
        self.components[2][2]
    }

    pub fn offdiag_max(&self) -> f64 {
        let c = &self.components;
        [c[0][1], c[0][2], c[1][0], c[1][2], c[2][0], c[2][1]]
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }

    /// Sum of two spectra of independent sources at the same point.
    pub fn add(&self, other: &NoiseTensor) -> Result<NoiseTensor> {
        if self.axes != other.axes {
            return Err(Error::domain("cannot add noise tensors given in different axes"));
        }
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.components[i][j] += other.components[i][j];
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: f64) -> NoiseTensor {
        let mut out = *self;
        out.components.iter_mut().flatten().for_each(|c| *c *= factor);
        out
    }

    /// `R^T S R` for a rotation whose columns are the new basis vectors.
    pub fn rotated(&self, rotation: &[[f64; 3]; 3]) -> NoiseTensor {
        let s = &self.components;
        let mut out = [[0.0; 3]; 3];
        for (a, row) in out.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                let mut acc = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        acc += rotation[i][a] * s[i][j] * rotation[j][b];
                    }
                }
                *entry = acc;
            }
        }
        NoiseTensor { components: out, ..*self }
    }

    pub fn is_valid(&self) -> bool {
        let c = &self.components;
        let symmetric = (0..3).all(|i| (0..3).all(|j| (c[i][j] - c[j][i]).abs() <= 1e-12 * (c[i][j].abs() + c[j][i].abs())));
        symmetric && self.diag().iter().all(|d| *d >= 0.0) && self.trace().is_finite()
    }
}
