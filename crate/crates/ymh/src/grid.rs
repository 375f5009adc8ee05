//! `|F|` on the real slice `z1 = x`, `z2 = y`, and its CSV / PGM renderings.

use std::io::{self, Write};

use ymh_core::algebra::C64;
use ymh_core::fields::FieldConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("grid needs at least 2 points per axis, got {nx}x{ny}")]
    TooFewPoints { nx: usize, ny: usize },
    #[error("grid bounds must be finite with min < max")]
    BadBounds,
}

impl Default for GridSpec {
    /// `[-3, 3]^2` at 201 x 201.
    fn default() -> Self {
        Self {
            xmin: -3.0,
            xmax: 3.0,
            ymin: -3.0,
            ymax: 3.0,
            nx: 201,
            ny: 201,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), GridError> {
        if self.nx < 2 || self.ny < 2 {
            return Err(GridError::TooFewPoints {
                nx: self.nx,
                ny: self.ny,
            });
        }
        let ok = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && lo < hi;
        if !ok(self.xmin, self.xmax) || !ok(self.ymin, self.ymax) {
            return Err(GridError::BadBounds);
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.xmin + (self.xmax - self.xmin) * i as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.ymin + (self.ymax - self.ymin) * j as f64 / (self.ny - 1) as f64
    }
}

/// Samples stored with `y` as the outer index: `values[j * nx + i] = |F|(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl FieldGrid {
    pub fn evaluate(config: &FieldConfig, spec: GridSpec) -> Result<Self, GridError> {
        spec.validate()?;
        let values = (0..spec.ny)
            .flat_map(|j| (0..spec.nx).map(move |i| (i, j)))
            .map(|(i, j)| {
                config.gauge_field_norm([C64::new(spec.x(i), 0.0), C64::new(spec.y(j), 0.0)])
            })
            .collect();
        Ok(Self { spec, values })
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.spec.nx + i]
    }

    /// `(x, y, |F|)` in storage order.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(k, &v)| {
            (
                self.spec.x(k % self.spec.nx),
                self.spec.y(k / self.spec.nx),
                v,
            )
        })
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `#`-prefixed `key=value` metadata, then `x,y,F` rows.
    pub fn write_csv(&self, mut w: impl Write, metadata: &[(&str, String)]) -> io::Result<()> {
        for (key, value) in metadata {
            writeln!(w, "# {key}={value}")?;
        }
        let s = &self.spec;
        writeln!(
            w,
            "# grid=[{},{}]x[{},{}] nx={} ny={}",
            s.xmin, s.xmax, s.ymin, s.ymax, s.nx, s.ny
        )?;
        writeln!(w, "x,y,F")?;
        for (x, y, v) in self.samples() {
            writeln!(w, "{x},{y},{v}")?;
        }
        Ok(())
    }

    /// Plain `P2`, min-max scaled to 0..=255, first row at `ymax`.
    pub fn write_pgm(&self, mut w: impl Write) -> io::Result<()> {
        let (lo, hi) = (self.min(), self.max());
        let span = if hi > lo { hi - lo } else { 1.0 };
        writeln!(w, "P2")?;
        writeln!(w, "{} {}", self.spec.nx, self.spec.ny)?;
        writeln!(w, "255")?;
        for j in (0..self.spec.ny).rev() {
            let row: Vec<String> = (0..self.spec.nx)
                .map(|i| {
                    ((self.at(i, j) - lo) / span * 255.0)
                        .round()
                        .clamp(0.0, 255.0) as u8
                })
                .map(|v| v.to_string())
                .collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ymh_core::fields::build_abelian;
    use ymh_core::polynomial::Polynomial;

    fn spec(nx: usize, ny: usize) -> GridSpec {
        GridSpec {
            xmin: -1.0,
            xmax: 1.0,
            ymin: 0.0,
            ymax: 2.0,
            nx,
            ny,
        }
    }

    #[test]
    fn validation() {
        assert!(spec(2, 2).validate().is_ok());
        assert_eq!(
            spec(1, 5).validate(),
            Err(GridError::TooFewPoints { nx: 1, ny: 5 })
        );
        let flipped = GridSpec {
            xmin: 1.0,
            xmax: -1.0,
            ..spec(3, 3)
        };
        assert_eq!(flipped.validate(), Err(GridError::BadBounds));
        let nan = GridSpec {
            ymax: f64::NAN,
            ..spec(3, 3)
        };
        assert_eq!(nan.validate(), Err(GridError::BadBounds));
    }

    #[test]
    fn layout_and_renderings() {
        let f = build_abelian(Polynomial::parse("z1", 2).unwrap()).unwrap();
        let mut grid = FieldGrid::evaluate(&f, spec(3, 2)).unwrap();
        assert!(grid.values.iter().all(|v| *v == 0.0));
        grid.values = vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(grid.at(2, 0), 2.0);
        assert_eq!(grid.samples().nth(4), Some((0.0, 2.0, 4.0)));

        let mut csv = Vec::new();
        grid.write_csv(&mut csv, &[("expr", "z1".into())]).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# expr=z1");
        assert_eq!(lines[2], "x,y,F");
        assert_eq!(lines[3], "-1,0,0");
        assert_eq!(lines[8], "1,2,5");

        let mut pgm = Vec::new();
        grid.write_pgm(&mut pgm).unwrap();
        assert_eq!(
            String::from_utf8(pgm).unwrap(),
            "P2\n3 2\n255\n153 204 255\n0 51 102\n"
        );
    }
}
