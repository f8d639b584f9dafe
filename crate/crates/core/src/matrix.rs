//! Dense symmetric matrices carrying the discrete bilinear forms.

use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Which bilinear form a matrix represents.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixLabel {
    /// Discrete `E_s` on the hat basis.
    Stiffness { s: f64 },
    /// `∫_Ω u w dx` on the hat basis.
    Mass,
    /// Exterior (κ-weighted) part of `E_s`.
    Exterior { s: f64 },
    /// Any other combination, e.g. `E_{s2} + μ·mass`.
    Combination(String),
}

impl MatrixLabel {
    /// Order of the form, when the form has one.
    pub fn order_s(&self) -> Option<f64> {
        match self {
            MatrixLabel::Stiffness { s } | MatrixLabel::Exterior { s } => Some(*s),
            _ => None,
        }
    }

    fn tag(&self) -> String {
        match self {
            MatrixLabel::Stiffness { .. } => "stiffness".into(),
            MatrixLabel::Mass => "mass".into(),
            MatrixLabel::Exterior { .. } => "exterior".into(),
            MatrixLabel::Combination(name) => name.replace(',', ";"),
        }
    }
}

impl fmt::Display for MatrixLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixLabel::Stiffness { s } => write!(f, "E_{s}"),
            MatrixLabel::Mass => write!(f, "mass"),
            MatrixLabel::Exterior { s } => write!(f, "exterior_{s}"),
            MatrixLabel::Combination(name) => write!(f, "{name}"),
        }
    }
}

/// Row-major dense symmetric matrix. `get(i, j)` and `get(j, i)` are the same
/// stored bits: every constructor fills the upper triangle and mirrors it.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    data: Vec<f64>,
    label: MatrixLabel,
}

impl SymmetricMatrix {
    /// Builds the matrix from `entry(i, j)` evaluated for `i ≤ j` only.
    pub fn from_upper_fn<F>(order: usize, label: MatrixLabel, entry: F) -> Self
    where
        F: Fn(usize, usize) -> f64 + Sync + Send,
    {
        Self::from_upper_fn_with(Exec::default(), order, label, entry)
    }

    pub fn from_upper_fn_with<F>(exec: Exec, order: usize, label: MatrixLabel, entry: F) -> Self
    where
        F: Fn(usize, usize) -> f64 + Sync + Send,
    {
        let upper: Vec<Vec<f64>> = par::map_range(exec, order, |i| (i..order).map(|j| entry(i, j)).collect());
        let mut data = vec![0.0; order * order];
        for (i, row) in upper.iter().enumerate() {
            for (off, &v) in row.iter().enumerate() {
                let j = i + off;
                data[i * order + j] = v;
                data[j * order + i] = v;
            }
        }
        Self { order, data, label }
    }

    /// Wraps a row-major buffer; fails unless it is exactly symmetric.
    pub fn from_row_major(order: usize, data: Vec<f64>, label: MatrixLabel) -> Result<Self> {
        if data.len() != order * order {
            return Err(Error::precondition(format!(
                "buffer of length {} cannot hold a {order}x{order} matrix",
                data.len()
            )));
        }
        for i in 0..order {
            for j in (i + 1)..order {
                if data[i * order + j].to_bits() != data[j * order + i].to_bits() {
                    return Err(Error::precondition(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(Self { order, data, label })
    }

    pub fn identity(order: usize) -> Self {
        Self::from_upper_fn_with(Exec::Sequential, order, MatrixLabel::Combination("identity".into()), |i, j| {
            if i == j {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_upper_fn_with(
            Exec::Sequential,
            values.len(),
            MatrixLabel::Combination("diagonal".into()),
            |i, j| if i == j { values[i] } else { 0.0 },
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &MatrixLabel {
        &self.label
    }

    pub fn with_label(mut self, label: MatrixLabel) -> Self {
        self.label = label;
        self
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs_diagonal(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i).abs()).fold(0.0, f64::max)
    }

    /// Frobenius norm, used as the scale in residual tolerances.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.order, "dimension mismatch in matvec");
        (0..self.order).map(|i| dot(self.row(i), x)).collect()
    }

    /// `xᵀ M y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.matvec(y))
    }

    /// `xᵀ M x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.bilinear(x, x)
    }

    /// `alpha·self + beta·other` (same order); symmetry is preserved bit-for-bit.
    pub fn combine(&self, alpha: f64, other: &SymmetricMatrix, beta: f64, label: MatrixLabel) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::precondition(format!(
                "cannot combine matrices of order {} and {}",
                self.order, other.order
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(Self { order: self.order, data, label })
    }

    /// CSV export: a line `n,s,label` (s empty when the form has no order),
    /// then `n` rows of `n` values with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let s = self.label.order_s().map(fmt17).unwrap_or_default();
        writeln!(w, "{},{},{}", self.order, s, self.label.tag())?;
        for i in 0..self.order {
            let line: Vec<String> = self.row(i).iter().map(|&v| fmt17(v)).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    /// Reads the format written by [`SymmetricMatrix::write_csv`].
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| Error::Config("empty matrix file".into()))??;
        let fields: Vec<&str> = header.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Config(format!("bad matrix header '{header}'")));
        }
        let order: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad order in header '{header}'")))?;
        let s: Option<f64> = match fields[1].trim() {
            "" => None,
            t => Some(t.parse().map_err(|_| Error::Config(format!("bad order s in '{header}'")))?),
        };
        let label = match (fields[2].trim(), s) {
            ("stiffness", Some(s)) => MatrixLabel::Stiffness { s },
            ("exterior", Some(s)) => MatrixLabel::Exterior { s },
            ("mass", _) => MatrixLabel::Mass,
            (other, _) => MatrixLabel::Combination(other.to_string()),
        };
        let mut data = Vec::with_capacity(order * order);
        for (row, line) in lines.take(order).enumerate() {
            let line = line?;
            let before = data.len();
            for tok in line.split(',') {
                data.push(
                    tok.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Config(format!("bad value '{tok}' in row {row}")))?,
                );
            }
            if data.len() - before != order {
                return Err(Error::Config(format!("row {row} has {} values", data.len() - before)));
            }
        }
        Self::from_row_major(order, data, label)
    }
}

/// Decimal with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

#[inline]
pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_fill_is_mirrored() {
        let m = SymmetricMatrix::from_upper_fn(4, MatrixLabel::Mass, |i, j| (i * 10 + j) as f64 + 0.1);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.get(i, j).to_bits(), m.get(j, i).to_bits());
            }
        }
        assert_eq!(m.get(3, 1), 13.1);
    }

    #[test]
    fn asymmetric_buffer_rejected() {
        let err = SymmetricMatrix::from_row_major(2, vec![1.0, 2.0, 2.000001, 1.0], MatrixLabel::Mass);
        assert!(err.is_err());
        assert!(SymmetricMatrix::from_row_major(2, vec![1.0; 3], MatrixLabel::Mass).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let m = SymmetricMatrix::from_upper_fn(3, MatrixLabel::Stiffness { s: 0.4 }, |i, j| {
            1.0 / (1.0 + i as f64 + j as f64) + if i == j { std::f64::consts::PI } else { 0.0 }
        });
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("3,4.0000000000000002e-1,stiffness\n"));
        let back = SymmetricMatrix::read_csv(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn combine_and_forms() {
        let a = SymmetricMatrix::diagonal(&[1.0, 2.0]);
        let b = SymmetricMatrix::identity(2);
        let c = a.combine(1.0, &b, 3.0, MatrixLabel::Combination("a+3b".into())).unwrap();
        assert_eq!(c.get(1, 1), 5.0);
        assert_eq!(c.quadratic_form(&[1.0, 1.0]), 9.0);
        assert!(a.combine(1.0, &SymmetricMatrix::identity(3), 1.0, MatrixLabel::Mass).is_err());
    }
}
