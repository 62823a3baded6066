use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ShapeError {
    #[error("shape error: expected {expected} columns, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("shape error: {len} values cannot fill a {rows}x{cols} matrix")]
    Length { rows: usize, cols: usize, len: usize },
}

/// Dense row-major matrix of feature vectors, one row per observation.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, ShapeError> {
        if data.len() != rows * cols {
            return Err(ShapeError::Length { rows, cols, len: data.len() });
        }
        Ok(FeatureMatrix { rows, cols, data })
    }

    /// Stacks equally long rows. An empty iterator yields a 0×`cols` matrix.
    pub fn from_rows<I, R>(cols: usize, rows: I) -> Result<Self, ShapeError>
    where
        I: IntoIterator<Item = R>,
        R: AsRef<[f64]>,
    {
        let mut data = Vec::new();
        let mut n = 0;
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(ShapeError::Dimension { expected: cols, found: row.len() });
            }
            data.extend_from_slice(row);
            n += 1;
        }
        Ok(FeatureMatrix { rows: n, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        // chunks_exact on a zero-width matrix would panic
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}
