//! Dense scalar matrices with explicit shape, so that empty blocks (maps
//! into or out of a negative level) compose correctly.

use qvir_arith::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct DMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

impl DMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DMatrix {
            rows,
            cols,
            data: vec![vec![Scalar::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Scalar::one();
        }
        m
    }

    pub fn scalar_identity(n: usize, c: &Scalar) -> Self {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Vec<Scalar>>) -> Self {
        assert_eq!(data.len(), rows);
        assert!(data.iter().all(|r| r.len() == cols));
        DMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Vec<Scalar>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i][j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|e| e.is_zero()))
    }

    pub fn mul(&self, other: &DMatrix) -> DMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = DMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] = out.data[i][j].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &DMatrix) -> DMatrix {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &DMatrix) -> DMatrix {
        self.zip(other, |a, b| a.sub(b))
    }

    fn zip(&self, other: &DMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> DMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| f(a, b)).collect())
            .collect();
        DMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &Scalar) -> DMatrix {
        if c.is_zero() {
            return DMatrix::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|a| a.mul(c)).collect())
            .collect();
        DMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "shape mismatch in matrix-vector product");
        qvir_arith::matrix::mat_vec(&self.data, v)
    }

    /// Stacks blocks with equal column counts.
    pub fn vstack(blocks: &[DMatrix]) -> DMatrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack needs equal widths");
            data.extend(b.data.iter().cloned());
        }
        DMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }
}
