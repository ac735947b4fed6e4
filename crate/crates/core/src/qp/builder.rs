use nalgebra::{DMatrix, DVector};

use super::ConvexProgram;

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<(usize, f64)>,
    rhs: f64,
    tag: Option<String>,
}

/// Incremental, index-based construction of a [`ConvexProgram`].
#[derive(Debug, Default, Clone)]
pub struct ProgramBuilder {
    linear: Vec<f64>,
    lb: Vec<f64>,
    ub: Vec<f64>,
    quad: Vec<(usize, usize, f64)>,
    constant: f64,
    eq: Vec<Row>,
    le: Vec<Row>,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn n(&self) -> usize {
        self.linear.len()
    }

    pub fn eq_rows(&self) -> usize {
        self.eq.len()
    }

    pub fn le_rows(&self) -> usize {
        self.le.len()
    }

    /// Adds a variable with bounds and linear cost, returning its index.
    pub fn add_var(&mut self, lb: f64, ub: f64, cost: f64) -> usize {
        self.linear.push(cost);
        self.lb.push(lb);
        self.ub.push(ub);
        self.linear.len() - 1
    }

    pub fn bounds(&self, i: usize) -> (f64, f64) {
        (self.lb[i], self.ub[i])
    }

    pub fn set_bounds(&mut self, i: usize, lb: f64, ub: f64) {
        self.lb[i] = lb;
        self.ub[i] = ub;
    }

    pub fn add_cost(&mut self, i: usize, c: f64) {
        self.linear[i] += c;
    }

    pub fn cost(&self, i: usize) -> f64 {
        self.linear[i]
    }

    /// Adds `½ w x_i²` to the objective.
    pub fn add_quad_diag(&mut self, i: usize, w: f64) {
        self.quad.push((i, i, w));
    }

    pub fn add_constant(&mut self, c: f64) {
        self.constant += c;
    }

    pub fn add_eq(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64, tag: Option<String>) -> usize {
        self.eq.push(Row { coeffs, rhs, tag });
        self.eq.len() - 1
    }

    /// Adds `Σ coeffs·x <= rhs`.
    pub fn add_le(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) -> usize {
        self.le.push(Row {
            coeffs,
            rhs,
            tag: None,
        });
        self.le.len() - 1
    }

    pub fn build(&self) -> ConvexProgram {
        let n = self.n();
        let mut quad = DMatrix::zeros(n, n);
        for &(i, j, w) in &self.quad {
            quad[(i, j)] += w;
            if i != j {
                quad[(j, i)] += w;
            }
        }
        let dense = |rows: &[Row]| {
            let mut m = DMatrix::zeros(rows.len(), n);
            for (r, row) in rows.iter().enumerate() {
                for &(j, v) in &row.coeffs {
                    m[(r, j)] += v;
                }
            }
            (m, DVector::from_iterator(rows.len(), rows.iter().map(|r| r.rhs)))
        };
        let (a_eq, b_eq) = dense(&self.eq);
        let (g, h) = dense(&self.le);
        ConvexProgram {
            quad,
            linear: DVector::from_column_slice(&self.linear),
            constant_cost: self.constant,
            a_eq,
            b_eq,
            g,
            h,
            lb: DVector::from_column_slice(&self.lb),
            ub: DVector::from_column_slice(&self.ub),
            eq_tags: self.eq.iter().map(|r| r.tag.clone()).collect(),
        }
    }
}
