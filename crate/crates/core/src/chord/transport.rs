//! Numeric continuation of a fiber point along a straight segment of target
//! points.
//!
//! A fiber point over `p` is encoded by its ambient coordinates `x` (the
//! matching point on the second variety is `y = 2p - x`).  As `p` moves along
//! `p(t) = (1 - t) p0 + t p1`, the pair `(x, y)` follows the flow defined by
//! keeping `f(x) = 0`, `g(y) = 0`, `(x + y) / 2 = p(t)` and the slicing value
//! `L(x)` constant.  Integration is fourth-order Runge-Kutta with a Newton
//! projection back onto the constraint set after every step.  The segment is
//! rejected up front if it passes too close to the branch-value locus, where
//! the flow matrix degenerates.

use super::{complex_point, ChordAnalyzer, ChordError};
use crate::poly::{rational_to_f64, Polynomial, Rational};
use num_complex::Complex64;

/// Tolerance for the start point to count as lying on the fiber.
const START_RESIDUAL: f64 = 1e-8;
/// Minimal allowed residual of the moving target point against the
/// branch-value locus anywhere on the segment.
const SEGMENT_CLEARANCE: f64 = 1e-4;
/// Constraint residual above which the continuation is declared lost.
const BLOW_UP: f64 = 1e-6;
/// Newton projection sweeps after each integration step.
const NEWTON_SWEEPS: usize = 3;

/// Outcome of one continuation run.
#[derive(Debug, Clone)]
pub struct TransportResult {
    /// Ambient coordinates of the transported fiber point over the end point.
    pub end: Vec<Complex64>,
    /// Largest constraint residual observed after any projection step.
    pub max_step_residual: f64,
    /// |L(end) - L(start)|: drift of the conserved slicing value.
    pub slice_drift: f64,
    /// Final residual of the midpoint constraint at the end point.
    pub end_residual: f64,
}

struct Flow {
    m: usize,
    f: Vec<Polynomial>,
    g: Vec<Polynomial>,
    df: Vec<Vec<Polynomial>>,
    dg: Vec<Vec<Polynomial>>,
    l_coeffs: Vec<f64>,
    p0: Vec<Complex64>,
    direction: Vec<Complex64>,
    l0: Complex64,
}

impl Flow {
    /// The constraint matrix at state `z = (x, y)`: rows are the gradients of
    /// `f` (x-block), the gradients of `g` (y-block), the midpoint rows
    /// `(I/2 | I/2)` and the slicing row `(dL | 0)`.
    fn matrix(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        let m = self.m;
        let (x, y) = z.split_at(m);
        let mut rows = Vec::with_capacity(2 * m);
        for grad in &self.df {
            let mut row = vec![Complex64::new(0.0, 0.0); 2 * m];
            for (k, d) in grad.iter().enumerate() {
                row[k] = d.evaluate_complex(x).expect("x has ambient dimension");
            }
            rows.push(row);
        }
        for grad in &self.dg {
            let mut row = vec![Complex64::new(0.0, 0.0); 2 * m];
            for (k, d) in grad.iter().enumerate() {
                row[m + k] = d.evaluate_complex(y).expect("y has ambient dimension");
            }
            rows.push(row);
        }
        for k in 0..m {
            let mut row = vec![Complex64::new(0.0, 0.0); 2 * m];
            row[k] = Complex64::new(0.5, 0.0);
            row[m + k] = Complex64::new(0.5, 0.0);
            rows.push(row);
        }
        let mut row = vec![Complex64::new(0.0, 0.0); 2 * m];
        for k in 0..m {
            row[k] = Complex64::new(self.l_coeffs[k], 0.0);
        }
        rows.push(row);
        rows
    }

    /// Constraint values at state `z` and time `t`; zero on the tracked path.
    fn residual_vector(&self, z: &[Complex64], t: f64) -> Vec<Complex64> {
        let m = self.m;
        let (x, y) = z.split_at(m);
        let mut out = Vec::with_capacity(2 * m);
        for eq in &self.f {
            out.push(eq.evaluate_complex(x).expect("x has ambient dimension"));
        }
        for eq in &self.g {
            out.push(eq.evaluate_complex(y).expect("y has ambient dimension"));
        }
        for k in 0..m {
            let target = self.p0[k] + self.direction[k] * Complex64::new(t, 0.0);
            out.push((x[k] + y[k]) * Complex64::new(0.5, 0.0) - target);
        }
        let mut l = Complex64::new(0.0, 0.0);
        for k in 0..m {
            l += Complex64::new(self.l_coeffs[k], 0.0) * x[k];
        }
        out.push(l - self.l0);
        out
    }

    fn max_residual(&self, z: &[Complex64], t: f64) -> f64 {
        self.residual_vector(z, t)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Velocity of the constrained state: solves `M(z) dz = rhs` where the
    /// only moving constraint is the midpoint block, whose rows sit right
    /// after the two gradient blocks.
    fn velocity(&self, z: &[Complex64], t: f64) -> Result<Vec<Complex64>, ChordError> {
        let matrix = self.matrix(z);
        let m = self.m;
        let mut rhs = vec![Complex64::new(0.0, 0.0); 2 * m];
        let offset = self.df.len() + self.dg.len();
        for k in 0..m {
            rhs[offset + k] = self.direction[k];
        }
        solve_linear(matrix, rhs).ok_or(ChordError::SingularTransport { t })
    }

    /// One Newton sweep pulling `z` back onto the constraint set at time `t`.
    fn project(&self, z: &mut Vec<Complex64>, t: f64) -> Result<(), ChordError> {
        for _ in 0..NEWTON_SWEEPS {
            let residual = self.residual_vector(z, t);
            let matrix = self.matrix(z);
            let rhs: Vec<Complex64> = residual.iter().map(|&r| -r).collect();
            let delta = solve_linear(matrix, rhs).ok_or(ChordError::SingularTransport { t })?;
            for (zk, dk) in z.iter_mut().zip(&delta) {
                *zk += dk;
            }
        }
        Ok(())
    }
}

/// Continues the fiber point `start` (ambient coordinates over `p0`) along
/// the straight segment from `p0` to `p1` in `steps` Runge-Kutta steps.
pub fn transport_fiber_point(
    analyzer: &ChordAnalyzer,
    p0: &[Rational],
    p1: &[Rational],
    start: &[Complex64],
    steps: usize,
) -> Result<TransportResult, ChordError> {
    assert!(steps >= 1);
    let problem = analyzer.problem();
    let m = problem.ambient_dimension();
    assert_eq!(p0.len(), m);
    assert_eq!(p1.len(), m);
    assert_eq!(start.len(), m);

    let p0_c = complex_point(p0);
    let p1_c = complex_point(p1);
    let direction: Vec<Complex64> = (0..m).map(|k| p1_c[k] - p0_c[k]).collect();

    // Segment clearance: the continuation matrix degenerates on the
    // branch-value locus, so refuse segments that graze it.
    let samples = steps.max(64);
    for k in 0..=samples {
        let t = k as f64 / samples as f64;
        let pt: Vec<Complex64> = (0..m)
            .map(|j| p0_c[j] + direction[j] * Complex64::new(t, 0.0))
            .collect();
        let residual = analyzer.branch_locus_residual(&pt);
        if residual < SEGMENT_CLEARANCE {
            return Err(ChordError::PathHitsBranchLocus { t, residual });
        }
    }

    let f = problem.x().equations().to_vec();
    let g = problem.y().equations().to_vec();
    let df: Vec<Vec<Polynomial>> = f
        .iter()
        .map(|eq| (0..m).map(|k| eq.partial_derivative(k)).collect())
        .collect();
    let dg: Vec<Vec<Polynomial>> = g
        .iter()
        .map(|eq| (0..m).map(|k| eq.partial_derivative(k)).collect())
        .collect();
    let l_coeffs: Vec<f64> = analyzer
        .slicing_form()
        .coefficients()
        .iter()
        .map(rational_to_f64)
        .collect();

    // Initial state: x = start, y = 2 p0 - x.
    let mut z: Vec<Complex64> = Vec::with_capacity(2 * m);
    z.extend_from_slice(start);
    for k in 0..m {
        z.push(p0_c[k] + p0_c[k] - start[k]);
    }
    let mut l0 = Complex64::new(0.0, 0.0);
    for k in 0..m {
        l0 += Complex64::new(l_coeffs[k], 0.0) * start[k];
    }

    let flow = Flow {
        m,
        f,
        g,
        df,
        dg,
        l_coeffs,
        p0: p0_c,
        direction,
        l0,
    };

    let start_residual = flow.max_residual(&z, 0.0);
    if start_residual > START_RESIDUAL {
        return Err(ChordError::BadStartPoint { residual: start_residual });
    }

    let h = 1.0 / steps as f64;
    let mut max_step_residual = start_residual;
    for step in 0..steps {
        let t = step as f64 * h;
        let k1 = flow.velocity(&z, t)?;
        let z2 = shifted(&z, &k1, h / 2.0);
        let k2 = flow.velocity(&z2, t + h / 2.0)?;
        let z3 = shifted(&z, &k2, h / 2.0);
        let k3 = flow.velocity(&z3, t + h / 2.0)?;
        let z4 = shifted(&z, &k3, h);
        let k4 = flow.velocity(&z4, t + h)?;
        for i in 0..z.len() {
            z[i] += (k1[i] + (k2[i] + k3[i]) * Complex64::new(2.0, 0.0) + k4[i])
                * Complex64::new(h / 6.0, 0.0);
        }
        let t_next = (step + 1) as f64 * h;
        flow.project(&mut z, t_next)?;
        let residual = flow.max_residual(&z, t_next);
        max_step_residual = max_step_residual.max(residual);
        if residual > BLOW_UP {
            return Err(ChordError::ResidualBlowUp { t: t_next, residual });
        }
    }

    let end: Vec<Complex64> = z[..m].to_vec();
    let mut l_end = Complex64::new(0.0, 0.0);
    for k in 0..m {
        l_end += Complex64::new(flow.l_coeffs[k], 0.0) * end[k];
    }
    let end_residual = flow.max_residual(&z, 1.0);
    Ok(TransportResult {
        end,
        max_step_residual,
        slice_drift: (l_end - l0).norm(),
        end_residual,
    })
}

fn shifted(z: &[Complex64], dz: &[Complex64], h: f64) -> Vec<Complex64> {
    z.iter()
        .zip(dz)
        .map(|(&zk, &dk)| zk + dk * Complex64::new(h, 0.0))
        .collect()
}

/// Dense complex linear solve with partial pivoting; `None` when the matrix
/// is numerically singular.
fn solve_linear(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    debug_assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .norm()
                    .partial_cmp(&a[j][col].norm())
                    .expect("norms are not NaN")
            })
            .expect("nonempty range");
        if a[pivot_row][col].norm() < 1e-13 * scale {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col..n {
                let sub = factor * a[col][k];
                a[row][k] -= sub;
            }
            let sub = factor * b[col];
            b[row] -= sub;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_solver_inverts_a_small_system() {
        let a = vec![
            vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(3.0, 1.0)],
        ];
        let b = vec![Complex64::new(3.0, 0.0), Complex64::new(4.0, 1.0)];
        let x = solve_linear(a.clone(), b.clone()).expect("nonsingular");
        for i in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..2 {
                acc += a[i][j] * x[j];
            }
            assert!((acc - b[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn linear_solver_rejects_singular_matrices() {
        let a = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)],
            vec![Complex64::new(2.0, 0.0), Complex64::new(4.0, 0.0)],
        ];
        let b = vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)];
        assert!(solve_linear(a, b).is_none());
    }
}
