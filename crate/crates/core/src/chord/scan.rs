//! Grid scans of the fiber Euler characteristic over a line or plane of
//! target points.
//!
//! Each grid cell is analyzed independently (in parallel); afterwards cells
//! adjacent to a sign change of the branch-value hypersurface are marked, so
//! crossings that fall between lattice points still show up, and jumps of the
//! Euler characteristic between neighboring generic cells are collected.

use super::{ChordAnalyzer, ChordError, FiberStatus};
use crate::poly::{rational_to_f64, Rational};
use crate::seed::subseed;
use num_traits::Zero;
use rayon::prelude::*;

/// One scan axis: vary `base[coordinate]` from `start` to `end` over `cells`
/// evenly spaced lattice values (endpoints included).
#[derive(Debug, Clone)]
pub struct GridAxis {
    pub coordinate: usize,
    pub start: Rational,
    pub end: Rational,
    pub cells: usize,
}

impl GridAxis {
    /// The exact lattice value at index `i`.
    fn value(&self, i: usize) -> Rational {
        if self.cells <= 1 {
            return self.start.clone();
        }
        let span = &self.end - &self.start;
        let step = span / Rational::from_integer((self.cells - 1).into());
        &self.start + &(step * Rational::from_integer(i.into()))
    }
}

/// A 1- or 2-axis lattice of target points around a base point.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub base: Vec<Rational>,
    pub axes: Vec<GridAxis>,
}

/// Per-cell scan outcome. `status` is one of `generic`, `on_k0_closure`,
/// `k0_crossing` (generic, but the branch-value hypersurface changes sign
/// towards a neighboring cell) or `failed`.
#[derive(Debug, Clone)]
pub struct ScanCell {
    /// Lattice index, one entry per axis.
    pub index: Vec<usize>,
    pub point: Vec<Rational>,
    pub euler: Option<i64>,
    pub status: String,
}

/// Scan outcome: cells in row-major axis order plus derived markings.
#[derive(Debug, Clone)]
pub struct ScanResult {
    pub axes: Vec<GridAxis>,
    pub cells: Vec<ScanCell>,
    /// Linear indices of cells on or next to the branch-value hypersurface.
    pub locus_cells: Vec<usize>,
    /// Pairs of adjacent generic cells whose Euler characteristics differ.
    pub jump_pairs: Vec<(usize, usize)>,
}

impl ScanResult {
    /// Lattice dimensions `(n1, n2)`; `n2` is 1 for one-axis scans.
    pub fn axis_counts(&self) -> (usize, usize) {
        let n1 = self.axes[0].cells;
        let n2 = self.axes.get(1).map_or(1, |a| a.cells);
        (n1, n2)
    }

    /// Renders the scan as CSV with the fixed header
    /// `axis1,axis2,chi,status`; the `axis2` and `chi` fields are left empty
    /// for one-axis scans and non-generic cells respectively.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("axis1,axis2,chi,status\n");
        for cell in &self.cells {
            let a1 = rational_to_f64(&self.axes[0].value(cell.index[0]));
            let a2 = self
                .axes
                .get(1)
                .map(|axis| rational_to_f64(&axis.value(cell.index[1])).to_string())
                .unwrap_or_default();
            let chi = cell.euler.map(|c| c.to_string()).unwrap_or_default();
            out.push_str(&format!("{a1},{a2},{chi},{}\n", cell.status));
        }
        out
    }
}

/// Runs the per-cell fiber analysis over the whole grid.
pub fn scan(analyzer: &ChordAnalyzer, grid: &GridSpec, seed: u64) -> Result<ScanResult, ChordError> {
    let m = analyzer.problem().ambient_dimension();
    if grid.base.len() != m {
        return Err(ChordError::InvalidGrid(format!(
            "base point has {} coordinates, expected {m}",
            grid.base.len()
        )));
    }
    if grid.axes.is_empty() || grid.axes.len() > 2 {
        return Err(ChordError::InvalidGrid("a grid needs one or two axes".into()));
    }
    for axis in &grid.axes {
        if axis.coordinate >= m {
            return Err(ChordError::InvalidGrid(format!(
                "axis coordinate {} out of range (ambient dimension {m})",
                axis.coordinate
            )));
        }
        if axis.cells == 0 {
            return Err(ChordError::InvalidGrid("axis needs at least one cell".into()));
        }
        if axis.cells > 1 && axis.start == axis.end {
            return Err(ChordError::InvalidGrid(
                "axis endpoints coincide but more than one cell was requested".into(),
            ));
        }
    }
    if grid.axes.len() == 2 && grid.axes[0].coordinate == grid.axes[1].coordinate {
        return Err(ChordError::InvalidGrid("the two axes vary the same coordinate".into()));
    }

    let n1 = grid.axes[0].cells;
    let n2 = grid.axes.get(1).map_or(1, |a| a.cells);

    // Lattice points in row-major order.
    let mut tasks: Vec<(Vec<usize>, Vec<Rational>)> = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            let mut point = grid.base.clone();
            point[grid.axes[0].coordinate] = grid.axes[0].value(i);
            let index = if let Some(axis2) = grid.axes.get(1) {
                point[axis2.coordinate] = axis2.value(j);
                vec![i, j]
            } else {
                vec![i]
            };
            tasks.push((index, point));
        }
    }

    let mut cells: Vec<ScanCell> = tasks
        .into_par_iter()
        .enumerate()
        .map(|(linear, (index, point))| {
            let cell_seed = subseed(seed, linear as u64);
            match analyzer.fiber_report_with_l(&point, analyzer.slicing_form(), cell_seed) {
                Ok(report) => ScanCell {
                    index,
                    point,
                    euler: report.euler,
                    status: report.status.to_string(),
                },
                Err(_) => ScanCell {
                    index,
                    point,
                    euler: None,
                    status: "failed".into(),
                },
            }
        })
        .collect();

    // Sign of the branch-value hypersurface at each lattice point: the locus
    // can cross between lattice points, so neighbors across a sign change are
    // marked even though each is individually generic.
    let signs: Vec<Option<i8>> = cells
        .iter()
        .map(|cell| locus_sign(analyzer, &cell.point))
        .collect();
    let mut neighbor_pairs = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            let here = i * n2 + j;
            if i + 1 < n1 {
                neighbor_pairs.push((here, (i + 1) * n2 + j));
            }
            if j + 1 < n2 {
                neighbor_pairs.push((here, i * n2 + (j + 1)));
            }
        }
    }
    let mut crossing = vec![false; cells.len()];
    for &(here, there) in &neighbor_pairs {
        if let (Some(a), Some(b)) = (signs[here], signs[there]) {
            if a * b < 0 {
                crossing[here] = true;
                crossing[there] = true;
            }
        }
    }
    let generic = FiberStatus::Generic.to_string();
    let mut locus_cells = Vec::new();
    for (k, cell) in cells.iter_mut().enumerate() {
        if crossing[k] && cell.status == generic {
            cell.status = "k0_crossing".into();
        }
        if cell.status == "k0_crossing" || cell.status == FiberStatus::OnBranchLocus.to_string() {
            locus_cells.push(k);
        }
    }

    // Euler jumps between two cells that still look generic after locus
    // marking: such pairs are the scan's findings, pointing at walls not
    // explained by the branch-value hypersurface.
    let mut jump_pairs = Vec::new();
    for &(here, there) in &neighbor_pairs {
        if cells[here].status == generic && cells[there].status == generic {
            if let (Some(x), Some(y)) = (cells[here].euler, cells[there].euler) {
                if x != y {
                    jump_pairs.push((here, there));
                }
            }
        }
    }

    Ok(ScanResult { axes: grid.axes.clone(), cells, locus_cells, jump_pairs })
}

/// Sign of the product of the branch-value generators at a rational point;
/// `None` when the product is exactly zero (the point lies on the locus).
fn locus_sign(analyzer: &ChordAnalyzer, point: &[Rational]) -> Option<i8> {
    let mut sign = 1i8;
    for g in analyzer.branch_value_locus().generators() {
        let v = g.evaluate_rational(point).expect("target point has full dimension");
        if v.is_zero() {
            return None;
        }
        if v < Rational::zero() {
            sign = -sign;
        }
    }
    Some(sign)
}
