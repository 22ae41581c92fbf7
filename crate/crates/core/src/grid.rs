//! Axis-aligned sampling grids on boxes inside the upper half-space
//! {x¹ > 0}, with raveled node indexing and face enumeration.

use crate::{Error, Result};

/// A box [min, max]ⁿ ⊂ {x¹ > 0} sampled with uniform step h along each axis.
#[derive(Debug, Clone)]
pub struct GridDomain {
    pub n: usize,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    pub h: f64,
    /// number of nodes per axis (cells + 1)
    pub dims: Vec<usize>,
}

/// A boundary face of the box: `axis` + which end, with its outward
/// Euclidean unit normal available via [`GridDomain::outward_normal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Face {
    pub axis: usize,
    /// false = min end, true = max end
    pub upper: bool,
}

impl GridDomain {
    pub fn new(min: Vec<f64>, max: Vec<f64>, h: f64) -> Result<Self> {
        let n = min.len();
        if n == 0 || max.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n.max(1),
                got: max.len(),
            });
        }
        if !(h > 0.0) {
            return Err(Error::InvalidInput(format!("step h = {h} must be positive")));
        }
        if !(min[0] > 0.0) {
            return Err(Error::Domain(format!(
                "box must lie in the upper half-space: x¹_min = {}",
                min[0]
            )));
        }
        let mut dims = Vec::with_capacity(n);
        for i in 0..n {
            if !(max[i] > min[i]) {
                return Err(Error::InvalidInput(format!("empty extent on axis {i}")));
            }
            let cells = (max[i] - min[i]) / h;
            let rounded = cells.round();
            if (cells - rounded).abs() > 1e-9 * cells.max(1.0) || rounded < 1.0 {
                return Err(Error::InvalidInput(format!(
                    "extent on axis {i} is not an integer number of steps"
                )));
            }
            dims.push(rounded as usize + 1);
        }
        Ok(Self { n, min, max, h, dims })
    }

    pub fn num_points(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn point(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(a, &i)| self.min[a] + i as f64 * self.h)
            .collect()
    }

    /// Row-major ravel: the last axis varies fastest.
    pub fn ravel(&self, idx: &[usize]) -> usize {
        let mut r = 0;
        for (a, &i) in idx.iter().enumerate() {
            debug_assert!(i < self.dims[a]);
            r = r * self.dims[a] + i;
        }
        r
    }

    pub fn unravel(&self, mut r: usize) -> Vec<usize> {
        let mut idx = vec![0; self.n];
        for a in (0..self.n).rev() {
            idx[a] = r % self.dims[a];
            r /= self.dims[a];
        }
        idx
    }

    /// All multi-indices, in ravel order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.num_points()).map(|r| self.unravel(r))
    }

    /// Node lies strictly inside along every axis (central stencils valid).
    pub fn is_interior(&self, idx: &[usize]) -> bool {
        idx.iter()
            .zip(&self.dims)
            .all(|(&i, &d)| i >= 1 && i + 1 < d)
    }

    /// Multi-indices of the nodes of a boundary face.
    pub fn face_indices(&self, face: Face) -> Vec<Vec<usize>> {
        let fixed = if face.upper { self.dims[face.axis] - 1 } else { 0 };
        self.indices()
            .filter(|idx| idx[face.axis] == fixed)
            .collect()
    }

    /// Outward Euclidean unit normal of a face.
    pub fn outward_normal(&self, face: Face) -> Vec<f64> {
        let mut v = vec![0.0; self.n];
        v[face.axis] = if face.upper { 1.0 } else { -1.0 };
        v
    }

    /// Index of the node nearest to a coordinate point inside the box.
    pub fn nearest_index(&self, x: &[f64]) -> Result<Vec<usize>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut idx = Vec::with_capacity(self.n);
        for a in 0..self.n {
            if x[a] < self.min[a] - 1e-9 || x[a] > self.max[a] + 1e-9 {
                return Err(Error::Domain(format!("point outside the box on axis {a}")));
            }
            let i = ((x[a] - self.min[a]) / self.h).round() as isize;
            idx.push(i.clamp(0, self.dims[a] as isize - 1) as usize);
        }
        Ok(idx)
    }
}
