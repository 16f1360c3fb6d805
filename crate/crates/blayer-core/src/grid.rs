//! Uniform one-dimensional grids.
//!
//! Every sampled quantity in this crate lives on a [`Grid1D`]: a strictly
//! increasing, uniformly spaced family of nodes on `[lo, hi]`, optionally
//! with one node marked as the *critical point* (the location `y = a` where
//! the background shear attains its non-degenerate critical value). Marking
//! matters because several constructions are only piecewise smooth across
//! that point and the numerics must know where the kink sits.
//!
//! ## Invariants
//!
//! * nodes are `lo + j·h` with a single spacing `h > 0` (uniformity enforced
//!   to `1e-12·h`, up to rounding of the node coordinates themselves);
//! * a marked critical point coincides with a node to within `1e-12·h`.

use crate::error::{Error, Result};

/// Relative tolerance for "coincides with a node" checks.
const NODE_SNAP_TOL: f64 = 1e-12;

/// A uniform grid on `[lo, hi]` with optional marked critical node.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    nodes: Vec<f64>,
    h: f64,
    lo: f64,
    hi: f64,
    critical_index: Option<usize>,
}

impl Grid1D {
    /// Uniform grid with `n` intervals (`n + 1` nodes), no marked node.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::Config(format!(
                "grid bounds must be finite with hi > lo, got [{lo}, {hi}]"
            )));
        }
        if n < 1 {
            return Err(Error::GridTooSmall { need: 2, have: n + 1 });
        }
        let h = (hi - lo) / n as f64;
        let mut nodes = Vec::with_capacity(n + 1);
        for j in 0..=n {
            nodes.push(lo + j as f64 * h);
        }
        // Pin the right endpoint exactly.
        nodes[n] = hi;
        Ok(Grid1D { nodes, h, lo, hi, critical_index: None })
    }

    /// Uniform grid with `n` intervals and the critical point `a` marked.
    ///
    /// Fails unless `a` lies strictly inside `(lo, hi)` and coincides with a
    /// node to within `1e-12·h`.
    pub fn uniform_marked(lo: f64, hi: f64, n: usize, a: f64) -> Result<Self> {
        let mut grid = Self::uniform(lo, hi, n)?;
        if a <= lo || a >= hi {
            return Err(Error::OutOfDomain(format!(
                "critical point a = {a} outside ({lo}, {hi})"
            )));
        }
        let j = ((a - lo) / grid.h).round() as usize;
        let node = grid.nodes[j.min(n)];
        if (a - node).abs() > NODE_SNAP_TOL * grid.h {
            return Err(Error::OutOfDomain(format!(
                "critical point a = {a} does not coincide with a grid node \
                 (nearest node {node}, spacing {})",
                grid.h
            )));
        }
        grid.critical_index = Some(j.min(n));
        Ok(grid)
    }

    /// Uniform grid covering `[lo, hi]` with spacing at most `target_h`,
    /// adjusted so the critical point `a` lands exactly on a node.
    ///
    /// The spacing is chosen as `(a − lo)/m` for the smallest integer `m`
    /// that keeps it `≤ target_h`; the right end is extended past `hi` by
    /// less than one spacing if needed.
    pub fn covering_marked(lo: f64, hi: f64, target_h: f64, a: f64) -> Result<Self> {
        if !(target_h.is_finite() && target_h > 0.0) {
            return Err(Error::Config(format!("target spacing must be positive, got {target_h}")));
        }
        if a <= lo || a >= hi {
            return Err(Error::OutOfDomain(format!(
                "critical point a = {a} outside ({lo}, {hi})"
            )));
        }
        let m = ((a - lo) / target_h).ceil().max(1.0);
        let h = (a - lo) / m;
        let total = ((hi - lo) / h).ceil() as usize;
        let ia = m as usize;
        let mut nodes = Vec::with_capacity(total + 1);
        for j in 0..=total {
            nodes.push(lo + j as f64 * h);
        }
        nodes[ia] = a; // exact by construction; pin against rounding drift
        let hi_actual = nodes[total];
        Ok(Grid1D { nodes, h, lo, hi: hi_actual, critical_index: Some(ia) })
    }

    /// Reassemble a grid from serialized parts, revalidating every invariant.
    ///
    /// The node array is taken verbatim rather than regenerated as
    /// `lo + j·h`: covering grids pin the critical node at `a` exactly, which
    /// is generally not representable that way, and round trips through disk
    /// must be bit-exact.
    pub fn from_parts(
        lo: f64,
        hi: f64,
        h: f64,
        nodes: Vec<f64>,
        critical_index: Option<usize>,
    ) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && h.is_finite()) || h <= 0.0 || hi <= lo {
            return Err(Error::Config(format!(
                "grid parts must be finite with hi > lo and h > 0, got [{lo}, {hi}], h = {h}"
            )));
        }
        if nodes.first() != Some(&lo) || nodes.last() != Some(&hi) {
            return Err(Error::Config(
                "grid node array does not start at lo / end at hi".into(),
            ));
        }
        if let Some(ia) = critical_index {
            if ia == 0 || ia + 1 >= nodes.len() {
                return Err(Error::Config(format!(
                    "critical index {ia} not strictly interior to {} nodes",
                    nodes.len()
                )));
            }
        }
        let grid = Grid1D { nodes, h, lo, hi, critical_index };
        grid.validate()?;
        Ok(grid)
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True when the grid has no nodes (cannot happen for constructed grids).
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Grid spacing.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Left endpoint.
    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// Right endpoint.
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Node coordinates.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Coordinate of node `j`.
    pub fn node(&self, j: usize) -> f64 {
        self.nodes[j]
    }

    /// Index of the marked critical node, if any.
    pub fn critical_index(&self) -> Option<usize> {
        self.critical_index
    }

    /// Coordinate of the marked critical node, if any.
    pub fn critical_point(&self) -> Option<f64> {
        self.critical_index.map(|j| self.nodes[j])
    }

    /// Logical equality: same span, spacing and node count (used to check
    /// that two profiles can be combined; pointer identity is not required).
    pub fn same_as(&self, other: &Grid1D) -> bool {
        self.nodes.len() == other.nodes.len()
            && (self.lo - other.lo).abs() <= NODE_SNAP_TOL * self.h
            && (self.h - other.h).abs() <= NODE_SNAP_TOL * self.h
    }

    /// Verify the uniformity invariant (`|nodes[j+1] − nodes[j] − h| ≤ 1e-12·h`
    /// plus a few ulps of the node coordinates themselves: nodes are stored as
    /// `lo + j·h`, so adjacent differences wobble at the rounding level of the
    /// *positions*, which exceeds `1e-12·h` once `h` is small enough).
    pub fn validate(&self) -> Result<()> {
        if self.nodes.len() < 2 {
            return Err(Error::GridTooSmall { need: 2, have: self.nodes.len() });
        }
        let ulp_slack = 4.0 * f64::EPSILON * self.hi.abs().max(self.lo.abs());
        for j in 0..self.nodes.len() - 1 {
            let d = self.nodes[j + 1] - self.nodes[j];
            if (d - self.h).abs() > NODE_SNAP_TOL * self.h + ulp_slack {
                return Err(Error::Config(format!(
                    "grid not uniform at node {j}: spacing {d} vs h = {}",
                    self.h
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_spacing_and_endpoints() {
        let g = Grid1D::uniform(0.0, 12.0, 2400).unwrap();
        assert_eq!(g.len(), 2401);
        assert_eq!(g.lo(), 0.0);
        assert_eq!(g.hi(), 12.0);
        assert!((g.h() - 0.005).abs() < 1e-15);
        g.validate().unwrap();
    }

    #[test]
    fn marked_node_must_coincide() {
        let g = Grid1D::uniform_marked(0.0, 12.0, 2400, 2.0).unwrap();
        let ia = g.critical_index().unwrap();
        assert_eq!(g.node(ia), 2.0);
        // a = 2.0017 falls between nodes at h = 0.005
        assert!(Grid1D::uniform_marked(0.0, 12.0, 2400, 2.0017).is_err());
    }

    #[test]
    fn covering_grid_snaps_critical_point() {
        let g = Grid1D::covering_marked(0.0, 12.0, 0.0007, 2.0).unwrap();
        let ia = g.critical_index().unwrap();
        assert_eq!(g.node(ia), 2.0);
        assert!(g.h() <= 0.0007);
        assert!(g.hi() >= 12.0);
        g.validate().unwrap();
    }

    #[test]
    fn degenerate_bounds_rejected() {
        assert!(Grid1D::uniform(1.0, 1.0, 10).is_err());
        assert!(Grid1D::uniform(2.0, 1.0, 10).is_err());
    }
}
