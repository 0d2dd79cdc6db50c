use crate::error::{Error, Result};
use crate::lattice::Region;

/// Partition ξ of a region's boundary vertices. Vertices sharing a block are
/// wired together when clusters are counted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCondition {
    blocks: Vec<Vec<usize>>,
}

impl BoundaryCondition {
    /// Every boundary vertex in its own block.
    pub fn free(region: &Region) -> Self {
        Self { blocks: region.boundary().iter().map(|&v| vec![v]).collect() }
    }

    /// All boundary vertices in one block.
    pub fn wired(region: &Region) -> Self {
        if region.boundary().is_empty() {
            return Self { blocks: Vec::new() };
        }
        Self { blocks: vec![region.boundary().to_vec()] }
    }

    /// Custom partition; blocks must be disjoint and cover the boundary
    /// exactly. Boundary vertices missing from `blocks` become singletons.
    pub fn custom(region: &Region, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; region.num_vertices()];
        let mut is_boundary = vec![false; region.num_vertices()];
        for &v in region.boundary() {
            is_boundary[v] = true;
        }
        let mut out = Vec::new();
        for mut block in blocks {
            block.sort_unstable();
            for &v in &block {
                if v >= region.num_vertices() || !is_boundary[v] {
                    return Err(Error::InvalidBoundary(format!("vertex {v} is not a boundary vertex")));
                }
                if seen[v] {
                    return Err(Error::InvalidBoundary(format!("vertex {v} appears in two blocks")));
                }
                seen[v] = true;
            }
            if !block.is_empty() {
                out.push(block);
            }
        }
        for &v in region.boundary() {
            if !seen[v] {
                out.push(vec![v]);
            }
        }
        out.sort();
        Ok(Self { blocks: out })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Blocks with at least two vertices; only these affect cluster counts.
    pub fn wirings(&self) -> impl Iterator<Item = &[usize]> {
        self.blocks.iter().filter(|b| b.len() > 1).map(|b| b.as_slice())
    }

    pub fn is_free(&self) -> bool {
        self.blocks.iter().all(|b| b.len() <= 1)
    }

    /// True iff every block of `other` lies inside a block of `self`.
    pub fn is_coarser_or_equal(&self, other: &BoundaryCondition) -> bool {
        let mut block_of = std::collections::HashMap::new();
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                block_of.insert(v, i);
            }
        }
        other.blocks.iter().all(|b| {
            let first = b.first().and_then(|v| block_of.get(v));
            first.is_some() && b.iter().all(|v| block_of.get(v) == first)
        })
    }

    /// Checks that the partition covers exactly `region`'s boundary.
    pub fn validate(&self, region: &Region) -> Result<()> {
        let mut all: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        if all != region.boundary() {
            return Err(Error::InvalidBoundary("blocks do not cover the region boundary".into()));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        if self.is_free() {
            "free".into()
        } else if self.blocks.len() == 1 {
            "wired".into()
        } else {
            format!("custom{}", self.blocks.len())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_region, LatticeSpec};

    #[test]
    fn free_and_wired_bracket_every_partition() {
        let r = build_region(&LatticeSpec::Square, 0.0, 2.0, 0.0, 1.0).unwrap();
        let free = BoundaryCondition::free(&r);
        let wired = BoundaryCondition::wired(&r);
        let mid = BoundaryCondition::custom(&r, vec![vec![0, 5], vec![1, 2]]).unwrap();
        for bc in [&free, &wired, &mid] {
            bc.validate(&r).unwrap();
            assert!(bc.is_coarser_or_equal(&free));
            assert!(wired.is_coarser_or_equal(bc));
        }
        assert!(!free.is_coarser_or_equal(&mid));
        assert!(!mid.is_coarser_or_equal(&wired));
        assert_eq!(mid.blocks().len(), 4);
    }

    #[test]
    fn custom_rejects_overlaps_and_interior_vertices() {
        let r = build_region(&LatticeSpec::Square, 0.0, 2.0, 0.0, 2.0).unwrap();
        let centre = r.nearest_vertex([1.0, 1.0]);
        assert!(BoundaryCondition::custom(&r, vec![vec![0, centre]]).is_err());
        assert!(BoundaryCondition::custom(&r, vec![vec![0, 1], vec![1, 2]]).is_err());
    }
}
