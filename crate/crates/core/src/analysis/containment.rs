use serde::Serialize;

use crate::construction::TwoWeightSet;
use crate::error::Result;
use crate::projective::Space;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainmentReport {
    /// Projective dimension searched, `n - 1`.
    pub dimension: u32,
    pub subspaces_found: usize,
    /// The only contained subspace is Π.
    pub only_pi: bool,
    /// Some of the contained subspaces partition the set.
    pub partitioned: bool,
    pub conclusion: String,
}

/// Searches the set for `(n-1)`-dimensional subspaces and decides whether
/// the set is a disjoint union of them.
pub fn geometric_containment(space: &Space, set: &TwoWeightSet) -> Result<ContainmentReport> {
    let dimension = space.n() - 1;
    let found = space.subspace_contained(&set.points, dimension)?;
    let pi = space.pi();
    let only_pi = found.len() == 1 && found[0].as_slice() == pi.indices();
    let partitioned = has_partition(&found, set);
    let conclusion = if partitioned {
        format!("geometric: the set is a disjoint union of {} subspaces", set.len() / pi.len())
    } else if only_pi {
        "not geometric: Π is the only contained subspace of this dimension".to_string()
    } else {
        format!("not geometric: {} contained subspaces admit no partition", found.len())
    };
    Ok(ContainmentReport {
        dimension,
        subspaces_found: found.len(),
        only_pi,
        partitioned,
        conclusion,
    })
}

/// Exact cover of the set by equal-size blocks, by backtracking on the
/// smallest uncovered point.
fn has_partition(blocks: &[Vec<u32>], set: &TwoWeightSet) -> bool {
    let Some(size) = blocks.first().map(Vec::len) else {
        return false;
    };
    if !set.len().is_multiple_of(size) {
        return false;
    }
    let pos = |p: u32| set.points.indices().binary_search(&p).expect("block inside set");
    let masks: Vec<Vec<usize>> = blocks.iter().map(|b| b.iter().map(|&p| pos(p)).collect()).collect();
    let mut by_point: Vec<Vec<usize>> = vec![Vec::new(); set.len()];
    for (bi, m) in masks.iter().enumerate() {
        for &p in m {
            by_point[p].push(bi);
        }
    }
    let mut covered = vec![false; set.len()];
    cover(&masks, &by_point, &mut covered)
}

fn cover(blocks: &[Vec<usize>], by_point: &[Vec<usize>], covered: &mut [bool]) -> bool {
    let Some(first) = covered.iter().position(|c| !c) else {
        return true;
    };
    for &bi in &by_point[first] {
        let b = &blocks[bi];
        if b.iter().any(|&p| covered[p]) {
            continue;
        }
        b.iter().for_each(|&p| covered[p] = true);
        if cover(blocks, by_point, covered) {
            return true;
        }
        b.iter().for_each(|&p| covered[p] = false);
    }
    false
}
