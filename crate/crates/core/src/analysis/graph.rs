use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::construction::TwoWeightSet;
use crate::error::{Error, Result};
use crate::projective::Space;

/// Largest vertex count for which every vertex pair is checked.
pub const EXHAUSTIVE_SRG_LIMIT: u64 = 20_000;

const SAMPLED_VERTICES: usize = 16;

/// Vertices are vectors of GF(q)^{3n} numbered `sum c_i q^i` with `c_i` the
/// packed digits, which is the same as their base-`p` expansion. Vector
/// addition is therefore digitwise addition mod `p`.
#[derive(Clone, Copy, Debug)]
struct VectorGroup {
    p: u64,
    digits: u32,
}

impl VectorGroup {
    fn add(&self, mut a: u64, mut b: u64) -> u64 {
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.digits {
            out += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg(&self, mut a: u64) -> u64 {
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.digits {
            out += (self.p - a % self.p) % self.p * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SrgVerification {
    /// Every unordered vertex pair.
    Exhaustive { pairs: u64 },
    /// All pairs through a few base vertices; the Cayley graph is
    /// vertex-transitive under translations, so this is a spot check only.
    Sampled { base_vertices: usize, pairs: u64 },
}

/// The Cayley graph on GF(q)^{3n} with connection set `D`.
#[derive(Clone, Debug)]
pub struct GraphArtifact {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
    pub verification: SrgVerification,
    /// Sorted vertex ids of `D`.
    pub difference_set: Vec<u64>,
    group: VectorGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
    pub verification: SrgVerification,
}

impl GraphArtifact {
    pub fn summary(&self) -> GraphSummary {
        GraphSummary {
            v: self.v,
            k: self.k,
            lambda: self.lambda,
            mu: self.mu,
            verification: self.verification.clone(),
        }
    }

    pub fn adjacent(&self, a: u64, b: u64) -> bool {
        self.difference_set.binary_search(&self.group.sub(a, b)).is_ok()
    }

    /// Sorted neighbours of `u`.
    pub fn neighbours(&self, u: u64) -> Vec<u64> {
        let mut out: Vec<u64> = self.difference_set.iter().map(|&d| self.group.add(u, d)).collect();
        out.sort_unstable();
        out
    }

    /// `(u, w)` with `u < w`, lexicographic.
    pub fn edges(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        (0..self.v).flat_map(move |u| {
            self.neighbours(u)
                .into_iter()
                .filter(move |&w| w > u)
                .map(move |w| (u, w))
        })
    }
}

fn bit(mask: &[u64], i: u64) -> bool {
    mask[(i / 64) as usize] >> (i % 64) & 1 == 1
}

/// Running `(min, max)` of common-neighbour counts over adjacent and
/// non-adjacent pairs.
#[derive(Clone, Copy)]
struct PairStats {
    adj: (u64, u64),
    non: (u64, u64),
    pairs: u64,
}

impl PairStats {
    const EMPTY: PairStats = PairStats {
        adj: (u64::MAX, 0),
        non: (u64::MAX, 0),
        pairs: 0,
    };

    fn record(mut self, adjacent: bool, common: u64) -> PairStats {
        let r = if adjacent { &mut self.adj } else { &mut self.non };
        *r = (r.0.min(common), r.1.max(common));
        self.pairs += 1;
        self
    }

    fn merge(self, o: PairStats) -> PairStats {
        PairStats {
            adj: (self.adj.0.min(o.adj.0), self.adj.1.max(o.adj.1)),
            non: (self.non.0.min(o.non.0), self.non.1.max(o.non.1)),
            pairs: self.pairs + o.pairs,
        }
    }

    fn constant(r: (u64, u64), what: &str) -> Result<u64> {
        if r.0 == r.1 {
            Ok(r.0)
        } else if r.0 == u64::MAX {
            Err(Error::Verification(format!("no {what} pairs")))
        } else {
            Err(Error::Verification(format!("{what} common neighbours range over {}..={}", r.0, r.1)))
        }
    }
}

/// Builds the Cayley graph of the set and verifies strong regularity.
/// Refuses with `ResourceCap` when `q^{3n}` exceeds `vertex_cap`.
pub fn export_graph(space: &Space, set: &TwoWeightSet, vertex_cap: u64, seed: u64) -> Result<GraphArtifact> {
    build_graph(space, set, vertex_cap, seed, EXHAUSTIVE_SRG_LIMIT)
}

fn build_graph(
    space: &Space,
    set: &TwoWeightSet,
    vertex_cap: u64,
    seed: u64,
    exhaustive_limit: u64,
) -> Result<GraphArtifact> {
    let t = space.tower();
    let group = VectorGroup {
        p: t.p() as u64,
        digits: space.vector_len() * t.e(),
    };
    let v = (space.q() as u64)
        .checked_pow(space.vector_len())
        .filter(|&v| v <= vertex_cap)
        .ok_or_else(|| {
            Error::ResourceCap(format!(
                "graph on {}^{} vertices exceeds the vertex cap {vertex_cap}",
                space.q(),
                space.vector_len()
            ))
        })?;

    let bf = space.base();
    let q = space.q() as u64;
    let mut difference_set = Vec::with_capacity(set.len() * (q as usize - 1));
    for &i in set.points.indices() {
        let c = space.point_coords(i);
        for u in 1..q as u32 {
            difference_set.push(c.iter().rev().fold(0u64, |acc, &d| acc * q + bf.mul(u, d) as u64));
        }
    }
    difference_set.sort_unstable();
    let k = difference_set.len() as u64;
    difference_set.dedup();
    if difference_set.len() as u64 != k {
        return Err(Error::Verification("difference set has repeated vectors".into()));
    }
    let words = v.div_ceil(64) as usize;
    let mut dmask = vec![0u64; words];
    for &d in &difference_set {
        dmask[(d / 64) as usize] |= 1 << (d % 64);
    }
    if difference_set.iter().any(|&d| !bit(&dmask, group.neg(d))) || bit(&dmask, 0) {
        return Err(Error::Verification("difference set is not symmetric".into()));
    }

    let (stats, verification) = if v <= exhaustive_limit {
        let rows: Vec<Vec<u64>> = (0..v)
            .into_par_iter()
            .map(|x| {
                let mut row = vec![0u64; words];
                for &d in &difference_set {
                    let y = group.add(x, d);
                    row[(y / 64) as usize] |= 1 << (y % 64);
                }
                row
            })
            .collect();
        let stats = (0..v)
            .into_par_iter()
            .map(|x| {
                let rx = &rows[x as usize];
                (x + 1..v).fold(PairStats::EMPTY, |s, y| {
                    let ry = &rows[y as usize];
                    let common: u32 = rx.iter().zip(ry).map(|(a, b)| (a & b).count_ones()).sum();
                    s.record(bit(rx, y), common as u64)
                })
            })
            .reduce(|| PairStats::EMPTY, PairStats::merge);
        let pairs = stats.pairs;
        (stats, SrgVerification::Exhaustive { pairs })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut base = vec![0u64];
        base.extend((1..SAMPLED_VERTICES).map(|_| rng.gen_range(1..v)));
        let stats = base
            .iter()
            .map(|&s| {
                (0..v)
                    .into_par_iter()
                    .filter(|&z| z != s)
                    .map(|z| {
                        let common = difference_set
                            .iter()
                            .filter(|&&d| bit(&dmask, group.sub(group.add(s, d), z)))
                            .count() as u64;
                        PairStats::EMPTY.record(bit(&dmask, group.sub(z, s)), common)
                    })
                    .reduce(|| PairStats::EMPTY, PairStats::merge)
            })
            .fold(PairStats::EMPTY, PairStats::merge);
        let pairs = stats.pairs;
        (
            stats,
            SrgVerification::Sampled {
                base_vertices: base.len(),
                pairs,
            },
        )
    };

    Ok(GraphArtifact {
        v,
        k,
        lambda: PairStats::constant(stats.adj, "adjacent")?,
        mu: PairStats::constant(stats.non, "non-adjacent")?,
        verification,
        difference_set,
        group,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{algebraic_set, lambda_set};
    use crate::field::Tower;

    fn space(p: u32, e: u32, n: u32) -> Space {
        Space::new(Tower::new(p, e, n).unwrap()).unwrap()
    }

    #[test]
    fn group_arithmetic() {
        let g = VectorGroup { p: 3, digits: 2 };
        // (2,1) + (1,1) = (0,2)
        assert_eq!(g.add(5, 4), 6);
        assert_eq!(g.sub(g.add(7, 5), 5), 7);
        assert_eq!(g.add(g.neg(8), 8), 0);
    }

    #[test]
    fn srg_q2() {
        let s = space(2, 1, 2);
        let g = export_graph(&s, &algebraic_set(&s).unwrap(), 1 << 20, 0).unwrap();
        assert_eq!((g.v, g.k, g.lambda, g.mu), (64, 18, 2, 6));
        assert_eq!(g.verification, SrgVerification::Exhaustive { pairs: 64 * 63 / 2 });
        assert_eq!(g.edges().count() as u64, 64 * 18 / 2);
        assert!(g.adjacent(0, g.difference_set[0]));
    }

    #[test]
    fn srg_q4() {
        let s = space(2, 2, 2);
        let g = export_graph(&s, &algebraic_set(&s).unwrap(), 1 << 20, 0).unwrap();
        assert_eq!(g.k, 3 * (255 + 5));
        assert_eq!(g.verification, SrgVerification::Exhaustive { pairs: 4096 * 4095 / 2 });
    }

    #[test]
    fn sampled_mode_agrees() {
        let s = space(2, 1, 2);
        let g = build_graph(&s, &algebraic_set(&s).unwrap(), 1 << 20, 3, 10).unwrap();
        assert_eq!((g.lambda, g.mu), (2, 6));
        assert!(matches!(g.verification, SrgVerification::Sampled { base_vertices: 16, .. }));
    }

    #[test]
    fn cap_is_enforced() {
        let s = space(3, 1, 2);
        let err = export_graph(&s, &algebraic_set(&s).unwrap(), 100, 0).unwrap_err();
        assert!(matches!(err, Error::ResourceCap(_)));
    }

    #[test]
    fn non_two_weight_set_is_not_strongly_regular() {
        let s = space(2, 1, 2);
        let mut set = lambda_set(&s);
        // Λ plus one point of Π is not a two-weight set
        set.points = crate::projective::PointSet::new(
            s.point_count(),
            set.points.indices().iter().copied().chain([s.pi_index(0)]),
        )
        .unwrap();
        assert!(export_graph(&s, &set, 1 << 20, 0).is_err());
    }
}
