//! The two-weight set 𝒞 built two ways.
//!
//! Geometric: for each point `p_j = (0, gamma^j)` of Π take the baseless cone
//! over the orbit `I_{corr(j)}`, i.e. the points `(u x, gamma^j)` for `x` in the
//! orbit and `u` in GF(q)^*, together with the apex. Algebraic: the orbit of
//! `(1, 1)` under `(x, y) -> (beta x, gamma y)`, together with Π.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::{hyperplane_spectrum, SpectrumCertificate};
use crate::error::{Error, Result};
use crate::field::{Elem, Tower};
use crate::projective::{PointSet, Space};
use crate::singer::SingerGeometry;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub p: u32,
    pub e: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

impl Params {
    pub fn of(tower: &Tower) -> Params {
        Params {
            p: tower.p(),
            e: tower.e(),
            n: tower.n(),
            modulus: tower.modulus().to_vec(),
        }
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Geometric,
    Algebraic,
    /// The subspace Λ, used as a negative control.
    Lambda,
    /// Read from a file without provenance.
    Imported,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: Construction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correspondence: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anti_isomorphic: Option<bool>,
}

impl Provenance {
    pub fn plain(construction: Construction) -> Provenance {
        Provenance {
            construction,
            correspondence: None,
            anti_isomorphic: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TwoWeightSet {
    pub params: Params,
    pub provenance: Provenance,
    pub points: PointSet,
}

impl TwoWeightSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A bijection from the points of Π (by `j` in `(0, gamma^j)`) to the orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    map: Vec<u32>,
    anti_isomorphic: bool,
}

impl Correspondence {
    /// `gamma^j -> I_j`. Fails unless `Tr(a gamma^j) = 0` exactly when
    /// `I_j ⊆ Q_a`, for every `a` and `j`.
    pub fn alpha(space: &Space, geom: &SingerGeometry) -> Result<Correspondence> {
        let map: Vec<u32> = (0..space.pi_count()).collect();
        let t = space.tower();
        for quad in &geom.quadrics {
            for j in 0..space.pi_count() {
                let on = space.pairing(Elem::ZERO, quad.param, Elem::ZERO, t.gamma_pow(j as u64)) == 0;
                if on != geom.orbit_in_quadric(j, quad.index) {
                    return Err(Error::Verification(format!(
                        "alpha does not reverse incidence at Π-point {j}, quadric {}",
                        quad.index
                    )));
                }
            }
        }
        Ok(Correspondence {
            map,
            anti_isomorphic: true,
        })
    }

    pub fn from_permutation(space: &Space, geom: &SingerGeometry, map: Vec<u32>) -> Result<Correspondence> {
        let n = space.pi_count();
        if map.len() != n as usize {
            return Err(Error::NotBijective(format!("expected {n} entries, got {}", map.len())));
        }
        let mut seen = vec![false; n as usize];
        for &m in &map {
            if m >= n || std::mem::replace(&mut seen[m as usize], true) {
                return Err(Error::NotBijective(format!("entry {m} repeated or out of range")));
            }
        }
        let anti_isomorphic = reverses_incidence(space, geom, &map);
        Ok(Correspondence {
            map,
            anti_isomorphic,
        })
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    pub fn anti_isomorphic(&self) -> bool {
        self.anti_isomorphic
    }
}

/// True iff the image of every hyperplane `{Tr(a y) = 0}` of Π is exactly the
/// set of orbits inside some quadric.
fn reverses_incidence(space: &Space, geom: &SingerGeometry, map: &[u32]) -> bool {
    let t = space.tower();
    let n = space.pi_count();
    let quadric_rows: Vec<Vec<bool>> = (0..n)
        .map(|tq| (0..n).map(|o| geom.orbit_in_quadric(o, tq)).collect())
        .collect();
    (0..n).all(|ta| {
        let a = t.gamma_pow(ta as u64);
        let mut image = vec![false; n as usize];
        for j in 0..n {
            if space.pairing(Elem::ZERO, a, Elem::ZERO, t.gamma_pow(j as u64)) == 0 {
                image[map[j as usize] as usize] = true;
            }
        }
        quadric_rows.contains(&image)
    })
}

/// Union of the baseless cones `p_j I_{corr(j)} \ I_{corr(j)}`.
pub fn geometric_set(space: &Space, geom: &SingerGeometry, corr: &Correspondence) -> Result<TwoWeightSet> {
    let t = space.tower();
    let units: Vec<Elem> = t.base_units().collect();
    let mut pts = Vec::new();
    for (j, &o) in corr.map().iter().enumerate() {
        let y = t.gamma_pow(j as u64);
        pts.push(space.pi_index(j as u32));
        for &p in geom.orbits[o as usize].points.indices() {
            let (x, _) = space.rep(p);
            for &u in &units {
                pts.push(space.index_of(t.mul(u, x), y)?);
            }
        }
    }
    let total = pts.len();
    let points = PointSet::new(space.point_count(), pts)?;
    if points.len() != total {
        return Err(Error::Structure("cones are not pairwise disjoint".into()));
    }
    Ok(TwoWeightSet {
        params: Params::of(t),
        provenance: Provenance {
            construction: Construction::Geometric,
            correspondence: Some(corr.map().to_vec()),
            anti_isomorphic: Some(corr.anti_isomorphic()),
        },
        points,
    })
}

/// `{(beta^k, gamma^k)} ∪ Π`. Fails if the orbit part has fewer than
/// `q^{2n} - 1` distinct points.
pub fn algebraic_set(space: &Space) -> Result<TwoWeightSet> {
    let t = space.tower();
    let mut pts: Vec<u32> = (0..t.order() as u64)
        .map(|k| space.index_of(t.pow_beta(k), t.gamma_pow(k)))
        .collect::<Result<_>>()?;
    let orbit_len = pts.len();
    if pts.iter().unique().count() != orbit_len {
        return Err(Error::Structure("orbit of (1,1) is not sharply transitive".into()));
    }
    pts.extend(space.pi().indices());
    Ok(TwoWeightSet {
        params: Params::of(t),
        provenance: Provenance::plain(Construction::Algebraic),
        points: PointSet::new(space.point_count(), pts)?,
    })
}

/// Λ as a point set, for negative controls.
pub fn lambda_set(space: &Space) -> TwoWeightSet {
    TwoWeightSet {
        params: Params::of(space.tower()),
        provenance: Provenance::plain(Construction::Lambda),
        points: space.lambda(),
    }
}

pub fn sets_equal(a: &TwoWeightSet, b: &TwoWeightSet) -> Result<bool> {
    if a.params != b.params {
        return Err(Error::ParamMismatch);
    }
    Ok(a.points == b.points)
}

/// Spectrum of the cone construction over an arbitrary bijection.
pub fn bijection_experiment(
    space: &Space,
    geom: &SingerGeometry,
    corr: &Correspondence,
) -> Result<SpectrumCertificate> {
    let set = geometric_set(space, geom, corr)?;
    hyperplane_spectrum(space, &set)
}

/// All `|Π|!` bijections in lexicographic order.
pub fn all_bijections(space: &Space) -> impl Iterator<Item = Vec<u32>> {
    let n = space.pi_count();
    (0..n).permutations(n as usize)
}

/// `count` uniformly random bijections from a fixed seed.
pub fn random_bijections(space: &Space, count: usize, seed: u64) -> Vec<Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base: Vec<u32> = (0..space.pi_count()).collect();
    (0..count)
        .map(|_| {
            let mut v = base.clone();
            v.shuffle(&mut rng);
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(p: u32, n: u32) -> (Space, SingerGeometry) {
        let s = Space::new(Tower::new(p, 1, n).unwrap()).unwrap();
        let g = SingerGeometry::build(&s).unwrap();
        (s, g)
    }

    #[test]
    fn alpha_maps_identity() {
        let (s, g) = setup(3, 2);
        let a = Correspondence::alpha(&s, &g).unwrap();
        assert_eq!(a.map()[0], 0);
        assert!(a.anti_isomorphic());
        // for each a, exactly one Π-point is on Tr(ay) = 0 and it goes to the orbit inside Q_a
        let t = s.tower();
        for quad in &g.quadrics {
            let on: Vec<u32> = (0..4)
                .filter(|&j| s.pairing(Elem::ZERO, quad.param, Elem::ZERO, t.gamma_pow(j as u64)) == 0)
                .collect();
            assert_eq!(on.len(), 1);
            assert!(g.orbit_in_quadric(a.map()[on[0] as usize], quad.index));
        }
    }

    #[test]
    fn geometric_sizes() {
        for (p, n, size) in [(3, 2, 84), (2, 2, 18), (3, 3, 741)] {
            let (s, g) = setup(p, n);
            let a = Correspondence::alpha(&s, &g).unwrap();
            let set = geometric_set(&s, &g, &a).unwrap();
            assert_eq!(set.len(), size);
            assert!(s.pi().is_subset(&set.points));
            assert_eq!(set.points.intersection_count(&s.lambda()), 0);
        }
    }

    #[test]
    fn algebraic_sizes_and_equality() {
        for (p, n, size) in [(3, 2, 84), (2, 2, 18), (3, 3, 741), (2, 3, 70)] {
            let (s, g) = setup(p, n);
            let alg = algebraic_set(&s).unwrap();
            assert_eq!(alg.len(), size);
            let geo = geometric_set(&s, &g, &Correspondence::alpha(&s, &g).unwrap()).unwrap();
            assert!(sets_equal(&geo, &alg).unwrap());
            assert!(sets_equal(&alg, &alg).unwrap());
        }
    }

    #[test]
    fn full_period() {
        let (s, _) = setup(3, 2);
        let t = s.tower();
        let k = 17u64;
        let a = s.index_of(t.pow_beta(k), t.gamma_pow(k)).unwrap();
        let b = s.index_of(t.pow_beta(k + 80), t.gamma_pow(k + 80)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn every_lambda_point_on_one_cone_line() {
        let (s, _) = setup(3, 3);
        let set = algebraic_set(&s).unwrap();
        let pi = s.pi();
        for x in 0..s.lambda_count() {
            let mut lines = 0;
            for j in pi.indices() {
                let line = s.line_indices(x, *j).unwrap();
                if line.iter().filter(|&&p| p != x).all(|&p| set.points.contains(p)) {
                    lines += 1;
                }
            }
            assert_eq!(lines, 1, "Λ-point {x}");
        }
    }

    #[test]
    fn permutation_validation() {
        let (s, g) = setup(3, 2);
        assert!(matches!(
            Correspondence::from_permutation(&s, &g, vec![0, 1, 1, 2]),
            Err(Error::NotBijective(_))
        ));
        assert!(matches!(
            Correspondence::from_permutation(&s, &g, vec![0, 1, 2]),
            Err(Error::NotBijective(_))
        ));
        let c = Correspondence::from_permutation(&s, &g, vec![0, 1, 2, 3]).unwrap();
        assert!(c.anti_isomorphic());
        // for n = 2 the incidence is a matching, so every bijection reverses it
        let c = Correspondence::from_permutation(&s, &g, vec![3, 1, 0, 2]).unwrap();
        assert!(c.anti_isomorphic());
    }

    #[test]
    fn some_bijection_is_not_anti_isomorphic_for_n3() {
        let (s, g) = setup(2, 3);
        let flags: Vec<bool> = random_bijections(&s, 20, 7)
            .into_iter()
            .map(|m| Correspondence::from_permutation(&s, &g, m).unwrap().anti_isomorphic())
            .collect();
        assert!(flags.iter().any(|f| !f));
    }

    #[test]
    fn random_bijections_are_deterministic() {
        let (s, _) = setup(2, 3);
        assert_eq!(random_bijections(&s, 5, 1), random_bijections(&s, 5, 1));
        assert_eq!(all_bijections(&s).count(), 5040);
    }
}
