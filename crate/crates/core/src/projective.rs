//! PG(3n-1, q) as pairs `(x, y)`, `x` in GF(q^{2n}), `y` in GF(q^n), modulo GF(q)^*.
//!
//! Points are densely indexed: first the subspace Λ = {(x, 0)} in the order
//! `beta^0, beta^1, ...`, then Π = {(0, y)} in the order `gamma^0, gamma^1, ...`,
//! then the mixed points `(x, gamma^j)` grouped by `j` and ordered by the
//! exponent of `x`. Hyperplanes are trace functionals `(a, b)` and use the same
//! indexing on the dual pair.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::{BaseField, Elem, Subfield, Tower};

/// A point stored in canonical form: the last nonzero coordinate of
/// `coords(x) ‖ coords_mid(y)` is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    pub x: Elem,
    pub y: Elem,
    pub index: u32,
}

/// The hyperplane `{(x, y) : Tr(a x) + Tr(b y) = 0}`, canonical like a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HyperplaneFunctional {
    pub a: Elem,
    pub b: Elem,
    pub index: u32,
}

/// Sorted point indices with a membership bitmask over the dense enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    universe: u32,
    indices: Vec<u32>,
    mask: Vec<u64>,
}

impl PointSet {
    /// Duplicates are merged.
    pub fn new(universe: u32, indices: impl IntoIterator<Item = u32>) -> Result<PointSet> {
        let mut indices: Vec<u32> = indices.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        if indices.last().is_some_and(|&i| i >= universe) {
            return Err(Error::InvalidParams(format!(
                "point index out of range (universe {universe})"
            )));
        }
        let mut mask = vec![0u64; (universe as usize).div_ceil(64)];
        for &i in &indices {
            mask[i as usize / 64] |= 1 << (i % 64);
        }
        Ok(PointSet {
            universe,
            indices,
            mask,
        })
    }

    #[inline]
    pub fn contains(&self, idx: u32) -> bool {
        idx < self.universe && self.mask[idx as usize / 64] >> (idx % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn intersection_count(&self, other: &PointSet) -> usize {
        self.mask
            .iter()
            .zip(&other.mask)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let indices = self.indices.iter().copied().filter(|&i| other.contains(i));
        PointSet::new(self.universe, indices).expect("subset of a valid set")
    }
}

/// The projective space PG(3n-1, q) over a built [`Tower`].
#[derive(Debug)]
pub struct Space {
    tower: Tower,
    base: BaseField,
    n_lambda: u32,
    n_pi: u32,
    n_points: u32,
}

impl Space {
    pub fn new(tower: Tower) -> Result<Space> {
        let q = tower.q() as u64;
        let n = tower.n();
        let n_points = (q.pow(3 * n) - 1) / (q - 1);
        if n_points > u32::MAX as u64 / 2 {
            return Err(Error::ResourceCap(format!("{n_points} points do not fit an index")));
        }
        let n_lambda = tower.base_index();
        let n_pi = tower.mid_order() / (tower.q() - 1);
        Ok(Space {
            base: tower.base_field(),
            tower,
            n_lambda,
            n_pi,
            n_points: n_points as u32,
        })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    pub fn n(&self) -> u32 {
        self.tower.n()
    }

    /// Length of a coordinate vector, `3n`.
    pub fn vector_len(&self) -> u32 {
        3 * self.tower.n()
    }

    pub fn point_count(&self) -> u32 {
        self.n_points
    }

    pub fn hyperplane_count(&self) -> u32 {
        self.n_points
    }

    /// `|Λ| = (q^{2n}-1)/(q-1)`
    pub fn lambda_count(&self) -> u32 {
        self.n_lambda
    }

    /// `|Π| = (q^n-1)/(q-1)`
    pub fn pi_count(&self) -> u32 {
        self.n_pi
    }

    /// Index of the Π-point `(0, gamma^j)`.
    pub fn pi_index(&self, j: u32) -> u32 {
        self.n_lambda + j
    }

    pub fn lambda(&self) -> PointSet {
        PointSet::new(self.n_points, 0..self.n_lambda).expect("in range")
    }

    pub fn pi(&self) -> PointSet {
        PointSet::new(self.n_points, self.n_lambda..self.n_lambda + self.n_pi).expect("in range")
    }

    pub fn all_points(&self) -> PointSet {
        PointSet::new(self.n_points, 0..self.n_points).expect("in range")
    }

    /// Dense index of the class of `(x, y)`; `y` must lie in GF(q^n).
    pub fn index_of(&self, x: Elem, y: Elem) -> Result<u32> {
        let t = &self.tower;
        let ty = t.mid_log(y)?;
        Ok(match (x.log(), ty) {
            (None, None) => return Err(Error::ZeroVector),
            (Some(k), None) => k % self.n_lambda,
            (None, Some(s)) => self.n_lambda + s % self.n_pi,
            (Some(k), Some(s)) => {
                let j = s % self.n_pi;
                // (x, gamma^s) ~ (x / gamma^{s-j}, gamma^j), gamma^{s-j} in GF(q)
                let ord = t.order() as u64;
                let shift = (s - j) as u64 * t.norm_exponent() as u64 % ord;
                let k = (k as u64 + ord - shift) % ord;
                self.n_lambda + self.n_pi + j * t.order() + k as u32
            }
        })
    }

    /// A representative of point `idx` in orbit form: `(beta^i, 0)`,
    /// `(0, gamma^j)` or `(beta^k, gamma^j)`.
    pub fn rep(&self, idx: u32) -> (Elem, Elem) {
        let t = &self.tower;
        if idx < self.n_lambda {
            (t.pow_beta(idx as u64), Elem::ZERO)
        } else if idx < self.n_lambda + self.n_pi {
            (Elem::ZERO, t.gamma_pow((idx - self.n_lambda) as u64))
        } else {
            let r = idx - self.n_lambda - self.n_pi;
            (
                t.pow_beta((r % t.order()) as u64),
                t.gamma_pow((r / t.order()) as u64),
            )
        }
    }

    pub fn canonicalize(&self, x: Elem, y: Elem) -> Result<ProjPoint> {
        let t = &self.tower;
        let index = self.index_of(x, y)?;
        let lead = if y.is_zero() {
            t.coords(x)
        } else {
            t.coords_mid(y)?
        };
        let last = *lead.iter().rev().find(|&&d| d != 0).expect("nonzero vector");
        let s = t.inv(t.elem_of_digit(last))?;
        Ok(ProjPoint {
            x: t.mul(x, s),
            y: t.mul(y, s),
            index,
        })
    }

    pub fn point(&self, idx: u32) -> ProjPoint {
        let (x, y) = self.rep(idx);
        self.canonicalize(x, y).expect("representative is nonzero")
    }

    /// All `(q^{3n}-1)/(q-1)` points in index order.
    pub fn enumerate_points(&self) -> Vec<ProjPoint> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// The `3n` GF(q) coordinates, Λ-block first.
    pub fn coords(&self, x: Elem, y: Elem) -> Result<Vec<u32>> {
        let mut v = self.tower.coords(x);
        v.extend(self.tower.coords_mid(y)?);
        Ok(v)
    }

    pub fn point_coords(&self, idx: u32) -> Vec<u32> {
        let pt = self.point(idx);
        self.coords(pt.x, pt.y).expect("valid point")
    }

    pub fn point_from_coords(&self, digits: &[u32]) -> Result<ProjPoint> {
        let n2 = 2 * self.n() as usize;
        if digits.len() != 3 * self.n() as usize {
            return Err(Error::InvalidParams(format!(
                "expected {} coordinates, got {}",
                3 * self.n(),
                digits.len()
            )));
        }
        let x = self.tower.from_coords(&digits[..n2])?;
        let y = self.tower.from_coords_mid(&digits[n2..])?;
        self.canonicalize(x, y)
    }

    pub fn hyperplane_from(&self, a: Elem, b: Elem) -> Result<HyperplaneFunctional> {
        let pt = self.canonicalize(a, b)?;
        Ok(HyperplaneFunctional {
            a: pt.x,
            b: pt.y,
            index: pt.index,
        })
    }

    pub fn hyperplane(&self, idx: u32) -> HyperplaneFunctional {
        let pt = self.point(idx);
        HyperplaneFunctional {
            a: pt.x,
            b: pt.y,
            index: pt.index,
        }
    }

    /// `Tr(a x) + Tr(b y)` as a GF(q) digit.
    #[inline]
    pub fn pairing(&self, a: Elem, b: Elem, x: Elem, y: Elem) -> u32 {
        let t = &self.tower;
        let u = t
            .trace_digit(t.mul(a, x), Subfield::Full)
            .expect("full field");
        let v = t.trace_digit(t.mul(b, y), Subfield::Mid).expect("mid field");
        self.base.add(u, v)
    }

    pub fn hyperplane_contains(&self, h: &HyperplaneFunctional, pt: &ProjPoint) -> bool {
        self.pairing(h.a, h.b, pt.x, pt.y) == 0
    }

    /// Membership by dense indices.
    pub fn incident(&self, hyperplane: u32, point: u32) -> bool {
        let (a, b) = self.rep(hyperplane);
        let (x, y) = self.rep(point);
        self.pairing(a, b, x, y) == 0
    }

    /// `(x1 + s x2, y1 + s y2)`
    fn combine(&self, p1: (Elem, Elem), s: Elem, p2: (Elem, Elem)) -> (Elem, Elem) {
        let t = &self.tower;
        (
            t.add(p1.0, t.mul(s, p2.0)),
            t.add(p1.1, t.mul(s, p2.1)),
        )
    }

    /// The `q+1` points of the line `p1 p2`: `p1`, `p2`, then `p1 + s p2` for
    /// `s = omega^0, omega^1, ...`.
    pub fn line_through(&self, p1: &ProjPoint, p2: &ProjPoint) -> Result<Vec<ProjPoint>> {
        if p1.index == p2.index {
            return Err(Error::EqualPoints);
        }
        let mut out = vec![*p1, *p2];
        for s in self.tower.base_units() {
            let (x, y) = self.combine((p1.x, p1.y), s, (p2.x, p2.y));
            out.push(self.canonicalize(x, y)?);
        }
        Ok(out)
    }

    /// Indices of the line through two points given by index.
    pub fn line_indices(&self, i: u32, j: u32) -> Result<Vec<u32>> {
        if i == j {
            return Err(Error::EqualPoints);
        }
        let (r1, r2) = (self.rep(i), self.rep(j));
        let mut out = vec![i, j];
        for s in self.tower.base_units() {
            let (x, y) = self.combine(r1, s, r2);
            out.push(self.index_of(x, y)?);
        }
        Ok(out)
    }

    /// Every projective subspace of dimension `dim` whose points all lie in
    /// `set`, each as a sorted index list; the list itself is sorted.
    ///
    /// Subspaces are grown one dimension at a time: a `(d+1)`-space `T` is
    /// reached from a `d`-space `S ⊂ T` by adding `r = max T`, so only points
    /// above `max S` are tried as extensions. Growth aborts as soon as a new
    /// point leaves `set`.
    pub fn subspace_contained(&self, set: &PointSet, dim: u32) -> Result<Vec<Vec<u32>>> {
        if dim < 1 || dim > self.vector_len() - 1 {
            return Err(Error::InvalidParams(format!(
                "subspace dimension {dim} out of range 1..={}",
                self.vector_len() - 1
            )));
        }
        if set.is_empty() {
            return Err(Error::InvalidParams("empty point set".into()));
        }
        let units: Vec<Elem> = self.tower.base_units().collect();
        let mut level: Vec<Vec<u32>> = set.indices().iter().map(|&i| vec![i]).collect();
        for _ in 0..dim {
            let mut next = BTreeSet::new();
            for sub in &level {
                let top = *sub.last().expect("nonempty");
                let reps: Vec<(Elem, Elem)> = sub.iter().map(|&i| self.rep(i)).collect();
                'extend: for &r in set.indices().iter().filter(|&&r| r > top) {
                    let rr = self.rep(r);
                    let mut pts = Vec::with_capacity(sub.len() * units.len() + sub.len() + 1);
                    pts.extend_from_slice(sub);
                    pts.push(r);
                    for &s in &reps {
                        for &u in &units {
                            let (x, y) = self.combine(rr, u, s);
                            let idx = self.index_of(x, y)?;
                            if !set.contains(idx) {
                                continue 'extend;
                            }
                            pts.push(idx);
                        }
                    }
                    pts.sort_unstable();
                    next.insert(pts);
                }
            }
            level = next.into_iter().collect();
        }
        Ok(level)
    }
}
