//! Elliptic quadrics `Q_a = {x : Tr(a x^{q^n+1}) = 0}` of Λ = PG(2n-1, q), the
//! Singer subgroup `<xi>` with `xi = beta^{(q^n-1)/(q-1)}`, and its orbits `I_i`.
//!
//! Everything here is verified by enumeration: quadric sizes, the orbit
//! partition, the all-or-nothing incidence between orbits and quadrics, and the
//! cap / line-union structure of each orbit.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Subfield};
use crate::projective::{PointSet, Space};

#[derive(Clone, Debug)]
pub struct Quadric {
    /// `a = gamma^t`, the minimal exponent in its GF(q)^* coset.
    pub param: Elem,
    pub index: u32,
    pub points: PointSet,
}

#[derive(Clone, Debug)]
pub struct SingerOrbit {
    /// Orbit of `beta^index`.
    pub index: u32,
    pub points: PointSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "lines", rename_all = "snake_case")]
pub enum OrbitStructure {
    Cap,
    LineUnion(Vec<Vec<u32>>),
}

/// Orbits against quadrics. `incidence[i][t]` is true iff orbit `i` lies in `Q_t`.
#[derive(Clone, Debug, Serialize)]
pub struct GammaSpace {
    pub incidence: Vec<Vec<bool>>,
    pub quadrics_per_orbit: u32,
    pub orbits_per_quadric: u32,
    /// Number of independent `(n-1)`-subsets of quadrics whose common points
    /// were checked to be exactly one orbit.
    pub independent_subsets_checked: u64,
}

/// Result of combining two quadric parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilCheck {
    pub holds: bool,
    /// Index of `Q_{λa+μb}`, or `None` when `λa + μb = 0`.
    pub combined: Option<u32>,
}

/// The Λ-side structure: quadrics, orbits and their incidence.
#[derive(Clone, Debug)]
pub struct SingerGeometry {
    pub quadrics: Vec<Quadric>,
    pub orbits: Vec<SingerOrbit>,
    pub gamma: GammaSpace,
}

impl SingerGeometry {
    pub fn build(space: &Space) -> Result<SingerGeometry> {
        let quadrics = build_quadrics(space);
        let orbits = xi_orbits(space)?;
        let gamma = orbit_quadric_incidence(space, &quadrics, &orbits)?;
        Ok(SingerGeometry {
            quadrics,
            orbits,
            gamma,
        })
    }

    /// Whether orbit `i` lies in quadric `t`.
    pub fn orbit_in_quadric(&self, orbit: u32, quadric: u32) -> bool {
        self.gamma.incidence[orbit as usize][quadric as usize]
    }
}

/// Index of the quadric `Q_a` for nonzero `a` in GF(q^n).
pub fn quadric_index(space: &Space, a: Elem) -> Result<u32> {
    match space.tower().mid_log(a)? {
        None => Err(Error::InvalidParams("quadric parameter must be nonzero".into())),
        Some(t) => Ok(t % space.pi_count()),
    }
}

/// `Tr(a x^{q^n+1})` as a digit.
fn quadric_form(space: &Space, a: Elem, x: Elem) -> u32 {
    let t = space.tower();
    t.trace_digit(t.mul(a, t.rel_norm(x)), Subfield::Mid)
        .expect("norm lands in GF(q^n)")
}

/// The `(q^n-1)/(q-1)` quadrics `Q_{gamma^t}`.
pub fn build_quadrics(space: &Space) -> Vec<Quadric> {
    let t = space.tower();
    (0..space.pi_count())
        .map(|idx| {
            let param = t.gamma_pow(idx as u64);
            let pts = (0..space.lambda_count())
                .filter(|&i| quadric_form(space, param, t.pow_beta(i as u64)) == 0);
            Quadric {
                param,
                index: idx,
                points: PointSet::new(space.point_count(), pts).expect("Λ indices"),
            }
        })
        .collect()
}

/// Orbits of `beta^i` under multiplication by `xi`, `i < (q^n-1)/(q-1)`.
pub fn xi_orbits(space: &Space) -> Result<Vec<SingerOrbit>> {
    let t = space.tower();
    let xi = t.xi();
    let mut covered = vec![false; space.lambda_count() as usize];
    let mut orbits = Vec::with_capacity(space.pi_count() as usize);
    for i in 0..space.pi_count() {
        let start = space.index_of(t.pow_beta(i as u64), Elem::ZERO)?;
        let mut pts = vec![start];
        let mut x = t.mul(t.pow_beta(i as u64), xi);
        loop {
            let idx = space.index_of(x, Elem::ZERO)?;
            if idx == start {
                break;
            }
            pts.push(idx);
            x = t.mul(x, xi);
        }
        for &p in &pts {
            if std::mem::replace(&mut covered[p as usize], true) {
                return Err(Error::Structure(format!("orbit {i} overlaps an earlier orbit")));
            }
        }
        orbits.push(SingerOrbit {
            index: i,
            points: PointSet::new(space.point_count(), pts)?,
        });
    }
    if covered.iter().any(|&c| !c) {
        return Err(Error::Structure("orbits do not cover Λ".into()));
    }
    Ok(orbits)
}

/// Cap for even `n`; for odd `n` a partition into `(q^n+1)/(q+1)` full lines.
///
/// Every pair of orbit points is joined by a line. The orbit is a cap iff each
/// such line meets it in exactly two points; it is a line union iff the lines
/// fully contained in it are pairwise disjoint and cover it.
pub fn orbit_structure(space: &Space, orbit: &SingerOrbit) -> Result<OrbitStructure> {
    let q = space.q() as usize;
    let pts = orbit.points.indices();
    let mut lines: Vec<Vec<u32>> = Vec::new();
    let mut max_inside = 0usize;
    for (a, &i) in pts.iter().enumerate() {
        for &j in &pts[a + 1..] {
            let mut line = space.line_indices(i, j)?;
            let inside = line.iter().filter(|&&p| orbit.points.contains(p)).count();
            max_inside = max_inside.max(inside);
            if inside == q + 1 {
                line.sort_unstable();
                if !lines.contains(&line) {
                    lines.push(line);
                }
            }
        }
    }
    if max_inside <= 2 {
        return Ok(OrbitStructure::Cap);
    }
    let covered: usize = lines.iter().map(Vec::len).sum();
    let distinct = lines.iter().flatten().unique().count();
    if covered != pts.len() || distinct != pts.len() {
        return Err(Error::Structure(format!(
            "orbit {} is neither a cap nor a union of disjoint lines",
            orbit.index
        )));
    }
    lines.sort();
    Ok(OrbitStructure::LineUnion(lines))
}

/// Incidence between orbits and quadrics, plus the PG(n-1, q) axiom check:
/// any `n-1` quadrics with GF(q)-independent parameters meet in exactly one orbit.
pub fn orbit_quadric_incidence(
    space: &Space,
    quadrics: &[Quadric],
    orbits: &[SingerOrbit],
) -> Result<GammaSpace> {
    let t = space.tower();
    let n = space.n();
    let full = orbits.first().map_or(0, |o| o.points.len());
    let mut incidence = vec![vec![false; quadrics.len()]; orbits.len()];
    for (o, row) in orbits.iter().zip(incidence.iter_mut()) {
        for (qd, cell) in quadrics.iter().zip(row.iter_mut()) {
            let c = o.points.intersection_count(&qd.points);
            if c == full {
                *cell = true;
            } else if c != 0 {
                return Err(Error::Structure(format!(
                    "orbit {} meets quadric {} in {c} of {full} points",
                    o.index, qd.index
                )));
            }
        }
    }
    let expected = (space.q().pow(n - 1) - 1) / (space.q() - 1);
    for (i, row) in incidence.iter().enumerate() {
        let c = row.iter().filter(|&&b| b).count() as u32;
        if c != expected {
            return Err(Error::Structure(format!("orbit {i} lies in {c} quadrics, expected {expected}")));
        }
    }
    for tq in 0..quadrics.len() {
        let c = incidence.iter().filter(|row| row[tq]).count() as u32;
        if c != expected {
            return Err(Error::Structure(format!(
                "quadric {tq} contains {c} orbits, expected {expected}"
            )));
        }
    }

    let params: Vec<Vec<u32>> = quadrics
        .iter()
        .map(|qd| t.coords_mid(qd.param))
        .collect::<Result<_>>()?;
    let mut checked = 0u64;
    for subset in (0..quadrics.len()).combinations(n as usize - 1) {
        let rows: Vec<Vec<u32>> = subset.iter().map(|&i| params[i].clone()).collect();
        if space.base().rank(&rows) != n as usize - 1 {
            continue;
        }
        let common = subset[1..]
            .iter()
            .fold(quadrics[subset[0]].points.clone(), |acc, &i| {
                acc.intersection(&quadrics[i].points)
            });
        if !orbits.iter().any(|o| o.points == common) {
            return Err(Error::Structure(format!(
                "quadrics {subset:?} meet in {} points, not a single orbit",
                common.len()
            )));
        }
        checked += 1;
    }
    Ok(GammaSpace {
        incidence,
        quadrics_per_orbit: expected,
        orbits_per_quadric: expected,
        independent_subsets_checked: checked,
    })
}

/// Checks that `Tr((λa+μb) N(x)) = λ Tr(a N(x)) + μ Tr(b N(x))` on all of Λ
/// and that `Q_a ∩ Q_b ⊆ Q_{λa+μb}`. `λ, μ` are GF(q) elements.
pub fn pencil_check(space: &Space, a: Elem, b: Elem, lambda: Elem, mu: Elem) -> Result<PencilCheck> {
    let t = space.tower();
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidParams("quadric parameters must be nonzero".into()));
    }
    if !t.contains(a, Subfield::Mid) || !t.contains(b, Subfield::Mid) {
        return Err(Error::NotInSubfield);
    }
    if !t.contains(lambda, Subfield::Base) || !t.contains(mu, Subfield::Base) {
        return Err(Error::NotInSubfield);
    }
    if lambda.is_zero() && mu.is_zero() {
        return Err(Error::InvalidParams("(λ, μ) must not both vanish".into()));
    }
    let bf = space.base();
    let (ld, md) = (t.digit_of(lambda)?, t.digit_of(mu)?);
    let c = t.add(t.mul(lambda, a), t.mul(mu, b));
    let mut holds = true;
    for i in 0..space.lambda_count() {
        let x = t.pow_beta(i as u64);
        let (fa, fb, fc) = (
            quadric_form(space, a, x),
            quadric_form(space, b, x),
            quadric_form(space, c, x),
        );
        if fc != bf.add(bf.mul(ld, fa), bf.mul(md, fb)) || (fa == 0 && fb == 0 && fc != 0) {
            holds = false;
            break;
        }
    }
    let combined = if c.is_zero() {
        None
    } else {
        Some(quadric_index(space, c)?)
    };
    Ok(PencilCheck { holds, combined })
}
