//! Exact arithmetic in the tower GF(q) ⊆ GF(q^n) ⊆ GF(q^{2n}).
//!
//! Every element is stored as a discrete logarithm to a fixed primitive
//! element `beta` of the big field, with a distinguished zero. Multiplication
//! is exponent addition and addition is a single Zech-table lookup. The two
//! subfields are not separate structures: an element lies in GF(q^n) iff its
//! exponent is divisible by `q^n + 1`, and in GF(q) iff it is divisible by
//! `(q^{2n} - 1) / (q - 1)`.
//!
//! Coordinates. GF(q^{2n}) is a GF(q)-space with basis `1, beta, ..., beta^{2n-1}`
//! and GF(q^n) one with basis `1, gamma, ..., gamma^{n-1}` where
//! `gamma = beta^{q^n+1}`. A GF(q) coordinate ("digit") is itself written over
//! GF(p) in the basis `1, omega, ..., omega^{e-1}` with `omega` the primitive
//! element `beta^{(q^{2n}-1)/(q-1)}` of GF(q), packed as `sum a_j p^j`. For prime
//! `q` a digit is simply the residue mod p.

use crate::error::{Error, Result};

/// Default refusal threshold on `q^{2n}` (entries per field table).
pub const DEFAULT_TABLE_CAP: u64 = 1 << 26;

const ZERO_RAW: u32 = u32::MAX;

/// An element of GF(q^{2n}) as a discrete log to `beta`, or zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(ZERO_RAW);

    /// The exponent `k` with `self = beta^k`, `None` for zero.
    #[inline]
    pub fn log(self) -> Option<u32> {
        if self.0 == ZERO_RAW {
            None
        } else {
            Some(self.0)
        }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == ZERO_RAW
    }
}

impl std::fmt::Debug for Elem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.log() {
            None => write!(f, "0"),
            Some(k) => write!(f, "b^{k}"),
        }
    }
}

/// Which member of the tower an element is asserted to live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subfield {
    /// GF(q)
    Base,
    /// GF(q^n)
    Mid,
    /// GF(q^{2n})
    Full,
}

#[derive(Clone, Debug)]
pub struct TowerOptions {
    /// Monic degree-2ne polynomial over GF(p), low degree first.
    pub modulus: Option<Vec<u32>>,
    pub table_cap: u64,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions {
            modulus: None,
            table_cap: DEFAULT_TABLE_CAP,
        }
    }
}

pub fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= v {
        if v.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Field tables for GF(q^{2n}) with the coupled primitive elements
/// `beta` and `gamma = beta^{q^n+1}`. Immutable after [`Tower::build`].
#[derive(Clone)]
pub struct Tower {
    p: u32,
    e: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    /// q^{2n} - 1
    order: u32,
    /// q^n - 1
    mid_order: u32,
    /// exponent -> packed coordinate index
    exp: Vec<u32>,
    /// packed coordinate index -> exponent
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one: u32,
    /// t -> packed GF(q^n) coordinate index of gamma^t
    mid_index: Vec<u32>,
    /// packed GF(q^n) coordinate index -> t
    mid_log: Vec<u32>,
    /// k -> digit of Tr_{q^{2n}/q}(beta^k)
    trace_full: Vec<u32>,
    /// t -> digit of Tr_{q^n/q}(gamma^t)
    trace_mid: Vec<u32>,
}

impl std::fmt::Debug for Tower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Tower")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Digit-wise addition of base-p packed vectors with `m` digits.
fn add_packed(a: u32, b: u32, p: u32, m: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let (mut a, mut b) = (a, b);
    let mut out = 0u32;
    let mut place = 1u32;
    for _ in 0..m {
        let d = (a % p + b % p) % p;
        out += d * place;
        a /= p;
        b /= p;
        place = place.wrapping_mul(p);
    }
    out
}

fn pack(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

/// Fills `out` with the successive powers of `x` modulo the monic polynomial `f`
/// (packed base p). False if `x` does not have multiplicative order exactly `p^m - 1`.
fn powers_of_x(p: u32, f: &[u32], order: u32, out: &mut Vec<u32>) -> bool {
    let m = f.len() - 1;
    out.clear();
    if f[0] == 0 {
        return false;
    }
    let mut digits = vec![0u32; m];
    digits[0] = 1;
    for k in 0..order {
        let packed = pack(&digits, p);
        if k > 0 && packed == 1 {
            return false;
        }
        out.push(packed);
        let top = digits[m - 1];
        for i in (1..m).rev() {
            digits[i] = digits[i - 1];
        }
        digits[0] = 0;
        if top != 0 {
            for (i, d) in digits.iter_mut().enumerate() {
                *d = (*d + p - (top * f[i]) % p) % p;
            }
        }
    }
    pack(&digits, p) == 1
}

/// Lexicographically smallest primitive polynomial of degree `m` over GF(p),
/// comparing coefficient lists from the constant term up.
fn smallest_primitive(p: u32, m: u32, order: u32, powers: &mut Vec<u32>) -> Vec<u32> {
    let m = m as usize;
    // coefficients c_0..c_{m-1}; c_0 is the most significant counter digit
    let mut coeffs = vec![0u32; m];
    coeffs[0] = 1;
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if powers_of_x(p, &f, order, powers) {
            return f;
        }
        // increment with c_{m-1} as the least significant digit
        let mut i = m - 1;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            assert!(i > 0, "no primitive polynomial found");
            i -= 1;
        }
    }
}

impl Tower {
    pub fn new(p: u32, e: u32, n: u32) -> Result<Tower> {
        Tower::build(p, e, n, &TowerOptions::default())
    }

    pub fn build(p: u32, e: u32, n: u32, opts: &TowerOptions) -> Result<Tower> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::InvalidParams("exponent e must be at least 1".into()));
        }
        if n < 2 {
            return Err(Error::InvalidParams(format!("n must be at least 2, got {n}")));
        }
        let m = 2 * n * e;
        let size = (p as u64)
            .checked_pow(m)
            .filter(|&s| s < u32::MAX as u64)
            .ok_or(Error::TableTooLarge {
                entries: u64::MAX,
                cap: opts.table_cap,
            })?;
        if size > opts.table_cap {
            return Err(Error::TableTooLarge {
                entries: size,
                cap: opts.table_cap,
            });
        }
        let q = p.pow(e);
        let order = (size - 1) as u32;

        let mut poly_exp = Vec::with_capacity(order as usize);
        let modulus = match &opts.modulus {
            Some(f) => {
                if f.len() != m as usize + 1 {
                    return Err(Error::BadModulus(format!(
                        "expected {} coefficients, got {}",
                        m + 1,
                        f.len()
                    )));
                }
                if f.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus(format!("coefficient out of range for p = {p}")));
                }
                if f[m as usize] != 1 {
                    return Err(Error::BadModulus("modulus must be monic".into()));
                }
                if !powers_of_x(p, f, order, &mut poly_exp) {
                    return Err(Error::BadModulus(
                        "not primitive (reducible, or root of insufficient order)".into(),
                    ));
                }
                f.clone()
            }
            None => smallest_primitive(p, m, order, &mut poly_exp),
        };

        // Re-express every element in the GF(p)-basis {omega^j beta^i}.
        let omega_log = (order / (q - 1)) as u64;
        let basis: Vec<u32> = (0..m)
            .map(|s| {
                let (i, j) = ((s / e) as u64, (s % e) as u64);
                poly_exp[((j * omega_log + i) % order as u64) as usize]
            })
            .collect();
        let mut poly_log = vec![ZERO_RAW; size as usize];
        for (k, &v) in poly_exp.iter().enumerate() {
            poly_log[v as usize] = k as u32;
        }
        drop(poly_exp);
        let mut vec_of = vec![0u32; size as usize];
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![ZERO_RAW; size as usize];
        for t in 1..size as u32 {
            let (mut s, mut place, mut rest) = (0usize, 1u32, t);
            while rest % p == 0 {
                rest /= p;
                place *= p;
                s += 1;
            }
            let v = add_packed(vec_of[(t - place) as usize], basis[s], p, m);
            vec_of[t as usize] = v;
            let k = poly_log[v as usize];
            exp[k as usize] = t;
            log[t as usize] = k;
        }
        drop(vec_of);
        drop(poly_log);

        let zech = (0..order)
            .map(|k| log[add_packed(exp[0], exp[k as usize], p, m) as usize])
            .collect();
        let neg_one = if p == 2 { 0 } else { order / 2 };
        let mid_order = q.pow(n) - 1;

        let mut tower = Tower {
            p,
            e,
            n,
            q,
            modulus,
            order,
            mid_order,
            exp,
            log,
            zech,
            neg_one,
            mid_index: Vec::new(),
            mid_log: Vec::new(),
            trace_full: Vec::new(),
            trace_mid: Vec::new(),
        };
        tower.build_mid_coords();
        tower.build_traces();
        Ok(tower)
    }

    fn build_mid_coords(&mut self) {
        let (p, e) = (self.p, self.e);
        let mid_size = self.mid_order + 1;
        let omega = self.omega();
        let gamma = self.gamma();
        let basis: Vec<Elem> = (0..self.n * e)
            .map(|s| self.mul(self.pow(omega, (s % e) as u64), self.pow(gamma, (s / e) as u64)))
            .collect();
        let mut elem_of = vec![Elem::ZERO; mid_size as usize];
        let mut mid_index = vec![u32::MAX; self.mid_order as usize];
        let mut mid_log = vec![ZERO_RAW; mid_size as usize];
        let step = self.norm_exponent();
        for t in 1..mid_size {
            let (mut s, mut place, mut rest) = (0usize, 1u32, t);
            while rest % p == 0 {
                rest /= p;
                place *= p;
                s += 1;
            }
            let v = self.add(elem_of[(t - place) as usize], basis[s]);
            elem_of[t as usize] = v;
            let k = v.log().expect("basis expansion of a nonzero vector is nonzero");
            debug_assert_eq!(k % step, 0);
            let tt = k / step;
            debug_assert_eq!(mid_index[tt as usize], u32::MAX);
            mid_index[tt as usize] = t;
            mid_log[t as usize] = tt;
        }
        self.mid_index = mid_index;
        self.mid_log = mid_log;
    }

    fn build_traces(&mut self) {
        let trace_full = (0..self.order)
            .map(|k| self.digit_unchecked(self.conjugate_sum(Elem(k), 2 * self.n)))
            .collect();
        let step = self.norm_exponent();
        let trace_mid = (0..self.mid_order)
            .map(|t| self.digit_unchecked(self.conjugate_sum(Elem(t * step), self.n)))
            .collect();
        self.trace_full = trace_full;
        self.trace_mid = trace_mid;
    }

    /// `x + x^q + ... + x^{q^{terms-1}}`
    fn conjugate_sum(&self, x: Elem, terms: u32) -> Elem {
        (0..terms).fold(Elem::ZERO, |acc, i| self.add(acc, self.frobenius(x, i)))
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Multiplicative order of `beta`, i.e. `q^{2n} - 1`.
    pub fn order(&self) -> u32 {
        self.order
    }
    /// `q^n - 1`, the order of `gamma`.
    pub fn mid_order(&self) -> u32 {
        self.mid_order
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// `q^n + 1`: the exponent of the relative norm and the index of GF(q^n)^* in GF(q^{2n})^*.
    pub fn norm_exponent(&self) -> u32 {
        self.mid_order + 2
    }
    /// `(q^{2n} - 1)/(q - 1)`, the index of GF(q)^* in GF(q^{2n})^*.
    pub fn base_index(&self) -> u32 {
        self.order / (self.q - 1)
    }

    pub fn one(&self) -> Elem {
        Elem(0)
    }
    pub fn beta(&self) -> Elem {
        Elem(1)
    }
    pub fn gamma(&self) -> Elem {
        Elem(self.norm_exponent() % self.order)
    }
    /// `beta^{(q^n-1)/(q-1)}`, generator of the Singer subgroup.
    pub fn xi(&self) -> Elem {
        Elem(self.mid_order / (self.q - 1))
    }
    /// Primitive element of GF(q).
    pub fn omega(&self) -> Elem {
        Elem(self.base_index() % self.order)
    }

    pub fn pow_beta(&self, k: u64) -> Elem {
        Elem((k % self.order as u64) as u32)
    }

    /// The `q - 1` nonzero elements of GF(q), `omega^0, omega^1, ...`.
    pub fn base_units(&self) -> impl Iterator<Item = Elem> + '_ {
        let step = self.base_index();
        (0..self.q - 1).map(move |j| Elem(j * step))
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        match (x.log(), y.log()) {
            (None, _) => y,
            (_, None) => x,
            (Some(a), Some(b)) => {
                let d = if b >= a { b - a } else { b + self.order - a };
                let z = self.zech[d as usize];
                if z == ZERO_RAW {
                    Elem::ZERO
                } else {
                    Elem(((a as u64 + z as u64) % self.order as u64) as u32)
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        self.mul(x, Elem(self.neg_one))
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        match (x.log(), y.log()) {
            (Some(a), Some(b)) => Elem(((a as u64 + b as u64) % self.order as u64) as u32),
            _ => Elem::ZERO,
        }
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        match x.log() {
            None => Err(Error::ZeroInverse),
            Some(a) => Ok(Elem((self.order - a) % self.order)),
        }
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: Elem, k: u64) -> Elem {
        match x.log() {
            None if k == 0 => self.one(),
            None => Elem::ZERO,
            Some(a) => {
                let ord = self.order as u64;
                Elem(((a as u64 * (k % ord)) % ord) as u32)
            }
        }
    }

    /// `x^{q^i}`
    pub fn frobenius(&self, x: Elem, i: u32) -> Elem {
        match x.log() {
            None => Elem::ZERO,
            Some(a) => {
                let ord = self.order as u64;
                let mut k = a as u64;
                for _ in 0..i {
                    k = k * self.q as u64 % ord;
                }
                Elem(k as u32)
            }
        }
    }

    pub fn contains(&self, x: Elem, field: Subfield) -> bool {
        match (x.log(), field) {
            (None, _) | (_, Subfield::Full) => true,
            (Some(k), Subfield::Mid) => k % self.norm_exponent() == 0,
            (Some(k), Subfield::Base) => k % self.base_index() == 0,
        }
    }

    /// `x^{q^n+1}`, the norm from GF(q^{2n}) onto GF(q^n).
    pub fn rel_norm(&self, x: Elem) -> Elem {
        self.pow(x, self.norm_exponent() as u64)
    }

    /// Absolute trace to GF(q) of an element of `from` (GF(q^n) or GF(q^{2n})).
    pub fn trace(&self, x: Elem, from: Subfield) -> Result<Elem> {
        Ok(self.elem_of_digit(self.trace_digit(x, from)?))
    }

    /// As [`Tower::trace`], returning the GF(q) digit.
    pub fn trace_digit(&self, x: Elem, from: Subfield) -> Result<u32> {
        if !self.contains(x, from) {
            return Err(Error::NotInSubfield);
        }
        Ok(match (x.log(), from) {
            (None, _) => 0,
            (Some(k), Subfield::Full) => self.trace_full[k as usize],
            (Some(k), Subfield::Mid) => {
                self.trace_mid[((k / self.norm_exponent()) % self.mid_order) as usize]
            }
            (Some(k), Subfield::Base) => self.digit_unchecked(Elem(k)),
        })
    }

    /// Trace digit of `beta^k` (big field), hot-loop form.
    #[inline]
    pub(crate) fn trace_full_log(&self, k: u32) -> u32 {
        self.trace_full[k as usize]
    }

    /// Trace digit of `gamma^t` (GF(q^n) to GF(q)), hot-loop form.
    #[inline]
    pub(crate) fn trace_mid_log(&self, t: u32) -> u32 {
        self.trace_mid[t as usize]
    }

    /// The exponent `t` with `y = gamma^t`, for nonzero `y` in GF(q^n).
    pub fn mid_log(&self, y: Elem) -> Result<Option<u32>> {
        if !self.contains(y, Subfield::Mid) {
            return Err(Error::NotInSubfield);
        }
        Ok(y.log().map(|k| k / self.norm_exponent()))
    }

    pub fn gamma_pow(&self, t: u64) -> Elem {
        let t = t % self.mid_order as u64;
        Elem((t * self.norm_exponent() as u64 % self.order as u64) as u32)
    }

    fn digit_unchecked(&self, x: Elem) -> u32 {
        match x.log() {
            None => 0,
            Some(k) => self.exp[k as usize],
        }
    }

    /// GF(q) element to its packed digit.
    pub fn digit_of(&self, x: Elem) -> Result<u32> {
        if !self.contains(x, Subfield::Base) {
            return Err(Error::NotInSubfield);
        }
        Ok(self.digit_unchecked(x))
    }

    pub fn elem_of_digit(&self, d: u32) -> Elem {
        debug_assert!(d < self.q);
        Elem(self.log[d as usize])
    }

    /// Packed coordinate index of `x` over the basis `1, beta, ..., beta^{2n-1}`:
    /// `sum c_i q^i`.
    pub fn coord_index(&self, x: Elem) -> u32 {
        self.digit_unchecked(x)
    }

    pub fn from_coord_index(&self, idx: u32) -> Elem {
        Elem(self.log[idx as usize])
    }

    /// Packed coordinate index of `y` in GF(q^n) over `1, gamma, ..., gamma^{n-1}`.
    pub fn mid_coord_index(&self, y: Elem) -> Result<u32> {
        Ok(match self.mid_log(y)? {
            None => 0,
            Some(t) => self.mid_index[t as usize],
        })
    }

    pub fn from_mid_coord_index(&self, idx: u32) -> Elem {
        match self.mid_log[idx as usize] {
            ZERO_RAW => Elem::ZERO,
            t => self.gamma_pow(t as u64),
        }
    }

    fn unpack(&self, mut idx: u32, len: u32) -> Vec<u32> {
        (0..len)
            .map(|_| {
                let d = idx % self.q;
                idx /= self.q;
                d
            })
            .collect()
    }

    /// The 2n GF(q) coordinates of `x` in the basis `1, beta, ..., beta^{2n-1}`.
    pub fn coords(&self, x: Elem) -> Vec<u32> {
        self.unpack(self.coord_index(x), 2 * self.n)
    }

    /// The n GF(q) coordinates of `y` in GF(q^n) over `1, gamma, ..., gamma^{n-1}`.
    pub fn coords_mid(&self, y: Elem) -> Result<Vec<u32>> {
        Ok(self.unpack(self.mid_coord_index(y)?, self.n))
    }

    pub fn from_coords(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() != 2 * self.n as usize || digits.iter().any(|&d| d >= self.q) {
            return Err(Error::InvalidParams("bad coordinate vector".into()));
        }
        Ok(self.from_coord_index(digits.iter().rev().fold(0, |acc, &d| acc * self.q + d)))
    }

    pub fn from_coords_mid(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() != self.n as usize || digits.iter().any(|&d| d >= self.q) {
            return Err(Error::InvalidParams("bad coordinate vector".into()));
        }
        Ok(self.from_mid_coord_index(digits.iter().rev().fold(0, |acc, &d| acc * self.q + d)))
    }

    pub fn base_field(&self) -> BaseField {
        BaseField::new(self)
    }
}

/// Table arithmetic on GF(q) digits.
#[derive(Clone, Debug)]
pub struct BaseField {
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl BaseField {
    fn new(t: &Tower) -> BaseField {
        let q = t.q;
        let mut add = vec![0; (q * q) as usize];
        let mut mul = vec![0; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                let (x, y) = (t.elem_of_digit(a), t.elem_of_digit(b));
                add[(a * q + b) as usize] = t.digit_unchecked(t.add(x, y));
                mul[(a * q + b) as usize] = t.digit_unchecked(t.mul(x, y));
            }
        }
        let neg = (0..q).map(|a| t.digit_unchecked(t.neg(t.elem_of_digit(a)))).collect();
        let inv = (0..q)
            .map(|a| match t.inv(t.elem_of_digit(a)) {
                Ok(x) => t.digit_unchecked(x),
                Err(_) => 0,
            })
            .collect();
        BaseField { q, add, mul, neg, inv }
    }

    pub fn q(&self) -> u32 {
        self.q
    }
    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    /// Zero for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// Rank of a matrix over GF(q) given as rows of digits.
    pub fn rank(&self, rows: &[Vec<u32>]) -> usize {
        let mut m: Vec<Vec<u32>> = rows.to_vec();
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
                continue;
            };
            m.swap(rank, piv);
            let s = self.inv(m[rank][c]);
            for v in m[rank].iter_mut() {
                *v = self.mul(*v, s);
            }
            let pivot = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[c] != 0 {
                    let f = row[c];
                    for (v, &pv) in row.iter_mut().zip(&pivot) {
                        *v = self.sub(*v, self.mul(f, pv));
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_small_towers() {
        let t = Tower::new(3, 1, 2).unwrap();
        assert_eq!(t.order(), 80);
        assert_eq!(t.gamma(), Elem(10));
        assert_eq!(t.mid_order(), 8);

        let t = Tower::new(2, 1, 2).unwrap();
        assert_eq!(t.order(), 15);
        assert_eq!(t.gamma(), Elem(5));
        assert_eq!(t.mid_order(), 3);

        let t = Tower::new(3, 1, 3).unwrap();
        assert_eq!(t.order(), 728);
        assert_eq!(t.gamma(), Elem(28));
        assert_eq!(t.mid_order(), 26);
    }

    #[test]
    fn default_modulus_is_smallest_primitive() {
        // GF(16): x^4 + x^3 + 1 precedes x^4 + x + 1 when compared from the constant term.
        assert_eq!(Tower::new(2, 1, 2).unwrap().modulus(), &[1, 0, 0, 1, 1]);
        // GF(81): every primitive quartic has constant term 2; x^4 + x^3 + 2 is the first.
        assert_eq!(Tower::new(3, 1, 2).unwrap().modulus(), &[2, 0, 0, 1, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Tower::new(4, 1, 2), Err(Error::NotPrime(4))));
        assert!(matches!(Tower::new(3, 1, 1), Err(Error::InvalidParams(_))));
        assert!(matches!(Tower::new(2, 0, 2), Err(Error::InvalidParams(_))));
        let opts = TowerOptions {
            modulus: None,
            table_cap: 100,
        };
        assert!(Tower::build(3, 1, 2, &opts).is_ok());
        assert!(matches!(
            Tower::build(3, 1, 3, &opts),
            Err(Error::TableTooLarge { entries: 729, .. })
        ));
    }

    #[test]
    fn rejects_non_primitive_modulus() {
        // x^4 + 1 over GF(2) is reducible.
        let opts = TowerOptions {
            modulus: Some(vec![1, 0, 0, 0, 1]),
            ..Default::default()
        };
        assert!(matches!(Tower::build(2, 1, 2, &opts), Err(Error::BadModulus(_))));
        // x^4 + x^3 + x^2 + x + 1 is irreducible but its root has order 5.
        let opts = TowerOptions {
            modulus: Some(vec![1, 1, 1, 1, 1]),
            ..Default::default()
        };
        assert!(matches!(Tower::build(2, 1, 2, &opts), Err(Error::BadModulus(_))));
        let opts = TowerOptions {
            modulus: Some(vec![1, 1, 0, 0, 1]),
            ..Default::default()
        };
        let t = Tower::build(2, 1, 2, &opts).unwrap();
        assert_eq!(t.modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn additive_identities() {
        for (p, e, n) in [(2, 1, 2), (3, 1, 2), (2, 2, 2)] {
            let t = Tower::new(p, e, n).unwrap();
            for k in 0..t.order() {
                let x = Elem(k);
                assert_eq!(t.add(x, t.neg(x)), Elem::ZERO);
                assert_eq!(t.add(x, Elem::ZERO), x);
                if p == 2 {
                    assert_eq!(t.add(x, x), Elem::ZERO);
                }
            }
        }
    }

    #[test]
    fn cyclic_multiplication() {
        let t = Tower::new(3, 1, 2).unwrap();
        assert_eq!(t.mul(Elem(50), Elem(70)), Elem(40));
        assert_eq!(t.inv(Elem(3)).unwrap(), Elem(77));
        assert!(matches!(t.inv(Elem::ZERO), Err(Error::ZeroInverse)));
        assert_eq!(t.pow(t.beta(), 80), t.one());
    }

    #[test]
    fn trace_examples() {
        let t = Tower::new(3, 1, 2).unwrap();
        assert_eq!(t.trace(Elem::ZERO, Subfield::Full).unwrap(), Elem::ZERO);
        // GF(9) -> GF(3): Tr(1) = 1 + 1 = 2
        assert_eq!(t.trace_digit(t.one(), Subfield::Mid).unwrap(), 2);
        // GF(81) -> GF(3): four-term conjugate sum, evaluated with pow/add only
        for k in [1u64, 7, 13, 41, 79] {
            let x = t.pow_beta(k);
            let mut s = Elem::ZERO;
            for i in 0..4 {
                s = t.add(s, t.pow(x, 3u64.pow(i)));
            }
            assert_eq!(t.trace(x, Subfield::Full).unwrap(), s);
        }
        assert!(matches!(t.trace(t.beta(), Subfield::Mid), Err(Error::NotInSubfield)));
    }

    #[test]
    fn rel_norm_examples() {
        let t = Tower::new(3, 1, 3).unwrap();
        assert_eq!(t.rel_norm(t.beta()), t.gamma());
        assert_eq!(t.rel_norm(Elem::ZERO), Elem::ZERO);
        let (x, y) = (t.pow_beta(123), t.pow_beta(456));
        assert_eq!(t.mul(t.rel_norm(x), t.rel_norm(y)), t.rel_norm(t.mul(x, y)));
    }

    #[test]
    fn coords_examples() {
        for (p, e, n) in [(3, 1, 2), (2, 2, 2)] {
            let t = Tower::new(p, e, n).unwrap();
            let len = 2 * n as usize;
            assert_eq!(t.coords(Elem::ZERO), vec![0; len]);
            let mut unit = vec![0; len];
            unit[1] = 1;
            assert_eq!(t.coords(t.beta()), unit);
            let (x, y) = (t.pow_beta(17), t.pow_beta(33));
            let bf = t.base_field();
            let lhs = t.coords(t.add(x, y));
            let rhs: Vec<u32> = t
                .coords(x)
                .iter()
                .zip(t.coords(y))
                .map(|(&a, b)| bf.add(a, b))
                .collect();
            assert_eq!(lhs, rhs);
            // coords really expand over powers of beta
            let c = t.coords(x);
            let back = c.iter().enumerate().fold(Elem::ZERO, |acc, (i, &d)| {
                t.add(acc, t.mul(t.elem_of_digit(d), t.pow_beta(i as u64)))
            });
            assert_eq!(back, x);
        }
    }

    #[test]
    fn mid_coords_expand_over_gamma() {
        let t = Tower::new(2, 2, 2).unwrap();
        for s in 0..t.mid_order() as u64 {
            let y = t.gamma_pow(s);
            let c = t.coords_mid(y).unwrap();
            let back = c.iter().enumerate().fold(Elem::ZERO, |acc, (i, &d)| {
                t.add(acc, t.mul(t.elem_of_digit(d), t.gamma_pow(i as u64)))
            });
            assert_eq!(back, y);
            assert_eq!(t.from_coords_mid(&c).unwrap(), y);
        }
    }

    #[test]
    fn base_field_rank() {
        let t = Tower::new(3, 1, 2).unwrap();
        let bf = t.base_field();
        assert_eq!(bf.rank(&[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]), 2);
        assert_eq!(bf.rank(&[vec![1, 0], vec![0, 1]]), 2);
    }
}
