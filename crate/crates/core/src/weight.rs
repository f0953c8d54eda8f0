//! The frequency-space weight semi-ring.
//!
//! A [`WeightZ`] holds `z[p][k][j]` for the three roles, every nonzero
//! frequency and every hidden node. Only one frequency of each conjugate pair
//! is stored; the partner is its complex conjugate, and self-conjugate
//! frequencies hold real values. Hermitian closure is therefore a property of
//! the layout rather than something to be checked after each operation.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CogsError, Result};
use crate::group::GroupSpec;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Imaginary parts below this are treated as rounding noise at self-conjugate
/// frequencies.
const REAL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    A,
    B,
    C,
}

pub const ROLES: [Role; 3] = [Role::A, Role::B, Role::C];

impl Role {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_char(self) -> char {
        match self {
            Role::A => 'a',
            Role::B => 'b',
            Role::C => 'c',
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Frequency bookkeeping shared by every weight over the same group.
#[derive(Debug)]
struct Layout {
    spec: GroupSpec,
    reps: Vec<usize>,
    /// For each flat frequency: (position in `reps`, stored as conjugate).
    slot: Vec<Option<(usize, bool)>>,
}

impl Layout {
    fn new(spec: GroupSpec) -> Self {
        let reps = spec.representatives();
        let mut slot = vec![None; spec.size()];
        for (r, &k) in reps.iter().enumerate() {
            slot[k] = Some((r, false));
            let nk = spec.neg_flat(k);
            if nk != k {
                slot[nk] = Some((r, true));
            }
        }
        Self { spec, reps, slot }
    }
}

#[derive(Clone)]
pub struct WeightZ {
    layout: Arc<Layout>,
    q: usize,
    /// Row-major `[role][rep][node]`.
    data: Vec<Complex64>,
}

impl fmt::Debug for WeightZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightZ")
            .field("group", &self.layout.spec.to_string())
            .field("q", &self.q)
            .finish_non_exhaustive()
    }
}

impl WeightZ {
    pub fn zeros(spec: &GroupSpec, q: usize) -> Self {
        let layout = Arc::new(Layout::new(spec.clone()));
        let n = 3 * layout.reps.len() * q;
        Self { layout, q, data: vec![ZERO; n] }
    }

    fn zeros_like(&self, q: usize) -> Self {
        let n = 3 * self.layout.reps.len() * q;
        Self { layout: Arc::clone(&self.layout), q, data: vec![ZERO; n] }
    }

    /// Builds a weight from its values at representative frequencies.
    /// `f(role, k, j)` is called with flat representative `k`.
    pub fn from_rep_fn(
        spec: &GroupSpec,
        q: usize,
        mut f: impl FnMut(Role, usize, usize) -> Complex64,
    ) -> Result<Self> {
        let mut z = Self::zeros(spec, q);
        let reps = z.layout.reps.clone();
        for p in ROLES {
            for (r, &k) in reps.iter().enumerate() {
                for j in 0..q {
                    let v = f(p, k, j);
                    z.data[(p.index() * reps.len() + r) * q + j] = z.checked_value(k, v)?;
                }
            }
        }
        Ok(z)
    }

    /// Order-`n` weight supported on the pair `{k, -k}`; `nodes[j]` gives
    /// `[a, b, c]` at frequency `k` (which need not be the representative).
    pub fn single_frequency(spec: &GroupSpec, k: usize, nodes: &[[Complex64; 3]]) -> Result<Self> {
        if k == 0 {
            return Err(CogsError::Validation("frequency 0 is excluded".into()));
        }
        spec.check_flat(k)?;
        let mut z = Self::zeros(spec, nodes.len());
        for (j, node) in nodes.iter().enumerate() {
            for p in ROLES {
                z.set(p, k, j, node[p.index()])?;
            }
        }
        Ok(z)
    }

    fn checked_value(&self, k: usize, v: Complex64) -> Result<Complex64> {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(CogsError::Numeric(format!("non-finite entry at frequency {k}")));
        }
        if self.layout.spec.is_self_conjugate(k) {
            if v.im.abs() > REAL_TOL * (1.0 + v.re.abs()) {
                return Err(CogsError::Validation(format!(
                    "self-conjugate frequency {k} requires a real entry, got {v}"
                )));
            }
            return Ok(Complex64::new(v.re, 0.0));
        }
        Ok(v)
    }

    /// Writes `z[p][k][j]`; the conjugate partner follows automatically.
    pub fn set(&mut self, p: Role, k: usize, j: usize, v: Complex64) -> Result<()> {
        let (r, conj) = self
            .layout
            .slot
            .get(k)
            .copied()
            .flatten()
            .ok_or_else(|| CogsError::Validation(format!("frequency {k} cannot be stored")))?;
        if j >= self.q {
            return Err(CogsError::Validation(format!("node {j} out of range for order {}", self.q)));
        }
        let v = if conj { v.conj() } else { v };
        let rep = self.layout.reps[r];
        let v = self.checked_value(rep, v)?;
        let idx = self.index(p, r, j);
        self.data[idx] = v;
        Ok(())
    }

    #[inline]
    fn index(&self, p: Role, r: usize, j: usize) -> usize {
        (p.index() * self.layout.reps.len() + r) * self.q + j
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.layout.spec
    }

    pub fn d(&self) -> usize {
        self.layout.spec.size()
    }

    /// Number of hidden nodes.
    pub fn order(&self) -> usize {
        self.q
    }

    pub fn reps(&self) -> &[usize] {
        &self.layout.reps
    }

    /// Position of `k` among the representatives, and whether `k` is the
    /// conjugate partner. `None` for `k = 0`.
    pub fn rep_slot(&self, k: usize) -> Option<(usize, bool)> {
        self.layout.slot.get(k).copied().flatten()
    }

    /// `z[p][k][j]` for any flat frequency; zero at `k = 0`.
    #[inline]
    pub fn get(&self, p: Role, k: usize, j: usize) -> Complex64 {
        match self.layout.slot[k] {
            None => ZERO,
            Some((r, false)) => self.data[self.index(p, r, j)],
            Some((r, true)) => self.data[self.index(p, r, j)].conj(),
        }
    }

    /// Stored node vector at the `r`-th representative.
    pub fn rep_values(&self, p: Role, r: usize) -> &[Complex64] {
        let start = self.index(p, r, 0);
        &self.data[start..start + self.q]
    }

    /// Node vector at any nonzero frequency.
    pub fn values(&self, p: Role, k: usize) -> Vec<Complex64> {
        (0..self.q).map(|j| self.get(p, k, j)).collect()
    }

    /// Dense `[k][j]` table for one role over all `d` frequencies.
    pub fn expanded(&self, p: Role) -> Vec<Complex64> {
        let d = self.d();
        let mut out = vec![ZERO; d * self.q];
        for k in 1..d {
            for j in 0..self.q {
                out[k * self.q + j] = self.get(p, k, j);
            }
        }
        out
    }

    pub fn raw(&self) -> &[Complex64] {
        &self.data
    }

    pub fn same_group(&self, other: &WeightZ) -> Result<()> {
        if self.layout.spec != other.layout.spec {
            return Err(CogsError::SpecMismatch(
                self.layout.spec.to_string(),
                other.layout.spec.to_string(),
            ));
        }
        Ok(())
    }

    /// Concatenation of hidden nodes.
    pub fn ring_add(&self, other: &WeightZ) -> Result<WeightZ> {
        self.same_group(other)?;
        let mut out = self.zeros_like(self.q + other.q);
        for p in ROLES {
            for r in 0..self.layout.reps.len() {
                let base = out.index(p, r, 0);
                out.data[base..base + self.q].copy_from_slice(self.rep_values(p, r));
                out.data[base + self.q..base + self.q + other.q]
                    .copy_from_slice(other.rep_values(p, r));
            }
        }
        Ok(out)
    }

    /// Per-(role, frequency) Kronecker product; node `(j1, j2)` lands at
    /// `j1 * ord(other) + j2`.
    pub fn ring_mul(&self, other: &WeightZ) -> Result<WeightZ> {
        self.same_group(other)?;
        let q2 = other.q;
        let mut out = self.zeros_like(self.q * q2);
        for p in ROLES {
            for r in 0..self.layout.reps.len() {
                let x = self.rep_values(p, r);
                let y = other.rep_values(p, r);
                let base = out.index(p, r, 0);
                for (j1, &u) in x.iter().enumerate() {
                    for (j2, &v) in y.iter().enumerate() {
                        out.data[base + j1 * q2 + j2] = u * v;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sum<'a>(spec: &GroupSpec, terms: impl IntoIterator<Item = &'a WeightZ>) -> Result<WeightZ> {
        terms.into_iter().try_fold(WeightZ::zeros(spec, 0), |acc, z| acc.ring_add(z))
    }

    pub fn product<'a>(spec: &GroupSpec, terms: impl IntoIterator<Item = &'a WeightZ>) -> Result<WeightZ> {
        terms.into_iter().try_fold(WeightZ::ring_identity(spec), |acc, z| acc.ring_mul(z))
    }

    /// `z^n` under ring multiplication; `z^0` is the ring identity.
    pub fn pow(&self, n: usize) -> WeightZ {
        let mut out = WeightZ::ring_identity(self.spec());
        for _ in 0..n {
            out = out.ring_mul(self).expect("same group");
        }
        out
    }

    /// Real scaling of every entry.
    pub fn scale(&self, alpha: f64) -> WeightZ {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= alpha);
        out
    }

    /// Scalar multiplication restricted to real `alpha`; a complex factor
    /// would break Hermitian closure.
    pub fn scalar_mul(&self, alpha: Complex64) -> Result<WeightZ> {
        if alpha.im != 0.0 {
            return Err(CogsError::Validation(format!(
                "scalar multiplication needs a real scalar, got {alpha}; use a unit instead"
            )));
        }
        Ok(self.scale(alpha.re))
    }

    /// Order-1 element with `z = 1` at every nonzero frequency.
    pub fn ring_identity(spec: &GroupSpec) -> WeightZ {
        let mut z = WeightZ::zeros(spec, 1);
        z.data.iter_mut().for_each(|v| *v = ONE);
        z
    }

    /// Order-1 element with `z = 1` at `+-k` only.
    pub fn freq_identity(spec: &GroupSpec, k: usize) -> Result<WeightZ> {
        WeightZ::single_frequency(spec, k, &[[ONE; 3]])
    }

    /// `[a, b, c] = [-1, -1, 1]` at `+-k`.
    pub fn pseudo_one(spec: &GroupSpec, k: usize) -> Result<WeightZ> {
        WeightZ::single_frequency(spec, k, &[[-ONE, -ONE, ONE]])
    }

    /// Nodes picked (and possibly repeated or reordered) by index.
    pub fn select_nodes(&self, nodes: &[usize]) -> Result<WeightZ> {
        if let Some(&bad) = nodes.iter().find(|&&j| j >= self.q) {
            return Err(CogsError::Validation(format!("node {bad} out of range for order {}", self.q)));
        }
        let mut out = self.zeros_like(nodes.len());
        for p in ROLES {
            for r in 0..self.layout.reps.len() {
                let src = self.rep_values(p, r).to_vec();
                let base = out.index(p, r, 0);
                for (t, &j) in nodes.iter().enumerate() {
                    out.data[base + t] = src[j];
                }
            }
        }
        Ok(out)
    }

    /// Zeroes every frequency outside the given representatives.
    pub fn restrict_to(&self, reps: &[usize]) -> WeightZ {
        let mut out = self.clone();
        for (r, k) in self.layout.reps.iter().enumerate() {
            if !reps.contains(k) {
                for p in ROLES {
                    let base = out.index(p, r, 0);
                    out.data[base..base + self.q].iter_mut().for_each(|v| *v = ZERO);
                }
            }
        }
        out
    }

    /// Largest entry-wise difference between node `i` of `self` and node `j`
    /// of `other`.
    fn node_distance(&self, i: usize, other: &WeightZ, j: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for p in ROLES {
            for r in 0..self.layout.reps.len() {
                let a = self.data[self.index(p, r, i)];
                let b = other.data[other.index(p, r, j)];
                worst = worst.max((a - b).norm());
            }
        }
        worst
    }

    /// True iff some node permutation brings the two weights within `tol`
    /// (max entry difference). Exhaustive backtracking up to order 8,
    /// greedy lowest-index matching above.
    pub fn equal_up_to_permutation(&self, other: &WeightZ, tol: f64) -> bool {
        if self.layout.spec != other.layout.spec || self.q != other.q {
            return false;
        }
        let q = self.q;
        let close: Vec<Vec<bool>> = (0..q)
            .map(|i| (0..q).map(|j| self.node_distance(i, other, j) <= tol).collect())
            .collect();
        if q <= 8 {
            fn search(i: usize, close: &[Vec<bool>], used: &mut [bool]) -> bool {
                if i == close.len() {
                    return true;
                }
                for j in 0..close.len() {
                    if !used[j] && close[i][j] {
                        used[j] = true;
                        if search(i + 1, close, used) {
                            return true;
                        }
                        used[j] = false;
                    }
                }
                false
            }
            search(0, &close, &mut vec![false; q])
        } else {
            let mut used = vec![false; q];
            for row in &close {
                match (0..q).find(|&j| !used[j] && row[j]) {
                    Some(j) => used[j] = true,
                    None => return false,
                }
            }
            true
        }
    }

    /// Splits `z = zc * y` at `k0`: `y` is the order-1 weight holding the
    /// pivot node's entries at `+-k0`, `zc` has the pivot moved to node 0 and
    /// all `+-k0` entries divided by the pivot's, so `zc` is 1 there. Other
    /// frequencies of `zc` are untouched.
    pub fn canonicalize_at(&self, k0: usize) -> Result<(WeightZ, WeightZ)> {
        let (r, _) = self
            .rep_slot(k0)
            .ok_or_else(|| CogsError::Validation("frequency 0 is excluded".into()))?;
        let triple = |j: usize| {
            ROLES.iter().map(|&p| self.data[self.index(p, r, j)]).product::<Complex64>().norm()
        };
        let mut pivot = None;
        let mut best = 1e-12;
        for j in 0..self.q {
            let t = triple(j);
            if t > best {
                best = t;
                pivot = Some(j);
            }
        }
        let pivot = pivot.ok_or(CogsError::NotCanonicalizable(k0))?;
        let order: Vec<usize> =
            std::iter::once(pivot).chain((0..self.q).filter(|&j| j != pivot)).collect();
        let mut zc = self.select_nodes(&order)?;
        let mut pivot_vals = [ZERO; 3];
        for p in ROLES {
            let pv = self.data[self.index(p, r, pivot)];
            pivot_vals[p.index()] = pv;
            let base = zc.index(p, r, 0);
            for v in &mut zc.data[base..base + self.q] {
                *v /= pv;
            }
            zc.data[base] = ONE;
        }
        let k_rep = self.layout.reps[r];
        let y = WeightZ::single_frequency(self.spec(), k_rep, &[pivot_vals])?;
        Ok((zc, y))
    }

    /// Real-space weights, `w_a = sum_k z_a phi_k`, `w_b` likewise,
    /// `w_c = sum_k z_c conj(phi_k)`.
    pub fn to_real(&self) -> RealNet {
        let spec = self.spec().clone();
        let d = spec.size();
        let q = self.q;
        let mut w = [vec![0.0; d * q], vec![0.0; d * q], vec![0.0; d * q]];
        for (r, &k) in self.layout.reps.iter().enumerate() {
            let pair = if spec.is_self_conjugate(k) { 1.0 } else { 2.0 };
            for g in 0..d {
                let phi = spec.character_flat(k, g);
                for p in ROLES {
                    let basis = if p == Role::C { phi.conj() } else { phi };
                    let row = &mut w[p.index()][g * q..(g + 1) * q];
                    for (j, out) in row.iter_mut().enumerate() {
                        // z phi + conj(z phi) over the pair.
                        *out += pair * (self.data[self.index(p, r, j)] * basis).re;
                    }
                }
            }
        }
        let [w_a, w_b, w_c] = w;
        RealNet { spec, q, w_a, w_b, w_c }
    }

    /// Projection of real weights onto the nonzero characters with the `1/d`
    /// normalization; role c projects onto `conj(phi_k)`.
    pub fn from_real(net: &RealNet) -> WeightZ {
        let spec = &net.spec;
        let d = spec.size();
        let q = net.q;
        let mut z = WeightZ::zeros(spec, q);
        let reps = z.layout.reps.clone();
        let inv_d = 1.0 / d as f64;
        for (r, &k) in reps.iter().enumerate() {
            for p in ROLES {
                let w = net.role(p);
                let mut acc = vec![ZERO; q];
                for g in 0..d {
                    let phi = spec.character_flat(k, g);
                    let basis = if p == Role::C { phi } else { phi.conj() };
                    for (a, &x) in acc.iter_mut().zip(&w[g * q..(g + 1) * q]) {
                        *a += basis * x;
                    }
                }
                let self_conj = spec.is_self_conjugate(k);
                for (j, a) in acc.into_iter().enumerate() {
                    let v = a * inv_d;
                    let idx = z.index(p, r, j);
                    z.data[idx] = if self_conj { Complex64::new(v.re, 0.0) } else { v };
                }
            }
        }
        z
    }
}

/// Real-space two-layer network; each weight matrix is `d x q`, row-major
/// (row = group element, column = hidden node).
#[derive(Clone, Debug, PartialEq)]
pub struct RealNet {
    pub spec: GroupSpec,
    pub q: usize,
    pub w_a: Vec<f64>,
    pub w_b: Vec<f64>,
    pub w_c: Vec<f64>,
}

impl RealNet {
    pub fn zeros(spec: &GroupSpec, q: usize) -> Self {
        let n = spec.size() * q;
        Self { spec: spec.clone(), q, w_a: vec![0.0; n], w_b: vec![0.0; n], w_c: vec![0.0; n] }
    }

    pub fn new(spec: &GroupSpec, q: usize, w_a: Vec<f64>, w_b: Vec<f64>, w_c: Vec<f64>) -> Result<Self> {
        let n = spec.size() * q;
        for (name, w) in [("w_a", &w_a), ("w_b", &w_b), ("w_c", &w_c)] {
            if w.len() != n {
                return Err(CogsError::Validation(format!("{name} has {} entries, expected {n}", w.len())));
            }
            if w.iter().any(|x| !x.is_finite()) {
                return Err(CogsError::Numeric(format!("{name} contains non-finite values")));
            }
        }
        Ok(Self { spec: spec.clone(), q, w_a, w_b, w_c })
    }

    pub fn d(&self) -> usize {
        self.spec.size()
    }

    pub fn role(&self, p: Role) -> &[f64] {
        match p {
            Role::A => &self.w_a,
            Role::B => &self.w_b,
            Role::C => &self.w_c,
        }
    }

    pub fn role_mut(&mut self, p: Role) -> &mut [f64] {
        match p {
            Role::A => &mut self.w_a,
            Role::B => &mut self.w_b,
            Role::C => &mut self.w_c,
        }
    }

    /// Copy with every column's mean over group elements removed.
    pub fn mean_centered(&self) -> RealNet {
        let mut out = self.clone();
        let (d, q) = (self.d(), self.q);
        for p in ROLES {
            let w = out.role_mut(p);
            for j in 0..q {
                let mean = (0..d).map(|g| w[g * q + j]).sum::<f64>() / d as f64;
                for g in 0..d {
                    w[g * q + j] -= mean;
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &RealNet) -> f64 {
        ROLES
            .iter()
            .flat_map(|&p| self.role(p).iter().zip(other.role(p)).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(spec: &GroupSpec, q: usize, seed: u64) -> WeightZ {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        WeightZ::from_rep_fn(spec, q, |_, k, _| {
            if spec.is_self_conjugate(k) { c(next(), 0.0) } else { c(next(), next()) }
        })
        .unwrap()
    }

    #[test]
    fn conjugate_partner_is_conjugate() {
        let spec = GroupSpec::cyclic(6).unwrap();
        let z = sample(&spec, 3, 1);
        for k in 1..6 {
            for p in ROLES {
                for j in 0..3 {
                    assert_eq!(z.get(p, spec.neg_flat(k), j), z.get(p, k, j).conj());
                }
            }
        }
        assert_eq!(z.get(Role::A, 3, 0).im, 0.0);
    }

    #[test]
    fn self_conjugate_entries_must_be_real() {
        let spec = GroupSpec::cyclic(4).unwrap();
        assert!(WeightZ::single_frequency(&spec, 2, &[[c(0.0, 1.0), ONE, ONE]]).is_err());
        assert!(WeightZ::single_frequency(&spec, 2, &[[-ONE, ONE, -ONE]]).is_ok());
    }

    #[test]
    fn orders_add_and_multiply() {
        let spec = GroupSpec::cyclic(7).unwrap();
        let (x, y) = (sample(&spec, 2, 2), sample(&spec, 3, 3));
        assert_eq!(x.ring_add(&y).unwrap().order(), 5);
        assert_eq!(x.ring_mul(&y).unwrap().order(), 6);
        let empty = WeightZ::zeros(&spec, 0);
        assert!(x.ring_add(&empty).unwrap().equal_up_to_permutation(&x, 0.0));
    }

    #[test]
    fn kronecker_node_order() {
        let spec = GroupSpec::cyclic(5).unwrap();
        let x = sample(&spec, 2, 4);
        let y = sample(&spec, 3, 5);
        let xy = x.ring_mul(&y).unwrap();
        for j1 in 0..2 {
            for j2 in 0..3 {
                let want = x.get(Role::B, 2, j1) * y.get(Role::B, 2, j2);
                assert_eq!(xy.get(Role::B, 2, j1 * 3 + j2), want);
            }
        }
    }

    #[test]
    fn identity_and_permutation() {
        let spec = GroupSpec::cyclic(7).unwrap();
        let z = sample(&spec, 4, 6);
        let one = WeightZ::ring_identity(&spec);
        assert!(z.ring_mul(&one).unwrap().equal_up_to_permutation(&z, 0.0));
        let reversed = z.select_nodes(&[3, 2, 1, 0]).unwrap();
        assert!(reversed.equal_up_to_permutation(&z, 0.0));
        assert!(!z.scale(2.0).equal_up_to_permutation(&z, 1e-9));
        assert!(z.scalar_mul(c(0.0, 1.0)).is_err());
        let zero = z.scalar_mul(c(0.0, 0.0)).unwrap();
        assert!(zero.raw().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn greedy_matching_above_eight_nodes() {
        let spec = GroupSpec::cyclic(5).unwrap();
        let z = sample(&spec, 12, 7);
        let perm: Vec<usize> = (0..12).rev().collect();
        assert!(z.select_nodes(&perm).unwrap().equal_up_to_permutation(&z, 1e-15));
    }

    #[test]
    fn real_roundtrip_removes_means() {
        let spec: GroupSpec = "2,2,3".parse().unwrap();
        let z = sample(&spec, 3, 8);
        let net = z.to_real();
        let back = WeightZ::from_real(&net);
        for (a, b) in z.raw().iter().zip(back.raw()) {
            assert!((a - b).norm() < 1e-12);
        }
        let mut constant = RealNet::zeros(&spec, 2);
        constant.w_a.iter_mut().for_each(|x| *x = 0.7);
        assert!(WeightZ::from_real(&constant).raw().iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn canonical_split_reconstructs() {
        let spec = GroupSpec::cyclic(7).unwrap();
        let z = sample(&spec, 3, 9).restrict_to(&[2]);
        let (zc, y) = z.canonicalize_at(2).unwrap();
        for p in ROLES {
            assert_eq!(zc.get(p, 2, 0), ONE);
        }
        let back = zc.ring_mul(&y).unwrap();
        assert!(back.equal_up_to_permutation(&z, 1e-12));

        let one = WeightZ::freq_identity(&spec, 2).unwrap();
        let canon = one.ring_add(&z.scale(0.3)).unwrap();
        let (zc2, y2) = canon.canonicalize_at(2).unwrap();
        assert!(zc2.equal_up_to_permutation(&canon, 1e-15));
        assert!(y2.equal_up_to_permutation(&one, 0.0));
    }

    #[test]
    fn canonicalize_rejects_vanishing_slice() {
        let spec = GroupSpec::cyclic(5).unwrap();
        assert!(WeightZ::zeros(&spec, 2).canonicalize_at(1).is_err());
    }
}
