//! Finite Abelian groups written as direct sums of cyclic groups.
//!
//! Elements and frequencies share one representation: a tuple with component
//! `m` in `[0, d_m)`. Most of the crate works with the flattened index
//! (mixed radix, last component fastest); tuples are only materialized at the
//! edges.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CogsError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct GroupSpec {
    orders: Vec<usize>,
    size: usize,
}

impl GroupSpec {
    pub fn new(orders: Vec<usize>) -> Result<Self> {
        if orders.is_empty() {
            return Err(CogsError::Validation("group needs at least one cyclic factor".into()));
        }
        if let Some(&bad) = orders.iter().find(|&&d| d == 0) {
            return Err(CogsError::Validation(format!("cyclic order must be positive, got {bad}")));
        }
        let size = orders.iter().product();
        Ok(Self { orders, size })
    }

    pub fn cyclic(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.len() == 1
    }

    pub fn check(&self, g: &[usize]) -> Result<()> {
        if g.len() != self.orders.len() || g.iter().zip(&self.orders).any(|(&x, &d)| x >= d) {
            return Err(CogsError::InvalidElement(format!("{g:?} for group {self}")));
        }
        Ok(())
    }

    pub fn check_flat(&self, g: usize) -> Result<()> {
        if g >= self.size {
            return Err(CogsError::InvalidElement(format!("index {g} for group {self}")));
        }
        Ok(())
    }

    pub fn encode(&self, g: &[usize]) -> Result<usize> {
        self.check(g)?;
        Ok(g.iter().zip(&self.orders).fold(0, |acc, (&x, &d)| acc * d + x))
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.orders.len()];
        for (slot, &d) in out.iter_mut().zip(&self.orders).rev() {
            *slot = idx % d;
            idx /= d;
        }
        out
    }

    pub fn multiply(&self, g1: &[usize], g2: &[usize]) -> Result<Vec<usize>> {
        self.check(g1)?;
        self.check(g2)?;
        Ok(g1.iter().zip(g2).zip(&self.orders).map(|((&a, &b), &d)| (a + b) % d).collect())
    }

    /// Product on flattened indices. Callers guarantee validity.
    pub fn mul_flat(&self, g1: usize, g2: usize) -> usize {
        let (mut a, mut b) = (g1, g2);
        let mut out = 0;
        let mut stride = 1;
        for &d in self.orders.iter().rev() {
            out += ((a % d + b % d) % d) * stride;
            stride *= d;
            a /= d;
            b /= d;
        }
        out
    }

    pub fn neg_flat(&self, g: usize) -> usize {
        let mut a = g;
        let mut out = 0;
        let mut stride = 1;
        for &d in self.orders.iter().rev() {
            out += ((d - a % d) % d) * stride;
            stride *= d;
            a /= d;
        }
        out
    }

    pub fn is_self_conjugate(&self, k: usize) -> bool {
        self.neg_flat(k) == k
    }

    /// One frequency from each conjugate pair `{k, -k}`, `k != 0`, the one with
    /// the smaller flat index. For Z_d this is `1..=d/2`.
    pub fn representatives(&self) -> Vec<usize> {
        (1..self.size).filter(|&k| k <= self.neg_flat(k)).collect()
    }

    /// Phase `sum_m k_m g_m / d_m` reduced to `[0, 1)`.
    fn phase(&self, k: usize, g: usize) -> f64 {
        let (mut a, mut b) = (k, g);
        let mut turns = 0.0;
        for &d in self.orders.iter().rev() {
            turns += ((a % d) * (b % d) % d) as f64 / d as f64;
            a /= d;
            b /= d;
        }
        turns.fract()
    }

    pub fn character_flat(&self, k: usize, g: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.phase(k, g))
    }

    pub fn character(&self, k: &[usize], g: &[usize]) -> Result<Complex64> {
        let k = self.encode(k)?;
        let g = self.encode(g)?;
        Ok(self.character_flat(k, g))
    }

    /// Row `k`, column `g`: `phi_k(g)`, stored row-major.
    pub fn character_matrix(&self) -> Vec<Complex64> {
        let d = self.size;
        let mut out = Vec::with_capacity(d * d);
        for k in 0..d {
            for g in 0..d {
                out.push(self.character_flat(k, g));
            }
        }
        out
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for GroupSpec {
    type Err = CogsError;

    fn from_str(s: &str) -> Result<Self> {
        let orders = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| CogsError::Validation(format!("bad cyclic order {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders)
    }
}

impl TryFrom<Vec<usize>> for GroupSpec {
    type Error = CogsError;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<GroupSpec> for Vec<usize> {
    fn from(g: GroupSpec) -> Self {
        g.orders
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_examples() {
        let z7 = GroupSpec::cyclic(7).unwrap();
        assert_eq!(z7.multiply(&[3], &[5]).unwrap(), vec![1]);
        let z23: GroupSpec = "2,3".parse().unwrap();
        assert_eq!(z23.multiply(&[1, 2], &[1, 2]).unwrap(), vec![0, 1]);
        assert!(z23.multiply(&[2, 0], &[0, 0]).is_err());
        for g in 0..z23.size() {
            assert_eq!(z23.mul_flat(0, g), g);
        }
    }

    #[test]
    fn flat_and_tuple_agree() {
        let spec: GroupSpec = "2,2,3".parse().unwrap();
        for a in 0..spec.size() {
            let ta = spec.decode(a);
            assert_eq!(spec.encode(&ta).unwrap(), a);
            for b in 0..spec.size() {
                let tb = spec.decode(b);
                let prod = spec.multiply(&ta, &tb).unwrap();
                assert_eq!(spec.encode(&prod).unwrap(), spec.mul_flat(a, b));
            }
            assert_eq!(spec.mul_flat(a, spec.neg_flat(a)), 0);
        }
    }

    #[test]
    fn character_examples() {
        let z7 = GroupSpec::cyclic(7).unwrap();
        assert!((z7.character(&[1], &[0]).unwrap() - 1.0).norm() < 1e-15);
        let z4 = GroupSpec::cyclic(4).unwrap();
        assert!((z4.character(&[2], &[1]).unwrap() + 1.0).norm() < 1e-15);
        let z3 = GroupSpec::cyclic(3).unwrap();
        let w = Complex64::from_polar(1.0, TAU / 3.0);
        assert!((z3.character(&[1], &[1]).unwrap() - w).norm() < 1e-15);
        let z2 = GroupSpec::cyclic(2).unwrap();
        let m = z2.character_matrix();
        let want = [1.0, 1.0, 1.0, -1.0];
        for (x, y) in m.iter().zip(want) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn representatives_cover_pairs_once() {
        let z6 = GroupSpec::cyclic(6).unwrap();
        assert_eq!(z6.representatives(), vec![1, 2, 3]);
        assert!(z6.is_self_conjugate(3));
        let v: GroupSpec = "2,2,3".parse().unwrap();
        let reps = v.representatives();
        let self_conj = reps.iter().filter(|&&k| v.is_self_conjugate(k)).count();
        assert_eq!(self_conj, 3);
        assert_eq!(2 * reps.len() - self_conj, v.size() - 1);
    }
}
