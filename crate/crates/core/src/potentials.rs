//! Sum potentials `r(z) = sum_j prod_{(p,k) in idx} z[p][k][j]`.
//!
//! The loss depends on the weights only through four families of
//! three-factor potentials:
//!
//! * `R_g`: `r_kkk = [(a,k),(b,k),(c,k)]`
//! * `R_c`: `r_{k1 k2 k}` with the three frequencies not all equal
//! * `R_n`: `r_{p,k',-k',k} = [(p,k'),(p,-k'),(c,k)]`, `p` in `{a, b}`
//! * `R_*`: `r_{p,k1,k2,k}` with `k1 + k2 != 0`
//!
//! Each potential is a ring homomorphism from the weight semi-ring to the
//! complex numbers, which is what makes the algebraic constructions work.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CogsError, Result};
use crate::group::GroupSpec;
use crate::numeric::{dot, CompensatedSum};
use crate::weight::{Role, WeightZ, ROLES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "R_g")]
    G,
    #[serde(rename = "R_c")]
    C,
    #[serde(rename = "R_n")]
    N,
    #[serde(rename = "R_star")]
    Star,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::G => "R_g",
            Family::C => "R_c",
            Family::N => "R_n",
            Family::Star => "R_star",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SumPotentialIndex {
    pub terms: Vec<(Role, usize)>,
}

impl SumPotentialIndex {
    pub fn new(terms: Vec<(Role, usize)>) -> Self {
        Self { terms }
    }

    /// `r_{k1 k2 k}`.
    pub fn abc(k1: usize, k2: usize, k: usize) -> Self {
        Self::new(vec![(Role::A, k1), (Role::B, k2), (Role::C, k)])
    }

    /// `r_{p k1 k2 k}`.
    pub fn pp(p: Role, k1: usize, k2: usize, k: usize) -> Self {
        Self::new(vec![(p, k1), (p, k2), (Role::C, k)])
    }

    /// The index with every frequency negated; its value is the conjugate.
    pub fn negated(&self, spec: &GroupSpec) -> Self {
        Self::new(self.terms.iter().map(|&(p, k)| (p, spec.neg_flat(k))).collect())
    }

    /// Loss family this index belongs to, if it is one of the three-factor
    /// loss patterns.
    pub fn family(&self, spec: &GroupSpec) -> Option<Family> {
        match self.terms.as_slice() {
            [(Role::A, k1), (Role::B, k2), (Role::C, k)] => {
                Some(if k1 == k2 && k2 == k { Family::G } else { Family::C })
            }
            [(p1, k1), (p2, k2), (Role::C, _)] if p1 == p2 && *p1 != Role::C => {
                Some(if spec.mul_flat(*k1, *k2) == 0 { Family::N } else { Family::Star })
            }
            _ => None,
        }
    }

    /// Label relative to a base frequency `k`: a role letter per factor, with
    /// a combining macron where the factor sits at `-k`.
    pub fn label_at(&self, spec: &GroupSpec, k: usize) -> String {
        let nk = spec.neg_flat(k);
        let mut s = String::new();
        for &(p, f) in &self.terms {
            s.push(p.as_char());
            if f == nk && nk != k {
                s.push('\u{304}');
            }
        }
        s
    }

    /// Explicit form such as `a1 b6 c1`.
    pub fn describe(&self, spec: &GroupSpec) -> String {
        self.terms
            .iter()
            .map(|&(p, k)| {
                let t = spec.decode(k);
                let ks: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                format!("{p}({})", ks.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn sp_value(z: &WeightZ, idx: &SumPotentialIndex) -> Result<Complex64> {
    for &(_, k) in &idx.terms {
        z.spec().check_flat(k)?;
        if k == 0 {
            return Err(CogsError::Validation("sum potential uses frequency 0".into()));
        }
    }
    Ok(sp_value_unchecked(z, idx))
}

/// Node-ordered compensated evaluation; frequencies must be valid and
/// nonzero.
pub fn sp_value_unchecked(z: &WeightZ, idx: &SumPotentialIndex) -> Complex64 {
    let mut acc = CompensatedSum::default();
    for j in 0..z.order() {
        let mut term = Complex64::new(1.0, 0.0);
        for &(p, k) in &idx.terms {
            term *= z.get(p, k, j);
        }
        acc.add(term);
    }
    acc.value()
}

/// Dense per-role tables used by the bulk evaluators.
pub(crate) struct Tables {
    pub d: usize,
    pub q: usize,
    pub t: [Vec<Complex64>; 3],
}

impl Tables {
    pub fn new(z: &WeightZ) -> Self {
        Self { d: z.d(), q: z.order(), t: ROLES.map(|p| z.expanded(p)) }
    }

    #[inline]
    pub fn row(&self, p: Role, k: usize) -> &[Complex64] {
        &self.t[p.index()][k * self.q..(k + 1) * self.q]
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: Family,
    /// Largest `|r|` over the family (for `R_g`: largest `|r_kkk - 1|`).
    pub worst: f64,
    pub worst_index: Option<String>,
    pub verdict: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZeroOneReport {
    pub tol: f64,
    /// `R_g` as a 1-set, then `R_c`, `R_n`, `R_star` as 0-sets.
    pub families: Vec<FamilyReport>,
    /// `r_kkk` at each representative frequency.
    pub r_kkk: Vec<(usize, Complex64)>,
}

impl ZeroOneReport {
    pub fn get(&self, f: Family) -> &FamilyReport {
        self.families.iter().find(|r| r.family == f).expect("all families present")
    }

    pub fn is_zero_set(&self, f: Family) -> bool {
        f != Family::G && self.get(f).verdict
    }

    pub fn rkkk_is_one_set(&self) -> bool {
        self.get(Family::G).verdict
    }
}

/// Worst-case magnitudes for every loss family. The base frequency `k` of
/// each potential runs over representatives only, since the partner values
/// are conjugates.
pub fn classify_01(z: &WeightZ, tol: f64) -> ZeroOneReport {
    let spec = z.spec();
    let tab = Tables::new(z);
    let d = tab.d;
    let mut worst: [(f64, Option<SumPotentialIndex>); 4] = Default::default();
    let mut bump = |slot: usize, v: f64, idx: &dyn Fn() -> SumPotentialIndex| {
        if v > worst[slot].0 || worst[slot].1.is_none() {
            worst[slot] = (v, Some(idx()));
        }
    };
    let mut r_kkk = Vec::new();
    for &k in z.reps() {
        let c = tab.row(Role::C, k);
        for k1 in 1..d {
            let ac: Vec<Complex64> = tab.row(Role::A, k1).iter().zip(c).map(|(a, c)| a * c).collect();
            for k2 in 1..d {
                let r = dot(&ac, tab.row(Role::B, k2));
                if k1 == k && k2 == k {
                    r_kkk.push((k, r));
                    bump(0, (r - 1.0).norm(), &|| SumPotentialIndex::abc(k, k, k));
                } else {
                    bump(1, r.norm(), &|| SumPotentialIndex::abc(k1, k2, k));
                }
            }
        }
        for p in [Role::A, Role::B] {
            for k1 in 1..d {
                let pc: Vec<Complex64> = tab.row(p, k1).iter().zip(c).map(|(a, c)| a * c).collect();
                for k2 in k1..d {
                    let r = dot(&pc, tab.row(p, k2));
                    let slot = if spec.mul_flat(k1, k2) == 0 { 2 } else { 3 };
                    bump(slot, r.norm(), &|| SumPotentialIndex::pp(p, k1, k2, k));
                }
            }
        }
    }
    let fams = [Family::G, Family::C, Family::N, Family::Star];
    let families = fams
        .iter()
        .zip(worst)
        .map(|(&family, (w, idx))| FamilyReport {
            family,
            worst: w,
            worst_index: idx.map(|i| i.describe(spec)),
            verdict: w <= tol,
        })
        .collect();
    ZeroOneReport { tol, families, r_kkk }
}

/// The nine potentials of the generator table, built at frequency `k`.
pub fn table1_indices(spec: &GroupSpec, k: usize) -> [SumPotentialIndex; 9] {
    let n = spec.neg_flat(k);
    use Role::{A, B};
    [
        SumPotentialIndex::abc(n, k, k),
        SumPotentialIndex::abc(k, n, k),
        SumPotentialIndex::abc(k, k, n),
        SumPotentialIndex::pp(A, n, k, k),
        SumPotentialIndex::pp(B, n, k, k),
        SumPotentialIndex::pp(A, k, k, k),
        SumPotentialIndex::pp(B, k, k, k),
        SumPotentialIndex::pp(A, n, n, k),
        SumPotentialIndex::pp(B, n, n, k),
    ]
}

/// Column labels of the generator table, in [`table1_indices`] order.
pub const TABLE1_LABELS: [&str; 9] = [
    "a\u{304}bc",
    "ab\u{304}c",
    "abc\u{304}",
    "a\u{304}ac",
    "b\u{304}bc",
    "aac",
    "bbc",
    "a\u{304}a\u{304}c",
    "b\u{304}b\u{304}c",
];

/// Every single-frequency loss potential at `+-k` other than those in
/// `R_g`: the table columns together with their conjugates, deduplicated.
pub fn single_frequency_potentials(spec: &GroupSpec, k: usize) -> Vec<SumPotentialIndex> {
    let mut out: Vec<SumPotentialIndex> = Vec::new();
    for idx in table1_indices(spec, k) {
        for cand in [idx.negated(spec), idx] {
            let canon = canonical_order(cand);
            if canon.family(spec) != Some(Family::G) && !out.contains(&canon) {
                out.push(canon);
            }
        }
    }
    out
}

/// `r_{p k1 k2 k}` and `r_{p k2 k1 k}` are the same potential; keep the one
/// with `k1 <= k2`.
fn canonical_order(mut idx: SumPotentialIndex) -> SumPotentialIndex {
    if let [(p1, k1), (p2, k2), _] = idx.terms.as_mut_slice() {
        if p1 == p2 && *k1 > *k2 {
            std::mem::swap(k1, k2);
        }
    }
    idx
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table1Cell {
    pub label: String,
    pub conj_label: String,
    pub index: String,
    pub value: Complex64,
    pub conj_value: Complex64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table1Row {
    pub freq: usize,
    pub r_kkk: Complex64,
    pub cells: Vec<Table1Cell>,
}

impl Table1Row {
    pub fn value(&self, label: &str) -> Option<Complex64> {
        self.cells.iter().find(|c| c.label == label).map(|c| c.value)
    }
}

/// Evaluates the nine table potentials (and their conjugates) on an order-1
/// generator supported on a single conjugate pair.
pub fn table1_row(u: &WeightZ) -> Result<Table1Row> {
    if u.order() != 1 {
        return Err(CogsError::Validation(format!("generator must have order 1, got {}", u.order())));
    }
    let support: Vec<usize> = u
        .reps()
        .iter()
        .enumerate()
        .filter(|&(r, _)| ROLES.iter().any(|&p| u.rep_values(p, r)[0].norm() > 0.0))
        .map(|(_, &k)| k)
        .collect();
    let k = match support.as_slice() {
        [k] => *k,
        _ => {
            return Err(CogsError::Validation(format!(
                "generator must be supported on one conjugate pair, found {}",
                support.len()
            )))
        }
    };
    let spec = u.spec();
    let mut cells = Vec::with_capacity(9);
    for (idx, label) in table1_indices(spec, k).into_iter().zip(TABLE1_LABELS) {
        let neg = idx.negated(spec);
        let value = sp_value_unchecked(u, &idx);
        let conj_value = sp_value_unchecked(u, &neg);
        if (conj_value - value.conj()).norm() > 1e-12 * (1.0 + value.norm()) {
            return Err(CogsError::Numeric(format!("conjugate column of {label} is inconsistent")));
        }
        cells.push(Table1Cell {
            label: label.to_string(),
            conj_label: neg.label_at(spec, k),
            index: idx.describe(spec),
            value,
            conj_value,
        });
    }
    let r_kkk = sp_value_unchecked(u, &SumPotentialIndex::abc(k, k, k));
    Ok(Table1Row { freq: k, r_kkk, cells })
}
