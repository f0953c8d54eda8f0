//! Post-hoc analysis: per-frequency slices, order histograms, factorization
//! of order-4/6 slices into catalog solutions, and SP dynamics.
//!
//! A trained slice `z` at frequency `k` is explained as
//! `flags ∘ (unit * f1 * f2)` where `f1`, `f2` are canonical factors (node 0
//! equal to `[1, 1, 1]`), `unit` is an order-1 weight and `flags` applies
//! pseudo-1 (`a, b -> -a, -b`) to individual nodes. Pseudo-1 leaves every
//! catalogued potential unchanged, so it has to be quotiented out.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constructors::{omega3, CatalogEntry, CatalogKind, CatalogParams};
use crate::error::{CogsError, Result};
use crate::group::GroupSpec;
use crate::trainer::SpSnapshot;
use crate::weight::{WeightZ, ROLES};

pub const DEFAULT_THRESHOLD: f64 = 0.05;
pub const DEFAULT_MATCH_TOL: f64 = 0.10;

type Node = [Complex64; 3];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencySlice {
    pub k: usize,
    /// Hidden-node indices in the full network.
    pub nodes: Vec<usize>,
    /// `[a, b, c]` at `k` for each retained node.
    pub values: Vec<Node>,
}

impl FrequencySlice {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn to_weight(&self, spec: &GroupSpec) -> Result<WeightZ> {
        WeightZ::single_frequency(spec, self.k, &self.values)
    }

    fn norm(&self) -> f64 {
        frob(&self.values)
    }
}

/// A node is salient at `k` when all three of `|z_{a,k,j}|`, `|z_{b,k,j}|`,
/// `|z_{c,k,j}|` reach `threshold`.
pub fn per_frequency_slices(z: &WeightZ, threshold: f64) -> Result<Vec<FrequencySlice>> {
    if !(threshold > 0.0) {
        return Err(CogsError::Validation(format!("threshold {threshold} must be positive")));
    }
    let mut out = Vec::with_capacity(z.reps().len());
    for &k in z.reps() {
        let cols = ROLES.map(|p| z.values(p, k));
        let mut nodes = Vec::new();
        let mut values = Vec::new();
        for j in 0..z.order() {
            let node = [cols[0][j], cols[1][j], cols[2][j]];
            if node.iter().all(|v| v.norm() >= threshold) {
                nodes.push(j);
                values.push(node);
            }
        }
        out.push(FrequencySlice { k, nodes, values });
    }
    Ok(out)
}

/// Nodes that are salient at more than one frequency.
pub fn slice_overlaps(slices: &[FrequencySlice]) -> Vec<usize> {
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for s in slices {
        for &j in &s.nodes {
            *count.entry(j).or_default() += 1;
        }
    }
    count.into_iter().filter(|&(_, c)| c > 1).map(|(j, _)| j).collect()
}

/// Slice order -> number of representative frequencies with that order.
pub fn order_histogram(z: &WeightZ, threshold: f64) -> Result<BTreeMap<usize, usize>> {
    let mut hist = BTreeMap::new();
    for s in per_frequency_slices(z, threshold)? {
        *hist.entry(s.order()).or_default() += 1;
    }
    Ok(hist)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Matched,
    FactorableUnmatched,
    NonFactorable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogMatch {
    pub kind: CatalogKind,
    pub params: CatalogParams,
    /// Relative distance between unit-norm canonical forms.
    pub distance: f64,
    /// The catalog node each factor node maps to (factor order).
    pub assignment: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogMatchSet {
    /// Whether the whole block was conjugated before matching.
    pub conjugated: bool,
    pub matches: Vec<Option<CatalogMatch>>,
    pub category: String,
}

impl CatalogMatchSet {
    pub fn all_matched(&self) -> bool {
        self.matches.iter().all(Option::is_some)
    }

    pub fn names(&self) -> Vec<String> {
        self.matches.iter().map(|m| m.as_ref().map_or("unmatched", |m| m.kind.as_str()).to_string()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationResult {
    pub k: usize,
    /// `(order of f1, order of f2)`.
    pub shape: (usize, usize),
    /// Network node index at each grid cell `(i1, i2)`, row-major.
    pub grid: Vec<usize>,
    /// Pseudo-1 applied at each grid cell.
    pub flags: Vec<bool>,
    pub unit: Node,
    pub factors: [Vec<Node>; 2],
    /// `||z - flags ∘ (unit * f1 * f2)|| / ||z||`.
    pub residual: f64,
    pub catalog: Option<CatalogMatchSet>,
    pub verdict: Verdict,
}

impl FactorizationResult {
    /// Rebuilds the slice values in grid order.
    pub fn reconstruct(&self) -> Vec<Node> {
        let (_, m2) = self.shape;
        let mut out = Vec::with_capacity(self.grid.len());
        for (cell, &flip) in self.flags.iter().enumerate() {
            let (x, y) = (&self.factors[0][cell / m2], &self.factors[1][cell % m2]);
            let s = if flip { -1.0 } else { 1.0 };
            out.push([0, 1, 2].map(|p| self.unit[p] * x[p] * y[p] * if p < 2 { s } else { 1.0 }));
        }
        out
    }
}

fn frob(nodes: &[Node]) -> f64 {
    nodes.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Best rank-1 approximation of a `2 x m` matrix: `M ≈ u y^T`, `|u| = 1`.
/// Returns `(u, y, squared residual)`.
fn rank1(rows: [&[Complex64]; 2]) -> ([Complex64; 2], Vec<Complex64>, f64) {
    let p: f64 = rows[0].iter().map(|v| v.norm_sqr()).sum();
    let s: f64 = rows[1].iter().map(|v| v.norm_sqr()).sum();
    let r: Complex64 = rows[0].iter().zip(rows[1]).map(|(x, y)| x * y.conj()).sum();
    let half = 0.5 * (p - s);
    let disc = (half * half + r.norm_sqr()).sqrt();
    let lmax = 0.5 * (p + s) + disc;
    let lmin = (0.5 * (p + s) - disc).max(0.0);
    let zero = Complex64::new(0.0, 0.0);
    let u = if r.norm() > 1e-300 {
        let v = [r, Complex64::new(lmax - p, 0.0)];
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        [v[0] / n, v[1] / n]
    } else if p >= s {
        [Complex64::new(1.0, 0.0), zero]
    } else {
        [zero, Complex64::new(1.0, 0.0)]
    };
    let y = (0..rows[0].len()).map(|i| u[0].conj() * rows[0][i] + u[1].conj() * rows[1][i]).collect();
    (u, y, lmin)
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

fn role_matrix(values: &[Node], perm: &[usize], m2: usize, p: usize, flags: u32) -> [Vec<Complex64>; 2] {
    let cell = |i: usize| {
        let v = values[perm[i]][p];
        if p < 2 && flags >> i & 1 == 1 {
            -v
        } else {
            v
        }
    };
    [(0..m2).map(&cell).collect(), (m2..2 * m2).map(&cell).collect()]
}

/// Moves the node with the largest smallest-entry magnitude to the front and
/// divides every node by it. Returns the divisor and, per new position, the
/// original node index.
fn canonical_factor(nodes: &mut [Node]) -> (Node, Vec<usize>) {
    let score = |n: &Node| n.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    let mut pivot = 0;
    for i in 1..nodes.len() {
        if score(&nodes[i]) > score(&nodes[pivot]) * (1.0 + 1e-9) {
            pivot = i;
        }
    }
    nodes.swap(0, pivot);
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.swap(0, pivot);
    let div = nodes[0];
    for n in nodes.iter_mut() {
        for p in 0..3 {
            n[p] /= div[p];
        }
    }
    (div, order)
}

/// Builds the decomposition for one grid assignment and flag pattern.
fn decompose(slice: &FrequencySlice, perm: &[usize], m2: usize, flags: u32) -> FactorizationResult {
    let n = perm.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut f1 = vec![[zero; 3]; 2];
    let mut f2 = vec![[zero; 3]; m2];
    for p in 0..3 {
        let m = role_matrix(&slice.values, perm, m2, p, flags);
        let (u, y, _) = rank1([&m[0], &m[1]]);
        for i in 0..2 {
            f1[i][p] = u[i];
        }
        for i in 0..m2 {
            f2[i][p] = y[i];
        }
    }
    let (d1, order1) = canonical_factor(&mut f1);
    let (d2, order2) = canonical_factor(&mut f2);
    let mut grid = Vec::with_capacity(n);
    let mut flag_vec = Vec::with_capacity(n);
    let mut target = Vec::with_capacity(n);
    for &r in &order1 {
        for &c in &order2 {
            let cell = r * m2 + c;
            grid.push(slice.nodes[perm[cell]]);
            flag_vec.push(flags >> cell & 1 == 1);
            target.push(slice.values[perm[cell]]);
        }
    }
    let mut result = FactorizationResult {
        k: slice.k,
        shape: (2, m2),
        grid,
        flags: flag_vec,
        unit: [0, 1, 2].map(|p| d1[p] * d2[p]),
        factors: [f1, f2],
        residual: 0.0,
        catalog: None,
        verdict: Verdict::NonFactorable,
    };
    let diff: f64 = target
        .iter()
        .zip(result.reconstruct())
        .map(|(t, r)| (0..3).map(|p| (t[p] - r[p]).norm_sqr()).sum::<f64>())
        .sum();
    result.residual = diff.sqrt() / slice.norm();
    result
}

/// Exhaustive search for `z = flags ∘ (unit * f1 * f2)` with
/// `(ord f1, ord f2) = (2, 2)` or `(2, 3)`.
///
/// Grid assignments are enumerated up to row and column reordering, and
/// flags up to whole-row or whole-column flips; both leave every rank-1 fit
/// unchanged. Assignments are screened on the `c` component (which pseudo-1
/// does not touch) before flags are resolved on `a` and `b`. The product is
/// not unique when a factor is closed under node-wise multiplication (for
/// example `z_syn`), so every assignment within budget is matched against
/// the catalog and the best match wins.
pub fn factorize(slice: &FrequencySlice, tol: f64) -> Result<FactorizationResult> {
    let n = slice.order();
    let m2 = match n {
        4 => 2,
        6 => 3,
        _ => return Err(CogsError::Unsupported(format!("cannot factor an order-{n} slice (only 4 and 6)"))),
    };
    let norm = slice.norm();
    if !(norm > 1e-12) {
        return Err(CogsError::Numeric(format!("slice at frequency {} is degenerate", slice.k)));
    }
    let perms: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .filter(|p| p[..m2].windows(2).all(|w| w[0] < w[1]) && p[0] < p[m2])
        .collect();
    let c_res: Vec<f64> = perms
        .iter()
        .map(|perm| {
            let m = role_matrix(&slice.values, perm, m2, 2, 0);
            rank1([&m[0], &m[1]]).2
        })
        .collect();
    let budget = (tol * norm).powi(2);
    let best_c = c_res.iter().cloned().fold(f64::INFINITY, f64::min);
    // Only cells (1, j >= 1) carry independent flags.
    let flag_patterns: Vec<u32> = (0..(1u32 << (m2 - 1))).map(|f| f << (m2 + 1)).collect();
    let mut scored = Vec::new();
    for (pi, perm) in perms.iter().enumerate() {
        if c_res[pi] > budget.max(best_c) {
            continue;
        }
        for &flags in &flag_patterns {
            let ab: f64 = (0..2)
                .map(|p| {
                    let m = role_matrix(&slice.values, perm, m2, p, flags);
                    rank1([&m[0], &m[1]]).2
                })
                .sum();
            scored.push((c_res[pi] + ab, pi, flags));
        }
    }
    let best_total = scored.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let slack = budget.max(best_total * (1.0 + 1e-9) + 1e-24 * norm * norm);
    let mut best: Option<(u8, f64, usize, FactorizationResult)> = None;
    for &(total, pi, flags) in &scored {
        if total > slack {
            continue;
        }
        let mut cand = decompose(slice, &perms[pi], m2, flags);
        let rank = if cand.residual <= tol {
            let set = match_catalog(&cand.factors, tol);
            cand.verdict = if set.all_matched() { Verdict::Matched } else { Verdict::FactorableUnmatched };
            cand.catalog = Some(set);
            if cand.verdict == Verdict::Matched {
                0
            } else {
                1
            }
        } else {
            2
        };
        let dist: f64 = cand
            .catalog
            .as_ref()
            .map_or(0.0, |c| c.matches.iter().map(|m| m.as_ref().map_or(0.0, |m| m.distance)).sum());
        let score = cand.residual + dist;
        // Near-exact ties go to the explanation with fewer free parameters.
        let params: usize = cand
            .catalog
            .as_ref()
            .map_or(0, |c| c.matches.iter().flatten().map(|m| m.kind.free_parameters()).sum());
        let better = match &best {
            None => true,
            Some((r, s, p, _)) => {
                rank < *r || (rank == *r && (score < s - 1e-9 || (score < s + 1e-9 && params < *p)))
            }
        };
        if better {
            best = Some((rank, score, params, cand));
        }
    }
    Ok(best.expect("at least one candidate assignment").3)
}

fn unit_phase(z: Complex64) -> Option<Complex64> {
    let n = z.norm();
    (n > 1e-12).then(|| z / n)
}

/// Least-squares parameters of `kind` for canonical nodes already aligned
/// with the catalog's node order.
fn fit_params(kind: CatalogKind, nodes: &[Node]) -> Option<CatalogEntry> {
    let w = omega3();
    let i = Complex64::new(0.0, 1.0);
    match kind {
        CatalogKind::ZXi => CatalogEntry::z_xi(unit_phase(nodes[1][0] - i * nodes[1][1].conj())?).ok(),
        CatalogKind::ZNu => CatalogEntry::z_nu(unit_phase(nodes[1][0] - nodes[1][1])?).ok(),
        CatalogKind::ZSynAb => {
            let alpha = unit_phase(w.conj() * nodes[1][0] + (w.conj() * nodes[1][1]).conj())?;
            let beta = unit_phase(w * nodes[2][0] + (w * nodes[2][1]).conj())?;
            CatalogEntry::z_syn_ab(alpha, beta).ok()
        }
        CatalogKind::Order3Pm => {
            let round = |vals: [Complex64; 3], base: Complex64| {
                let proj = vals.map(|v| (v * base.conj()).re);
                let mut s = proj.map(|x| if x >= 0.0 { 1i8 } else { -1 });
                if s.iter().product::<i8>() != 1 {
                    let weakest = (0..3).min_by(|&a, &b| proj[a].abs().total_cmp(&proj[b].abs())).unwrap();
                    s[weakest] = -s[weakest];
                }
                s
            };
            let a = round(nodes[1], w);
            let b = round(nodes[2], w.conj());
            CatalogEntry::order3_pm([a[0], a[1], a[2], b[0], b[1], b[2]]).ok()
        }
        CatalogKind::ZSyn => Some(CatalogEntry::z_syn()),
        CatalogKind::Z3c => Some(CatalogEntry::z_3c()),
        CatalogKind::Z3a => Some(CatalogEntry::z_3a()),
        CatalogKind::Z4a => Some(CatalogEntry::z_4a()),
        CatalogKind::Order2One => Some(CatalogEntry::order2_one()),
    }
}

fn normalized_distance(x: &[Node], y: &[Node]) -> f64 {
    let (nx, ny) = (frob(x), frob(y));
    let d: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (0..3).map(|p| (a[p] / nx - b[p] / ny).norm_sqr()).sum::<f64>())
        .sum();
    d.sqrt()
}

/// Best catalog entry for one canonical factor: tries every pivot, node
/// order and per-node pseudo-1 on the non-pivot nodes.
fn match_factor(factor: &[Node]) -> Option<CatalogMatch> {
    let m = factor.len();
    let mut best: Option<CatalogMatch> = None;
    for pivot in 0..m {
        let div = factor[pivot];
        if div.iter().any(|v| v.norm() < 1e-12) {
            continue;
        }
        let rest: Vec<usize> = (0..m).filter(|&i| i != pivot).collect();
        for order in permutations(m - 1) {
            let idx: Vec<usize> = std::iter::once(pivot).chain(order.iter().map(|&o| rest[o])).collect();
            for flags in 0..(1u32 << (m - 1)) {
                let nodes: Vec<Node> = idx
                    .iter()
                    .enumerate()
                    .map(|(pos, &src)| {
                        let flip = pos > 0 && flags >> (pos - 1) & 1 == 1;
                        [0, 1, 2].map(|p| {
                            let v = factor[src][p] / div[p];
                            if flip && p < 2 {
                                -v
                            } else {
                                v
                            }
                        })
                    })
                    .collect();
                for kind in CatalogKind::ALL.into_iter().filter(|k| k.order() == m) {
                    let Some(entry) = fit_params(kind, &nodes) else { continue };
                    let distance = normalized_distance(&nodes, &entry.nodes);
                    let better = best.as_ref().is_none_or(|b| {
                        distance < b.distance - 1e-9
                            || (distance < b.distance + 1e-9 && kind.free_parameters() < b.kind.free_parameters())
                    });
                    if better {
                        // assignment[i] = catalog slot of factor node i
                        let mut assignment = vec![0; m];
                        for (slot, &src) in idx.iter().enumerate() {
                            assignment[src] = slot;
                        }
                        best = Some(CatalogMatch { kind, params: entry.params, distance, assignment });
                    }
                }
            }
        }
    }
    best
}

fn is_nu_i(m: &CatalogMatch, tol: f64) -> bool {
    let i = Complex64::new(0.0, 1.0);
    m.kind == CatalogKind::ZNu && m.params.nu.is_some_and(|nu| (nu - i).norm() <= tol || (nu + i).norm() <= tol)
}

fn category(matches: &[Option<CatalogMatch>], tol: f64) -> String {
    let [Some(x), Some(y)] = matches else { return "others".into() };
    for (u, v) in [(x, y), (y, x)] {
        if is_nu_i(u, tol) && v.kind == CatalogKind::ZXi {
            return "nu_i*xi".into();
        }
        if is_nu_i(u, tol) && v.kind == CatalogKind::ZSynAb {
            return "nu_i*syn_ab".into();
        }
        // order2_one is z_nu at nu = 1
        if matches!(u.kind, CatalogKind::ZNu | CatalogKind::Order2One) && v.kind == CatalogKind::ZSyn {
            return "nu*syn".into();
        }
    }
    "others".into()
}

/// Matches each canonical factor against the catalog, trying the block as
/// given and conjugated, and keeps whichever has the smaller total distance.
pub fn match_catalog(factors: &[Vec<Node>], tol: f64) -> CatalogMatchSet {
    let mut best: Option<(f64, CatalogMatchSet)> = None;
    for conjugated in [false, true] {
        let matches: Vec<Option<CatalogMatch>> = factors
            .iter()
            .map(|f| {
                let f: Vec<Node> =
                    if conjugated { f.iter().map(|n| n.map(|v| v.conj())).collect() } else { f.clone() };
                match_factor(&f)
            })
            .collect();
        let score: f64 = matches.iter().map(|m| m.as_ref().map_or(f64::INFINITY, |m| m.distance)).sum();
        let accepted: Vec<Option<CatalogMatch>> =
            matches.into_iter().map(|m| m.filter(|m| m.distance <= tol)).collect();
        let category = category(&accepted, tol);
        if best.as_ref().is_none_or(|(b, _)| score < b - 1e-12) {
            best = Some((score, CatalogMatchSet { conjugated, matches: accepted, category }));
        }
    }
    best.map(|(_, s)| s).unwrap_or(CatalogMatchSet { conjugated: false, matches: vec![], category: "others".into() })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrequencyReport {
    pub k: usize,
    pub order: usize,
    pub nodes: Vec<usize>,
    pub factorization: Option<FactorizationResult>,
    /// Set when the slice could not be searched (wrong order, degenerate).
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub group: GroupSpec,
    pub threshold: f64,
    pub match_tol: f64,
    pub histogram: BTreeMap<usize, usize>,
    pub overlapping_nodes: Vec<usize>,
    pub frequencies: Vec<FrequencyReport>,
    pub summary: AnalysisSummary,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSummary {
    pub frequencies: usize,
    pub not_order_4_6: usize,
    pub factorable: usize,
    pub matched: usize,
    /// Count per category among matched slices.
    pub categories: BTreeMap<String, usize>,
}

impl AnalysisSummary {
    pub fn percent_not_order_4_6(&self) -> f64 {
        100.0 * self.not_order_4_6 as f64 / self.frequencies.max(1) as f64
    }

    /// Share of all frequencies whose slice is factorable and matched.
    pub fn percent_matched(&self) -> f64 {
        100.0 * self.matched as f64 / self.frequencies.max(1) as f64
    }
}

pub fn analyze(z: &WeightZ, threshold: f64, match_tol: f64) -> Result<AnalysisReport> {
    if !(match_tol > 0.0) {
        return Err(CogsError::Validation(format!("match tolerance {match_tol} must be positive")));
    }
    let slices = per_frequency_slices(z, threshold)?;
    let mut histogram = BTreeMap::new();
    let mut summary = AnalysisSummary { frequencies: slices.len(), ..Default::default() };
    let mut frequencies = Vec::with_capacity(slices.len());
    for s in &slices {
        *histogram.entry(s.order()).or_default() += 1;
        let (factorization, note) = match factorize(s, match_tol) {
            Ok(f) => (Some(f), None),
            Err(e) => (None, Some(e.to_string())),
        };
        if !matches!(s.order(), 4 | 6) {
            summary.not_order_4_6 += 1;
        }
        if let Some(f) = &factorization {
            if f.verdict != Verdict::NonFactorable {
                summary.factorable += 1;
            }
            if f.verdict == Verdict::Matched {
                summary.matched += 1;
                let cat = f.catalog.as_ref().map_or("others".to_string(), |c| c.category.clone());
                *summary.categories.entry(cat).or_default() += 1;
            }
        }
        frequencies.push(FrequencyReport { k: s.k, order: s.order(), nodes: s.nodes.clone(), factorization, note });
    }
    Ok(AnalysisReport {
        group: z.spec().clone(),
        threshold,
        match_tol,
        histogram,
        overlapping_nodes: slice_overlaps(&slices),
        frequencies,
        summary,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicsRow {
    pub epoch: usize,
    /// `Re sum_{k != 0} r_kkk`.
    pub diag_sum: f64,
    /// Largest `|r_{k1 k2 k}|` over non-diagonal triples.
    pub offdiag_max: f64,
    pub offdiag_norm: f64,
    /// l2 norm over the tracked `r_{p,k,-k,k}`.
    pub rn_norm: f64,
    /// l2 norm over the tracked `r_{p,k,k,k}`.
    pub rstar_norm: f64,
}

pub fn sp_dynamics(trace: &[SpSnapshot]) -> Result<Vec<DynamicsRow>> {
    if trace.is_empty() {
        return Err(CogsError::Validation("trace has no SP snapshots".into()));
    }
    trace
        .iter()
        .map(|s| {
            let get = |l: &str| s.get(l).ok_or_else(|| CogsError::Validation(format!("snapshot lacks {l}")));
            let sq = |needle: &str| -> f64 {
                s.values.iter().filter(|(l, _)| l.contains(needle)).map(|(_, v)| v.norm_sqr()).sum::<f64>().sqrt()
            };
            Ok(DynamicsRow {
                epoch: s.epoch,
                diag_sum: get("diag_sum")?.re,
                offdiag_max: get("offdiag_max")?.re,
                offdiag_norm: get("offdiag_norm")?.re,
                rn_norm: sq(",k,-k,k["),
                rstar_norm: sq(",k,k,k["),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(6).len(), 720);
        assert_eq!(permutations(1), vec![vec![0]]);
    }

    #[test]
    fn rank1_exact() {
        let x = [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.3)];
        let y = [Complex64::new(0.2, -1.0), Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)];
        let r0: Vec<_> = y.iter().map(|v| x[0] * v).collect();
        let r1: Vec<_> = y.iter().map(|v| x[1] * v).collect();
        let (u, yy, res) = rank1([&r0, &r1]);
        assert!(res < 1e-12);
        for i in 0..3 {
            assert!((u[0] * yy[i] - r0[i]).norm() < 1e-12);
            assert!((u[1] * yy[i] - r1[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_weights_give_empty_slices() {
        let spec = GroupSpec::cyclic(7).unwrap();
        let slices = per_frequency_slices(&WeightZ::zeros(&spec, 5), 0.05).unwrap();
        assert_eq!(slices.len(), 3);
        assert!(slices.iter().all(|s| s.order() == 0));
        assert!(per_frequency_slices(&WeightZ::zeros(&spec, 5), 0.0).is_err());
    }

    #[test]
    fn sp_dynamics_rejects_empty() {
        assert!(sp_dynamics(&[]).is_err());
    }
}
