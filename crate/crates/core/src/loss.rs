//! Projected L2 loss, evaluated two independent ways.
//!
//! [`analytic_loss`] works purely in frequency space through sum potentials:
//!
//! ```text
//! l   = (1/d) sum_{k != 0} l_k + (d - 1)/d
//! l_k = -2 r_kkk + sum_{k1,k2} |r_{k1 k2 k}|^2
//!       + 1/4 |sum_p sum_k' r_{p,k',-k',k}|^2
//!       + 1/4 sum_{m != 0} sum_p |sum_k' r_{p,k',m-k',k}|^2
//! ```
//!
//! [`forward_loss`] runs the network on every input pair and is the oracle
//! the analytic form is tested against.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::potentials::{classify_01, Tables, ZeroOneReport};
use crate::weight::{RealNet, Role, WeightZ};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FreqLoss {
    pub freq: usize,
    /// `-2 Re r_kkk`.
    pub target: f64,
    /// `sum_{k1,k2} |r_{k1 k2 k}|^2`.
    pub square: f64,
    /// `1/4 |sum_p sum_k' r_{p,k',-k',k}|^2`.
    pub r_n: f64,
    /// `1/4 sum_{m != 0} sum_p |sum_k' r_{p,k',m-k',k}|^2`.
    pub r_star: f64,
    pub total: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub per_freq: Vec<FreqLoss>,
    pub total: f64,
}

pub fn analytic_loss(z: &WeightZ) -> LossBreakdown {
    let tab = Tables::new(z);
    let (d, q) = (tab.d, tab.q);
    let zero = Complex64::new(0.0, 0.0);

    // e[j] = sum_p sum_k' |z_{p k' j}|^2, since z_{p,-k'} = conj(z_{p k'}).
    let mut energy = vec![0.0; q];
    // conv[m][j] per role = sum_k' z_{p k' j} z_{p, m-k', j}.
    let mut conv = [vec![zero; d * q], vec![zero; d * q]];
    let spec = z.spec();
    for (pi, p) in [Role::A, Role::B].into_iter().enumerate() {
        for k1 in 1..d {
            let x = tab.row(p, k1);
            for (e, v) in energy.iter_mut().zip(x) {
                *e += v.norm_sqr();
            }
            for k2 in 1..d {
                let m = spec.mul_flat(k1, k2);
                if m == 0 {
                    continue;
                }
                let y = tab.row(p, k2);
                let out = &mut conv[pi][m * q..(m + 1) * q];
                for j in 0..q {
                    out[j] += x[j] * y[j];
                }
            }
        }
    }

    let mut per_freq = Vec::with_capacity(d - 1);
    for k in 1..d {
        let c = tab.row(Role::C, k);
        let mut square = 0.0;
        let mut r_kkk = zero;
        for k1 in 1..d {
            let ac: Vec<Complex64> = tab.row(Role::A, k1).iter().zip(c).map(|(a, c)| a * c).collect();
            for k2 in 1..d {
                let r = crate::numeric::dot(&ac, tab.row(Role::B, k2));
                square += r.norm_sqr();
                if k1 == k && k2 == k {
                    r_kkk = r;
                }
            }
        }
        let n: Complex64 = c.iter().zip(&energy).map(|(c, e)| c * e).sum();
        let mut r_star = 0.0;
        for cv in &conv {
            for m in 1..d {
                let s = crate::numeric::dot(c, &cv[m * q..(m + 1) * q]);
                r_star += s.norm_sqr();
            }
        }
        let target = -2.0 * r_kkk.re;
        let r_n = 0.25 * n.norm_sqr();
        let r_star = 0.25 * r_star;
        per_freq.push(FreqLoss { freq: k, target, square, r_n, r_star, total: target + square + r_n + r_star });
    }
    let total = per_freq.iter().map(|f| f.total).sum::<f64>() / d as f64 + (d - 1) as f64 / d as f64;
    LossBreakdown { per_freq, total }
}

/// `o[i] = sum_j w_c[i][j] (w_a[g1][j] + w_b[g2][j])^2`.
pub fn forward_output(net: &RealNet, g1: usize, g2: usize) -> Vec<f64> {
    let (d, q) = (net.d(), net.q);
    let h: Vec<f64> = (0..q)
        .map(|j| {
            let x = net.w_a[g1 * q + j] + net.w_b[g2 * q + j];
            x * x
        })
        .collect();
    (0..d)
        .map(|i| net.w_c[i * q..(i + 1) * q].iter().zip(&h).map(|(w, s)| w * s).sum())
        .collect()
}

/// `||P(o/2d - e_target)||^2` with `P` removing the mean over outputs.
pub(crate) fn projected_sq_error(o: &[f64], target: usize) -> f64 {
    let d = o.len();
    let scale = 1.0 / (2.0 * d as f64);
    let mut r: Vec<f64> = o.iter().map(|x| x * scale).collect();
    r[target] -= 1.0;
    let mean = r.iter().sum::<f64>() / d as f64;
    r.iter().map(|x| (x - mean) * (x - mean)).sum()
}

/// Mean over all `d^2` input pairs of the projected squared error.
pub fn forward_loss(net: &RealNet) -> f64 {
    let d = net.d();
    let spec = &net.spec;
    let mut total = 0.0;
    for g1 in 0..d {
        for g2 in 0..d {
            let o = forward_output(net, g1, g2);
            total += projected_sq_error(&o, spec.mul_flat(g1, g2));
        }
    }
    total / (d * d) as f64
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GlobalReport {
    pub global: bool,
    pub report: ZeroOneReport,
}

/// Sufficient condition for a global optimum: `r_kkk = 1` for every nonzero
/// `k` and every potential in `R_c`, `R_n`, `R_*` vanishes. A `false`
/// verdict does not rule out zero loss.
pub fn global_check(z: &WeightZ, tol: f64) -> GlobalReport {
    let report = classify_01(z, tol);
    let global = report.families.iter().all(|f| f.verdict);
    GlobalReport { global, report }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    #[test]
    fn zero_weights_leave_target_energy() {
        let spec = GroupSpec::cyclic(7).unwrap();
        let z = WeightZ::zeros(&spec, 4);
        assert!((analytic_loss(&z).total - 6.0 / 7.0).abs() < 1e-15);
        assert!((forward_loss(&RealNet::zeros(&spec, 4)) - 6.0 / 7.0).abs() < 1e-15);
        assert!(!global_check(&z, 1e-6).global);
    }

    #[test]
    fn single_node_quadratic() {
        let spec = GroupSpec::cyclic(3).unwrap();
        let net = RealNet::new(
            &spec,
            1,
            vec![1.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![1.0, -1.0, 0.5],
        )
        .unwrap();
        // (1 + 2)^2 = 9 scales w_c.
        assert_eq!(forward_output(&net, 0, 1), vec![9.0, -9.0, 4.5]);
        assert_eq!(forward_output(&net, 2, 2), vec![0.0, 0.0, 0.0]);
    }
}
