//! Full-batch Adam training of the quadratic network on group
//! multiplication, plus diagnostics computed along the way.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{CogsError, Result};
use crate::group::GroupSpec;
use crate::loss::forward_output;
use crate::potentials::Tables;
use crate::weight::{RealNet, Role, WeightZ, ROLES};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub group: GroupSpec,
    pub q: usize,
    pub lr: f64,
    pub weight_decay: f64,
    /// Add `lambda * W` to the gradient (Adam-L2) when false; shrink the
    /// weights directly (AdamW) when true.
    #[serde(default)]
    pub decoupled_weight_decay: bool,
    pub epochs: usize,
    pub seed: u64,
    pub train_fraction: f64,
    /// Standard deviation of the Gaussian init; `None` means `1/sqrt(d)`.
    pub init_std: Option<f64>,
    pub snapshot_every: usize,
    /// Keep full frequency-space snapshots in the trace (memory heavy).
    #[serde(default)]
    pub keep_snapshots: bool,
}

impl TrainConfig {
    pub fn new(group: GroupSpec, q: usize) -> Self {
        Self {
            group,
            q,
            lr: 0.01,
            weight_decay: 5e-5,
            decoupled_weight_decay: false,
            epochs: 10_000,
            seed: 0,
            train_fraction: 0.9,
            init_std: None,
            snapshot_every: 50,
            keep_snapshots: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q == 0 {
            return Err(CogsError::Validation("q must be at least 1".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction <= 1.0) {
            return Err(CogsError::Validation(format!("train fraction {} outside (0, 1]", self.train_fraction)));
        }
        if !(self.lr.is_finite() && self.lr > 0.0) {
            return Err(CogsError::Validation(format!("learning rate {} must be positive", self.lr)));
        }
        if !(self.weight_decay.is_finite() && self.weight_decay >= 0.0) {
            return Err(CogsError::Validation(format!("weight decay {} must be non-negative", self.weight_decay)));
        }
        if self.snapshot_every == 0 {
            return Err(CogsError::Validation("snapshot cadence must be at least 1".into()));
        }
        Ok(())
    }

    pub fn init_std(&self) -> f64 {
        self.init_std.unwrap_or(1.0 / (self.group.size() as f64).sqrt())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub train: Vec<(usize, usize)>,
    pub test: Vec<(usize, usize)>,
}

/// Seeded shuffle of all `d^2` pairs; the first `floor(fraction * d^2)` train.
pub fn make_dataset(spec: &GroupSpec, fraction: f64, seed: u64) -> Result<Dataset> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(CogsError::Validation(format!("train fraction {fraction} outside (0, 1]")));
    }
    let d = spec.size();
    let mut pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| (0..d).map(move |b| (a, b))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    pairs.shuffle(&mut rng);
    let n_train = ((fraction * (d * d) as f64) + 1e-9).floor() as usize;
    let test = pairs.split_off(n_train.min(pairs.len()));
    Ok(Dataset { train: pairs, test })
}

pub fn init_net(config: &TrainConfig) -> RealNet {
    let spec = &config.group;
    let n = spec.size() * config.q;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let normal = Normal::new(0.0, config.init_std()).expect("finite std");
    let mut draw = || (0..n).map(|_| normal.sample(&mut rng)).collect::<Vec<f64>>();
    let (a, b, c) = (draw(), draw(), draw());
    RealNet { spec: spec.clone(), q: config.q, w_a: a, w_b: b, w_c: c }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gradient {
    pub w_a: Vec<f64>,
    pub w_b: Vec<f64>,
    pub w_c: Vec<f64>,
}

impl Gradient {
    pub fn role(&self, p: Role) -> &[f64] {
        match p {
            Role::A => &self.w_a,
            Role::B => &self.w_b,
            Role::C => &self.w_c,
        }
    }

    pub fn norm(&self) -> f64 {
        ROLES.iter().flat_map(|&p| self.role(p)).map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[inline]
fn dot(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let xs = x.chunks_exact(4);
    let ys = y.chunks_exact(4);
    let tail: f64 = xs.remainder().iter().zip(ys.remainder()).map(|(a, b)| a * b).sum();
    for (a, b) in xs.zip(ys) {
        for l in 0..4 {
            acc[l] += a[l] * b[l];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[inline]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Batch statistics at the current weights.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BatchStats {
    pub loss: f64,
    pub accuracy: f64,
}

/// Mean projected squared error over `batch` and its exact gradient.
pub fn loss_and_grad(net: &RealNet, batch: &[(usize, usize)]) -> Result<(BatchStats, Gradient)> {
    if batch.is_empty() {
        return Err(CogsError::Validation("empty batch".into()));
    }
    let (d, q) = (net.d(), net.q);
    let spec = &net.spec;
    let n = batch.len() as f64;
    let mut grad = Gradient { w_a: vec![0.0; d * q], w_b: vec![0.0; d * q], w_c: vec![0.0; d * q] };
    let mut h = vec![0.0; q];
    let mut s = vec![0.0; q];
    let mut ds = vec![0.0; q];
    let mut o = vec![0.0; d];
    let mut loss = 0.0;
    let mut correct = 0usize;
    let scale = 1.0 / (2.0 * d as f64);
    for &(g1, g2) in batch {
        let t = spec.mul_flat(g1, g2);
        let (wa, wb) = (&net.w_a[g1 * q..(g1 + 1) * q], &net.w_b[g2 * q..(g2 + 1) * q]);
        for j in 0..q {
            h[j] = wa[j] + wb[j];
            s[j] = h[j] * h[j];
        }
        for (g, og) in o.iter_mut().enumerate() {
            *og = dot(&net.w_c[g * q..(g + 1) * q], &s);
        }
        if argmax(&o) == t {
            correct += 1;
        }
        // Residual after removing its mean over outputs.
        let mut mean = 0.0;
        for (g, og) in o.iter_mut().enumerate() {
            *og = *og * scale - if g == t { 1.0 } else { 0.0 };
            mean += *og;
        }
        mean /= d as f64;
        ds.iter_mut().for_each(|x| *x = 0.0);
        for (g, og) in o.iter().enumerate() {
            let r = og - mean;
            loss += r * r;
            // d loss / d o_g with the 1/n batch mean and the 1/2d scaling.
            let dout = 2.0 * r * scale / n;
            axpy(dout, &s, &mut grad.w_c[g * q..(g + 1) * q]);
            axpy(dout, &net.w_c[g * q..(g + 1) * q], &mut ds);
        }
        let (ga, gb) = (g1 * q, g2 * q);
        for j in 0..q {
            let dh = 2.0 * h[j] * ds[j];
            grad.w_a[ga + j] += dh;
            grad.w_b[gb + j] += dh;
        }
    }
    Ok((BatchStats { loss: loss / n, accuracy: correct as f64 / n }, grad))
}

/// Mean loss and accuracy without the backward pass.
pub fn evaluate(net: &RealNet, pairs: &[(usize, usize)]) -> BatchStats {
    if pairs.is_empty() {
        return BatchStats { loss: f64::NAN, accuracy: f64::NAN };
    }
    let spec = &net.spec;
    let mut loss = 0.0;
    let mut correct = 0;
    for &(g1, g2) in pairs {
        let o = forward_output(net, g1, g2);
        let t = spec.mul_flat(g1, g2);
        if argmax(&o) == t {
            correct += 1;
        }
        loss += crate::loss::projected_sq_error(&o, t);
    }
    let n = pairs.len() as f64;
    BatchStats { loss: loss / n, accuracy: correct as f64 / n }
}

/// First index of the maximum.
fn argmax(o: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in o.iter().enumerate() {
        if x > o[best] {
            best = i;
        }
    }
    best
}

/// Fraction of pairs whose argmax output (lowest index on ties) is `g1 g2`.
pub fn accuracy(net: &RealNet, pairs: &[(usize, usize)]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(CogsError::Validation("accuracy needs at least one pair".into()));
    }
    Ok(evaluate(net, pairs).accuracy)
}

/// Weights of dead hidden nodes decay toward zero under weight decay and
/// would otherwise spend thousands of epochs in subnormal arithmetic, which
/// is two orders of magnitude slower. Values this small contribute nothing
/// to the output (it is cubic in the weights), so they are set to zero.
const FLUSH_WEIGHT: f64 = 1e-30;
const FLUSH_MOMENT: f64 = 1e-200;

/// Adam with bias-corrected moments.
#[derive(Clone, Debug)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    t: i32,
    m: [Vec<f64>; 3],
    v: [Vec<f64>; 3],
}

impl Adam {
    pub fn new(lr: f64, n: usize) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
            m: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
            v: [vec![0.0; n], vec![0.0; n], vec![0.0; n]],
        }
    }

    /// One update. With `coupled_wd > 0` the decay term is folded into the
    /// gradient; `decoupled_wd` shrinks weights before the Adam step.
    pub fn step(&mut self, net: &mut RealNet, grad: &Gradient, coupled_wd: f64, decoupled_wd: f64) {
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t);
        let bc2 = 1.0 - self.beta2.powi(self.t);
        for p in ROLES {
            let i = p.index();
            let g = grad.role(p);
            let (m, v) = (&mut self.m[i], &mut self.v[i]);
            let w = net.role_mut(p);
            for idx in 0..w.len() {
                let gi = g[idx] + coupled_wd * w[idx];
                m[idx] = self.beta1 * m[idx] + (1.0 - self.beta1) * gi;
                v[idx] = self.beta2 * v[idx] + (1.0 - self.beta2) * gi * gi;
                let m_hat = m[idx] / bc1;
                let v_hat = v[idx] / bc2;
                if decoupled_wd > 0.0 {
                    w[idx] -= self.lr * decoupled_wd * w[idx];
                }
                w[idx] -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
                if w[idx].abs() < FLUSH_WEIGHT {
                    w[idx] = 0.0;
                }
                if m[idx].abs() < FLUSH_MOMENT {
                    m[idx] = 0.0;
                }
                if v[idx] < FLUSH_MOMENT {
                    v[idx] = 0.0;
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    /// Number of updates applied before this evaluation.
    pub epoch: usize,
    pub train_loss: f64,
    pub test_loss: f64,
    pub train_acc: f64,
    pub test_acc: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpSnapshot {
    pub epoch: usize,
    pub values: Vec<(String, Complex64)>,
}

impl SpSnapshot {
    pub fn get(&self, label: &str) -> Option<Complex64> {
        self.values.iter().find(|(l, _)| l == label).map(|&(_, v)| v)
    }
}

#[derive(Clone, Debug, Default)]
pub struct TrainingTrace {
    pub epochs: Vec<EpochRecord>,
    pub sp: Vec<SpSnapshot>,
    pub snapshots: Vec<(usize, WeightZ)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TrainStatus {
    Completed,
    Diverged { epoch: usize },
}

#[derive(Clone, Debug)]
pub struct TrainOutput {
    pub net: RealNet,
    pub trace: TrainingTrace,
    pub dataset: Dataset,
    pub status: TrainStatus,
}

/// Named potentials tracked during training.
///
/// * `diag_sum`: `sum_{k != 0} r_kkk`
/// * `offdiag_max`, `offdiag_norm`: max and l2 norm of `|r_{k1 k2 k}|` over
///   index triples that are not all equal
/// * per representative `k`: `r_kkk`, `r_{a,k,-k,k}`, `r_{b,k,-k,k}`,
///   `r_{a,k,k,k}`, `r_{b,k,k,k}`
pub fn sp_summary(z: &WeightZ) -> Vec<(String, Complex64)> {
    let tab = Tables::new(z);
    let d = tab.d;
    let spec = z.spec();
    let mut diag = Complex64::new(0.0, 0.0);
    let mut off_max: f64 = 0.0;
    let mut off_sq = 0.0;
    for k in 1..d {
        let c = tab.row(Role::C, k);
        for k1 in 1..d {
            let ac: Vec<Complex64> = tab.row(Role::A, k1).iter().zip(c).map(|(a, c)| a * c).collect();
            for k2 in 1..d {
                let r = crate::numeric::dot(&ac, tab.row(Role::B, k2));
                if k1 == k && k2 == k {
                    diag += r;
                } else {
                    off_max = off_max.max(r.norm());
                    off_sq += r.norm_sqr();
                }
            }
        }
    }
    let mut out = vec![
        ("diag_sum".to_string(), diag),
        ("offdiag_max".to_string(), Complex64::new(off_max, 0.0)),
        ("offdiag_norm".to_string(), Complex64::new(off_sq.sqrt(), 0.0)),
    ];
    let r3 = |x: (Role, usize), y: (Role, usize), w: (Role, usize)| {
        crate::numeric::dot(
            &tab.row(x.0, x.1).iter().zip(tab.row(y.0, y.1)).map(|(a, b)| a * b).collect::<Vec<_>>(),
            tab.row(w.0, w.1),
        )
    };
    for &k in z.reps() {
        let n = spec.neg_flat(k);
        let tag = spec.decode(k).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        out.push((format!("r_kkk[{tag}]"), r3((Role::A, k), (Role::B, k), (Role::C, k))));
        for p in [Role::A, Role::B] {
            out.push((format!("r_{p},k,-k,k[{tag}]"), r3((p, k), (p, n), (Role::C, k))));
            out.push((format!("r_{p},k,k,k[{tag}]"), r3((p, k), (p, k), (Role::C, k))));
        }
    }
    out
}

/// Stepwise trainer; [`train`] drives it to completion.
pub struct Trainer {
    pub config: TrainConfig,
    pub net: RealNet,
    pub dataset: Dataset,
    adam: Adam,
    epoch: usize,
}

impl Trainer {
    pub fn new(config: TrainConfig) -> Result<Self> {
        config.validate()?;
        let dataset = make_dataset(&config.group, config.train_fraction, config.seed)?;
        let net = init_net(&config);
        let adam = Adam::new(config.lr, net.w_a.len());
        Ok(Self { config, net, dataset, adam, epoch: 0 })
    }

    pub fn epoch(&self) -> usize {
        self.epoch
    }

    /// Evaluates at the current weights, then applies one update.
    pub fn step(&mut self) -> Result<EpochRecord> {
        let (stats, grad) = loss_and_grad(&self.net, &self.dataset.train)?;
        let test = evaluate(&self.net, &self.dataset.test);
        let rec = EpochRecord {
            epoch: self.epoch,
            train_loss: stats.loss,
            test_loss: test.loss,
            train_acc: stats.accuracy,
            test_acc: test.accuracy,
        };
        if !stats.loss.is_finite() {
            return Err(CogsError::Numeric(format!("training loss became {} at epoch {}", stats.loss, self.epoch)));
        }
        let (coupled, decoupled) = if self.config.decoupled_weight_decay {
            (0.0, self.config.weight_decay)
        } else {
            (self.config.weight_decay, 0.0)
        };
        self.adam.step(&mut self.net, &grad, coupled, decoupled);
        self.epoch += 1;
        Ok(rec)
    }

    pub fn record(&self) -> EpochRecord {
        let train = evaluate(&self.net, &self.dataset.train);
        let test = evaluate(&self.net, &self.dataset.test);
        EpochRecord {
            epoch: self.epoch,
            train_loss: train.loss,
            test_loss: test.loss,
            train_acc: train.accuracy,
            test_acc: test.accuracy,
        }
    }
}

pub fn train(config: TrainConfig) -> Result<TrainOutput> {
    let mut trainer = Trainer::new(config)?;
    let mut trace = TrainingTrace::default();
    let every = trainer.config.snapshot_every;
    let epochs = trainer.config.epochs;
    let snapshot = |trainer: &Trainer, trace: &mut TrainingTrace| {
        let z = WeightZ::from_real(&trainer.net);
        trace.sp.push(SpSnapshot { epoch: trainer.epoch(), values: sp_summary(&z) });
        if trainer.config.keep_snapshots {
            trace.snapshots.push((trainer.epoch(), z));
        }
    };
    let mut status = TrainStatus::Completed;
    for e in 0..epochs {
        if e % every == 0 {
            snapshot(&trainer, &mut trace);
        }
        match trainer.step() {
            Ok(rec) => trace.epochs.push(rec),
            Err(CogsError::Numeric(_)) => {
                status = TrainStatus::Diverged { epoch: e };
                break;
            }
            Err(other) => return Err(other),
        }
    }
    if status == TrainStatus::Completed {
        trace.epochs.push(trainer.record());
        snapshot(&trainer, &mut trace);
    }
    Ok(TrainOutput { net: trainer.net, trace, dataset: trainer.dataset, status })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JjStats {
    pub mean_diag: f64,
    pub mean_offdiag: f64,
    pub ratio: f64,
}

/// `H = J J^*` over the family `r_{k1 k2 k3}` (all nonzero frequencies),
/// with `J` the Jacobian with respect to the real weights. Row-major over
/// the triples `(k1, k2, k3)` with `k3` fastest.
pub fn jjstar_matrix(net: &RealNet) -> (Vec<[usize; 3]>, Vec<Complex64>) {
    let z = WeightZ::from_real(net);
    let tab = Tables::new(&z);
    let d = tab.d;
    let q = tab.q;
    let triples: Vec<[usize; 3]> =
        (1..d).flat_map(|a| (1..d).flat_map(move |b| (1..d).map(move |c| [a, b, c]))).collect();
    // pair[p][(k, k')][j] = z_{p k j} conj(z_{p k' j})
    let mut pair = vec![vec![Complex64::new(0.0, 0.0); d * d * q]; 3];
    for p in ROLES {
        for k in 1..d {
            for kk in 1..d {
                let (x, y) = (tab.row(p, k), tab.row(p, kk));
                let out = &mut pair[p.index()][(k * d + kk) * q..(k * d + kk + 1) * q];
                for j in 0..q {
                    out[j] = x[j] * y[j].conj();
                }
            }
        }
    }
    let n = triples.len();
    let inv_d = 1.0 / d as f64;
    let mut h = vec![Complex64::new(0.0, 0.0); n * n];
    let prod_sum = |u: &[Complex64], v: &[Complex64]| -> Complex64 { crate::numeric::dot(u, v) };
    for (row, x) in triples.iter().enumerate() {
        for (col, y) in triples.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            let pr = |p: usize, i: usize| &pair[p][(x[i] * d + y[i]) * q..(x[i] * d + y[i] + 1) * q];
            if x[0] == y[0] {
                acc += prod_sum(pr(1, 1), pr(2, 2));
            }
            if x[1] == y[1] {
                acc += prod_sum(pr(0, 0), pr(2, 2));
            }
            if x[2] == y[2] {
                acc += prod_sum(pr(0, 0), pr(1, 1));
            }
            h[row * n + col] = acc * inv_d;
        }
    }
    (triples, h)
}

/// Diagonal dominance of `J J^*`.
pub fn jjstar_diagnostics(net: &RealNet) -> JjStats {
    let (triples, h) = jjstar_matrix(net);
    let n = triples.len();
    let mut diag = 0.0;
    let mut off = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r == c {
                diag += h[r * n + c].norm();
            } else {
                off += h[r * n + c].norm();
            }
        }
    }
    let mean_diag = diag / n as f64;
    let mean_offdiag = if n > 1 { off / (n * n - n) as f64 } else { 0.0 };
    let ratio = if mean_diag > 0.0 { mean_offdiag / mean_diag } else { 0.0 };
    JjStats { mean_diag, mean_offdiag, ratio }
}

/// First-order change of the analytic loss predicted from the change of
/// every loss potential between `z0` and `z1`: `sum_x (dl/dr_x)(z0) dr_x`,
/// with `r_x` and its conjugate partner treated as independent variables.
/// Negative values mean the potentials moved downhill.
pub fn sp_descent_change(z0: &WeightZ, z1: &WeightZ) -> f64 {
    let d = z0.d();
    let spec = z0.spec();
    let (t0, t1) = (Tables::new(z0), Tables::new(z1));
    let r3 = |t: &Tables, x: (Role, usize), y: (Role, usize), w: (Role, usize)| {
        let (a, b, c) = (t.row(x.0, x.1), t.row(y.0, y.1), t.row(w.0, w.1));
        (0..t.q).map(|j| a[j] * b[j] * c[j]).sum::<Complex64>()
    };
    let inv_d = 1.0 / d as f64;
    let mut total = Complex64::new(0.0, 0.0);
    // r_{k1 k2 k}: dl/dr = (-2 [diag] + 2 r_{-x}) / d
    for k in 1..d {
        for k1 in 1..d {
            for k2 in 1..d {
                let idx = ((Role::A, k1), (Role::B, k2), (Role::C, k));
                let nidx = ((Role::A, spec.neg_flat(k1)), (Role::B, spec.neg_flat(k2)), (Role::C, spec.neg_flat(k)));
                let r0n = r3(&t0, nidx.0, nidx.1, nidx.2);
                let g = (if k1 == k && k2 == k { -2.0 } else { 0.0 } + 2.0 * r0n) * inv_d;
                let dr = r3(&t1, idx.0, idx.1, idx.2) - r3(&t0, idx.0, idx.1, idx.2);
                total += g * dr;
            }
        }
    }
    // r_{p k1 k2 k}: aggregates N_k (m = 0) and S_{p,m,k}.
    let agg = |t: &Tables, p: Role, m: usize, k: usize| {
        let mut s = Complex64::new(0.0, 0.0);
        for k1 in 1..d {
            let k2 = spec.mul_flat(m, spec.neg_flat(k1));
            if k2 != 0 {
                s += r3(t, (p, k1), (p, k2), (Role::C, k));
            }
        }
        s
    };
    for k in 1..d {
        let nk = spec.neg_flat(k);
        let n_neg: Complex64 = [Role::A, Role::B].iter().map(|&p| agg(&t0, p, 0, nk)).sum();
        for p in [Role::A, Role::B] {
            for m in 0..d {
                let coef = if m == 0 { n_neg } else { agg(&t0, p, spec.neg_flat(m), nk) };
                let dagg = agg(&t1, p, m, k) - agg(&t0, p, m, k);
                total += 0.5 * inv_d * coef * dagg;
            }
        }
    }
    total.re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dataset_split_sizes() {
        let spec = GroupSpec::cyclic(23).unwrap();
        let ds = make_dataset(&spec, 0.9, 4).unwrap();
        assert_eq!((ds.train.len(), ds.test.len()), (476, 53));
        assert_eq!(ds, make_dataset(&spec, 0.9, 4).unwrap());
        let all = make_dataset(&spec, 1.0, 4).unwrap();
        assert_eq!((all.train.len(), all.test.len()), (529, 0));
        assert!(make_dataset(&spec, 0.0, 1).is_err());
        let mut seen: Vec<_> = ds.train.iter().chain(&ds.test).copied().collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 529);
    }

    #[test]
    fn zero_net_has_zero_gradient() {
        let spec = GroupSpec::cyclic(5).unwrap();
        let net = RealNet::zeros(&spec, 3);
        let ds = make_dataset(&spec, 1.0, 0).unwrap();
        let (_, g) = loss_and_grad(&net, &ds.train).unwrap();
        assert_eq!(g.norm(), 0.0);
        assert!(accuracy(&net, &ds.train).unwrap() <= 2.0 / 5.0);
    }

    #[test]
    fn zero_epochs_returns_init() {
        let mut cfg = TrainConfig::new(GroupSpec::cyclic(5).unwrap(), 4);
        cfg.epochs = 0;
        let out = train(cfg.clone()).unwrap();
        assert_eq!(out.net, init_net(&cfg));
        assert_eq!(out.trace.epochs.len(), 1);
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = TrainConfig::new(GroupSpec::cyclic(5).unwrap(), 0);
        assert!(train(cfg.clone()).is_err());
        cfg.q = 2;
        cfg.train_fraction = 1.5;
        assert!(train(cfg).is_err());
    }

    #[test]
    fn zero_net_jjstar_vanishes() {
        let stats = jjstar_diagnostics(&RealNet::zeros(&GroupSpec::cyclic(5).unwrap(), 2));
        assert_eq!(stats.mean_diag, 0.0);
        assert_eq!(stats.mean_offdiag, 0.0);
    }
}
