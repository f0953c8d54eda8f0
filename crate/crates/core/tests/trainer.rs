use cogs::potentials::sp_value_unchecked;
use cogs::trainer::{
    evaluate, init_net, jjstar_diagnostics, jjstar_matrix, loss_and_grad, make_dataset, sp_descent_change, train,
    TrainConfig, TrainStatus,
};
use cogs::{analytic_loss, forward_loss, GroupSpec, RealNet, SumPotentialIndex, WeightZ, ROLES};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn random_net(spec: &GroupSpec, q: usize, seed: u64, std: f64) -> RealNet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, std).unwrap();
    let n = spec.size() * q;
    let mut draw = || (0..n).map(|_| normal.sample(&mut rng)).collect::<Vec<_>>();
    let (a, b, c) = (draw(), draw(), draw());
    RealNet::new(spec, q, a, b, c).unwrap()
}

#[test]
fn gradient_matches_finite_differences() {
    for (orders, q) in [(vec![5], 3), (vec![2, 3], 2)] {
        let spec = GroupSpec::new(orders).unwrap();
        let net = random_net(&spec, q, 3, 0.7);
        let ds = make_dataset(&spec, 0.8, 9).unwrap();
        let (stats, grad) = loss_and_grad(&net, &ds.train).unwrap();
        assert!((stats.loss - evaluate(&net, &ds.train).loss).abs() < 1e-12);
        let h = 1e-5;
        for p in ROLES {
            for i in 0..net.role(p).len() {
                let mut plus = net.clone();
                plus.role_mut(p)[i] += h;
                let mut minus = net.clone();
                minus.role_mut(p)[i] -= h;
                let fd = (evaluate(&plus, &ds.train).loss - evaluate(&minus, &ds.train).loss) / (2.0 * h);
                let g = grad.role(p)[i];
                assert!((fd - g).abs() <= 1e-6 * (1.0 + g.abs()), "{p} {i}: fd {fd} vs {g}");
            }
        }
    }
}

#[test]
fn full_batch_loss_is_forward_loss() {
    let spec = GroupSpec::cyclic(7).unwrap();
    let net = random_net(&spec, 4, 1, 0.5);
    let all = make_dataset(&spec, 1.0, 0).unwrap();
    let (stats, _) = loss_and_grad(&net, &all.train).unwrap();
    assert!((stats.loss - forward_loss(&net)).abs() < 1e-12);
}

fn all_r3(net: &RealNet) -> Vec<Complex64> {
    let z = WeightZ::from_real(net);
    let d = net.d();
    let mut out = Vec::new();
    for k1 in 1..d {
        for k2 in 1..d {
            for k3 in 1..d {
                out.push(sp_value_unchecked(&z, &SumPotentialIndex::abc(k1, k2, k3)));
            }
        }
    }
    out
}

#[test]
fn jjstar_closed_form_matches_numerical_jacobian() {
    let spec = GroupSpec::cyclic(5).unwrap();
    let net = random_net(&spec, 2, 5, 0.8);
    let (triples, h) = jjstar_matrix(&net);
    let n = triples.len();
    let mut jac: Vec<Vec<Complex64>> = Vec::new();
    let eps = 1e-5;
    for p in ROLES {
        for i in 0..net.role(p).len() {
            let mut plus = net.clone();
            plus.role_mut(p)[i] += eps;
            let mut minus = net.clone();
            minus.role_mut(p)[i] -= eps;
            let col: Vec<Complex64> =
                all_r3(&plus).iter().zip(all_r3(&minus)).map(|(a, b)| (a - b) / (2.0 * eps)).collect();
            jac.push(col);
        }
    }
    for r in 0..n {
        for c in 0..n {
            let fd: Complex64 = jac.iter().map(|col| col[r] * col[c].conj()).sum();
            let got = h[r * n + c];
            assert!((fd - got).norm() < 1e-7 * (1.0 + got.norm()), "({r},{c}) {fd} vs {got}");
        }
    }
}

#[test]
fn jjstar_ratio_shrinks_with_width() {
    let spec = GroupSpec::cyclic(5).unwrap();
    let ratio = |q: usize| {
        let cfg = TrainConfig { init_std: Some(0.3), seed: 2, ..TrainConfig::new(spec.clone(), q) };
        jjstar_diagnostics(&init_net(&cfg)).ratio
    };
    assert!(ratio(256) < ratio(16));
}

#[test]
fn sp_descent_change_is_the_first_order_loss_change() {
    let spec = GroupSpec::cyclic(5).unwrap();
    let net = random_net(&spec, 3, 8, 0.6).mean_centered();
    let all = make_dataset(&spec, 1.0, 0).unwrap();
    let (_, grad) = loss_and_grad(&net, &all.train).unwrap();
    let z0 = WeightZ::from_real(&net);
    for eta in [1e-3, 1e-4] {
        let mut next = net.clone();
        for p in ROLES {
            let g = grad.role(p).to_vec();
            next.role_mut(p).iter_mut().zip(g).for_each(|(w, g)| *w -= eta * g);
        }
        let z1 = WeightZ::from_real(&next);
        let predicted = sp_descent_change(&z0, &z1);
        let actual = analytic_loss(&z1).total - analytic_loss(&z0).total;
        assert!(predicted < 0.0);
        assert!((predicted - actual).abs() <= 50.0 * eta * actual.abs(), "eta {eta}: {predicted} vs {actual}");
    }
}

#[test]
fn training_is_deterministic_and_learns() {
    let mut cfg = TrainConfig::new(GroupSpec::cyclic(5).unwrap(), 16);
    cfg.epochs = 300;
    cfg.snapshot_every = 100;
    let a = train(cfg.clone()).unwrap();
    let b = train(cfg).unwrap();
    assert_eq!(a.net, b.net);
    assert_eq!(a.status, TrainStatus::Completed);
    assert_eq!(a.trace.epochs.len(), 301);
    assert_eq!(a.trace.sp.len(), 4);
    let first = &a.trace.epochs[0];
    let last = a.trace.epochs.last().unwrap();
    assert!(last.train_loss < 0.5 * first.train_loss);
    assert!(a.trace.sp[3].get("diag_sum").is_some());
}

#[test]
fn divergence_is_reported() {
    let mut cfg = TrainConfig::new(GroupSpec::cyclic(5).unwrap(), 4);
    cfg.init_std = Some(1e80);
    cfg.epochs = 5;
    let out = train(cfg).unwrap();
    assert_eq!(out.status, TrainStatus::Diverged { epoch: 0 });
}

#[test]
fn gradient_vanishes_at_constructed_solution() {
    use cogs::constructors::{build_f6, build_memorization, F6Params};
    for z in [
        build_f6(&GroupSpec::cyclic(7).unwrap(), &F6Params::default()).unwrap(),
        build_f6(&GroupSpec::cyclic(6).unwrap(), &F6Params::default()).unwrap(),
        build_memorization(&GroupSpec::cyclic(5).unwrap()).unwrap(),
    ] {
        let spec = z.spec().clone();
        let all = make_dataset(&spec, 1.0, 0).unwrap().train;
        assert_eq!(all.len(), spec.size() * spec.size());
        let (stats, grad) = loss_and_grad(&z.to_real(), &all).unwrap();
        assert!(stats.loss <= 1e-20, "{}", stats.loss);
        assert!(grad.norm() <= 1e-8, "{spec}: {}", grad.norm());
        assert_eq!(stats.accuracy, 1.0);
    }
}

#[test]
fn single_memorized_pair_is_answered() {
    let spec = GroupSpec::cyclic(7).unwrap();
    let d = 7;
    let (g1, g2) = (3, 6);
    let delta = |at: usize| (0..d).map(|i| if i == at { 1.0 } else { 0.0 } - 1.0 / d as f64).collect::<Vec<_>>();
    let net = RealNet::new(&spec, 1, delta(g1), delta(g2), delta(spec.mul_flat(g1, g2))).unwrap();
    assert_eq!(cogs::trainer::accuracy(&net, &[(g1, g2)]).unwrap(), 1.0);
    let out = cogs::forward_output(&net, g1, g2);
    let best = (0..d).max_by(|&i, &j| out[i].total_cmp(&out[j])).unwrap();
    assert_eq!(best, 2);
}

#[test]
fn heavy_weight_decay_collapses() {
    let spec = GroupSpec::cyclic(7).unwrap();
    let config = TrainConfig { weight_decay: 1.0, epochs: 3000, ..TrainConfig::new(spec, 20) };
    let out = train(config).unwrap();
    let last = out.trace.epochs.last().unwrap();
    let size: f64 = ROLES.iter().map(|&p| out.net.role(p).iter().map(|w| w * w).sum::<f64>()).sum::<f64>().sqrt();
    assert!(size < 1e-3, "weights did not collapse: {size}");
    assert!(last.test_acc <= 3.0 / 7.0, "{}", last.test_acc);
}

/// With plain (undecayed) small steps the SP increment points downhill
/// almost always.
#[test]
fn sp_increments_descend() {
    let spec = GroupSpec::cyclic(7).unwrap();
    let config = TrainConfig {
        lr: 1e-3,
        weight_decay: 0.0,
        train_fraction: 1.0,
        epochs: 400,
        snapshot_every: 1,
        keep_snapshots: true,
        ..TrainConfig::new(spec, 12)
    };
    let out = train(config).unwrap();
    let snaps = &out.trace.snapshots;
    assert!(snaps.len() > 300);
    let descending = snaps.windows(2).filter(|w| sp_descent_change(&w[0].1, &w[1].1) <= 0.0).count();
    let frac = descending as f64 / (snaps.len() - 1) as f64;
    assert!(frac >= 0.95, "only {frac} of steps descend");
}
