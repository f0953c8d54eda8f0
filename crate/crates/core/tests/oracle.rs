use cogs::{analytic_loss, forward_loss, GroupSpec, RealNet, WeightZ};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_net(spec: &GroupSpec, q: usize, rng: &mut ChaCha8Rng) -> RealNet {
    let n = spec.size() * q;
    let mut draw = || (0..n).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>();
    let (a, b, c) = (draw(), draw(), draw());
    RealNet::new(spec, q, a, b, c).unwrap().mean_centered()
}

#[test]
fn analytic_matches_forward_on_random_nets() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for orders in ["3", "4", "5", "7", "12", "2,2,3"] {
        let spec: GroupSpec = orders.parse().unwrap();
        for q in 1..=8 {
            let net = random_net(&spec, q, &mut rng);
            let f = forward_loss(&net);
            let a = analytic_loss(&WeightZ::from_real(&net)).total;
            assert!((f - a).abs() <= 1e-9 * (1.0 + f.abs()), "{orders} q={q}: {f} vs {a}");
        }
    }
}
