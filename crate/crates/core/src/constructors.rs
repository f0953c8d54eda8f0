//! Generators, polynomial partial solutions and the assembled global
//! solutions.
//!
//! Everything here is deterministic; no randomness is involved except in
//! [`random_unit`], which takes the RNG explicitly.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CogsError, Result};
use crate::group::GroupSpec;
use crate::numeric::cbrt;
use crate::potentials::{single_frequency_potentials, sp_value_unchecked, SumPotentialIndex};
use crate::weight::{Role, WeightZ, ROLES};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Values closer than this are merged when collecting `r(u)` over a set.
const VALUE_TOL: f64 = 1e-9;

pub fn omega3() -> Complex64 {
    Complex64::from_polar(1.0, TAU / 3.0)
}

fn check_unit_modulus(name: &str, x: Complex64) -> Result<()> {
    if (x.norm() - 1.0).abs() > 1e-12 {
        return Err(CogsError::Validation(format!("{name} must have unit modulus, got |{name}| = {}", x.norm())));
    }
    Ok(())
}

fn check_pair_frequency(spec: &GroupSpec, k: usize) -> Result<()> {
    spec.check_flat(k)?;
    if k == 0 {
        return Err(CogsError::Validation("frequency 0 is excluded".into()));
    }
    if spec.is_self_conjugate(k) {
        return Err(CogsError::Validation(format!("frequency {k} is self-conjugate; complex entries are not allowed")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorName {
    OneK,
    PseudoOne,
    UOne,
    USyn,
    U3c,
    U3a,
    U4c,
    U4a,
    UNu,
}

impl GeneratorName {
    pub const ALL: [GeneratorName; 9] = [
        GeneratorName::OneK,
        GeneratorName::PseudoOne,
        GeneratorName::UOne,
        GeneratorName::USyn,
        GeneratorName::U3c,
        GeneratorName::U3a,
        GeneratorName::U4c,
        GeneratorName::U4a,
        GeneratorName::UNu,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorName::OneK => "one_k",
            GeneratorName::PseudoOne => "pseudo_one",
            GeneratorName::UOne => "u_one",
            GeneratorName::USyn => "u_syn",
            GeneratorName::U3c => "u_3c",
            GeneratorName::U3a => "u_3a",
            GeneratorName::U4c => "u_4c",
            GeneratorName::U4a => "u_4a",
            GeneratorName::UNu => "u_nu",
        }
    }

    /// `[a, b, c]` at frequency `k`.
    pub fn entries(self, nu: Complex64) -> [Complex64; 3] {
        let w = omega3();
        match self {
            GeneratorName::OneK => [ONE; 3],
            GeneratorName::PseudoOne => [-ONE, -ONE, ONE],
            GeneratorName::UOne => [ONE, -ONE, -ONE],
            GeneratorName::USyn => [w; 3],
            GeneratorName::U3c => [w, w.conj(), ONE],
            GeneratorName::U3a => [ONE, w, w.conj()],
            GeneratorName::U4c => [I, -I, ONE],
            GeneratorName::U4a => [ONE, I, -I],
            GeneratorName::UNu => [nu, -nu, -(nu.conj() * nu.conj())],
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: GeneratorName,
    pub k: usize,
    /// Only read by `u_nu`.
    pub nu: Complex64,
}

impl GeneratorSpec {
    pub fn new(name: GeneratorName, k: usize) -> Self {
        Self { name, k, nu: ONE }
    }

    pub fn u_nu(k: usize, nu: Complex64) -> Self {
        Self { name: GeneratorName::UNu, k, nu }
    }
}

pub fn make_generator(spec: &GroupSpec, g: GeneratorSpec) -> Result<WeightZ> {
    if g.name == GeneratorName::UNu {
        check_unit_modulus("nu", g.nu)?;
    }
    if g.k == 0 {
        return Err(CogsError::Validation("frequency 0 is excluded".into()));
    }
    let u = WeightZ::single_frequency(spec, g.k, &[g.name.entries(g.nu)])?;
    let r = sp_value_unchecked(&u, &SumPotentialIndex::abc(g.k, g.k, g.k));
    debug_assert!((r - 1.0).norm() < 1e-12);
    Ok(u)
}

/// The conjugate pair a single-frequency order-1 weight lives on, as its
/// representative.
fn support_of(u: &WeightZ) -> Result<usize> {
    let support: Vec<usize> = u
        .reps()
        .iter()
        .enumerate()
        .filter(|&(r, _)| ROLES.iter().any(|&p| u.rep_values(p, r).iter().any(|v| v.norm() > 0.0)))
        .map(|(_, &k)| k)
        .collect();
    match support.as_slice() {
        [k] => Ok(*k),
        _ => Err(CogsError::Validation(format!(
            "expected support on one conjugate pair, found {}",
            support.len()
        ))),
    }
}

/// Distinct values of the potentials in `set` on `u`.
pub fn omega_values(u: &WeightZ, set: &[SumPotentialIndex]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for idx in set {
        let v = sp_value_unchecked(u, idx);
        if !out.iter().any(|s| (s - v).norm() < VALUE_TOL) {
            out.push(v);
        }
    }
    out
}

/// Polynomial partial solution `P(u)` with `P(x) = prod_{s in Omega} (x - s)`,
/// where `Omega` collects the values of `set` on `u`. Every potential in
/// `set` vanishes on the result, and `r_kkk = P(1)`.
///
/// The product is expanded first and each coefficient `c_l` is realized as
/// `c_l^{1/3} 1_k`, so the order equals the number of nonzero coefficients
/// (three for `u^2 + u + 1`). The coefficients must be real: a complex
/// multiple of `1_k` does not map potentials with conjugated factors to the
/// intended value. Sets closed under conjugation always give real
/// coefficients.
pub fn poly_rho(u: &WeightZ, set: &[SumPotentialIndex]) -> Result<WeightZ> {
    if u.order() != 1 {
        return Err(CogsError::Validation(format!("generator must have order 1, got {}", u.order())));
    }
    let k = support_of(u)?;
    let omega = omega_values(u, set);
    if let Some(s) = omega.iter().find(|s| (*s - 1.0).norm() < VALUE_TOL) {
        return Err(CogsError::Construction(format!("a potential in the set evaluates to {s} on the generator")));
    }
    // Coefficients, lowest degree first.
    let mut coeffs = vec![ONE];
    for &s in &omega {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (l, &c) in coeffs.iter().enumerate() {
            next[l + 1] += c;
            next[l] -= c * s;
        }
        coeffs = next;
    }
    let spec = u.spec();
    let mut power = WeightZ::freq_identity(spec, k)?;
    let mut terms = Vec::new();
    for c in &coeffs {
        if c.im.abs() > 1e-9 * (1.0 + c.re.abs()) {
            return Err(CogsError::Construction(format!(
                "polynomial coefficient {c} is not real; close the set under conjugation"
            )));
        }
        if c.re.abs() > 1e-12 {
            terms.push(power.scale(cbrt(Complex64::new(c.re, 0.0)).re));
        }
        power = power.ring_mul(u)?;
    }
    terms.reverse();
    WeightZ::sum(spec, &terms)
}

/// [`poly_rho`] over every single-frequency loss potential at the
/// generator's frequency whose value is not already 1.
pub fn poly_rho_maximal(u: &WeightZ) -> Result<WeightZ> {
    let k = support_of(u)?;
    let set: Vec<SumPotentialIndex> = single_frequency_potentials(u.spec(), k)
        .into_iter()
        .filter(|idx| (sp_value_unchecked(u, idx) - 1.0).norm() >= VALUE_TOL)
        .collect();
    poly_rho(u, &set)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogKind {
    ZXi,
    ZNu,
    ZSyn,
    ZSynAb,
    Z3c,
    Z3a,
    Z4a,
    Order2One,
    Order3Pm,
}

impl CatalogKind {
    pub const ALL: [CatalogKind; 9] = [
        CatalogKind::ZXi,
        CatalogKind::ZNu,
        CatalogKind::ZSyn,
        CatalogKind::ZSynAb,
        CatalogKind::Z3c,
        CatalogKind::Z3a,
        CatalogKind::Z4a,
        CatalogKind::Order2One,
        CatalogKind::Order3Pm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CatalogKind::ZXi => "z_xi",
            CatalogKind::ZNu => "z_nu",
            CatalogKind::ZSyn => "z_syn",
            CatalogKind::ZSynAb => "z_syn_ab",
            CatalogKind::Z3c => "z_3c",
            CatalogKind::Z3a => "z_3a",
            CatalogKind::Z4a => "z_4a",
            CatalogKind::Order2One => "order2_one",
            CatalogKind::Order3Pm => "order3_pm",
        }
    }

    pub fn order(self) -> usize {
        match self {
            CatalogKind::ZXi | CatalogKind::ZNu | CatalogKind::Order2One => 2,
            CatalogKind::Z4a => 4,
            _ => 3,
        }
    }

    pub fn free_parameters(self) -> usize {
        match self {
            CatalogKind::ZXi | CatalogKind::ZNu => 1,
            CatalogKind::ZSynAb => 2,
            CatalogKind::Order3Pm => 6,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CatalogParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Complex64>,
    /// `(alpha_a, alpha_b, alpha_c)` then `(beta_a, beta_b, beta_c)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signs: Option<[i8; 6]>,
}

/// A catalog solution in canonical form: node 0 is `[1, 1, 1]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub kind: CatalogKind,
    pub params: CatalogParams,
    /// `[a, b, c]` per node at the supported frequency.
    pub nodes: Vec<[Complex64; 3]>,
}

impl CatalogEntry {
    pub fn z_xi(xi: Complex64) -> Result<Self> {
        check_unit_modulus("xi", xi)?;
        Ok(Self {
            kind: CatalogKind::ZXi,
            params: CatalogParams { xi: Some(xi), ..Default::default() },
            nodes: vec![[ONE; 3], [xi, -I * xi.conj(), I]],
        })
    }

    /// `u_nu + 1`, pivot first.
    pub fn z_nu(nu: Complex64) -> Result<Self> {
        check_unit_modulus("nu", nu)?;
        Ok(Self {
            kind: CatalogKind::ZNu,
            params: CatalogParams { nu: Some(nu), ..Default::default() },
            nodes: vec![[ONE; 3], GeneratorName::UNu.entries(nu)],
        })
    }

    pub fn z_syn() -> Self {
        let w = omega3();
        Self { kind: CatalogKind::ZSyn, params: CatalogParams::default(), nodes: vec![[ONE; 3], [w; 3], [w.conj(); 3]] }
    }

    pub fn z_syn_ab(alpha: Complex64, beta: Complex64) -> Result<Self> {
        check_unit_modulus("alpha", alpha)?;
        check_unit_modulus("beta", beta)?;
        let w = omega3();
        Ok(Self {
            kind: CatalogKind::ZSynAb,
            params: CatalogParams { alpha: Some(alpha), beta: Some(beta), ..Default::default() },
            nodes: vec![
                [ONE; 3],
                [w * alpha, w * alpha.conj(), w],
                [w.conj() * beta, w.conj() * beta.conj(), w.conj()],
            ],
        })
    }

    pub fn z_3c() -> Self {
        Self::fixed_power_sum(CatalogKind::Z3c, GeneratorName::U3c, 3)
    }

    pub fn z_3a() -> Self {
        Self::fixed_power_sum(CatalogKind::Z3a, GeneratorName::U3a, 3)
    }

    pub fn z_4a() -> Self {
        Self::fixed_power_sum(CatalogKind::Z4a, GeneratorName::U4a, 4)
    }

    pub fn order2_one() -> Self {
        Self::fixed_power_sum(CatalogKind::Order2One, GeneratorName::UOne, 2)
    }

    /// `[1, alpha_p w, beta_p conj(w)]` with `prod alpha_p = prod beta_p = 1`.
    pub fn order3_pm(signs: [i8; 6]) -> Result<Self> {
        if signs.iter().any(|s| s.abs() != 1) {
            return Err(CogsError::Validation("order-3 signs must be +-1".into()));
        }
        if signs[0] * signs[1] * signs[2] != 1 || signs[3] * signs[4] * signs[5] != 1 {
            return Err(CogsError::Validation("order-3 sign products must equal 1".into()));
        }
        let w = omega3();
        let node = |off: usize, base: Complex64| [0, 1, 2].map(|p| base * signs[off + p] as f64);
        Ok(Self {
            kind: CatalogKind::Order3Pm,
            params: CatalogParams { signs: Some(signs), ..Default::default() },
            nodes: vec![[ONE; 3], node(0, w), node(3, w.conj())],
        })
    }

    /// `1 + u + ... + u^{n-1}` for the named generator.
    fn fixed_power_sum(kind: CatalogKind, gen: GeneratorName, n: usize) -> Self {
        let u = gen.entries(ONE);
        let nodes = (0..n).map(|l| u.map(|x| x.powu(l as u32))).collect();
        Self { kind, params: CatalogParams::default(), nodes }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn to_weight(&self, spec: &GroupSpec, k: usize) -> Result<WeightZ> {
        WeightZ::single_frequency(spec, k, &self.nodes)
    }
}

/// Phases `(theta_a, theta_b, theta_c)` at one representative frequency.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct UnitPhases {
    pub k: usize,
    pub theta: [f64; 3],
}

/// Order-1 unit: `exp(i theta_p)` at each listed frequency, 1 elsewhere.
/// Phases at each frequency must sum to a multiple of `2 pi`.
pub fn make_unit(spec: &GroupSpec, phases: &[UnitPhases]) -> Result<WeightZ> {
    let mut y = WeightZ::ring_identity(spec);
    for ph in phases {
        let s: f64 = ph.theta.iter().sum();
        let wrapped = s - TAU * (s / TAU).round();
        if wrapped.abs() > 1e-9 {
            return Err(CogsError::Validation(format!("unit phases at frequency {} sum to {s}, not a multiple of 2pi", ph.k)));
        }
        if ph.k == 0 {
            return Err(CogsError::Validation("frequency 0 is excluded".into()));
        }
        for p in ROLES {
            let v = Complex64::from_polar(1.0, ph.theta[p.index()]);
            y.set(p, ph.k, 0, v)?;
        }
    }
    Ok(y)
}

/// Unit with uniform random phases; self-conjugate frequencies get random
/// signs with product 1.
pub fn random_unit<R: Rng>(spec: &GroupSpec, rng: &mut R) -> WeightZ {
    let phases: Vec<UnitPhases> = spec
        .representatives()
        .into_iter()
        .map(|k| {
            let theta = if spec.is_self_conjugate(k) {
                let (x, y) = (rng.random_bool(0.5), rng.random_bool(0.5));
                let pick = |b: bool| if b { PI } else { 0.0 };
                [pick(x), pick(y), pick(x ^ y)]
            } else {
                let (x, y) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
                [x, y, -x - y]
            };
            UnitPhases { k, theta }
        })
        .collect();
    make_unit(spec, &phases).expect("phases are valid by construction")
}

/// `(z_nu + 1)`-style order-2 term used by the six-node blocks.
fn z_nu_weight(spec: &GroupSpec, k: usize, nu: Complex64) -> Result<WeightZ> {
    CatalogEntry::z_nu(nu)?.to_weight(spec, k)
}

fn z_syn_weight(spec: &GroupSpec, k: usize) -> Result<WeightZ> {
    CatalogEntry::z_syn().to_weight(spec, k)
}

#[derive(Clone, Debug)]
pub struct F6Params {
    pub nu: Complex64,
    /// Multiplied into every block; must be a unit.
    pub unit: Option<WeightZ>,
}

impl Default for F6Params {
    fn default() -> Self {
        Self { nu: ONE, unit: None }
    }
}

/// Order-6 global solution: `6^{-1/3} z_syn * z_nu` at each conjugate pair,
/// and `2^{-1/3} (u_one + 1)` at self-conjugate frequencies.
pub fn build_f6(spec: &GroupSpec, params: &F6Params) -> Result<WeightZ> {
    if spec.size() < 3 {
        return Err(CogsError::Validation("group must have at least 3 elements".into()));
    }
    let mut blocks = Vec::new();
    for k in spec.representatives() {
        let block = if spec.is_self_conjugate(k) {
            let u = make_generator(spec, GeneratorSpec::new(GeneratorName::UOne, k))?;
            poly_rho_maximal(&u)?.scale(0.5f64.cbrt())
        } else {
            z_syn_weight(spec, k)?.ring_mul(&z_nu_weight(spec, k, params.nu)?)?.scale(6f64.powf(-1.0 / 3.0))
        };
        blocks.push(block);
    }
    let z = WeightZ::sum(spec, &blocks)?;
    match &params.unit {
        Some(y) => z.ring_mul(y),
        None => Ok(z),
    }
}

/// Unscaled order-4 block `(u_{nu=i} + 1) * z_xi` at `k`, with `r_kkk = 4`.
pub fn build_f4(spec: &GroupSpec, k: usize, xi: Complex64) -> Result<WeightZ> {
    check_pair_frequency(spec, k)?;
    let z_xi = CatalogEntry::z_xi(xi)?.to_weight(spec, k)?;
    let u = make_generator(spec, GeneratorSpec::new(GeneratorName::U4c, k))?;
    poly_rho_maximal(&u)?.ring_mul(&z_xi)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum F46Variant {
    /// `z_syn * z_{nu=1}`.
    SynNuOne,
    /// `z_syn_ab(1, 1) * z_{nu=i}`.
    #[default]
    SynAbNuI,
}

/// Mixed solution: one six-node block at `k0`, four-node blocks elsewhere.
/// The four-node blocks leave `sum_k' r_{p,k',-k',m}` nonzero; the six-node
/// block cancels it through a constant `c` entry at every other frequency.
pub fn build_f46(spec: &GroupSpec, k0: usize, variant: F46Variant) -> Result<WeightZ> {
    if spec.size() % 2 == 0 {
        return Err(CogsError::Validation("the mixed construction needs an odd group order".into()));
    }
    check_pair_frequency(spec, k0)?;
    let reps = spec.representatives();
    let k0 = if reps.contains(&k0) { k0 } else { spec.neg_flat(k0) };
    let base = match variant {
        F46Variant::SynNuOne => z_syn_weight(spec, k0)?.ring_mul(&z_nu_weight(spec, k0, ONE)?)?,
        F46Variant::SynAbNuI => {
            CatalogEntry::z_syn_ab(ONE, ONE)?.to_weight(spec, k0)?.ring_mul(&z_nu_weight(spec, k0, I)?)?
        }
    };
    let mut six = base.scale(6f64.powf(-1.0 / 3.0));
    let fours: Vec<WeightZ> = reps
        .iter()
        .filter(|&&m| m != k0)
        .map(|&m| Ok(build_f4(spec, m, ONE)?.scale(4f64.powf(-1.0 / 3.0))))
        .collect::<Result<_>>()?;

    // sum_k' r_{p,k',-k',m} = sum_j c_{mj} sum_k' |z_{p k' j}|^2 for p in {a, b}.
    let six_energy: f64 = [Role::A, Role::B]
        .iter()
        .map(|&p| (0..six.order()).map(|j| 2.0 * six.get(p, k0, j).norm_sqr()).sum::<f64>())
        .sum();
    for (&m, f4) in reps.iter().filter(|&&m| m != k0).zip(&fours) {
        let mut s4 = Complex64::new(0.0, 0.0);
        for p in [Role::A, Role::B] {
            for j in 0..f4.order() {
                s4 += f4.get(Role::C, m, j) * 2.0 * f4.get(p, m, j).norm_sqr();
            }
        }
        let bias = -s4 / six_energy;
        for j in 0..six.order() {
            six.set(Role::C, m, j, bias)?;
        }
    }
    let mut parts = vec![six];
    parts.extend(fours);
    WeightZ::sum(spec, &parts)
}

/// Order-`d^2` solution whose real-space nodes are centered deltas at
/// `j1`, `j2` (inputs) and `j1 + j2` (output).
pub fn build_memorization(spec: &GroupSpec) -> Result<WeightZ> {
    if !spec.is_cyclic() {
        return Err(CogsError::Validation("memorization construction is only defined for cyclic groups".into()));
    }
    let d = spec.size();
    let w = |e: i64| Complex64::from_polar(1.0, TAU * e as f64 / d as f64);
    let u = |alpha: bool| {
        WeightZ::from_rep_fn(spec, 1, |p, k, _| {
            let k = k as i64;
            match (p, alpha) {
                (Role::A, true) | (Role::B, false) => w(k),
                (Role::C, _) => w(-k),
                _ => ONE,
            }
        })
    };
    let (u_alpha, u_beta) = (u(true)?, u(false)?);
    let z_alpha = WeightZ::sum(spec, &(0..d).map(|j| u_alpha.pow(j)).collect::<Vec<_>>())?;
    let z_beta = WeightZ::sum(spec, &(0..d).map(|j| u_beta.pow(j)).collect::<Vec<_>>())?;
    Ok(z_alpha.ring_mul(&z_beta)?.scale((d as f64).powf(-2.0 / 3.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::{analytic_loss, global_check};

    #[test]
    fn generator_identities() {
        let spec = GroupSpec::cyclic(7).unwrap();
        let u_i = make_generator(&spec, GeneratorSpec::u_nu(2, I)).unwrap();
        let u4c = make_generator(&spec, GeneratorSpec::new(GeneratorName::U4c, 2)).unwrap();
        assert!(u_i.equal_up_to_permutation(&u4c, 1e-15));
        let u_1 = make_generator(&spec, GeneratorSpec::u_nu(2, ONE)).unwrap();
        let one = make_generator(&spec, GeneratorSpec::new(GeneratorName::UOne, 2)).unwrap();
        assert!(u_1.equal_up_to_permutation(&one, 1e-15));
        assert!(make_generator(&spec, GeneratorSpec::u_nu(2, Complex64::new(1.1, 0.0))).is_err());
        let z6 = GroupSpec::cyclic(6).unwrap();
        assert!(make_generator(&z6, GeneratorSpec::new(GeneratorName::USyn, 3)).is_err());
        assert!(make_generator(&z6, GeneratorSpec::new(GeneratorName::UOne, 3)).is_ok());
    }

    #[test]
    fn maximal_polynomial_orders() {
        let spec = GroupSpec::cyclic(7).unwrap();
        let order = |name| {
            let u = make_generator(&spec, GeneratorSpec::new(name, 1)).unwrap();
            poly_rho_maximal(&u).unwrap().order()
        };
        assert_eq!(order(GeneratorName::USyn), 3);
        assert_eq!(order(GeneratorName::U3c), 3);
        assert_eq!(order(GeneratorName::U3a), 3);
        assert_eq!(order(GeneratorName::U4c), 2);
        assert_eq!(order(GeneratorName::U4a), 4);
        assert_eq!(order(GeneratorName::UOne), 2);
        let u = make_generator(&spec, GeneratorSpec::u_nu(1, Complex64::from_polar(1.0, 0.3))).unwrap();
        assert_eq!(poly_rho_maximal(&u).unwrap().order(), 10);
    }

    #[test]
    fn rho_of_u_syn_is_quadratic_plus_linear_plus_one() {
        let spec = GroupSpec::cyclic(5).unwrap();
        let u = make_generator(&spec, GeneratorSpec::new(GeneratorName::USyn, 2)).unwrap();
        let want = WeightZ::sum(&spec, &[u.ring_mul(&u).unwrap(), u.clone(), WeightZ::freq_identity(&spec, 2).unwrap()])
            .unwrap();
        assert!(poly_rho_maximal(&u).unwrap().equal_up_to_permutation(&want, 1e-12));
    }

    #[test]
    fn rho_rejects_value_one() {
        let spec = GroupSpec::cyclic(5).unwrap();
        let u = make_generator(&spec, GeneratorSpec::new(GeneratorName::USyn, 1)).unwrap();
        let aac = SumPotentialIndex::pp(Role::A, 1, 1, 1);
        assert!(matches!(poly_rho(&u, &[aac]), Err(CogsError::Construction(_))));
    }

    #[test]
    fn catalog_orders_and_r_kkk() {
        let spec = GroupSpec::cyclic(7).unwrap();
        for (kind, entry) in [
            (CatalogKind::Z3c, CatalogEntry::z_3c()),
            (CatalogKind::Z3a, CatalogEntry::z_3a()),
            (CatalogKind::Z4a, CatalogEntry::z_4a()),
            (CatalogKind::Order2One, CatalogEntry::order2_one()),
            (CatalogKind::ZSyn, CatalogEntry::z_syn()),
        ] {
            assert_eq!(entry.order(), kind.order());
            let z = entry.to_weight(&spec, 1).unwrap();
            let r = sp_value_unchecked(&z, &SumPotentialIndex::abc(1, 1, 1));
            assert!((r - kind.order() as f64).norm() < 1e-12, "{}", kind.as_str());
        }
        assert!(CatalogEntry::order3_pm([1, -1, -1, 1, 1, 1]).is_ok());
        assert!(CatalogEntry::order3_pm([1, -1, 1, 1, 1, 1]).is_err());
    }

    #[test]
    fn f6_orders_and_loss() {
        for (d, ord) in [(7, 18), (6, 14), (4, 8), (5, 12)] {
            let spec = GroupSpec::cyclic(d).unwrap();
            let z = build_f6(&spec, &F6Params::default()).unwrap();
            assert_eq!(z.order(), ord);
            assert!(analytic_loss(&z).total <= 1e-10, "d={d}");
            assert!(global_check(&z, 1e-9).global);
        }
    }

    #[test]
    fn f4_block_properties() {
        let spec = GroupSpec::cyclic(7).unwrap();
        let z = build_f4(&spec, 2, ONE).unwrap();
        assert_eq!(z.order(), 4);
        let r = sp_value_unchecked(&z, &SumPotentialIndex::abc(2, 2, 2));
        assert!((r - 4.0).norm() < 1e-12);
        let rn = sp_value_unchecked(&z, &SumPotentialIndex::pp(Role::A, 2, 5, 2));
        assert!((rn - 2.0 * (ONE + I)).norm() < 1e-12);
        assert!(build_f4(&spec, 2, Complex64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn f46_zero_loss_without_sufficient_condition() {
        for variant in [F46Variant::SynNuOne, F46Variant::SynAbNuI] {
            let spec = GroupSpec::cyclic(7).unwrap();
            let z = build_f46(&spec, 1, variant).unwrap();
            assert_eq!(z.order(), 14);
            assert!(analytic_loss(&z).total <= 1e-9, "{variant:?}: {}", analytic_loss(&z).total);
            assert!(!global_check(&z, 1e-6).global);
        }
        assert!(build_f46(&GroupSpec::cyclic(6).unwrap(), 1, F46Variant::default()).is_err());
    }

    #[test]
    fn memorization_order_and_loss() {
        for d in [3, 5] {
            let spec = GroupSpec::cyclic(d).unwrap();
            let z = build_memorization(&spec).unwrap();
            assert_eq!(z.order(), d * d);
            assert!(analytic_loss(&z).total <= 1e-10);
        }
        assert!(build_memorization(&"2,3".parse().unwrap()).is_err());
    }

    #[test]
    fn units() {
        let spec = GroupSpec::cyclic(6).unwrap();
        assert!(make_unit(&spec, &[]).unwrap().equal_up_to_permutation(&WeightZ::ring_identity(&spec), 0.0));
        assert!(make_unit(&spec, &[UnitPhases { k: 1, theta: [0.1, 0.2, 0.3] }]).is_err());
        let y = random_unit(&spec, &mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3));
        for k in 1..6 {
            let r = sp_value_unchecked(&y, &SumPotentialIndex::abc(k, k, k));
            assert!((r - 1.0).norm() < 1e-12);
        }
    }
}
