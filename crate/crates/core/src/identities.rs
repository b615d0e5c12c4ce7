//! Exact checks of the relations satisfied by the volume polynomials when one
//! boundary length is set to `2πi`, and of the two rewritings of `V_{0,5}` at
//! imaginary arguments. Nothing here uses a tolerance.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactpoly::rational::{int, rat};
use crate::exactpoly::{PiScalar, Rational, VolumePolynomial};
use crate::volumes::{ConfigKey, VolumeTable};

/// `L² = −4π²`, i.e. `L = 2πi`.
pub fn two_pi_i_squared() -> PiScalar {
    PiScalar::term(int(-4), 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub name: String,
    /// The key the identity is stated for (`(g, n+1)` for the limit relations).
    pub key: Option<ConfigKey>,
    /// Named discrepancy polynomials, each of which must vanish.
    pub parts: Vec<(String, VolumePolynomial)>,
}

impl IdentityReport {
    fn new(name: &str, key: Option<ConfigKey>, parts: Vec<(String, VolumePolynomial)>) -> Self {
        Self {
            name: name.to_string(),
            key,
            parts,
        }
    }

    pub fn pass(&self) -> bool {
        self.parts.iter().all(|(_, p)| p.is_zero())
    }

    pub fn discrepancy_terms(&self) -> usize {
        self.parts.iter().map(|(_, p)| p.len()).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let parts: Vec<_> = self
            .parts
            .iter()
            .map(|(label, p)| {
                json!({
                    "part": label,
                    "discrepancy_terms": p.len(),
                    "discrepancy": if p.is_zero() { serde_json::Value::Null } else { p.to_json_value() },
                })
            })
            .collect();
        json!({
            "identity": self.name,
            "key": self.key,
            "pass": self.pass(),
            "discrepancy_terms": self.discrepancy_terms(),
            "parts": parts,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub checks: usize,
    pub failures: usize,
}

fn lower_key(target: ConfigKey) -> Result<ConfigKey> {
    if target.n == 0 {
        return Err(Error::Domain(format!(
            "{target} has no boundary component to set to 2πi"
        )));
    }
    ConfigKey::new(target.g, target.n - 1)
}

/// `V_{g,n+1}(L, 2πi) = Σ_k ∫₀^{L_k} L_k V_{g,n}(L) dL_k`.
pub fn check_limit_integral(table: &mut VolumeTable, target: ConfigKey) -> Result<IdentityReport> {
    let lower = lower_key(target)?;
    table.ensure(target)?;
    table.ensure(lower)?;
    let upper = table.get(target).expect("ensured");
    let base = table.get(lower).expect("ensured");
    let lhs = upper.substitute_square(target.n - 1, &two_pi_i_squared())?;
    let mut rhs = VolumePolynomial::zero(target.g, lower.n);
    for k in 0..lower.n {
        rhs = rhs.add(&base.integrate_against_length(k)?)?;
    }
    let diff = lhs.sub(&rhs)?;
    Ok(IdentityReport::new(
        "limit_integral",
        Some(target),
        vec![("lhs - rhs".into(), diff)],
    ))
}

/// `∂V_{g,n+1}/∂L_{n+1}(L, 2πi) = 2πi(2g − 2 + n) V_{g,n}(L)`, stated after
/// dividing both sides by `L_{n+1} = 2πi`: `Q(−4π²) = (2g − 2 + n) V_{g,n}`.
pub fn check_limit_derivative(
    table: &mut VolumeTable,
    target: ConfigKey,
) -> Result<IdentityReport> {
    let lower = lower_key(target)?;
    table.ensure(target)?;
    table.ensure(lower)?;
    let upper = table.get(target).expect("ensured");
    let base = table.get(lower).expect("ensured");
    let last = target.n - 1;
    let q = upper.odd_derivative_factor(last)?;
    let lhs = q.substitute_square(last, &two_pi_i_squared())?;
    let rhs = base.scale_rational(&int(lower.complexity()));
    let diff = lhs.sub(&rhs.with_genus(target.g))?;
    Ok(IdentityReport::new(
        "limit_derivative",
        Some(target),
        vec![("Q(2πi) - (2g-2+n)V".into(), diff)],
    ))
}

/// For `P(u) = V_{g,n+1}(0ⁿ, L² = u)`: `P(−4π²) = 0`, and the θ-derivative of
/// `P(−θ²)` at `θ = 2π`, namely `−4π P'(−4π²)`, equals `2π(2 − 2g − n) V_{g,n}(0ⁿ)`.
/// The second part is checked after dividing by `2π`.
pub fn check_two_pi_corollary(table: &mut VolumeTable, g: u32, n: usize) -> Result<IdentityReport> {
    let lower = ConfigKey::new(g, n)?;
    let target = ConfigKey::new(g, n + 1)?;
    table.ensure(target)?;
    table.ensure(lower)?;
    let mut restricted = table.get(target).expect("ensured").clone();
    for _ in 0..n {
        restricted = restricted.substitute_square(0, &PiScalar::zero())?;
    }
    // restricted is P(u) in one variable
    let value = restricted.substitute_square(0, &two_pi_i_squared())?;

    let mut derivative = VolumePolynomial::zero(g, 1);
    for (m, c) in restricted.terms() {
        if m[0] > 0 {
            derivative = derivative.add(&VolumePolynomial::monomial(
                g,
                vec![m[0] - 1],
                c.scale(&int(m[0] as i64)),
            ))?;
        }
    }
    let slope = derivative
        .substitute_square(0, &two_pi_i_squared())?
        .scale_rational(&int(-2));
    let euler = int(2 - 2 * g as i64 - n as i64);
    let expected = table
        .get(lower)
        .expect("ensured")
        .constant_term()
        .scale(&euler);
    let slope_diff = slope.sub(&VolumePolynomial::constant(g, 0, expected))?;
    Ok(IdentityReport::new(
        "two_pi_corollary",
        Some(target),
        vec![
            ("V(0,2πi)".into(), value),
            ("dV/dθ at 2π / 2π - χ·V(0)".into(), slope_diff),
        ],
    ))
}

/// `V_{0,5}(iθ)` as a polynomial in `u_j = θ_j²`.
fn v05_at_imaginary(table: &mut VolumeTable) -> Result<VolumePolynomial> {
    let v = table.volume(0, 5)?;
    let flipped = v.terms().map(|(m, c)| {
        let degree: u32 = m.iter().sum();
        let sign = if degree.is_multiple_of(2) {
            int(1)
        } else {
            int(-1)
        };
        (m.clone(), c.scale(&sign))
    });
    VolumePolynomial::from_terms(0, 5, flipped)
}

fn linear(constant: PiScalar, vars: &[usize], coeff: Rational) -> VolumePolynomial {
    let mut p = VolumePolynomial::constant(0, 5, constant);
    for &j in vars {
        let mut e = vec![0; 5];
        e[j] = 1;
        p = p
            .add(&VolumePolynomial::monomial(
                0,
                e,
                PiScalar::from_rational(coeff.clone()),
            ))
            .expect("same arity");
    }
    p
}

/// `(1/24) Σ (4π² − u_j − u_k − u_ℓ)(4π² − u_j − u_m − u_n)` over the 15 ways to
/// pick `j` and split the other four indices into two pairs.
pub fn v05_complementary_pairs() -> VolumePolynomial {
    let four_pi2 = PiScalar::term(int(4), 1);
    let mut sum = VolumePolynomial::zero(0, 5);
    let mut count = 0;
    for j in 0..5 {
        let rest: Vec<usize> = (0..5).filter(|&i| i != j).collect();
        let pairings = [
            ([rest[0], rest[1]], [rest[2], rest[3]]),
            ([rest[0], rest[2]], [rest[1], rest[3]]),
            ([rest[0], rest[3]], [rest[1], rest[2]]),
        ];
        for (p, q) in pairings {
            let left = linear(four_pi2.clone(), &[j, p[0], p[1]], int(-1));
            let right = linear(four_pi2.clone(), &[j, q[0], q[1]], int(-1));
            sum = sum
                .add(&left.multiply(&right).expect("same arity"))
                .expect("same arity");
            count += 1;
        }
    }
    debug_assert_eq!(count, 15);
    sum.scale_rational(&rat(1, 24))
}

/// `¼ Σ_{j<k} (3(π² − u_j)(π² − u_k) + π⁴ − u_j u_k) + ⅛ Σ u_j²`.
pub fn v05_pair_sum() -> VolumePolynomial {
    let pi2 = PiScalar::pi_pow(1);
    let pi4 = VolumePolynomial::constant(0, 5, PiScalar::pi_pow(2));
    let mut sum = VolumePolynomial::zero(0, 5);
    for j in 0..5 {
        for k in j + 1..5 {
            let a = linear(pi2.clone(), &[j], int(-1));
            let b = linear(pi2.clone(), &[k], int(-1));
            let mut e = vec![0; 5];
            e[j] = 1;
            e[k] = 1;
            let cross = VolumePolynomial::monomial(0, e, PiScalar::one());
            let summand = a
                .multiply(&b)
                .expect("same arity")
                .scale_rational(&int(3))
                .add(&pi4)
                .and_then(|p| p.sub(&cross))
                .expect("same arity");
            sum = sum.add(&summand).expect("same arity");
        }
    }
    let mut quartic = VolumePolynomial::zero(0, 5);
    for j in 0..5 {
        let mut e = vec![0; 5];
        e[j] = 2;
        quartic = quartic
            .add(&VolumePolynomial::monomial(0, e, PiScalar::one()))
            .expect("same arity");
    }
    sum.scale_rational(&rat(1, 4))
        .add(&quartic.scale_rational(&rat(1, 8)))
        .expect("same arity")
}

pub fn check_v05_factorizations(table: &mut VolumeTable) -> Result<IdentityReport> {
    let v = v05_at_imaginary(table)?;
    let first = v05_complementary_pairs().sub(&v)?;
    let second = v05_pair_sum().sub(&v)?;
    Ok(IdentityReport::new(
        "v05_factorizations",
        Some(ConfigKey::new(0, 5)?),
        vec![
            ("complementary pairs - V(iθ)".into(), first),
            ("pair sum - V(iθ)".into(), second),
        ],
    ))
}

/// Every `(g, n+1)` with `(g, n)` stable and `3g − 2 + n ≤ max_dim`.
pub fn limit_targets(max_dim: usize) -> Vec<ConfigKey> {
    let mut out = Vec::new();
    for g in 0..=(max_dim as u32).div_ceil(3) {
        for n in 0..=max_dim + 2 {
            if ConfigKey::new(g, n).is_err() {
                continue;
            }
            if let Ok(target) = ConfigKey::new(g, n + 1) {
                if target.dimension() <= max_dim {
                    out.push(target);
                }
            }
        }
    }
    out.sort_by_key(|k| (k.dimension(), k.g, k.n));
    out
}

fn run_over_targets<F>(
    table: &mut VolumeTable,
    max_dim: usize,
    check: F,
) -> Result<Vec<IdentityReport>>
where
    F: Fn(&mut VolumeTable, ConfigKey) -> Result<Vec<IdentityReport>> + Sync,
{
    let targets = limit_targets(max_dim);
    for t in &targets {
        table.ensure(*t)?;
        table.ensure(lower_key(*t)?)?;
    }
    let shared: &VolumeTable = table;
    let reports: Vec<Result<Vec<IdentityReport>>> = targets
        .par_iter()
        .map(|t| {
            // every volume needed is already in the table, so the clone is only read
            let mut local = shared.clone();
            check(&mut local, *t)
        })
        .collect();
    let mut out = Vec::new();
    for r in reports {
        out.extend(r?);
    }
    Ok(out)
}

/// Both limit relations for every `(g, n+1)` with `3g − 2 + n ≤ max_dim`.
pub fn run_limit_suite(table: &mut VolumeTable, max_dim: usize) -> Result<Vec<IdentityReport>> {
    run_over_targets(table, max_dim, |t, key| {
        Ok(vec![
            check_limit_integral(t, key)?,
            check_limit_derivative(t, key)?,
        ])
    })
}

/// The 2π corollary for the same keys as [`run_limit_suite`].
pub fn run_corollary_suite(table: &mut VolumeTable, max_dim: usize) -> Result<Vec<IdentityReport>> {
    run_over_targets(table, max_dim, |t, key| {
        Ok(vec![check_two_pi_corollary(t, key.g, key.n - 1)?])
    })
}

pub fn summarize(reports: &[IdentityReport]) -> SuiteSummary {
    SuiteSummary {
        checks: reports.len(),
        failures: reports.iter().filter(|r| !r.pass()).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(g: u32, n: usize) -> ConfigKey {
        ConfigKey::new(g, n).unwrap()
    }

    #[test]
    fn integral_relation_examples() {
        let mut t = VolumeTable::new(4);
        let r = check_limit_integral(&mut t, key(0, 4)).unwrap();
        assert!(r.pass(), "{:?}", r.to_json());
        let r = check_limit_integral(&mut t, key(1, 2)).unwrap();
        assert!(r.pass());
        let r = check_limit_integral(&mut t, key(2, 1)).unwrap();
        assert!(r.pass());
        assert!(matches!(
            check_limit_integral(&mut t, key(1, 1)),
            Err(Error::Unstable { g: 1, n: 0 })
        ));
    }

    #[test]
    fn derivative_relation_examples() {
        let mut t = VolumeTable::new(4);
        for k in [key(0, 4), key(1, 2), key(2, 1)] {
            let r = check_limit_derivative(&mut t, k).unwrap();
            assert!(r.pass(), "{k}: {:?}", r.to_json());
        }
    }

    #[test]
    fn corollary_examples() {
        let mut t = VolumeTable::new(4);
        for (g, n) in [(1, 1), (0, 3), (2, 0)] {
            let r = check_two_pi_corollary(&mut t, g, n).unwrap();
            assert!(r.pass(), "({g},{n}): {:?}", r.to_json());
        }
    }

    #[test]
    fn corrupted_volume_is_caught() {
        let mut t = VolumeTable::new(2);
        t.ensure(key(0, 4)).unwrap();
        let mut bad = t.clone();
        // perturb V_{0,3} so the integral relation for (0,4) must fail
        let v03 = VolumePolynomial::constant(0, 3, PiScalar::from_int(2));
        bad = replace(bad, key(0, 3), v03);
        let r = check_limit_integral(&mut bad, key(0, 4)).unwrap();
        assert!(!r.pass());
        // Σ_k ∫ 2 L_k = Σ L_k² against ½ Σ L_k²: one bad term per variable
        assert_eq!(r.discrepancy_terms(), 3);
    }

    fn replace(table: VolumeTable, k: ConfigKey, poly: VolumePolynomial) -> VolumeTable {
        table.with_entry(k, poly)
    }

    #[test]
    fn suites_up_to_four() {
        let mut t = VolumeTable::new(4);
        let limit = run_limit_suite(&mut t, 4).unwrap();
        assert_eq!(limit.len(), 2 * limit_targets(4).len());
        assert_eq!(summarize(&limit).failures, 0);
        let corollary = run_corollary_suite(&mut t, 4).unwrap();
        assert_eq!(summarize(&corollary).failures, 0);
    }

    #[test]
    fn v05_rewritings() {
        let mut t = VolumeTable::new(2);
        let r = check_v05_factorizations(&mut t).unwrap();
        assert!(r.pass(), "{:?}", r.to_json());
    }

    #[test]
    fn v05_rewritings_numerically() {
        let mut t = VolumeTable::new(2);
        let v = v05_at_imaginary(&mut t).unwrap();
        let ones = [1.0; 5];
        let a = v.eval_squares(&ones).unwrap();
        let b = v05_complementary_pairs().eval_squares(&ones).unwrap();
        let c = v05_pair_sum().eval_squares(&ones).unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs());
        assert!((a - c).abs() < 1e-12 * a.abs());
    }

    #[test]
    fn targets_up_to_three() {
        let targets: Vec<(u32, usize)> = limit_targets(3).iter().map(|k| (k.g, k.n)).collect();
        assert_eq!(targets, vec![(0, 4), (0, 5), (1, 2), (0, 6), (1, 3)]);
        assert!(limit_targets(4).contains(&key(2, 1)));
    }

    #[test]
    fn corollary_value_follows_from_integral_relation_at_zero() {
        let mut t = VolumeTable::new(3);
        let r = check_limit_integral(&mut t, key(1, 3)).unwrap();
        assert!(r.pass());
        // the right side Σ∫₀^{L_k} vanishes at L = 0, hence so must V(0, 2πi)
        let v = t.volume(1, 3).unwrap().clone();
        let at_zero = v
            .substitute_square(0, &PiScalar::zero())
            .and_then(|p| p.substitute_square(0, &PiScalar::zero()))
            .and_then(|p| p.substitute_square(0, &two_pi_i_squared()))
            .unwrap();
        assert!(at_zero.is_zero());
    }
}
