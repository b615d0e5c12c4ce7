//! Which boundary data a volume polynomial can be evaluated at, and what the
//! value means there.
//!
//! Comparisons against multiples of π are exact when every angle involved is a
//! rational multiple of π; otherwise they are done in floating point with a
//! `1e-12` band that is reported as a wall. Walls count as outside: the
//! inequalities in question are all strict.

use std::io::Write;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::rational::{format_pq, int};
use crate::labels::{Angle, BoundaryLabel};
use crate::volumes::{ConfigKey, VolumeTable};

use std::f64::consts::PI;

/// Width of the floating-point band around a wall.
pub const WALL_TOL: f64 = 1e-12;
/// A cone angle this close to 2π triggers the limit-zero verdict.
pub const LIMIT_ZERO_TOL: f64 = 1e-6;
/// Mergeable subsets are only enumerated for at most this many cone points.
pub const MAX_MERGE_CONES: usize = 20;
const SCAN_CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Below,
    Wall,
    Above,
}

/// Compares `Σ angles` with `k · π`.
fn compare_with_pi_multiple(angles: &[&Angle], k: i64) -> Side {
    let exact: Option<Vec<&BigRational>> = angles.iter().map(|a| a.pi_fraction()).collect();
    if let Some(fractions) = exact {
        let sum = fractions
            .into_iter()
            .fold(BigRational::zero(), |acc, q| acc + q);
        return match sum.cmp(&int(k)) {
            std::cmp::Ordering::Less => Side::Below,
            std::cmp::Ordering::Equal => Side::Wall,
            std::cmp::Ordering::Greater => Side::Above,
        };
    }
    let sum: f64 = angles.iter().map(|a| a.radians()).sum();
    let diff = sum - k as f64 * PI;
    if diff < -WALL_TOL {
        Side::Below
    } else if diff > WALL_TOL {
        Side::Above
    } else {
        Side::Wall
    }
}

fn cone_angles(labels: &[BoundaryLabel]) -> Vec<(usize, &Angle)> {
    labels
        .iter()
        .enumerate()
        .filter_map(|(i, l)| match l {
            BoundaryLabel::Cone(a) => Some((i, a)),
            _ => None,
        })
        .collect()
}

fn stable_key(g: u32, labels: &[BoundaryLabel]) -> Result<ConfigKey> {
    ConfigKey::new(g, labels.len())
}

/// `Σθ_j < 2π(2g − 2 + n)`, summed over cone labels only.
pub fn nonempty(g: u32, labels: &[BoundaryLabel]) -> Result<bool> {
    Ok(area_side(g, labels)? == Side::Below)
}

fn area_side(g: u32, labels: &[BoundaryLabel]) -> Result<Side> {
    let key = stable_key(g, labels)?;
    let angles: Vec<&Angle> = cone_angles(labels).into_iter().map(|(_, a)| a).collect();
    Ok(compare_with_pi_multiple(&angles, 2 * key.complexity()))
}

/// Hassett weights `a_j = 1 − θ_j/2π`, with `a_j = 1` at cusps.
pub fn hassett_weights(labels: &[BoundaryLabel]) -> Result<Vec<f64>> {
    labels
        .iter()
        .map(|l| match l {
            BoundaryLabel::Cusp => Ok(1.0),
            BoundaryLabel::Cone(a) => Ok(1.0 - a.radians() / (2.0 * PI)),
            BoundaryLabel::Geodesic(_) => Err(Error::InvalidLabel(
                "Hassett weights are undefined for geodesic boundary".into(),
            )),
        })
        .collect()
}

/// Exact weights `1 − q/2` when every cone angle is `q·π`.
pub fn hassett_weights_exact(labels: &[BoundaryLabel]) -> Result<Option<Vec<BigRational>>> {
    let mut out = Vec::with_capacity(labels.len());
    for l in labels {
        match l {
            BoundaryLabel::Cusp => out.push(int(1)),
            BoundaryLabel::Cone(Angle::PiMultiple(q)) => out.push(int(1) - q / int(2)),
            BoundaryLabel::Cone(Angle::Radians(_)) => return Ok(None),
            BoundaryLabel::Geodesic(_) => {
                return Err(Error::InvalidLabel(
                    "Hassett weights are undefined for geodesic boundary".into(),
                ))
            }
        }
    }
    Ok(Some(out))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergedSubset {
    /// 1-based label positions.
    pub indices: Vec<usize>,
    /// `θ_S = Σ_{j∈S} θ_j − 2π(|S| − 1)`
    pub theta: f64,
    /// `θ_S / π` when it is known exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_over_pi: Option<String>,
}

/// Every set `S` of at least two cone points with `Σ_{j∈S} θ_j > 2π(|S| − 1)`.
///
/// Fails when there are more than [`MAX_MERGE_CONES`] cone points.
pub fn mergeable_subsets(labels: &[BoundaryLabel]) -> Result<Vec<MergedSubset>> {
    let cones = cone_angles(labels);
    if cones.len() > MAX_MERGE_CONES {
        return Err(Error::Domain(format!(
            "{} cone points; subset enumeration is limited to {MAX_MERGE_CONES}",
            cones.len()
        )));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << cones.len()) {
        let size = mask.count_ones() as i64;
        if size < 2 {
            continue;
        }
        let chosen: Vec<&(usize, &Angle)> = (0..cones.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &cones[i])
            .collect();
        let angles: Vec<&Angle> = chosen.iter().map(|(_, a)| *a).collect();
        if compare_with_pi_multiple(&angles, 2 * (size - 1)) != Side::Above {
            continue;
        }
        let exact: Option<BigRational> = angles
            .iter()
            .map(|a| a.pi_fraction())
            .try_fold(BigRational::zero(), |acc, q| q.map(|q| acc + q))
            .map(|sum| sum - int(2 * (size - 1)));
        let theta = match &exact {
            Some(q) => q.to_f64().unwrap_or(f64::NAN) * PI,
            None => angles.iter().map(|a| a.radians()).sum::<f64>() - 2.0 * PI * (size - 1) as f64,
        };
        out.push(MergedSubset {
            indices: chosen.iter().map(|(i, _)| i + 1).collect(),
            theta,
            theta_over_pi: exact.as_ref().map(format_pq),
        });
    }
    Ok(out)
}

fn has_geodesic(labels: &[BoundaryLabel]) -> bool {
    labels.iter().any(BoundaryLabel::is_geodesic)
}

/// Pairwise side of `θ_j + θ_k` against 2π; `Below` when every pair is below.
fn pair_side(labels: &[BoundaryLabel]) -> Side {
    let cones = cone_angles(labels);
    let mut worst = Side::Below;
    for (i, (_, a)) in cones.iter().enumerate() {
        for (_, b) in &cones[i + 1..] {
            match compare_with_pi_multiple(&[a, b], 2) {
                Side::Above => return Side::Above,
                Side::Wall => worst = Side::Wall,
                Side::Below => {}
            }
        }
    }
    worst
}

fn small_side(labels: &[BoundaryLabel]) -> Side {
    let mut worst = Side::Below;
    for (_, a) in cone_angles(labels) {
        match compare_with_pi_multiple(&[a], 1) {
            Side::Above => return Side::Above,
            Side::Wall => worst = Side::Wall,
            Side::Below => {}
        }
    }
    worst
}

/// `θ_j + θ_k < 2π` for every pair of cone points. Geodesic boundary is rejected.
pub fn in_main_chamber(labels: &[BoundaryLabel]) -> Result<bool> {
    if has_geodesic(labels) {
        return Err(Error::InvalidLabel(
            "the main chamber is defined for cusps and cone points only".into(),
        ));
    }
    Ok(pair_side(labels) == Side::Below)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Validity {
    /// Geodesic lengths and cusps only.
    Valid,
    /// Every cone angle below π.
    ValidSmallAngle,
    /// Cusps and cones with `θ_j + θ_k < 2π` for all pairs.
    ValidMainChamber,
    Unknown,
    /// A cone angle is at 2π (to within [`LIMIT_ZERO_TOL`]) and the rest are cusps
    /// or cones: the volume tends to zero there.
    LimitZero,
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(
            self,
            Validity::Valid | Validity::ValidSmallAngle | Validity::ValidMainChamber
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChamberReport {
    pub g: u32,
    pub n: usize,
    pub nonempty: bool,
    pub main_chamber: bool,
    pub small_angles: bool,
    pub mergeable_subsets: Vec<MergedSubset>,
    /// Set when there were too many cone points to enumerate subsets.
    pub mergeable_truncated: bool,
    /// `None` when a geodesic boundary is present.
    pub hassett_weights: Option<Vec<f64>>,
    pub validity: Validity,
    /// Some inequality held with equality (or within the floating-point band).
    pub on_wall: bool,
}

pub fn classify_validity(g: u32, labels: &[BoundaryLabel]) -> Result<ChamberReport> {
    let area = area_side(g, labels)?;
    let geodesic = has_geodesic(labels);
    let pairs = pair_side(labels);
    let small = small_side(labels);
    let main_chamber = !geodesic && pairs == Side::Below;
    let small_angles = small == Side::Below;

    let near_two_pi = labels.iter().any(|l| match l {
        BoundaryLabel::Cone(a) => (2.0 * PI - a.radians()).abs() < LIMIT_ZERO_TOL,
        _ => false,
    });
    let validity = if near_two_pi && !geodesic {
        Validity::LimitZero
    } else if labels.iter().all(|l| !l.is_cone()) {
        Validity::Valid
    } else if small_angles {
        Validity::ValidSmallAngle
    } else if main_chamber {
        Validity::ValidMainChamber
    } else {
        Validity::Unknown
    };

    let (mergeable_subsets, mergeable_truncated) = match mergeable_subsets(labels) {
        Ok(list) => (list, false),
        Err(_) => (Vec::new(), true),
    };
    let on_wall = area == Side::Wall
        || (!geodesic && pairs == Side::Wall)
        || (validity != Validity::ValidMainChamber && small == Side::Wall);

    Ok(ChamberReport {
        g,
        n: labels.len(),
        nonempty: area == Side::Below,
        main_chamber,
        small_angles,
        mergeable_subsets,
        mergeable_truncated,
        hassett_weights: hassett_weights(labels).ok(),
        validity,
        on_wall,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSample {
    pub theta: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub g: u32,
    pub n: usize,
    pub seed: u64,
    pub samples: Vec<ScanSample>,
    pub min_value: f64,
    pub argmin: Vec<f64>,
    pub violations: usize,
}

impl ScanReport {
    /// One row per sample: `theta_1,…,theta_n,value`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let header: Vec<String> = (1..=self.n)
            .map(|j| format!("theta_{j}"))
            .chain(std::iter::once("value".to_string()))
            .collect();
        writeln!(out, "{}", header.join(","))?;
        for s in &self.samples {
            let row: Vec<String> = s
                .theta
                .iter()
                .chain(std::iter::once(&s.value))
                .map(|x| format!("{x:.17e}"))
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Draws uniformly from `{θ ∈ (0, 2π)ⁿ : θ_j + θ_k < 2π, Σθ_j < 2π(2g − 2 + n)}`
/// by rejection.
fn sample_main_chamber(rng: &mut ChaCha8Rng, n: usize, area_bound: f64) -> Vec<f64> {
    loop {
        let theta: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(f64::MIN_POSITIVE..2.0 * PI))
            .collect();
        let mut sorted = theta.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let pairs_ok = n < 2 || sorted[0] + sorted[1] < 2.0 * PI;
        if pairs_ok && theta.iter().sum::<f64>() < area_bound {
            return theta;
        }
    }
}

/// Evaluates `V_{g,n}(iθ)` at `samples` points of the main chamber.
///
/// The samples depend only on `seed`, not on the number of worker threads: chunk
/// `c` draws from stream `c` of a ChaCha generator seeded with `seed`.
pub fn positivity_scan(
    table: &mut VolumeTable,
    g: u32,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<ScanReport> {
    let key = ConfigKey::new(g, n)?;
    let poly = table.volume(g, n)?.clone();
    let area_bound = 2.0 * PI * key.complexity() as f64;
    let chunks: Vec<(u64, usize)> = (0..samples.div_ceil(SCAN_CHUNK))
        .map(|c| (c as u64, SCAN_CHUNK.min(samples - c * SCAN_CHUNK)))
        .collect();
    let drawn: Vec<Result<Vec<ScanSample>>> = chunks
        .par_iter()
        .map(|&(stream, count)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            (0..count)
                .map(|_| {
                    let theta = sample_main_chamber(&mut rng, n, area_bound);
                    let squares: Vec<f64> = theta.iter().map(|t| -t * t).collect();
                    let value = poly.eval_squares(&squares)?;
                    Ok(ScanSample { theta, value })
                })
                .collect()
        })
        .collect();
    let mut all = Vec::with_capacity(samples);
    for chunk in drawn {
        all.extend(chunk?);
    }
    let (min_value, argmin) = all
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .map(|s| (s.value, s.theta.clone()))
        .unwrap_or((f64::NAN, Vec::new()));
    let violations = all
        .iter()
        .filter(|s| s.value.is_nan() || s.value <= 0.0)
        .count();
    Ok(ScanReport {
        g,
        n,
        seed,
        samples: all,
        min_value,
        argmin,
        violations,
    })
}

/// `(0, 0, iθ, i(2π − ε))` with `4πε < θ² < 4π²`, where `V_{0,4}` is negative even
/// though the surface exists.
pub fn find_negative_example(theta: f64, eps: f64) -> Result<(Vec<BoundaryLabel>, f64)> {
    let theta_sq = theta * theta;
    if !(eps > 0.0 && 4.0 * PI * eps < theta_sq && theta_sq < 4.0 * PI * PI) {
        return Err(Error::Domain(format!(
            "need 4πε < θ² < 4π², got θ = {theta}, ε = {eps}"
        )));
    }
    let labels = vec![
        BoundaryLabel::Cusp,
        BoundaryLabel::Cusp,
        BoundaryLabel::cone(theta)?,
        BoundaryLabel::cone(2.0 * PI - eps)?,
    ];
    let mut table = VolumeTable::new(1);
    let value = table.volume(0, 4)?.numeric_eval(&labels)?;
    Ok((labels, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rational::rat;

    fn cones(angles: &[f64]) -> Vec<BoundaryLabel> {
        angles
            .iter()
            .map(|&t| BoundaryLabel::cone(t).unwrap())
            .collect()
    }

    #[test]
    fn nonempty_examples() {
        assert!(nonempty(0, &cones(&[1.0; 4])).unwrap());
        assert!(!nonempty(0, &cones(&[5.0; 3])).unwrap());
        assert!(nonempty(1, &[BoundaryLabel::Cusp, BoundaryLabel::Cusp]).unwrap());
        assert!(matches!(
            nonempty(0, &cones(&[1.0, 1.0])),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn nonempty_wall_is_outside() {
        // three cones of angle 2π/3 on a sphere: Σθ = 2π exactly
        let labels: Vec<_> = (0..3)
            .map(|_| BoundaryLabel::cone_pi(rat(2, 3)).unwrap())
            .collect();
        assert!(!nonempty(0, &labels).unwrap());
        assert!(classify_validity(0, &labels).unwrap().on_wall);
    }

    #[test]
    fn weights() {
        let w = hassett_weights(&[
            BoundaryLabel::cone(PI).unwrap(),
            BoundaryLabel::Cusp,
            BoundaryLabel::cone(5.0).unwrap(),
        ])
        .unwrap();
        assert!((w[0] - 0.5).abs() < 1e-15);
        assert_eq!(w[1], 1.0);
        assert!((w[2] - 0.20423).abs() < 1e-5);
        assert!(hassett_weights(&[BoundaryLabel::geodesic(1.0).unwrap()]).is_err());
        let exact = hassett_weights_exact(&[BoundaryLabel::cone_pi(rat(1, 1)).unwrap()])
            .unwrap()
            .unwrap();
        assert_eq!(exact, vec![rat(1, 2)]);
    }

    #[test]
    fn merging_examples() {
        let m = mergeable_subsets(&cones(&[5.0, 4.0])).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].indices, vec![1, 2]);
        assert!((m[0].theta - (9.0 - 2.0 * PI)).abs() < 1e-12);
        assert!(mergeable_subsets(&cones(&[1.0, 1.0])).unwrap().is_empty());
        let m = mergeable_subsets(&cones(&[5.0, 4.0, 5.0])).unwrap();
        let triple = m.iter().find(|s| s.indices.len() == 3).unwrap();
        assert!((triple.theta - (14.0 - 4.0 * PI)).abs() < 1e-12);
        assert!(mergeable_subsets(&cones(&[6.0; 21])).is_err());
    }

    #[test]
    fn exact_merged_angle() {
        let labels = vec![
            BoundaryLabel::cone_pi(rat(3, 2)).unwrap(),
            BoundaryLabel::cone_pi(rat(3, 4)).unwrap(),
        ];
        let m = mergeable_subsets(&labels).unwrap();
        assert_eq!(m[0].theta_over_pi.as_deref(), Some("1/4"));
    }

    #[test]
    fn main_chamber_examples() {
        assert!(in_main_chamber(&cones(&[3.0, 3.0])).unwrap());
        assert!(!in_main_chamber(&cones(&[3.0, 3.5])).unwrap());
        assert!(
            in_main_chamber(&[BoundaryLabel::Cusp, BoundaryLabel::cone(6.0).unwrap()]).unwrap()
        );
        assert!(in_main_chamber(&[BoundaryLabel::geodesic(1.0).unwrap()]).is_err());
    }

    #[test]
    fn validity_examples() {
        let r = classify_validity(
            1,
            &[
                BoundaryLabel::Cusp,
                BoundaryLabel::Cusp,
                BoundaryLabel::cone_pi(rat(19, 10)).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(r.validity, Validity::ValidMainChamber);
        let r = classify_validity(
            1,
            &[
                BoundaryLabel::geodesic(2.0).unwrap(),
                BoundaryLabel::cone(4.0).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(r.validity, Validity::Unknown);
        let r = classify_validity(
            0,
            &[1.0, 2.0, 3.0].map(|l| BoundaryLabel::geodesic(l).unwrap()),
        )
        .unwrap();
        assert_eq!(r.validity, Validity::Valid);
        assert!(r.hassett_weights.is_none());
        let r = classify_validity(
            0,
            &[
                BoundaryLabel::Cusp,
                BoundaryLabel::Cusp,
                BoundaryLabel::cone(1.0).unwrap(),
                BoundaryLabel::cone(2.0 * PI - 1e-8).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(r.validity, Validity::LimitZero);
    }

    #[test]
    fn angle_pi_is_not_small() {
        let r = classify_validity(
            0,
            &[
                BoundaryLabel::geodesic(1.0).unwrap(),
                BoundaryLabel::geodesic(1.0).unwrap(),
                BoundaryLabel::cone_pi(rat(1, 1)).unwrap(),
            ],
        )
        .unwrap();
        assert!(!r.small_angles);
        assert_eq!(r.validity, Validity::Unknown);
        assert!(r.on_wall);
    }

    #[test]
    fn negative_example() {
        let (labels, value) = find_negative_example(2.0, 0.1).unwrap();
        assert_eq!(labels.len(), 4);
        assert!((value - -1.3767).abs() < 1e-3, "{value}");
        assert!(nonempty(0, &labels).unwrap());
        assert!(find_negative_example(2.0, 0.4).is_err());
        assert!(find_negative_example(2.0 * PI, 0.1).is_err());
    }

    #[test]
    fn scan_is_reproducible_and_positive() {
        let mut t = VolumeTable::new(2);
        let a = positivity_scan(&mut t, 0, 4, 3000, 7).unwrap();
        let b = positivity_scan(&mut t, 0, 4, 3000, 7).unwrap();
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.violations, 0);
        assert!(a.min_value > 0.0);
        let mut csv = Vec::new();
        a.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 3001);
    }

    #[test]
    fn v05_near_pi() {
        let mut t = VolumeTable::new(2);
        let mut labels = cones(&[PI; 4]);
        labels.push(BoundaryLabel::cone(PI - 0.01).unwrap());
        assert!(t.volume(0, 5).unwrap().numeric_eval(&labels).unwrap() > 0.0);
    }
}
