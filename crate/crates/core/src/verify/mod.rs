//! End-to-end verification of a constructed action: decide admissibility,
//! build the operator family on a truncated space, and measure isometry,
//! freeness, commutation, and orbit-separation margins into a structured,
//! deterministic report.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

use crate::decision::{decide_decomposition, decide_fg_abelian, Verdict};
use crate::error::{Error, Result};
use crate::groups::{FgAbelianPresentation, PrimaryDecomposition, PrimePower};
use crate::hilbert::{Ball, GroupElement, GroupKind, TruncatedVector, DEFAULT_BALL_CAP};
use crate::operators::{
    combined_action, inflate, rotation, spectral, torsion_action, ExactAngle, PairedVector,
    SphereIsometry,
};

/// Tunables for a verification run. Serialized into the report so that a
/// report is reproducible from its own header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationConfig {
    /// Word-length radius of the truncation ball.
    pub radius: u32,
    /// Random unit vectors per sampled check.
    pub samples: usize,
    pub seed: u64,
    /// Bound on |‖Tx‖ − 1| and on commutator norms.
    pub tol_isometry: f64,
    /// Singular values at or below this count as kernel directions.
    pub tol_kernel: f64,
    /// Regression floor for the displacement of nonidentity elements.
    pub displacement_floor: f64,
    /// Refuse to enumerate balls larger than this.
    pub ball_cap: usize,
}

impl Default for VerificationConfig {
    fn default() -> Self {
        VerificationConfig {
            radius: 6,
            samples: 1000,
            seed: 0x5EED,
            tol_isometry: 1e-12,
            tol_kernel: 1e-8,
            displacement_floor: 1e-3,
            ball_cap: DEFAULT_BALL_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// One verified property with its measured margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub measured: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threshold: Option<f64>,
    /// The mathematical statement the check exercises, self-contained.
    pub property: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witnesses: Vec<String>,
}

impl CheckResult {
    fn skipped(name: &str, property: &str, reason: &str) -> Self {
        CheckResult {
            name: name.into(),
            status: CheckStatus::Skipped,
            measured: None,
            threshold: None,
            property: property.into(),
            witnesses: vec![reason.into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub config: VerificationConfig,
    pub verdict: Verdict,
    pub checks: Vec<CheckResult>,
    /// True when no check failed (skips do not fail a run).
    pub passed: bool,
    /// True when the decision procedure refused the group and nothing was
    /// constructed.
    pub refused: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Max |‖Tx‖ − 1| over seeded random unit vectors supported in the
/// operator's exact domain; `None` when that domain is empty.
pub fn check_isometry(
    op: &SphereIsometry,
    ball: &Arc<Ball>,
    samples: usize,
    seed: u64,
) -> Result<Option<f64>> {
    let Some(radius) = op.exact_domain().usable_radius(ball.radius()) else {
        return Ok(None);
    };
    let prefix = ball.prefix_within(radius);
    if prefix == 0 || samples == 0 {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x = sample_unit_paired(ball, prefix, &mut rng)?;
        let moved = op.apply(&x)?;
        worst = worst.max((moved.norm() - 1.0).abs());
    }
    Ok(Some(worst))
}

/// Minimum displacement ‖Tx − x‖ over the family and seeded unit samples,
/// with the label of the weakest operator; `None` when nothing is testable.
pub fn check_free(
    family: &[(String, SphereIsometry)],
    ball: &Arc<Ball>,
    samples: usize,
    seed: u64,
) -> Result<Option<(f64, String)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min: Option<(f64, String)> = None;
    for (label, op) in family {
        let Some(radius) = op.exact_domain().usable_radius(ball.radius()) else {
            continue;
        };
        let prefix = ball.prefix_within(radius);
        if prefix == 0 {
            continue;
        }
        for _ in 0..samples {
            let x = sample_unit_paired(ball, prefix, &mut rng)?;
            let moved = op.apply(&x)?;
            let displacement = moved.distance(&x)?;
            if min.as_ref().is_none_or(|(d, _)| displacement < *d) {
                min = Some((displacement, label.clone()));
            }
        }
    }
    Ok(min)
}

/// Minimum pairwise distance among the images {T x : T ∈ family}; `None`
/// for families with fewer than two members.
pub fn check_orbit_separation(family: &[SphereIsometry], x: &PairedVector) -> Result<Option<f64>> {
    let images = family
        .iter()
        .map(|op| op.apply(x))
        .collect::<Result<Vec<_>>>()?;
    let mut min: Option<f64> = None;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let d = images[i].distance(&images[j])?;
            min = Some(min.map_or(d, |m| m.min(d)));
        }
    }
    Ok(min)
}

/// Max ‖A(Bx) − B(Ax)‖ over seeded unit samples in the common exact
/// domain; `None` when that domain is empty.
pub fn check_commutation(
    a: &SphereIsometry,
    b: &SphereIsometry,
    ball: &Arc<Ball>,
    samples: usize,
    seed: u64,
) -> Result<Option<f64>> {
    let ra = a.exact_domain().usable_radius(ball.radius());
    let rb = b.exact_domain().usable_radius(ball.radius());
    let (Some(ra), Some(rb)) = (ra, rb) else {
        return Ok(None);
    };
    // b may move supports longer before a sees them: restrict twice over
    let radius = ra.min(rb);
    let prefix = ball.prefix_within(radius);
    if prefix == 0 || samples == 0 {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x = sample_unit_paired(ball, prefix, &mut rng)?;
        let ab = a.apply(&b.apply(&x)?)?;
        let ba = b.apply(&a.apply(&x)?)?;
        worst = worst.max(ab.distance(&ba)?);
    }
    Ok(Some(worst))
}

/// Decide, then verify: an admissible group is realized on a radius-R
/// truncation and swept through the full check suite; an inadmissible one
/// produces a refusal report without constructing anything.
pub fn verify_construction(
    presentation: &FgAbelianPresentation,
    config: &VerificationConfig,
) -> Result<VerificationReport> {
    let verdict = decide_fg_abelian(presentation);
    match verdict.certificate.clone() {
        Some(certificate) => run_suite(verdict, &certificate, config),
        None => Ok(refusal_report(verdict, config)),
    }
}

/// Test hook: skip the admissibility gate and run the suite on an
/// arbitrary decomposition, e.g. one with a repeated torsion prime. The
/// report keeps the honest (possibly negative) verdict; the interesting
/// output is which checks catch the defect.
pub fn verify_decomposition_unchecked(
    free_rank: usize,
    torsion: &[(u64, u32)],
    config: &VerificationConfig,
) -> Result<VerificationReport> {
    let torsion = torsion
        .iter()
        .map(|&(p, alpha)| PrimePower {
            prime: p.into(),
            exponent: alpha,
        })
        .collect();
    let decomposition = PrimaryDecomposition::new(free_rank, torsion);
    let verdict = decide_decomposition(decomposition.clone());
    run_suite(verdict, &decomposition, config)
}

fn refusal_report(verdict: Verdict, config: &VerificationConfig) -> VerificationReport {
    let witness = verdict
        .witness
        .as_ref()
        .map(|w| {
            let [a, b] = w.values();
            format!("torsion factors {a} and {b} share the prime {}", w.prime())
        })
        .unwrap_or_default();
    let checks = vec![CheckResult {
        name: "admissibility".into(),
        status: CheckStatus::Fail,
        measured: None,
        threshold: None,
        property: PROP_ADMISSIBLE.into(),
        witnesses: vec![witness],
    }];
    VerificationReport {
        schema: 1,
        config: config.clone(),
        verdict,
        checks,
        passed: false,
        refused: true,
    }
}

const PROP_ADMISSIBLE: &str = "a finitely generated Abelian group admits a free, properly \
     discontinuous isometric action on the unit Hilbert sphere exactly when its torsion \
     primes are pairwise distinct";
const PROP_ISOMETRY: &str =
    "every constructed operator preserves norms on its exact domain: |‖Tx‖ − 1| ≤ tolerance \
     for unit x";
const PROP_COMMUTATION: &str =
    "translations commute with the torsion rotations: ‖A(Bx) − B(Ax)‖ ≤ tolerance on the \
     common exact domain";
const PROP_FREE: &str = "no nonidentity element fixes a point: the displacement ‖Tx − x‖ of \
     unit vectors stays above the floor";
const PROP_SEPARATION_SHIFT: &str = "distinct translations move a basis vector to orthogonal \
     basis vectors, so orbit points sit pairwise at distance exactly √2";
const PROP_SEPARATION_ROTATION: &str = "distinct powers of the torsion rotation move a unit \
     vector to points pairwise at least the minimal chord 2·sin(π/m) apart";
const PROP_FAITHFUL: &str =
    "distinct torsion exponent tuples produce distinct total rotation angles modulo one";
const PROP_FIXED_POINTS: &str = "a rotation by total angle θ has fixed points exactly when θ \
     is a whole number of turns, and no nonidentity exponent tuple reaches one";
const PROP_CYCLOTOMIC: &str = "the full torsion rotation T of order m satisfies Φ_m(T) = 0, \
     certifying that T, …, T^{m−1} are all fixed-point-free";

// stable per-check seed offsets so reordering checks cannot change streams
const SEED_ISO_TRANSLATION: u64 = 0x01;
const SEED_ISO_ROTATION: u64 = 0x02;
const SEED_ISO_INFLATION: u64 = 0x03;
const SEED_ISO_COMBINED: u64 = 0x04;
const SEED_COMMUTATION: u64 = 0x05;
const SEED_FREENESS: u64 = 0x06;

fn run_suite(
    verdict: Verdict,
    decomposition: &PrimaryDecomposition,
    config: &VerificationConfig,
) -> Result<VerificationReport> {
    let prime_powers = desk_scale_torsion(decomposition)?;
    let ks: Vec<i64> = vec![1; prime_powers.len()];
    let free_rank = decomposition.free_rank;
    let host_rank = free_rank.max(1);
    let ball = Ball::enumerate_with_cap(
        GroupKind::FreeAbelian(host_rank),
        config.radius,
        config.ball_cap,
    )?;

    // nonidentity elements: shifts of length ≤ R/2 crossed with all torsion
    // exponent tuples (the identity element is excluded from the family)
    let shifts: Vec<GroupElement> = if free_rank >= 1 {
        ball.elements()[..ball.prefix_within(config.radius / 2)].to_vec()
    } else {
        vec![ball.kind().identity()]
    };
    let tuples = exponent_tuples(&prime_powers)?;
    let ones: Vec<i64> = vec![1; prime_powers.len()];

    let mut family: Vec<(String, SphereIsometry)> = Vec::new();
    for shift in &shifts {
        for tuple in &tuples {
            let is_identity = ball.kind().word_length(shift)? == 0 && tuple.iter().all(|&s| s == 0);
            if is_identity {
                continue;
            }
            let op = combined_action(shift, &ball, &prime_powers, tuple, &ks)?;
            family.push((element_label(shift, tuple), op));
        }
    }

    let mut checks = Vec::new();
    checks.push(CheckResult {
        name: "admissibility".into(),
        status: if verdict.admissible {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        measured: None,
        threshold: None,
        property: PROP_ADMISSIBLE.into(),
        witnesses: verdict
            .witness
            .as_ref()
            .map(|w| {
                let [a, b] = w.values();
                vec![format!(
                    "torsion factors {a} and {b} share the prime {} (gate bypassed)",
                    w.prime()
                )]
            })
            .unwrap_or_default(),
    });

    // isometry, per operator class
    let translation_op = shifts
        .iter()
        .find(|g| ball.kind().word_length(g).map(|l| l > 0).unwrap_or(false))
        .map(|g| crate::operators::right_translation(g, &ball))
        .transpose()?;
    checks.push(isometry_check(
        "isometry_translation",
        translation_op.as_ref(),
        &ball,
        config,
        SEED_ISO_TRANSLATION,
        "the group has no free part",
    )?);

    let rotation_op = if prime_powers.is_empty() {
        None
    } else {
        Some(torsion_action(&prime_powers, &ones, &ks)?)
    };
    checks.push(isometry_check(
        "isometry_rotation",
        rotation_op.as_ref(),
        &ball,
        config,
        SEED_ISO_ROTATION,
        "the group has no torsion part",
    )?);

    checks.push(inflation_isometry_check(config)?);

    let combined_op = family.first().map(|(_, op)| op.clone());
    checks.push(isometry_check(
        "isometry_combined",
        combined_op.as_ref(),
        &ball,
        config,
        SEED_ISO_COMBINED,
        "the group is trivial",
    )?);

    // commutation between the translation and rotation parts
    checks.push(match (&translation_op, &rotation_op) {
        (Some(a), Some(b)) => {
            let measured = check_commutation(
                a,
                b,
                &ball,
                config.samples,
                config.seed.wrapping_add(SEED_COMMUTATION),
            )?;
            threshold_check(
                "commutation",
                PROP_COMMUTATION,
                measured,
                config.tol_isometry,
                Direction::AtMost,
                Vec::new(),
            )
        }
        _ => CheckResult::skipped(
            "commutation",
            PROP_COMMUTATION,
            "needs both a free part and a torsion part",
        ),
    });

    // freeness: every nonidentity element displaces supported samples
    checks.push(if family.is_empty() {
        CheckResult::skipped("freeness", PROP_FREE, "the group is trivial")
    } else {
        let measured = check_free(
            &family,
            &ball,
            config.samples,
            config.seed.wrapping_add(SEED_FREENESS),
        )?;
        let witnesses = measured
            .as_ref()
            .map(|(_, label)| vec![format!("minimum attained by {label}")])
            .unwrap_or_default();
        threshold_check(
            "freeness",
            PROP_FREE,
            measured.map(|(d, _)| d),
            config.displacement_floor,
            Direction::AtLeast,
            witnesses,
        )
    });

    checks.push(separation_check(&ball, &shifts, &prime_powers, &ks)?);
    checks.push(faithfulness_check(&prime_powers, &tuples, &ks)?);
    checks.push(fixed_point_check(&prime_powers, &tuples, &ks, config)?);
    checks.push(cyclotomic_check(&prime_powers, &ones, &ks)?);

    let passed = checks.iter().all(|c| c.status != CheckStatus::Fail);
    Ok(VerificationReport {
        schema: 1,
        config: config.clone(),
        verdict,
        checks,
        passed,
        refused: false,
    })
}

enum Direction {
    AtMost,
    AtLeast,
}

fn threshold_check(
    name: &str,
    property: &str,
    measured: Option<f64>,
    threshold: f64,
    direction: Direction,
    witnesses: Vec<String>,
) -> CheckResult {
    match measured {
        None => CheckResult::skipped(name, property, "the exact domain is empty"),
        Some(value) => {
            let ok = match direction {
                Direction::AtMost => value <= threshold,
                Direction::AtLeast => value >= threshold,
            };
            CheckResult {
                name: name.into(),
                status: if ok {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
                measured: Some(value),
                threshold: Some(threshold),
                property: property.into(),
                witnesses,
            }
        }
    }
}

fn isometry_check(
    name: &str,
    op: Option<&SphereIsometry>,
    ball: &Arc<Ball>,
    config: &VerificationConfig,
    seed_offset: u64,
    skip_reason: &str,
) -> Result<CheckResult> {
    let Some(op) = op else {
        return Ok(CheckResult::skipped(name, PROP_ISOMETRY, skip_reason));
    };
    let measured = check_isometry(
        op,
        ball,
        config.samples,
        config.seed.wrapping_add(seed_offset),
    )?;
    Ok(threshold_check(
        name,
        PROP_ISOMETRY,
        measured,
        config.tol_isometry,
        Direction::AtMost,
        Vec::new(),
    ))
}

/// Inflation gets its own sampler: the block operator acts on flat
/// coordinates, independent of the ball.
fn inflation_isometry_check(config: &VerificationConfig) -> Result<CheckResult> {
    let base = rotation(ExactAngle::new(1, 3)?).dense_flat()?;
    let op = inflate(&base, 3)?;
    let dim = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(SEED_ISO_INFLATION));
    let mut worst = 0.0f64;
    for _ in 0..config.samples {
        let v = sample_unit_flat(dim, &mut rng);
        let moved = op.apply_flat(&v)?;
        let norm = crate::hilbert::summation::exact_sum_of_squares(&moved).sqrt();
        worst = worst.max((norm - 1.0).abs());
    }
    Ok(threshold_check(
        "isometry_inflation",
        PROP_ISOMETRY,
        Some(worst),
        config.tol_isometry,
        Direction::AtMost,
        Vec::new(),
    ))
}

/// Orbit separation: translations give exactly orthonormal orbit points;
/// without a free part, powers of the torsion rotation are compared
/// against the minimal rotation chord.
fn separation_check(
    ball: &Arc<Ball>,
    shifts: &[GroupElement],
    prime_powers: &[(u64, u32)],
    ks: &[i64],
) -> Result<CheckResult> {
    let has_free_part = shifts
        .iter()
        .any(|g| ball.kind().word_length(g).map(|l| l > 0).unwrap_or(false));
    let x = PairedVector::new(
        TruncatedVector::basis(ball.clone(), 0),
        TruncatedVector::zeros(ball.clone()),
    )?;
    if has_free_part {
        let family = shifts
            .iter()
            .map(|g| crate::operators::right_translation(g, ball))
            .collect::<Result<Vec<_>>>()?;
        let measured = check_orbit_separation(&family, &x)?;
        Ok(threshold_check(
            "orbit_separation",
            PROP_SEPARATION_SHIFT,
            measured,
            2.0f64.sqrt(),
            Direction::AtLeast,
            Vec::new(),
        ))
    } else if !prime_powers.is_empty() {
        let order: u64 = prime_powers.iter().map(|&(p, a)| p.pow(a)).product();
        let ones: Vec<i64> = vec![1; prime_powers.len()];
        let mut family = Vec::new();
        for k in 0..order {
            let tuple: Vec<i64> = ones.iter().map(|_| k as i64).collect();
            family.push(torsion_action(prime_powers, &tuple, ks)?);
        }
        let measured = check_orbit_separation(&family, &x)?;
        let chord = 2.0 * (std::f64::consts::PI / order as f64).sin();
        Ok(threshold_check(
            "orbit_separation",
            PROP_SEPARATION_ROTATION,
            measured,
            chord * (1.0 - 1e-9),
            Direction::AtLeast,
            Vec::new(),
        ))
    } else {
        Ok(CheckResult::skipped(
            "orbit_separation",
            PROP_SEPARATION_SHIFT,
            "the group is trivial",
        ))
    }
}

/// Exponent tuple → total angle mod 1 must be injective.
fn faithfulness_check(
    prime_powers: &[(u64, u32)],
    tuples: &[Vec<i64>],
    ks: &[i64],
) -> Result<CheckResult> {
    if prime_powers.is_empty() {
        return Ok(CheckResult::skipped(
            "torsion_faithfulness",
            PROP_FAITHFUL,
            "the group has no torsion part",
        ));
    }
    let mut seen: HashMap<(i64, i64), Vec<i64>> = HashMap::new();
    let mut collisions = Vec::new();
    for tuple in tuples {
        let total = torsion_action(prime_powers, tuple, ks)?
            .total_angle()
            .expect("torsion actions are rotation compositions")
            .reduced_mod_one();
        let key = (total.numerator(), total.denominator());
        if let Some(previous) = seen.get(&key) {
            collisions.push(format!(
                "tuples {previous:?} and {tuple:?} both rotate by {}/{} of a turn",
                key.0, key.1
            ));
        } else {
            seen.insert(key, tuple.clone());
        }
    }
    Ok(CheckResult {
        name: "torsion_faithfulness".into(),
        status: if collisions.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        measured: Some(collisions.len() as f64),
        threshold: Some(0.0),
        property: PROP_FAITHFUL.into(),
        witnesses: collisions,
    })
}

/// Exact integrality of the total angle vs numerical kernel detection, and
/// no nonidentity tuple may have fixed points at all.
fn fixed_point_check(
    prime_powers: &[(u64, u32)],
    tuples: &[Vec<i64>],
    ks: &[i64],
    config: &VerificationConfig,
) -> Result<CheckResult> {
    if prime_powers.is_empty() {
        return Ok(CheckResult::skipped(
            "nonidentity_fixed_points",
            PROP_FIXED_POINTS,
            "the group has no torsion part",
        ));
    }
    let mut offenders = Vec::new();
    let mut disagreements = Vec::new();
    for tuple in tuples {
        let op = torsion_action(prime_powers, tuple, ks)?;
        let exact_nontrivial = op
            .total_angle()
            .expect("torsion actions are rotation compositions")
            .is_integral();
        let dense = op.dense_paired(1)?;
        let numerical_nontrivial =
            spectral::fixed_space_matrix(&dense, config.tol_kernel).dimension > 0;
        if exact_nontrivial != numerical_nontrivial {
            disagreements.push(format!(
                "exact and numerical fixed-space detection disagree at s = {tuple:?}"
            ));
        }
        let is_identity_tuple = tuple.iter().all(|&s| s == 0);
        if exact_nontrivial && !is_identity_tuple {
            offenders.push(format!(
                "tuple s = {tuple:?} rotates by a whole number of turns"
            ));
        }
    }
    let mut witnesses = disagreements;
    witnesses.extend(offenders);
    Ok(CheckResult {
        name: "nonidentity_fixed_points".into(),
        status: if witnesses.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        measured: Some(witnesses.len() as f64),
        threshold: Some(0.0),
        property: PROP_FIXED_POINTS.into(),
        witnesses,
    })
}

fn cyclotomic_check(prime_powers: &[(u64, u32)], ones: &[i64], ks: &[i64]) -> Result<CheckResult> {
    if prime_powers.is_empty() {
        return Ok(CheckResult::skipped(
            "cyclotomic_residual",
            PROP_CYCLOTOMIC,
            "the group has no torsion part",
        ));
    }
    let op = torsion_action(prime_powers, ones, ks)?;
    let order = op
        .total_angle()
        .expect("torsion actions are rotation compositions")
        .order();
    let dense = op.dense_paired(1)?;
    let residual = spectral::check_cyclotomic_condition(&dense, order)?;
    Ok(threshold_check(
        "cyclotomic_residual",
        PROP_CYCLOTOMIC,
        Some(residual),
        1e-9,
        Direction::AtMost,
        vec![format!("operator order {order}")],
    ))
}

fn desk_scale_torsion(decomposition: &PrimaryDecomposition) -> Result<Vec<(u64, u32)>> {
    decomposition
        .torsion
        .iter()
        .map(|pp| {
            let p = u64::try_from(&pp.prime).map_err(|_| {
                Error::InvalidArgument(format!(
                    "torsion prime {} is too large for an explicit construction",
                    pp.prime
                ))
            })?;
            Ok((p, pp.exponent))
        })
        .collect()
}

/// All exponent tuples 0 ≤ sᵢ < pᵢ^{αᵢ}, identity first, in mixed-radix
/// counting order.
fn exponent_tuples(prime_powers: &[(u64, u32)]) -> Result<Vec<Vec<i64>>> {
    const TUPLE_CAP: u64 = 100_000;
    let mut total: u64 = 1;
    for &(p, a) in prime_powers {
        total = total
            .checked_mul(p.pow(a))
            .filter(|&t| t <= TUPLE_CAP)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("torsion order exceeds the sweep cap {TUPLE_CAP}"))
            })?;
    }
    let moduli: Vec<u64> = prime_powers.iter().map(|&(p, a)| p.pow(a)).collect();
    let mut tuples = Vec::with_capacity(total as usize);
    let mut current = vec![0i64; moduli.len()];
    loop {
        tuples.push(current.clone());
        // increment little-endian mixed radix, last coordinate fastest
        let mut pos = moduli.len();
        loop {
            if pos == 0 {
                return Ok(tuples);
            }
            pos -= 1;
            current[pos] += 1;
            if (current[pos] as u64) < moduli[pos] {
                break;
            }
            current[pos] = 0;
        }
    }
}

fn element_label(shift: &GroupElement, tuple: &[i64]) -> String {
    let shift_text = match shift {
        GroupElement::FreeAbelian(v) => format!("{v:?}"),
        GroupElement::Free(w) => format!("{w:?}"),
        GroupElement::CyclicProduct(r) => format!("{r:?}"),
    };
    format!("shift {shift_text}, torsion exponents {tuple:?}")
}

fn sample_unit_paired(
    ball: &Arc<Ball>,
    prefix: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PairedVector> {
    loop {
        let mut x = TruncatedVector::zeros(ball.clone());
        let mut y = TruncatedVector::zeros(ball.clone());
        for i in 0..prefix {
            x.coefficients_mut()[i] = StandardNormal.sample(rng);
            y.coefficients_mut()[i] = StandardNormal.sample(rng);
        }
        let paired = PairedVector::new(x, y)?;
        match paired.normalize() {
            Ok(unit) => return Ok(unit),
            Err(Error::ZeroVector) => continue,
            Err(e) => return Err(e),
        }
    }
}

fn sample_unit_flat(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let norm = crate::hilbert::summation::exact_sum_of_squares(&v).sqrt();
        if norm > 0.0 {
            return v.iter().map(|c| c / norm).collect();
        }
    }
}
