//! Acceptance gate: one test per shipping criterion, each printing a
//! single PASS/FAIL line (visible under --nocapture, and always on
//! failure). The suite exercises the decision table, finite-group
//! screening, the cyclotomic certificates, fixed-point detection,
//! faithfulness, the sampled metric checks, the negative control, the
//! eigenspace reconstruction, and binary-level determinism.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::OnceLock;

use sphere_actions::groups::CayleyTable;
use sphere_actions::operators::spectral::{
    check_cyclotomic_condition, eigenspace_decomposition, fixed_space_matrix,
};
use sphere_actions::operators::{
    cyclotomic_poly, inflate, rotation, torsion_action, IntPolynomial,
};
use sphere_actions::verify::{verify_decomposition_unchecked, CheckStatus};
use sphere_actions::{
    decide_fg_abelian, verify_construction, ExactAngle, FgAbelianPresentation, VerificationConfig,
    VerificationReport,
};

fn criterion(number: u32, name: &str, body: impl FnOnce() + std::panic::UnwindSafe) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("ACCEPTANCE {number:2} {name}: PASS"),
        Err(payload) => {
            println!("ACCEPTANCE {number:2} {name}: FAIL");
            std::panic::resume_unwind(payload);
        }
    }
}

#[test]
fn criterion_01_decision_table() {
    criterion(1, "decision table", || {
        let z = decide_fg_abelian(&FgAbelianPresentation::direct_sum(1, &[]));
        assert!(z.admissible);
        let cert = z.certificate.unwrap();
        assert_eq!(cert.free_rank, 1);
        assert!(cert.torsion.is_empty());

        let mixed = decide_fg_abelian(&FgAbelianPresentation::direct_sum(1, &[2, 3]));
        assert!(mixed.admissible);
        assert!(mixed.witness.is_none());

        // the same verdicts must come out of the raw relations format
        let doc = sphere_actions::groups::PresentationDocument {
            generators: 2,
            relations: vec![vec![4, 0], vec![0, 2]],
        };
        let four_two = decide_fg_abelian(&FgAbelianPresentation::from_document(&doc).unwrap());
        assert!(!four_two.admissible);
        let witness = four_two.witness.as_ref().unwrap();
        assert_eq!(witness.prime(), &2u64.into());
        assert_eq!(
            serde_json::to_value(witness).unwrap(),
            serde_json::json!([4, 2])
        );

        let two_two = decide_fg_abelian(&FgAbelianPresentation::direct_sum(0, &[2, 2]));
        assert!(!two_two.admissible);
        assert_eq!(
            serde_json::to_value(two_two.witness.unwrap()).unwrap(),
            serde_json::json!([2, 2])
        );
    });
}

/// Composition table of S₃ with permutations enumerated lexicographically.
fn s3_table() -> CayleyTable {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let index = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            perms
                .iter()
                .map(|q| index(&[p[q[0]], p[q[1]], p[q[2]]]))
                .collect()
        })
        .collect();
    CayleyTable::new(table, 0).unwrap()
}

/// Dihedral group of order 8: elements s^a r^b multiplying by
/// (a, b) · (c, d) = (a + c, d + b·(−1)^c).
fn dihedral8_table() -> CayleyTable {
    let index = |a: usize, b: usize| a * 4 + b;
    let mut table = vec![vec![0; 8]; 8];
    for a in 0..2 {
        for b in 0..4usize {
            for c in 0..2 {
                for d in 0..4usize {
                    let sign_flip = if c == 1 { 4 - b } else { b };
                    table[index(a, b)][index(c, d)] = index((a + c) % 2, (d + sign_flip) % 4);
                }
            }
        }
    }
    CayleyTable::new(table, 0).unwrap()
}

#[test]
fn criterion_02_screening() {
    criterion(2, "finite-group screening", || {
        assert!(!s3_table().screen().passed(), "S3 must fail");
        assert!(!dihedral8_table().screen().passed(), "D8 must fail");
        for n in 1..=36 {
            let table = CayleyTable::cyclic_product(&[n]).unwrap();
            assert!(table.screen().passed(), "Z_{n} must pass");
        }
    });
}

#[test]
fn criterion_03_cyclotomic_identity_and_residuals() {
    criterion(3, "cyclotomic identity and operator residuals", || {
        for m in 1..=128u64 {
            let mut product = IntPolynomial::one();
            for d in 1..=m {
                if m % d == 0 {
                    product = product.mul(&cyclotomic_poly(d).unwrap());
                }
            }
            assert_eq!(product, IntPolynomial::power_minus_one(m as usize));
        }

        let families: [&[(u64, u32)]; 4] =
            [&[(2, 2)], &[(3, 1)], &[(2, 1), (3, 1)], &[(2, 2), (3, 1)]];
        for prime_powers in families {
            let ones: Vec<i64> = vec![1; prime_powers.len()];
            let op = torsion_action(prime_powers, &ones, &ones).unwrap();
            let order = op.total_angle().unwrap().order();
            let residual = check_cyclotomic_condition(&op.dense_paired(1).unwrap(), order).unwrap();
            assert!(
                residual <= 1e-9,
                "residual {residual} for {prime_powers:?} (order {order})"
            );
        }
    });
}

#[test]
fn criterion_04_fixed_point_criterion_vs_kernel() {
    criterion(4, "exact fixed-point criterion vs kernel detection", || {
        let prime_powers = [(2u64, 2u32), (3, 1)];
        let ks = [1i64, 1];
        let mut agreements = 0;
        let mut integral_tuples = Vec::new();
        // two full periods of s1 against one of s2: 24 tuples
        for s1 in 0..8i64 {
            for s2 in 0..3i64 {
                let op = torsion_action(&prime_powers, &[s1, s2], &ks).unwrap();
                let exact = op.total_angle().unwrap().is_integral();
                let kernel = fixed_space_matrix(&op.dense_paired(1).unwrap(), 1e-8);
                let numerical = kernel.dimension > 0;
                assert_eq!(
                    exact, numerical,
                    "exact and kernel detection disagree at ({s1}, {s2})"
                );
                agreements += 1;
                if exact {
                    integral_tuples.push((s1, s2));
                }
            }
        }
        assert_eq!(agreements, 24);
        // whole turns happen exactly where 4 | s1 and 3 | s2
        assert_eq!(integral_tuples, vec![(0, 0), (4, 0)]);
    });
}

#[test]
fn criterion_05_faithfulness_sweep() {
    criterion(5, "faithful total-angle classes", || {
        let families: [(&[(u64, u32)], usize); 2] =
            [(&[(2, 2), (3, 1)], 12), (&[(2, 1), (3, 1), (5, 1)], 30)];
        for (prime_powers, expected) in families {
            let moduli: Vec<i64> = prime_powers.iter().map(|&(p, a)| p.pow(a) as i64).collect();
            let ks: Vec<i64> = vec![1; prime_powers.len()];
            let mut tuples = vec![vec![]];
            for &m in &moduli {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t: Vec<i64>| {
                        (0..m).map(move |s| {
                            let mut next = t.clone();
                            next.push(s);
                            next
                        })
                    })
                    .collect();
            }
            assert_eq!(tuples.len(), expected);
            let mut classes = std::collections::HashSet::new();
            for tuple in &tuples {
                let angle = torsion_action(prime_powers, tuple, &ks)
                    .unwrap()
                    .total_angle()
                    .unwrap()
                    .reduced_mod_one();
                classes.insert((angle.numerator(), angle.denominator()));
            }
            assert_eq!(classes.len(), expected, "angle map must be injective");
        }
    });
}

/// The full verification suite on Z ⊕ Z₂ ⊕ Z₃ at the default radius-6,
/// 1000-sample configuration, shared by the metric criteria.
fn default_report() -> &'static VerificationReport {
    static REPORT: OnceLock<VerificationReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        let group = FgAbelianPresentation::direct_sum(1, &[2, 3]);
        verify_construction(&group, &VerificationConfig::default()).unwrap()
    })
}

fn check<'r>(
    report: &'r VerificationReport,
    name: &str,
) -> &'r sphere_actions::verify::CheckResult {
    report
        .checks
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("missing check {name}"))
}

#[test]
fn criterion_06_isometry_sampling() {
    criterion(6, "isometry within 1e-12 across operator classes", || {
        let report = default_report();
        assert_eq!(report.config.samples, 1000);
        for name in [
            "isometry_translation",
            "isometry_rotation",
            "isometry_inflation",
            "isometry_combined",
        ] {
            let result = check(report, name);
            assert_eq!(result.status, CheckStatus::Pass, "{name}");
            let measured = result.measured.unwrap();
            assert!(measured <= 1e-12, "{name} deviated by {measured}");
        }
    });
}

#[test]
fn criterion_07_freeness_and_separation() {
    criterion(7, "freeness floor and exact orbit separation", || {
        let report = default_report();
        let free = check(report, "freeness");
        assert_eq!(free.status, CheckStatus::Pass);
        assert!(free.measured.unwrap() >= 1e-3);
        let separation = check(report, "orbit_separation");
        assert_eq!(separation.status, CheckStatus::Pass);
        assert_eq!(
            separation.measured.unwrap(),
            2.0f64.sqrt(),
            "orbit points must sit at distance exactly sqrt(2)"
        );
    });
}

#[test]
fn criterion_08_negative_control() {
    criterion(8, "repeated prime caught by the harness", || {
        // s = (1, 1) over {(2,1),(2,1)} rotates by 1/2 + 1/2 = one whole
        // turn: a nonidentity element with a full fixed space
        let op = torsion_action(&[(2, 1), (2, 1)], &[1, 1], &[1, 1]).unwrap();
        let angle = op.total_angle().unwrap();
        assert!(angle.is_integral());
        assert_eq!(angle.numerator(), 1);
        let kernel = fixed_space_matrix(&op.dense_paired(1).unwrap(), 1e-8);
        assert_eq!(kernel.dimension, 2, "the whole plane is fixed");

        let report =
            verify_decomposition_unchecked(0, &[(2, 1), (2, 1)], &VerificationConfig::default())
                .unwrap();
        assert!(!report.refused, "the hook bypasses the admissibility gate");
        assert!(!report.passed, "the harness must flag the defect");
        let fixed = check(&report, "nonidentity_fixed_points");
        assert_eq!(fixed.status, CheckStatus::Fail);
        assert!(
            fixed.witnesses.iter().any(|w| w.contains("[1, 1]")),
            "witnesses: {:?}",
            fixed.witnesses
        );
    });
}

#[test]
fn criterion_09_eigenspace_reconstruction() {
    criterion(9, "eigenspace projections sum to the identity", || {
        let base = rotation(ExactAngle::new(1, 3).unwrap())
            .dense_flat()
            .unwrap();
        for blocks in 2..=4usize {
            let op = inflate(&base, blocks).unwrap();
            let m = op.dense_flat().unwrap();
            let decomposition = eigenspace_decomposition(&m, 3, 1e-9).unwrap();
            assert!(decomposition.reconstruction_residual <= 1e-9);
            let dim = 2 * m.nrows();
            let mut sum = nalgebra::DMatrix::<f64>::zeros(dim, dim);
            for component in &decomposition.components {
                sum += component.real_projection();
            }
            let defect = (sum - nalgebra::DMatrix::<f64>::identity(dim, dim))
                .abs()
                .max();
            assert!(defect <= 1e-9, "blocks={blocks}: defect {defect}");
        }
    });
}

#[test]
fn criterion_10_byte_identical_reports() {
    criterion(10, "verify-subcommand determinism", || {
        let input = r#"{"generators":2,"relations":[[2,0],[0,3]]}"#;
        let run = |seed_flag: bool| {
            let mut cmd = Command::new(env!("CARGO_BIN_EXE_sphere-actions"));
            cmd.arg("verify").arg(input).args(["--samples", "200"]);
            if seed_flag {
                cmd.args(["--seed", "7"]);
            } else {
                cmd.env("SPHERE_ACTIONS_SEED", "7");
            }
            cmd.output().expect("binary runs")
        };
        let first = run(true);
        let second = run(true);
        assert!(first.status.success());
        assert_eq!(first.status.code(), second.status.code());
        assert_eq!(
            first.stdout, second.stdout,
            "reports must be byte-identical"
        );
        assert!(!first.stdout.is_empty());
        // the env var is an equivalent way to pin the seed
        let via_env = run(false);
        assert_eq!(via_env.stdout, first.stdout);
    });
}
