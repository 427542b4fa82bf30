//! End-to-end checks of the toolkit's headline behaviors. Each test covers
//! one numbered criterion and prints a single pass/fail line with the
//! measured evidence; run with `--nocapture` to see all ten lines.

use std::time::Instant;

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use woven_core::sis::{self, CertificateStatus, SpectrumSamples};
use woven_core::weaving::{self, ClassStatus, MinorsStatus, Symmetry, WeavingOptions};
use woven_core::{
    classify_fourier, det, fourier_matrix, invertibility, is_square_free, recover, reconstruct,
    scan, C64, CMatrix, FourierOptions, IndexSet, Mode, PrecisionConfig, VerdictStatus,
};

fn report(criterion: usize, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {verdict} - {detail}");
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let gauss = |rng: &mut ChaCha8Rng| {
        let u1: f64 = rng.random::<f64>().max(1e-300);
        let u2: f64 = rng.random();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    let entries: Vec<C64> = (0..n * n)
        .map(|_| Complex::new(gauss(rng), gauss(rng)))
        .collect();
    CMatrix::from_fn(n, n, |i, j| entries[i * n + j])
}

fn cfg() -> PrecisionConfig {
    PrecisionConfig::default()
}

fn opts() -> WeavingOptions {
    WeavingOptions::default()
}

#[test]
fn criterion_01_no_permutation_weaves_the_three_dim_example() {
    let start = Instant::now();
    let c = cfg();
    let v = CMatrix::from_real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]).unwrap();
    let w_cols = [[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 1.0, 1.0]];
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut all_rejected = true;
    let mut worst_det = 0.0f64;
    for p in perms {
        let w = CMatrix::from_fn(3, 3, |i, j| Complex::new(w_cols[p[j]][i], 0.0));
        let cert = weaving::are_woven(&v, &w, &opts(), &c).unwrap();
        if cert.status != ClassStatus::NotInW {
            all_rejected = false;
            continue;
        }
        let j = cert.worst_j.expect("witness subset");
        let block = w.central_submatrix(&j).unwrap();
        let d = det(&block, &c).unwrap().abs_det;
        worst_det = worst_det.max(d);
        if d > 1e-12 {
            all_rejected = false;
        }
    }
    let dt = start.elapsed();
    report(
        1,
        all_rejected && dt.as_secs_f64() < 1.0,
        &format!(
            "all 6 column permutations rejected, largest witness |det| {worst_det:.2e}, {:.3} s",
            dt.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_02_weaving_operator_determinant_identity() {
    let start = Instant::now();
    let c = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for t in 0..200usize {
        let n = 2 + t % 7;
        let a = gaussian_matrix(&mut rng, n);
        for mask in 1u64..(1u64 << n) {
            let j = IndexSet::from_mask(n, mask).unwrap();
            let op = reconstruct::weaving_operator(&a, &j).unwrap();
            let d_op = det(&op, &c).unwrap().value;
            let d_sub = det(&a.central_submatrix(&j).unwrap(), &c).unwrap();
            let rel = (d_op - d_sub.value).norm() / d_sub.abs_det.max(1.0);
            worst = worst.max(rel);
        }
    }
    let dt = start.elapsed();
    report(
        2,
        worst <= 1e-10 && dt.as_secs_f64() < 30.0,
        &format!(
            "200 matrices, every subset: worst |det A(J) - det A_J| = {worst:.2e} relative, {:.1} s",
            dt.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_03_recovery_round_trip_on_certified_matrices() {
    let start = Instant::now();
    let c = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut certified = 0usize;
    let mut size = 2usize;
    let mut worst = 0.0f64;
    while certified < 50 {
        let n = size;
        size = if size == 8 { 2 } else { size + 1 };
        let a = gaussian_matrix(&mut rng, n);
        let cert = weaving::classify_class_w(&a, &opts(), &c).unwrap();
        if cert.status != ClassStatus::InW {
            continue;
        }
        certified += 1;
        for _ in 0..20 {
            let x: Vec<C64> = (0..n)
                .map(|_| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let norm_x = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            for mask in 0u64..(1u64 << n) {
                let j = IndexSet::from_mask(n, mask).unwrap();
                let samples = reconstruct::sample(&a, &x, &j).unwrap();
                let y = recover(&a, &samples, &c).unwrap();
                let err = x
                    .iter()
                    .zip(&y)
                    .map(|(u, v)| (u - v).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(err / norm_x);
            }
        }
    }
    let dt = start.elapsed();
    report(
        3,
        worst <= 1e-8 && dt.as_secs_f64() < 120.0,
        &format!(
            "50 certified matrices, 20 vectors, all subsets: worst relative error {worst:.2e}, {:.1} s",
            dt.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_04_fourier_scan_matches_square_free_pattern() {
    let start = Instant::now();
    let rep = scan(2, 18, &FourierOptions::default()).unwrap();
    let mut ok = rep.inconclusive.is_empty()
        && rep.counterexample_candidates.is_empty()
        && rep.direction_violations.is_empty();
    for row in &rep.rows {
        let (square_free, smallest) = is_square_free(row.n).unwrap();
        ok &= row.precision_bits >= 192;
        if square_free {
            ok &= row.in_w == ClassStatus::InW && row.witness_j.is_none();
        } else {
            ok &= row.in_w == ClassStatus::NotInW;
            let p = smallest.unwrap();
            let expected = IndexSet::new(row.n, [0, row.n / p]).unwrap();
            ok &= row.witness_j.as_ref() == Some(&expected);
        }
    }
    let dt = start.elapsed();
    report(
        4,
        ok && dt.as_secs_f64() < 300.0,
        &format!(
            "orders 2..18 at >=192 bits: membership tracks square-freeness, witnesses are {{0, n/p}}, {:.0} s",
            dt.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_05_reduced_enumeration_agrees_with_full() {
    let start = Instant::now();
    let c = cfg();
    let mut agree = true;
    for n in 2..=10usize {
        let full = weaving::classify_class_w(&fourier_matrix(n, &0.0f64).unwrap(), &opts(), &c)
            .unwrap()
            .status;
        let reduced = classify_fourier(n, &FourierOptions::default())
            .unwrap()
            .in_w;
        agree &= full == reduced;
    }
    let dt = start.elapsed();
    report(
        5,
        agree && dt.as_secs_f64() < 60.0,
        &format!(
            "full and zero-anchored enumerations agree for n = 2..10, {:.1} s",
            dt.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_06_minor_exhaustion_separates_primes() {
    let start = Instant::now();
    let c = cfg();
    let mut ok = true;
    for p in [2usize, 3, 5, 7, 11] {
        let out = woven_core::minors_exhaustive(p, &c).unwrap();
        ok &= out.status == MinorsStatus::AllNonzero;
    }
    let four = woven_core::minors_exhaustive(4, &c).unwrap();
    ok &= four.status == MinorsStatus::ZeroMinor;
    let dt = start.elapsed();
    report(
        6,
        ok && dt.as_secs_f64() < 180.0,
        &format!(
            "all minors nonzero for p in {{2,3,5,7,11}}, zero minor found for n = 4, {:.1} s",
            dt.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_07_class_closure_fuzz() {
    let start = Instant::now();
    let c = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0usize;
    let mut failures = 0usize;
    while checked < 200 {
        let n = 2 + (checked % 5);
        let a = gaussian_matrix(&mut rng, n);
        let cert = weaving::classify_class_w(&a, &opts(), &c).unwrap();
        if cert.status != ClassStatus::InW {
            continue;
        }
        checked += 1;
        let diag: Vec<C64> = (0..n)
            .map(|_| {
                Complex::from_polar(
                    rng.random_range(0.5..2.0),
                    rng.random_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        for sym in [
            Symmetry::Inverse,
            Symmetry::Transpose,
            Symmetry::Adjoint,
            Symmetry::ConjDiag(diag),
            Symmetry::ConjPerm(perm),
        ] {
            let b = weaving::apply_symmetry(&a, &sym, &c).unwrap();
            if weaving::classify_class_w(&b, &opts(), &c).unwrap().status != ClassStatus::InW {
                failures += 1;
            }
        }
    }
    for t in 0..50usize {
        let n = 2 + t % 5;
        let b = gaussian_matrix(&mut rng, n);
        let tri = CMatrix::from_fn(n, n, |i, j| {
            if j > i {
                b[(i, j)]
            } else if i == j {
                Complex::from_polar(
                    1.0 + b[(i, j)].norm(),
                    rng.random_range(0.0..std::f64::consts::TAU),
                )
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        if weaving::classify_class_w(&tri, &opts(), &c).unwrap().status != ClassStatus::InW {
            failures += 1;
        }
        let gram = b.adjoint().mul(&b).unwrap();
        let hpd = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                gram[(i, j)] + Complex::new(0.5, 0.0)
            } else {
                gram[(i, j)]
            }
        });
        if weaving::classify_class_w(&hpd, &opts(), &c).unwrap().status != ClassStatus::InW {
            failures += 1;
        }
    }
    let dt = start.elapsed();
    report(
        7,
        failures == 0 && dt.as_secs_f64() < 60.0,
        &format!(
            "200 members survived 5 transforms each, 100 structured matrices certified, {failures} failures, {:.1} s",
            dt.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_08_identity_perturbation_example() {
    let start = Instant::now();
    let c = cfg();
    let support = IndexSet::new(2, [0, 1]).unwrap();
    let block = CMatrix::from_real(&[&[0.0, 2.0], &[2.0, 0.0]]).unwrap();
    let pert = weaving::FinitePerturbation::new(support, block).unwrap();
    let cert = weaving::classify_finite_perturbation(&pert, &opts(), &c).unwrap();
    let dr = weaving::dr_criterion(&pert).unwrap();
    let ok = cert.status == ClassStatus::InW
        && (cert.min_sigma - 1.0).abs() <= 1e-10
        && !dr.satisfied
        && (dr.norm_r - 2.0).abs() <= 1e-10
        && (dr.sup_d - 1.0).abs() <= 1e-10;
    let dt = start.elapsed();
    report(
        8,
        ok && dt.as_secs_f64() < 1.0,
        &format!(
            "certified with min_sigma = {:.12}, split criterion abstains at 2||R|| = {} vs sup|d| = {}, {:.3} s",
            cert.min_sigma,
            2.0 * dr.norm_r,
            dr.sup_d,
            dt.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_09_sis_certificates() {
    let start = Instant::now();
    let grid = 4096;
    let k_max = 64;
    let sinc = SpectrumSamples::sinc(grid, k_max).unwrap();
    let b = sis::bracket(&sinc);
    let bracket_flat = b.values.iter().all(|&v| (v - 1.0).abs() <= 1e-12);

    let psi = SpectrumSamples::from_fn(grid, k_max, |k, z| {
        if k == 0 {
            Complex::new(1.0, 0.0) - 0.4 * Complex::cis(std::f64::consts::TAU * z)
        } else {
            Complex::new(0.0, 0.0)
        }
    })
    .unwrap();
    let cert = sis::perturbation_certify(&sinc, &psi).unwrap();
    let pair_ok = cert.status == CertificateStatus::CertifiedWoven
        && (cert.mu_est - 0.16).abs() <= 1e-10
        && cert.a_est == 1.0;

    let (lo, hi) = sis::finite_section_validate(&sinc, &psi, 32, 50, 90210).unwrap();
    let section_ok = lo >= 0.31;
    let dt = start.elapsed();
    report(
        9,
        bracket_flat && pair_ok && section_ok && dt.as_secs_f64() < 60.0,
        &format!(
            "sinc bracket flat at 1, pair certified with mu = {:.12}, sections in [{lo:.4}, {hi:.4}], {:.1} s",
            cert.mu_est,
            dt.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_10_prime_dft_mixed_sampling() {
    let start = Instant::now();
    let c = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    for p in [3usize, 5, 7] {
        let f = fourier_matrix(p, &0.0f64).unwrap();
        for mask in 0u64..(1u64 << p) {
            let j = IndexSet::from_mask(p, mask).unwrap();
            for _ in 0..10 {
                let x: Vec<C64> = (0..p)
                    .map(|_| Complex::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                    .collect();
                let norm_x = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                let samples = reconstruct::sample(&f, &x, &j).unwrap();
                let y = recover(&f, &samples, &c).unwrap();
                let err = x
                    .iter()
                    .zip(&y)
                    .map(|(u, v)| (u - v).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(err / norm_x);
            }
        }
    }
    let dt = start.elapsed();
    report(
        10,
        worst <= 1e-8 && dt.as_secs_f64() < 60.0,
        &format!(
            "every subset of F_3, F_5, F_7 recovered 10 vectors, worst relative error {worst:.2e}, {:.1} s",
            dt.as_secs_f64()
        ),
    );
}

#[test]
fn verdicts_are_consistent_across_modes() {
    let c = cfg();
    let f4 = fourier_matrix(4, &0.0f64).unwrap();
    let j = IndexSet::new(4, [0, 2]).unwrap();
    let block = f4.central_submatrix(&j).unwrap();
    let double = invertibility(&block, &c).unwrap();
    let extended = invertibility(
        &block,
        &PrecisionConfig {
            mode: Mode::Extended { bits: 192 },
            ..cfg()
        },
    )
    .unwrap();
    assert_eq!(double.status, VerdictStatus::Singular);
    assert_eq!(extended.status, VerdictStatus::Singular);
}
