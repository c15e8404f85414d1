use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tensor_hermite::hermite::HermiteConvention;
use tensor_hermite::mixed6::{
    com_relative_from_velocities, distribution_invariance, equivariance_residual,
    from_com_relative, species_from_velocities, to_com_relative, BlockRotation, MixedPoint,
    SpeciesPair, MAX_MIXED_RANK,
};
use tensor_hermite::quadrature::{
    expected_ortho, gauss_hermite_rule, ortho_matrix, ExpansionCoefficients, ATOMIC_MASS_UNIT,
    MAX_ORTHO_RANK, STABILITY_TOLERANCE, UNIT_AMPLITUDE,
};
use tensor_hermite::transforms::{
    convergence_probe, orthogonality_after_translation, scaling_admissible, translation_residual,
    translation_roundtrip, Convergence, ScalingMap, TranslationMap, DIVERGENCE_GROWTH,
    MAX_TRANSLATION_RANK, PROBE_ORDER,
};
use tensor_hermite::SymTensor;

use crate::report::{check, Bound, Record, Report};
use crate::{three, Cli, CliError, Command, Suite};

pub const ORTHO_TOLERANCE: f64 = 1e-8;
pub const TRANSLATION_TOLERANCE: f64 = 1e-10;
pub const ROUNDTRIP_TOLERANCE: f64 = 1e-9;
/// A cross-rank product above this shows that a shift broke orthogonality.
pub const BROKEN_THRESHOLD: f64 = 1e-3;
pub const ROTATION_TOLERANCE: f64 = 1e-14;
pub const PHYSICAL_TOLERANCE: f64 = 1e-12;
pub const EQUIVARIANCE_TOLERANCE: f64 = 1e-10;
pub const INVARIANCE_TOLERANCE: f64 = 1e-10;

pub const DEFAULT_ALPHAS: [f64; 5] = [0.5, 1.0, 1.3, 1.5, 2.0];

struct Params<'a> {
    max_rank: Option<usize>,
    quad_order: Option<usize>,
    alpha: &'a [f64],
    z0: Option<&'a [f64]>,
    ms: f64,
    msp: f64,
    temperature: f64,
    samples: usize,
}

pub fn run(cli: &Cli, suite: Suite) -> Result<Report, CliError> {
    let Command::Verify {
        max_rank,
        quad_order,
        alpha,
        z0,
        ms,
        msp,
        temperature,
        samples,
        ..
    } = &cli.command
    else {
        unreachable!("dispatched on the verify command");
    };
    let p = Params {
        max_rank: *max_rank,
        quad_order: *quad_order,
        alpha,
        z0: z0.as_deref(),
        ms: *ms,
        msp: *msp,
        temperature: *temperature,
        samples: *samples,
    };
    if p.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let config = Record::new()
        .with("seed", cli.seed)
        .with("format", format!("{:?}", cli.format).to_lowercase())
        .with("suite", format!("{suite:?}").to_lowercase());
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    match suite {
        Suite::Ortho => ortho(config, &p),
        Suite::Translate => translate(config, &p, &mut rng),
        Suite::Scale => scale(config, &p),
        Suite::Rotate => rotate(config, &p, &mut rng),
    }
}

fn limited(
    value: Option<usize>,
    default: usize,
    max: usize,
    name: &str,
) -> Result<usize, CliError> {
    let v = value.unwrap_or(default);
    if v > max {
        return Err(CliError::Usage(format!(
            "--{name} {v} exceeds the maximum {max}"
        )));
    }
    Ok(v)
}

fn ortho(mut config: Record, p: &Params) -> Result<Report, CliError> {
    let max_rank = limited(p.max_rank, MAX_ORTHO_RANK, MAX_ORTHO_RANK, "max-rank")?;
    let order = p.quad_order.unwrap_or(12);
    if order < 2 * max_rank + 2 {
        return Err(CliError::Usage(format!(
            "--quad-order {order} is below 2 * max-rank + 2 = {}",
            2 * max_rank + 2
        )));
    }
    config.push("max_rank", max_rank);
    config.push("quad_order", order);
    let rule = gauss_hermite_rule(order)?;
    let mut report = Report::new("verify", config);
    for (label, convention) in [
        ("physicist", HermiteConvention::Physicist),
        ("probabilist", HermiteConvention::Probabilist),
    ] {
        for m in 0..=max_rank {
            for n in 0..=max_rank {
                let table = ortho_matrix(m, n, convention, &rule)?;
                let dev = table.max_deviation(|i, j| expected_ortho(convention, i, j));
                report.add(check(
                    &format!("ortho {label} H{m}.H{n}"),
                    dev,
                    ORTHO_TOLERANCE,
                    Bound::Below,
                ));
            }
        }
    }
    Ok(report)
}

fn translate(mut config: Record, p: &Params, rng: &mut ChaCha8Rng) -> Result<Report, CliError> {
    let max_rank = limited(p.max_rank, 5, MAX_TRANSLATION_RANK, "max-rank")?;
    let order = p.quad_order.unwrap_or(12);
    config.push("max_rank", max_rank);
    config.push("quad_order", order);
    config.push("samples", p.samples);
    let mut worst = vec![0.0f64; max_rank + 1];
    let mut worst_trip = vec![0.0f64; max_rank + 1];
    for _ in 0..p.samples {
        let map = TranslationMap {
            z00: std::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
            za: std::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
        };
        let z: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        for n in 0..=max_rank {
            worst[n] = worst[n].max(translation_residual(n, &map, z)?);
            worst_trip[n] = worst_trip[n].max(translation_roundtrip(n, &map, z)?);
        }
    }
    let mut report = Report::new("verify", config);
    for n in 0..=max_rank {
        report.add(check(
            &format!("translate H{n}"),
            worst[n],
            TRANSLATION_TOLERANCE,
            Bound::Below,
        ));
        report.add(check(
            &format!("round-trip H{n}"),
            worst_trip[n],
            ROUNDTRIP_TOLERANCE,
            Bound::Below,
        ));
    }

    // A unit shift in a random direction must break cross-rank orthogonality.
    let top = max_rank.min(MAX_ORTHO_RANK);
    if top >= 1 {
        let rule = gauss_hermite_rule(order)?;
        let dir: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let norm = dir
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
            .max(f64::MIN_POSITIVE);
        let shift = dir.map(|v| v / norm);
        let mut largest = 0.0f64;
        for n in 0..=top {
            for m in 0..=top {
                if n != m {
                    largest =
                        largest.max(orthogonality_after_translation(n, m, shift, &rule)?.max_abs());
                }
            }
        }
        report.add(
            check(
                "unit shift breaks orthogonality",
                largest,
                BROKEN_THRESHOLD,
                Bound::Above,
            )
            .with("shift", shift),
        );
    }
    Ok(report)
}

fn scale(mut config: Record, p: &Params) -> Result<Report, CliError> {
    let alphas = if p.alpha.is_empty() {
        DEFAULT_ALPHAS.to_vec()
    } else {
        p.alpha.to_vec()
    };
    let z0 = match p.z0 {
        Some(v) => three(v, "z0")?,
        None => [0.0; 3],
    };
    let order = p.quad_order.unwrap_or(PROBE_ORDER);
    config.push("alpha", alphas.clone());
    config.push("z0", z0);
    config.push("quad_order", order);
    let rule = gauss_hermite_rule(order)?;
    let mut report = Report::new("verify", config);
    for alpha in alphas {
        let admissible = scaling_admissible(alpha)?;
        let probe = convergence_probe(&ScalingMap::new(alpha, z0, 1.0)?, &rule)?;
        let (expected, residual, tolerance, bound) = if admissible {
            let scale = probe.value.abs().max(probe.refined.abs());
            let change = (probe.value - probe.refined).abs() / scale;
            (Convergence::Finite, change, STABILITY_TOLERANCE, "<")
        } else {
            (
                Convergence::Divergent,
                probe.refined / probe.value,
                DIVERGENCE_GROWTH,
                ">",
            )
        };
        let name = |c: Convergence| format!("{c:?}").to_lowercase();
        report.add(
            Record::new()
                .with("check", format!("scale alpha={alpha}"))
                .with("alpha", alpha)
                .with("alpha_sq", alpha * alpha)
                .with("value", probe.value)
                .with("refined", probe.refined)
                .with("expected", name(expected))
                .with("classification", name(probe.class))
                .with("residual", residual)
                .with("tolerance", tolerance)
                .with("bound", bound)
                .with("pass", probe.class == expected),
        );
    }
    Ok(report)
}

fn random_series(rng: &mut ChaCha8Rng) -> ExpansionCoefficients {
    let coeffs = (0..=2)
        .map(|n| {
            let tensor = SymTensor::from_fn(3, n, |_| {
                if n == 0 {
                    1.0
                } else {
                    0.2 * rng.gen_range(-1.0..1.0)
                }
            });
            tensor.expect("dimension 3")
        })
        .collect();
    ExpansionCoefficients::new(UNIT_AMPLITUDE, coeffs).expect("ranks 0..=2")
}

fn rotate(mut config: Record, p: &Params, rng: &mut ChaCha8Rng) -> Result<Report, CliError> {
    let max_rank = limited(p.max_rank, 3, MAX_MIXED_RANK, "max-rank")?;
    let pair = SpeciesPair::new(
        p.ms * ATOMIC_MASS_UNIT,
        p.msp * ATOMIC_MASS_UNIT,
        p.temperature,
    )?;
    config.push("ms_u", p.ms);
    config.push("msp_u", p.msp);
    config.push("temperature", p.temperature);
    config.push("max_rank", max_rank);
    config.push("samples", p.samples);
    let r = BlockRotation::from_pair(&pair);
    let mut report = Report::new("verify", config);

    let unit = (r.y * r.y + r.y_prime * r.y_prime - 1.0).abs();
    report.add(check(
        "y^2 + y'^2 = 1",
        unit,
        ROTATION_TOLERANCE,
        Bound::Below,
    ));
    let m = r.matrix();
    let mut involution = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            let rr: f64 = (0..6).map(|k| m[i][k] * m[k][j]).sum();
            involution = involution.max((rr - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    report.add(check(
        "R R = I",
        involution,
        ROTATION_TOLERANCE,
        Bound::Below,
    ));

    let mut trip = 0.0f64;
    let mut norm = 0.0f64;
    let mut physical = 0.0f64;
    let mut equivariance = vec![0.0f64; max_rank + 1];
    let speed_s = (2.0 * tensor_hermite::quadrature::BOLTZMANN * p.temperature / pair.m_s).sqrt();
    let speed_sp = (2.0 * tensor_hermite::quadrature::BOLTZMANN * p.temperature / pair.m_sp).sqrt();
    for _ in 0..p.samples {
        let x: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let point = MixedPoint::species([x[3], x[4], x[5]], [x[0], x[1], x[2]]);
        let cg = to_com_relative(&point, &pair)?;
        let back = from_com_relative(&cg, &pair)?;
        for (b, a) in back.coords.iter().zip(&x) {
            trip = trip.max((b - a).abs());
        }
        let sq = |c: &[f64; 6]| c.iter().map(|v| v * v).sum::<f64>();
        norm = norm.max((sq(&cg.coords) - sq(&x)).abs() / sq(&x).max(1.0));

        let v_s = std::array::from_fn(|_| speed_s * rng.gen_range(-2.0..2.0));
        let v_sp = std::array::from_fn(|_| speed_sp * rng.gen_range(-2.0..2.0));
        let direct = com_relative_from_velocities(v_s, v_sp, &pair);
        let rotated = to_com_relative(&species_from_velocities(v_s, v_sp, &pair), &pair)?;
        for k in 0..6 {
            physical = physical.max((direct.coords[k] - rotated.coords[k]).abs());
        }
        for (n, worst) in equivariance.iter_mut().enumerate() {
            *worst = worst.max(equivariance_residual(n, &x, &pair)?);
        }
    }
    report.add(check(
        "frame round trip",
        trip,
        ROTATION_TOLERANCE,
        Bound::Below,
    ));
    report.add(check(
        "norm preservation",
        norm,
        ROTATION_TOLERANCE * 10.0,
        Bound::Below,
    ));
    report.add(check(
        "matrix vs physical formulas",
        physical,
        PHYSICAL_TOLERANCE,
        Bound::Below,
    ));
    for (n, worst) in equivariance.iter().enumerate() {
        report.add(check(
            &format!("equivariance H{n}"),
            *worst,
            EQUIVARIANCE_TOLERANCE,
            Bound::Below,
        ));
    }

    let f_s = random_series(rng);
    let f_sp = random_series(rng);
    let points: Vec<MixedPoint> = (0..p.samples)
        .map(|_| {
            MixedPoint::species(
                std::array::from_fn(|_| rng.gen_range(-2.0..2.0)),
                std::array::from_fn(|_| rng.gen_range(-2.0..2.0)),
            )
        })
        .collect();
    let inv = distribution_invariance(&f_s, &f_sp, &pair, &points)?;
    let relative = inv.max_residual / inv.max_abs_f.max(f64::MIN_POSITIVE);
    report.add(check(
        "distribution invariance",
        relative,
        INVARIANCE_TOLERANCE,
        Bound::Below,
    ));
    Ok(report)
}
