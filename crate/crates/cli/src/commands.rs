use tensor_hermite::hermite::{
    hermite_phys, hermite_prob, symbolic_phys, ClosedForm, MAX_SYMBOLIC_RANK,
};
use tensor_hermite::quadrature::{
    expand_with_amplitude, gauss_hermite_rule, WeightSpec, ATOMIC_MASS_UNIT, STABILITY_TOLERANCE,
};
use tensor_hermite::transforms::{alpha_from_temperatures, drift_coefficients, temperature_window};

use crate::report::{check, Bound, Record, Report};
use crate::{three, Cli, CliError, Command, Convention};

pub const MAX_BASIS_RANK: usize = 6;

/// Tolerance between quadrature and analytic drift coefficients.
const DRIFT_TOLERANCE: f64 = 1e-8;

fn base_config(cli: &Cli) -> Record {
    Record::new()
        .with("seed", cli.seed)
        .with("format", format!("{:?}", cli.format).to_lowercase())
}

pub fn basis(
    cli: &Cli,
    rank: usize,
    point: Option<&[f64]>,
    symbolic: bool,
    convention: Convention,
) -> Result<Report, CliError> {
    let mut config = base_config(cli).with("rank", rank);
    if symbolic {
        if convention != Convention::Physicist {
            return Err(CliError::Usage(
                "symbolic tables are available for the physicist convention only".into(),
            ));
        }
        if rank > MAX_SYMBOLIC_RANK {
            return Err(CliError::Usage(format!(
                "symbolic rank {rank} exceeds the maximum {MAX_SYMBOLIC_RANK}"
            )));
        }
        config.push("mode", "symbolic");
        let form = ClosedForm::of_rank(rank)?;
        let mut report = Report::new("basis", config);
        report.add(
            Record::new()
                .with("rank", rank)
                .with("closed_form", form.to_string()),
        );
        for t in &form.terms {
            report.add(
                Record::new()
                    .with("rank", rank)
                    .with("z_count", t.z_count)
                    .with("delta_count", t.delta_count)
                    .with("coeff", t.coeff),
            );
        }
        let table = symbolic_phys(rank).pop().expect("rank present");
        for (index, poly) in table.iter() {
            report.add(
                Record::new()
                    .with("rank", rank)
                    .with("index", index.entries().to_vec())
                    .with("polynomial", poly.to_string()),
            );
        }
        return Ok(report);
    }

    if rank > MAX_BASIS_RANK {
        return Err(CliError::Usage(format!(
            "rank {rank} exceeds the maximum {MAX_BASIS_RANK}"
        )));
    }
    let z = match point {
        Some(p) => three(p, "point")?,
        None => [0.0; 3],
    };
    config.push("mode", "numeric");
    config.push("convention", format!("{convention:?}").to_lowercase());
    config.push("point", z);
    let values = match convention {
        Convention::Physicist => hermite_phys(rank, z),
        Convention::Probabilist => hermite_prob(rank, z),
    };
    let tensor = &values.values[rank];
    if !tensor.is_finite() {
        return Err(CliError::Numeric(format!(
            "non-finite component of H_{rank} at {z:?}"
        )));
    }
    let mut report = Report::new("basis", config);
    for (index, v) in tensor.iter() {
        report.add(
            Record::new()
                .with("rank", rank)
                .with("index", index.entries().to_vec())
                .with("multiplicity", index.multiplicity())
                .with("value", *v),
        );
    }
    Ok(report)
}

pub fn window(cli: &Cli, t_i: f64, t_n: f64) -> Result<Report, CliError> {
    let config = base_config(cli).with("ti", t_i).with("tn", t_n);
    let mut report = Report::new("window", config);
    let row = match temperature_window(t_i, t_n)? {
        Some(w) => Record::new()
            .with("empty", false)
            .with("lower", w.lower)
            .with("upper", w.upper)
            .with("message", format!("({}, {})", w.lower, w.upper)),
        None => Record::new().with("empty", true).with(
            "message",
            "EMPTY: collision-term criterion violated (T_i ≥ 4·T_n)",
        ),
    };
    report.add(row);
    Ok(report)
}

pub fn expand(cli: &Cli) -> Result<Report, CliError> {
    let Command::Expand {
        mass,
        temperature,
        field_temperature,
        drift,
        density,
        max_rank,
        quad_order,
    } = &cli.command
    else {
        unreachable!("dispatched on the expand command");
    };
    let drift = match drift {
        Some(d) => three(d, "drift")?,
        None => [0.0; 3],
    };
    let t_field = field_temperature.unwrap_or(*temperature);
    let spec = WeightSpec::new(*density, mass * ATOMIC_MASS_UNIT, *temperature, drift)?;
    // The weight rests at the origin; the expanded field carries the drift.
    let rest = WeightSpec::new(*density, spec.mass, *temperature, [0.0; 3])?;
    let ratio = alpha_from_temperatures(*temperature, t_field)?;
    let s = spec.dimensionless_drift();
    let amplitude = rest.weight([0.0; 3]);
    let alpha_sq = ratio.alpha_sq;
    let g = move |z: [f64; 3]| {
        let far: f64 = (0..3).map(|k| (z[k] - s[k]) * (z[k] - s[k])).sum();
        let near: f64 = z.iter().map(|v| v * v).sum();
        amplitude * alpha_sq.powf(1.5) * (near - alpha_sq * far).exp()
    };

    let config = base_config(cli)
        .with("mass_u", *mass)
        .with("temperature", *temperature)
        .with("field_temperature", t_field)
        .with("drift", drift)
        .with("density", *density)
        .with("max_rank", *max_rank)
        .with("quad_order", *quad_order)
        .with("thermal_speed", spec.thermal_speed())
        .with("dimensionless_drift", s)
        .with("alpha_sq", alpha_sq)
        .with("amplitude", amplitude);
    let rule = gauss_hermite_rule(*quad_order)?;
    let coeffs = expand_with_amplitude(g, *max_rank, amplitude, &rule)?;
    let mut report = Report::new("expand", config);

    if let Some(a) = coeffs.admissibility {
        let scale = a.value.abs().max(a.refined.abs());
        let change = if scale > 0.0 {
            (a.value - a.refined).abs() / scale
        } else {
            0.0
        };
        report.add(check(
            "l2-admissible",
            change,
            STABILITY_TOLERANCE,
            Bound::Below,
        ));
    }
    if t_field == *temperature {
        let analytic = drift_coefficients(s, *max_rank)?;
        let gap = coeffs
            .coeffs
            .iter()
            .zip(&analytic)
            .map(|(a, b)| a.max_abs_diff(b))
            .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))?;
        report.add(check("drift-series", gap, DRIFT_TOLERANCE, Bound::Below));
    }
    for (rank, tensor) in coeffs.coeffs.iter().enumerate() {
        if !tensor.is_finite() {
            return Err(CliError::Numeric(format!(
                "non-finite coefficient at rank {rank}"
            )));
        }
        for (index, v) in tensor.iter() {
            report.add(
                Record::new()
                    .with("rank", rank)
                    .with("index", index.entries().to_vec())
                    .with("value", *v),
            );
        }
    }
    Ok(report)
}
