//! Gauss-Hermite quadrature, orthogonality tables and Hermite expansions of
//! velocity distributions.
//!
//! Every field handed to this module is *Gaussian-factored*: a distribution
//! `f(z)` is passed as `g(z) = f(z) exp(z.z)`, so that integrals against
//! `exp(-z.z)` become plain weighted sums over the tensor-product nodes.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hermite::{factorial_f64, hermite_phys, hermite_prob, HermiteConvention};
use crate::symtensor::{canonical_indices, inner, perm_delta, MultiIndex, SymTensor};

pub const MAX_ORDER: usize = 64;

/// Highest rank covered by the orthogonality tables.
pub const MAX_ORTHO_RANK: usize = 4;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Unified atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// Amplitude used by [`expand`]: the weight `pi^{-3/2} exp(-z.z)` has unit mass.
pub const UNIT_AMPLITUDE: f64 = 0.179_587_122_125_166_56;

/// Relative change under order doubling below which an integral is stable.
pub const STABILITY_TOLERANCE: f64 = 0.05;

/// Tensor-product Gauss-Hermite rule for integrals against `exp(-x.x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    dims: usize,
}

/// Builds the `order`-point rule in three dimensions.
///
/// Nodes are the roots of `h_order`, found by Newton iteration on the
/// orthonormal three-term recurrence from asymptotic initial guesses.
pub fn gauss_hermite_rule(order: usize) -> Result<QuadratureRule> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::OrderOutOfRange {
            order,
            max: MAX_ORDER,
        });
    }
    let n = order;
    let nf = n as f64;
    let pim4 = PI.powf(-0.25);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut z = 0.0f64;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.855_75 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            derivative = (2.0 * nf).sqrt() * p2;
            let step = p1 / derivative;
            z -= step;
            if step.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        if n % 2 == 1 && i == n / 2 {
            z = 0.0;
        }
        nodes[i] = z;
        weights[i] = 2.0 / (derivative * derivative);
    }
    // Mirror the positive half so the rule is exactly symmetric.
    for i in 0..n / 2 {
        nodes[n - 1 - i] = -nodes[i];
        weights[n - 1 - i] = weights[i];
    }
    nodes.reverse();
    weights.reverse();
    Ok(QuadratureRule {
        order,
        nodes,
        weights,
        dims: 3,
    })
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.order
    }

    /// One-dimensional abscissae in ascending order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Same nodes, tensorized over `dims` axes.
    pub fn with_dims(mut self, dims: usize) -> Result<Self> {
        if dims == 0 {
            return Err(Error::InvalidParameter("zero-dimensional rule".into()));
        }
        self.dims = dims;
        Ok(self)
    }

    /// `sum_i w_i f(x_i)`, approximating `int exp(-x^2) f(x) dx`.
    pub fn integrate_1d(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Tensor-product sum over all `order^dims` nodes, last axis fastest.
    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> f64) -> Result<f64> {
        let n = self.order;
        let mut counter = vec![0usize; self.dims];
        let mut point = vec![0.0; self.dims];
        let mut total = 0.0;
        loop {
            let mut w = 1.0;
            for (axis, &k) in counter.iter().enumerate() {
                point[axis] = self.nodes[k];
                w *= self.weights[k];
            }
            let value = f(&point);
            if !value.is_finite() {
                return Err(Error::NonFinite {
                    value,
                    point: point.clone(),
                });
            }
            total += w * value;
            match counter.iter().rposition(|&k| k + 1 < n) {
                Some(axis) => {
                    counter[axis] += 1;
                    counter[axis + 1..].iter_mut().for_each(|k| *k = 0);
                }
                None => break,
            }
        }
        Ok(total)
    }

    /// Visits every three-dimensional node with its product weight, in the
    /// same order as [`QuadratureRule::integrate`].
    pub fn for_each_node3(&self, mut f: impl FnMut([f64; 3], f64)) {
        for (a, wa) in self.nodes.iter().zip(&self.weights) {
            for (b, wb) in self.nodes.iter().zip(&self.weights) {
                for (c, wc) in self.nodes.iter().zip(&self.weights) {
                    f([*a, *b, *c], wa * wb * wc);
                }
            }
        }
    }

    pub(crate) fn require(&self, required: usize) -> Result<()> {
        if self.order < required {
            return Err(Error::InsufficientOrder {
                order: self.order,
                required,
            });
        }
        Ok(())
    }

    // Rule of twice the order, or half the order when already at the maximum.
    pub(crate) fn refinement_pair(&self) -> Result<(QuadratureRule, QuadratureRule)> {
        if 2 * self.order <= MAX_ORDER {
            Ok((self.clone(), gauss_hermite_rule(2 * self.order)?))
        } else {
            Ok((gauss_hermite_rule(self.order / 2)?, self.clone()))
        }
    }
}

/// `int exp(-z.z) g(z) dz` over three dimensions.
pub fn integrate3(g: impl Fn([f64; 3]) -> f64, rule: &QuadratureRule) -> Result<f64> {
    let mut total = 0.0;
    let mut failure = None;
    rule.for_each_node3(|z, w| {
        if failure.is_some() {
            return;
        }
        let value = g(z);
        if value.is_finite() {
            total += w * value;
        } else {
            failure = Some(Error::NonFinite {
                value,
                point: z.to_vec(),
            });
        }
    });
    match failure {
        Some(err) => Err(err),
        None => Ok(total),
    }
}

/// Table of integrals `int weight(z) A_i(z) B_j(z) dz` over canonical
/// components of two tensor-valued functions.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoTable {
    pub row_rank: usize,
    pub col_rank: usize,
    pub rows: Vec<MultiIndex>,
    pub cols: Vec<MultiIndex>,
    values: Vec<f64>,
}

impl OrthoTable {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols.len() + col]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest `|table - expected|` over all entries.
    pub fn max_deviation(&self, expected: impl Fn(&MultiIndex, &MultiIndex) -> f64) -> f64 {
        let mut worst = 0.0f64;
        for (r, i) in self.rows.iter().enumerate() {
            for (c, j) in self.cols.iter().enumerate() {
                worst = worst.max((self.get(r, c) - expected(i, j)).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

/// Accumulates `scale * sum_nodes w A(node)_i B(node)_j`, where `eval`
/// returns the pair `(A, B)` at a quadrature node.
pub(crate) fn gram_table(
    rule: &QuadratureRule,
    row_rank: usize,
    col_rank: usize,
    scale: f64,
    mut eval: impl FnMut([f64; 3]) -> (SymTensor, SymTensor),
) -> OrthoTable {
    let rows: Vec<_> = canonical_indices(3, row_rank).collect();
    let cols: Vec<_> = canonical_indices(3, col_rank).collect();
    let mut values = vec![0.0; rows.len() * cols.len()];
    rule.for_each_node3(|z, w| {
        let (a, b) = eval(z);
        for (r, av) in a.data().iter().enumerate() {
            for (c, bv) in b.data().iter().enumerate() {
                values[r * cols.len() + c] += w * av * bv;
            }
        }
    });
    values.iter_mut().for_each(|v| *v *= scale);
    OrthoTable {
        row_rank,
        col_rank,
        rows,
        cols,
        values,
    }
}

/// Expected orthogonality integral: `perm_delta` for the probabilist basis
/// under the normalized weight `(2 pi)^{-3/2} exp(-z.z/2)`, and
/// `2^n perm_delta` for the physicist basis under `pi^{-3/2} exp(-z.z)`.
pub fn expected_ortho(convention: HermiteConvention, i: &MultiIndex, j: &MultiIndex) -> f64 {
    if i.rank() != j.rank() {
        return 0.0;
    }
    let delta = perm_delta(i, j).expect("equal ranks") as f64;
    match convention {
        HermiteConvention::Probabilist => delta,
        HermiteConvention::Physicist => 2f64.powi(i.rank() as i32) * delta,
    }
}

/// Quadrature table of `int weight H_{m,i} H_{n,j} dz` in the given convention.
pub fn ortho_matrix(
    m_rank: usize,
    n_rank: usize,
    convention: HermiteConvention,
    rule: &QuadratureRule,
) -> Result<OrthoTable> {
    let top = m_rank.max(n_rank);
    if top > MAX_ORTHO_RANK {
        return Err(Error::RankOutOfRange {
            rank: top,
            max: MAX_ORTHO_RANK,
        });
    }
    rule.require(2 * top + 2)?;
    let scale = PI.powf(-1.5);
    let table = match convention {
        HermiteConvention::Physicist => gram_table(rule, m_rank, n_rank, scale, |z| {
            let b = hermite_phys(top, z);
            (b.values[m_rank].clone(), b.values[n_rank].clone())
        }),
        // z = sqrt(2) x turns the normalized weight into pi^{-3/2} exp(-x.x).
        HermiteConvention::Probabilist => gram_table(rule, m_rank, n_rank, scale, |x| {
            let b = hermite_prob(top, x.map(|c| c * std::f64::consts::SQRT_2));
            (b.values[m_rank].clone(), b.values[n_rank].clone())
        }),
    };
    Ok(table)
}

/// Number density, mass, temperature and drift of a Maxwellian weight, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    pub density: f64,
    pub mass: f64,
    pub temperature: f64,
    pub mean_velocity: [f64; 3],
}

impl WeightSpec {
    pub fn new(density: f64, mass: f64, temperature: f64, mean_velocity: [f64; 3]) -> Result<Self> {
        for (name, value) in [
            ("density", density),
            ("mass", mass),
            ("temperature", temperature),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if mean_velocity.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "mean velocity must be finite".into(),
            ));
        }
        Ok(Self {
            density,
            mass,
            temperature,
            mean_velocity,
        })
    }

    /// `sqrt(2 k_B T / m)`.
    pub fn thermal_speed(&self) -> f64 {
        (2.0 * BOLTZMANN * self.temperature / self.mass).sqrt()
    }

    /// `z = v sqrt(m / 2 k_B T)`.
    pub fn dimensionless(&self, v: [f64; 3]) -> [f64; 3] {
        let s = self.thermal_speed();
        v.map(|c| c / s)
    }

    /// Dimensionless drift `z_av`.
    pub fn dimensionless_drift(&self) -> [f64; 3] {
        self.dimensionless(self.mean_velocity)
    }

    /// Displaced Maxwellian `n (m / 2 pi k_B T)^{3/2} exp(-m |v - v_av|^2 / 2 k_B T)`.
    pub fn weight(&self, v: [f64; 3]) -> f64 {
        let kt = BOLTZMANN * self.temperature;
        let norm = (self.mass / (2.0 * PI * kt)).powf(1.5);
        let sq: f64 = v
            .iter()
            .zip(&self.mean_velocity)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        self.density * norm * (-self.mass * sq / (2.0 * kt)).exp()
    }
}

/// Result of the order-doubling integrability probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    /// `int exp(-z.z) |g|^2 dz` at the base order.
    pub value: f64,
    /// The same integral at the refined order.
    pub refined: f64,
    pub admissible: bool,
}

/// Probes whether `int exp(-z.z) |g|^2 dz` is finite by comparing the rule
/// against one of twice its order.
pub fn l2_admissible(g: impl Fn([f64; 3]) -> f64, rule: &QuadratureRule) -> Result<Admissibility> {
    let (coarse, fine) = rule.refinement_pair()?;
    let square = |z: [f64; 3]| {
        let v = g(z);
        v * v
    };
    let value = integrate3(square, &coarse).unwrap_or(f64::INFINITY);
    let refined = integrate3(square, &fine).unwrap_or(f64::INFINITY);
    Ok(Admissibility {
        value,
        refined,
        admissible: is_stable(value, refined),
    })
}

pub(crate) fn is_stable(value: f64, refined: f64) -> bool {
    if !(value.is_finite() && refined.is_finite()) {
        return false;
    }
    let scale = value.abs().max(refined.abs());
    scale < f64::MIN_POSITIVE || (value - refined).abs() <= STABILITY_TOLERANCE * scale
}

/// Truncated Hermite series `f(z) = f0 exp(-z.z) sum_n (a_n, H_n(z))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCoefficients {
    pub max_rank: usize,
    pub coeffs: Vec<SymTensor>,
    pub amplitude: f64,
    /// Set by [`expand`]; `None` for hand-built series.
    pub admissibility: Option<Admissibility>,
}

impl ExpansionCoefficients {
    pub fn new(amplitude: f64, coeffs: Vec<SymTensor>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter(
                "at least a rank-0 coefficient is required".into(),
            ));
        }
        for (n, c) in coeffs.iter().enumerate() {
            if c.rank() != n || c.dim() != 3 {
                return Err(Error::InvalidParameter(format!(
                    "coefficient {n} has rank {} and dimension {}",
                    c.rank(),
                    c.dim()
                )));
            }
        }
        Ok(Self {
            max_rank: coeffs.len() - 1,
            coeffs,
            amplitude,
            admissibility: None,
        })
    }

    /// Pure weight: `a_0 = 1`, all higher coefficients zero.
    pub fn maxwellian(amplitude: f64, max_rank: usize) -> Self {
        let mut coeffs: Vec<_> = (0..=max_rank)
            .map(|n| SymTensor::zeros(3, n).expect("dimension 3"))
            .collect();
        coeffs[0] = SymTensor::scalar(3, 1.0).expect("dimension 3");
        Self::new(amplitude, coeffs).expect("well-formed")
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility.is_none_or(|a| a.admissible)
    }

    /// `f0 sum_{n <= upto} (a_n, H_n(z))`, the series without its Gaussian.
    pub fn series_value(&self, z: [f64; 3], upto: usize) -> f64 {
        let upto = upto.min(self.max_rank);
        let basis = hermite_phys(upto, z);
        let sum: f64 = self.coeffs[..=upto]
            .iter()
            .zip(&basis.values)
            .map(|(a, h)| inner(a, h).expect("matching shapes"))
            .sum();
        self.amplitude * sum
    }

    /// Largest absolute coefficient difference over common ranks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.max_abs_diff(b).expect("matching shapes"))
            .fold(0.0, f64::max)
    }
}

/// Projects a Gaussian-factored field onto `H_0..H_N` with amplitude
/// `pi^{-3/2}`.
pub fn expand(
    g: impl Fn([f64; 3]) -> f64,
    max_rank: usize,
    rule: &QuadratureRule,
) -> Result<ExpansionCoefficients> {
    expand_with_amplitude(g, max_rank, UNIT_AMPLITUDE, rule)
}

/// `a_m[i] = int f H_{m,i} dz / (f0 pi^{3/2} 2^m m!)`.
pub fn expand_with_amplitude(
    g: impl Fn([f64; 3]) -> f64,
    max_rank: usize,
    amplitude: f64,
    rule: &QuadratureRule,
) -> Result<ExpansionCoefficients> {
    if !(amplitude.is_finite() && amplitude != 0.0) {
        return Err(Error::InvalidParameter(format!(
            "amplitude must be finite and nonzero, got {amplitude}"
        )));
    }
    rule.require(max_rank + 1)?;
    let admissibility = l2_admissible(&g, rule)?;
    let mut sums: Vec<Vec<f64>> = (0..=max_rank)
        .map(|n| vec![0.0; crate::symtensor::component_count(3, n)])
        .collect();
    let mut failure = None;
    rule.for_each_node3(|z, w| {
        if failure.is_some() {
            return;
        }
        let value = g(z);
        if !value.is_finite() {
            failure = Some(Error::NonFinite {
                value,
                point: z.to_vec(),
            });
            return;
        }
        let basis = hermite_phys(max_rank, z);
        for (acc, h) in sums.iter_mut().zip(&basis.values) {
            for (a, hv) in acc.iter_mut().zip(h.data()) {
                *a += w * value * hv;
            }
        }
    });
    if let Some(err) = failure {
        return Err(err);
    }
    let coeffs = sums
        .into_iter()
        .enumerate()
        .map(|(m, acc)| {
            let norm = amplitude * PI.powf(1.5) * 2f64.powi(m as i32) * factorial_f64(m);
            SymTensor::from_data(3, m, acc.into_iter().map(|v| v / norm).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = ExpansionCoefficients::new(amplitude, coeffs)?;
    out.admissibility = Some(admissibility);
    Ok(out)
}

/// `f0 exp(-z.z) sum_n (a_n, H_n(z))`.
pub fn reconstruct(c: &ExpansionCoefficients, z: [f64; 3]) -> f64 {
    let sq: f64 = z.iter().map(|v| v * v).sum();
    (-sq).exp() * c.series_value(z, c.max_rank)
}

/// Weighted L2 errors `e_N = ||g - g_N||` for `N = 0..=n_max`, where `g_N` is
/// the Gaussian-factored reconstruction from ranks up to `N`.
pub fn truncation_error(
    g: impl Fn([f64; 3]) -> f64,
    n_max: usize,
    rule: &QuadratureRule,
) -> Result<Vec<f64>> {
    let coeffs = expand(&g, n_max, rule)?;
    let mut squares = vec![0.0; n_max + 1];
    rule.for_each_node3(|z, w| {
        let value = g(z);
        let basis = hermite_phys(n_max, z);
        let mut partial = 0.0;
        for (n, (a, h)) in coeffs.coeffs.iter().zip(&basis.values).enumerate() {
            partial += coeffs.amplitude * inner(a, h).expect("matching shapes");
            let r = value - partial;
            squares[n] += w * r * r;
        }
    });
    Ok(squares.into_iter().map(f64::sqrt).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_pi() -> f64 {
        PI.sqrt()
    }

    #[test]
    fn unit_amplitude_constant() {
        assert!((UNIT_AMPLITUDE - PI.powf(-1.5)).abs() < 1e-17);
    }

    #[test]
    fn order_one_and_two() {
        let r = gauss_hermite_rule(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - sqrt_pi()).abs() < 1e-15);

        let r = gauss_hermite_rule(2).unwrap();
        let x = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.nodes()[0] + x).abs() < 1e-15);
        assert!((r.nodes()[1] - x).abs() < 1e-15);
        for w in r.weights() {
            assert!((w - sqrt_pi() / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn order_out_of_range() {
        assert!(matches!(
            gauss_hermite_rule(0),
            Err(Error::OrderOutOfRange { .. })
        ));
        assert!(matches!(
            gauss_hermite_rule(65),
            Err(Error::OrderOutOfRange { .. })
        ));
    }

    #[test]
    fn three_dimensional_moments() {
        let r = gauss_hermite_rule(8).unwrap();
        let p32 = PI.powf(1.5);
        assert!((integrate3(|_| 1.0, &r).unwrap() - p32).abs() < 1e-12 * p32);
        assert!((integrate3(|z| z[0] * z[0], &r).unwrap() - p32 / 2.0).abs() < 1e-12 * p32);
        assert!(integrate3(|z| z[0], &r).unwrap().abs() < 1e-14);
    }

    #[test]
    fn integrate_reports_non_finite_point() {
        let r = gauss_hermite_rule(3).unwrap();
        let err = integrate3(|z| if z[2] > 1.0 { f64::NAN } else { 1.0 }, &r).unwrap_err();
        match err {
            Error::NonFinite { point, .. } => assert!(point[2] > 1.0),
            other => panic!("unexpected {other:?}"),
        }
        let err = r.integrate(|_| f64::INFINITY).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn generic_integrate_matches_three_dimensional_loop() {
        let r = gauss_hermite_rule(5).unwrap();
        let f = |z: [f64; 3]| (z[0] - 0.3 * z[1]).cos() + z[2] * z[2];
        let a = integrate3(f, &r).unwrap();
        let b = r.integrate(|z| f([z[0], z[1], z[2]])).unwrap();
        assert_eq!(a, b);
        let six = r.clone().with_dims(6).unwrap().integrate(|_| 1.0).unwrap();
        assert!((six - PI.powi(3)).abs() < 1e-12 * PI.powi(3));
    }

    #[test]
    fn ortho_preconditions() {
        let r = gauss_hermite_rule(6).unwrap();
        assert!(matches!(
            ortho_matrix(3, 3, HermiteConvention::Physicist, &r),
            Err(Error::InsufficientOrder { required: 8, .. })
        ));
        let r = gauss_hermite_rule(12).unwrap();
        assert!(matches!(
            ortho_matrix(5, 1, HermiteConvention::Physicist, &r),
            Err(Error::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn ortho_examples() {
        let r = gauss_hermite_rule(8).unwrap();
        let t = ortho_matrix(1, 1, HermiteConvention::Probabilist, &r).unwrap();
        assert!((t.get(0, 0) - 1.0).abs() < 1e-12);
        let t = ortho_matrix(1, 2, HermiteConvention::Probabilist, &r).unwrap();
        assert!(t.max_abs() < 1e-12);
        let t = ortho_matrix(2, 2, HermiteConvention::Physicist, &r).unwrap();
        assert!((t.get(0, 0) - 8.0).abs() < 1e-10);
    }

    #[test]
    fn weight_spec_validation_and_scaling() {
        assert!(WeightSpec::new(1.0, 0.0, 300.0, [0.0; 3]).is_err());
        assert!(WeightSpec::new(1.0, 1.0, -3.0, [0.0; 3]).is_err());
        assert!(WeightSpec::new(0.0, 1.0, 3.0, [0.0; 3]).is_err());
        let m = 16.0 * ATOMIC_MASS_UNIT;
        let w = WeightSpec::new(1e15, m, 1000.0, [100.0, 0.0, 0.0]).unwrap();
        let s = w.thermal_speed();
        let z = w.dimensionless([s, -2.0 * s, 0.0]);
        assert!((z[0] - 1.0).abs() < 1e-15 && (z[1] + 2.0).abs() < 1e-15);
        // the weight peaks at the drift velocity with the Maxwellian normalization
        let peak = w.weight([100.0, 0.0, 0.0]);
        let expected = 1e15 * (m / (2.0 * PI * BOLTZMANN * 1000.0)).powf(1.5);
        assert!((peak - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn zero_field_is_admissible() {
        let r = gauss_hermite_rule(6).unwrap();
        let a = l2_admissible(|_| 0.0, &r).unwrap();
        assert!(a.admissible);
        assert_eq!(a.value, 0.0);
    }

    #[test]
    fn maxwellian_expands_to_itself() {
        let r = gauss_hermite_rule(8).unwrap();
        let c = expand(|_| UNIT_AMPLITUDE, 4, &r).unwrap();
        assert!(c.is_admissible());
        assert!((c.coeffs[0].data()[0] - 1.0).abs() < 1e-12);
        for a in &c.coeffs[1..] {
            assert!(a.max_abs() < 1e-8);
        }
    }

    #[test]
    fn all_zero_coefficients_reconstruct_to_zero() {
        let mut c = ExpansionCoefficients::maxwellian(2.0, 2);
        c.coeffs[0] = SymTensor::scalar(3, 0.0).unwrap();
        assert_eq!(reconstruct(&c, [0.3, 0.2, -1.0]), 0.0);
        let m = ExpansionCoefficients::maxwellian(2.0, 2);
        let z = [0.3, 0.2, -1.0];
        let expected = 2.0 * (-(0.09 + 0.04 + 1.0f64)).exp();
        assert!((reconstruct(&m, z) - expected).abs() < 1e-15);
    }

    #[test]
    fn expansion_coefficient_shapes_are_checked() {
        let bad = vec![
            SymTensor::scalar(3, 1.0).unwrap(),
            SymTensor::zeros(3, 2).unwrap(),
        ];
        assert!(ExpansionCoefficients::new(1.0, bad).is_err());
    }
}
