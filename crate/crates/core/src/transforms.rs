//! Scaling and translation of the dimensionless velocity axes.
//!
//! A series in `z` can be re-expanded in `z' = alpha (z - z0)` only when
//! `alpha^2 < 2`. With `alpha^2 = T / T_s` this bounds the temperature ratio
//! of a binary mixture. Translations relate the polynomials of two frames by
//! a binomial sum of symmetrized products with powers of the frame offset.

use crate::error::{Error, Result};
use crate::hermite::{factorial_f64, hermite_phys};
use crate::quadrature::{gram_table, integrate3, is_stable, OrthoTable, QuadratureRule};
use crate::symtensor::{binomial, outer_power, sym_product, SymTensor};

/// Strict upper bound on `alpha^2`.
pub const ALPHA_SQ_LIMIT: f64 = 2.0;

/// Growth factor under order doubling that marks a probe integral divergent.
pub const DIVERGENCE_GROWTH: f64 = 10.0;

pub const MAX_TRANSLATION_RANK: usize = 6;

/// Default coarse order for the convergence probe. An offset centre widens
/// the integrand, so orders below this can leave finite cases unresolved.
pub const PROBE_ORDER: usize = 32;

/// `z' = alpha (z - z0)` with the amplitude ratio `f0 / f0'` carried along.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingMap {
    pub alpha: f64,
    pub z0: [f64; 3],
    pub amplitude_ratio: f64,
}

impl ScalingMap {
    pub fn new(alpha: f64, z0: [f64; 3], amplitude_ratio: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            alpha,
            z0,
            amplitude_ratio,
        })
    }

    pub fn apply(&self, z: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|k| self.alpha * (z[k] - self.z0[k]))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "scale factor must be positive and finite, got {alpha}"
        )))
    }
}

fn check_temperature(name: &str, t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {t}"
        )))
    }
}

/// `alpha^2 < 2`; the boundary is inadmissible.
pub fn scaling_admissible(alpha: f64) -> Result<bool> {
    check_alpha(alpha)?;
    Ok(alpha * alpha < ALPHA_SQ_LIMIT)
}

/// A scale factor derived from a temperature pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleFactor {
    pub alpha: f64,
    pub alpha_sq: f64,
    // `T < 2 T_s`, decided before the ratio is rounded.
    below_limit: bool,
}

impl ScaleFactor {
    pub fn admissible(&self) -> bool {
        self.below_limit
    }
}

/// `alpha = sqrt(T / T_s)`, where `T_s` is the temperature of the species
/// whose velocities are scaled.
pub fn alpha_from_temperatures(t: f64, t_s: f64) -> Result<ScaleFactor> {
    check_temperature("T", t)?;
    check_temperature("T_s", t_s)?;
    let alpha_sq = t / t_s;
    Ok(ScaleFactor {
        alpha: alpha_sq.sqrt(),
        alpha_sq,
        below_limit: t < ALPHA_SQ_LIMIT * t_s,
    })
}

/// Open interval of common temperatures `T` with `T_i / 2 < T < 2 T_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureWindow {
    pub lower: f64,
    pub upper: f64,
}

impl TemperatureWindow {
    pub fn contains(&self, t: f64) -> bool {
        self.lower < t && t < self.upper
    }
}

/// Temperatures to and from which both species can be rescaled. `None` when
/// the hot species is at least four times the cold one.
pub fn temperature_window(t_hot: f64, t_cold: f64) -> Result<Option<TemperatureWindow>> {
    check_temperature("T_i", t_hot)?;
    check_temperature("T_n", t_cold)?;
    if t_hot < t_cold {
        return Err(Error::InvalidParameter(format!(
            "expected T_i >= T_n, got T_i = {t_hot}, T_n = {t_cold}"
        )));
    }
    // Halving and doubling are exact, so lower < upper iff T_i < 4 T_n.
    let lower = 0.5 * t_hot;
    let upper = 2.0 * t_cold;
    Ok((lower < upper).then_some(TemperatureWindow { lower, upper }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    Finite,
    Divergent,
    /// Neither stable nor clearly growing at the probed orders.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeReport {
    pub value: f64,
    pub refined: f64,
    pub class: Convergence,
}

/// Probes `int exp((z', z') - 2 (z, z)) dz` at the rule's order and at twice
/// that order: stable within 5% is finite, growth by more than 10x (or
/// overflow) is divergent.
pub fn convergence_probe(map: &ScalingMap, rule: &QuadratureRule) -> Result<ProbeReport> {
    let (coarse, fine) = rule.refinement_pair()?;
    let factored = |z: [f64; 3]| {
        let zp = map.apply(z);
        let zp_sq: f64 = zp.iter().map(|v| v * v).sum();
        let z_sq: f64 = z.iter().map(|v| v * v).sum();
        (zp_sq - z_sq).exp()
    };
    let value = integrate3(factored, &coarse).unwrap_or(f64::INFINITY);
    let refined = integrate3(factored, &fine).unwrap_or(f64::INFINITY);
    let class = if is_stable(value, refined) {
        Convergence::Finite
    } else if !refined.is_finite() || refined > DIVERGENCE_GROWTH * value {
        Convergence::Divergent
    } else {
        Convergence::Inconclusive
    };
    Ok(ProbeReport {
        value,
        refined,
        class,
    })
}

/// [`convergence_probe`] at [`PROBE_ORDER`].
pub fn probe_scaling(map: &ScalingMap) -> Result<ProbeReport> {
    convergence_probe(map, &crate::quadrature::gauss_hermite_rule(PROBE_ORDER)?)
}

/// `z_0 = z - z00` (arbitrary origin) and `z_r = z - z_a` (mean frame).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationMap {
    pub z00: [f64; 3],
    pub za: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Express `H_n(z_0)` through `H_p(z_r)`.
    RelativeToOrigin,
    /// Express `H_p(z_r)` through `H_n(z_0)`.
    OriginToRelative,
}

impl TranslationMap {
    pub fn origin_coords(&self, z: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|k| z[k] - self.z00[k])
    }

    pub fn relative_coords(&self, z: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|k| z[k] - self.za[k])
    }

    /// Offset added to the source-frame coordinates to reach the target frame.
    pub fn offset(&self, direction: Direction) -> [f64; 3] {
        match direction {
            Direction::RelativeToOrigin => [0, 1, 2].map(|k| self.za[k] - self.z00[k]),
            Direction::OriginToRelative => [0, 1, 2].map(|k| self.z00[k] - self.za[k]),
        }
    }
}

/// `C(n, p) sym(H_p (x) shift_power)` with `shift_power = (2 d)^{(x)(n-p)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationTerm {
    pub binomial: u64,
    pub partner_rank: usize,
    pub shift_power: SymTensor,
}

/// `H_n` of the target frame as a binomial sum over source-frame polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationSeries {
    pub rank: usize,
    pub direction: Direction,
    pub terms: Vec<TranslationTerm>,
}

impl TranslationSeries {
    /// Sums the series given the source-frame polynomials `partner[p]`, `p <= rank`.
    pub fn assemble(&self, partner: &[SymTensor]) -> Result<SymTensor> {
        if partner.len() <= self.rank {
            return Err(Error::RankOutOfRange {
                rank: self.rank,
                max: partner.len().saturating_sub(1),
            });
        }
        let mut total = SymTensor::zeros(3, self.rank)?;
        for term in &self.terms {
            let product = sym_product(&partner[term.partner_rank], &term.shift_power)?;
            total = total.try_add(&product.scale(term.binomial as f64))?;
        }
        Ok(total)
    }
}

fn series_for_offset(
    n: usize,
    offset: [f64; 3],
    direction: Direction,
) -> Result<TranslationSeries> {
    let doubled = offset.map(|c| 2.0 * c);
    let terms = (0..=n)
        .map(|p| {
            Ok(TranslationTerm {
                binomial: binomial(n, p),
                partner_rank: p,
                shift_power: outer_power(&doubled, n - p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TranslationSeries {
        rank: n,
        direction,
        terms,
    })
}

/// Binomial series relating the two frames of `map` at rank `n <= 6`.
pub fn translate_basis(
    n: usize,
    map: &TranslationMap,
    direction: Direction,
) -> Result<TranslationSeries> {
    if n > MAX_TRANSLATION_RANK {
        return Err(Error::RankOutOfRange {
            rank: n,
            max: MAX_TRANSLATION_RANK,
        });
    }
    series_for_offset(n, map.offset(direction), direction)
}

// Assembles ranks 0..=n of the target frame from source-frame values.
fn assemble_all(
    n: usize,
    map: &TranslationMap,
    direction: Direction,
    source: &[SymTensor],
) -> Result<Vec<SymTensor>> {
    (0..=n)
        .map(|k| translate_basis(k, map, direction)?.assemble(source))
        .collect()
}

fn relative_error(a: &SymTensor, b: &SymTensor) -> Result<f64> {
    Ok(a.max_abs_diff(b)? / b.max_abs().max(1.0))
}

/// Relative gap between the assembled `H_n(z_0)` (from `H_p(z_r)`) and the
/// directly evaluated `H_n(z_0)` at absolute velocity `z`.
pub fn translation_residual(n: usize, map: &TranslationMap, z: [f64; 3]) -> Result<f64> {
    let source = hermite_phys(n, map.relative_coords(z));
    let direct = hermite_phys(n, map.origin_coords(z));
    let assembled =
        translate_basis(n, map, Direction::RelativeToOrigin)?.assemble(&source.values)?;
    relative_error(&assembled, &direct.values[n])
}

/// Applies the forward relation then the inverse one to `H_0..H_n(z_r)` and
/// reports the largest relative residual against the starting tensors.
pub fn translation_roundtrip(n: usize, map: &TranslationMap, z: [f64; 3]) -> Result<f64> {
    let start = hermite_phys(n, map.relative_coords(z));
    let origin = assemble_all(n, map, Direction::RelativeToOrigin, &start.values)?;
    let back = assemble_all(n, map, Direction::OriginToRelative, &origin)?;
    back.iter()
        .zip(&start.values)
        .map(|(b, s)| relative_error(b, s))
        .try_fold(0.0f64, |acc, r| Ok(acc.max(r?)))
}

/// Quadrature table of `int pi^{-3/2} exp(-z.z) H_n(z - s)_i H_m(z)_j dz`.
pub fn orthogonality_after_translation(
    n: usize,
    m: usize,
    shift: [f64; 3],
    rule: &QuadratureRule,
) -> Result<OrthoTable> {
    let top = n.max(m);
    rule.require(top + 1)?;
    let scale = std::f64::consts::PI.powf(-1.5);
    Ok(gram_table(rule, n, m, scale, |z| {
        let shifted = [0, 1, 2].map(|k| z[k] - shift[k]);
        let a = hermite_phys(n, shifted).values.swap_remove(n);
        let b = hermite_phys(m, z).values.swap_remove(m);
        (a, b)
    }))
}

/// Expansion coefficients of the displaced weight `pi^{-3/2} exp(-(z - s).(z - s))`.
///
/// Only the `p = 0` term of the translated basis `H_n(u + s)` survives
/// integration against `exp(-u.u)`, leaving `a_n = (2 s)^{(x)n} / (2^n n!)`.
pub fn drift_coefficients(shift: [f64; 3], max_rank: usize) -> Result<Vec<SymTensor>> {
    (0..=max_rank)
        .map(|n| {
            let series = series_for_offset(n, shift, Direction::RelativeToOrigin)?;
            let lead = &series.terms[0];
            let norm = 2f64.powi(n as i32) * factorial_f64(n);
            Ok(lead.shift_power.scale(lead.binomial as f64 / norm))
        })
        .collect()
}
