//! Two-species coordinates and the six-dimensional mixed polynomials.
//!
//! Stacked species velocities `(z_s', z_s)` (species `s'` in the upper block)
//! and the centre-of-mass/relative pair `(c, g)` are related by the symmetric
//! involution
//!
//! ```text
//! R = [[ y I,  y' I],
//!      [y' I,  -y I]],   y^2 = mu / m_s,  y'^2 = mu / m_s'.
//! ```

use crate::error::{Error, Result};
use crate::hermite::recurrence;
use crate::quadrature::{ExpansionCoefficients, BOLTZMANN};
use crate::symtensor::{binomial, inner, MultiIndex, SymTensor};

/// Highest mixed rank. Products of two rank-2 species series reach rank 4.
pub const MAX_MIXED_RANK: usize = 4;

/// Highest per-species rank accepted by [`distribution_invariance`].
pub const MAX_SPECIES_RANK: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeciesPair {
    pub m_s: f64,
    pub m_sp: f64,
    pub temperature: f64,
}

impl SpeciesPair {
    pub fn new(m_s: f64, m_sp: f64, temperature: f64) -> Result<Self> {
        for (name, v) in [("m_s", m_s), ("m_s'", m_sp), ("T", temperature)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            m_s,
            m_sp,
            temperature,
        })
    }

    /// Reduced mass.
    pub fn mu(&self) -> f64 {
        self.m_s * self.m_sp / (self.m_s + self.m_sp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockRotation {
    pub y: f64,
    pub y_prime: f64,
}

impl BlockRotation {
    pub fn from_pair(pair: &SpeciesPair) -> Self {
        let total = pair.m_s + pair.m_sp;
        // mu / m_s = m_s' / M, which avoids forming mu for extreme ratios.
        Self {
            y: (pair.m_sp / total).sqrt(),
            y_prime: (pair.m_s / total).sqrt(),
        }
    }

    /// The 6x6 matrix, row-major.
    pub fn matrix(&self) -> [[f64; 6]; 6] {
        let mut r = [[0.0; 6]; 6];
        for k in 0..3 {
            r[k][k] = self.y;
            r[k][k + 3] = self.y_prime;
            r[k + 3][k] = self.y_prime;
            r[k + 3][k + 3] = -self.y;
        }
        r
    }

    pub fn apply(&self, x: &[f64; 6]) -> [f64; 6] {
        let r = self.matrix();
        std::array::from_fn(|i| (0..6).map(|j| r[i][j] * x[j]).sum())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// `(z_s', z_s)`.
    Species,
    /// `(c, g)`.
    ComRelative,
}

impl Frame {
    fn name(self) -> &'static str {
        match self {
            Frame::Species => "species",
            Frame::ComRelative => "com-relative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedPoint {
    pub coords: [f64; 6],
    pub frame: Frame,
}

impl MixedPoint {
    /// Stacks `z_s'` above `z_s`.
    pub fn species(z_s: [f64; 3], z_sp: [f64; 3]) -> Self {
        let mut coords = [0.0; 6];
        coords[..3].copy_from_slice(&z_sp);
        coords[3..].copy_from_slice(&z_s);
        Self {
            coords,
            frame: Frame::Species,
        }
    }

    pub fn com_relative(c: [f64; 3], g: [f64; 3]) -> Self {
        let mut coords = [0.0; 6];
        coords[..3].copy_from_slice(&c);
        coords[3..].copy_from_slice(&g);
        Self {
            coords,
            frame: Frame::ComRelative,
        }
    }

    pub fn upper(&self) -> [f64; 3] {
        [self.coords[0], self.coords[1], self.coords[2]]
    }

    pub fn lower(&self) -> [f64; 3] {
        [self.coords[3], self.coords[4], self.coords[5]]
    }

    fn expect(&self, frame: Frame) -> Result<()> {
        if self.frame == frame {
            Ok(())
        } else {
            Err(Error::FrameMismatch {
                expected: frame.name(),
                found: self.frame.name(),
            })
        }
    }
}

pub fn to_com_relative(p: &MixedPoint, pair: &SpeciesPair) -> Result<MixedPoint> {
    p.expect(Frame::Species)?;
    Ok(MixedPoint {
        coords: BlockRotation::from_pair(pair).apply(&p.coords),
        frame: Frame::ComRelative,
    })
}

pub fn from_com_relative(p: &MixedPoint, pair: &SpeciesPair) -> Result<MixedPoint> {
    p.expect(Frame::ComRelative)?;
    Ok(MixedPoint {
        coords: BlockRotation::from_pair(pair).apply(&p.coords),
        frame: Frame::Species,
    })
}

/// `(c, g)` straight from physical velocities in SI units:
/// `c = (m_s v_s + m_s' v_s') / sqrt(2 k T M)`, `g = (v_s' - v_s) sqrt(mu / 2 k T)`.
pub fn com_relative_from_velocities(
    v_s: [f64; 3],
    v_sp: [f64; 3],
    pair: &SpeciesPair,
) -> MixedPoint {
    let kt2 = 2.0 * BOLTZMANN * pair.temperature;
    let total = pair.m_s + pair.m_sp;
    let c_scale = 1.0 / (kt2 * total).sqrt();
    let g_scale = (pair.mu() / kt2).sqrt();
    let c = std::array::from_fn(|k| (pair.m_s * v_s[k] + pair.m_sp * v_sp[k]) * c_scale);
    let g = std::array::from_fn(|k| (v_sp[k] - v_s[k]) * g_scale);
    MixedPoint::com_relative(c, g)
}

/// Species-frame point for physical velocities, `z = v sqrt(m / 2 k T)`.
pub fn species_from_velocities(v_s: [f64; 3], v_sp: [f64; 3], pair: &SpeciesPair) -> MixedPoint {
    let kt2 = 2.0 * BOLTZMANN * pair.temperature;
    let z_s = v_s.map(|v| v * (pair.m_s / kt2).sqrt());
    let z_sp = v_sp.map(|v| v * (pair.m_sp / kt2).sqrt());
    MixedPoint::species(z_s, z_sp)
}

/// Mixed physicist polynomials `H_0..H_N` in six dimensions.
pub fn mixed_hermite(max_rank: usize, x: &[f64; 6]) -> Result<Vec<SymTensor>> {
    if max_rank > MAX_MIXED_RANK {
        return Err(Error::RankOutOfRange {
            rank: max_rank,
            max: MAX_MIXED_RANK,
        });
    }
    let seed = SymTensor::from_vector(x.iter().map(|v| 2.0 * v).collect())?;
    recurrence(max_rank, seed, 2)
}

/// Applies `R` to every slot of a six-dimensional symmetric tensor.
pub fn rotate_rank_n(r: &BlockRotation, t: &SymTensor) -> Result<SymTensor> {
    if t.dim() != 6 {
        return Err(Error::DimensionMismatch {
            left: 6,
            right: t.dim(),
        });
    }
    if t.rank() > MAX_MIXED_RANK {
        return Err(Error::RankOutOfRange {
            rank: t.rank(),
            max: MAX_MIXED_RANK,
        });
    }
    let m = r.matrix();
    let mut dense = t.to_dense();
    let mut scratch = vec![0.0; dense.len()];
    // Contract one slot at a time; `stride` is the flat step of that slot.
    for slot in 0..t.rank() {
        let stride = 6usize.pow((t.rank() - 1 - slot) as u32);
        for (flat, out) in scratch.iter_mut().enumerate() {
            let i = (flat / stride) % 6;
            let base = flat - i * stride;
            *out = (0..6).map(|j| m[i][j] * dense[base + j * stride]).sum();
        }
        std::mem::swap(&mut dense, &mut scratch);
    }
    SymTensor::from_dense(6, t.rank(), &dense)
}

/// `max | H_N(R x) - R^N H_N(x) |` over components.
pub fn equivariance_residual(rank: usize, x: &[f64; 6], pair: &SpeciesPair) -> Result<f64> {
    let r = BlockRotation::from_pair(pair);
    let direct = mixed_hermite(rank, &r.apply(x))?;
    let base = mixed_hermite(rank, x)?;
    rotate_rank_n(&r, &base[rank])?.max_abs_diff(&direct[rank])
}

fn check_species(c: &ExpansionCoefficients) -> Result<()> {
    if c.max_rank > MAX_SPECIES_RANK {
        return Err(Error::RankOutOfRange {
            rank: c.max_rank,
            max: MAX_SPECIES_RANK,
        });
    }
    Ok(())
}

/// Mixed coefficients `alpha_N` of the product series.
///
/// A canonical index with `m` upper labels `I` and `n` lower labels `J`
/// holds `a'_m[I] a_n[J] / C(N, m)`, summed over all `m + n = N`.
pub fn stack_coefficients(
    coeff_s: &ExpansionCoefficients,
    coeff_sp: &ExpansionCoefficients,
) -> Result<Vec<SymTensor>> {
    let top = coeff_s.max_rank + coeff_sp.max_rank;
    if top > MAX_MIXED_RANK {
        return Err(Error::RankOutOfRange {
            rank: top,
            max: MAX_MIXED_RANK,
        });
    }
    (0..=top)
        .map(|rank| {
            SymTensor::from_fn(6, rank, |index| {
                let upper: Vec<usize> =
                    index.entries().iter().copied().filter(|&e| e < 3).collect();
                let lower: Vec<usize> = index
                    .entries()
                    .iter()
                    .filter(|&&e| e >= 3)
                    .map(|e| e - 3)
                    .collect();
                let (m, n) = (upper.len(), lower.len());
                if m > coeff_sp.max_rank || n > coeff_s.max_rank {
                    return 0.0;
                }
                let a_up = coeff_sp.coeffs[m]
                    .get_canonical(&MultiIndex::canonicalize(3, &upper).expect("upper labels"));
                let a_lo = coeff_s.coeffs[n]
                    .get_canonical(&MultiIndex::canonicalize(3, &lower).expect("lower labels"));
                a_up * a_lo / binomial(rank, m) as f64
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceReport {
    pub max_residual: f64,
    /// Largest `|f|` over the sample points, the scale for the residual.
    pub max_abs_f: f64,
}

/// Compares the product distribution `f_s f_s'` at species-frame points with
/// the rotated-coefficient series evaluated at the rotated points.
pub fn distribution_invariance(
    coeff_s: &ExpansionCoefficients,
    coeff_sp: &ExpansionCoefficients,
    pair: &SpeciesPair,
    points: &[MixedPoint],
) -> Result<InvarianceReport> {
    check_species(coeff_s)?;
    check_species(coeff_sp)?;
    let r = BlockRotation::from_pair(pair);
    let alpha = stack_coefficients(coeff_s, coeff_sp)?;
    let beta = alpha
        .iter()
        .map(|a| rotate_rank_n(&r, a))
        .collect::<Result<Vec<_>>>()?;
    let top = beta.len() - 1;
    let amplitude = coeff_s.amplitude * coeff_sp.amplitude;
    let mut report = InvarianceReport {
        max_residual: 0.0,
        max_abs_f: 0.0,
    };
    for p in points {
        p.expect(Frame::Species)?;
        let (z_sp, z_s) = (p.upper(), p.lower());
        let sq = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>();
        let f_ss = (-sq(&z_s)).exp()
            * coeff_s.series_value(z_s, coeff_s.max_rank)
            * (-sq(&z_sp)).exp()
            * coeff_sp.series_value(z_sp, coeff_sp.max_rank);

        let cg = to_com_relative(p, pair)?;
        let basis = mixed_hermite(top, &cg.coords)?;
        let mut series = 0.0;
        for (b, h) in beta.iter().zip(&basis) {
            series += inner(b, h)?;
        }
        let f_cg = amplitude * (-sq(&cg.coords)).exp() * series;
        if !(f_ss.is_finite() && f_cg.is_finite()) {
            return Err(Error::NonFinite {
                value: if f_ss.is_finite() { f_cg } else { f_ss },
                point: p.coords.to_vec(),
            });
        }
        report.max_residual = report.max_residual.max((f_ss - f_cg).abs());
        report.max_abs_f = report.max_abs_f.max(f_ss.abs());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::hermite_phys;
    use crate::symtensor::canonical_indices;

    fn pair(ratio: f64) -> SpeciesPair {
        SpeciesPair::new(1.0, ratio, 1000.0).unwrap()
    }

    fn matmul(a: &[[f64; 6]; 6], b: &[[f64; 6]; 6]) -> [[f64; 6]; 6] {
        std::array::from_fn(|i| std::array::from_fn(|j| (0..6).map(|k| a[i][k] * b[k][j]).sum()))
    }

    #[test]
    fn equal_masses() {
        let r = BlockRotation::from_pair(&pair(1.0));
        assert!((r.y - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((r.y_prime - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

        let v = [0.3, -1.2, 0.7];
        let cg = to_com_relative(&MixedPoint::species(v, v), &pair(1.0)).unwrap();
        for (k, vk) in v.iter().enumerate() {
            assert!(cg.lower()[k].abs() < 1e-15);
            assert!((cg.upper()[k] - std::f64::consts::SQRT_2 * vk).abs() < 1e-14);
        }

        let back = from_com_relative(
            &MixedPoint::com_relative([1.0, 0.0, 0.0], [0.0; 3]),
            &pair(1.0),
        )
        .unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(back
            .coords
            .iter()
            .zip([h, 0.0, 0.0, h, 0.0, 0.0])
            .all(|(a, b)| (a - b).abs() < 1e-15));
    }

    #[test]
    fn rotation_is_an_involution() {
        for ratio in [1.0, 4.0, 16.0, 1836.0] {
            let r = BlockRotation::from_pair(&pair(ratio));
            assert!((r.y * r.y + r.y_prime * r.y_prime - 1.0).abs() < 1e-14);
            let mu = pair(ratio).mu();
            assert!((r.y * r.y - mu / 1.0).abs() < 1e-14);
            assert!((r.y_prime * r.y_prime - mu / ratio).abs() < 1e-14);
            let rr = matmul(&r.matrix(), &r.matrix());
            for (i, row) in rr.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((v - want).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn frame_mismatch() {
        let p = MixedPoint::com_relative([0.0; 3], [0.0; 3]);
        assert!(matches!(
            to_com_relative(&p, &pair(2.0)),
            Err(Error::FrameMismatch { .. })
        ));
        let q = MixedPoint::species([0.0; 3], [0.0; 3]);
        assert!(from_com_relative(&q, &pair(2.0)).is_err());
    }

    #[test]
    fn physical_formulas_agree() {
        let amu = crate::quadrature::ATOMIC_MASS_UNIT;
        let pr = SpeciesPair::new(16.0 * amu, 28.0 * amu, 800.0).unwrap();
        let v_s = [350.0, -120.0, 40.0];
        let v_sp = [-80.0, 510.0, 220.0];
        let direct = com_relative_from_velocities(v_s, v_sp, &pr);
        let rotated = to_com_relative(&species_from_velocities(v_s, v_sp, &pr), &pr).unwrap();
        for k in 0..6 {
            assert!((direct.coords[k] - rotated.coords[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_low_ranks() {
        let x = [0.1, -0.4, 0.9, 1.2, 0.0, -0.7];
        let h = mixed_hermite(2, &x).unwrap();
        for (k, v) in x.iter().enumerate() {
            assert!((h[1].get(&[k]).unwrap() - 2.0 * v).abs() < 1e-15);
        }
        let zero = mixed_hermite(2, &[0.0; 6]).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { -2.0 } else { 0.0 };
                assert_eq!(*zero[2].get(&[i, j]).unwrap(), want);
            }
        }
        assert!(mixed_hermite(5, &x).is_err());
    }

    #[test]
    fn block_diagonal_reduction() {
        let x = [0.3, -0.5, 1.1, -0.2, 0.8, 0.4];
        let h = mixed_hermite(3, &x).unwrap();
        let upper = hermite_phys(3, [x[0], x[1], x[2]]);
        let lower = hermite_phys(3, [x[3], x[4], x[5]]);
        for (rank, t) in h.iter().enumerate() {
            for idx in canonical_indices(3, rank) {
                let up = t.get(idx.entries()).unwrap();
                let shifted: Vec<usize> = idx.entries().iter().map(|e| e + 3).collect();
                let lo = t.get(&shifted).unwrap();
                assert!((up - upper.values[rank].get_canonical(&idx)).abs() < 1e-12);
                assert!((lo - lower.values[rank].get_canonical(&idx)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_of_identity_and_vectors() {
        let r = BlockRotation::from_pair(&pair(4.0));
        let id = SymTensor::identity(6).unwrap();
        assert!(rotate_rank_n(&r, &id).unwrap().max_abs_diff(&id).unwrap() < 1e-15);

        let s = SymTensor::scalar(6, 2.5).unwrap();
        assert_eq!(rotate_rank_n(&r, &s).unwrap(), s);

        let x = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
        let v = SymTensor::from_vector(x.to_vec()).unwrap();
        let rv = rotate_rank_n(&r, &v).unwrap();
        let want = r.apply(&x);
        assert!(rv
            .data()
            .iter()
            .zip(want)
            .all(|(a, b)| (a - b).abs() < 1e-15));
    }

    #[test]
    fn equivariance() {
        let x = [0.4, -1.0, 0.25, 0.9, -0.3, 1.5];
        assert_eq!(equivariance_residual(0, &x, &pair(1.0)).unwrap(), 0.0);
        assert!(equivariance_residual(1, &x, &pair(3.0)).unwrap() < 1e-15);
        for n in 2..=MAX_MIXED_RANK {
            assert!(equivariance_residual(n, &x, &pair(1.0)).unwrap() < 1e-10);
        }
    }

    #[test]
    fn maxwellian_invariance() {
        let f = ExpansionCoefficients::maxwellian(0.5, 0);
        let g = ExpansionCoefficients::maxwellian(2.0, 1);
        let points = [
            MixedPoint::species([0.1, 0.2, -0.3], [1.0, 0.0, 0.5]),
            MixedPoint::species([-0.7, 0.4, 0.0], [0.2, -1.1, 0.3]),
        ];
        let report = distribution_invariance(&f, &g, &pair(16.0), &points).unwrap();
        assert!(report.max_residual <= 1e-15 * report.max_abs_f);
    }

    #[test]
    fn rank_overflow() {
        let f = ExpansionCoefficients::maxwellian(1.0, 3);
        let g = ExpansionCoefficients::maxwellian(1.0, 0);
        assert!(matches!(
            distribution_invariance(&f, &g, &pair(1.0), &[]),
            Err(Error::RankOutOfRange { .. })
        ));
    }
}
