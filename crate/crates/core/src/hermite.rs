//! Tensor Hermite polynomials in three dimensions.
//!
//! The physicist polynomials obey
//!
//! ```text
//! H_{n+1} = sym(H_n (x) H_1) - 2n sym(H_{n-1} (x) I),   H_0 = 1, H_1 = 2z
//! ```
//!
//! where `sym` is the normalized symmetrizer. Grad's probabilist polynomials
//! use the same recursion with `He_1 = z` and a factor `n` on the identity
//! term; the two are related by `H_n(z) = 2^{n/2} He_n(sqrt(2) z)`.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::symtensor::{canonical_indices, factorial, split_sum, sym_product, Scalar, SymTensor};

/// Highest rank accepted by the symbolic closed-form tables.
pub const MAX_SYMBOLIC_RANK: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HermiteConvention {
    /// `H_n`, orthogonal under `exp(-z.z)`.
    Physicist,
    /// Grad's `He_n`, orthogonal under `exp(-z.z / 2)`.
    Probabilist,
}

impl HermiteConvention {
    pub fn other(self) -> Self {
        match self {
            Self::Physicist => Self::Probabilist,
            Self::Probabilist => Self::Physicist,
        }
    }
}

/// Values of the polynomials of rank `0..=max_rank` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEvaluation {
    pub convention: HermiteConvention,
    pub max_rank: usize,
    pub point: [f64; 3],
    pub values: Vec<SymTensor>,
}

impl BasisEvaluation {
    pub fn rank(&self, n: usize) -> &SymTensor {
        &self.values[n]
    }
}

/// Runs the three-term tensor recursion from the rank-1 seed `first`.
///
/// `delta_factor` is 2 for the physicist polynomials and 1 for the
/// probabilist ones. The dimension is taken from the seed, so the same code
/// builds the six-dimensional mixed polynomials.
pub(crate) fn recurrence<S: Scalar>(
    max_rank: usize,
    first: SymTensor<S>,
    delta_factor: i64,
) -> Result<Vec<SymTensor<S>>> {
    let dim = first.dim();
    let mut out = vec![SymTensor::scalar(dim, S::from_int(1))?];
    if max_rank == 0 {
        return Ok(out);
    }
    let identity = SymTensor::<S>::identity(dim)?;
    out.push(first);
    for n in 1..max_rank {
        // sym(H_n H_1) = split(H_n, H_1) / (n+1) and
        // n sym(H_{n-1} I) = 2 split(H_{n-1}, I) / (n+1); dividing once at the
        // end keeps every intermediate integral in exact rings.
        let lead = split_sum(&out[n], &out[1])?;
        let trail = split_sum(&out[n - 1], &identity)?;
        let combined = lead.try_sub(&trail.scale(S::from_int(2 * delta_factor)))?;
        out.push(combined.map(|v| v.clone().div_int(n as i64 + 1)));
    }
    Ok(out)
}

fn evaluate(convention: HermiteConvention, max_rank: usize, z: [f64; 3]) -> BasisEvaluation {
    let (seed, factor) = match convention {
        HermiteConvention::Physicist => (z.map(|c| 2.0 * c), 2),
        HermiteConvention::Probabilist => (z, 1),
    };
    let first = SymTensor::from_vector(seed.to_vec()).expect("three-vector seed");
    let values = recurrence(max_rank, first, factor).expect("dimension-3 recursion");
    BasisEvaluation {
        convention,
        max_rank,
        point: z,
        values,
    }
}

/// Physicist polynomials `H_0..H_N` at `z`.
pub fn hermite_phys(max_rank: usize, z: [f64; 3]) -> BasisEvaluation {
    evaluate(HermiteConvention::Physicist, max_rank, z)
}

/// Grad's probabilist polynomials `He_0..He_N` at `z`.
pub fn hermite_prob(max_rank: usize, z: [f64; 3]) -> BasisEvaluation {
    evaluate(HermiteConvention::Probabilist, max_rank, z)
}

/// Re-expresses an evaluation in the other convention.
///
/// `H_n(z)` values become `He_n(sqrt(2) z)` values and vice versa, so the
/// evaluation point moves along with the convention.
pub fn convert(b: &BasisEvaluation, target: HermiteConvention) -> BasisEvaluation {
    if b.convention == target {
        return b.clone();
    }
    let (point_scale, value_base) = match target {
        HermiteConvention::Probabilist => {
            (std::f64::consts::SQRT_2, std::f64::consts::FRAC_1_SQRT_2)
        }
        HermiteConvention::Physicist => (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::SQRT_2),
    };
    let values = b
        .values
        .iter()
        .enumerate()
        .map(|(n, t)| t.scale(value_base.powi(n as i32)))
        .collect();
    BasisEvaluation {
        convention: target,
        max_rank: b.max_rank,
        point: b.point.map(|c| c * point_scale),
        values,
    }
}

/// Classical one-dimensional physicist Hermite polynomial `h_n(x)`.
pub fn hermite_1d(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Rank-`n` tensor built from products of one-dimensional polynomials: the
/// component with `a` zeros, `b` ones and `c` twos is `h_a(z0) h_b(z1) h_c(z2)`.
///
/// Shares no code with the tensor recursion and serves as its oracle.
pub fn product_oracle(n: usize, z: [f64; 3]) -> SymTensor {
    SymTensor::from_fn(3, n, |m| {
        m.counts()
            .iter()
            .zip(z)
            .map(|(&k, x)| hermite_1d(k, x))
            .product()
    })
    .expect("dimension 3")
}

/// Largest residual of `d/dz_i H_n = 2 delta_i H_{n-1}`, with the left side
/// from central differences of step `h`.
///
/// For each axis the right side is `2n sym(e_i (x) H_{n-1})`.
pub fn grad_check(n: usize, z: [f64; 3], h: f64) -> f64 {
    let mut worst = 0.0f64;
    let base = hermite_phys(n, z);
    for axis in 0..3 {
        let mut plus = z;
        let mut minus = z;
        plus[axis] += h;
        minus[axis] -= h;
        let hp = hermite_phys(n, plus);
        let hm = hermite_phys(n, minus);
        let fd = hp.values[n]
            .try_sub(&hm.values[n])
            .expect("same shape")
            .scale(0.5 / h);
        let rhs = if n == 0 {
            SymTensor::scalar(3, 0.0).expect("dimension 3")
        } else {
            let mut unit = vec![0.0; 3];
            unit[axis] = 1.0;
            let e = SymTensor::from_vector(unit).expect("dimension 3");
            sym_product(&e, &base.values[n - 1])
                .expect("same dimension")
                .scale(2.0 * n as f64)
        };
        worst = worst.max(fd.max_abs_diff(&rhs).expect("same shape"));
    }
    worst
}

/// Largest residual of Grad's ladder relation
/// `He_{n+1}[i, I] = z_i He_n[I] - d/dz_i He_n[I]`, derivatives by central
/// differences of step `h`.
pub fn ladder_residual(n: usize, z: [f64; 3], h: f64) -> f64 {
    let base = hermite_prob(n + 1, z);
    let mut worst = 0.0f64;
    for axis in 0..3 {
        let mut plus = z;
        let mut minus = z;
        plus[axis] += h;
        minus[axis] -= h;
        let hp = hermite_prob(n, plus);
        let hm = hermite_prob(n, minus);
        for (m, value) in base.values[n].iter() {
            let derivative =
                (hp.values[n].get_canonical(&m) - hm.values[n].get_canonical(&m)) / (2.0 * h);
            let mut raised = m.entries().to_vec();
            raised.push(axis);
            let lhs = *base.values[n + 1].get(&raised).expect("valid index");
            worst = worst.max((lhs - (z[axis] * value - derivative)).abs());
        }
    }
    worst
}

/// Runs the physicist recursion over integer polynomials in `z0, z1, z2`.
pub fn symbolic_phys(max_rank: usize) -> Vec<SymTensor<Poly>> {
    let seed = (0..3)
        .map(|v| Poly::variable(v, 3) * Poly::constant(2))
        .collect();
    let first = SymTensor::from_vector(seed).expect("dimension 3");
    recurrence(max_rank, first, 2).expect("dimension-3 recursion")
}

/// One invariant term `coeff * sum(z...z delta...delta)`, summed over every
/// distinct placement of `z_count` vector factors and `delta_count` unit tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantTerm {
    pub z_count: usize,
    pub delta_count: usize,
    pub coeff: i64,
}

/// Closed form of `H_n` as a table of invariant terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub rank: usize,
    pub terms: Vec<InvariantTerm>,
}

// Distinct placements of `delta_count` pairs among `n` slots, the remaining
// slots carrying z. Each placement is (z slots, pairs).
type Placement = (Vec<usize>, Vec<(usize, usize)>);

fn placements(n: usize, delta_count: usize) -> Vec<Placement> {
    fn matchings(slots: &[usize]) -> Vec<Vec<(usize, usize)>> {
        match slots {
            [] => vec![Vec::new()],
            [first, rest @ ..] => {
                let mut out = Vec::new();
                for (k, &partner) in rest.iter().enumerate() {
                    let remaining: Vec<usize> = rest
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, &s)| s)
                        .collect();
                    for mut tail in matchings(&remaining) {
                        tail.insert(0, (*first, partner));
                        out.push(tail);
                    }
                }
                out
            }
        }
    }
    let z_count = n - 2 * delta_count;
    let mut out = Vec::new();
    for z_slots in (0..n).combinations(z_count) {
        let paired: Vec<usize> = (0..n).filter(|s| !z_slots.contains(s)).collect();
        for m in matchings(&paired) {
            out.push((z_slots.clone(), m));
        }
    }
    out
}

impl ClosedForm {
    /// Extracts the invariant table of `H_rank` from the symbolic recursion and
    /// checks that the table reproduces every component exactly.
    pub fn of_rank(rank: usize) -> Result<Self> {
        if rank > MAX_SYMBOLIC_RANK {
            return Err(Error::RankOutOfRange {
                rank,
                max: MAX_SYMBOLIC_RANK,
            });
        }
        let tensor = symbolic_phys(rank).pop().expect("rank present");
        // The all-zero component is a polynomial in z0 alone: each term
        // contributes coeff * (number of placements) to z0^(z_count).
        let diagonal = tensor.data()[0].clone();
        let mut terms = Vec::new();
        for delta_count in 0..=rank / 2 {
            let z_count = rank - 2 * delta_count;
            let coeff = diagonal.coeff(&[z_count as u32]);
            let count = placements(rank, delta_count).len() as i64;
            if coeff % count != 0 {
                return Err(Error::Inconsistent(format!(
                    "coefficient {coeff} of z^{z_count} not divisible by {count} placements"
                )));
            }
            if coeff != 0 {
                terms.push(InvariantTerm {
                    z_count,
                    delta_count,
                    coeff: coeff / count,
                });
            }
        }
        let form = Self { rank, terms };
        for (m, value) in tensor.iter() {
            let rebuilt = form.component(m.entries());
            if &rebuilt != value {
                return Err(Error::Inconsistent(format!(
                    "component {:?}: recursion gives {value}, table gives {rebuilt}",
                    m.entries()
                )));
            }
        }
        Ok(form)
    }

    /// Evaluates the table at one index tuple as a polynomial in `z0, z1, z2`.
    pub fn component(&self, indices: &[usize]) -> Poly {
        let mut total = Poly::default();
        for term in &self.terms {
            for (z_slots, pairs) in placements(self.rank, term.delta_count) {
                if pairs.iter().all(|&(a, b)| indices[a] == indices[b]) {
                    let mut exps = [0u32; 3];
                    for &s in &z_slots {
                        exps[indices[s]] += 1;
                    }
                    total = total + Poly::monomial(&exps, term.coeff);
                }
            }
        }
        total
    }

    /// Expected coefficient of each term: `2^z_count (-2)^delta_count`.
    pub fn expected_coeff(z_count: usize, delta_count: usize) -> i64 {
        2i64.pow(z_count as u32) * (-2i64).pow(delta_count as u32)
    }
}

const SLOT_NAMES: [char; 6] = ['i', 'j', 'k', 'l', 'm', 'n'];

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, term) in self.terms.iter().enumerate() {
            let bodies: Vec<String> = placements(self.rank, term.delta_count)
                .into_iter()
                .map(|(z_slots, pairs)| {
                    z_slots
                        .iter()
                        .map(|&s| format!("z_{}", SLOT_NAMES[s]))
                        .chain(
                            pairs
                                .iter()
                                .map(|&(a, b)| format!("δ_{}{}", SLOT_NAMES[a], SLOT_NAMES[b])),
                        )
                        .join(" ")
                })
                .collect();
            let magnitude = term.coeff.abs();
            match (k, term.coeff < 0) {
                (0, true) => write!(f, "−{magnitude}")?,
                (0, false) => write!(f, "{magnitude}")?,
                (_, true) => write!(f, " − {magnitude}")?,
                (_, false) => write!(f, " + {magnitude}")?,
            }
            match bodies.as_slice() {
                [only] if only.is_empty() => {}
                [only] => write!(f, " {only}")?,
                many => write!(f, " ({})", many.join(" + "))?,
            }
        }
        Ok(())
    }
}

/// `n!` as a float, for normalization constants.
pub(crate) fn factorial_f64(n: usize) -> f64 {
    factorial(n) as f64
}

/// Every canonical component of `H_n(z)` alongside the oracle value.
pub fn oracle_pairs(n: usize, z: [f64; 3]) -> Vec<(f64, f64)> {
    let fast = hermite_phys(n, z);
    let slow = product_oracle(n, z);
    canonical_indices(3, n)
        .map(|m| (*fast.values[n].get_canonical(&m), *slow.get_canonical(&m)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_and_low_ranks() {
        let b = hermite_phys(1, [1.0, 0.0, 0.0]);
        assert_eq!(b.values[0].data(), &[1.0]);
        assert_eq!(b.values[1].data(), &[2.0, 0.0, 0.0]);

        let b = hermite_phys(2, [0.0; 3]);
        assert_eq!(
            b.values[2],
            SymTensor::<f64>::identity(3).unwrap().scale(-2.0)
        );

        // 8 z^3 - 4 * 3 z at z = 1 on the diagonal
        let b = hermite_phys(3, [1.0, 1.0, 1.0]);
        assert_eq!(*b.values[3].get(&[0, 0, 0]).unwrap(), -4.0);
    }

    #[test]
    fn probabilist_examples() {
        let b = hermite_prob(2, [0.0; 3]);
        assert_eq!(
            b.values[2],
            SymTensor::<f64>::identity(3).unwrap().scale(-1.0)
        );
        let z = [0.4, -1.3, 2.2];
        assert_eq!(hermite_prob(1, z).values[1].data(), &z);
    }

    #[test]
    fn probabilist_matches_conversion_formula() {
        let z = [0.7, -0.2, 1.9];
        let direct = hermite_prob(3, z);
        let scaled = z.map(|c| c / std::f64::consts::SQRT_2);
        let phys = hermite_phys(3, scaled);
        for n in 0..=3 {
            let expected = phys.values[n].scale(2f64.powf(-(n as f64) / 2.0));
            assert!(direct.values[n].max_abs_diff(&expected).unwrap() < 1e-12);
        }
    }

    #[test]
    fn convert_round_trip() {
        let b = hermite_phys(4, [0.3, -0.7, 1.1]);
        let back = convert(
            &convert(&b, HermiteConvention::Probabilist),
            HermiteConvention::Physicist,
        );
        assert_eq!(back.convention, HermiteConvention::Physicist);
        for n in 0..=4 {
            let scale = b.values[n].max_abs().max(1.0);
            assert!(back.values[n].max_abs_diff(&b.values[n]).unwrap() <= 1e-12 * scale);
        }
        for (a, c) in back.point.iter().zip(b.point) {
            assert!((a - c).abs() < 1e-15);
        }
    }

    #[test]
    fn convert_rank_one_and_zero() {
        let z = [0.5, 1.0, -2.0];
        let p = convert(&hermite_phys(1, z), HermiteConvention::Probabilist);
        let direct = hermite_prob(1, p.point);
        assert_eq!(p.values[0].data(), &[1.0]);
        assert!(p.values[1].max_abs_diff(&direct.values[1]).unwrap() < 1e-15);
    }

    #[test]
    fn one_dimensional_polynomials() {
        assert_eq!(hermite_1d(0, 3.0), 1.0);
        assert_eq!(hermite_1d(2, 1.0), 2.0);
        assert_eq!(hermite_1d(3, 2.0), 8.0 * 8.0 - 12.0 * 2.0);
    }

    #[test]
    fn oracle_examples() {
        let t = product_oracle(2, [1.0, 2.0, 0.0]);
        assert_eq!(*t.get(&[0, 0]).unwrap(), 2.0);
        assert_eq!(*t.get(&[0, 1]).unwrap(), 8.0);
        assert_eq!(product_oracle(0, [5.0, 5.0, 5.0]).data(), &[1.0]);
    }

    #[test]
    fn gradient_of_linear_polynomial_is_exact() {
        assert!(grad_check(1, [0.3, 0.1, -0.4], 1e-3) < 1e-12);
    }

    #[test]
    fn closed_forms_of_low_ranks() {
        let h2 = ClosedForm::of_rank(2).unwrap();
        assert_eq!(h2.to_string(), "4 z_i z_j − 2 δ_ij");
        let h3 = ClosedForm::of_rank(3).unwrap();
        assert_eq!(
            h3.to_string(),
            "8 z_i z_j z_k − 4 (z_i δ_jk + z_j δ_ik + z_k δ_ij)"
        );
        assert_eq!(ClosedForm::of_rank(0).unwrap().to_string(), "1");
        assert_eq!(ClosedForm::of_rank(1).unwrap().to_string(), "2 z_i");
        assert!(matches!(
            ClosedForm::of_rank(5),
            Err(Error::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn placement_counts() {
        // n! / (k! l! 2^l)
        assert_eq!(placements(3, 1).len(), 3);
        assert_eq!(placements(4, 1).len(), 6);
        assert_eq!(placements(4, 2).len(), 3);
        assert_eq!(placements(2, 0).len(), 1);
    }
}
