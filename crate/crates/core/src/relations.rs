//! The experiment layer: numerical certificates for the dimension and
//! relation theorems, built from the exact eigenspaces on one side and
//! sampled theta data on the other, plus the formal degeneration operator
//! on power sums of nullwert symbols.

use crate::chars::{self, CharTable, Characteristic, Parity};
use crate::error::{Error, Result};
use crate::fay::{self, FayOperator};
use crate::numrank::{numerical_rank, RankReport, REQUIRED_GAP};
use crate::symplectic::{GeneratorKind, GeneratorSet};
use crate::theta::{self, SiegelPoint};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;

pub const DEFAULT_THETA_TOL: f64 = theta::DEFAULT_TOL;
pub const DEFAULT_RANK_TOL: f64 = 1e-7;

/// A finite rational combination of `k`-th powers of nullwert symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalThetaSum {
    g: usize,
    k: u32,
    terms: BTreeMap<Characteristic, Ratio<i64>>,
}

impl FormalThetaSum {
    pub fn new(g: usize, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("power must be at least 1".into()));
        }
        Ok(FormalThetaSum {
            g,
            k,
            terms: BTreeMap::new(),
        })
    }

    pub fn monomial(g: usize, k: u32, m: &Characteristic, coeff: Ratio<i64>) -> Result<Self> {
        let mut s = Self::new(g, k)?;
        s.add_term(m, coeff)?;
        Ok(s)
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn power(&self) -> u32 {
        self.k
    }

    pub fn add_term(&mut self, m: &Characteristic, coeff: Ratio<i64>) -> Result<()> {
        if m.genus() != self.g {
            return Err(Error::GenusMismatch(m.genus(), self.g));
        }
        let slot = self.terms.entry(*m).or_insert_with(|| Ratio::new(0, 1));
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(m);
        }
        Ok(())
    }

    pub fn scale(&self, factor: Ratio<i64>) -> Self {
        let mut out = self.clone();
        if factor.is_zero() {
            out.terms.clear();
            return out;
        }
        for v in out.terms.values_mut() {
            *v *= factor;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.g != other.g || self.k != other.k {
            return Err(Error::InvalidArgument(
                "formal sums of different genus or power".into(),
            ));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, *c)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Characteristic, &Ratio<i64>)> {
        self.terms.iter()
    }

    /// The degeneration operator applied `times` times: in each step the
    /// symbol `theta[(a, a_g; b, b_g)]^k` maps to `theta[(a; b)]^k` when
    /// `a_g = 0` and dies when `a_g = 1`.
    pub fn phi(&self, times: usize) -> Result<FormalThetaSum> {
        if times >= self.g {
            return Err(Error::InvalidArgument(format!(
                "degeneration applied {} times needs genus > {}, got {}",
                times, times, self.g
            )));
        }
        let mut current = self.clone();
        for _ in 0..times {
            let g = current.g;
            let mut next = FormalThetaSum::new(g - 1, current.k)?;
            for (m, c) in &current.terms {
                if m.a().get(g - 1) {
                    continue;
                }
                let tail = Characteristic::new(
                    crate::f2::BitVec::from_word(g - 1, m.a().word()),
                    crate::f2::BitVec::from_word(g - 1, m.b().word()),
                )?;
                next.add_term(&tail, *c)?;
            }
            current = next;
        }
        Ok(current)
    }
}

/// `(2^g - 1) theta[0]^k - sum_(m != 0) theta[m]^k` over the even sector.
pub fn power_sum_minus(g: usize, k: u32) -> Result<FormalThetaSum> {
    let table = CharTable::new(g);
    let mut s = FormalThetaSum::new(g, k)?;
    for m in table.sector(Parity::Even) {
        let coeff = if *m == Characteristic::zero(g) {
            Ratio::new((1i64 << g) - 1, 1)
        } else {
            Ratio::new(-1, 1)
        };
        s.add_term(m, coeff)?;
    }
    Ok(s)
}

/// `(2^(g-1) + 1) theta[0]^k + sum_(m != 0) theta[m]^k`, the image shape of
/// the distinguished `2^g`-eigenvector.
pub fn power_sum_plus(g: usize, k: u32) -> Result<FormalThetaSum> {
    let table = CharTable::new(g);
    let mut s = FormalThetaSum::new(g, k)?;
    for m in table.sector(Parity::Even) {
        let coeff = if *m == Characteristic::zero(g) {
            Ratio::new((1i64 << (g - 1)) + 1, 1)
        } else {
            Ratio::new(1, 1)
        };
        s.add_term(m, coeff)?;
    }
    Ok(s)
}

/// The genus-1 combination `c00 theta[00]^k + c01 theta[01]^k + c10 theta[10]^k`.
pub fn genus1_combination(k: u32, c00: i64, c01: i64, c10: i64) -> FormalThetaSum {
    let mut s = FormalThetaSum::new(1, k).expect("k >= 1");
    s.add_term(&"0|0".parse().unwrap(), Ratio::new(c00, 1)).unwrap();
    s.add_term(&"0|1".parse().unwrap(), Ratio::new(c01, 1)).unwrap();
    s.add_term(&"1|0".parse().unwrap(), Ratio::new(c10, 1)).unwrap();
    s
}

/// Checks symbolically that the full degeneration of [`power_sum_minus`]
/// equals `2^(g-1) (theta[00]^k - theta[01]^k - theta[10]^k)` and that of
/// [`power_sum_plus`] equals `2^(g-1) (2 theta[00]^k + theta[01]^k + theta[10]^k)`.
pub fn phi_collapse_matches_genus1(g: usize, k: u32) -> Result<bool> {
    let half = 1i64 << (g - 1);
    let minus = power_sum_minus(g, k)?.phi(g - 1)?;
    let want_minus = genus1_combination(k, half, -half, -half);
    let plus = power_sum_plus(g, k)?.phi(g - 1)?;
    let want_plus = genus1_combination(k, 2 * half, half, half);
    Ok(minus == want_minus && plus == want_plus)
}

fn genus_guard(g: usize, max: usize, what: &'static str) -> Result<()> {
    if g == 0 || g > max {
        return Err(Error::GenusOutOfRange { what, got: g, max });
    }
    Ok(())
}

/// Divides each column by its largest modulus. Rank-preserving; evens out
/// the dynamic range between fast- and slow-decaying characteristics so the
/// pivot gap measures independence rather than scale.
fn equilibrate_columns(rows: &mut [Vec<Complex64>]) {
    if rows.is_empty() {
        return;
    }
    let cols = rows[0].len();
    for j in 0..cols {
        let max = rows.iter().map(|r| r[j].norm()).fold(0.0f64, f64::max);
        if max > 0.0 {
            for r in rows.iter_mut() {
                r[j] /= max;
            }
        }
    }
}

fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().expect("eigenvector entries are small")
}

/// Sampled matrix of `k`-th powers of the even nullwerte: one row per
/// Siegel point, columns in canonical even order, each row normalized by
/// its largest modulus.
pub fn theta_power_matrix(
    g: usize,
    k: u32,
    nsamples: usize,
    theta_tol: f64,
    seed: u64,
) -> Result<Vec<Vec<Complex64>>> {
    genus_guard(g, 3, "sampled nullwert matrices")?;
    let table = CharTable::new(g);
    let evens = table.sector(Parity::Even);
    let taus = SiegelPoint::sample_stream(g, seed, nsamples);
    let mut rows = Vec::with_capacity(nsamples);
    for tau in &taus {
        let mut row = Vec::with_capacity(evens.len());
        for m in evens {
            row.push(theta::theta_nullwert(m, tau, theta_tol)?.value.powu(k));
        }
        let max = row.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        if max > 0.0 {
            for z in &mut row {
                *z /= max;
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Numerical rank of the sampled `k`-th power matrix.
pub fn rank_theta_powers(
    g: usize,
    k: u32,
    nsamples: usize,
    rank_tol: f64,
    seed: u64,
) -> Result<RankReport> {
    let kplus = chars::count_even(g);
    if nsamples < kplus + 8 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} samples for {} columns, got {}",
            kplus + 8,
            kplus,
            nsamples
        )));
    }
    let mut rows = theta_power_matrix(g, k, nsamples, DEFAULT_THETA_TOL, seed)?;
    equilibrate_columns(&mut rows);
    Ok(numerical_rank(&rows, rank_tol))
}

/// Maximal normalized residual of the quartic relations: for every exact
/// basis vector `v` of the relation eigenspace, `sum_m v_m theta[m]^4` over
/// the sampled points, scaled by `l1(v) * max_m |theta[m]^4|`.
pub fn verify_vplus_relations(g: usize, nsamples: usize, theta_tol: f64, seed: u64) -> Result<f64> {
    genus_guard(g, 3, "quartic relation sampling")?;
    let op = FayOperator::build(g, Parity::Even)?;
    let (v_basis, _) = fay::exact_eigenspaces(&op)?;
    let table = CharTable::new(g);
    let evens = table.sector(Parity::Even);
    let taus = SiegelPoint::sample_stream(g, seed, nsamples);
    let mut worst = 0.0f64;
    for tau in &taus {
        let fourth: Vec<Complex64> = evens
            .iter()
            .map(|m| Ok(theta::theta_nullwert(m, tau, theta_tol)?.value.powu(4)))
            .collect::<Result<_>>()?;
        let max4 = fourth.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        for v in &v_basis.vectors {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut l1 = 0.0f64;
            for (c, z) in v.iter().zip(&fourth) {
                let cf = big_to_f64(c);
                acc += cf * z;
                l1 += cf.abs();
            }
            worst = worst.max(acc.norm() / (l1 * max4));
        }
    }
    Ok(worst)
}

/// Whether the kernel of the sampled quartic matrix is exactly the relation
/// eigenspace: every exact basis vector annihilates the sampled rows within
/// `tol`, and the numerical rank plus the exact dimension fills the sector.
pub fn kernel_matches_vplus(g: usize, nsamples: usize, rank_tol: f64, seed: u64) -> Result<bool> {
    let report = rank_theta_powers(g, 4, nsamples, rank_tol, seed)?;
    if !report.conclusive {
        return Err(Error::Inconclusive {
            gap: report.gap_ratio,
            required: REQUIRED_GAP,
        });
    }
    let rows = theta_power_matrix(g, 4, nsamples, DEFAULT_THETA_TOL, seed)?;
    let op = FayOperator::build(g, Parity::Even)?;
    let (v_basis, _) = fay::exact_eigenspaces(&op)?;
    for v in &v_basis.vectors {
        let l1: f64 = v.iter().map(|c| big_to_f64(c).abs()).sum();
        for row in &rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, z) in v.iter().zip(row) {
                acc += big_to_f64(c) * z;
            }
            if acc.norm() > rank_tol * l1 {
                return Ok(false);
            }
        }
    }
    Ok(report.rank + v_basis.dim() == chars::count_even(g))
}

/// Sampled matrix of the symmetric fourth powers of the gradients: for each
/// Siegel point, one row per tensor coefficient, columns over the odd
/// characteristics, rows normalized by their largest modulus.
pub fn gradient_tensor_matrix(
    g: usize,
    nsamples: usize,
    theta_tol: f64,
    seed: u64,
) -> Result<Vec<Vec<Complex64>>> {
    genus_guard(g, 3, "gradient tensor sampling")?;
    let table = CharTable::new(g);
    let odds = table.sector(Parity::Odd);
    let taus = SiegelPoint::sample_stream(g, seed, nsamples);
    let dim = theta::sym4_dim(g);
    let mut rows = Vec::with_capacity(nsamples * dim);
    for tau in &taus {
        let tensors: Vec<theta::Sym4Tensor> = odds
            .iter()
            .map(|m| {
                Ok(theta::sym4(
                    &theta::theta_gradient(m, tau, theta_tol)?.components,
                ))
            })
            .collect::<Result<_>>()?;
        for idx in 0..dim {
            let mut row: Vec<Complex64> = tensors.iter().map(|t| t.coeffs[idx]).collect();
            let max = row.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
            if max > 0.0 {
                for z in &mut row {
                    *z /= max;
                }
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Numerical rank of the gradient tensor span.
pub fn rank_gradient_span(
    g: usize,
    nsamples: usize,
    rank_tol: f64,
    seed: u64,
) -> Result<RankReport> {
    let kminus = chars::count_odd(g);
    if nsamples * theta::sym4_dim(g) < kminus {
        return Err(Error::InvalidArgument(format!(
            "{} samples give {} rows, fewer than {} columns",
            nsamples,
            nsamples * theta::sym4_dim(g),
            kminus
        )));
    }
    let mut rows = gradient_tensor_matrix(g, nsamples, DEFAULT_THETA_TOL, seed)?;
    equilibrate_columns(&mut rows);
    Ok(numerical_rank(&rows, rank_tol))
}

/// Maximal normalized residual of the tensor relations carried by the
/// `-2^g` eigenspace of the odd-sector operator. Vacuously zero at genus 1,
/// where that eigenspace is trivial.
pub fn verify_wminus_relations(
    g: usize,
    nsamples: usize,
    theta_tol: f64,
    seed: u64,
) -> Result<f64> {
    genus_guard(g, 3, "gradient relation sampling")?;
    let op = FayOperator::build(g, Parity::Odd)?;
    let (_, w_basis) = fay::exact_eigenspaces(&op)?;
    if w_basis.dim() == 0 {
        return Ok(0.0);
    }
    let table = CharTable::new(g);
    let odds = table.sector(Parity::Odd);
    let taus = SiegelPoint::sample_stream(g, seed, nsamples);
    let dim = theta::sym4_dim(g);
    let mut worst = 0.0f64;
    for tau in &taus {
        let tensors: Vec<theta::Sym4Tensor> = odds
            .iter()
            .map(|m| {
                Ok(theta::sym4(
                    &theta::theta_gradient(m, tau, theta_tol)?.components,
                ))
            })
            .collect::<Result<_>>()?;
        let smax = tensors
            .iter()
            .flat_map(|t| t.coeffs.iter())
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
        for w in &w_basis.vectors {
            let l1: f64 = w.iter().map(|c| big_to_f64(c).abs()).sum();
            for idx in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, t) in w.iter().zip(&tensors) {
                    acc += big_to_f64(c) * t.coeffs[idx];
                }
                worst = worst.max(acc.norm() / (l1 * smax));
            }
        }
    }
    Ok(worst)
}

/// Minimum over the sampled points of the two genus-1 combinations
/// `|theta[00]^k - theta[01]^k - theta[10]^k|` and
/// `|2 theta[00]^k + theta[01]^k + theta[10]^k|`. Near zero exactly at
/// `k = 4`, where the first combination is the defining relation.
pub fn genus1_nonvanishing(k: u32, nsamples: usize, seed: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let taus = SiegelPoint::sample_stream(1, seed, nsamples);
    let t00: Characteristic = "0|0".parse().unwrap();
    let t01: Characteristic = "0|1".parse().unwrap();
    let t10: Characteristic = "1|0".parse().unwrap();
    let mut least = f64::INFINITY;
    for tau in &taus {
        let a = theta::theta_nullwert(&t00, tau, DEFAULT_THETA_TOL)?.value.powu(k);
        let b = theta::theta_nullwert(&t01, tau, DEFAULT_THETA_TOL)?.value.powu(k);
        let c = theta::theta_nullwert(&t10, tau, DEFAULT_THETA_TOL)?.value.powu(k);
        least = least.min((a - b - c).norm());
        least = least.min((2.0 * a + b + c).norm());
    }
    Ok(least)
}

/// Whether the `k`-th power ratios under `tau -> tau + 2S` separate the zero
/// characteristic from every `n = (a; 0)`, `a != 0`: some generator
/// translation must move the two ratios apart by more than `1/2` at every
/// sampled point. For `k` divisible by 4 the ratios are all 1 and no
/// separation exists.
pub fn translation_character_separation(
    g: usize,
    k: u32,
    nsamples: usize,
    seed: u64,
) -> Result<bool> {
    genus_guard(g, 2, "translation separation sampling")?;
    if k == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let zero = Characteristic::zero(g);
    let taus = SiegelPoint::sample_stream(g, seed, nsamples);
    let gens = GeneratorSet::new(g);
    let blocks: Vec<_> = gens
        .iter()
        .filter_map(|gen| match &gen.kind {
            GeneratorKind::Translation { s } => Some(s.clone()),
            GeneratorKind::Weyl => None,
        })
        .collect();
    let ratio = |m: &Characteristic,
                 s: &crate::f2::F2Matrix,
                 tau: &SiegelPoint|
     -> Result<Complex64> {
        let here = theta::theta_nullwert(m, tau, DEFAULT_THETA_TOL)?.value;
        let there = theta::theta_nullwert(m, &tau.translate(s)?, DEFAULT_THETA_TOL)?.value;
        Ok((there.powu(k)) / (here.powu(k)))
    };
    for a_code in 1u32..(1 << g) {
        let mut na = crate::f2::BitVec::zeros(g);
        for i in 0..g {
            if (a_code >> i) & 1 == 1 {
                na.set(i, true);
            }
        }
        let n = Characteristic::new(na, crate::f2::BitVec::zeros(g))?;
        let mut separated_by_some_s = false;
        'blocks: for s in &blocks {
            for tau in &taus {
                let rm = ratio(&zero, s, tau)?;
                let rn = ratio(&n, s, tau)?;
                if (rm - rn).norm() <= 0.5 {
                    continue 'blocks;
                }
            }
            separated_by_some_s = true;
            break;
        }
        if !separated_by_some_s {
            return Ok(false);
        }
    }
    Ok(true)
}
