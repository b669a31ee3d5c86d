//! Signed permutation representations on the characteristic bases, the
//! induced-function realizations behind them, characters, and exact
//! invariant-subspace checks.
//!
//! A group element acts on the basis vector of a characteristic `m` by
//! `sigma(e_m) = eps_m(sigma) e_(sigma{m})`. The representation obtained on
//! one parity sector is the translation action on functions `f : G -> C`
//! with `f(h sigma) = eps_base(h) f(sigma)` for `h` in the stabilizer of the
//! sector's base characteristic (`0` for even, `(1,0,..;1,0,..)` for odd),
//! realized through the basis functions constructed here.

use crate::chars::{CharTable, Characteristic, Parity};
use crate::error::{Error, Result};
use crate::exact;
use crate::group::{transporter, GroupEnumeration};
use crate::symplectic::SymplecticF2;
use num_rational::{BigRational, Ratio};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A signed permutation matrix acting on one parity sector: column `m`
/// carries `signs[m]` in row `perm[m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermMatrix {
    g: usize,
    sector: Parity,
    perm: Vec<usize>,
    signs: Vec<i64>,
}

impl SignedPermMatrix {
    pub fn rep_matrix(
        sigma: &SymplecticF2,
        sector: Parity,
        table: &CharTable,
    ) -> Result<Self> {
        if sigma.genus() != table.genus() {
            return Err(Error::GenusMismatch(sigma.genus(), table.genus()));
        }
        let chars = table.sector(sector);
        let act = sigma.action();
        let eps = sigma.epsilon_table();
        let mut perm = Vec::with_capacity(chars.len());
        let mut signs = Vec::with_capacity(chars.len());
        for m in chars {
            let w = m.word();
            perm.push(table.index_of_word(act.apply(w)));
            signs.push(eps.eval(w));
        }
        Ok(SignedPermMatrix {
            g: table.genus(),
            sector,
            perm,
            signs,
        })
    }

    pub fn identity(g: usize, sector: Parity, size: usize) -> Self {
        SignedPermMatrix {
            g,
            sector,
            perm: (0..size).collect(),
            signs: vec![1; size],
        }
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn sector(&self) -> Parity {
        self.sector
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i64] {
        &self.signs
    }

    /// The permutation must be a bijection with unit signs; holds by
    /// construction, re-checkable for tests.
    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.size()];
        for &p in &self.perm {
            if p >= self.size() || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        self.signs.iter().all(|&s| s == 1 || s == -1)
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &SignedPermMatrix) -> SignedPermMatrix {
        assert_eq!(self.size(), other.size());
        let n = self.size();
        let mut perm = vec![0; n];
        let mut signs = vec![0; n];
        for m in 0..n {
            perm[m] = self.perm[other.perm[m]];
            signs[m] = other.signs[m] * self.signs[other.perm[m]];
        }
        SignedPermMatrix {
            g: self.g,
            sector: self.sector,
            perm,
            signs,
        }
    }

    pub fn trace(&self) -> i64 {
        (0..self.size())
            .filter(|&m| self.perm[m] == m)
            .map(|m| self.signs[m])
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
            && self.signs.iter().all(|&s| s == 1)
    }

    /// Dense product `R * M` for a row-major `n x n` integer matrix.
    pub fn mul_dense_left(&self, m: &[i64], n: usize) -> Vec<i64> {
        let mut out = vec![0i64; n * n];
        for k in 0..n {
            let row = self.perm[k];
            let s = self.signs[k];
            for j in 0..n {
                out[row * n + j] += s * m[k * n + j];
            }
        }
        out
    }

    /// Dense product `M * R`.
    pub fn mul_dense_right(&self, m: &[i64], n: usize) -> Vec<i64> {
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = m[i * n + self.perm[j]] * self.signs[j];
            }
        }
        out
    }

    pub fn apply_rational(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.size());
        let mut out = vec![BigRational::from_integer(0.into()); v.len()];
        for m in 0..v.len() {
            out[self.perm[m]] = BigRational::from_integer(self.signs[m].into()) * &v[m];
        }
        out
    }
}

/// A basis function of the induced representation: zero outside the coset
/// `H(base) sigma_m`, and `eps_base(h) eps_m(sigma_m)` at `h sigma_m`.
pub struct InducedFunction {
    base: Characteristic,
    m: Characteristic,
    coset_rep: SymplecticF2,
}

impl InducedFunction {
    /// Builds the basis function attached to `m`, with the base
    /// characteristic implied by the parity of `m`.
    pub fn new(m: &Characteristic) -> Result<Self> {
        let base = match m.parity() {
            Parity::Even => Characteristic::zero(m.genus()),
            Parity::Odd => Characteristic::odd_base(m.genus()),
        };
        let coset_rep = transporter(m, &base)?;
        Ok(InducedFunction {
            base,
            m: *m,
            coset_rep,
        })
    }

    pub fn base(&self) -> &Characteristic {
        &self.base
    }

    pub fn coset_rep(&self) -> &SymplecticF2 {
        &self.coset_rep
    }

    /// Value at a group element; lazy evaluation through the stabilizer
    /// membership test, no tables.
    pub fn value(&self, at: &SymplecticF2) -> Result<i64> {
        let h = at.mul(&self.coset_rep.inverse())?;
        if h.act(&self.base)? != self.base {
            return Ok(0);
        }
        Ok(h.epsilon(&self.base)? * self.coset_rep.epsilon(&self.m)?)
    }
}

/// Checks that the induced basis function attached to `m` does not depend on
/// the choice of coset representative: `trials` random alternative
/// transporters must all define the same function.
pub fn verify_basis_welldefined(m: &Characteristic, trials: usize, seed: u64) -> Result<bool> {
    let g = m.genus();
    let f = InducedFunction::new(m)?;
    let sigma0 = f.coset_rep();
    let eps0 = sigma0.epsilon(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let w = crate::group::random_word(g, 16, &mut rng);
        let moved = w.act(m)?;
        let back = transporter(&moved, f.base())?;
        let sigma = back.mul(&w)?;
        debug_assert_eq!(sigma.act(m)?, *f.base());
        // same function iff eps_m(sigma) = eps_base(h) eps_m(sigma0) for
        // h = sigma sigma0^(-1) in H(base)
        let h = sigma.mul(&sigma0.inverse())?;
        if h.act(f.base())? != *f.base() {
            return Ok(false);
        }
        if sigma.epsilon(m)? != h.epsilon(f.base())? * eps0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Character value `chi(sigma)`: the trace of the signed (or unsigned)
/// permutation action, summed over fixed characteristics only.
pub fn character_value(
    sigma: &SymplecticF2,
    sector: Parity,
    signed: bool,
    table: &CharTable,
) -> i64 {
    let act = sigma.action();
    let eps = sigma.epsilon_table();
    let mut chi = 0i64;
    for m in table.sector(sector) {
        let w = m.word();
        if act.apply(w) == w {
            chi += if signed { eps.eval(w) } else { 1 };
        }
    }
    chi
}

/// `<chi, chi> = (1/|G|) sum_sigma chi(sigma)^2`, streamed over an existing
/// enumeration without storing matrices.
pub fn character_norm_with(
    group: &GroupEnumeration,
    sector: Parity,
    signed: bool,
) -> Ratio<i64> {
    let g = group.genus();
    let table = CharTable::new(g);
    let words: Vec<u64> = table.sector(sector).iter().map(|m| m.word()).collect();
    let mut total: i64 = 0;
    for code in group.codes() {
        let sigma = SymplecticF2::decode(g, *code);
        let act = sigma.action();
        let eps = sigma.epsilon_table();
        let mut chi = 0i64;
        for &w in &words {
            if act.apply(w) == w {
                chi += if signed { eps.eval(w) } else { 1 };
            }
        }
        total += chi * chi;
    }
    Ratio::new(total, group.order() as i64)
}

/// Convenience wrapper that enumerates the group first (genus at most 3).
pub fn character_norm(g: usize, sector: Parity, signed: bool) -> Result<Ratio<i64>> {
    let group = GroupEnumeration::enumerate(g)?;
    Ok(character_norm_with(&group, sector, signed))
}

/// Exact invariance of the span of `basis` under the sampled elements:
/// every image `R(sigma) v` must stay inside the span.
pub fn invariant_subspace_check(
    basis: &[Vec<BigRational>],
    sector: Parity,
    samples: &[SymplecticF2],
) -> Result<bool> {
    if basis.is_empty() {
        return Ok(true);
    }
    let n = basis[0].len();
    if basis.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension(
            "basis vectors of unequal lengths".into(),
        ));
    }
    for sigma in samples {
        let table = CharTable::new(sigma.genus());
        if table.sector(sector).len() != n {
            return Err(Error::Dimension(format!(
                "basis length {} does not match the {} sector of genus {}",
                n,
                sector,
                sigma.genus()
            )));
        }
        let r = SignedPermMatrix::rep_matrix(sigma, sector, &table)?;
        for v in basis {
            let image = r.apply_rational(v);
            if !exact::in_span(basis, &image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
