//! The pairing operators `M+` and `M-` on the even and odd characteristic
//! bases, their exact integer eigenspace decompositions, and the rational
//! spectral projectors.
//!
//! `M+` (even sector) has eigenvalues `-2^(g-1)` and `2^g`; `M-` (odd
//! sector) has eigenvalues `2^(g-1)` and `-2^g`. In both sectors the two
//! eigenspaces are written `V` (the `+-2^(g-1)` one, which encodes the
//! relations) and `W` (the `-+2^g` one). Their dimensions are
//!
//! ```text
//! dim V+- = (2^(2g) - 1) / 3
//! dim W+  = (2^g + 1)(2^(g-1) + 1) / 3
//! dim W-  = (2^g - 1)(2^(g-1) - 1) / 3
//! ```
//!
//! The eigenvalue bookkeeping is hardwired to this spectrum; any kernel
//! dimension mismatch aborts with a falsification diagnostic instead of
//! silently continuing.

use crate::chars::{CharTable, Parity};
use crate::error::{Error, Result};
use crate::exact;
use crate::rep::SignedPermMatrix;
use crate::symplectic::SymplecticF2;
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;

/// Largest genus for which the operators are materialized (`k_4^+ = 136`).
pub const MAX_FAY_GENUS: usize = 4;

/// The closed-form eigenspace dimensions for one genus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FayDimensions {
    pub v_plus: usize,
    pub w_plus: usize,
    pub v_minus: usize,
    pub w_minus: usize,
}

pub fn dimensions(g: usize) -> FayDimensions {
    let v = ((1usize << (2 * g)) - 1) / 3;
    FayDimensions {
        v_plus: v,
        w_plus: ((1 << g) + 1) * ((1 << (g - 1)) + 1) / 3,
        v_minus: v,
        w_minus: ((1 << g) - 1) * ((1 << (g - 1)) - 1) / 3,
    }
}

/// The symmetric `+-1` matrix `(e(m, n))` over one parity sector, columns and
/// rows in canonical characteristic order.
pub struct FayOperator {
    g: usize,
    sector: Parity,
    n: usize,
    mat: Vec<i64>, // row-major n*n
}

impl FayOperator {
    pub fn build(g: usize, sector: Parity) -> Result<Self> {
        if g == 0 || g > MAX_FAY_GENUS {
            return Err(Error::GenusOutOfRange {
                what: "pairing operator",
                got: g,
                max: MAX_FAY_GENUS,
            });
        }
        let table = CharTable::new(g);
        let chars = table.sector(sector);
        let n = chars.len();
        let mut mat = vec![0i64; n * n];
        for (i, m) in chars.iter().enumerate() {
            for (j, other) in chars.iter().enumerate() {
                mat[i * n + j] = m.pairing(other)?;
            }
        }
        Ok(FayOperator { g, sector, n, mat })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn sector(&self) -> Parity {
        self.sector
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.mat[i * self.n + j]
    }

    /// The two eigenvalues, in the order (relation space, complement):
    /// even `(-2^(g-1), 2^g)`, odd `(2^(g-1), -2^g)`.
    pub fn eigenvalues(&self) -> (i64, i64) {
        let half = 1i64 << (self.g - 1);
        let full = 1i64 << self.g;
        match self.sector {
            Parity::Even => (-half, full),
            Parity::Odd => (half, -full),
        }
    }

    /// Exact check of `M^2 = c1 M + c2 I` with `c1 = +-2^(g-1)` and
    /// `c2 = 2^(2g-1)`, the matrix form of the two-eigenvalue claim.
    pub fn quadratic_relation_holds(&self) -> bool {
        let (lv, lw) = self.eigenvalues();
        let c1 = lv + lw;
        let c2 = -lv * lw;
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = 0i64;
                for k in 0..self.n {
                    acc += self.entry(i, k) * self.entry(k, j);
                }
                let want = c1 * self.entry(i, j) + if i == j { c2 } else { 0 };
                if acc != want {
                    return false;
                }
            }
        }
        true
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.entry(i, i)).sum()
    }

    /// Whether `(M - lambda I) v = 0` exactly.
    pub fn is_in_eigenspace(&self, lambda: i64, v: &[BigInt]) -> bool {
        if v.len() != self.n {
            return false;
        }
        for i in 0..self.n {
            let mut acc = BigInt::zero();
            for j in 0..self.n {
                acc += self.entry(i, j) * &v[j];
            }
            acc -= lambda * &v[i];
            if !acc.is_zero() {
                return false;
            }
        }
        true
    }

    /// Exact commutation `R(sigma) M = M R(sigma)` with the signed
    /// permutation action on the same sector.
    pub fn commutes_with(&self, sigma: &SymplecticF2) -> Result<bool> {
        if sigma.genus() != self.g {
            return Err(Error::GenusMismatch(sigma.genus(), self.g));
        }
        let table = CharTable::new(self.g);
        let r = SignedPermMatrix::rep_matrix(sigma, self.sector, &table)?;
        // (R M)_{ij} = sign_j(R applied to column) ... use dense products
        let rm = r.mul_dense_left(&self.mat, self.n);
        let mr = r.mul_dense_right(&self.mat, self.n);
        Ok(rm == mr)
    }

    /// Text dump: `rows cols` header, then rows of `+-1` entries.
    pub fn dump_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.n);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.entry(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// An exact eigenspace: primitive integer vectors spanning the rational
/// kernel of `M - lambda I`.
#[derive(Clone, Debug)]
pub struct ExactSubspaceBasis {
    pub eigenvalue: i64,
    pub vectors: Vec<Vec<BigInt>>,
}

impl ExactSubspaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Exact kernels of `M - lambda I` for the two declared eigenvalues, via
/// fraction-free integer elimination. The kernel dimensions must sum to the
/// sector size; anything else falsifies the two-eigenvalue spectrum and is a
/// hard error.
pub fn exact_eigenspaces(op: &FayOperator) -> Result<(ExactSubspaceBasis, ExactSubspaceBasis)> {
    let (lv, lw) = op.eigenvalues();
    let kernel_of = |lambda: i64| -> Vec<Vec<BigInt>> {
        let n = op.size();
        let mut shifted = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                shifted[i][j] = op.entry(i, j) - if i == j { lambda } else { 0 };
            }
        }
        exact::nullspace(&shifted)
    };
    let v = ExactSubspaceBasis {
        eigenvalue: lv,
        vectors: kernel_of(lv),
    };
    let w = ExactSubspaceBasis {
        eigenvalue: lw,
        vectors: kernel_of(lw),
    };
    for (name, basis) in [("V", &v), ("W", &w)] {
        for vec in &basis.vectors {
            if !op.is_in_eigenspace(basis.eigenvalue, vec) {
                return Err(Error::SpectrumFalsified(format!(
                    "kernel vector of {name} fails exact eigenvector check"
                )));
            }
        }
    }
    if v.dim() + w.dim() != op.size() {
        return Err(Error::SpectrumFalsified(format!(
            "eigenspace dimensions {} + {} do not sum to {}: spectrum is not {{{}, {}}}",
            v.dim(),
            w.dim(),
            op.size(),
            lv,
            lw
        )));
    }
    Ok((v, w))
}

/// The rational spectral projector `(M - mu I) / (lambda - mu)` onto the
/// `lambda`-eigenspace, stored as an integer matrix over a common
/// denominator.
pub struct RationalProjector {
    n: usize,
    num: Vec<i64>,
    den: i64,
}

impl RationalProjector {
    pub fn entry(&self, i: usize, j: usize) -> Ratio<i64> {
        Ratio::new(self.num[i * self.n + j], self.den)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Rank of a projector is its trace; exactness of the division is part
    /// of the check.
    pub fn rank(&self) -> Result<usize> {
        let tr: i64 = (0..self.n).map(|i| self.num[i * self.n + i]).sum();
        if tr % self.den != 0 || tr / self.den < 0 {
            return Err(Error::SpectrumFalsified(
                "projector trace is not a nonnegative integer".into(),
            ));
        }
        Ok((tr / self.den) as usize)
    }

    pub fn is_idempotent(&self) -> bool {
        // (num/den)^2 = num/den  <=>  num^2 = den * num
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc: i64 = 0;
                for k in 0..self.n {
                    acc += self.num[i * self.n + k] * self.num[k * self.n + j];
                }
                if acc != self.den * self.num[i * self.n + j] {
                    return false;
                }
            }
        }
        true
    }

    /// `M P = lambda P` exactly.
    pub fn is_eigen_projector(&self, op: &FayOperator, lambda: i64) -> bool {
        if op.size() != self.n {
            return false;
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc: i64 = 0;
                for k in 0..self.n {
                    acc += op.entry(i, k) * self.num[k * self.n + j];
                }
                if acc != lambda * self.num[i * self.n + j] {
                    return false;
                }
            }
        }
        true
    }

    pub fn apply(&self, v: &[Ratio<i64>]) -> Vec<Ratio<i64>> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = Ratio::new(0, 1);
                for j in 0..self.n {
                    acc += Ratio::new(self.num[i * self.n + j], self.den) * v[j];
                }
                acc
            })
            .collect()
    }
}

/// Builds the projector onto the `which`-eigenspace of `op`.
pub fn projector(op: &FayOperator, which: i64) -> Result<RationalProjector> {
    let (lv, lw) = op.eigenvalues();
    let mu = if which == lv {
        lw
    } else if which == lw {
        lv
    } else {
        return Err(Error::InvalidArgument(format!(
            "{} is not an eigenvalue of this operator (expected {} or {})",
            which, lv, lw
        )));
    };
    let n = op.size();
    let mut num = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            num[i * n + j] = op.entry(i, j) - if i == j { mu } else { 0 };
        }
    }
    let den = which - mu;
    // normalize the denominator to be positive
    let (num, den) = if den < 0 {
        (num.into_iter().map(|x| -x).collect(), -den)
    } else {
        (num, den)
    };
    Ok(RationalProjector { n, num, den })
}

/// The vector `(2^(g-1) + 1) e_0 + sum_(m != 0) e_m`, the even-sector
/// `2^g`-eigenvector supported on the orbit structure `{0} u rest`.
pub fn w_plus_distinguished(g: usize) -> Vec<BigInt> {
    let n = crate::chars::count_even(g);
    let mut v = vec![BigInt::from(1); n];
    v[0] = BigInt::from((1i64 << (g - 1)) + 1);
    v
}

/// The vector `(2^g - 1) e_0 - sum_(m != 0) e_m`, the even-sector
/// `-2^(g-1)`-eigenvector of the same shape.
pub fn v_plus_distinguished(g: usize) -> Vec<BigInt> {
    let n = crate::chars::count_even(g);
    let mut v = vec![BigInt::from(-1); n];
    v[0] = BigInt::from((1i64 << g) - 1);
    v
}
