//! The symplectic group over `F_2`, its affine action on characteristics and
//! the sign character attached to that action.
//!
//! For `sigma = [A B; C D]` the affine action is
//! `sigma{m} = sigma'^(-1) m + ((C D')_0; (A B')_0)` where `X_0` denotes the
//! diagonal of `X` as a column, and the sign character is
//! `eps_m(sigma) = (-1)^(tr(B'C) + a'(B'D)a + b'(A'C)b)`.
//! Over `F_2` one has `sigma'^(-1) = [D C; B A]`, so both maps reduce to a
//! handful of word operations; [`AffineAction`] and [`EpsilonTable`] cache the
//! per-element data for the enumeration loops.

use crate::chars::Characteristic;
use crate::error::{Error, Result};
use crate::f2::{mask, parity, F2Matrix};

/// An element of `Sp(g, F_2)`, validated at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymplecticF2 {
    g: usize,
    mat: F2Matrix,
}

impl SymplecticF2 {
    /// Wraps a `2g x 2g` matrix after checking `sigma' J sigma = J` for
    /// `J = [0 I; I 0]`.
    pub fn new(mat: F2Matrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() % 2 != 0 {
            return Err(Error::Dimension(format!(
                "symplectic matrix must be 2g x 2g, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let g = mat.nrows() / 2;
        let j = Self::j_mat(g);
        let lhs = mat.transpose().mul(&j)?.mul(&mat)?;
        if lhs != j {
            return Err(Error::NotSymplectic);
        }
        Ok(SymplecticF2 { g, mat })
    }

    fn j_mat(g: usize) -> F2Matrix {
        F2Matrix::from_fn(2 * g, 2 * g, |i, j| j == (i + g) % (2 * g))
    }

    pub fn identity(g: usize) -> Self {
        SymplecticF2 {
            g,
            mat: F2Matrix::identity(2 * g),
        }
    }

    /// The element `J = [0 I; I 0]`.
    pub fn j(g: usize) -> Self {
        SymplecticF2 {
            g,
            mat: Self::j_mat(g),
        }
    }

    /// The translation `[I S; 0 I]` for symmetric `S`.
    pub fn translation(s: &F2Matrix) -> Result<Self> {
        if !s.is_symmetric() {
            return Err(Error::InvalidArgument(
                "translation block must be symmetric".into(),
            ));
        }
        let g = s.nrows();
        let id = F2Matrix::identity(g);
        let zero = F2Matrix::zeros(g, g);
        Ok(SymplecticF2 {
            g,
            mat: F2Matrix::from_blocks(&id, s, &zero, &id),
        })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn matrix(&self) -> &F2Matrix {
        &self.mat
    }

    pub fn block_a(&self) -> F2Matrix {
        self.mat.block(0, 0, self.g, self.g)
    }

    pub fn block_b(&self) -> F2Matrix {
        self.mat.block(0, self.g, self.g, self.g)
    }

    pub fn block_c(&self) -> F2Matrix {
        self.mat.block(self.g, 0, self.g, self.g)
    }

    pub fn block_d(&self) -> F2Matrix {
        self.mat.block(self.g, self.g, self.g, self.g)
    }

    pub fn is_identity(&self) -> bool {
        self.mat == F2Matrix::identity(2 * self.g)
    }

    pub fn mul(&self, other: &SymplecticF2) -> Result<SymplecticF2> {
        if self.g != other.g {
            return Err(Error::GenusMismatch(self.g, other.g));
        }
        // products of symplectic matrices are symplectic; skip re-validation
        Ok(SymplecticF2 {
            g: self.g,
            mat: self.mat.mul(&other.mat)?,
        })
    }

    /// `sigma^(-1) = J sigma' J`, a block rearrangement of the transpose.
    pub fn inverse(&self) -> SymplecticF2 {
        let t = self.mat.transpose();
        let g = self.g;
        let a = t.block(0, 0, g, g);
        let b = t.block(0, g, g, g);
        let c = t.block(g, 0, g, g);
        let d = t.block(g, g, g, g);
        SymplecticF2 {
            g,
            mat: F2Matrix::from_blocks(&d, &c, &b, &a),
        }
    }

    /// `sigma'^(-1) = [D C; B A]`.
    pub fn transpose_inverse(&self) -> F2Matrix {
        let (a, b, c, d) = (self.block_a(), self.block_b(), self.block_c(), self.block_d());
        F2Matrix::from_blocks(&d, &c, &b, &a)
    }

    /// Packs the matrix into a `4g^2`-bit word (bit `i*2g + j` is entry
    /// `(i, j)`): the canonical element encoding used by the enumeration.
    pub fn encode(&self) -> u64 {
        let n = 2 * self.g;
        let mut code = 0u64;
        for i in 0..n {
            code |= self.mat.row_word(i) << (i * n);
        }
        code
    }

    pub fn decode(g: usize, code: u64) -> Self {
        let n = 2 * g;
        let rows = (0..n).map(|i| (code >> (i * n)) & mask(n)).collect();
        SymplecticF2 {
            g,
            mat: F2Matrix::from_rows(n, rows),
        }
    }

    /// The affine action on characteristics.
    pub fn act(&self, m: &Characteristic) -> Result<Characteristic> {
        if self.g != m.genus() {
            return Err(Error::GenusMismatch(self.g, m.genus()));
        }
        Ok(Characteristic::from_word(
            self.g,
            self.action().apply(m.word()),
        ))
    }

    /// Precomputes the action `w -> Mw ^ shift` on packed `2g`-bit words.
    pub fn action(&self) -> AffineAction {
        let g = self.g;
        let n = 2 * g;
        let mg = mask(g);
        let mut rows = [0u64; 8];
        // rows of sigma'^(-1) = [D C; B A]
        for i in 0..g {
            let lower = self.mat.row_word(g + i); // [C | D]
            rows[i] = ((lower >> g) & mg) | ((lower & mg) << g);
            let upper = self.mat.row_word(i); // [A | B]
            rows[g + i] = ((upper >> g) & mg) | ((upper & mg) << g);
        }
        // shift = ((C D')_0 ; (A B')_0)
        let mut shift = 0u64;
        for i in 0..g {
            let lower = self.mat.row_word(g + i);
            if parity((lower & mg) & ((lower >> g) & mg)) {
                shift |= 1 << i;
            }
            let upper = self.mat.row_word(i);
            if parity((upper & mg) & ((upper >> g) & mg)) {
                shift |= 1 << (g + i);
            }
        }
        AffineAction { n, rows, shift }
    }

    /// Sign character `eps_m(sigma)`.
    pub fn epsilon(&self, m: &Characteristic) -> Result<i64> {
        if self.g != m.genus() {
            return Err(Error::GenusMismatch(self.g, m.genus()));
        }
        Ok(self.epsilon_table().eval(m.word()))
    }

    /// Precomputes the data of `eps_.(sigma)` for all characteristics.
    pub fn epsilon_table(&self) -> EpsilonTable {
        let g = self.g;
        let mg = mask(g);
        let mut b_rows = [0u64; 4];
        let mut c_rows = [0u64; 4];
        let mut a_rows = [0u64; 4];
        let mut d_rows = [0u64; 4];
        for i in 0..g {
            a_rows[i] = self.mat.row_word(i) & mg;
            b_rows[i] = (self.mat.row_word(i) >> g) & mg;
            c_rows[i] = self.mat.row_word(g + i) & mg;
            d_rows[i] = (self.mat.row_word(g + i) >> g) & mg;
        }
        // tr(B'C) = sum_k <row_k B, row_k C>
        let mut t = false;
        for k in 0..g {
            t ^= parity(b_rows[k] & c_rows[k]);
        }
        // (X'Y) row i = xor of rows k of Y with bit i of row k of X set
        let prod_rows = |x: &[u64; 4], y: &[u64; 4]| {
            let mut out = [0u64; 4];
            for k in 0..g {
                let mut sel = x[k];
                while sel != 0 {
                    let i = sel.trailing_zeros() as usize;
                    out[i] ^= y[k];
                    sel &= sel - 1;
                }
            }
            out
        };
        EpsilonTable {
            g,
            t,
            btd: prod_rows(&b_rows, &d_rows),
            atc: prod_rows(&a_rows, &c_rows),
        }
    }
}

impl std::fmt::Debug for SymplecticF2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SymplecticF2(g={})\n{:?}", self.g, self.mat)
    }
}

/// The affine action of one group element on packed characteristic words.
#[derive(Clone, Copy)]
pub struct AffineAction {
    n: usize,
    rows: [u64; 8],
    shift: u64,
}

impl AffineAction {
    #[inline]
    pub fn apply(&self, word: u64) -> u64 {
        let mut out = self.shift;
        for i in 0..self.n {
            out ^= u64::from(parity(self.rows[i] & word)) << i;
        }
        out
    }
}

/// The sign character of one group element, evaluated on packed words.
#[derive(Clone, Copy)]
pub struct EpsilonTable {
    g: usize,
    t: bool,
    btd: [u64; 4],
    atc: [u64; 4],
}

impl EpsilonTable {
    #[inline]
    pub fn eval(&self, word: u64) -> i64 {
        let mg = mask(self.g);
        let a = word & mg;
        let b = (word >> self.g) & mg;
        let mut x = self.t;
        let mut sel = a;
        while sel != 0 {
            let i = sel.trailing_zeros() as usize;
            x ^= parity(self.btd[i] & a);
            sel &= sel - 1;
        }
        let mut sel = b;
        while sel != 0 {
            let i = sel.trailing_zeros() as usize;
            x ^= parity(self.atc[i] & b);
            sel &= sel - 1;
        }
        if x {
            -1
        } else {
            1
        }
    }
}

/// An element of `Sp(g, Z)`, validated against `J = [0 I; -I 0]`.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerSymplectic {
    g: usize,
    mat: Vec<i64>, // row-major (2g)^2
}

impl IntegerSymplectic {
    pub fn new(g: usize, mat: Vec<i64>) -> Result<Self> {
        let n = 2 * g;
        if mat.len() != n * n {
            return Err(Error::Dimension(format!(
                "integer symplectic needs {} entries, got {}",
                n * n,
                mat.len()
            )));
        }
        let s = IntegerSymplectic { g, mat };
        // sigma' J sigma = J with J = [0 I; -I 0]
        let j = |i: usize, k: usize| -> i64 {
            if k == i + g {
                1
            } else if i == k + g {
                -1
            } else {
                0
            }
        };
        for i in 0..n {
            for k in 0..n {
                let mut acc = 0i64;
                for p in 0..n {
                    for q in 0..n {
                        acc += s.mat[p * n + i] * j(p, q) * s.mat[q * n + k];
                    }
                }
                if acc != j(i, k) {
                    return Err(Error::NotSymplectic);
                }
            }
        }
        Ok(s)
    }

    pub fn identity(g: usize) -> Self {
        let n = 2 * g;
        let mut mat = vec![0; n * n];
        for i in 0..n {
            mat[i * n + i] = 1;
        }
        IntegerSymplectic { g, mat }
    }

    /// The lift `[0 -I; I 0]` of `J`.
    pub fn j_lift(g: usize) -> Self {
        let n = 2 * g;
        let mut mat = vec![0; n * n];
        for i in 0..g {
            mat[i * n + (g + i)] = -1;
            mat[(g + i) * n + i] = 1;
        }
        IntegerSymplectic { g, mat }
    }

    /// The lift `[I S; 0 I]` of a translation (entries of `S` in `{0,1}`).
    pub fn translation_lift(s: &F2Matrix) -> Result<Self> {
        if !s.is_symmetric() {
            return Err(Error::InvalidArgument(
                "translation block must be symmetric".into(),
            ));
        }
        let g = s.nrows();
        let n = 2 * g;
        let mut mat = vec![0; n * n];
        for i in 0..n {
            mat[i * n + i] = 1;
        }
        for i in 0..g {
            for j in 0..g {
                mat[i * n + (g + j)] = i64::from(s.get(i, j));
            }
        }
        Ok(IntegerSymplectic { g, mat })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.mat[i * 2 * self.g + j]
    }

    pub fn block(&self, which: char) -> Vec<i64> {
        let g = self.g;
        let (r0, c0) = match which {
            'A' => (0, 0),
            'B' => (0, g),
            'C' => (g, 0),
            'D' => (g, g),
            _ => panic!("block must be one of A, B, C, D"),
        };
        let mut out = Vec::with_capacity(g * g);
        for i in 0..g {
            for j in 0..g {
                out.push(self.entry(r0 + i, c0 + j));
            }
        }
        out
    }

    pub fn mul(&self, other: &IntegerSymplectic) -> Result<IntegerSymplectic> {
        if self.g != other.g {
            return Err(Error::GenusMismatch(self.g, other.g));
        }
        let n = 2 * self.g;
        let mut mat = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let mut acc = 0;
                for p in 0..n {
                    acc += self.mat[i * n + p] * other.mat[p * n + k];
                }
                mat[i * n + k] = acc;
            }
        }
        Ok(IntegerSymplectic { g: self.g, mat })
    }

    /// Reduction mod 2 into `Sp(g, F_2)`.
    pub fn reduce(&self) -> SymplecticF2 {
        let n = 2 * self.g;
        let m = F2Matrix::from_fn(n, n, |i, j| self.mat[i * n + j].rem_euclid(2) == 1);
        SymplecticF2::new(m).expect("reduction of an integer symplectic matrix is symplectic")
    }

    /// The affine action on integer characteristics, reduced mod 2. Agrees
    /// with the `F_2` action of the reduction.
    pub fn act_mod2(&self, m: &Characteristic) -> Result<Characteristic> {
        self.reduce().act(m)
    }
}

/// Which standard generator an element lifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// The involution swapping the two halves, lifted to `[0 -I; I 0]`.
    Weyl,
    /// A translation `[I S; 0 I]` with its symmetric block.
    Translation { s: F2Matrix },
}

/// One generator together with its integer lift.
#[derive(Clone)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub element: SymplecticF2,
    pub lift: IntegerSymplectic,
}

impl Generator {
    pub fn label(&self) -> String {
        match &self.kind {
            GeneratorKind::Weyl => "J".to_string(),
            GeneratorKind::Translation { s } => {
                let g = s.nrows();
                let mut support = Vec::new();
                for i in 0..g {
                    for j in i..g {
                        if s.get(i, j) {
                            support.push(format!("{}{}", i + 1, j + 1));
                        }
                    }
                }
                format!("T{}", support.join("+"))
            }
        }
    }
}

/// The standard generating set: `J` plus the translations for the symmetric
/// elementary matrices `E_ii` and `E_ij + E_ji`.
pub struct GeneratorSet {
    g: usize,
    gens: Vec<Generator>,
}

impl GeneratorSet {
    pub fn new(g: usize) -> Self {
        assert!(g >= 1);
        let mut gens = vec![Generator {
            kind: GeneratorKind::Weyl,
            element: SymplecticF2::j(g),
            lift: IntegerSymplectic::j_lift(g),
        }];
        let mut blocks = Vec::new();
        for i in 0..g {
            let mut s = F2Matrix::zeros(g, g);
            s.set(i, i, true);
            blocks.push(s);
        }
        for i in 0..g {
            for j in (i + 1)..g {
                let mut s = F2Matrix::zeros(g, g);
                s.set(i, j, true);
                s.set(j, i, true);
                blocks.push(s);
            }
        }
        for s in blocks {
            gens.push(Generator {
                kind: GeneratorKind::Translation { s: s.clone() },
                element: SymplecticF2::translation(&s).expect("elementary blocks are symmetric"),
                lift: IntegerSymplectic::translation_lift(&s).expect("symmetric"),
            });
        }
        GeneratorSet { g, gens }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator> {
        self.gens.iter()
    }

    pub fn elements(&self) -> impl Iterator<Item = &SymplecticF2> {
        self.gens.iter().map(|gen| &gen.element)
    }
}
