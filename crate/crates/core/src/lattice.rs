//! Exact arithmetic on even unimodular lattices presented as p·H ⊕ q·E8(ε):
//! vector invariants, constructive hyperbolic splitting via Eichler
//! transvections, and the commuting involution pair acting by block signs.
//!
//! Basis conventions, which also fix the JSON encoding of vectors and
//! matrices: each hyperbolic block H has basis x, y with x² = y² = 0,
//! x·y = 1, stored as consecutive coordinates; each E8 block uses the
//! Bourbaki root basis, with Gram matrix the E8 Cartan matrix (diagonal +2)
//! for ε = +1 and its negative (diagonal −2) for ε = −1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// E8 Cartan matrix in the Bourbaki ordering (nodes 1,3,4,...,8 form the
/// long chain, node 2 attaches to node 4). Determinant 1.
pub const E8_CARTAN: [[i64; 8]; 8] = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
];

/// Integer vector in the block basis of an owning [`LatticeForm`].
pub type LatticeVector = Vec<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Hyperbolic,
    E8,
}

#[derive(Debug, Clone, Copy)]
pub struct Block {
    pub kind: BlockKind,
    pub offset: usize,
}

impl Block {
    pub fn len(&self) -> usize {
        match self.kind {
            BlockKind::Hyperbolic => 2,
            BlockKind::E8 => 8,
        }
    }
}

/// An even unimodular form p·H ⊕ q·E8(ε) with a concrete block-basis Gram
/// matrix. All E8 summands share the sign ε.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeForm {
    #[serde(rename = "h")]
    num_hyperbolic: usize,
    #[serde(rename = "e8")]
    num_e8: usize,
    e8_sign: i64,
}

impl LatticeForm {
    pub fn new(num_hyperbolic: usize, num_e8: usize, e8_sign: i64) -> Result<Self> {
        if e8_sign != 1 && e8_sign != -1 {
            return Err(Error::InvalidInput(format!("e8_sign must be +1 or -1, got {e8_sign}")));
        }
        Ok(LatticeForm { num_hyperbolic, num_e8, e8_sign })
    }

    pub fn num_hyperbolic(&self) -> usize {
        self.num_hyperbolic
    }

    pub fn num_e8(&self) -> usize {
        self.num_e8
    }

    pub fn e8_sign(&self) -> i64 {
        self.e8_sign
    }

    pub fn rank(&self) -> usize {
        2 * self.num_hyperbolic + 8 * self.num_e8
    }

    pub fn signature(&self) -> i64 {
        8 * self.e8_sign * self.num_e8 as i64
    }

    pub fn blocks(&self) -> Vec<Block> {
        let mut out = Vec::with_capacity(self.num_hyperbolic + self.num_e8);
        for k in 0..self.num_hyperbolic {
            out.push(Block { kind: BlockKind::Hyperbolic, offset: 2 * k });
        }
        for k in 0..self.num_e8 {
            out.push(Block { kind: BlockKind::E8, offset: 2 * self.num_hyperbolic + 8 * k });
        }
        out
    }

    fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: v.len() });
        }
        Ok(())
    }

    /// Pairing vector G·v, computed blockwise.
    pub fn pairings(&self, v: &[i64]) -> Result<Vec<i64>> {
        self.check_len(v)?;
        let mut out = vec![0i64; v.len()];
        for b in self.blocks() {
            let o = b.offset;
            match b.kind {
                BlockKind::Hyperbolic => {
                    out[o] = v[o + 1];
                    out[o + 1] = v[o];
                }
                BlockKind::E8 => {
                    for r in 0..8 {
                        let mut acc: i128 = 0;
                        for c in 0..8 {
                            acc += (self.e8_sign * E8_CARTAN[r][c]) as i128 * v[o + c] as i128;
                        }
                        out[o + r] = i64::try_from(acc).map_err(|_| Error::Overflow("pairings"))?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Bilinear form v·w.
    pub fn inner(&self, v: &[i64], w: &[i64]) -> Result<i64> {
        self.check_len(v)?;
        self.check_len(w)?;
        let gw = self.pairings(w)?;
        let mut acc: i128 = 0;
        for (a, b) in v.iter().zip(gw.iter()) {
            acc += *a as i128 * *b as i128;
        }
        i64::try_from(acc).map_err(|_| Error::Overflow("inner product"))
    }

    pub fn basis_vector(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0i64; self.rank()];
        v[i] = 1;
        v
    }

    /// Full Gram matrix; avoid on very large forms.
    pub fn gram_matrix(&self) -> Result<IntMatrix> {
        let n = self.rank();
        let mut g = IntMatrix::zeros(n);
        for b in self.blocks() {
            let o = b.offset;
            match b.kind {
                BlockKind::Hyperbolic => {
                    g[(o, o + 1)] = 1;
                    g[(o + 1, o)] = 1;
                }
                BlockKind::E8 => {
                    for r in 0..8 {
                        for c in 0..8 {
                            g[(o + r, o + c)] = self.e8_sign * E8_CARTAN[r][c];
                        }
                    }
                }
            }
        }
        Ok(g)
    }

    /// Checks MᵀGM = G exactly.
    pub fn is_isometry(&self, m: &IntMatrix) -> Result<bool> {
        if m.size() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: m.size() });
        }
        let n = self.rank();
        // GM blockwise, then compare MᵀGM against G.
        let mut gm = IntMatrix::zeros(n);
        for j in 0..n {
            let col: Vec<i64> = (0..n).map(|i| m[(i, j)]).collect();
            let gcol = self.pairings(&col)?;
            for i in 0..n {
                gm[(i, j)] = gcol[i];
            }
        }
        let mtgm = m.transpose().mul(&gm)?;
        Ok(mtgm == self.gram_matrix()?)
    }
}

/// An isometry of a [`LatticeForm`], stored with its exact inverse.
/// MᵀGM = G forces det M = ±1, so no separate determinant check is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isometry {
    m: IntMatrix,
    minv: IntMatrix,
}

impl Isometry {
    pub fn identity(n: usize) -> Self {
        Isometry { m: IntMatrix::identity(n), minv: IntMatrix::identity(n) }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn inverse_matrix(&self) -> &IntMatrix {
        &self.minv
    }

    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        self.m.apply(v)
    }

    /// Wraps a matrix pair after verifying inverse and isometry conditions.
    pub fn from_parts(form: &LatticeForm, m: IntMatrix, minv: IntMatrix) -> Result<Self> {
        let n = m.size();
        if m.mul(&minv)? != IntMatrix::identity(n) {
            return Err(Error::Internal("inverse pair does not multiply to identity".into()));
        }
        if !form.is_isometry(&m)? {
            return Err(Error::NotAnIsometry);
        }
        Ok(Isometry { m, minv })
    }
}

impl Serialize for Isometry {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.m.size();
        let mut seq = ser.serialize_seq(Some(n))?;
        for i in 0..n {
            let row: Vec<i64> = (0..n).map(|j| self.m[(i, j)]).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VectorInvariants {
    pub divisibility: i64,
    pub square: i64,
    pub characteristic: bool,
}

/// Divisibility (gcd of coordinates, 0 for the zero vector), self-intersection
/// and characteristic type of a vector. All three are isometry invariants.
pub fn vector_invariants(form: &LatticeForm, v: &[i64]) -> Result<VectorInvariants> {
    form.check_len(v)?;
    let divisibility = v.iter().fold(0i64, |g, &x| gcd(g, x));
    let square = form.inner(v, v)?;
    // v is characteristic iff v·w = w² mod 2 for all w; on an even lattice
    // this reduces to all basis pairings being even.
    let characteristic = form.pairings(v)?.iter().all(|p| p % 2 == 0);
    Ok(VectorInvariants { divisibility, square, characteristic })
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Descriptor for the standard intersection forms handled by [`catalog_form`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormDescriptor {
    /// Spin elliptic surface E(n)_{i,j}: requires n even and i·j odd.
    Elliptic { n: i64, i: i64, j: i64 },
    /// Spin complete intersection, described by its computed invariants.
    CompleteIntersection { b_plus: i64, sigma: i64, spin: bool },
}

/// Intersection form of a spin surface: (2n−1)·H ⊕ n·E8(−1) for E(n)_{i,j},
/// and b₊·H ⊕ (−σ/8)·E8(−1) for a spin complete intersection.
pub fn catalog_form(desc: &FormDescriptor) -> Result<LatticeForm> {
    match *desc {
        FormDescriptor::Elliptic { n, i, j } => {
            if n < 1 || i < 1 || j < 1 {
                return Err(Error::InvalidInput(format!(
                    "invalid E(n)_{{i,j}} data ({n},{i},{j})"
                )));
            }
            if n % 2 != 0 || (i * j) % 2 == 0 {
                return Err(Error::NotSpin(format!(
                    "E({n})_{{{i},{j}}} is spin iff n is even and ij is odd"
                )));
            }
            LatticeForm::new((2 * n - 1) as usize, n as usize, -1)
        }
        FormDescriptor::CompleteIntersection { b_plus, sigma, spin } => {
            if !spin {
                return Err(Error::NotSpin(
                    "complete intersection with odd canonical multiple".into(),
                ));
            }
            if sigma % 8 != 0 {
                return Err(Error::IncompatibleSignature(sigma));
            }
            let q = -sigma / 8;
            if q < 0 || b_plus < 1 {
                return Err(Error::IncompatibleSignature(sigma));
            }
            LatticeForm::new(b_plus as usize, q as usize, -1)
        }
    }
}

/// Reads off one ±1 scalar per block, failing unless the matrix is exactly
/// blockwise ±identity.
pub fn block_scalars(form: &LatticeForm, m: &IntMatrix) -> Result<Vec<i64>> {
    let n = form.rank();
    if m.size() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.size() });
    }
    let blocks = form.blocks();
    let mut scalars = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let o = b.offset;
        let len = b.len();
        let eps = m[(o, o)];
        if eps != 1 && eps != -1 {
            return Err(Error::UnrecognizedBlockShape);
        }
        for r in 0..len {
            for c in 0..n {
                let expected = if c >= o && c < o + len {
                    if c == o + r {
                        eps
                    } else {
                        0
                    }
                } else {
                    0
                };
                if m[(o + r, c)] != expected {
                    return Err(Error::UnrecognizedBlockShape);
                }
            }
        }
        scalars.push(eps);
    }
    Ok(scalars)
}

// ---------------------------------------------------------------------------
// Hyperbolic splitting via Eichler transvections
// ---------------------------------------------------------------------------

/// Working state for the splitting: the moving vector together with the
/// accumulated isometry and its inverse. Invariant: v = phi · c0.
struct SplitState<'a> {
    form: &'a LatticeForm,
    v: Vec<i64>,
    phi: IntMatrix,
    phi_inv: IntMatrix,
}

impl<'a> SplitState<'a> {
    fn new(form: &'a LatticeForm, c0: &[i64]) -> Self {
        let n = form.rank();
        SplitState {
            form,
            v: c0.to_vec(),
            phi: IntMatrix::identity(n),
            phi_inv: IntMatrix::identity(n),
        }
    }

    fn reg(&self, idx: usize) -> Result<i64> {
        self.form.inner(&self.v, &self.form.basis_vector(idx))
    }

    /// Applies the Eichler transvection E_{u,w}(x) = x + (x·u)w − (x·w)u − ½w²(x·u)u
    /// to v, phi and phi⁻¹. Requires u² = 0 and u·w = 0.
    fn transvect(&mut self, u: &[i64], w: &[i64]) -> Result<()> {
        debug_assert_eq!(self.form.inner(u, u)?, 0);
        debug_assert_eq!(self.form.inner(u, w)?, 0);
        let n = self.form.rank();
        let gu = self.form.pairings(u)?;
        let gw = self.form.pairings(w)?;
        let half_w2 = self.form.inner(w, w)? / 2;

        // v update
        let vu = dot(&self.v, &gu)?;
        let vw = dot(&self.v, &gw)?;
        for i in 0..n {
            let delta = (vu as i128) * (w[i] as i128)
                - (vw as i128) * (u[i] as i128)
                - (half_w2 as i128) * (vu as i128) * (u[i] as i128);
            self.v[i] = add_checked(self.v[i], delta)?;
        }

        // phi ← T·phi as three rank-one updates: T = I + w·guᵀ − u·gwᵀ − ½w²·u·guᵀ
        let ru = left_row(&gu, &self.phi)?; // guᵀ·phi
        let rw = left_row(&gw, &self.phi)?;
        for i in 0..n {
            for j in 0..n {
                let delta = (w[i] as i128) * (ru[j] as i128)
                    - (u[i] as i128) * (rw[j] as i128)
                    - (half_w2 as i128) * (u[i] as i128) * (ru[j] as i128);
                self.phi[(i, j)] = add_checked(self.phi[(i, j)], delta)?;
            }
        }

        // phi⁻¹ ← phi⁻¹·T⁻¹ with T⁻¹ = E_{u,−w}: M − (Mw)guᵀ + (Mu)gwᵀ − ½w²(Mu)guᵀ
        let mw = right_col(&self.phi_inv, w)?;
        let mu = right_col(&self.phi_inv, u)?;
        for i in 0..n {
            for j in 0..n {
                let delta = -(mw[i] as i128) * (gu[j] as i128) + (mu[i] as i128) * (gw[j] as i128)
                    - (half_w2 as i128) * (mu[i] as i128) * (gu[j] as i128);
                self.phi_inv[(i, j)] = add_checked(self.phi_inv[(i, j)], delta)?;
            }
        }
        Ok(())
    }

    fn scaled_basis(&self, idx: usize, k: i64) -> Vec<i64> {
        let mut w = vec![0i64; self.form.rank()];
        w[idx] = k;
        w
    }

    // Register moves between the first two hyperbolic planes. Naming:
    // r1 = v·x₁, s1 = v·y₁, r2 = v·x₂, s2 = v·y₂ (basis indices 0,1,2,3).

    /// r1 += k·r2, side effect s2 −= k·s1.
    fn add_r1_from_r2(&mut self, k: i64) -> Result<()> {
        let u = self.form.basis_vector(2);
        let w = self.scaled_basis(1, k);
        self.transvect(&u, &w)
    }

    /// r2 += k·r1, side effect s1 −= k·s2.
    fn add_r2_from_r1(&mut self, k: i64) -> Result<()> {
        let u = self.form.basis_vector(0);
        let w = self.scaled_basis(3, k);
        self.transvect(&u, &w)
    }

    /// r1 += k·s2, side effect r2 −= k·s1.
    fn add_r1_from_s2(&mut self, k: i64) -> Result<()> {
        let u = self.form.basis_vector(3);
        let w = self.scaled_basis(1, k);
        self.transvect(&u, &w)
    }

    /// s2 += k·r1, side effect s1 −= k·r2.
    fn add_s2_from_r1(&mut self, k: i64) -> Result<()> {
        let u = self.form.basis_vector(0);
        let w = self.scaled_basis(2, k);
        self.transvect(&u, &w)
    }

    /// s2 += k·s1, side effect r1 −= k·r2.
    fn add_s2_from_s1(&mut self, k: i64) -> Result<()> {
        let u = self.form.basis_vector(1);
        let w = self.scaled_basis(2, k);
        self.transvect(&u, &w)
    }

    /// s2 −= k·t_b (clean when r2 = 0); u = x₂, w = k·e_b for b outside planes 1,2.
    fn fold_rest_into_s2(&mut self, b: usize, k: i64) -> Result<()> {
        let u = self.form.basis_vector(2);
        let w = self.scaled_basis(b, k);
        self.transvect(&u, &w)
    }

    /// s1 −= t_b − ½e_b²·r1; u = x₁, w = e_b for b outside plane 1.
    fn seed_s1_from_rest(&mut self, b: usize) -> Result<()> {
        let u = self.form.basis_vector(0);
        let w = self.scaled_basis(b, 1);
        self.transvect(&u, &w)
    }

    /// Euclid on (r1, r2) or (r1, s2); ends with the second register 0 and
    /// r1 = ±gcd of the entering pair.
    fn euclid(&mut self, with_s2: bool) -> Result<()> {
        loop {
            let second = if with_s2 { self.reg(3)? } else { self.reg(2)? };
            if second == 0 {
                break;
            }
            let first = self.reg(0)?;
            if first == 0 {
                self.add_first(1, with_s2)?;
                self.add_second(-1, with_s2)?;
                break;
            }
            if first.abs() >= second.abs() {
                let q = first.div_euclid(second);
                self.add_first(-q, with_s2)?;
            } else {
                let q = second.div_euclid(first);
                self.add_second(-q, with_s2)?;
            }
        }
        Ok(())
    }

    fn add_first(&mut self, k: i64, with_s2: bool) -> Result<()> {
        if with_s2 {
            self.add_r1_from_s2(k)
        } else {
            self.add_r1_from_r2(k)
        }
    }

    fn add_second(&mut self, k: i64, with_s2: bool) -> Result<()> {
        if with_s2 {
            self.add_s2_from_r1(k)
        } else {
            self.add_r2_from_r1(k)
        }
    }

    /// Kills every component of v outside the first hyperbolic plane;
    /// requires v·x₁ = 1.
    fn cleanup(&mut self) -> Result<()> {
        debug_assert_eq!(self.reg(0)?, 1);
        let n = self.form.rank();
        let mut z = self.v.clone();
        z[0] = 0;
        z[1] = 0;
        if z.iter().all(|&x| x == 0) {
            return Ok(());
        }
        let w: Vec<i64> = z.iter().map(|&x| -x).collect();
        let u = self.form.basis_vector(0);
        self.transvect(&u, &w)?;
        debug_assert!(self.v[2..n].iter().all(|&x| x == 0));
        Ok(())
    }

    /// Applies a ±1 block-diagonal or x↔y swap on the first hyperbolic plane.
    /// Used only by the single-plane randomized fallback.
    fn h1_swap(&mut self) {
        self.v.swap(0, 1);
        let n = self.phi.size();
        for j in 0..n {
            let t = self.phi[(0, j)];
            self.phi[(0, j)] = self.phi[(1, j)];
            self.phi[(1, j)] = t;
        }
        for i in 0..n {
            let t = self.phi_inv[(i, 0)];
            self.phi_inv[(i, 0)] = self.phi_inv[(i, 1)];
            self.phi_inv[(i, 1)] = t;
        }
    }

    fn h1_negate(&mut self) {
        self.v[0] = -self.v[0];
        self.v[1] = -self.v[1];
        let n = self.phi.size();
        for j in 0..n {
            self.phi[(0, j)] = -self.phi[(0, j)];
            self.phi[(1, j)] = -self.phi[(1, j)];
        }
        for i in 0..n {
            self.phi_inv[(i, 0)] = -self.phi_inv[(i, 0)];
            self.phi_inv[(i, 1)] = -self.phi_inv[(i, 1)];
        }
    }
}

fn dot(a: &[i64], b: &[i64]) -> Result<i64> {
    let mut acc: i128 = 0;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += *x as i128 * *y as i128;
    }
    i64::try_from(acc).map_err(|_| Error::Overflow("dot product"))
}

fn add_checked(base: i64, delta: i128) -> Result<i64> {
    i64::try_from(base as i128 + delta).map_err(|_| Error::Overflow("transvection update"))
}

/// Row vector gᵀ·M.
fn left_row(g: &[i64], m: &IntMatrix) -> Result<Vec<i64>> {
    let n = m.size();
    let mut out = vec![0i64; n];
    for j in 0..n {
        let mut acc: i128 = 0;
        for k in 0..n {
            acc += g[k] as i128 * m[(k, j)] as i128;
        }
        out[j] = i64::try_from(acc).map_err(|_| Error::Overflow("row update"))?;
    }
    Ok(out)
}

/// Column vector M·w.
fn right_col(m: &IntMatrix, w: &[i64]) -> Result<Vec<i64>> {
    let n = m.size();
    let mut out = vec![0i64; n];
    for i in 0..n {
        let mut acc: i128 = 0;
        for k in 0..n {
            acc += m[(i, k)] as i128 * w[k] as i128;
        }
        out[i] = i64::try_from(acc).map_err(|_| Error::Overflow("col update"))?;
    }
    Ok(out)
}

/// The Eichler transvection E_{u,w} as a standalone isometry; requires u
/// isotropic and u·w = 0.
pub fn eichler_transvection(form: &LatticeForm, u: &[i64], w: &[i64]) -> Result<Isometry> {
    form.check_len(u)?;
    form.check_len(w)?;
    if form.inner(u, u)? != 0 {
        return Err(Error::Precondition("transvection direction u must be isotropic".into()));
    }
    if form.inner(u, w)? != 0 {
        return Err(Error::Precondition("transvection requires w orthogonal to u".into()));
    }
    let zero = vec![0i64; form.rank()];
    let mut st = SplitState::new(form, &zero);
    st.transvect(u, w)?;
    Isometry::from_parts(form, st.phi, st.phi_inv)
}

/// Constructs an isometry Φ with Φ(c) = d·(m·x + y) supported in the first
/// hyperbolic block, where c = d·c₀ with c₀ primitive and c₀² = 2m.
///
/// For num_hyperbolic ≥ 2 the construction is deterministic (the seed is
/// ignored); for num_hyperbolic = 1 a bounded seeded search over short
/// isometries is attempted and failure is reported honestly.
///
/// The transvection chain can grow matrix entries; all updates are checked
/// and inputs with coordinates beyond a few hundred may fail with a clean
/// Overflow error instead of a wrong answer (|coords| ≤ 256 exercised
/// overflow-free across thousands of random instances).
pub fn split_off_hyperbolic(form: &LatticeForm, c: &[i64], seed: u64) -> Result<Isometry> {
    form.check_len(c)?;
    if form.num_hyperbolic() == 0 {
        return Err(Error::Precondition(
            "split_off_hyperbolic requires an indefinite form (num_hyperbolic >= 1)".into(),
        ));
    }
    if c.iter().all(|&x| x == 0) {
        return Ok(Isometry::identity(form.rank()));
    }
    let d = c.iter().fold(0i64, |g, &x| gcd(g, x));
    let c0: Vec<i64> = c.iter().map(|&x| x / d).collect();
    let norm = form.inner(&c0, &c0)?;
    debug_assert_eq!(norm % 2, 0);
    let m = norm / 2;

    let state = if form.num_hyperbolic() >= 2 {
        split_deterministic(form, &c0)?
    } else {
        split_single_plane(form, &c0, seed)?
    };

    // Post-condition verification: Φ(c) = d·(m·x + y), Φ an isometry.
    let target_ok = state.v[0] == m && state.v[1] == 1 && state.v[2..].iter().all(|&x| x == 0);
    if !target_ok {
        return Err(Error::Internal(format!(
            "splitting reached {:?} instead of ({m}, 1, 0, ...)",
            state.v
        )));
    }
    Isometry::from_parts(form, state.phi, state.phi_inv)
}

fn split_deterministic<'a>(form: &'a LatticeForm, c0: &[i64]) -> Result<SplitState<'a>> {
    let mut st = SplitState::new(form, c0);
    let rank = form.rank();

    // Stage 1: make r1 = v·x₁ nonzero.
    if st.reg(0)? == 0 {
        if st.reg(2)? != 0 {
            st.add_r1_from_r2(1)?;
        } else if st.reg(3)? != 0 {
            st.add_r1_from_s2(1)?;
        } else if st.reg(1)? != 0 {
            st.add_s2_from_s1(1)?;
            st.add_r1_from_s2(1)?;
        } else {
            let b = (4..rank)
                .find(|&b| st.reg(b).map(|t| t != 0).unwrap_or(false))
                .ok_or_else(|| Error::Internal("nonzero vector with zero pairings".into()))?;
            st.seed_s1_from_rest(b)?;
            st.add_s2_from_s1(1)?;
            st.add_r1_from_s2(1)?;
        }
    }

    // Stage 2: shrink |r1| to 1 by folding the remaining registers through
    // the second plane. gcd of all pairings is 1 for a primitive vector, so
    // some branch strictly reduces until r1 = ±1.
    loop {
        st.euclid(false)?; // (r1, r2) → (±g, 0)
        let g = st.reg(0)?.abs();
        debug_assert!(g > 0);
        if g == 1 {
            break;
        }
        if gcd(g, st.reg(3)?) < g {
            st.euclid(true)?;
            continue;
        }
        if gcd(g, st.reg(1)?) < g {
            st.add_s2_from_s1(1)?; // r2 = 0, so no side effect on r1
            st.euclid(true)?;
            continue;
        }
        let mut reduced = false;
        for b in 4..rank {
            if gcd(g, st.reg(b)?) < g {
                st.fold_rest_into_s2(b, 1)?; // r2 = 0, so the rest registers stay put
                st.euclid(true)?;
                reduced = true;
                break;
            }
        }
        if reduced {
            continue;
        }
        return Err(Error::Internal(format!(
            "register gcd stalled at {g} > 1 for a primitive vector"
        )));
    }

    // Normalize r1 = −1 to +1.
    if st.reg(0)? == -1 {
        st.add_r2_from_r1(1)?;
        st.add_r1_from_r2(-2)?;
        st.add_r2_from_r1(1)?;
    }
    debug_assert_eq!(st.reg(0)?, 1);

    st.cleanup()?;
    Ok(st)
}

/// Bounded randomized fallback for num_hyperbolic = 1. For the bare
/// hyperbolic plane the isometry group is just signs and the x↔y swap, so the
/// reachable targets are checked directly; otherwise a seeded greedy walk
/// over Eichler transvections tries to reach v·x₁ = 1.
fn split_single_plane<'a>(form: &'a LatticeForm, c0: &[i64], seed: u64) -> Result<SplitState<'a>> {
    const RESTARTS: u64 = 24;
    const STEPS: u64 = 400;
    const CANDIDATES: usize = 48;

    if form.num_e8() == 0 {
        // L = H: orbit of (a, b) under {±1, swap}; target is (m, 1).
        let mut st = SplitState::new(form, c0);
        if st.v[1] == -1 {
            st.h1_negate();
        }
        if st.v[1] != 1 && st.v[0].abs() == 1 {
            st.h1_swap();
            if st.v[1] == -1 {
                st.h1_negate();
            }
        }
        if st.v[1] == 1 {
            return Ok(st);
        }
        return Err(Error::SplitStalled { attempts: 1 });
    }

    let rank = form.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0u64;
    for _ in 0..RESTARTS {
        let mut st = SplitState::new(form, c0);
        for _ in 0..STEPS {
            attempts += 1;
            let r1 = st.reg(0)?;
            if r1 == 1 {
                st.cleanup()?;
                return Ok(st);
            }
            if r1 == -1 {
                st.h1_negate();
                continue;
            }
            if st.reg(1)? == 1 || st.reg(1)? == -1 {
                st.h1_swap();
                continue;
            }
            // Greedy step: among random transvections, pick the one that
            // brings |v·x₁ − 1| down the most; take a random non-worsening
            // move if none strictly improves.
            let mut best: Option<(i64, Vec<i64>, Vec<i64>)> = None;
            for _ in 0..CANDIDATES {
                let (u, w) = random_transvection_pair(form, rank, &mut rng)?;
                if form.inner(&u, &w)? != 0 {
                    continue;
                }
                let vu = form.inner(&st.v, &u)?;
                let vw = form.inner(&st.v, &w)?;
                let half_w2 = form.inner(&w, &w)? / 2;
                // predicted new r1 without applying the move
                let x1 = form.basis_vector(0);
                let wx1 = form.inner(&w, &x1)?;
                let ux1 = form.inner(&u, &x1)?;
                let new_r1 = st.reg(0)? as i128 + vu as i128 * wx1 as i128
                    - vw as i128 * ux1 as i128
                    - half_w2 as i128 * vu as i128 * ux1 as i128;
                if new_r1.abs() > 1_000_000 {
                    continue;
                }
                let score = (new_r1 - 1).abs() as i64;
                match &best {
                    Some((s, _, _)) if *s <= score => {}
                    _ => best = Some((score, u, w)),
                }
            }
            let cur = (st.reg(0)? - 1).abs();
            match best {
                Some((score, u, w)) if score <= cur => st.transvect(&u, &w)?,
                _ => break,
            }
        }
    }
    Err(Error::SplitStalled { attempts })
}

/// Samples an isotropic u from a small pool together with a lattice vector
/// w ⊥ u with bounded entries.
fn random_transvection_pair(
    form: &LatticeForm,
    rank: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<i64>, Vec<i64>)> {
    // Pool: x₁, y₁ and α·x₁ + β·y₁ + root with αβ = −ε (making u isotropic).
    let choice = rng.gen_range(0..4u32);
    let (u, dual): (Vec<i64>, Vec<i64>) = match choice {
        0 => (form.basis_vector(0), form.basis_vector(1)),
        1 => (form.basis_vector(1), form.basis_vector(0)),
        _ => {
            let root_idx = 2 + rng.gen_range(0..8 * form.num_e8());
            let (alpha, beta) = if form.e8_sign() == -1 {
                if rng.gen_bool(0.5) {
                    (1, 1)
                } else {
                    (-1, -1)
                }
            } else if rng.gen_bool(0.5) {
                (1, -1)
            } else {
                (-1, 1)
            };
            let mut u = vec![0i64; rank];
            u[0] = alpha;
            u[1] = beta;
            u[root_idx] = 1;
            // dual = α·y₁ pairs with u to α² = 1
            let mut dual = vec![0i64; rank];
            dual[1] = alpha;
            (u, dual)
        }
    };
    debug_assert_eq!(form.inner(&u, &u)?, 0);
    debug_assert_eq!(form.inner(&u, &dual)?, 1);
    let mut w0 = vec![0i64; rank];
    for x in w0.iter_mut() {
        *x = rng.gen_range(-2..=2);
    }
    // Project to u^⊥: w = w0 − (w0·u)·dual keeps w integral.
    let w0u = form.inner(&w0, &u)?;
    let mut w = w0;
    for i in 0..rank {
        w[i] -= w0u * dual[i];
    }
    Ok((u, w))
}

/// The commuting involution pair fixing c: after splitting L = H ⊕ 3H ⊕ L₁
/// with c carried into the first block, φ₁ acts by −1 on hyperbolic blocks
/// 2,3 and φ₂ by −1 on blocks 3,4, both by +1 elsewhere, conjugated back to
/// the original basis.
pub fn build_commuting_involutions(
    form: &LatticeForm,
    c: &[i64],
    seed: u64,
) -> Result<(Isometry, Isometry)> {
    let (phi1, phi2, _) = build_involutions_with_splitting(form, c, seed)?;
    Ok((phi1, phi2))
}

/// Same construction, also handing back the splitting isometry Φ so callers
/// can recover the block-scalar model Φ·φᵢ·Φ⁻¹ without re-splitting.
pub fn build_involutions_with_splitting(
    form: &LatticeForm,
    c: &[i64],
    seed: u64,
) -> Result<(Isometry, Isometry, Isometry)> {
    if form.num_hyperbolic() < 4 {
        return Err(Error::Precondition(format!(
            "build_commuting_involutions needs num_hyperbolic >= 4, got {}",
            form.num_hyperbolic()
        )));
    }
    let phi = split_off_hyperbolic(form, c, seed)?;

    // ψ = Φ⁻¹·D·Φ with D the diagonal block-sign matrix; an involution is
    // its own inverse, and from_parts verifies ψ·ψ = id and ψᵀGψ = G.
    let make = |negated: &[usize]| -> Result<Isometry> {
        let mut d_phi = phi.matrix().clone();
        for &b in negated {
            for j in 0..form.rank() {
                d_phi[(2 * b, j)] = -d_phi[(2 * b, j)];
                d_phi[(2 * b + 1, j)] = -d_phi[(2 * b + 1, j)];
            }
        }
        let m = phi.inverse_matrix().mul(&d_phi)?;
        Isometry::from_parts(form, m.clone(), m)
    };
    Ok((make(&[1, 2])?, make(&[2, 3])?, phi))
}

/// Orientation sign of an involution on the positive part: the product of its
/// block scalars over hyperbolic blocks (each contributes the eigenvalue on
/// xᵢ+yᵢ) and over E8(+1) blocks (scalar⁸ = +1).
pub fn positive_orientation(form: &LatticeForm, split_basis_matrix: &IntMatrix) -> Result<i64> {
    let scalars = block_scalars(form, split_basis_matrix)?;
    let mut det = 1i64;
    for (b, eps) in form.blocks().iter().zip(scalars.iter()) {
        match b.kind {
            BlockKind::Hyperbolic => det *= eps,
            BlockKind::E8 => {} // eps⁸ = +1 regardless of sign and definiteness
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> LatticeForm {
        LatticeForm::new(1, 0, -1).unwrap()
    }

    #[test]
    fn e8_cartan_is_unimodular_and_even() {
        let g = LatticeForm::new(0, 1, 1).unwrap().gram_matrix().unwrap();
        assert_eq!(g.det().unwrap(), 1);
        let gm = LatticeForm::new(0, 1, -1).unwrap().gram_matrix().unwrap();
        assert_eq!(gm.det().unwrap(), 1);
        for i in 0..8 {
            assert_eq!(g[(i, i)], 2);
            assert_eq!(gm[(i, i)], -2);
        }
    }

    #[test]
    fn gram_determinant_is_unit() {
        for (p, q, s) in [(1usize, 0usize, -1i64), (2, 1, -1), (1, 1, 1), (3, 2, -1)] {
            let f = LatticeForm::new(p, q, s).unwrap();
            let det = f.gram_matrix().unwrap().det().unwrap();
            assert_eq!(det.abs(), 1, "p={p} q={q} s={s}");
        }
    }

    #[test]
    fn invariants_on_h() {
        let f = h();
        let inv = vector_invariants(&f, &[1, 1]).unwrap();
        assert_eq!(inv, VectorInvariants { divisibility: 1, square: 2, characteristic: false });
        let inv = vector_invariants(&f, &[3, 1]).unwrap();
        assert_eq!(inv, VectorInvariants { divisibility: 1, square: 6, characteristic: false });
    }

    #[test]
    fn invariants_scaled_isotropic() {
        // 2H ⊕ E8(−1), v = 32·(x₁+y₁). Any vector in 2L of an even lattice
        // pairs evenly with everything, so v is characteristic even though
        // its primitive part x₁+y₁ is not.
        let f = LatticeForm::new(2, 1, -1).unwrap();
        let mut v = vec![0i64; f.rank()];
        v[0] = 32;
        v[1] = 32;
        let inv = vector_invariants(&f, &v).unwrap();
        assert_eq!(inv.divisibility, 32);
        assert_eq!(inv.square, 2048);
        assert!(inv.characteristic);
        let prim = vector_invariants(&f, &{
            let mut p = vec![0i64; f.rank()];
            p[0] = 1;
            p[1] = 1;
            p
        })
        .unwrap();
        assert!(!prim.characteristic);
    }

    #[test]
    fn invariants_zero_vector() {
        let f = h();
        let inv = vector_invariants(&f, &[0, 0]).unwrap();
        assert_eq!(inv.divisibility, 0);
        assert_eq!(inv.square, 0);
        assert!(inv.characteristic);
    }

    #[test]
    fn invariants_dimension_mismatch() {
        let f = h();
        assert!(matches!(vector_invariants(&f, &[1, 2, 3]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn characteristic_detects_doubled_vectors() {
        let f = LatticeForm::new(2, 0, -1).unwrap();
        let inv = vector_invariants(&f, &[2, 4, 0, 2]).unwrap();
        assert!(inv.characteristic);
    }

    #[test]
    fn split_identity_when_c_is_y() {
        let f = h();
        let phi = split_off_hyperbolic(&f, &[0, 1], 0).unwrap();
        assert_eq!(phi.matrix(), &IntMatrix::identity(2));
    }

    #[test]
    fn split_zero_vector_gives_identity() {
        let f = LatticeForm::new(2, 1, -1).unwrap();
        let phi = split_off_hyperbolic(&f, &vec![0; f.rank()], 0).unwrap();
        assert_eq!(phi.matrix(), &IntMatrix::identity(f.rank()));
    }

    #[test]
    fn split_isotropic_with_root_component() {
        // c = x₁ + y₁ + r with r the first E8(−1) root: c² = 0, so Φ(c) = y.
        let f = LatticeForm::new(2, 1, -1).unwrap();
        let mut c = vec![0i64; f.rank()];
        c[0] = 1;
        c[1] = 1;
        c[4] = 1;
        let phi = split_off_hyperbolic(&f, &c, 0).unwrap();
        assert!(f.is_isometry(phi.matrix()).unwrap());
        let img = phi.apply(&c).unwrap();
        let mut expected = vec![0i64; f.rank()];
        expected[1] = 1;
        assert_eq!(img, expected);
    }

    #[test]
    fn split_scaled_isotropic() {
        let f = LatticeForm::new(2, 1, -1).unwrap();
        let mut c = vec![0i64; f.rank()];
        c[0] = 32;
        c[1] = 32;
        let phi = split_off_hyperbolic(&f, &c, 0).unwrap();
        assert!(f.is_isometry(phi.matrix()).unwrap());
        let img = phi.apply(&c).unwrap();
        assert_eq!(&img[0..2], &[32, 32]);
        assert!(img[2..].iter().all(|&x| x == 0));
    }

    #[test]
    fn split_single_plane_reachable_and_stalled() {
        let f = h();
        // (2, 4): d = 2, c₀ = (1, 2) → swap reaches (2, 1).
        let phi = split_off_hyperbolic(&f, &[2, 4], 7).unwrap();
        assert_eq!(phi.apply(&[2, 4]).unwrap(), vec![4, 2]);
        // (2, 3): target (6, 1) is not in the O(H)-orbit; honest failure.
        assert!(matches!(split_off_hyperbolic(&f, &[2, 3], 7), Err(Error::SplitStalled { .. })));
    }

    #[test]
    fn split_rejects_definite_form() {
        let f = LatticeForm::new(0, 1, -1).unwrap();
        let c = f.basis_vector(0);
        assert!(matches!(split_off_hyperbolic(&f, &c, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn involutions_on_4h() {
        let f = LatticeForm::new(4, 0, -1).unwrap();
        let mut c = vec![0i64; 8];
        c[0] = 1;
        c[1] = 1;
        let (p1, p2) = build_commuting_involutions(&f, &c, 0).unwrap();
        let n = 8;
        assert_eq!(p1.matrix().mul(p1.matrix()).unwrap(), IntMatrix::identity(n));
        assert_eq!(p2.matrix().mul(p2.matrix()).unwrap(), IntMatrix::identity(n));
        assert_eq!(p1.matrix().mul(p2.matrix()).unwrap(), p2.matrix().mul(p1.matrix()).unwrap());
        assert_eq!(p1.apply(&c).unwrap(), c);
        assert_eq!(p2.apply(&c).unwrap(), c);
        // c = x₁+y₁ splits trivially, so the matrices are the plain sign patterns.
        let s1 = block_scalars(&f, p1.matrix()).unwrap();
        let s2 = block_scalars(&f, p2.matrix()).unwrap();
        assert_eq!(s1, vec![1, -1, -1, 1]);
        assert_eq!(s2, vec![1, 1, -1, -1]);
        assert_eq!(positive_orientation(&f, p1.matrix()).unwrap(), 1);
        assert_eq!(positive_orientation(&f, p2.matrix()).unwrap(), 1);
    }

    #[test]
    fn involutions_fix_zero() {
        let f = LatticeForm::new(4, 0, -1).unwrap();
        let c = vec![0i64; 8];
        let (p1, p2) = build_commuting_involutions(&f, &c, 0).unwrap();
        assert_eq!(p1.apply(&c).unwrap(), c);
        assert_eq!(p2.apply(&c).unwrap(), c);
    }

    #[test]
    fn involutions_reject_small_forms() {
        let f = LatticeForm::new(3, 0, -1).unwrap();
        let c = vec![0i64; 6];
        assert!(matches!(build_commuting_involutions(&f, &c, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn involutions_on_5h_4e8() {
        let f = LatticeForm::new(5, 4, -1).unwrap();
        let mut c = vec![0i64; f.rank()];
        c[0] = 32;
        c[1] = 32;
        let (p1, p2) = build_commuting_involutions(&f, &c, 0).unwrap();
        for p in [&p1, &p2] {
            assert!(f.is_isometry(p.matrix()).unwrap());
            assert_eq!(p.matrix().mul(p.matrix()).unwrap(), IntMatrix::identity(f.rank()));
            assert_eq!(p.apply(&c).unwrap(), c);
        }
        assert_eq!(p1.matrix().mul(p2.matrix()).unwrap(), p2.matrix().mul(p1.matrix()).unwrap());
    }

    #[test]
    fn catalog_elliptic_forms() {
        let f = catalog_form(&FormDescriptor::Elliptic { n: 2, i: 1, j: 1 }).unwrap();
        assert_eq!((f.num_hyperbolic(), f.num_e8(), f.e8_sign()), (3, 2, -1));
        assert_eq!(f.rank(), 22);
        assert_eq!(f.signature(), -16);
        let f = catalog_form(&FormDescriptor::Elliptic { n: 4, i: 1, j: 11 }).unwrap();
        assert_eq!((f.num_hyperbolic(), f.num_e8()), (7, 4));
    }

    #[test]
    fn catalog_rejects_non_spin() {
        assert!(matches!(
            catalog_form(&FormDescriptor::Elliptic { n: 3, i: 1, j: 1 }),
            Err(Error::NotSpin(_))
        ));
        assert!(matches!(
            catalog_form(&FormDescriptor::Elliptic { n: 2, i: 1, j: 2 }),
            Err(Error::NotSpin(_))
        ));
    }

    #[test]
    fn catalog_ci_form() {
        // Quartic surface: e = 24, σ = −16, b₊ = 3.
        let f = catalog_form(&FormDescriptor::CompleteIntersection {
            b_plus: 3,
            sigma: -16,
            spin: true,
        })
        .unwrap();
        assert_eq!((f.num_hyperbolic(), f.num_e8(), f.e8_sign()), (3, 2, -1));
        assert!(matches!(
            catalog_form(&FormDescriptor::CompleteIntersection {
                b_plus: 3,
                sigma: -12,
                spin: true
            }),
            Err(Error::IncompatibleSignature(-12))
        ));
    }

    #[test]
    fn form_serialization_shape() {
        let f = LatticeForm::new(3, 2, -1).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"h":3,"e8":2,"e8_sign":-1}"#);
    }

    #[test]
    fn block_scalars_rejects_mixed_blocks() {
        let f = LatticeForm::new(2, 0, -1).unwrap();
        let mut m = IntMatrix::identity(4);
        m[(0, 0)] = 0;
        m[(0, 1)] = 1;
        m[(1, 0)] = 1;
        m[(1, 1)] = 0; // swap inside a block is an isometry but not scalar
        assert!(matches!(block_scalars(&f, &m), Err(Error::UnrecognizedBlockShape)));
    }
}
