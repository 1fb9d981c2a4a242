//! Mod-2 characteristic classes of flat vector bundles over T² whose two
//! commuting monodromies act by simultaneous ±1 eigenvalues. The total
//! Stiefel–Whitney class lives in the truncated ring
//! (Z/2)[x₁,x₂]/(x₁², x₂²), so only w₁ (degree one) and the coefficient of
//! x₁x₂ (that is, w₂) survive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{block_scalars, BlockKind, LatticeForm};
use crate::matrix::IntMatrix;

/// Simultaneous ±1 eigendata of a flat bundle over T²: one sign pair per
/// eigenline plus the rank of the trivial summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignPattern {
    pub lines: Vec<(i64, i64)>,
    pub trivial_rank: usize,
}

impl SignPattern {
    pub fn new(lines: Vec<(i64, i64)>, trivial_rank: usize) -> Result<Self> {
        if lines.is_empty() && trivial_rank == 0 {
            return Err(Error::EmptySignPattern);
        }
        for &(e1, e2) in &lines {
            if (e1 != 1 && e1 != -1) || (e2 != 1 && e2 != -1) {
                return Err(Error::InvalidInput(format!(
                    "line signs must be +/-1, got ({e1},{e2})"
                )));
            }
        }
        Ok(SignPattern { lines, trivial_rank })
    }

    /// Pattern of a diagonal pair of commuting involutions on R^k: one line
    /// per coordinate axis carrying the two diagonal entries.
    pub fn from_diagonals(d1: &[i64], d2: &[i64]) -> Result<Self> {
        if d1.len() != d2.len() {
            return Err(Error::DimensionMismatch { expected: d1.len(), got: d2.len() });
        }
        Self::new(d1.iter().copied().zip(d2.iter().copied()).collect(), 0)
    }

    pub fn rank(&self) -> usize {
        self.lines.len() + self.trivial_rank
    }
}

/// w₁ and w₂ of the bundle, as bits: w1 = (coefficient of x₁, of x₂),
/// w2 = coefficient of x₁x₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SWData {
    pub w1: (u8, u8),
    pub w2: u8,
}

/// w₁ of one eigenline: the bit for xⱼ is set iff monodromy j acts by −1.
pub fn line_w1(eps1: i64, eps2: i64) -> (u8, u8) {
    (((1 - eps1) / 2) as u8, ((1 - eps2) / 2) as u8)
}

/// Total Stiefel–Whitney class: the product of (1 + aᵢx₁ + bᵢx₂) over all
/// lines in (Z/2)[x₁,x₂]/(x₁²,x₂²); the trivial summand contributes 1.
pub fn total_sw(p: &SignPattern) -> SWData {
    let (mut a, mut b, mut c) = (0u8, 0u8, 0u8);
    for &(e1, e2) in &p.lines {
        let (ai, bi) = line_w1(e1, e2);
        c = (c + a * bi + b * ai) % 2;
        a = (a + ai) % 2;
        b = (b + bi) % 2;
    }
    SWData { w1: (a, b), w2: c }
}

/// Reads the sign pattern of the positive part H⁺ off a pair of blockwise
/// ±1-scalar involutions: each hyperbolic block contributes its positive
/// direction x+y, E8(−1) blocks contribute nothing, and E8(+1) blocks
/// contribute eight directions each. Pairs acting by (+1,+1) land in the
/// trivial summand.
pub fn positive_part_pattern(
    form: &LatticeForm,
    phi1: &IntMatrix,
    phi2: &IntMatrix,
) -> Result<SignPattern> {
    let s1 = block_scalars(form, phi1)?;
    let s2 = block_scalars(form, phi2)?;
    let mut lines = Vec::new();
    let mut trivial_rank = 0usize;
    for ((block, &e1), &e2) in form.blocks().iter().zip(s1.iter()).zip(s2.iter()) {
        let positive_dirs = match block.kind {
            BlockKind::Hyperbolic => 1,
            BlockKind::E8 => {
                if form.e8_sign() == 1 {
                    8
                } else {
                    0
                }
            }
        };
        if (e1, e2) == (1, 1) {
            trivial_rank += positive_dirs;
        } else {
            for _ in 0..positive_dirs {
                lines.push((e1, e2));
            }
        }
    }
    SignPattern::new(lines, trivial_rank)
}

/// Sign pattern of the normal bundle of the fixed-point section: the flat
/// R⁴-bundle over T² with monodromies diag(1,−1,1,−1) and diag(−1,−1,1,1).
pub fn normal_bundle_pattern() -> SignPattern {
    SignPattern::from_diagonals(&[1, -1, 1, -1], &[-1, -1, 1, 1]).expect("fixed diagonals")
}
