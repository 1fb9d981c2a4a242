//! Numerical verification layer for the commutator-equals-Dehn-twist
//! construction: paths in SO(4), lifting along the double cover
//! Spin(4) = unit quaternion pairs (q_L, q_R) acting by x ↦ q_L·x·conj(q_R)
//! under e₁↦1, e₂↦i, e₃↦j, e₄↦k, and the resulting class in π₁(SO(4)) ≅ Z/2.

use serde::Serialize;

use crate::error::{Error, Result};

pub const ORTHOGONALITY_TOL: f64 = 1e-9;
pub const LOOP_BASE_TOL: f64 = 1e-9;
pub const LIFT_RESIDUAL_TOL: f64 = 1e-6;
pub const CLASS_TOL: f64 = 1e-3;
/// Continuity bound for unique sign choice along a lift.
pub const MAX_STEP: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn mul(self, r: Quaternion) -> Quaternion {
        Quaternion {
            w: self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            x: self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            y: self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            z: self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        }
    }

    pub fn conj(self) -> Quaternion {
        Quaternion { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn neg(self) -> Quaternion {
        Quaternion { w: -self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn norm(self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(self) -> Quaternion {
        let n = self.norm();
        Quaternion { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n }
    }

    fn from_vec4(v: [f64; 4]) -> Quaternion {
        Quaternion { w: v[0], x: v[1], y: v[2], z: v[3] }
    }

    fn to_vec4(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    fn max_diff(self, other: Quaternion) -> f64 {
        (self.w - other.w)
            .abs()
            .max((self.x - other.x).abs())
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

/// Element of Spin(4) = SU(2) × SU(2): a pair of unit quaternions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinElement {
    pub q_l: Quaternion,
    pub q_r: Quaternion,
}

impl SpinElement {
    pub const IDENTITY: SpinElement = SpinElement { q_l: Quaternion::ONE, q_r: Quaternion::ONE };

    pub fn new(q_l: Quaternion, q_r: Quaternion) -> Result<Self> {
        if (q_l.norm() - 1.0).abs() >= ORTHOGONALITY_TOL
            || (q_r.norm() - 1.0).abs() >= ORTHOGONALITY_TOL
        {
            return Err(Error::InvalidInput(
                "spin element components must be unit quaternions".into(),
            ));
        }
        Ok(SpinElement { q_l, q_r })
    }

    pub fn antipode(self) -> SpinElement {
        SpinElement { q_l: self.q_l.neg(), q_r: self.q_r.neg() }
    }

    pub fn max_diff(self, other: SpinElement) -> f64 {
        self.q_l.max_diff(other.q_l).max(self.q_r.max_diff(other.q_r))
    }

    /// The SO(4) rotation x ↦ q_L·x·conj(q_R).
    pub fn to_rotation(self) -> Rotation4 {
        let mut m = [[0.0; 4]; 4];
        for (c, e) in [
            Quaternion::ONE,
            Quaternion::new(0.0, 1.0, 0.0, 0.0),
            Quaternion::new(0.0, 0.0, 1.0, 0.0),
            Quaternion::new(0.0, 0.0, 0.0, 1.0),
        ]
        .iter()
        .enumerate()
        {
            let col = self.q_l.mul(*e).mul(self.q_r.conj()).to_vec4();
            for r in 0..4 {
                m[r][c] = col[r];
            }
        }
        Rotation4(m)
    }
}

/// 4×4 special orthogonal matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rotation4(pub [[f64; 4]; 4]);

impl Rotation4 {
    pub const IDENTITY: Rotation4 = Rotation4([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);

    pub fn mul(self, r: Rotation4) -> Rotation4 {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = (0..4).map(|k| self.0[i][k] * r.0[k][j]).sum();
            }
        }
        Rotation4(out)
    }

    pub fn transpose(self) -> Rotation4 {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = self.0[j][i];
            }
        }
        Rotation4(out)
    }

    /// Inverse of an orthogonal matrix.
    pub fn inverse(self) -> Rotation4 {
        self.transpose()
    }

    pub fn apply(self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for i in 0..4 {
            out[i] = (0..4).map(|k| self.0[i][k] * v[k]).sum();
        }
        out
    }

    pub fn max_diff(self, other: Rotation4) -> f64 {
        let mut d = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }

    pub fn det(self) -> f64 {
        let m = &self.0;
        let mut det = 0.0;
        for c in 0..4 {
            let mut sub = [[0.0; 3]; 3];
            for i in 1..4 {
                let mut cc = 0;
                for j in 0..4 {
                    if j == c {
                        continue;
                    }
                    sub[i - 1][cc] = m[i][j];
                    cc += 1;
                }
            }
            let minor = sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1])
                - sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0])
                + sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
            det += if c % 2 == 0 { 1.0 } else { -1.0 } * m[0][c] * minor;
        }
        det
    }

    /// Checks ‖MᵀM − I‖_max and det M against the SO(4) tolerances.
    pub fn validate(self) -> Result<()> {
        let mtm = self.transpose().mul(self);
        if mtm.max_diff(Rotation4::IDENTITY) >= ORTHOGONALITY_TOL {
            return Err(Error::InvalidInput("matrix is not orthogonal within 1e-9".into()));
        }
        if (self.det() - 1.0).abs() >= ORTHOGONALITY_TOL {
            return Err(Error::InvalidInput("matrix does not have determinant +1".into()));
        }
        Ok(())
    }
}

/// Rotation by θ in the plane spanned by two coordinate axes (1-based),
/// identity elsewhere.
pub fn rotation_in_plane(axis1: usize, axis2: usize, theta: f64) -> Result<Rotation4> {
    if axis1 == axis2 {
        return Err(Error::InvalidInput("rotation plane needs two distinct axes".into()));
    }
    if !(1..=4).contains(&axis1) || !(1..=4).contains(&axis2) {
        return Err(Error::InvalidInput("axis indices must lie in 1..=4".into()));
    }
    let (a, b) = (axis1 - 1, axis2 - 1);
    let mut m = Rotation4::IDENTITY;
    m.0[a][a] = theta.cos();
    m.0[a][b] = -theta.sin();
    m.0[b][a] = theta.sin();
    m.0[b][b] = theta.cos();
    Ok(m)
}

pub fn sigma1() -> Rotation4 {
    rotation_in_plane(2, 4, std::f64::consts::PI).expect("fixed axes")
}

pub fn sigma2() -> Rotation4 {
    rotation_in_plane(1, 2, std::f64::consts::PI).expect("fixed axes")
}

/// Path from σ₁ to the identity: rotation by (1−t)π in the e₂e₄-plane.
/// σ₁ is exactly that π-rotation, and the π₁ class of the commutator does
/// not depend on this choice since SO(4) is connected.
pub fn h1_rotation(t: f64) -> Rotation4 {
    rotation_in_plane(2, 4, (1.0 - t) * std::f64::consts::PI).expect("fixed axes")
}

/// Path from σ₂ to the identity: rotation by (1−t)π in the e₁e₂-plane.
pub fn h2_rotation(t: f64) -> Rotation4 {
    rotation_in_plane(1, 2, (1.0 - t) * std::f64::consts::PI).expect("fixed axes")
}

/// The commutator loop p(t) = h₁(t)·h₂(t)·h₁(t)⁻¹·h₂(t)⁻¹, a loop at the
/// identity since the σᵢ commute.
pub fn commutator_rotation(t: f64) -> Rotation4 {
    let a = h1_rotation(t);
    let b = h2_rotation(t);
    a.mul(b).mul(a.inverse()).mul(b.inverse())
}

/// The loop h₂(t)⁻²: a full turn in the e₁e₂-plane.
pub fn h2_inverse_squared_rotation(t: f64) -> Rotation4 {
    rotation_in_plane(1, 2, -2.0 * (1.0 - t) * std::f64::consts::PI).expect("fixed axes")
}

/// Sampled path in SO(4) with a continuity bound on consecutive steps.
#[derive(Debug, Clone)]
pub struct RotationPath {
    samples: Vec<Rotation4>,
    delta: f64,
}

impl RotationPath {
    pub fn new(samples: Vec<Rotation4>, delta: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidInput("path needs at least two samples".into()));
        }
        if delta >= MAX_STEP {
            return Err(Error::StepBound(delta));
        }
        for s in &samples {
            s.validate()?;
        }
        for w in samples.windows(2) {
            let step = w[0].max_diff(w[1]);
            if step >= delta {
                return Err(Error::StepBound(step));
            }
        }
        Ok(RotationPath { samples, delta })
    }

    /// Uniform sampling of t ↦ f(t) on [0,1].
    pub fn from_fn(f: impl Fn(f64) -> Rotation4, n_samples: usize) -> Result<Self> {
        if n_samples < 2 {
            return Err(Error::InvalidInput("need at least two samples".into()));
        }
        let samples: Vec<Rotation4> =
            (0..n_samples).map(|k| f(k as f64 / (n_samples - 1) as f64)).collect();
        let max_step = samples.windows(2).map(|w| w[0].max_diff(w[1])).fold(0.0f64, f64::max);
        if max_step >= MAX_STEP - 1e-6 {
            return Err(Error::StepBound(max_step));
        }
        RotationPath::new(samples, (max_step + 1e-9).max(1e-9))
    }

    pub fn samples(&self) -> &[Rotation4] {
        &self.samples
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn is_loop(&self) -> bool {
        self.samples[0].max_diff(*self.samples.last().expect("non-empty")) < LOOP_BASE_TOL
    }

    /// Concatenation for loops sharing a basepoint.
    pub fn concat(&self, other: &RotationPath) -> Result<RotationPath> {
        let junction = self.samples.last().expect("non-empty").max_diff(other.samples[0]);
        if junction >= LOOP_BASE_TOL {
            return Err(Error::InvalidInput("paths do not share the junction point".into()));
        }
        let mut samples = self.samples.clone();
        samples.extend_from_slice(&other.samples[1..]);
        RotationPath::new(samples, self.delta.max(other.delta))
    }
}

pub fn commutator_loop(n_samples: usize) -> Result<RotationPath> {
    RotationPath::from_fn(commutator_rotation, n_samples)
}

pub fn h2_inverse_squared_loop(n_samples: usize) -> Result<RotationPath> {
    RotationPath::from_fn(h2_inverse_squared_rotation, n_samples)
}

pub fn constant_identity_loop(n_samples: usize) -> Result<RotationPath> {
    RotationPath::from_fn(|_| Rotation4::IDENTITY, n_samples)
}

fn quat_from_rot3(m: [[f64; 3]; 3]) -> Quaternion {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let q = if tr > 0.0 {
        let s = (tr + 1.0).sqrt() * 2.0;
        Quaternion::new(
            0.25 * s,
            (m[2][1] - m[1][2]) / s,
            (m[0][2] - m[2][0]) / s,
            (m[1][0] - m[0][1]) / s,
        )
    } else if m[0][0] >= m[1][1] && m[0][0] >= m[2][2] {
        let s = (1.0 + m[0][0] - m[1][1] - m[2][2]).sqrt() * 2.0;
        Quaternion::new(
            (m[2][1] - m[1][2]) / s,
            0.25 * s,
            (m[0][1] + m[1][0]) / s,
            (m[0][2] + m[2][0]) / s,
        )
    } else if m[1][1] >= m[2][2] {
        let s = (1.0 + m[1][1] - m[0][0] - m[2][2]).sqrt() * 2.0;
        Quaternion::new(
            (m[0][2] - m[2][0]) / s,
            (m[0][1] + m[1][0]) / s,
            0.25 * s,
            (m[1][2] + m[2][1]) / s,
        )
    } else {
        let s = (1.0 + m[2][2] - m[0][0] - m[1][1]).sqrt() * 2.0;
        Quaternion::new(
            (m[1][0] - m[0][1]) / s,
            (m[0][2] + m[2][0]) / s,
            (m[1][2] + m[2][1]) / s,
            0.25 * s,
        )
    };
    q.normalized()
}

/// Lifts one rotation to the spin double cover, choosing the sign of the
/// quaternion pair closest to `near`. Errors when the reconstruction
/// residual exceeds the tolerance.
pub fn so4_to_spin(m: Rotation4, near: SpinElement) -> Result<SpinElement> {
    m.validate()?;
    // First column is q_L·conj(q_R); peeling it off leaves the conjugation
    // rotation x ↦ q_R·x·conj(q_R) on the imaginary part.
    let a = Quaternion::from_vec4([m.0[0][0], m.0[1][0], m.0[2][0], m.0[3][0]]).normalized();
    let mut r3 = [[0.0; 3]; 3];
    for c in 0..3 {
        let mut e = [0.0; 4];
        e[c + 1] = 1.0;
        let rho = a.conj().mul(Quaternion::from_vec4(m.apply(e)));
        r3[0][c] = rho.x;
        r3[1][c] = rho.y;
        r3[2][c] = rho.z;
    }
    let q_r = quat_from_rot3(r3);
    let q_l = a.mul(q_r).normalized();
    let candidate = SpinElement { q_l, q_r };
    let lifted = if candidate.max_diff(near) <= candidate.antipode().max_diff(near) {
        candidate
    } else {
        candidate.antipode()
    };
    let residual = lifted.to_rotation().max_diff(m);
    if residual >= LIFT_RESIDUAL_TOL {
        return Err(Error::LiftResidual(residual));
    }
    Ok(lifted)
}

/// Continuous lift of a sampled path, starting near the identity pair.
pub fn lift_path(path: &RotationPath) -> Result<Vec<SpinElement>> {
    let mut out = Vec::with_capacity(path.samples().len());
    let mut near = SpinElement::IDENTITY;
    for &m in path.samples() {
        let lifted = so4_to_spin(m, near)?;
        out.push(lifted);
        near = lifted;
    }
    Ok(out)
}

/// The class of a loop in π₁(SO(4)) ≅ Z/2: 0 when the lift closes up, 1 when
/// it ends at the antipodal pair. Any other endpoint signals undersampling.
pub fn loop_pi1_class(path: &RotationPath) -> Result<u8> {
    if !path.is_loop() {
        return Err(Error::Precondition("path is not a loop (endpoints differ)".into()));
    }
    let lifts = lift_path(path)?;
    let first = lifts[0];
    let last = *lifts.last().expect("non-empty");
    if last.max_diff(first) < CLASS_TOL {
        Ok(0)
    } else if last.max_diff(first.antipode()) < CLASS_TOL {
        Ok(1)
    } else {
        Err(Error::LiftEndpoint)
    }
}

/// Smooth step profile: 0 on [0, 1/3], 1 on [2/3, 1], the quintic
/// s³(10 − 15s + 6s²) in between.
pub fn radial_profile(r: f64) -> f64 {
    let s = ((r - 1.0 / 3.0) * 3.0).clamp(0.0, 1.0);
    s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)
}

/// The twist map τ(x) = p(t(|x|))(x) on the unit 4-ball.
pub fn twist_map_eval(x: [f64; 4], p: impl Fn(f64) -> Rotation4) -> Result<[f64; 4]> {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
    if r > 1.0 + 1e-12 {
        return Err(Error::InvalidInput(format!("|x| = {r} exceeds the unit ball")));
    }
    Ok(p(radial_profile(r)).apply(x))
}

/// σ′ᵢ(x) = hᵢ(t(|x|))(x), the compactly supported involutions whose
/// commutator is the twist map.
pub fn sigma_prime(which: usize, x: [f64; 4]) -> Result<[f64; 4]> {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
    if r > 1.0 + 1e-12 {
        return Err(Error::InvalidInput(format!("|x| = {r} exceeds the unit ball")));
    }
    let t = radial_profile(r);
    let h = match which {
        1 => h1_rotation(t),
        2 => h2_rotation(t),
        3 => h1_rotation(t).inverse(),
        4 => h2_rotation(t).inverse(),
        _ => return Err(Error::InvalidInput("sigma_prime selector must be 1..=4".into())),
    };
    Ok(h.apply(x))
}

/// Max deviation of the relation σ₁·h₂(t)·σ₁⁻¹ = h₂(t)⁻¹ over uniform samples.
pub fn relation_max_deviation(n_samples: usize) -> f64 {
    let s1 = sigma1();
    (0..n_samples)
        .map(|k| {
            let t = k as f64 / (n_samples - 1) as f64;
            let lhs = s1.mul(h2_rotation(t)).mul(s1.inverse());
            lhs.max_diff(h2_rotation(t).inverse())
        })
        .fold(0.0f64, f64::max)
}

/// Endpoint deviations of the homotopy q_s = (h₁)_s·h₂·(h₁)_s⁻¹, which fixes
/// q_s(0) = σ₂⁻¹ and q_s(1) = id for every s.
pub fn qs_endpoint_deviation(s: f64) -> (f64, f64) {
    let h1s = |t: f64| h1_rotation(t.min(s));
    let qs = |t: f64| h1s(t).mul(h2_rotation(t)).mul(h1s(t).inverse());
    let at0 = qs(0.0).max_diff(sigma2().inverse());
    let at1 = qs(1.0).max_diff(Rotation4::IDENTITY);
    (at0, at1)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn plane_rotations_hit_the_involutions() {
        assert!(
            rotation_in_plane(1, 2, PI).unwrap().max_diff(Rotation4([
                [-1.0, 0.0, 0.0, 0.0],
                [0.0, -1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0]
            ])) < 1e-12
        );
        assert!(
            rotation_in_plane(2, 4, PI).unwrap().max_diff(Rotation4([
                [1.0, 0.0, 0.0, 0.0],
                [0.0, -1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, -1.0]
            ])) < 1e-12
        );
        assert!(rotation_in_plane(1, 2, 0.0).unwrap().max_diff(Rotation4::IDENTITY) < 1e-15);
        assert!(rotation_in_plane(1, 1, PI).is_err());
        assert!(rotation_in_plane(0, 2, PI).is_err());
    }

    #[test]
    fn lift_identity() {
        let s = so4_to_spin(Rotation4::IDENTITY, SpinElement::IDENTITY).unwrap();
        assert!(s.max_diff(SpinElement::IDENTITY) < 1e-12);
    }

    #[test]
    fn lift_sigma2_reconstructs() {
        let s = so4_to_spin(sigma2(), SpinElement::IDENTITY).unwrap();
        assert!(s.to_rotation().max_diff(sigma2()) < 1e-9);
        // σ₂ lifts to (±i, ∓i) up to the global sign; check the x components.
        assert!(s.q_l.x.abs() > 0.999 && s.q_r.x.abs() > 0.999);
    }

    #[test]
    fn lift_all_plane_involutions() {
        for (a, b) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)] {
            let m = rotation_in_plane(a, b, PI).unwrap();
            let s = so4_to_spin(m, SpinElement::IDENTITY).unwrap();
            assert!(s.to_rotation().max_diff(m) < 1e-9, "plane ({a},{b})");
        }
    }

    #[test]
    fn full_turn_lifts_to_antipode() {
        let path = RotationPath::from_fn(|t| rotation_in_plane(1, 2, 2.0 * PI * t).unwrap(), 1024)
            .unwrap();
        let lifts = lift_path(&path).unwrap();
        let last = lifts.last().unwrap();
        assert!(last.max_diff(SpinElement::IDENTITY.antipode()) < 1e-6);
    }

    #[test]
    fn constant_loop_is_trivial() {
        let path = constant_identity_loop(64).unwrap();
        assert_eq!(loop_pi1_class(&path).unwrap(), 0);
    }

    #[test]
    fn h2_inverse_squared_is_nontrivial() {
        let path = h2_inverse_squared_loop(1024).unwrap();
        assert_eq!(loop_pi1_class(&path).unwrap(), 1);
    }

    #[test]
    fn commutator_loop_is_nontrivial() {
        let path = commutator_loop(1024).unwrap();
        assert_eq!(loop_pi1_class(&path).unwrap(), 1);
    }

    #[test]
    fn class_is_sampling_independent() {
        for n in [1024usize, 2048, 4096] {
            assert_eq!(loop_pi1_class(&commutator_loop(n).unwrap()).unwrap(), 1, "n = {n}");
            assert_eq!(loop_pi1_class(&h2_inverse_squared_loop(n).unwrap()).unwrap(), 1);
        }
    }

    #[test]
    fn class_is_homomorphic_under_concatenation() {
        let com = commutator_loop(1024).unwrap();
        let turn = h2_inverse_squared_loop(1024).unwrap();
        let triv = constant_identity_loop(64).unwrap();
        let both = com.concat(&turn).unwrap();
        assert_eq!(loop_pi1_class(&both).unwrap(), 0); // 1 XOR 1
        let with_trivial = com.concat(&triv).unwrap();
        assert_eq!(loop_pi1_class(&with_trivial).unwrap(), 1); // 1 XOR 0
    }

    #[test]
    fn conjugation_relation_holds() {
        assert!(relation_max_deviation(256) < 1e-12);
    }

    #[test]
    fn qs_homotopy_endpoints() {
        for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let (at0, at1) = qs_endpoint_deviation(s);
            assert!(at0 < 1e-12, "q_s(0) deviates by {at0} at s = {s}");
            assert!(at1 < 1e-12, "q_s(1) deviates by {at1} at s = {s}");
        }
    }

    #[test]
    fn twist_is_identity_near_boundary() {
        let x = [0.9, 0.0, 0.0, 0.0];
        let y = twist_map_eval(x, commutator_rotation).unwrap();
        for i in 0..4 {
            assert!((x[i] - y[i]).abs() < 1e-12);
        }
        assert_eq!(twist_map_eval([0.0; 4], commutator_rotation).unwrap(), [0.0; 4]);
    }

    #[test]
    fn twist_rejects_outside_ball() {
        assert!(twist_map_eval([1.5, 0.0, 0.0, 0.0], commutator_rotation).is_err());
    }

    #[test]
    fn twist_agrees_with_pointwise_commutator() {
        // [σ′₁, σ′₂](x) computed by composing the four maps pointwise equals
        // p(t(|x|))x since each factor preserves |x|.
        let points = [
            [0.25, 0.0, 0.0, 0.0],
            [0.3, 0.2, 0.1, -0.4],
            [0.5, 0.5, 0.0, 0.0],
            [-0.1, 0.6, 0.2, 0.3],
            [0.0, 0.0, 0.0, 0.95],
        ];
        for x in points {
            let composed = sigma_prime(
                1,
                sigma_prime(2, sigma_prime(3, sigma_prime(4, x).unwrap()).unwrap()).unwrap(),
            )
            .unwrap();
            let direct = twist_map_eval(x, commutator_rotation).unwrap();
            for i in 0..4 {
                assert!((composed[i] - direct[i]).abs() < 1e-9, "x = {x:?}");
            }
        }
    }

    #[test]
    fn profile_shape() {
        assert_eq!(radial_profile(0.0), 0.0);
        assert_eq!(radial_profile(0.3), 0.0);
        assert_eq!(radial_profile(0.7), 1.0);
        assert_eq!(radial_profile(1.0), 1.0);
        let mid = radial_profile(0.5);
        assert!(mid > 0.0 && mid < 1.0);
    }

    #[test]
    fn undersampled_path_is_rejected() {
        assert!(matches!(
            RotationPath::from_fn(|t| rotation_in_plane(1, 2, 2.0 * PI * t).unwrap(), 4),
            Err(Error::StepBound(_))
        ));
    }

    #[test]
    fn open_path_is_not_a_loop() {
        let path =
            RotationPath::from_fn(|t| rotation_in_plane(1, 2, PI * t).unwrap(), 512).unwrap();
        assert!(!path.is_loop());
        assert!(matches!(loop_pi1_class(&path), Err(Error::Precondition(_))));
    }
}
