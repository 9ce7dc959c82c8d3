//! Small dense tensor algebra: the asymmetry operator, its adjoint, the face
//! rotation matrix and the reduced couplings used by the planar scheme.
//!
//! Three-dimensional quantities are plain arrays. In 2D a displacement lives
//! in the plane and a rotation is the scalar out-of-plane component; the
//! functions [`embed_displacement_2d`] and [`embed_rotation_2d`] give the
//! corresponding 3D vectors.

use crate::error::{Result, TpsaError};
use crate::scalar::Scalar;

pub type Vec3<T> = [T; 3];
pub type Mat3<T> = [[T; 3]; 3];

pub fn zero3<T: Scalar>() -> Vec3<T> {
    [T::zero(); 3]
}

pub fn zero_mat3<T: Scalar>() -> Mat3<T> {
    [[T::zero(); 3]; 3]
}

pub fn dot<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm<T: Scalar>(a: &Vec3<T>) -> T {
    dot(a, a).sqrt()
}

pub fn sub<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn scale<T: Scalar>(s: T, a: &Vec3<T>) -> Vec3<T> {
    [s * a[0], s * a[1], s * a[2]]
}

pub fn mat_vec<T: Scalar>(m: &Mat3<T>, v: &Vec3<T>) -> Vec3<T> {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

pub fn mat_mul<T: Scalar>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    let mut c = zero_mat3();
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).fold(T::zero(), |acc, l| acc + a[i][l] * b[l][j]);
        }
    }
    c
}

pub fn transpose<T: Scalar>(m: &Mat3<T>) -> Mat3<T> {
    let mut t = zero_mat3();
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

/// Frobenius inner product `a : b`.
pub fn double_dot<T: Scalar>(a: &Mat3<T>, b: &Mat3<T>) -> T {
    let mut s = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            s += a[i][j] * b[i][j];
        }
    }
    s
}

/// Asymmetry operator: component `i` is `σ[i-1][i+1] - σ[i+1][i-1]`, indices mod 3.
pub fn asym<T: Scalar>(sigma: &Mat3<T>) -> Vec3<T> {
    let mut out = zero3();
    for (i, o) in out.iter_mut().enumerate() {
        let prev = (i + 2) % 3;
        let next = (i + 1) % 3;
        *o = sigma[prev][next] - sigma[next][prev];
    }
    out
}

/// Adjoint of [`asym`] under the Frobenius product; `asym_adjoint(r) * u = r × u`.
pub fn asym_adjoint<T: Scalar>(r: &Vec3<T>) -> Mat3<T> {
    let z = T::zero();
    [[z, -r[2], r[1]], [r[2], z, -r[0]], [-r[1], r[0], z]]
}

fn check_unit<T: Scalar>(len_sq: T) -> Result<()> {
    if (len_sq.sqrt() - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(16.0)) {
        return Err(TpsaError::invalid(format!(
            "normal must have unit length, got |n| = {}",
            len_sq.sqrt()
        )));
    }
    Ok(())
}

/// Face rotation matrix `asym_adjoint(n)` for a unit normal.
///
/// `rot_n(n) * n = 0` and `-rot_n(n)^2` is the orthogonal projection onto the
/// plane of the face.
pub fn rot_n<T: Scalar>(n: &Vec3<T>) -> Result<Mat3<T>> {
    check_unit(dot(n, n))?;
    Ok(asym_adjoint(n))
}

/// Rotation-to-traction coupling of the planar scheme: `(n2, -n1)`.
///
/// The rotation row uses the negative transpose, `(-n2, n1)`, see
/// [`rot_coupling_2d_row`].
pub fn rot_coupling_2d<T: Scalar>(n: &[T; 2]) -> Result<[T; 2]> {
    check_unit(n[0] * n[0] + n[1] * n[1])?;
    Ok([n[1], -n[0]])
}

/// Displacement-to-rotation-stress coupling of the planar scheme: `(-n2, n1)`.
pub fn rot_coupling_2d_row<T: Scalar>(n: &[T; 2]) -> Result<[T; 2]> {
    let c = rot_coupling_2d(n)?;
    Ok([-c[0], -c[1]])
}

/// In-plane displacement as a 3D vector with vanishing third component.
pub fn embed_displacement_2d<T: Scalar>(u: &[T; 2]) -> Vec3<T> {
    [u[0], u[1], T::zero()]
}

/// Scalar planar rotation as the 3D rotation vector about the third axis.
pub fn embed_rotation_2d<T: Scalar>(r: T) -> Vec3<T> {
    [T::zero(), T::zero(), r]
}
