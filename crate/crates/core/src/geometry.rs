//! Small geometric helpers shared by the integral engines.

use crate::Vec3;

/// Rotation matrix about a unit axis by `angle` radians.
pub fn rotation(axis: Vec3, angle: f64) -> nalgebra::Matrix3<f64> {
    nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle).into_inner()
}

/// Spherical angles (theta, phi) of a non-zero vector.
pub fn angles(v: &Vec3) -> (f64, f64) {
    let r = v.norm();
    if r == 0.0 {
        return (0.0, 0.0);
    }
    let theta = (v.z / r).clamp(-1.0, 1.0).acos();
    let phi = v.y.atan2(v.x);
    (theta, phi)
}

/// Orthonormal frame whose third axis is `axis`.
///
/// Columns are (e1, e2, e3); e3 = axis / |axis|. Deterministic for a given axis.
pub fn frame_from_axis(axis: &Vec3) -> nalgebra::Matrix3<f64> {
    let e3 = axis.normalize();
    let helper = if e3.x.abs() < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    let e1 = (helper - e3 * helper.dot(&e3)).normalize();
    let e2 = e3.cross(&e1);
    nalgebra::Matrix3::from_columns(&[e1, e2, e3])
}
