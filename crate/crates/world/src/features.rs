//! Feature encodings between world space and the [0,100] field space.

use crate::state::{ObjectKind, Workspace, WorldError};

/// Motion direction as a feature: the angle between the +x reference axis
/// and the displacement vector, taken in (-pi, pi] and scaled so that
/// -pi maps to 0, 0 maps to 50 and pi maps to 100.
pub fn goal_angle_feature(pre: (f64, f64), post: (f64, f64)) -> Result<f64, WorldError> {
    let dx = post.0 - pre.0;
    let dy = post.1 - pre.1;
    if dx == 0.0 && dy == 0.0 {
        return Err(WorldError::UndefinedAngle);
    }
    let angle = dy.atan2(dx);
    Ok((angle + std::f64::consts::PI) / (2.0 * std::f64::consts::PI) * 100.0)
}

/// Fixed color feature per object kind on the blue-to-red axis.
pub fn color_feature(kind: ObjectKind) -> f64 {
    match kind {
        ObjectKind::Cube => 10.0,     // blue
        ObjectKind::Cylinder => 60.0, // yellow
        ObjectKind::Ball => 90.0,     // red
    }
}

/// Affine map from the [0,100]^2 feature square into the workspace.
pub fn feature_to_workspace(p: (f64, f64), ws: &Workspace) -> Result<(f64, f64), WorldError> {
    if !(0.0..=100.0).contains(&p.0) || !(0.0..=100.0).contains(&p.1) {
        return Err(WorldError::PoseOutsideWorkspace(p.0, p.1));
    }
    Ok((
        ws.min.0 + p.0 / 100.0 * (ws.max.0 - ws.min.0),
        ws.min.1 + p.1 / 100.0 * (ws.max.1 - ws.min.1),
    ))
}

/// Inverse of `feature_to_workspace`.
pub fn workspace_to_feature(p: (f64, f64), ws: &Workspace) -> Result<(f64, f64), WorldError> {
    if !ws.contains(p) {
        return Err(WorldError::PoseOutsideWorkspace(p.0, p.1));
    }
    Ok((
        (p.0 - ws.min.0) / (ws.max.0 - ws.min.0) * 100.0,
        (p.1 - ws.min.1) / (ws.max.1 - ws.min.1) * 100.0,
    ))
}
