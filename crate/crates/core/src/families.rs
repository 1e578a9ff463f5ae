//! The families X_k, X_k° and Z_k.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::moves::{boundary_dispose, puncture, vertex_create, DisposalSite, MoveError, VertexSite};
use crate::polyhedron::{Circle, Perm3, RegionCap, ShadowPolyhedron};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("k must be at least 1")]
    BadIndex,
    #[error(transparent)]
    Move(#[from] MoveError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    X,
    XPunctured,
    Z,
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "X" => Ok(FamilyKind::X),
            "Xo" => Ok(FamilyKind::XPunctured),
            "Z" => Ok(FamilyKind::Z),
            _ => Err(format!("unknown family `{s}` (expected X, Xo or Z)")),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::X => "X",
            FamilyKind::XPunctured => "Xo",
            FamilyKind::Z => "Z",
        })
    }
}

/// X_1 is a circle with three-cycle monodromy capped by one disk; X_k is
/// vertex creation at the default site on X_{k-1}.
pub fn build_x(k: usize) -> Result<ShadowPolyhedron, FamilyError> {
    if k < 1 {
        return Err(FamilyError::BadIndex);
    }
    let mut p = ShadowPolyhedron::from_parts(
        [],
        [],
        [Circle { id: 0, monodromy: Perm3::new([1, 2, 0]) }],
        [(0, RegionCap::disk())],
    );
    for _ in 1..k {
        p = vertex_create(&p, VertexSite::Default)?;
    }
    Ok(p)
}

pub fn build_x_punctured(k: usize) -> Result<ShadowPolyhedron, FamilyError> {
    Ok(puncture(&build_x(k)?, 0)?)
}

pub fn build_z(k: usize) -> Result<ShadowPolyhedron, FamilyError> {
    Ok(boundary_dispose(&build_x_punctured(k)?, DisposalSite::Default)?)
}

pub fn build(kind: FamilyKind, k: usize) -> Result<ShadowPolyhedron, FamilyError> {
    match kind {
        FamilyKind::X => build_x(k),
        FamilyKind::XPunctured => build_x_punctured(k),
        FamilyKind::Z => build_z(k),
    }
}
