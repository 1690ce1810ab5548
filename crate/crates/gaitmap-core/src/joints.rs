//! Joint identifiers and a small fixed-size per-joint container.

use std::fmt;
use std::ops::{Index, IndexMut};

/// The four sagittal-plane joints tracked by a recording.
///
/// Shoulder and elbow form the upper (driving) pair, hip and knee the lower
/// (driven) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JointId {
    Shoulder,
    Elbow,
    Hip,
    Knee,
}

impl JointId {
    /// All joints in canonical column order.
    pub const ALL: [JointId; 4] = [
        JointId::Shoulder,
        JointId::Elbow,
        JointId::Hip,
        JointId::Knee,
    ];

    /// Upper-limb joints in feature order.
    pub const UPPER: [JointId; 2] = [JointId::Shoulder, JointId::Elbow];

    /// Lower-limb joints in feature order.
    pub const LOWER: [JointId; 2] = [JointId::Hip, JointId::Knee];

    /// Canonical position of this joint in [`JointId::ALL`].
    pub fn index(self) -> usize {
        match self {
            JointId::Shoulder => 0,
            JointId::Elbow => 1,
            JointId::Hip => 2,
            JointId::Knee => 3,
        }
    }

    /// Lower-case name used in file headers and CLI flags.
    pub fn name(self) -> &'static str {
        match self {
            JointId::Shoulder => "shoulder",
            JointId::Elbow => "elbow",
            JointId::Hip => "hip",
            JointId::Knee => "knee",
        }
    }

    /// Inverse of [`JointId::name`].
    pub fn from_name(name: &str) -> Option<JointId> {
        match name {
            "shoulder" => Some(JointId::Shoulder),
            "elbow" => Some(JointId::Elbow),
            "hip" => Some(JointId::Hip),
            "knee" => Some(JointId::Knee),
            _ => None,
        }
    }

    /// True for shoulder and elbow.
    pub fn is_upper(self) -> bool {
        matches!(self, JointId::Shoulder | JointId::Elbow)
    }
}

impl fmt::Display for JointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One value of type `T` per joint, indexable by [`JointId`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct JointMap<T>([T; 4]);

impl<T> JointMap<T> {
    /// Builds a map from values in canonical order (shoulder, elbow, hip, knee).
    pub fn new(values: [T; 4]) -> Self {
        JointMap(values)
    }

    /// Builds a map by evaluating `f` once per joint.
    pub fn from_fn(mut f: impl FnMut(JointId) -> T) -> Self {
        JointMap([
            f(JointId::Shoulder),
            f(JointId::Elbow),
            f(JointId::Hip),
            f(JointId::Knee),
        ])
    }

    /// Applies `f` to every entry, preserving joint order.
    pub fn map<U>(&self, mut f: impl FnMut(JointId, &T) -> U) -> JointMap<U> {
        JointMap::from_fn(|j| f(j, &self[j]))
    }

    /// Iterates entries in canonical joint order.
    pub fn iter(&self) -> impl Iterator<Item = (JointId, &T)> {
        JointId::ALL.iter().map(move |&j| (j, &self[j]))
    }

    /// Consumes the map, returning values in canonical order.
    pub fn into_inner(self) -> [T; 4] {
        self.0
    }

    /// Borrows values in canonical order.
    pub fn as_array(&self) -> &[T; 4] {
        &self.0
    }
}

impl<T> Index<JointId> for JointMap<T> {
    type Output = T;

    fn index(&self, joint: JointId) -> &T {
        &self.0[joint.index()]
    }
}

impl<T> IndexMut<JointId> for JointMap<T> {
    fn index_mut(&mut self, joint: JointId) -> &mut T {
        &mut self.0[joint.index()]
    }
}
