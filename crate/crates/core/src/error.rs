use core::fmt;

/// Rejected graph construction input.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphError {
    /// `offsets` is empty, does not start at zero, decreases, or does not end
    /// at the arc count.
    InvalidOffsets,
    /// `edges` and `weights` differ in length.
    LengthMismatch {
        edges: usize,
        weights: usize,
    },
    VertexOutOfRange {
        vertex: u64,
        num_vertices: usize,
    },
    NegativeWeight {
        source: u32,
        target: u32,
        weight: f64,
    },
    /// Vertex ids must fit in 32 bits.
    TooManyVertices(usize),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::InvalidOffsets => f.write_str("invalid CSR offsets"),
            GraphError::LengthMismatch { edges, weights } => {
                write!(f, "{edges} edges but {weights} weights")
            }
            GraphError::VertexOutOfRange {
                vertex,
                num_vertices,
            } => write!(
                f,
                "vertex index out of range: {vertex} (graph has {num_vertices} vertices)"
            ),
            GraphError::NegativeWeight {
                source,
                target,
                weight,
            } => {
                write!(f, "negative weight {weight} on edge {source} -> {target}")
            }
            GraphError::TooManyVertices(n) => {
                write!(f, "{n} vertices exceed the 32-bit vertex id range")
            }
        }
    }
}

impl core::error::Error for GraphError {}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    /// A field violates its documented range.
    OutOfRange {
        key: &'static str,
        reason: &'static str,
    },
    UnknownKey,
    InvalidValue {
        key: &'static str,
    },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::OutOfRange { key, reason } => write!(f, "{key}: {reason}"),
            ConfigError::UnknownKey => f.write_str("unknown configuration key"),
            ConfigError::InvalidValue { key } => write!(f, "{key}: cannot parse value"),
        }
    }
}

impl core::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub enum QualityError {
    /// Modularity is undefined for a graph without edge weight.
    ZeroTotalWeight,
    MembershipLength {
        membership: usize,
        vertices: usize,
    },
    CommunityOutOfRange {
        vertex: usize,
        community: u32,
    },
}

impl fmt::Display for QualityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QualityError::ZeroTotalWeight => {
                f.write_str("modularity is undefined for a graph with zero total weight")
            }
            QualityError::MembershipLength {
                membership,
                vertices,
            } => write!(
                f,
                "membership/graph size mismatch: {membership} entries for {vertices} vertices"
            ),
            QualityError::CommunityOutOfRange { vertex, community } => {
                write!(
                    f,
                    "vertex {vertex} has community id {community} outside [0, N)"
                )
            }
        }
    }
}

impl core::error::Error for QualityError {}
