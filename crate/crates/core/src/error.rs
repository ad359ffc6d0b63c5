use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("{{{p},{q}}} is a spherical/finite tessellation, not 1-ended: (p-2)(q-2) = {product} < 4")]
    NotOneEnded { p: usize, q: usize, product: usize },

    #[error("rotation system is not planar: V - E + F = {euler}, expected 2")]
    NonPlanar { euler: i64 },

    #[error("patch too small at vertex {vertex}: need complete radius {needed}, have {have}")]
    PatchTooSmall {
        vertex: usize,
        needed: usize,
        have: usize,
    },

    #[error("orbit partition did not stabilize up to level {i_max}; increase radius")]
    IncreaseRadius { i_max: usize },

    #[error("patch not vertex-transitive at {vertex}: no rooted isomorphism of its D-ball onto the root's")]
    NotTransitive { vertex: usize },

    #[error("{graph} is not {radius}-locally-G at vertex {vertex}")]
    NotLocallyG {
        graph: &'static str,
        vertex: usize,
        radius: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("hypothesis violation at step {step}, vertex {vertex}: {detail}")]
    HypothesisViolation {
        step: usize,
        vertex: usize,
        detail: String,
    },

    #[error("patch defect: {0}")]
    Defect(String),

    #[error("size guard exceeded: {0}")]
    TooLarge(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// Errors that mean "the finite window is not big enough", as opposed to bad input.
    pub fn is_patch_limit(&self) -> bool {
        matches!(
            self,
            Error::PatchTooSmall { .. } | Error::IncreaseRadius { .. }
        )
    }
}
