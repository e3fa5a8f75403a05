//! Deliberate-fault switches for the verification suite.
//!
//! Every builder and gate kernel has a `_with` form taking [`Conventions`];
//! the plain forms use [`Conventions::STANDARD`]. A mutated convention is a
//! known-wrong variant of the model that the acceptance checks must reject.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Exchange the lowering and raising hop operators.
    SwapLadderConvention,
    /// Negate the lowering hop operator.
    NegateLowering,
    /// Put `e^{-iθ}` instead of `e^{iθ}` on the `A_a A_b⁺` term of `T_ab(θ)`.
    FlipThetaSign,
    /// Drop the `½ε` zero-point offset from the Hamiltonian.
    DropZeroPoint,
}

impl Mutation {
    pub const INJECTABLE: [Mutation; 4] = [
        Mutation::SwapLadderConvention,
        Mutation::NegateLowering,
        Mutation::FlipThetaSign,
        Mutation::DropZeroPoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::None => "none",
            Mutation::SwapLadderConvention => "swap-ladder",
            Mutation::NegateLowering => "negate-lowering",
            Mutation::FlipThetaSign => "flip-theta",
            Mutation::DropZeroPoint => "drop-zero-point",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        [Mutation::None]
            .into_iter()
            .chain(Mutation::INJECTABLE)
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown mutation {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Conventions {
    pub mutation: Mutation,
}

impl Conventions {
    pub const STANDARD: Conventions = Conventions {
        mutation: Mutation::None,
    };

    pub fn mutated(mutation: Mutation) -> Self {
        Conventions { mutation }
    }

    pub(crate) fn theta_sign(&self) -> f64 {
        if self.mutation == Mutation::FlipThetaSign {
            -1.0
        } else {
            1.0
        }
    }
}
