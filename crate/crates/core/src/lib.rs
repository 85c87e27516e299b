//! Two-qubit quantum discord and its activation by nonlocal unitaries.
//!
//! States are handled both as 4×4 density matrices and in the Bloch form
//! ρ = ¼ (I⊗I + a·σ⊗I + I⊗b·σ + Σ tᵢⱼ σᵢ⊗σⱼ) with basis order
//! |00⟩, |01⟩, |10⟩, |11⟩ and qubit A on the left.
//!
//! * [`bloch`]: conversions and validation.
//! * [`unitary`]: local rotations, the three-angle nonlocal core Û(φ₁, φ₂, φ₃)
//!   acting directly on (a, b, T), and a calibrated 4×4 matrix for cross-checks.
//! * [`discord`]: entropies, one-way discord D(B/A) and D(A/B), geometric discord.
//! * [`canonical`]: SVD canonical form and zero-discord structure matching.
//! * [`prescribe`]: per-form activating unitaries and the activation pipeline.
//! * [`rsp`]: remote state preparation fidelity and protocol simulation.
//! * [`verify`]: seeded statistical verification harnesses.
//!
//! ```
//! use discord_forge::bloch::DensityMatrix;
//! use discord_forge::discord::{discord, Party};
//!
//! let omega = DensityMatrix::from_real_rows([
//!     [0.2, 0.1, 0.1, 0.0],
//!     [0.1, 0.1, 0.0, 0.1],
//!     [0.1, 0.0, 0.3, 0.1],
//!     [0.0, 0.1, 0.1, 0.4],
//! ])?;
//! let d = discord(&omega, Party::B);
//! assert!(d > 0.02 && d < 0.03);
//! # Ok::<(), discord_forge::Error>(())
//! ```

pub mod bloch;
pub mod canonical;
pub mod cli;
pub mod discord;
pub mod error;
pub mod linalg;
pub mod prescribe;
pub mod report;
pub mod rsp;
pub mod sampling;
pub mod state_file;
pub mod unitary;
pub mod verify;

pub use bloch::{from_bloch, to_bloch, BlochState, DensityMatrix};
pub use canonical::{classify, svd_canonicalize, CanonicalCase, Classification, Side};
pub use discord::{analyze, discord, geometric_discord, DiscordReport, Party};
pub use error::{Error, Result};
pub use prescribe::{activate, prescribe, ActivationRecord};
pub use unitary::{apply_global, apply_local, apply_nonlocal, LocalRotationPair, NonlocalAngles};
