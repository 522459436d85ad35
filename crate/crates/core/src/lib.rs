//! Elliptic deformation of the `su(n)` level-`m` fusion ring.
//!
//! Partitions index a lattice on which the discretized elliptic Ruijsenaars
//! operators act. Their eigenpolynomials `P_μ` generate a ring whose quotient
//! by the level-`m` ideal is a finite-dimensional fusion algebra, diagonalized
//! by an elliptic S-matrix. At `(g, p) = (1, 0)` everything reduces to the
//! classical WZW fusion rules.
//!
//! The numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`.

pub mod coeffs;
pub mod error;
pub mod fusion;
pub mod kernel;
pub mod lattice;
pub mod limits;
pub mod linalg;
pub mod lr;
pub mod oracles;
pub mod partition;
pub mod poly;
pub mod scalar;
pub mod verify;

pub use coeffs::{c_norm, delta_weight, hop_b, psi_prime, CoeffCache};
pub use error::{Error, Result};
pub use fusion::{fusion_table, s_matrix, FusionTable, Route, SMatrix};
pub use kernel::{ModelParams, Mode};
pub use lattice::{build_truncated, joint_spectrum, SpectralPoint, SpectrumResult, TruncatedOperator};
pub use lr::{expand_in_p, lr_coefficients, LrTable};
pub use oracles::OracleReport;
pub use partition::{enumerate_level, Partition, Strip};
pub use poly::{EllipticTable, PolyTable, PolynomialInE};
pub use scalar::Scalar;
pub use verify::{run_suite, Suite, VerifyConfig};

pub type Params = ModelParams<f64>;
pub type Coefficients = CoeffCache<f64>;
pub type Poly = PolynomialInE<f64>;
pub type PTable = EllipticTable<f64>;
pub type Spectrum = SpectrumResult<f64>;
pub type Fusion = FusionTable<f64>;
pub type SMat = SMatrix<f64>;
