//! Denser-graph-frequency graph Fourier frames.
//!
//! Graph operators and variation measures live in [`graph`], orthonormal
//! bases in [`basis`], the redundant frames built from them in [`frames`].
//! [`manifold`] and [`convex`] hold the two iterative solvers, and
//! [`spectral`] the analysis, filtering and recovery routines on top.

pub mod basis;
pub mod convex;
pub mod error;
pub mod frames;
pub mod generators;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod manifold;
pub mod spectral;

pub use basis::{dcb, dfb, gfb, mag_gfb, rgff, sf_gfb, u_max, SfConfig, SpectralBasis, VariationMeasure};
pub use convex::{pds_solve, PdsResult, SplitProblem};
pub use error::{Error, Result};
pub use frames::{
    adgff_path, adgff_ring, default_threshold, intermediate_frequency, interpolate_vector, lidgff, lrlidgff,
    lrlidgff_single, mag_dgff, sfdgff, FrameFamily, Origin, SpectralFrame,
};
pub use graph::{
    dv, gtv, laplacian, magnetic_laplacian, normalized_laplacian, tv_complex, Edge, Graph, HermitianOperator,
    OperatorKind,
};
pub use linalg::{CMatrix, CVector};
pub use manifold::{pcal_solve, PcalOutcome, SolverConfig, StiefelObjective, StiefelProblem, TraceRow};
pub use spectral::{
    analyze, dgs_filter, ideal_lowpass, recover_noiseless, recover_noisy, relative_error, snr_db, spectral_dispersion,
    tikhonov_response, FilterResponse, RecoveryReport, SamplingPattern, SolveConfig,
};
