//! Rauzy-Veech induction, pseudo-Anosov certification and curve-graph
//! translation-length bounds for mapping classes built from Rauzy diagram paths.

pub mod diagram;
pub mod fg;
pub mod induction;
pub mod linalg;
pub mod pa;
pub mod penner;
pub mod perm;
pub mod rational;
pub mod surface;

pub use diagram::{build_path, explore, injectivity_check, AllowedPath, RauzyDiagram, RauzyPath};
pub use induction::{apply_bottom, apply_flip, apply_top, edge_matrix, EdgeRecord, Move, MoveWord, Reading};
pub use linalg::{min_positive_power, path_matrix, relabel_matrix, spectral_radius, IntMatrix, SpectralBracket};
pub use perm::{Alphabet, LabeledPermutation, Letter, UnlabeledPermutation};
pub use surface::GluedSurface;
