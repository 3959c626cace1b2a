//! Topology of circular synthetic aperture sonar (CSAS) echo spaces.
//!
//! A CSAS collection is a map from look angle to a complex range profile.
//! This crate simulates or ingests such collections, builds their signature
//! and phase spaces (the latter via angle-lagged delay embedding), and
//! quantifies the structure of those spaces with PCA projections,
//! Vietoris-Rips persistence diagrams, and flare/loop feature reports.

pub mod angle;
pub mod collection;
pub mod embed;
pub mod error;
pub mod features;
pub mod io;
pub mod pca;
pub mod persistence;
pub mod simulate;

pub use angle::LookAngle;
pub use collection::{euclidean, Collection, EchoVector, PointCloud};
pub use embed::LagSet;
pub use error::{Error, Result};
pub use features::{
    Excursion, FeatureParams, FeatureReport, NoiseFloor, ReflectionClass, ReflectionFeature,
};
pub use pca::PcaModel;
pub use persistence::{
    DiagramPair, DistanceMatrix, PersistenceDiagram, RipsParams,
};
pub use simulate::{Scatterer, ScattererTarget, SimConfig};
