// SPDX-License-Identifier: Apache-2.0

//! Core-connectivity trees and treebar maps for large undirected graphs.
//!
//! The pipeline runs edge list → [`ingest::Graph`] → coreness
//! ([`kcore`]) → core-connectivity tree ([`coretree`]) → coreness-scale
//! collapse ([`scale`]) → geometry ([`layout`]) → SVG ([`render`]).
//! [`pipeline`] strings the phases together and times them.

pub mod coretree;
pub mod ingest;
pub mod kcore;
pub mod layout;
pub mod pipeline;
pub mod render;
pub mod scale;
pub mod synth;

use thiserror::Error;

pub use coretree::{CoreNode, CoreTree, NodeId};
pub use ingest::{Graph, GraphStats, ParseOptions, RawEdgeList, VertexId};
pub use kcore::CorenessLabeling;
pub use layout::{RenderConfig, TreebarLayout};
pub use render::SvgDocument;
pub use scale::CorenessScale;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Ingest(#[from] ingest::IngestError),
    #[error(transparent)]
    Tree(#[from] coretree::TreeError),
    #[error(transparent)]
    Scale(#[from] scale::ScaleError),
    #[error(transparent)]
    Render(#[from] render::RenderError),
}
