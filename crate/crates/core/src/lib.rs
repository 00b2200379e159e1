//! Finite balls of Cayley graphs, clique-minor witnesses and the cut/cover
//! machinery behind dimension bounds for minor-excluded graphs.

pub mod graph;
pub mod groups;
pub mod io;
pub mod kpr;
pub mod minors;
pub mod rays;

use thiserror::Error;

/// Any error raised by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    Group(#[from] groups::GroupError),
    #[error(transparent)]
    Minor(#[from] minors::MinorError),
    #[error(transparent)]
    Kpr(#[from] kpr::KprError),
    #[error(transparent)]
    Rays(#[from] rays::RaysError),
    #[error(transparent)]
    Io(#[from] io::IoError),
}
