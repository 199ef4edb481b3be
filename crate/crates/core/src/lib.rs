//! Static analysis of CAP actor terms by abstract interpretation.

pub mod cflow;
pub mod engine;
pub mod generate;
pub mod numeric;
pub mod properties;
pub mod report;
pub mod semantics;
pub mod syntax;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Frontend(#[from] syntax::FrontendError),
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
    #[error(transparent)]
    Explore(#[from] semantics::ExploreError),
}
