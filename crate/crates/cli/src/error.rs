use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Core(#[from] invsum::Error),
    #[error("{cell}: {source}")]
    Cell { cell: String, source: invsum::Error },
    #[error("cannot parse report: {0}")]
    Parse(String),
}
