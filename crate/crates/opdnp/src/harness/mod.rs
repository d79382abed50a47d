//! Configuration ingestion, scenario orchestration and run-directory
//! persistence behind the CLI.

pub mod config;
pub mod output;
pub mod runner;





use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),

    #[error("config key `{key}`: {problem}")]
    Key { key: String, problem: String },

    #[error("toml: {0}")]
    Toml(#[from] toml::de::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Rqm(#[from] crate::rqm::RqmError),

    #[error(transparent)]
    Masdnp(#[from] crate::masdnp::MasdnpError),

    #[error(transparent)]
    Spin(#[from] crate::spincore::SpinError),
}
