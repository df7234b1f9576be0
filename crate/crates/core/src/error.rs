use std::io;

use thiserror::Error;

use crate::codeword::CodewordError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Codeword(#[from] CodewordError),
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}
