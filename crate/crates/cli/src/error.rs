use std::fmt;

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_SIGNAL: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_NOINPUT: u8 = 66;
pub const EXIT_CANTCREAT: u8 = 73;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: msg.into() }
    }

    pub fn malformed(msg: impl Into<String>) -> Self {
        Self { code: EXIT_DATA, message: msg.into() }
    }

    pub fn no_input(msg: impl Into<String>) -> Self {
        Self { code: EXIT_NOINPUT, message: msg.into() }
    }

    pub fn cant_create(msg: impl Into<String>) -> Self {
        Self { code: EXIT_CANTCREAT, message: msg.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<qrh_core::Error> for CliError {
    fn from(e: qrh_core::Error) -> Self {
        CliError::malformed(e.to_string())
    }
}
