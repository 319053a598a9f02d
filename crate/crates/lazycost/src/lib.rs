//! File formats, parallel check suites and reports for `lazycost-core`.
//!
//! The core crate is `no_std` and knows nothing about text. This crate adds
//! readers for programs, demand literals, bindings, queue states and
//! traces ([`syntax`], [`queues`]), the exhaustive suites behind the
//! command-line tool ([`suites`]), the bundled example programs
//! ([`corpus`]) and the JSON report envelope ([`report`]).

use std::fmt;

pub mod corpus;
pub mod queues;
pub mod report;
pub mod sexpr;
pub mod suites;
pub mod syntax;

pub use lazycost_core as core;

/// A malformed input, with the line it was found on when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    pub fn new(message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            message: message.into(),
        }
    }

    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: Some(line),
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ParseError {}
