//! HTTP game service and command-line front end for compiled bases.
//!
//! [`api::router`] serves problems, compiled bases and game sessions from a
//! [`store::FileStore`]; [`game`] holds the session rules and [`cli`] the
//! `qcsp` command.

pub mod api;
pub mod cli;
pub mod error;
pub mod game;
pub mod store;

pub use api::{router, serve};
pub use error::ApiError;
pub use game::{Game, GameError, SessionState, Status};
pub use store::FileStore;
