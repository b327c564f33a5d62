//! Session parsing and execution for the batch front end; the `grmod`
//! binary is a thin wrapper over these two modules.

pub mod run;
pub mod session;
