//! Command implementations behind the `telegame` binary.

pub mod output;
pub mod verify;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const INVALID_INPUT: i32 = 2;
    pub const IO: i32 = 3;
    pub const SOLVER: i32 = 4;
    pub const STATISTICS: i32 = 5;
}
