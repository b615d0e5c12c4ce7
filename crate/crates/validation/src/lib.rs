//! Holds the `acceptance` test target (tests/acceptance.rs). It lives in its own
//! package so that a failing criterion does not stop the other test binaries
//! of `cargo test --workspace` from running.
