//! Acceptance checks for the workspace live in `tests/acceptance.rs`; this
//! crate has no library code of its own.
//!
//! Run them alone with `cargo test -p meltdown-validation --test acceptance`.
//! Each check writes one `criterion N PASS|FAIL ...` line to stderr.
