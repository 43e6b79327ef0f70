//! Home of the `acceptance` test target (`tests/acceptance.rs`), which runs
//! the nine acceptance criteria and prints one PASS/FAIL line for each.
