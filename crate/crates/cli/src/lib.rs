//! Library surface of the `matpos` command-line tool: the JSON file formats
//! shared by the binary and its integration tests.

pub mod formats;
