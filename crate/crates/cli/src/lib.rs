//! Library surface of the command line tool: the system-description
//! parser/printer and the JSON report builder, shared with the test
//! suites.

pub mod parse;
pub mod report;
