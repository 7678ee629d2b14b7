pub mod experiment;
pub mod gen;
pub mod io;
pub mod report;
