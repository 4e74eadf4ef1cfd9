pub mod automata;
pub mod bmc;
pub mod cli;
pub mod ground;
pub mod oracle;
pub mod philosophers;
pub mod solver;
pub mod syntax;
pub mod trace;
