pub mod algebra;
pub mod simplicial;
pub mod relations;
pub mod variety;
pub mod oracle;
mod parallel;
pub mod commands;
