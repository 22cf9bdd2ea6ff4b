pub mod constants;
pub mod hierarchy;
pub mod graph;
pub mod iso;
pub mod palette;
pub mod equivalence;
pub mod verify;
pub mod gen;
pub mod io;
pub mod config;
pub mod pipeline;
