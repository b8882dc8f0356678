pub mod behavior;
pub mod dynamics;
pub mod entropy;
pub mod experiment;
pub mod replay;
pub mod run_match;
pub mod teams;
