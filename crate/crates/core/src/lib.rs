pub mod algebra;
pub mod bialgebroid;
pub mod bimodule;
pub mod cmd;
pub mod coalgebra;
pub mod depth_two;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod hopf;
pub mod io;
pub mod linalg;
pub mod par;
pub mod smash;
