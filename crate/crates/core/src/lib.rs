pub mod cli;
pub mod interface;
pub mod linalg;
pub mod models;
pub mod ring;
pub mod rmat;
pub mod stab;
pub mod theta;
