pub mod contraction;
pub mod decomposition;
pub mod dgcore;
pub mod fixtures;
pub mod hochschild;
pub mod kunneth;
pub mod qlinalg;
