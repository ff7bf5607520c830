pub mod cli;
pub mod error;
pub mod finitefield;
pub mod geometry;
pub mod optimality;
pub mod qexpansion;
pub mod towercore;
