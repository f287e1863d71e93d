pub mod field;
pub mod geometry;
pub mod sweep;
pub mod tables;
pub mod verify;
