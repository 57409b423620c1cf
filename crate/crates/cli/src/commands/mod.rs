pub mod allocate;
pub mod budget;
pub mod catalog;
pub mod chevron;
pub mod landscape;
pub mod micromotion;
pub mod strength;
pub mod zz;
