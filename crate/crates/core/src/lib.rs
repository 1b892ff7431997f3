pub mod algebra;
pub mod chain;
pub mod category;
pub mod zero_map;
pub mod hnat;
pub mod k0;
pub mod random;
