//! hyperwalk

pub mod hyperbolic;
pub mod interrobang;
pub mod minkowski;
pub mod numeric;
pub mod pgl2;
pub mod triangle;
pub mod walk;
