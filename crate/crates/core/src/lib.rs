//! Fundamental-cone analysis of LDPC codes from the projective planes
//! PG(2, 2^s).

pub mod cone;
pub mod construct;
pub mod decode;
pub mod effect;
pub mod gf2s;
pub mod linalg;
pub mod lp;
pub mod plane;
pub mod rational;
pub mod rays;
pub mod weights;
