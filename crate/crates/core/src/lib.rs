//! Exact computations with finite-dimensional coalgebras and the structures
//! built on them: quantum elements, the partial tensor pairing, convolution
//! logic, quantum Boolean algebras, quivers and Leavitt path algebras.

pub mod coalg;
pub mod exact;
pub mod elements;
pub mod leavitt;
pub mod partial;
pub mod qbool;
pub mod qlogic;
pub mod quiver;
pub mod sample;
