//! Polyhedral upper bounds on the expected number of positive zeros of
//! random sparse polynomial systems, with the machinery to verify them:
//! reproducible Gaussian sampling, certified interval root counting in log
//! coordinates, and numerical Kac-Rice integrals.

pub mod bounds;
pub mod experiment;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod random_systems;
pub mod rice;
pub mod rootcount;
pub mod scalar;
