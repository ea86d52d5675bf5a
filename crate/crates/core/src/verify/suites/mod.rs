pub(crate) mod identities;
pub(crate) mod kernels;
pub(crate) mod limits;
pub(crate) mod orthogonality;
pub(crate) mod oscillator;
pub(crate) mod states;
pub(crate) mod transforms;
