//! Exact analysis of U-unitary Cayley graphs over finite rings.
//!
//! The pipeline is: build a [`ring::Ring`] from a [`ring::RingSpec`], pick a
//! unit subgroup with [`orbits::Subgroup`], split the ring into double cosets
//! with [`orbits::OrbitPartition`], choose a union of classes as connection
//! set for a [`cayley::CayleyGraph`], then read off its spectrum from the
//! superclass character table in [`spectra`] and decide perfect state
//! transfer with [`pst`].

pub mod ring;
pub mod frobenius;
pub mod orbits;
pub mod cayley;
pub mod spectra;
pub mod pst;
pub mod instance;
pub mod survey;
