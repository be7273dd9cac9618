//! A ring together with its unit subgroup, double cosets, functional and
//! superclass table: everything needed to analyse any graph on it.

use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::cayley::{CayleyError, CayleyGraph};
use crate::frobenius::{FrobeniusError, FrobeniusFunctional};
use crate::orbits::{OrbitError, OrbitPartition, Selector, Subgroup, SubgroupSpec};
use crate::ring::{Ring, RingError, RingSpec, DEFAULT_SIZE_CAP};
use crate::spectra::{OmegaTable, SpectraError, Spectrum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

impl Error {
    /// Whether the failure comes from a size cap rather than bad input.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            Error::Ring(RingError::SizeCapExceeded { .. })
                | Error::Orbit(OrbitError::Ring(RingError::SizeCapExceeded { .. }))
                | Error::Frobenius(FrobeniusError::Ring(RingError::SizeCapExceeded { .. }))
                | Error::Cayley(CayleyError::TooLarge(_))
                | Error::Spectra(SpectraError::TooLarge(_))
        )
    }
}

#[derive(Debug)]
pub struct Instance {
    partition: Arc<OrbitPartition>,
    functional: Arc<FrobeniusFunctional>,
    table: OnceLock<Result<Arc<OmegaTable>, SpectraError>>,
}

impl Instance {
    pub fn build(ring: &RingSpec, subgroup: &SubgroupSpec) -> Result<Instance, Error> {
        Instance::build_with_cap(ring, subgroup, DEFAULT_SIZE_CAP)
    }

    pub fn build_with_cap(ring: &RingSpec, subgroup: &SubgroupSpec, cap: usize) -> Result<Instance, Error> {
        let ring = Arc::new(Ring::build_with_cap(ring.clone(), cap)?);
        let functional = Arc::new(FrobeniusFunctional::build(&ring)?);
        let subgroup = Arc::new(Subgroup::from_spec(&ring, subgroup)?);
        let partition = Arc::new(OrbitPartition::compute(&subgroup));
        Ok(Instance { partition, functional, table: OnceLock::new() })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.partition.ring()
    }

    pub fn subgroup(&self) -> &Arc<Subgroup> {
        self.partition.subgroup()
    }

    pub fn partition(&self) -> &Arc<OrbitPartition> {
        &self.partition
    }

    pub fn functional(&self) -> &Arc<FrobeniusFunctional> {
        &self.functional
    }

    /// The superclass table, built on first use.
    pub fn table(&self) -> Result<Arc<OmegaTable>, Error> {
        let t = self.table.get_or_init(|| OmegaTable::build(&self.partition, &self.functional).map(Arc::new));
        Ok(t.clone()?)
    }

    pub fn graph(&self, selector: &Selector) -> Result<CayleyGraph, Error> {
        Ok(CayleyGraph::new(&self.partition, selector)?)
    }

    /// `Γ(R, U)`.
    pub fn unit_graph(&self) -> CayleyGraph {
        CayleyGraph::unit_graph(&self.partition)
    }

    pub fn spectrum(&self, graph: &CayleyGraph) -> Result<Spectrum, Error> {
        Ok(self.table()?.spectrum(graph.selection()))
    }
}
