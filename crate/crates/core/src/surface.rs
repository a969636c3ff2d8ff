use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::Error;
use crate::linalg::rank;
use crate::matrix_rep::{
    build_matrix_rep, compute_nu0, default_index, region_admissible, MatrixRep, Parameterization,
    SatInfo,
};
use crate::poly::{DegIndex, RingSpec};

/// A parameterization together with its threshold data and a cache of matrix
/// representations. Shared read-only across threads; cache fills are idempotent.
#[derive(Debug)]
pub struct Surface {
    phi: Parameterization,
    sat: Option<SatInfo>,
    working: DegIndex,
    cache: RwLock<HashMap<DegIndex, Arc<MatrixRep>>>,
}

impl Surface {
    pub fn new(phi: Parameterization) -> Result<Self, Error> {
        let sat = match phi.ring() {
            RingSpec::Triangular => Some(compute_nu0(&phi)?),
            _ => {
                let span = rank(&phi.coefficient_matrix());
                if span <= 2 {
                    return Err(Error::NotASurface(format!(
                        "the forms span a {span}-dimensional space"
                    )));
                }
                None
            }
        };
        let working = default_index(&phi, sat.as_ref());
        Ok(Surface {
            phi,
            sat,
            working,
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// Replaces the working index. Indices below the threshold are accepted, but
    /// results computed there are flagged and carry no guarantee.
    pub fn with_working_index(mut self, nu: DegIndex) -> Result<Self, Error> {
        if nu.ring() != self.phi.ring() {
            return Err(Error::RingMismatch(format!("index {nu} does not match the ring")));
        }
        self.working = nu;
        Ok(self)
    }

    pub fn parameterization(&self) -> &Parameterization {
        &self.phi
    }

    pub fn sat_info(&self) -> Option<&SatInfo> {
        self.sat.as_ref()
    }

    pub fn nu0(&self) -> Option<i64> {
        self.sat.as_ref().map(|s| s.nu0)
    }

    pub fn working_index(&self) -> DegIndex {
        self.working
    }

    /// Whether matrices at `nu` carry the full contract (`nu >= nu0`, or outside the
    /// excluded region in the bi-graded case).
    pub fn is_admissible(&self, nu: DegIndex) -> bool {
        match (nu, self.phi.degree()) {
            (DegIndex::Single(n), DegIndex::Single(_)) => n as i64 >= self.nu0().unwrap_or(0),
            (DegIndex::Pair(a, b), DegIndex::Pair(d1, d2)) => region_admissible((d1, d2), (a, b)),
            _ => false,
        }
    }

    /// `M(phi)_nu`, built on first use.
    pub fn rep(&self, nu: DegIndex) -> Arc<MatrixRep> {
        if let Some(m) = self.cache.read().unwrap().get(&nu) {
            return m.clone();
        }
        let m = Arc::new(build_matrix_rep(&self.phi, nu));
        self.cache.write().unwrap().insert(nu, m.clone());
        m
    }
}
