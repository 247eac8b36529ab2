//! Sets of places of `Q`: the infinite place and finitely many primes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::arith;
use crate::error::{Error, Result};
use crate::extension::ExtensionDatum;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PlaceSet {
    archimedean: bool,
    finite: BTreeSet<u64>,
}

/// Classification of a finite place relative to an extension and a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlaceTags {
    pub ramified: bool,
    pub p_adic: bool,
    pub wild: bool,
}

impl PlaceSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `S_infinity`.
    pub fn infinite() -> Self {
        Self {
            archimedean: true,
            finite: BTreeSet::new(),
        }
    }

    pub fn finite(primes: impl IntoIterator<Item = u64>) -> Self {
        Self {
            archimedean: false,
            finite: primes.into_iter().collect(),
        }
    }

    pub fn with_infinite(mut self) -> Self {
        self.archimedean = true;
        self
    }

    pub fn with_prime(mut self, l: u64) -> Self {
        self.finite.insert(l);
        self
    }

    /// `S_infinity` together with every prime dividing the conductor.
    pub fn infinite_and_ramified(ext: &ExtensionDatum) -> Self {
        Self {
            archimedean: true,
            finite: ext.ramified_primes().into_iter().collect(),
        }
    }

    pub fn has_infinite(&self) -> bool {
        self.archimedean
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.finite.iter().copied()
    }

    pub fn contains_prime(&self, l: u64) -> bool {
        self.finite.contains(&l)
    }

    pub fn is_empty(&self) -> bool {
        !self.archimedean && self.finite.is_empty()
    }

    pub fn union(&self, other: &PlaceSet) -> PlaceSet {
        PlaceSet {
            archimedean: self.archimedean || other.archimedean,
            finite: self.finite.union(&other.finite).copied().collect(),
        }
    }

    /// Fails when the two sets share a place.
    pub fn check_disjoint(&self, other: &PlaceSet) -> Result<()> {
        let common: Vec<u64> = self.finite.intersection(&other.finite).copied().collect();
        if !common.is_empty() || (self.archimedean && other.archimedean) {
            return Err(Error::OverlappingPlaces(common));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        match self.finite.iter().find(|&&l| !arith::is_prime(l)) {
            Some(l) => Err(Error::InvalidInput(format!("{l} is not a prime"))),
            None => Ok(()),
        }
    }

    pub fn tags(ext: &ExtensionDatum, l: u64, p: u64) -> PlaceTags {
        let ramified = ext.is_ramified(l);
        let p_adic = l == p;
        let wild = ramified && p_adic && ext.local(l).ramification_index().is_multiple_of(p);
        PlaceTags {
            ramified,
            p_adic,
            wild,
        }
    }
}

impl FromStr for PlaceSet {
    type Err = Error;

    /// Parses lists such as `inf,2,5`; the empty string is the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let mut set = PlaceSet::empty();
        for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match part {
                "inf" | "infty" | "oo" => set.archimedean = true,
                _ => {
                    let l: u64 = part
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad place '{part}'")))?;
                    set.finite.insert(l);
                }
            }
        }
        set.validate()?;
        Ok(set)
    }
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.archimedean {
            parts.push("inf".into());
        }
        parts.extend(self.finite.iter().map(u64::to_string));
        write!(f, "{{{}}}", parts.join(","))
    }
}
