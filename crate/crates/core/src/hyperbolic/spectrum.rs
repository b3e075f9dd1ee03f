use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub length: f64,
    pub multiplicity: u32,
    /// Number of reflections of a billiard geodesic; only present in
    /// spectra of surfaces with geodesic boundary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reflections: Option<u32>,
    /// Canonical word of the conjugacy class, when produced by enumeration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
}

impl SpectrumEntry {
    pub fn new(length: f64, multiplicity: u32) -> Self {
        Self { length, multiplicity, reflections: None, word: None }
    }

    pub fn with_reflections(mut self, n: u32) -> Self {
        self.reflections = Some(n);
        self
    }
}

/// Primitive oriented closed geodesics, sorted by length. Every geodesic of
/// length at most `complete_up_to` is present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthSpectrum {
    pub cutoff: f64,
    pub complete_up_to: f64,
    pub entries: Vec<SpectrumEntry>,
}

impl LengthSpectrum {
    /// Validates and sorts by (length, word).
    pub fn new(cutoff: f64, complete_up_to: f64, mut entries: Vec<SpectrumEntry>) -> Result<Self> {
        if !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(Error::InvalidInput(format!("cutoff must be positive, got {cutoff}")));
        }
        if !(complete_up_to.is_finite() && complete_up_to > 0.0) {
            return Err(Error::InvalidInput(format!("complete_up_to must be positive, got {complete_up_to}")));
        }
        for e in &entries {
            if !(e.length.is_finite() && e.length > 0.0) {
                return Err(Error::InvalidInput(format!("geodesic length {} is not positive", e.length)));
            }
            if e.multiplicity == 0 {
                return Err(Error::InvalidInput(format!("entry of length {} has multiplicity 0", e.length)));
            }
        }
        entries.sort_by(|x, y| x.length.total_cmp(&y.length).then_with(|| x.word.cmp(&y.word)));
        Ok(Self { cutoff, complete_up_to, entries })
    }

    pub fn empty(cutoff: f64) -> Self {
        Self { cutoff, complete_up_to: cutoff, entries: Vec::new() }
    }

    /// The spectrum of a cyclic group: one class for each orientation.
    pub fn cyclic(ell: f64) -> Result<Self> {
        let cutoff = ell * 4.0;
        Self::new(cutoff, cutoff, vec![SpectrumEntry::new(ell, 1), SpectrumEntry::new(ell, 1)])
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: LengthSpectrum =
            serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("spectrum JSON: {e}")))?;
        Self::new(raw.cutoff, raw.complete_up_to, raw.entries)
    }

    /// Entries that count towards products (length <= complete_up_to).
    pub fn certified_entries(&self) -> impl Iterator<Item = &SpectrumEntry> {
        let lim = self.complete_up_to;
        self.entries.iter().take_while(move |e| e.length <= lim)
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.certified_entries().map(|e| e.multiplicity as u64).sum()
    }

    pub fn min_length(&self) -> Option<f64> {
        self.entries.first().map(|e| e.length)
    }

    /// If the certified part consists of one length `ell` with total
    /// multiplicity 2 (one geodesic, both orientations), returns `ell`.
    pub fn cyclic_length(&self) -> Option<f64> {
        let mut it = self.certified_entries();
        let first = it.next()?;
        let ell = first.length;
        let mut m = first.multiplicity;
        for e in it {
            if (e.length - ell).abs() > 1e-12 * ell {
                return None;
            }
            m += e.multiplicity;
        }
        // A second class would have to show up below 2 ell.
        (m == 2 && self.complete_up_to >= 2.0 * ell).then_some(ell)
    }
}
