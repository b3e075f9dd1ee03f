//! Conjugacy classes of a free group on hyperbolic generators.
//!
//! Letters are coded as bytes: generator `i` is `2i`, its inverse `2i + 1`,
//! so inversion is `code ^ 1`. A primitive conjugacy class is represented by
//! its Lyndon word: the unique cyclic rotation that is strictly smaller than
//! all other rotations, among cyclically reduced words. Classes of `w` and
//! `w^{-1}` have different Lyndon words, so both orientations are listed.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::mobius::{length_from_trace, translation_length, MobiusTransform};
use super::spectrum::{LengthSpectrum, SpectrumEntry};
use crate::error::{Error, Result};

/// Default cap on the number of words visited by one enumeration.
pub const DEFAULT_WORD_BUDGET: usize = 20_000_000;

/// Words up to this length must be hyperbolic for a presentation to be accepted.
const SCREEN_LENGTH: usize = 4;

/// Lower bound on translation length per letter of a cyclically reduced word.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DisplacementBound {
    /// The Dirichlet walls at `i` of all generators and inverses are pairwise
    /// disjoint. Ping-pong then shows the group is Schottky and every
    /// cyclically reduced word of length n has translation length at least
    /// `n` times the smallest distance between two walls.
    Certified(f64),
    /// Walls overlap; the bound is the smallest length-per-letter seen on
    /// short words and is not guaranteed.
    Heuristic(f64),
}

impl DisplacementBound {
    pub fn value(&self) -> f64 {
        match *self {
            Self::Certified(v) | Self::Heuristic(v) => v,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Self::Certified(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupPresentation {
    generators: Vec<MobiusTransform>,
    labels: Vec<String>,
    bound: DisplacementBound,
}

pub(crate) fn inv(code: u8) -> u8 {
    code ^ 1
}

fn letter_char(code: u8) -> char {
    let c = (b'a' + code / 2) as char;
    if code % 2 == 1 {
        c.to_ascii_uppercase()
    } else {
        c
    }
}

/// `a`, `b`, ... for generators, upper case for inverses.
pub fn word_string(word: &[u8]) -> String {
    word.iter().map(|&c| letter_char(c)).collect()
}

/// Duval's test: the word is strictly smaller than each proper rotation.
pub(crate) fn is_lyndon(w: &[u8]) -> bool {
    let n = w.len();
    let (mut k, mut j) = (0, 1);
    while j < n && w[k] <= w[j] {
        if w[k] < w[j] {
            k = 0;
        } else {
            k += 1;
        }
        j += 1;
    }
    j == n && k == 0
}

fn hyperbolic_distance_from_i(q: Complex64) -> f64 {
    // cosh d(i, q) = 1 + |q - i|^2 / (2 Im q)
    let x = (q - Complex64::i()).norm_sqr() / (2.0 * q.im);
    (x + (x * (x + 2.0)).sqrt()).ln_1p()
}

struct Wall {
    center: f64,
    half_width: f64,
}

impl Wall {
    fn endpoints(&self) -> (Complex64, Complex64) {
        (
            Complex64::from_polar(1.0, self.center - self.half_width),
            Complex64::from_polar(1.0, self.center + self.half_width),
        )
    }
}

fn wall_distance(p: &Wall, q: &Wall) -> f64 {
    let (a1, a2) = p.endpoints();
    let (b1, b2) = q.endpoints();
    let x = (b2 - a1) * (b1 - a2) / ((b2 - a2) * (b1 - a1));
    let c = (Complex64::new(1.0, 0.0) + x).norm() / (Complex64::new(1.0, 0.0) - x).norm();
    c.max(1.0).acosh()
}

fn angular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

impl GroupPresentation {
    /// Accepts generators of a (declared) free group; every reduced word of
    /// length at most 4 must be hyperbolic.
    pub fn new(generators: Vec<MobiusTransform>, labels: Vec<String>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::NotConvexCocompact("no generators".into()));
        }
        if generators.len() > 26 {
            return Err(Error::InvalidInput("at most 26 generators are supported".into()));
        }
        if !labels.is_empty() && labels.len() != generators.len() {
            return Err(Error::InvalidInput(format!("{} labels for {} generators", labels.len(), generators.len())));
        }
        let labels = if labels.is_empty() {
            (0..generators.len()).map(|i| letter_char(2 * i as u8).to_string()).collect()
        } else {
            labels
        };
        let mut g = Self { generators, labels, bound: DisplacementBound::Heuristic(0.0) };
        g.screen()?;
        g.bound = g.compute_bound();
        Ok(g)
    }

    pub fn generators(&self) -> &[MobiusTransform] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn displacement_bound(&self) -> DisplacementBound {
        self.bound
    }

    pub fn letter(&self, code: u8) -> MobiusTransform {
        let m = self.generators[(code / 2) as usize];
        if code % 2 == 1 {
            m.inverse()
        } else {
            m
        }
    }

    pub fn word_matrix(&self, word: &[u8]) -> MobiusTransform {
        word.iter().fold(MobiusTransform::identity(), |acc, &c| acc.compose(&self.letter(c)))
    }

    fn n_codes(&self) -> u8 {
        2 * self.generators.len() as u8
    }

    fn reduced_words(&self, max_len: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut level: Vec<Vec<u8>> = (0..self.n_codes()).map(|c| vec![c]).collect();
        for _ in 0..max_len {
            out.extend(level.iter().cloned());
            let mut next = Vec::new();
            for w in &level {
                for c in 0..self.n_codes() {
                    if c != inv(*w.last().unwrap()) {
                        let mut v = w.clone();
                        v.push(c);
                        next.push(v);
                    }
                }
            }
            level = next;
        }
        out
    }

    fn screen(&self) -> Result<()> {
        for w in self.reduced_words(SCREEN_LENGTH) {
            let m = self.word_matrix(&w);
            if !m.is_hyperbolic() {
                return Err(Error::NotConvexCocompact(format!(
                    "word {} has |trace| = {} and is not hyperbolic",
                    word_string(&w),
                    m.trace().abs()
                )));
            }
        }
        Ok(())
    }

    fn compute_bound(&self) -> DisplacementBound {
        let walls: Vec<Wall> = (0..self.n_codes())
            .map(|c| {
                let q = self.letter(c).apply(Complex64::i());
                let p = (q - Complex64::i()) / (q + Complex64::i());
                let d = hyperbolic_distance_from_i(q);
                Wall { center: p.arg(), half_width: (0.5 * d).tanh().acos() }
            })
            .collect();
        let mut disjoint = true;
        let mut d_min = f64::INFINITY;
        for i in 0..walls.len() {
            for j in i + 1..walls.len() {
                let gap = angular_gap(walls[i].center, walls[j].center) - walls[i].half_width - walls[j].half_width;
                if gap <= 1e-12 {
                    disjoint = false;
                } else {
                    d_min = d_min.min(wall_distance(&walls[i], &walls[j]));
                }
            }
        }
        if disjoint && d_min.is_finite() && d_min > 0.0 {
            return DisplacementBound::Certified(d_min);
        }
        let mut h = f64::INFINITY;
        for w in self.reduced_words(SCREEN_LENGTH) {
            if w.len() > 1 && w[0] == inv(*w.last().unwrap()) {
                continue;
            }
            let l = translation_length(&self.word_matrix(&w)).unwrap_or(0.0);
            h = h.min(l / w.len() as f64);
        }
        DisplacementBound::Heuristic(h)
    }
}

struct Node {
    word: Vec<u8>,
    matrix: MobiusTransform,
}

struct Enumeration {
    entries: Vec<SpectrumEntry>,
    levels_done: usize,
    exhausted: bool,
}

fn run_levels(g: &GroupPresentation, max_len: usize, cutoff: f64, budget: usize) -> Enumeration {
    let n_codes = g.n_codes();
    let mut frontier: Vec<Node> = (0..n_codes).map(|c| Node { word: vec![c], matrix: g.letter(c) }).collect();
    let mut entries = Vec::new();
    let mut visited = 0usize;
    let mut levels_done = 0;
    if max_len == 0 {
        return Enumeration { entries, levels_done, exhausted: false };
    }
    loop {
        visited += frontier.len();
        if visited > budget {
            return Enumeration { entries, levels_done, exhausted: true };
        }
        let found: Vec<SpectrumEntry> = frontier
            .par_iter()
            .filter_map(|node| {
                let w = &node.word;
                if w.len() > 1 && w[0] == inv(w[w.len() - 1]) {
                    return None;
                }
                if !is_lyndon(w) {
                    return None;
                }
                let t = node.matrix.trace().abs();
                if t <= 2.0 {
                    return None;
                }
                let length = length_from_trace(t);
                (length <= cutoff).then(|| SpectrumEntry {
                    length,
                    multiplicity: 1,
                    reflections: None,
                    word: Some(word_string(w)),
                })
            })
            .collect();
        entries.extend(found);
        levels_done += 1;
        if levels_done == max_len {
            return Enumeration { entries, levels_done, exhausted: false };
        }
        frontier = frontier
            .par_iter()
            .flat_map_iter(|node| {
                let first = node.word[0];
                let last = *node.word.last().unwrap();
                (first..n_codes).filter(move |&c| c != inv(last)).map(move |c| {
                    let mut word = Vec::with_capacity(node.word.len() + 1);
                    word.extend_from_slice(&node.word);
                    word.push(c);
                    Node { word, matrix: node.matrix.compose(&g.letter(c)) }
                })
            })
            .collect();
    }
}

/// All primitive classes given by cyclically reduced words of length at most
/// `max_word_len`. `complete_up_to` is `max_word_len` times the
/// displacement bound.
pub fn enumerate_classes(g: &GroupPresentation, max_word_len: usize, budget: usize) -> Result<LengthSpectrum> {
    let d = g.bound.value();
    let run = run_levels(g, max_word_len, f64::INFINITY, budget);
    finish(run, d, None, budget)
}

/// All primitive classes with length at most `l_max`.
pub fn enumerate_primitive_classes(g: &GroupPresentation, l_max: f64) -> Result<LengthSpectrum> {
    enumerate_primitive_classes_with_budget(g, l_max, DEFAULT_WORD_BUDGET)
}

pub fn enumerate_primitive_classes_with_budget(
    g: &GroupPresentation,
    l_max: f64,
    budget: usize,
) -> Result<LengthSpectrum> {
    if !(l_max.is_finite() && l_max > 0.0) {
        return Err(Error::InvalidInput(format!("length cutoff must be positive, got {l_max}")));
    }
    let d = g.bound.value();
    if !(d > 0.0) {
        return Err(Error::NotConvexCocompact("no positive displacement bound".into()));
    }
    let max_len = (l_max / d).floor() as usize;
    let run = run_levels(g, max_len, l_max, budget);
    finish(run, d, Some(l_max), budget)
}

fn finish(run: Enumeration, d: f64, l_max: Option<f64>, budget: usize) -> Result<LengthSpectrum> {
    let levels_bound = run.levels_done as f64 * d;
    let complete = match l_max {
        Some(l) if !run.exhausted => l,
        Some(l) => levels_bound.min(l),
        None => levels_bound,
    };
    let longest = run.entries.iter().map(|e| e.length).fold(0.0, f64::max);
    let cutoff = l_max.unwrap_or(longest.max(complete));
    // a spectrum with nothing certified still needs positive bounds
    let tiny = f64::MIN_POSITIVE;
    let spec = LengthSpectrum::new(cutoff.max(tiny), complete.max(tiny), run.entries)?;
    if run.exhausted {
        return Err(Error::EnumerationBudget { budget, partial: Box::new(spec) });
    }
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub delta: f64,
    /// Root-mean-square residual of the fit of ln(N(l) l) against l.
    pub fit_residual: f64,
    pub classes_used: usize,
    /// One-generator groups have linear counting and exponent 0; no fit is made.
    pub elementary: bool,
}

/// Fits `ln(N(l) l) ~ delta l + const` on the upper half of the certified
/// range, where `N` counts primitive classes of length at most `l`.
pub fn exponent_from_spectrum(spec: &LengthSpectrum) -> Result<ExponentEstimate> {
    let lengths: Vec<f64> =
        spec.certified_entries().flat_map(|e| std::iter::repeat_n(e.length, e.multiplicity as usize)).collect();
    if lengths.len() < 10 {
        return Err(Error::InsufficientData(format!("{} classes; at least 10 are needed", lengths.len())));
    }
    let top = lengths[lengths.len() - 1];
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (i, &l) in lengths.iter().enumerate() {
        let last_of_tie = i + 1 == lengths.len() || lengths[i + 1] > l;
        if last_of_tie && l >= 0.5 * top {
            pts.push((l, ((i + 1) as f64 * l).ln()));
        }
    }
    if pts.len() < 3 {
        return Err(Error::InsufficientData("fewer than 3 distinct lengths in the fitting window".into()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit("degenerate length range".into()));
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum();
    Ok(ExponentEstimate {
        delta: slope.clamp(0.0, 1.0),
        fit_residual: (rss / n).sqrt(),
        classes_used: lengths.len(),
        elementary: false,
    })
}

pub fn exponent_estimate(g: &GroupPresentation, l_max: f64) -> Result<ExponentEstimate> {
    if g.rank() == 1 {
        return Ok(ExponentEstimate { delta: 0.0, fit_residual: 0.0, classes_used: 2, elementary: true });
    }
    let spec = enumerate_primitive_classes(g, l_max)?;
    exponent_from_spectrum(&spec)
}
