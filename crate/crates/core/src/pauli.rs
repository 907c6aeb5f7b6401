//! Pauli strings and sparse complex-weighted Pauli sums.
//!
//! A string stores one X bit and one Z bit per site: `I = (0,0)`,
//! `X = (1,0)`, `Z = (0,1)`, `Y = (1,1)`. Bit `i` of each mask is site `i`.
//! Products are tracked with an exact power of `i`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{DenseOperator, StateVector, DENSE_CAP};

/// Coefficients with modulus below this are dropped after every update.
pub const PRUNE_TOL: f64 = 1e-12;

/// Largest supported register (masks are `u64`).
pub const MAX_SITES: usize = 64;

/// A power of `i`: `Phase(k)` is `i^k`, `k ∈ 0..4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Single-site Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | 'i' | '_' => Some(Pauli::I),
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A tensor product of single-site Paulis (no phase).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_sites: usize,
    x_mask: u64,
    z_mask: u64,
}

fn site_mask(n_sites: usize) -> u64 {
    if n_sites >= 64 {
        u64::MAX
    } else {
        (1u64 << n_sites) - 1
    }
}

fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites == 0 || n_sites > MAX_SITES {
        Err(Error::invalid(format!("site count {n_sites} outside 1..={MAX_SITES}")))
    } else {
        Ok(())
    }
}

impl PauliString {
    pub fn new(n_sites: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        check_sites(n_sites)?;
        let valid = site_mask(n_sites);
        if (x_mask | z_mask) & !valid != 0 {
            return Err(Error::invalid(format!("mask bits beyond {n_sites} sites")));
        }
        Ok(Self {
            n_sites,
            x_mask,
            z_mask,
        })
    }

    pub fn identity(n_sites: usize) -> Result<Self> {
        Self::new(n_sites, 0, 0)
    }

    /// One Pauli letter on `site`, identity elsewhere.
    pub fn single(n_sites: usize, site: usize, p: Pauli) -> Result<Self> {
        Self::from_sites(n_sites, &[(site, p)])
    }

    /// Letters at the given sites, identity elsewhere. Repeated sites are rejected.
    pub fn from_sites(n_sites: usize, letters: &[(usize, Pauli)]) -> Result<Self> {
        check_sites(n_sites)?;
        let (mut x, mut z, mut seen) = (0u64, 0u64, 0u64);
        for &(site, p) in letters {
            if site >= n_sites {
                return Err(Error::invalid(format!("site {site} out of range for {n_sites} sites")));
            }
            if seen & (1 << site) != 0 {
                return Err(Error::invalid(format!("site {site} repeated")));
            }
            seen |= 1 << site;
            let (bx, bz) = p.bits();
            x |= (bx as u64) << site;
            z |= (bz as u64) << site;
        }
        Self::new(n_sites, x, z)
    }

    /// Parses a label such as `IXYZ` (site 0 leftmost).
    pub fn from_label(label: &str) -> Result<Self> {
        let letters: Vec<(usize, Pauli)> = label
            .chars()
            .enumerate()
            .map(|(i, c)| {
                Pauli::from_char(c)
                    .map(|p| (i, p))
                    .ok_or_else(|| Error::invalid(format!("bad Pauli letter {c:?}")))
            })
            .collect::<Result<_>>()?;
        Self::from_sites(letters.len(), &letters)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn letter(&self, site: usize) -> Pauli {
        match ((self.x_mask >> site) & 1, (self.z_mask >> site) & 1) {
            (0, 0) => Pauli::I,
            (1, 0) => Pauli::X,
            (1, 1) => Pauli::Y,
            _ => Pauli::Z,
        }
    }

    pub fn label(&self) -> String {
        (0..self.n_sites).map(|i| self.letter(i).to_char()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask | self.z_mask == 0
    }

    pub fn weight(&self) -> usize {
        (self.x_mask | self.z_mask).count_ones() as usize
    }

    /// Sites carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        let m = self.x_mask | self.z_mask;
        (0..self.n_sites).filter(|i| (m >> i) & 1 == 1).collect()
    }

    /// Symplectic test: true iff the two strings commute.
    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones()) % 2 == 0
    }

    /// `self · other = phase · r`.
    pub fn mul(&self, other: &Self) -> Result<(Phase, PauliString)> {
        if self.n_sites != other.n_sites {
            return Err(Error::SizeMismatch {
                left: self.n_sites,
                right: other.n_sites,
            });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> (Phase, PauliString) {
        // With P = i^{|x∧z|} X^x Z^z, moving Z^{z1} past X^{x2} costs (−1)^{|z1∧x2|}.
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        let k = (self.x_mask & self.z_mask).count_ones() as i64
            + (other.x_mask & other.z_mask).count_ones() as i64
            + 2 * (self.z_mask & other.x_mask).count_ones() as i64
            - (x & z).count_ones() as i64;
        (
            Phase::from_exponent(k),
            PauliString {
                n_sites: self.n_sites,
                x_mask: x,
                z_mask: z,
            },
        )
    }

    /// Basis-index masks: `x` flips and `z` signs in the dense layout.
    pub(crate) fn index_masks(&self) -> (usize, usize) {
        let n = self.n_sites;
        let (mut xi, mut zi) = (0usize, 0usize);
        for s in 0..n {
            let bit = 1usize << (n - 1 - s);
            if (self.x_mask >> s) & 1 == 1 {
                xi |= bit;
            }
            if (self.z_mask >> s) & 1 == 1 {
                zi |= bit;
            }
        }
        (xi, zi)
    }

    /// `P|j⟩ = i^{|x∧z|} (−1)^{|z∧j|} |j ⊕ x⟩`, as (amplitude, target index).
    pub(crate) fn y_phase(&self) -> Complex64 {
        Phase::from_exponent((self.x_mask & self.z_mask).count_ones() as i64).to_complex()
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        PauliSum::from_string(*self).to_dense()
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({})", self.label())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Free-function form of [`PauliString::mul`].
pub fn mul(p: &PauliString, q: &PauliString) -> Result<(Phase, PauliString)> {
    p.mul(q)
}

/// `Σ c_k P_k` with strings kept in a deterministic order.
#[derive(Clone, PartialEq)]
pub struct PauliSum {
    n_sites: usize,
    terms: BTreeMap<PauliString, Complex64>,
}

impl PauliSum {
    pub fn zero(n_sites: usize) -> Result<Self> {
        check_sites(n_sites)?;
        Ok(Self {
            n_sites,
            terms: BTreeMap::new(),
        })
    }

    pub fn identity(n_sites: usize) -> Result<Self> {
        Ok(Self::from_string(PauliString::identity(n_sites)?))
    }

    pub fn from_string(p: PauliString) -> Self {
        Self::term(Complex64::new(1.0, 0.0), p)
    }

    pub fn term(coef: Complex64, p: PauliString) -> Self {
        let mut s = Self {
            n_sites: p.n_sites,
            terms: BTreeMap::new(),
        };
        s.accumulate(p, coef);
        s
    }

    pub fn from_terms(n_sites: usize, terms: impl IntoIterator<Item = (Complex64, PauliString)>) -> Result<Self> {
        let mut s = Self::zero(n_sites)?;
        for (c, p) in terms {
            if p.n_sites != n_sites {
                return Err(Error::SizeMismatch {
                    left: n_sites,
                    right: p.n_sites,
                });
            }
            s.accumulate(p, c);
        }
        Ok(s)
    }

    /// Real-weighted sum from `(coef, label)` pairs.
    pub fn from_labels(terms: &[(f64, &str)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::invalid("empty label list"))?;
        let n = first.1.chars().count();
        let parsed = terms
            .iter()
            .map(|&(c, l)| PauliString::from_label(l).map(|p| (Complex64::new(c, 0.0), p)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n, parsed)
    }

    fn accumulate(&mut self, p: PauliString, c: Complex64) {
        let entry = self.terms.entry(p).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() < PRUNE_TOL {
            self.terms.remove(&p);
        }
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= PRUNE_TOL);
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex64 {
        self.terms.get(p).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    /// Each term as its own single-string sum (finest decomposition).
    pub fn parts(&self) -> Vec<(Complex64, PauliString)> {
        self.terms.iter().map(|(p, c)| (*c, *p)).collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n_sites != other.n_sites {
            Err(Error::SizeMismatch {
                left: self.n_sites,
                right: other.n_sites,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.accumulate(*p, *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self {
            n_sites: self.n_sites,
            terms: self.terms.iter().map(|(p, v)| (*p, v * c)).collect(),
        };
        out.prune();
        out
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            n_sites: self.n_sites,
            terms: self.terms.iter().map(|(p, c)| (*p, c.conj())).collect(),
        }
    }

    /// Operator product `self · other`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self {
            n_sites: self.n_sites,
            terms: BTreeMap::new(),
        };
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                let (ph, r) = p.mul_unchecked(q);
                *out.terms.entry(r).or_default() += ph.to_complex() * a * b;
            }
        }
        out.prune();
        Ok(out)
    }

    /// `ab − ba`; only anticommuting pairs contribute, each as `2·a·b·p·q`.
    pub fn commutator(a: &Self, b: &Self) -> Result<Self> {
        a.check(b)?;
        let mut out = Self {
            n_sites: a.n_sites,
            terms: BTreeMap::new(),
        };
        for (p, ca) in &a.terms {
            for (q, cb) in &b.terms {
                if p.commutes_with(q) {
                    continue;
                }
                let (ph, r) = p.mul_unchecked(q);
                *out.terms.entry(r).or_default() += ph.to_complex() * ca * cb * 2.0;
            }
        }
        out.prune();
        Ok(out)
    }

    /// `A = A†` iff each coefficient is real (Pauli strings are Hermitian).
    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() < PRUNE_TOL)
    }

    pub fn is_anti_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.re.abs() < PRUNE_TOL)
    }

    /// Normalized Frobenius norm `sqrt(Σ|c|²)`.
    pub fn frobenius_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Σ|c|`, an upper bound on the spectral norm.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Exact spectral norm from the dense matrix.
    pub fn spectral_norm(&self) -> Result<f64> {
        if self.is_empty() {
            return Ok(0.0);
        }
        // Anti-Hermitian sums are rotated onto the Hermitian eigenvalue path.
        let s = if self.is_anti_hermitian() {
            self.scale(Complex64::new(0.0, 1.0))
        } else {
            self.clone()
        };
        Ok(s.to_dense()?.spectral_norm())
    }

    /// Union of the supports of all terms.
    pub fn support(&self) -> Vec<usize> {
        let m = self.terms.keys().fold(0u64, |m, p| m | p.x_mask | p.z_mask);
        (0..self.n_sites).filter(|i| (m >> i) & 1 == 1).collect()
    }

    /// Largest term weight (0 for the empty sum).
    pub fn locality(&self) -> usize {
        self.terms.keys().map(PauliString::weight).max().unwrap_or(0)
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        let n = self.n_sites;
        if n > DENSE_CAP {
            return Err(Error::DenseCapExceeded {
                n_sites: n,
                cap: DENSE_CAP,
            });
        }
        let dim = 1usize << n;
        let mut out = DenseOperator::zeros(n)?;
        let entries: Vec<(usize, usize, Complex64, Complex64)> = self
            .terms
            .iter()
            .map(|(p, c)| {
                let (xi, zi) = p.index_masks();
                (xi, zi, p.y_phase() * c, *c)
            })
            .collect();
        let mat = faer::Mat::from_fn(dim, dim, |row, col| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(xi, zi, pc, _) in &entries {
                if row == col ^ xi {
                    let sign = if (zi & col).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    acc += pc * sign;
                }
            }
            acc
        });
        if !entries.is_empty() {
            out = DenseOperator::from_mat(n, mat)?;
        }
        Ok(out)
    }

    /// Decomposes a dense operator by trace inner products `tr(P†A)/d`.
    pub fn from_dense(a: &DenseOperator) -> Result<Self> {
        let n = a.n_sites();
        let dim = a.dim();
        let mut terms = BTreeMap::new();
        for x in 0..(1u64 << n) {
            for z in 0..(1u64 << n) {
                let p = PauliString {
                    n_sites: n,
                    x_mask: x,
                    z_mask: z,
                };
                let (xi, zi) = p.index_masks();
                let ph = p.y_phase();
                // tr(P† A) = Σ_j conj(⟨j⊕x|P|j⟩) A[j⊕x, j].
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..dim {
                    let sign = if (zi & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    acc += (ph * sign).conj() * a.get(j ^ xi, j);
                }
                let c = acc / dim as f64;
                if c.norm() >= PRUNE_TOL {
                    terms.insert(p, c);
                }
            }
        }
        Ok(Self { n_sites: n, terms })
    }

    /// Sparse action on a state vector (no dense matrix formed).
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.n_sites() != self.n_sites {
            return Err(Error::SizeMismatch {
                left: self.n_sites,
                right: psi.n_sites(),
            });
        }
        Ok(StateVector::from_amps_unchecked(
            self.n_sites,
            self.apply_amps(psi.amps()),
        ))
    }

    pub(crate) fn apply_amps(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let dim = amps.len();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (p, c) in &self.terms {
            let (xi, zi) = p.index_masks();
            let pc = p.y_phase() * c;
            for (j, a) in amps.iter().enumerate() {
                let v = if (zi & j).count_ones() % 2 == 0 {
                    pc * a
                } else {
                    -pc * a
                };
                out[j ^ xi] += v;
            }
        }
        out
    }

    /// One line per term: `<re> <im> <label>`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (p, c) in &self.terms {
            s.push_str(&format!("{:e} {:e} {}\n", c.re, c.im, p.label()));
        }
        s
    }

    /// Parses the `to_text` format; blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut n_sites = None;
        let mut terms = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: idx + 1,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err("expected `<re> <im> <string>`"));
            }
            let re: f64 = fields[0].parse().map_err(|_| err("bad real part"))?;
            let im: f64 = fields[1].parse().map_err(|_| err("bad imaginary part"))?;
            let p = PauliString::from_label(fields[2]).map_err(|e| err(&e.to_string()))?;
            match n_sites {
                None => n_sites = Some(p.n_sites),
                Some(n) if n != p.n_sites => return Err(err("inconsistent string length")),
                _ => {}
            }
            terms.push((Complex64::new(re, im), p));
        }
        let n = n_sites.ok_or(Error::Parse {
            line: 0,
            msg: "no terms".into(),
        })?;
        Self::from_terms(n, terms)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_text(&std::fs::read_to_string(path)?)
    }
}

impl fmt::Debug for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliSum[{}](", self.n_sites)?;
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i){}", c.re, c.im, p.label())?;
        }
        f.write_str(")")
    }
}

/// Free-function form of [`PauliSum::commutator`].
pub fn commutator(a: &PauliSum, b: &PauliSum) -> Result<PauliSum> {
    PauliSum::commutator(a, b)
}

/// Right-nested bracket `[a₁,[a₂,…,[a_{k−1},a_k]]]`.
pub fn nested_commutator(ops: &[&PauliSum]) -> Result<PauliSum> {
    if ops.len() < 2 {
        return Err(Error::invalid("nested commutator needs at least two operators"));
    }
    let mut acc = ops[ops.len() - 1].clone();
    for op in ops[..ops.len() - 1].iter().rev() {
        acc = PauliSum::commutator(op, &acc)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ps(label: &str) -> PauliString {
        PauliString::from_label(label).unwrap()
    }

    fn dense_diff(a: &DenseOperator, b: &DenseOperator) -> f64 {
        a.sub(b).unwrap().max_abs()
    }

    #[test]
    fn single_qubit_table() {
        assert_eq!(ps("X").mul(&ps("Z")).unwrap(), (Phase::MINUS_I, ps("Y")));
        assert_eq!(ps("Z").mul(&ps("X")).unwrap(), (Phase::I, ps("Y")));
        assert_eq!(ps("X").mul(&ps("Y")).unwrap(), (Phase::I, ps("Z")));
        assert_eq!(ps("Y").mul(&ps("Z")).unwrap(), (Phase::I, ps("X")));
        for l in ["I", "X", "Y", "Z"] {
            assert_eq!(ps(l).mul(&ps(l)).unwrap(), (Phase::ONE, ps("I")));
        }
    }

    #[test]
    fn two_site_product_matches_dense() {
        // (X⊗Z)(Z⊗Z) = (XZ)⊗(ZZ) = −iY ⊗ I.
        let (ph, r) = ps("XZ").mul(&ps("ZZ")).unwrap();
        assert_eq!(r, ps("YI"));
        assert_eq!(ph, Phase::MINUS_I);
        let lhs = ps("XZ")
            .to_dense()
            .unwrap()
            .matmul(&ps("ZZ").to_dense().unwrap())
            .unwrap();
        let rhs = r.to_dense().unwrap().scale(ph.to_complex());
        assert!(dense_diff(&lhs, &rhs) < 1e-15);
    }

    #[test]
    fn size_mismatch_errors() {
        assert!(matches!(ps("X").mul(&ps("XX")), Err(Error::SizeMismatch { .. })));
        let a = PauliSum::from_labels(&[(1.0, "X")]).unwrap();
        let b = PauliSum::from_labels(&[(1.0, "XX")]).unwrap();
        assert!(PauliSum::commutator(&a, &b).is_err());
    }

    #[test]
    fn dense_of_single_x() {
        let x = ps("X").to_dense().unwrap();
        assert_eq!(x.get(0, 1), c(1.0, 0.0));
        assert_eq!(x.get(1, 0), c(1.0, 0.0));
        assert_eq!(x.get(0, 0), c(0.0, 0.0));
        let y = ps("Y").to_dense().unwrap();
        assert_eq!(y.get(0, 1), c(0.0, -1.0));
        assert_eq!(y.get(1, 0), c(0.0, 1.0));
    }

    #[test]
    fn site_zero_is_leftmost_factor() {
        // Z on site 0 acts on the most significant bit: |10⟩ (index 2) gets −1.
        let z0 = ps("ZI").to_dense().unwrap();
        assert_eq!(z0.get(2, 2), c(-1.0, 0.0));
        assert_eq!(z0.get(1, 1), c(1.0, 0.0));
    }

    #[test]
    fn identity_sum_is_identity_matrix() {
        let id = PauliSum::identity(3).unwrap().to_dense().unwrap();
        assert!(dense_diff(&id, &DenseOperator::identity(3).unwrap()) < 1e-15);
    }

    #[test]
    fn basic_commutators() {
        let x = PauliSum::from_labels(&[(1.0, "X")]).unwrap();
        let z = PauliSum::from_labels(&[(1.0, "Z")]).unwrap();
        let xz = commutator(&x, &z).unwrap();
        assert_eq!(xz.len(), 1);
        assert_eq!(xz.coefficient(&ps("Y")), c(0.0, -2.0));
        assert!(commutator(&x, &x).unwrap().is_empty());
        let n = nested_commutator(&[&x, &x, &z]).unwrap();
        assert_eq!(n.len(), 1);
        // [X,−2iY] = −2i·2iZ = 4Z.
        assert_eq!(n.coefficient(&ps("Z")), c(4.0, 0.0));
        let dx = x.to_dense().unwrap();
        let dz = z.to_dense().unwrap();
        let dense = DenseOperator::commutator(&dx, &DenseOperator::commutator(&dx, &dz).unwrap()).unwrap();
        assert!(dense_diff(&dense, &n.to_dense().unwrap()) < 1e-15);
        assert!(nested_commutator(&[&x]).is_err());
    }

    #[test]
    fn frobenius_examples() {
        let a = PauliSum::from_labels(&[(3.5, "XXI")]).unwrap();
        assert_abs_diff_eq!(a.frobenius_norm(), 3.5);
        let b = PauliSum::from_labels(&[(1.0, "X"), (1.0, "Z")]).unwrap();
        assert_abs_diff_eq!(b.frobenius_norm(), 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn support_examples() {
        assert!(PauliString::identity(4).unwrap().support().is_empty());
        assert_eq!(PauliString::single(5, 3, Pauli::X).unwrap().support(), vec![3]);
        // X₁Z₂ · Z₂ leaves only site 1.
        let (_, r) = ps("IXZ").mul(&ps("IIZ")).unwrap();
        assert_eq!(r.support(), vec![1]);
    }

    #[test]
    fn text_round_trip() {
        let a = PauliSum::from_terms(3, [(c(0.5, -0.25), ps("XYZ")), (c(-1.0, 0.0), ps("IIZ"))]).unwrap();
        let back = PauliSum::parse_text(&a.to_text()).unwrap();
        assert_eq!(a, back);
        assert!(matches!(
            PauliSum::parse_text("1.0 0 XQ"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(PauliSum::parse_text("# only comments\n").is_err());
    }

    #[test]
    fn hermitian_predicate() {
        let h = PauliSum::from_labels(&[(1.0, "XZ"), (-0.3, "YY")]).unwrap();
        assert!(h.is_hermitian());
        assert!(!h.scale(c(0.0, 1.0)).is_hermitian());
        assert!(h.scale(c(0.0, 1.0)).is_anti_hermitian());
    }

    #[test]
    fn pruning_removes_cancelled_terms() {
        let a = PauliSum::from_labels(&[(1.0, "XX")]).unwrap();
        assert!(a.sub(&a).unwrap().is_empty());
        let tiny = PauliSum::from_labels(&[(1e-13, "XX")]).unwrap();
        assert!(tiny.is_empty());
    }

    #[test]
    fn sparse_apply_matches_dense() {
        let a = PauliSum::from_terms(
            3,
            [
                (c(0.5, -0.25), ps("XYZ")),
                (c(-1.0, 0.3), ps("IYI")),
                (c(0.7, 0.0), ps("ZZX")),
            ],
        )
        .unwrap();
        let psi = StateVector::from_amps((0..8).map(|k| c(k as f64 * 0.1 + 0.2, 0.05 * k as f64)).collect()).unwrap();
        let sparse = a.apply(&psi).unwrap();
        let dense = a.to_dense().unwrap().apply(&psi).unwrap();
        assert!(sparse.sub(&dense).norm() < 1e-14);
    }

    fn arb_string(n: usize) -> impl Strategy<Value = PauliString> {
        let m = (1u64 << n) - 1;
        (0..=m, 0..=m).prop_map(move |(x, z)| PauliString::new(n, x, z).unwrap())
    }

    fn arb_sum(n: usize) -> impl Strategy<Value = PauliSum> {
        prop::collection::vec((arb_string(n), -2.0f64..2.0, -2.0f64..2.0), 0..=8)
            .prop_map(move |v| PauliSum::from_terms(n, v.into_iter().map(|(p, re, im)| (c(re, im), p))).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mul_matches_dense(p in arb_string(4), q in arb_string(4)) {
            let (ph, r) = p.mul(&q).unwrap();
            let lhs = p.to_dense().unwrap().matmul(&q.to_dense().unwrap()).unwrap();
            let rhs = r.to_dense().unwrap().scale(ph.to_complex());
            prop_assert!(dense_diff(&lhs, &rhs) < 1e-14);
        }

        #[test]
        fn swap_changes_phase_by_sign(p in arb_string(5), q in arb_string(5)) {
            let (a, r1) = p.mul(&q).unwrap();
            let (b, r2) = q.mul(&p).unwrap();
            prop_assert_eq!(r1, r2);
            if p.commutes_with(&q) {
                prop_assert_eq!(a, b);
            } else {
                prop_assert_eq!(a, b * Phase::MINUS_ONE);
            }
        }

        #[test]
        fn commutator_matches_dense(a in arb_sum(4), b in arb_sum(4)) {
            let sym = commutator(&a, &b).unwrap().to_dense().unwrap();
            let da = a.to_dense().unwrap();
            let db = b.to_dense().unwrap();
            let dense = DenseOperator::commutator(&da, &db).unwrap();
            prop_assert!(dense_diff(&sym, &dense) < 1e-12);
        }

        #[test]
        fn commutator_bilinear_antisymmetric(a in arb_sum(3), b in arb_sum(3), d in arb_sum(3), s in -2.0f64..2.0) {
            let ab = commutator(&a, &b).unwrap();
            let ba = commutator(&b, &a).unwrap();
            prop_assert!(ab.add(&ba).unwrap().frobenius_norm() < 1e-11);
            let lhs = commutator(&a.add(&d.scale_real(s)).unwrap(), &b).unwrap();
            let rhs = ab.add(&commutator(&d, &b).unwrap().scale_real(s)).unwrap();
            prop_assert!(lhs.sub(&rhs).unwrap().frobenius_norm() < 1e-11);
        }

        #[test]
        fn frobenius_matches_trace(a in arb_sum(4)) {
            let d = a.to_dense().unwrap();
            let tr = d.adjoint().matmul(&d).unwrap().trace().re / d.dim() as f64;
            prop_assert!((a.frobenius_norm().powi(2) - tr).abs() < 1e-10);
            prop_assert!((a.frobenius_norm() - d.frobenius_norm()).abs() < 1e-10);
        }

        #[test]
        fn jacobi_identity(a in arb_sum(3), b in arb_sum(3), d in arb_sum(3)) {
            let t1 = nested_commutator(&[&a, &b, &d]).unwrap();
            let t2 = nested_commutator(&[&b, &d, &a]).unwrap();
            let t3 = nested_commutator(&[&d, &a, &b]).unwrap();
            let sum = t1.add(&t2).unwrap().add(&t3).unwrap();
            prop_assert!(sum.frobenius_norm() < 1e-12 * (1.0 + t1.frobenius_norm()));
        }

        #[test]
        fn dense_round_trip(a in arb_sum(3)) {
            let back = PauliSum::from_dense(&a.to_dense().unwrap()).unwrap();
            prop_assert!(back.sub(&a).unwrap().frobenius_norm() < 1e-12);
        }

        #[test]
        fn hermitian_predicate_matches_dense(a in arb_sum(3)) {
            let d = a.to_dense().unwrap();
            prop_assert_eq!(a.is_hermitian(), d.is_hermitian(1e-11));
        }
    }
}
