use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::linalg::{HermitianOperator, SystemLayout};
use crate::{CMatrix, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn symbol(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn matrix(self) -> CMatrix {
        let (o, i) = (C64::new(0.0, 0.0), C64::new(0.0, 1.0));
        let one = C64::new(1.0, 0.0);
        match self {
            Pauli::X => CMatrix::from_row_slice(2, 2, &[o, one, one, o]),
            Pauli::Y => CMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
            Pauli::Z => CMatrix::from_row_slice(2, 2, &[one, o, o, -one]),
        }
    }
}

/// Tensor product of single-qubit Paulis, identity on unlisted sites.
///
/// Letters are kept sorted by site id, so equal strings compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn new(letters: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        let mut letters: Vec<(usize, Pauli)> = letters.into_iter().collect();
        letters.sort_by_key(|&(s, _)| s);
        if letters.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Layout(format!("site listed twice in Pauli string {letters:?}")));
        }
        Ok(Self { letters })
    }

    pub fn identity() -> Self {
        Self { letters: Vec::new() }
    }

    pub fn single(site: usize, p: Pauli) -> Self {
        Self { letters: alloc::vec![(site, p)] }
    }

    pub fn letters(&self) -> &[(usize, Pauli)] {
        &self.letters
    }

    pub fn support(&self) -> Vec<usize> {
        self.letters.iter().map(|&(s, _)| s).collect()
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter_at(&self, site: usize) -> Option<Pauli> {
        self.letters.iter().find(|&&(s, _)| s == site).map(|&(_, p)| p)
    }

    /// Bit masks describing the action on computational basis states.
    pub fn masks(&self, layout: &SystemLayout) -> Result<PauliMasks> {
        if layout.local_dim() != 2 {
            return Err(Error::UnsupportedDimension(layout.local_dim()));
        }
        let n = layout.num_sites();
        if n >= usize::BITS as usize {
            return Err(Error::Size(format!("{n} qubits do not fit a bit mask")));
        }
        let mut flip = 0usize;
        let mut phase = 0usize;
        let mut ys = 0u32;
        for &(site, p) in &self.letters {
            let pos = layout
                .position(site)
                .ok_or_else(|| Error::Layout(format!("site {site} is not in the layout")))?;
            let bit = 1usize << (n - 1 - pos);
            match p {
                Pauli::X => flip |= bit,
                Pauli::Z => phase |= bit,
                Pauli::Y => {
                    flip |= bit;
                    phase |= bit;
                    ys += 1;
                }
            }
        }
        // Y = i X Z, so the string is i^{#Y} X^flip Z^phase.
        let y_phase = match ys % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
        Ok(PauliMasks { flip, phase, y_phase, dim: layout.dim() })
    }

    /// Dense operator on the full layout.
    pub fn to_operator(&self, layout: &SystemLayout) -> Result<HermitianOperator> {
        let masks = self.masks(layout)?;
        let dim = layout.dim();
        let mut m = CMatrix::zeros(dim, dim);
        masks.accumulate(&mut m, 1.0);
        HermitianOperator::new(layout.clone(), m)
    }
}

impl Ord for PauliString {
    /// By support (lexicographic site ids), then by letters.
    fn cmp(&self, other: &Self) -> Ordering {
        let support = self.letters.iter().map(|l| l.0).cmp(other.letters.iter().map(|l| l.0));
        support.then_with(|| self.letters.iter().map(|l| l.1).cmp(other.letters.iter().map(|l| l.1)))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("I");
        }
        for (i, (s, p)) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", p.symbol(), s)?;
        }
        Ok(())
    }
}

/// A Pauli string as a signed permutation: `P|b⟩ = phase(b) |b ⊕ flip⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliMasks {
    pub flip: usize,
    pub phase: usize,
    pub y_phase: C64,
    pub dim: usize,
}

impl PauliMasks {
    /// Matrix element `⟨b ⊕ flip| P |b⟩`.
    #[inline]
    pub fn element(&self, b: usize) -> C64 {
        if (b & self.phase).count_ones().is_multiple_of(2) {
            self.y_phase
        } else {
            -self.y_phase
        }
    }

    /// `out += coeff · P`.
    pub fn accumulate(&self, out: &mut CMatrix, coeff: f64) {
        for b in 0..self.dim {
            out[(b ^ self.flip, b)] += self.element(b) * coeff;
        }
    }

    /// `Re tr(σ P)`.
    pub fn expectation(&self, sigma: &CMatrix) -> f64 {
        let mut acc = 0.0;
        for b in 0..self.dim {
            acc += (sigma[(b, b ^ self.flip)] * self.element(b)).re;
        }
        acc
    }
}

/// Every non-identity Pauli string supported on `sites`, in basis order.
pub fn strings_on(sites: &[usize]) -> Vec<PauliString> {
    let k = sites.len();
    let mut sorted = sites.to_vec();
    sorted.sort_unstable();
    let count = 4usize.pow(k as u32);
    let mut out = Vec::with_capacity(count - 1);
    for code in 1..count {
        let mut letters = Vec::new();
        let mut rem = code;
        for &s in sorted.iter().rev() {
            let digit = rem % 4;
            rem /= 4;
            if digit > 0 {
                letters.push((s, Pauli::ALL[digit - 1]));
            }
        }
        letters.reverse();
        out.push(PauliString { letters });
    }
    out
}
