mod common;

use common::*;
use maxent_core::lattice::{build_tfim_chain, ground_space, intervals, ChainGeometry, DEFAULT_DEGENERACY_TOL};
use maxent_core::linalg::{Geometry, SystemLayout};
use maxent_core::marginals::{constraints_from_state, region_basis, Pauli, PauliString};
use maxent_core::{CMatrix, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn letter_matrix(p: Pauli) -> CMatrix {
    match p {
        Pauli::X => sx(),
        Pauli::Y => sy(),
        Pauli::Z => sz(),
    }
}

#[test]
fn ring_pair_basis_count_matches_enumeration() {
    let layout = ring(6);
    let basis = region_basis(&layout, &intervals(&layout, 2).unwrap()).unwrap();
    // Enumerate all 4^6 strings by their per-site letter index.
    let windows: Vec<[usize; 2]> = (0..6).map(|s| [s, (s + 1) % 6]).collect();
    let mut count = 0;
    for code in 1..4usize.pow(6) {
        let support: Vec<usize> = (0..6).filter(|s| !(code / 4usize.pow(*s as u32)).is_multiple_of(4)).collect();
        if windows.iter().any(|w| support.iter().all(|s| w.contains(s))) {
            count += 1;
        }
    }
    assert_eq!(basis.len(), count);
    assert_eq!(count, 72);
}

#[test]
fn basis_is_deterministic_and_sorted() {
    let layout = ring(5);
    let regions = intervals(&layout, 3).unwrap();
    let a = region_basis(&layout, &regions).unwrap();
    let b = region_basis(&layout, &regions).unwrap();
    assert_eq!(a, b);
    assert!(a.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn qudit_layouts_are_unsupported() {
    let layout = SystemLayout::new(Geometry::OpenChain { len: 2 }, 3).unwrap();
    let regions = maxent_core::lattice::RegionSet::new(&layout, vec![vec![0, 1]]).unwrap();
    assert!(matches!(region_basis(&layout, &regions), Err(Error::UnsupportedDimension(3))));
}

#[test]
fn tfim_targets_match_partial_trace_oracle() {
    let h = build_tfim_chain(6, 1.0, 1.5, ChainGeometry::Ring).unwrap();
    let rho = ground_space(&h, DEFAULT_DEGENERACY_TOL).unwrap().ground_state().unwrap();
    let cs = constraints_from_state(&rho, &intervals(rho.layout(), 2).unwrap()).unwrap();
    for (p, &target) in cs.basis().iter().zip(cs.targets()) {
        let support = p.support();
        let reduced = partial_trace_oracle(rho.matrix(), 6, &support);
        let op = kron_all(&p.letters().iter().map(|&(_, l)| letter_matrix(l)).collect::<Vec<_>>());
        let want = (reduced * op).trace().re;
        assert!((target - want).abs() < 1e-12, "{p}");
    }
}

#[test]
fn overlapping_regions_share_one_constraint() {
    let layout = ring(4);
    let rho = density(layout.clone(), random_density(&mut ChaCha8Rng::seed_from_u64(3), 16));
    let cs = constraints_from_state(&rho, &intervals(&layout, 2).unwrap()).unwrap();
    let z1 = PauliString::single(1, Pauli::Z);
    assert_eq!(cs.basis().iter().filter(|p| **p == z1).count(), 1);
    let idx = cs.basis().iter().position(|p| *p == z1).unwrap();
    // Z_1 lives in the windows starting at 0 and at 1.
    assert_eq!(cs.provenance()[idx].len(), 2);
    assert!(cs.targets().iter().all(|c| c.abs() <= 1.0 + 1e-12));
}

#[test]
fn pauli_inversion_reproduces_partial_traces() {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let layout = ring(4);
    for _ in 0..5 {
        let m = random_density(&mut r, 16);
        let rho = density(layout.clone(), m.clone());
        let cs = constraints_from_state(&rho, &intervals(&layout, 3).unwrap()).unwrap();
        for (region, state) in cs.region_states().unwrap() {
            let mut sorted = region.clone();
            sorted.sort();
            // The region layout keeps the parent's site order.
            assert!(max_entry_diff(state.matrix(), &partial_trace_oracle(&m, 4, &sorted)) < 1e-10);
        }
    }
}
