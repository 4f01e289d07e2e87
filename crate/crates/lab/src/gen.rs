//! Seeded generation of dictionaries, subspace collections and inputs.
//! All randomness flows through ChaCha8 streams keyed by explicit seeds, so
//! artifacts are bit-reproducible across runs and platforms.

use anyhow::{bail, Result};
use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use greedylab_core::dict::{A1Certificate, Dictionary};
use greedylab_core::projections::{ConvexCombination, SubspaceCollection};
use greedylab_core::space::Vector;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard-normal coordinates normalized in `lp`.
pub fn random_unit_vector(rng: &mut ChaCha8Rng, dim: usize, p: f64) -> Result<Vector> {
    loop {
        let coords: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let v = Vector::new(coords)?;
        let norm = v.norm_lp(p)?;
        if norm > 1e-8 {
            return Ok(v.scaled(1.0 / norm));
        }
    }
}

/// `count` seeded unit atoms (distinct with probability one; regenerated in
/// the measure-zero event of a clash).
pub fn random_unit_dictionary(
    dim: usize,
    count: usize,
    p: f64,
    seed: u64,
    symmetrize: bool,
) -> Result<Dictionary> {
    let mut rng = rng(seed);
    loop {
        let atoms: Result<Vec<Vector>> = (0..count)
            .map(|_| random_unit_vector(&mut rng, dim, p))
            .collect();
        match Dictionary::explicit_lp(atoms?, p, false) {
            Ok(dict) => {
                return Ok(if symmetrize { dict.symmetrize()? } else { dict });
            }
            Err(greedylab_core::Error::DuplicateAtom { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
}

fn convex_weights(rng: &mut ChaCha8Rng, terms: usize, signed: bool) -> Vec<f64> {
    let raw: Vec<f64> = (0..terms)
        .map(|_| {
            let x: f64 = rng.sample(StandardNormal);
            x.abs().max(1e-12)
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter()
        .map(|w| {
            let w = w / total;
            if signed && rng.random::<bool>() {
                -w
            } else {
                w
            }
        })
        .collect()
}

/// Signed convex combination of `terms` distinct atoms with `sum |c| = 1`;
/// the returned certificate bound is that sum as computed.
pub fn random_signed_convex(
    dict: &Dictionary,
    terms: usize,
    seed: u64,
) -> Result<(Vector, A1Certificate)> {
    random_convex(dict, terms, seed, true)
}

/// Nonnegative convex combination (inputs inside the unsymmetrized hull).
pub fn random_nonneg_convex(
    dict: &Dictionary,
    terms: usize,
    seed: u64,
) -> Result<(Vector, A1Certificate)> {
    random_convex(dict, terms, seed, false)
}

fn random_convex(
    dict: &Dictionary,
    terms: usize,
    seed: u64,
    signed: bool,
) -> Result<(Vector, A1Certificate)> {
    if terms == 0 || terms > dict.len() {
        bail!(
            "convex input takes between 1 and {} terms, got {terms}",
            dict.len()
        );
    }
    let mut rng = rng(seed);
    let indices: Vec<usize> = sample(&mut rng, dict.len(), terms).into_vec();
    let weights = convex_weights(&mut rng, terms, signed);
    Ok(dict.a1_certify(&indices, &weights)?)
}

/// Seeded collection of `count` subspaces of codimension `codim`, stored
/// through orthonormalized complement bases.
pub fn random_subspace_collection(
    dim: usize,
    count: usize,
    codim: usize,
    seed: u64,
) -> Result<SubspaceCollection> {
    if codim == 0 || codim > dim {
        bail!("subspace codimension must lie in 1..={dim}, got {codim}");
    }
    let mut rng = rng(seed);
    let generators: Result<Vec<Vec<Vector>>> = (0..count)
        .map(|_| {
            (0..codim)
                .map(|_| random_unit_vector(&mut rng, dim, 2.0))
                .collect()
        })
        .collect();
    Ok(SubspaceCollection::from_generators(dim, generators?)?)
}

/// Per-subspace unit witnesses (random directions inside each complement)
/// combined with `sum |c| = 1`: an element of the induced dictionary's unit
/// `A1` ball, its certificate bound, and the witness list.
pub fn random_subspace_convex(
    coll: &SubspaceCollection,
    terms: usize,
    seed: u64,
    signed: bool,
) -> Result<(Vector, f64, ConvexCombination)> {
    if terms == 0 || terms > coll.len() {
        bail!(
            "subspace convex input takes between 1 and {} terms, got {terms}",
            coll.len()
        );
    }
    let mut rng = rng(seed);
    let chosen: Vec<usize> = sample(&mut rng, coll.len(), terms).into_vec();
    let mut witnesses = Vec::with_capacity(chosen.len());
    for &i in &chosen {
        let basis = coll.perp_basis(i)?;
        let mut w = Vector::zeros(coll.dim());
        loop {
            for u in basis {
                let c: f64 = rng.sample(StandardNormal);
                w.add_scaled(c, u);
            }
            let norm = w.norm_l2();
            if norm > 1e-8 {
                w = w.scaled(1.0 / norm);
                break;
            }
        }
        witnesses.push(w);
    }
    let weights = convex_weights(&mut rng, witnesses.len(), signed);
    let mut x0 = Vector::zeros(coll.dim());
    for (w, &c) in witnesses.iter().zip(&weights) {
        x0.add_scaled(c, w);
    }
    let bound: f64 = weights.iter().map(|c| c.abs()).sum();
    let combination = ConvexCombination {
        points: witnesses,
        weights,
    };
    Ok((x0, bound, combination))
}

/// Seeded coefficient sequence with `||c||_1 = 1`.
pub fn random_l1_coefficients(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng(seed);
    let raw: Vec<f64> = (0..count).map(|_| rng.sample(StandardNormal)).collect();
    let total: f64 = raw.iter().map(|x| x.abs()).sum();
    raw.into_iter().map(|x| x / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_reproducible() {
        let d1 = random_unit_dictionary(6, 18, 2.0, 7, false).unwrap();
        let d2 = random_unit_dictionary(6, 18, 2.0, 7, false).unwrap();
        for i in 0..d1.len() {
            assert_eq!(d1.element(i).unwrap(), d2.element(i).unwrap());
        }
        let (f1, c1) = random_signed_convex(&d1, 10, 3).unwrap();
        let (f2, c2) = random_signed_convex(&d2, 10, 3).unwrap();
        assert_eq!(f1, f2);
        assert_eq!(c1.bound, c2.bound);
        assert!((c1.bound - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn nonneg_convex_is_convex() {
        let d = random_unit_dictionary(5, 15, 2.0, 1, false).unwrap();
        let (_, cert) = random_nonneg_convex(&d, 8, 2).unwrap();
        assert!(cert.is_convex(1e-12));
    }

    #[test]
    fn subspace_collection_spans() {
        let coll = random_subspace_collection(10, 20, 1, 5).unwrap();
        assert!(coll.has_trivial_intersection());
        let (x0, bound, combo) = random_subspace_convex(&coll, coll.len(), 9, true).unwrap();
        assert!((bound - 1.0).abs() <= 1e-12);
        assert!(x0.norm_l2() <= bound + 1e-12);
        assert_eq!(combo.points.len(), coll.len());
    }

    #[test]
    fn l1_inputs_normalized() {
        let c = random_l1_coefficients(1 << 10, 4);
        let l1: f64 = c.iter().map(|x| x.abs()).sum();
        assert!((l1 - 1.0).abs() <= 1e-12);
    }
}
