//! Dictionaries: explicit finite atom lists and implicit subspace-induced
//! families, with the weak-greedy sup/argmax oracle and `A1` certificates.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::projections::SubspaceCollection;
use crate::space::Vector;

const DISTINCT_TOL: f64 = 1e-12;
const UNIT_TOL: f64 = 1e-12;

/// A set of unit-norm atoms over which the greedy algorithms select.
///
/// Explicit dictionaries store their atoms; subspace-induced dictionaries
/// represent the (infinite) family of unit vectors in the orthogonal
/// complements of a subspace collection, exposed through an argmax oracle
/// whose witness for a subspace is the normalized residual projection.
#[derive(Debug, Clone)]
pub struct Dictionary {
    dim: usize,
    symmetric: bool,
    atoms: Atoms,
}

#[derive(Debug, Clone)]
enum Atoms {
    Explicit { elements: Vec<Vector>, unit_p: f64 },
    Induced(SubspaceCollection),
}

/// Result of the weak-greedy oracle: the achieved value, the index of the
/// atom (or subspace), the signed pairing with the witness, and the witness
/// itself.
#[derive(Debug, Clone)]
pub struct WeakSup {
    pub value: f64,
    pub index: usize,
    pub inner: f64,
    pub witness: Vector,
}

/// Certified upper bound on the `A1` gauge of a synthesized element:
/// `bound = sum |coefficients|` dominates the gauge of
/// `sum coefficients_j * atom_{indices_j}`. Exact for orthonormal atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct A1Certificate {
    pub indices: Vec<usize>,
    pub coefficients: Vec<f64>,
    pub bound: f64,
}

impl A1Certificate {
    /// True when all coefficients are nonnegative and sum to at most
    /// `1 + tol` (membership in the unsymmetrized convex hull).
    pub fn is_convex(&self, tol: f64) -> bool {
        self.coefficients.iter().all(|&c| c >= 0.0) && self.bound <= 1.0 + tol
    }

    /// Rebuilds the certified element from the dictionary atoms.
    pub fn synthesize(&self, dict: &Dictionary) -> Result<Vector> {
        let mut f = Vector::zeros(dict.dim());
        for (&i, &c) in self.indices.iter().zip(&self.coefficients) {
            f.add_scaled(c, dict.element(i)?);
        }
        Ok(f)
    }
}

impl Dictionary {
    /// Builds an explicit dictionary of `l2`-unit atoms. With `normalize`
    /// set, each vector is divided by its norm; otherwise unit norm is
    /// required. Atoms must be pairwise distinct.
    pub fn explicit(vectors: Vec<Vector>, normalize: bool) -> Result<Self> {
        Self::explicit_lp(vectors, 2.0, normalize)
    }

    /// As [`Dictionary::explicit`] but atoms are unit in `lp`; used by the
    /// dual greedy algorithm, whose dictionaries are normalized in the
    /// space's own norm.
    pub fn explicit_lp(vectors: Vec<Vector>, p: f64, normalize: bool) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::EmptyInput);
        }
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent { p });
        }
        let dim = vectors[0].dim();
        if dim == 0 {
            return Err(Error::InvalidParameter {
                what: "dictionary dimension must be positive",
            });
        }
        let mut elements = Vec::with_capacity(vectors.len());
        for (i, v) in vectors.into_iter().enumerate() {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.dim(),
                });
            }
            let norm = v.norm_lp(p)?;
            if normalize {
                if norm == 0.0 {
                    return Err(Error::ZeroVector);
                }
                elements.push(v.scaled(1.0 / norm));
            } else {
                if (norm - 1.0).abs() > UNIT_TOL {
                    return Err(Error::NotUnitNorm { index: i, norm });
                }
                elements.push(v);
            }
        }
        if let Some((first, second)) = find_duplicate(&elements) {
            return Err(Error::DuplicateAtom { first, second });
        }
        let symmetric = detect_symmetric(&elements);
        Ok(Dictionary {
            dim,
            symmetric,
            atoms: Atoms::Explicit { elements, unit_p: p },
        })
    }

    /// The standard coordinate basis of dimension `dim`.
    pub fn standard_basis(dim: usize) -> Result<Self> {
        let vectors: Result<Vec<Vector>> = (0..dim).map(|i| Vector::basis(dim, i)).collect();
        Self::explicit(vectors?, false)
    }

    /// Dictionary induced by a subspace collection: the unit vectors of all
    /// orthogonal complements, queried through the projection oracle.
    pub fn from_subspaces(collection: SubspaceCollection) -> Self {
        Dictionary {
            dim: collection.dim(),
            // g and -g are both unit vectors of the same complement.
            symmetric: true,
            atoms: Atoms::Induced(collection),
        }
    }

    /// Returns the dictionary containing `g` and `-g` for every atom `g`.
    /// Detectably symmetric inputs are returned unchanged.
    pub fn symmetrize(&self) -> Result<Self> {
        let (elements, unit_p) = match &self.atoms {
            Atoms::Explicit { elements, unit_p } => (elements, *unit_p),
            Atoms::Induced(_) => return Err(Error::NotExplicit),
        };
        if self.symmetric {
            return Ok(self.clone());
        }
        let mut out = elements.clone();
        for g in elements {
            let neg = g.scaled(-1.0);
            if find_matching(&out, &neg).is_none() {
                out.push(neg);
            }
        }
        Ok(Dictionary {
            dim: self.dim,
            symmetric: true,
            atoms: Atoms::Explicit {
                elements: out,
                unit_p,
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of atoms (explicit) or subspaces (induced).
    pub fn len(&self) -> usize {
        match &self.atoms {
            Atoms::Explicit { elements, .. } => elements.len(),
            Atoms::Induced(coll) => coll.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.atoms, Atoms::Explicit { .. })
    }

    /// Norm exponent in which explicit atoms are unit (2 for induced).
    pub fn unit_p(&self) -> f64 {
        match &self.atoms {
            Atoms::Explicit { unit_p, .. } => *unit_p,
            Atoms::Induced(_) => 2.0,
        }
    }

    pub fn element(&self, i: usize) -> Result<&Vector> {
        match &self.atoms {
            Atoms::Explicit { elements, .. } => {
                elements.get(i).ok_or(Error::IndexOutOfRange {
                    index: i,
                    len: elements.len(),
                })
            }
            Atoms::Induced(_) => Err(Error::NotExplicit),
        }
    }

    pub fn elements(&self) -> Option<&[Vector]> {
        match &self.atoms {
            Atoms::Explicit { elements, .. } => Some(elements),
            Atoms::Induced(_) => None,
        }
    }

    pub fn subspaces(&self) -> Option<&SubspaceCollection> {
        match &self.atoms {
            Atoms::Explicit { .. } => None,
            Atoms::Induced(coll) => Some(coll),
        }
    }

    /// The weak-greedy oracle `sup_g |<f, g>|` with its maximizer, ties
    /// broken towards the lowest index. For induced dictionaries the value
    /// is `max_L ||Pr_{L_perp}(f)||` and the witness is the normalized
    /// residual projection of the best subspace.
    pub fn weak_sup(&self, f: &Vector) -> Result<WeakSup> {
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: f.dim(),
            });
        }
        match &self.atoms {
            Atoms::Explicit { elements, .. } => {
                let mut best = 0usize;
                let mut best_abs = f64::NEG_INFINITY;
                let mut best_inner = 0.0;
                for (i, g) in elements.iter().enumerate() {
                    let ip = f.inner(g)?;
                    if ip.abs() > best_abs {
                        best_abs = ip.abs();
                        best_inner = ip;
                        best = i;
                    }
                }
                Ok(WeakSup {
                    value: best_abs,
                    index: best,
                    inner: best_inner,
                    witness: elements[best].clone(),
                })
            }
            Atoms::Induced(coll) => {
                let (index, _) = coll.max_dist(f)?;
                self.evaluate(f, index)
            }
        }
    }

    /// Value and witness for a fixed atom or subspace index; used by replay
    /// and fixed-index selection.
    pub fn evaluate(&self, f: &Vector, index: usize) -> Result<WeakSup> {
        match &self.atoms {
            Atoms::Explicit { elements, .. } => {
                let g = elements.get(index).ok_or(Error::IndexOutOfRange {
                    index,
                    len: elements.len(),
                })?;
                let ip = f.inner(g)?;
                Ok(WeakSup {
                    value: ip.abs(),
                    index,
                    inner: ip,
                    witness: g.clone(),
                })
            }
            Atoms::Induced(coll) => {
                let proj = coll.perp_projection(f, index)?;
                let dist = proj.norm_l2();
                let witness = if dist > 0.0 {
                    proj.scaled(1.0 / dist)
                } else {
                    coll.perp_basis(index)?[0].clone()
                };
                Ok(WeakSup {
                    value: dist,
                    index,
                    inner: dist,
                    witness,
                })
            }
        }
    }

    /// Rank of the atom span (explicit) or of the union of complement bases
    /// (induced); equals `dim` iff the dictionary is complete.
    pub fn span_rank(&self) -> usize {
        match &self.atoms {
            Atoms::Explicit { elements, .. } => linalg::span_rank(elements, 1e-10),
            Atoms::Induced(coll) => coll.union_rank(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.span_rank() == self.dim
    }

    /// Synthesizes `f = sum c_j g_{i_j}` and certifies
    /// `||f||_{A1} <= sum |c_j|`. Exact for orthonormal-basis dictionaries.
    pub fn a1_certify(
        &self,
        indices: &[usize],
        coefficients: &[f64],
    ) -> Result<(Vector, A1Certificate)> {
        if !self.is_explicit() {
            return Err(Error::NotExplicit);
        }
        if indices.len() != coefficients.len() {
            return Err(Error::DimensionMismatch {
                expected: indices.len(),
                got: coefficients.len(),
            });
        }
        if indices.is_empty() {
            return Err(Error::EmptyInput);
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut f = Vector::zeros(self.dim);
        for (&i, &c) in indices.iter().zip(coefficients) {
            f.add_scaled(c, self.element(i)?);
        }
        let bound: f64 = coefficients.iter().map(|c| c.abs()).sum();
        Ok((
            f,
            A1Certificate {
                indices: indices.to_vec(),
                coefficients: coefficients.to_vec(),
                bound,
            },
        ))
    }
}

/// Index of an element of `elements` equal to `target` within the
/// distinctness tolerance (max coordinate difference).
fn find_matching(elements: &[Vector], target: &Vector) -> Option<usize> {
    elements.iter().position(|g| close(g, target))
}

fn close(a: &Vector, b: &Vector) -> bool {
    a.iter()
        .zip(b.iter())
        .all(|(x, y)| (x - y).abs() <= DISTINCT_TOL)
}

/// Duplicate scan over a first-coordinate sort; only windows of nearly
/// equal first coordinate need full comparison.
fn find_duplicate(elements: &[Vector]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..elements.len()).collect();
    order.sort_by(|&a, &b| elements[a][0].partial_cmp(&elements[b][0]).unwrap());
    for (pos, &i) in order.iter().enumerate() {
        for &j in order[pos + 1..].iter() {
            if elements[j][0] - elements[i][0] > DISTINCT_TOL {
                break;
            }
            if close(&elements[i], &elements[j]) {
                return Some((i.min(j), i.max(j)));
            }
        }
    }
    None
}

fn detect_symmetric(elements: &[Vector]) -> bool {
    elements
        .iter()
        .all(|g| find_matching(elements, &g.scaled(-1.0)).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn vec2(a: f64, b: f64) -> Vector {
        Vector::new(vec![a, b]).unwrap()
    }

    #[test]
    fn explicit_construction() {
        let d = Dictionary::standard_basis(2).unwrap();
        assert_eq!(d.len(), 2);
        assert!(!d.is_symmetric());
        assert!(d.is_complete());

        let d = Dictionary::explicit(vec![vec2(3.0, 4.0)], true).unwrap();
        let g = d.element(0).unwrap();
        assert!((g[0] - 0.6).abs() <= 1e-15 && (g[1] - 0.8).abs() <= 1e-15);

        assert!(matches!(
            Dictionary::explicit(vec![vec2(0.0, 0.0)], true),
            Err(Error::ZeroVector)
        ));
        assert!(matches!(
            Dictionary::explicit(vec![vec2(0.5, 0.0)], false),
            Err(Error::NotUnitNorm { .. })
        ));
        assert!(matches!(
            Dictionary::explicit(vec![vec2(1.0, 0.0), vec2(1.0, 0.0)], false),
            Err(Error::DuplicateAtom { .. })
        ));
    }

    #[test]
    fn symmetrize_examples() {
        let d = Dictionary::explicit(vec![vec2(1.0, 0.0)], false).unwrap();
        let s = d.symmetrize().unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.is_symmetric());
        // Already symmetric: unchanged.
        let s2 = s.symmetrize().unwrap();
        assert_eq!(s2.len(), 2);

        let d = Dictionary::explicit(vec![vec2(0.6, 0.8), vec2(1.0, 0.0)], false).unwrap();
        assert_eq!(d.symmetrize().unwrap().len(), 4);
    }

    #[test]
    fn weak_sup_examples() {
        let d = Dictionary::standard_basis(2).unwrap();
        let s = d.weak_sup(&vec2(0.8, 0.6)).unwrap();
        assert_eq!(s.index, 0);
        assert!((s.value - 0.8).abs() <= 1e-15);

        let r = 1.0 / 2f64.sqrt();
        let d = Dictionary::explicit(vec![vec2(1.0, 0.0), vec2(r, r)], false).unwrap();
        let s = d.weak_sup(&vec2(0.0, 1.0)).unwrap();
        assert_eq!(s.index, 1);
        assert!((s.value - r).abs() <= 1e-12);

        // Zero input: value 0, lowest index wins.
        let s = d.weak_sup(&Vector::zeros(2)).unwrap();
        assert_eq!(s.index, 0);
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn weak_sup_matches_bruteforce() {
        // Independent re-computation of the oracle on a fixed small case.
        let atoms = vec![
            vec2(1.0, 0.0),
            vec2(0.0, 1.0),
            vec2(-0.6, 0.8),
            vec2(0.8, -0.6),
        ];
        let d = Dictionary::explicit(atoms.clone(), false).unwrap();
        let f = vec2(0.3, -0.7);
        let s = d.weak_sup(&f).unwrap();
        let brute = atoms
            .iter()
            .map(|g| (f[0] * g[0] + f[1] * g[1]).abs())
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(s.value, brute);
    }

    #[test]
    fn certificates() {
        let d = Dictionary::standard_basis(2).unwrap();
        let (f, cert) = d.a1_certify(&[0, 1], &[0.5, 0.5]).unwrap();
        assert_eq!(f.as_slice(), &[0.5, 0.5]);
        assert_eq!(cert.bound, 1.0);

        let (f, cert) = d.a1_certify(&[1], &[1.0]).unwrap();
        assert_eq!(f.as_slice(), &[0.0, 1.0]);
        assert_eq!(cert.bound, 1.0);

        let (f, cert) = d.a1_certify(&[0, 1], &[0.6, -0.6]).unwrap();
        assert!((cert.bound - 1.2).abs() <= 1e-15);
        assert!((f.norm_l2() - 0.6 * 2f64.sqrt()).abs() <= 1e-12);
        assert!(cert.bound >= f.norm_l2());

        assert!(matches!(
            d.a1_certify(&[5], &[1.0]),
            Err(Error::IndexOutOfRange { .. })
        ));
        // Synthesis round-trip.
        let back = cert.synthesize(&d).unwrap();
        assert_eq!(back, f);
    }
}
