//! Positive linear maps between matrix algebras.
//!
//! Every map is checked when it is built: normalization, positivity on
//! random positive semidefinite probes, and linearity on random pairs. A map
//! that fails these probes is rejected instead of silently corrupting every
//! inequality it is used in.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    congruence, psd_within, random_unitary, sandwich, sqrt_and_inv_sqrt, text_matrix, CMatrix,
    HermitianMatrix, C64, DEFAULT_RTOL,
};

const STRUCTURE_TOL: f64 = 1e-10;

/// Number of positivity probes run by [`make_map`].
pub const CONSTRUCTION_PROBES: usize = 50;

/// Matrix stored in the portable text encoding when serialized.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct DenseMatrix(#[serde(with = "text_matrix")] pub CMatrix);

/// Serializable description of a concrete positive map.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSpec {
    Identity { dim: usize },
    /// `X -> V* X V` for an isometry `V` (`V* V = I`).
    Compression { isometry: DenseMatrix },
    /// `X -> sum_i w_i U_i* X U_i`.
    UnitaryMixture {
        weights: Vec<f64>,
        unitaries: Vec<DenseMatrix>,
    },
    /// Keeps the diagonal blocks of a partition of the indices.
    Pinching { dim: usize, blocks: Vec<Vec<usize>> },
    /// `X -> tr(X rho)` as a 1x1 matrix.
    TraceState { density: DenseMatrix },
    /// `X -> c * inner(X)`; not normalized unless `c = 1`.
    Scale { factor: f64, inner: Box<MapSpec> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Identity,
    Compression,
    UnitaryMixture,
    Pinching,
    TraceState,
    InducedPsi,
    Scale,
}

#[derive(Debug, Clone)]
enum Op {
    Identity,
    Compression(CMatrix),
    Mixture {
        weights: Vec<f64>,
        unitaries: Vec<CMatrix>,
    },
    Pinching(Vec<Vec<usize>>),
    TraceState(CMatrix),
    Scale {
        factor: f64,
        inner: Box<PositiveLinearMap>,
    },
    Induced {
        inner: Box<PositiveLinearMap>,
        a_sqrt: HermitianMatrix,
        phi_a_inv_sqrt: HermitianMatrix,
    },
}

#[derive(Debug, Clone)]
pub struct PositiveLinearMap {
    op: Op,
    in_dim: usize,
    out_dim: usize,
    normalized: bool,
}

impl PositiveLinearMap {
    pub fn kind(&self) -> MapKind {
        match self.op {
            Op::Identity => MapKind::Identity,
            Op::Compression(_) => MapKind::Compression,
            Op::Mixture { .. } => MapKind::UnitaryMixture,
            Op::Pinching(_) => MapKind::Pinching,
            Op::TraceState(_) => MapKind::TraceState,
            Op::Scale { .. } => MapKind::Scale,
            Op::Induced { .. } => MapKind::InducedPsi,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            op: Op::Identity,
            in_dim: dim,
            out_dim: dim,
            normalized: true,
        }
    }

    /// Specification this map was built from; `None` for induced maps.
    pub fn spec(&self) -> Option<MapSpec> {
        Some(match &self.op {
            Op::Identity => MapSpec::Identity { dim: self.in_dim },
            Op::Compression(v) => MapSpec::Compression {
                isometry: DenseMatrix(v.clone()),
            },
            Op::Mixture { weights, unitaries } => MapSpec::UnitaryMixture {
                weights: weights.clone(),
                unitaries: unitaries.iter().cloned().map(DenseMatrix).collect(),
            },
            Op::Pinching(blocks) => MapSpec::Pinching {
                dim: self.in_dim,
                blocks: blocks.clone(),
            },
            Op::TraceState(rho) => MapSpec::TraceState {
                density: DenseMatrix(rho.clone()),
            },
            Op::Scale { factor, inner } => MapSpec::Scale {
                factor: *factor,
                inner: Box::new(inner.spec()?),
            },
            Op::Induced { .. } => return None,
        })
    }

    /// Positivity and linearity probes; returns the first violated condition.
    pub fn self_test(&self, probes: usize, seed: u64) -> Result<()> {
        let n = self.in_dim;
        if self.normalized {
            let out = apply_map(self, &HermitianMatrix::identity(n))?;
            let err = out.max_abs_diff(&HermitianMatrix::identity(self.out_dim));
            if err > STRUCTURE_TOL {
                return Err(Error::InvalidSpec(format!(
                    "map flagged normalized but |phi(I) - I| = {err:e}"
                )));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..probes {
            let p = random_psd(n, &mut rng);
            let out = apply_map(self, &p)?;
            let tol = DEFAULT_RTOL * out.frobenius_norm().max(1.0);
            if !psd_within(&out, tol) {
                return Err(Error::InvalidSpec(format!(
                    "positivity probe failed: lambda_min(phi(P)) = {:e}",
                    out.min_eigenvalue()
                )));
            }
        }
        for _ in 0..2 {
            let x = random_hermitian(n, &mut rng);
            let y = random_hermitian(n, &mut rng);
            let c: f64 = rng.random_range(-2.0..2.0);
            let lhs = apply_map(self, &(&x + &y.scale(c)))?;
            let rhs = &apply_map(self, &x)? + &apply_map(self, &y)?.scale(c);
            let scale = lhs.frobenius_norm().max(rhs.frobenius_norm()).max(1.0);
            if lhs.distance(&rhs) > STRUCTURE_TOL * scale {
                return Err(Error::InvalidSpec("linearity probe failed".into()));
            }
        }
        Ok(())
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MapKind::Identity => "identity",
            MapKind::Compression => "compression",
            MapKind::UnitaryMixture => "unitary_mixture",
            MapKind::Pinching => "pinching",
            MapKind::TraceState => "trace_state",
            MapKind::InducedPsi => "induced_psi",
            MapKind::Scale => "scale",
        };
        f.write_str(s)
    }
}

fn random_psd<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    // Rank varies from 1 to n so that boundary (singular) probes occur.
    let rank = rng.random_range(1..=n);
    let w = CMatrix::from_fn(n, rank, |_, _| gaussian(rng));
    HermitianMatrix::symmetrized(&w * w.adjoint())
}

fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    HermitianMatrix::symmetrized(CMatrix::from_fn(n, n, |_, _| gaussian(rng)))
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn is_identity(m: &CMatrix) -> bool {
    let n = m.nrows();
    m.ncols() == n && (m - CMatrix::identity(n, n)).iter().all(|z| z.norm() <= STRUCTURE_TOL)
}

fn build(spec: &MapSpec) -> Result<PositiveLinearMap> {
    let invalid = |msg: String| Err(Error::InvalidSpec(msg));
    match spec {
        MapSpec::Identity { dim } => {
            if *dim == 0 {
                return invalid("identity map needs dim >= 1".into());
            }
            Ok(PositiveLinearMap::identity(*dim))
        }
        MapSpec::Compression { isometry } => {
            let v = &isometry.0;
            if v.ncols() == 0 || v.ncols() > v.nrows() {
                return invalid(format!("isometry shape {}x{} invalid", v.nrows(), v.ncols()));
            }
            if !is_identity(&(v.adjoint() * v)) {
                return invalid("compression needs V* V = I".into());
            }
            Ok(PositiveLinearMap {
                op: Op::Compression(v.clone()),
                in_dim: v.nrows(),
                out_dim: v.ncols(),
                normalized: true,
            })
        }
        MapSpec::UnitaryMixture { weights, unitaries } => {
            if weights.is_empty() || weights.len() != unitaries.len() {
                return invalid("mixture needs one weight per unitary".into());
            }
            if weights.iter().any(|w| !(*w >= 0.0)) {
                return invalid("mixture weights must be non-negative".into());
            }
            let total: f64 = weights.iter().sum();
            if (total - 1.0).abs() > 1e-12 {
                return invalid(format!("mixture weights sum to {total}, not 1"));
            }
            let n = unitaries[0].0.nrows();
            for u in unitaries {
                let u = &u.0;
                if u.nrows() != n || u.ncols() != n {
                    return invalid("mixture unitaries must share one square shape".into());
                }
                if !is_identity(&(u.adjoint() * u)) {
                    return invalid("mixture operator is not unitary".into());
                }
            }
            Ok(PositiveLinearMap {
                op: Op::Mixture {
                    weights: weights.clone(),
                    unitaries: unitaries.iter().map(|u| u.0.clone()).collect(),
                },
                in_dim: n,
                out_dim: n,
                normalized: true,
            })
        }
        MapSpec::Pinching { dim, blocks } => {
            let mut seen = vec![false; *dim];
            for block in blocks {
                if block.is_empty() {
                    return invalid("pinching blocks must be non-empty".into());
                }
                for &i in block {
                    if i >= *dim || seen[i] {
                        return invalid(format!("pinching index {i} out of range or repeated"));
                    }
                    seen[i] = true;
                }
            }
            if *dim == 0 || seen.iter().any(|s| !s) {
                return invalid("pinching blocks must partition 0..dim".into());
            }
            Ok(PositiveLinearMap {
                op: Op::Pinching(blocks.clone()),
                in_dim: *dim,
                out_dim: *dim,
                normalized: true,
            })
        }
        MapSpec::TraceState { density } => {
            let rho = HermitianMatrix::new(density.0.clone())
                .map_err(|e| Error::InvalidSpec(format!("density matrix: {e}")))?;
            let tr = rho.trace();
            if (tr - 1.0).abs() > 1e-12 {
                return invalid(format!("density matrix has trace {tr}, not 1"));
            }
            let min = rho.min_eigenvalue();
            if min < -1e-12 {
                return invalid(format!("density matrix has eigenvalue {min}"));
            }
            Ok(PositiveLinearMap {
                op: Op::TraceState(rho.as_matrix().clone()),
                in_dim: rho.dim(),
                out_dim: 1,
                normalized: true,
            })
        }
        MapSpec::Scale { factor, inner } => {
            if !(factor.is_finite() && *factor > 0.0) {
                return invalid(format!("scale factor must be positive, got {factor}"));
            }
            let inner = build(inner)?;
            Ok(PositiveLinearMap {
                in_dim: inner.in_dim,
                out_dim: inner.out_dim,
                normalized: inner.normalized && *factor == 1.0,
                op: Op::Scale {
                    factor: *factor,
                    inner: Box::new(inner),
                },
            })
        }
    }
}

/// Builds and self-tests a map.
pub fn make_map(spec: &MapSpec) -> Result<PositiveLinearMap> {
    let map = build(spec)?;
    map.self_test(CONSTRUCTION_PROBES, 0x5eed_0f_9a_u64)?;
    Ok(map)
}

pub fn apply_map(phi: &PositiveLinearMap, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    if x.dim() != phi.in_dim {
        return Err(Error::DimensionMismatch {
            expected: phi.in_dim,
            found: x.dim(),
        });
    }
    match &phi.op {
        Op::Identity => Ok(x.clone()),
        Op::Compression(v) => congruence(v, x),
        Op::Mixture { weights, unitaries } => {
            let n = phi.in_dim;
            let mut acc = CMatrix::zeros(n, n);
            for (w, u) in weights.iter().zip(unitaries) {
                acc += (u.adjoint() * x.as_matrix() * u) * C64::new(*w, 0.0);
            }
            Ok(HermitianMatrix::symmetrized(acc))
        }
        Op::Pinching(blocks) => {
            let n = phi.in_dim;
            let mut block_of = vec![0; n];
            for (b, block) in blocks.iter().enumerate() {
                for &i in block {
                    block_of[i] = b;
                }
            }
            let src = x.as_matrix();
            let out = CMatrix::from_fn(n, n, |i, j| {
                if block_of[i] == block_of[j] {
                    src[(i, j)]
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            Ok(HermitianMatrix::symmetrized(out))
        }
        Op::TraceState(rho) => {
            let value = (x.as_matrix() * rho).trace().re;
            Ok(HermitianMatrix::diagonal(&[value]))
        }
        Op::Scale { factor, inner } => Ok(apply_map(inner, x)?.scale(*factor)),
        Op::Induced {
            inner,
            a_sqrt,
            phi_a_inv_sqrt,
        } => {
            let lifted = sandwich(a_sqrt, x)?;
            sandwich(phi_a_inv_sqrt, &apply_map(inner, &lifted)?)
        }
    }
}

/// `psi(X) = phi(A)^{-1/2} phi(A^{1/2} X A^{1/2}) phi(A)^{-1/2}`, a
/// normalized positive map for any positive `phi` with `phi(A)` invertible.
pub fn induced_psi(phi: &PositiveLinearMap, a: &HermitianMatrix) -> Result<PositiveLinearMap> {
    let (a_sqrt, _) = sqrt_and_inv_sqrt(a)?;
    let phi_a = apply_map(phi, a)?;
    let (_, phi_a_inv_sqrt) = sqrt_and_inv_sqrt(&phi_a)?;
    let psi = PositiveLinearMap {
        op: Op::Induced {
            inner: Box::new(phi.clone()),
            a_sqrt,
            phi_a_inv_sqrt,
        },
        in_dim: phi.in_dim,
        out_dim: phi.out_dim,
        normalized: true,
    };
    let unit = apply_map(&psi, &HermitianMatrix::identity(psi.in_dim))?;
    let err = unit.max_abs_diff(&HermitianMatrix::identity(psi.out_dim));
    if err > 1e-9 {
        return Err(Error::InvalidSpec(format!(
            "induced map is not normalized: |psi(I) - I| = {err:e}"
        )));
    }
    Ok(psi)
}

/// Families of random maps used by the verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapFamily {
    Identity,
    Compression,
    Mixture,
    Pinching,
    Trace,
    /// `c * phi` with `c` drawn from {0.5, 1, 3} and `phi` a random
    /// compression, mixture or pinching.
    Scaled,
}

impl MapFamily {
    pub const ALL: [MapFamily; 6] = [
        MapFamily::Identity,
        MapFamily::Compression,
        MapFamily::Mixture,
        MapFamily::Pinching,
        MapFamily::Trace,
        MapFamily::Scaled,
    ];

    pub fn is_normalized(&self) -> bool {
        !matches!(self, MapFamily::Scaled)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            MapFamily::Identity => "identity",
            MapFamily::Compression => "compression",
            MapFamily::Mixture => "mixture",
            MapFamily::Pinching => "pinching",
            MapFamily::Trace => "trace",
            MapFamily::Scaled => "scaled",
        }
    }
}

impl fmt::Display for MapFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MapFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MapFamily::ALL
            .into_iter()
            .find(|k| k.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidParams(format!("unknown map kind `{s}`")))
    }
}

/// Random map specification of the given family on `n`-dimensional input.
pub fn random_map_spec<R: Rng + ?Sized>(family: MapFamily, n: usize, rng: &mut R) -> MapSpec {
    match family {
        MapFamily::Identity => MapSpec::Identity { dim: n },
        MapFamily::Compression => {
            let k = rng.random_range(1..=n);
            let u = random_unitary(n, rng);
            MapSpec::Compression {
                isometry: DenseMatrix(u.columns(0, k).into_owned()),
            }
        }
        MapFamily::Mixture => {
            let count = rng.random_range(2..=3);
            let raw: Vec<f64> = (0..count).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let head: f64 = weights[..count - 1].iter().sum();
            weights[count - 1] = 1.0 - head;
            MapSpec::UnitaryMixture {
                weights,
                unitaries: (0..count).map(|_| DenseMatrix(random_unitary(n, rng))).collect(),
            }
        }
        MapFamily::Pinching => {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(rng);
            let mut blocks = Vec::new();
            let mut rest = idx.as_slice();
            while !rest.is_empty() {
                let take = rng.random_range(1..=rest.len());
                let (head, tail) = rest.split_at(take);
                let mut block = head.to_vec();
                block.sort_unstable();
                blocks.push(block);
                rest = tail;
            }
            MapSpec::Pinching { dim: n, blocks }
        }
        MapFamily::Trace => {
            let w = CMatrix::from_fn(n, n, |_, _| gaussian(rng));
            let mut rho = HermitianMatrix::symmetrized(&w * w.adjoint());
            rho = rho.scale(1.0 / rho.trace());
            // Renormalize the diagonal so the trace is 1 to the last bit.
            let mut m = rho.into_matrix();
            let drift = (0..n).map(|i| m[(i, i)].re).sum::<f64>() - 1.0;
            m[(0, 0)].re -= drift;
            MapSpec::TraceState {
                density: DenseMatrix(m),
            }
        }
        MapFamily::Scaled => {
            let factor = [0.5, 1.0, 3.0][rng.random_range(0..3)];
            let inner = [MapFamily::Compression, MapFamily::Mixture, MapFamily::Pinching]
                [rng.random_range(0..3)];
            MapSpec::Scale {
                factor,
                inner: Box::new(random_map_spec(inner, n, rng)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{loewner_leq, random_hermitian_with_spectrum, SpectrumBound};

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn identity_map() {
        let phi = make_map(&MapSpec::Identity { dim: 3 }).unwrap();
        assert!(phi.is_normalized());
        let x = random_hermitian(3, &mut rng(1));
        assert_eq!(apply_map(&phi, &x).unwrap(), x);
    }

    #[test]
    fn trace_state_uniform() {
        let rho = CMatrix::identity(3, 3) * C64::new(1.0 / 3.0, 0.0);
        let phi = make_map(&MapSpec::TraceState {
            density: DenseMatrix(rho),
        })
        .unwrap();
        assert_eq!(phi.out_dim(), 1);
        let x = HermitianMatrix::diagonal(&[1.0, 2.0, 6.0]);
        assert!((apply_map(&phi, &x).unwrap().scalar_value().unwrap() - 3.0).abs() < 1e-15);
        let one = apply_map(&phi, &HermitianMatrix::identity(3)).unwrap();
        assert!((one.scalar_value().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mixture_with_permutation() {
        let mut flip = CMatrix::zeros(2, 2);
        flip[(0, 1)] = C64::new(1.0, 0.0);
        flip[(1, 0)] = C64::new(1.0, 0.0);
        let phi = make_map(&MapSpec::UnitaryMixture {
            weights: vec![0.5, 0.5],
            unitaries: vec![DenseMatrix(CMatrix::identity(2, 2)), DenseMatrix(flip)],
        })
        .unwrap();
        let out = apply_map(&phi, &HermitianMatrix::diagonal(&[1.0, 3.0])).unwrap();
        assert!(out.max_abs_diff(&HermitianMatrix::scalar(2, 2.0)) < 1e-15);
    }

    #[test]
    fn pinching_keeps_diagonal() {
        let phi = make_map(&MapSpec::Pinching {
            dim: 3,
            blocks: vec![vec![0], vec![1], vec![2]],
        })
        .unwrap();
        let x = random_hermitian(3, &mut rng(2));
        let out = apply_map(&phi, &x).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { x.as_matrix()[(i, i)] } else { C64::new(0.0, 0.0) };
                assert_eq!(out.as_matrix()[(i, j)], expected);
            }
        }
    }

    #[test]
    fn compression_to_first_coordinate() {
        let v = CMatrix::identity(2, 2).columns(0, 1).into_owned();
        let phi = make_map(&MapSpec::Compression {
            isometry: DenseMatrix(v),
        })
        .unwrap();
        let out = apply_map(&phi, &HermitianMatrix::diagonal(&[1.0, 4.0])).unwrap();
        assert_eq!(out.scalar_value(), Some(1.0));
    }

    #[test]
    fn invalid_specs_named() {
        let bad = [
            MapSpec::Compression {
                isometry: DenseMatrix(CMatrix::identity(2, 2) * C64::new(2.0, 0.0)),
            },
            MapSpec::UnitaryMixture {
                weights: vec![0.7, 0.7],
                unitaries: vec![
                    DenseMatrix(CMatrix::identity(2, 2)),
                    DenseMatrix(CMatrix::identity(2, 2)),
                ],
            },
            MapSpec::Pinching {
                dim: 3,
                blocks: vec![vec![0, 1]],
            },
            MapSpec::TraceState {
                density: DenseMatrix(CMatrix::identity(2, 2)),
            },
            MapSpec::Scale {
                factor: -1.0,
                inner: Box::new(MapSpec::Identity { dim: 2 }),
            },
        ];
        for spec in &bad {
            assert!(matches!(make_map(spec), Err(Error::InvalidSpec(_))), "{spec:?}");
        }
    }

    #[test]
    fn dimension_mismatch() {
        let phi = PositiveLinearMap::identity(2);
        assert!(matches!(
            apply_map(&phi, &HermitianMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_maps_pass_self_tests() {
        let mut r = rng(3);
        for family in MapFamily::ALL {
            for n in [1, 2, 4, 8] {
                let spec = random_map_spec(family, n, &mut r);
                let phi = make_map(&spec).unwrap();
                assert_eq!(phi.is_normalized(), matches!(spec, MapSpec::Scale { factor, .. } if factor == 1.0) || family.is_normalized());
                assert_eq!(phi.spec().unwrap(), spec);
            }
        }
    }

    #[test]
    fn monotone_on_ordered_pairs() {
        let mut r = rng(4);
        let bounds = SpectrumBound::new(0.0, 1.0).unwrap();
        for family in MapFamily::ALL {
            let phi = make_map(&random_map_spec(family, 4, &mut r)).unwrap();
            for _ in 0..100 {
                let x = random_hermitian(4, &mut r);
                let gap = random_hermitian_with_spectrum(4, bounds, false, &mut r);
                let y = &x + &gap;
                let (px, py) = (apply_map(&phi, &x).unwrap(), apply_map(&phi, &y).unwrap());
                assert!(loewner_leq(&px, &py, DEFAULT_RTOL).unwrap().holds, "{family}");
            }
        }
    }

    #[test]
    fn normalized_maps_respect_bounds() {
        let mut r = rng(5);
        let bounds = SpectrumBound::new(1.0, 4.0).unwrap();
        for family in MapFamily::ALL.into_iter().filter(MapFamily::is_normalized) {
            for _ in 0..20 {
                let phi = make_map(&random_map_spec(family, 5, &mut r)).unwrap();
                let a = random_hermitian_with_spectrum(5, bounds, true, &mut r);
                let out = apply_map(&phi, &a).unwrap();
                let ev = out.eigenvalues();
                assert!(ev[0] >= 1.0 - 1e-12 && *ev.last().unwrap() <= 4.0 + 1e-12);
            }
        }
    }

    #[test]
    fn induced_psi_examples() {
        let mut r = rng(6);
        let bounds = SpectrumBound::new(0.5, 2.0).unwrap();
        let a = random_hermitian_with_spectrum(4, bounds, false, &mut r);

        let id = PositiveLinearMap::identity(4);
        let psi = induced_psi(&id, &a).unwrap();
        assert_eq!(psi.kind(), MapKind::InducedPsi);
        let x = random_hermitian(4, &mut r);
        assert!(apply_map(&psi, &x).unwrap().distance(&x) < 1e-12 * x.frobenius_norm());

        let trace = make_map(&random_map_spec(MapFamily::Trace, 4, &mut r)).unwrap();
        let psi = induced_psi(&trace, &a).unwrap();
        let one = apply_map(&psi, &HermitianMatrix::identity(4)).unwrap();
        assert_eq!(one.dim(), 1);
        assert!((one.scalar_value().unwrap() - 1.0).abs() < 1e-12);

        for family in MapFamily::ALL {
            let phi = make_map(&random_map_spec(family, 4, &mut r)).unwrap();
            let psi = induced_psi(&phi, &a).unwrap();
            assert!(psi.is_normalized());
            psi.self_test(50, 9).unwrap();
        }

        let singular = HermitianMatrix::diagonal(&[1.0, 0.0]);
        assert!(matches!(
            induced_psi(&PositiveLinearMap::identity(2), &singular),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }
}
