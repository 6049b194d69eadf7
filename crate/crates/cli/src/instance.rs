//! Seeded instance generation.
//!
//! The generator is a fixed, versioned algorithm: ChaCha12 keyed by the
//! config seed, with one dedicated stream per artifact (subspaces, spectra,
//! bases, probes). Changing any of this is a breaking change to instance
//! reproducibility, so the identifier below is recorded in every manifest.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

use trotter_lab::lab::VectorClass;
use trotter_lab::report::fmt_float;
use trotter_lab::{
    intersect, orth_complement, subspace_sum, CMat, CVec, DegenerateOperator, Error, Result,
    Subspace, C64,
};

/// Name under which the generator algorithm is pinned in manifests.
pub const RNG_ALGORITHM: &str = "chacha12-streams/v1";

const STREAM_SUBSPACE_A: u64 = 0;
const STREAM_SUBSPACE_B: u64 = 1;
const STREAM_SPECTRUM_A: u64 = 2;
const STREAM_SPECTRUM_B: u64 = 3;
const STREAM_PROBES: u64 = 6;

#[derive(Debug, Clone)]
pub struct Probe {
    pub class: VectorClass,
    pub vector: CVec,
}

#[derive(Debug, Clone)]
pub struct Instance {
    /// Content hash of the operator pair.
    pub id: String,
    pub a: DegenerateOperator,
    pub b: DegenerateOperator,
    pub probes: Vec<Probe>,
}

fn stream(seed: u64, which: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(which);
    rng
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-like subspace from the thin QR of a complex Gaussian matrix.
pub fn haar_subspace(rng: &mut impl Rng, d: usize, k: usize) -> Result<Subspace> {
    if k == 0 {
        return Ok(Subspace::zero(d));
    }
    let q = gaussian_matrix(rng, d, k).qr().q();
    Subspace::new(q)
}

/// Hermitian PSD matrix with eigenvalues uniform in `[0, bound]` in a
/// Haar-like eigenbasis.
pub fn random_psd(
    spectrum_rng: &mut impl Rng,
    basis_rng: &mut impl Rng,
    k: usize,
    bound: f64,
) -> CMat {
    if k == 0 {
        return CMat::zeros(0, 0);
    }
    let u = gaussian_matrix(basis_rng, k, k).qr().q();
    let mut m = CMat::zeros(k, k);
    for j in 0..k {
        let l: f64 = spectrum_rng.gen_range(0.0..bound);
        let col = u.column(j).into_owned();
        m += &col * col.adjoint() * C64::new(l, 0.0);
    }
    (&m + m.adjoint()).scale(0.5)
}

fn unit_combination(rng: &mut impl Rng, s: &Subspace) -> CVec {
    let coeff = CVec::from_fn(s.dim(), |_, _| gaussian(rng));
    let mut v = s.basis() * coeff;
    let n = v.norm();
    if n > 0.0 {
        v /= C64::new(n, 0.0);
    }
    v
}

/// Content hash (SHA-256, truncated) of the operator pair, over the exact
/// floating-point entries.
pub fn instance_hash(a: &DegenerateOperator, b: &DegenerateOperator) -> String {
    let mut hasher = Sha256::new();
    hasher.update(b"pair/v1");
    for op in [a, b] {
        hasher.update(op.ambient_dim().to_le_bytes());
        hasher.update(op.subspace().dim().to_le_bytes());
        for z in op.subspace().basis().iter() {
            hasher.update(fmt_float(z.re).as_bytes());
            hasher.update(fmt_float(z.im).as_bytes());
        }
        for z in op.matrix_on_m().iter() {
            hasher.update(fmt_float(z.re).as_bytes());
            hasher.update(fmt_float(z.im).as_bytes());
        }
    }
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Draws a random instance: Haar-like subspaces of the requested
/// dimensions, PSD parts with spectrum in `[0, spectrum_bound]`, and at
/// least one probe per nonempty vector class
/// (`H'`, `M_A^⊥ + M_B^⊥`, and mixtures when both are proper).
pub fn gen_random_instance(
    seed: u64,
    dims: (usize, usize, usize),
    spectrum_bound: f64,
    probes_per_class: usize,
) -> Result<Instance> {
    let (d, ka, kb) = dims;
    if ka > d || kb > d {
        return Err(Error::ShapeMismatch {
            expected: format!("subspace dims <= {d}"),
            got: format!("({ka}, {kb})"),
        });
    }
    let sa = haar_subspace(&mut stream(seed, STREAM_SUBSPACE_A), d, ka)?;
    let sb = haar_subspace(&mut stream(seed, STREAM_SUBSPACE_B), d, kb)?;
    let ma = random_psd(
        &mut stream(seed, STREAM_SPECTRUM_A),
        &mut stream(seed, STREAM_SPECTRUM_A + 8),
        ka,
        spectrum_bound,
    );
    let mb = random_psd(
        &mut stream(seed, STREAM_SPECTRUM_B),
        &mut stream(seed, STREAM_SPECTRUM_B + 8),
        kb,
        spectrum_bound,
    );
    let a = DegenerateOperator::new(sa, ma)?;
    let b = DegenerateOperator::new(sb, mb)?;
    let probes = make_probes(seed, &a, &b, probes_per_class)?;
    Ok(Instance {
        id: instance_hash(&a, &b),
        a,
        b,
        probes,
    })
}

/// Builds the probe set for an existing pair (also used by the structured
/// scenario instances).
pub fn make_probes(
    seed: u64,
    a: &DegenerateOperator,
    b: &DegenerateOperator,
    per_class: usize,
) -> Result<Vec<Probe>> {
    let mut rng = stream(seed, STREAM_PROBES);
    let d = a.ambient_dim();
    let h_prime = intersect(a.subspace(), b.subspace(), trotter_lab::tol::RANK_TOL)?;
    let comp_sum = subspace_sum(
        &orth_complement(a.subspace()),
        &orth_complement(b.subspace()),
        trotter_lab::tol::RANK_TOL,
    )?;
    let mut probes = Vec::new();
    for _ in 0..per_class {
        if h_prime.dim() > 0 {
            probes.push(Probe {
                class: VectorClass::HPrime,
                vector: unit_combination(&mut rng, &h_prime),
            });
        }
        if comp_sum.dim() > 0 {
            probes.push(Probe {
                class: VectorClass::ComplementSum,
                vector: unit_combination(&mut rng, &comp_sum),
            });
        }
        // mixtures exist exactly when both classes are proper
        if h_prime.dim() > 0 && comp_sum.dim() > 0 {
            let mut v = unit_combination(&mut rng, &h_prime) + unit_combination(&mut rng, &comp_sum);
            let n = v.norm();
            v /= C64::new(n, 0.0);
            probes.push(Probe {
                class: VectorClass::Other,
                vector: v,
            });
        }
    }
    // sanity: labels must agree with the classifier's view of the world
    for p in &probes {
        let in_hp = h_prime.contains(&p.vector, trotter_lab::tol::MEMBERSHIP);
        let in_cs = comp_sum.contains(&p.vector, trotter_lab::tol::MEMBERSHIP);
        let expected = if in_hp {
            VectorClass::HPrime
        } else if in_cs {
            VectorClass::ComplementSum
        } else {
            VectorClass::Other
        };
        if expected != p.class {
            return Err(Error::NumericalFailure(format!(
                "probe classified as {expected} but labeled {}",
                p.class
            )));
        }
    }
    if probes.is_empty() {
        // d = 0 cannot happen; k' = 0 with full complements still yields
        // complement probes, and vice versa
        return Err(Error::InvalidParameter(format!(
            "no probes could be constructed for dims ({d}, {}, {})",
            a.subspace().dim(),
            b.subspace().dim()
        )));
    }
    Ok(probes)
}

/// Scalar instance `a = b = [alpha]` on `ℂ¹`.
pub fn scalar_instance(alpha: f64) -> Result<Instance> {
    let m = DMatrix::from_row_slice(1, 1, &[C64::new(alpha, 0.0)]);
    let a = DegenerateOperator::full(m.clone())?;
    let b = DegenerateOperator::full(m)?;
    let probes = vec![Probe {
        class: VectorClass::HPrime,
        vector: CVec::from_vec(vec![C64::new(1.0, 0.0)]),
    }];
    Ok(Instance {
        id: instance_hash(&a, &b),
        a,
        b,
        probes,
    })
}
