//! Seeded random instances on ℝⁿ.

use std::collections::BTreeMap;
use std::fmt;

use jordan_wlcp_core::pairs::{is_p_matrix, is_p_pair, is_r0_pair};
use jordan_wlcp_core::sampling::{normal_matrix, normal_vec, random_p_matrix};
use jordan_wlcp_core::{Algebra, LinearOperator, PairProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};
use crate::instance::InstanceFile;

/// Draws allowed before `r0` generation gives up.
pub const REJECTION_BUDGET: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InstanceKind {
    /// `(−M, I)` with a random P-matrix `M`.
    Ppair,
    /// Gaussian pair that passed the R₀ test.
    R0,
    /// Gaussian pair, no guarantees.
    Random,
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ppair => "ppair",
            Self::R0 => "r0",
            Self::Random => "random",
        })
    }
}

/// Same `(kind, n, seed)`, same instance.
pub fn generate_instance(kind: InstanceKind, n: usize, seed: u64) -> Result<InstanceFile> {
    if n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    let alg = Algebra::rn(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = match kind {
        InstanceKind::Ppair => {
            let m = random_p_matrix(n, &mut rng);
            if !is_p_matrix(&m)? {
                return Err(CliError::Generation("generated matrix failed the P-matrix test".into()));
            }
            let a = LinearOperator::new(&alg, m)?.negated();
            let b = LinearOperator::identity(&alg);
            if !is_p_pair(&a, &b)? {
                return Err(CliError::Generation("generated pair failed the P-pair test".into()));
            }
            (a, b)
        }
        InstanceKind::R0 => {
            let mut found = None;
            for _ in 0..REJECTION_BUDGET {
                let a = LinearOperator::new(&alg, normal_matrix(n, n, &mut rng))?;
                let b = LinearOperator::new(&alg, normal_matrix(n, n, &mut rng))?;
                if is_r0_pair(&a, &b)?.is_r0 {
                    found = Some((a, b));
                    break;
                }
            }
            found.ok_or_else(|| {
                CliError::Generation(format!("no R0 pair within {REJECTION_BUDGET} draws (n = {n}, seed = {seed})"))
            })?
        }
        InstanceKind::Random => (
            LinearOperator::new(&alg, normal_matrix(n, n, &mut rng))?,
            LinearOperator::new(&alg, normal_matrix(n, n, &mut rng))?,
        ),
    };
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let q = normal_vec(n, &mut rng);
    let problem = PairProblem::new(a, b, alg.element(w)?, alg.element(q)?)?;
    let metadata = BTreeMap::from([
        ("generator".to_string(), kind.to_string()),
        ("n".to_string(), n.to_string()),
        ("seed".to_string(), seed.to_string()),
    ]);
    Ok(InstanceFile::from_problem(&problem, metadata))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        for kind in [InstanceKind::Ppair, InstanceKind::R0, InstanceKind::Random] {
            let a = generate_instance(kind, 4, 11).unwrap().to_json();
            let b = generate_instance(kind, 4, 11).unwrap().to_json();
            assert_eq!(a, b);
            assert_ne!(a, generate_instance(kind, 4, 12).unwrap().to_json());
        }
    }

    #[test]
    fn generators_meet_their_postconditions() {
        for seed in 0..20 {
            let n = 1 + (seed as usize) % 5;
            let p = generate_instance(InstanceKind::Ppair, n, seed).unwrap().to_problem().unwrap();
            assert!(is_p_pair(p.a(), p.b()).unwrap());
            assert!(p.w().coords().iter().all(|&v| v >= 0.0));
            let p = generate_instance(InstanceKind::R0, n, seed).unwrap().to_problem().unwrap();
            assert!(is_r0_pair(p.a(), p.b()).unwrap().is_r0);
        }
    }

    #[test]
    fn scalar_ppair_is_a_negated_positive_scalar() {
        for seed in 0..10 {
            let p = generate_instance(InstanceKind::Ppair, 1, seed).unwrap().to_problem().unwrap();
            assert!(p.a().matrix()[(0, 0)] < 0.0);
            assert_eq!(p.b().matrix()[(0, 0)], 1.0);
        }
    }
}
