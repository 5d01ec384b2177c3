//! Random linear changes of the fiber variables, standing in for generic coordinates. Every
//! use is followed by an explicit check, and a failing draw is retried with a new seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::error::{AlgebraError, Result};
use crate::linalg::{rank, SparseRow};
use crate::module::Module;
use crate::poly::Poly;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordinateChoice {
    Identity,
    Random { seed: u64 },
}

#[derive(Clone, Debug)]
pub struct GenericCoordinates {
    pub module: Module,
    /// `x_i ↦ Σ_j matrix[i][j] x_j`.
    pub matrix: Vec<Vec<Scalar>>,
    /// Seed of the accepted draw, `None` for the identity.
    pub seed: Option<u64>,
    pub attempts: usize,
}

pub fn identity_matrix(field: Field, n: usize) -> Vec<Vec<Scalar>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect()
}

fn is_invertible(a: &[Vec<Scalar>]) -> bool {
    let rows = a.iter().map(|r| r.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c.clone())).collect::<SparseRow>());
    rank(rows) == a.len()
}

/// Entries are drawn from `[-8, 8]` over `Q` and uniformly over `F_p`; singular draws are
/// redrawn from the same stream.
pub fn random_invertible(field: Field, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Scalar>> {
    loop {
        let a: Vec<Vec<Scalar>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| match field.characteristic() {
                        0 => field.from_i64(rng.gen_range(-8..=8)),
                        p => field.from_i64(rng.gen_range(0..p as i64)),
                    })
                    .collect()
            })
            .collect();
        if is_invertible(&a) {
            return a;
        }
    }
}

/// `M` with every relation rewritten under `x_i ↦ Σ_j a_ij x_j`; base variables are fixed.
pub fn linear_change(m: &Module, a: &[Vec<Scalar>]) -> Result<Module> {
    let ring = m.ctx().ring();
    let n = ring.nfiber();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(AlgebraError::InvalidInput(format!("coordinate change must be {n}x{n}")));
    }
    if !is_invertible(a) {
        return Err(AlgebraError::InvalidInput("coordinate change is singular".into()));
    }
    let nb = ring.nbase();
    let mut images: Vec<Poly> = (0..nb).map(|i| Poly::var(ring, i)).collect();
    for row in a {
        let terms = row
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (crate::monomial::Monomial::var(ring.nvars(), nb + j), c.clone()))
            .collect();
        images.push(Poly::from_terms(ring, terms));
    }
    let f = m.ambient();
    let rels = m
        .relations()
        .iter()
        .map(|v| f.from_polys(&f.to_polys(v).iter().map(|p| p.substitute(ring, &images)).collect::<Vec<_>>()))
        .collect();
    Module::new(m.ctx(), m.twists().to_vec(), rels)
}

/// Applies a coordinate change and runs `check` on the result. Random draws are retried up to
/// `retries` times with seeds `seed, seed+1, ...`.
pub fn generic_coordinates(
    m: &Module,
    choice: CoordinateChoice,
    retries: usize,
    check_name: &str,
    mut check: impl FnMut(&Module) -> Result<bool>,
    budget: &Budget,
) -> Result<GenericCoordinates> {
    let field = m.ctx().ring().field();
    let n = m.ctx().nfiber();
    match choice {
        CoordinateChoice::Identity => {
            let module = m.clone();
            if !check(&module)? {
                return Err(AlgebraError::OutOfScope(format!("genericity check {check_name:?} fails in the given coordinates")));
            }
            Ok(GenericCoordinates { module, matrix: identity_matrix(field, n), seed: None, attempts: 1 })
        }
        CoordinateChoice::Random { seed } => {
            let p = field.characteristic() as usize;
            if p != 0 && p < retries.max(1) * n * n {
                return Err(AlgebraError::InvalidInput(format!(
                    "F_{p} is too small for {retries} random {n}x{n} coordinate changes"
                )));
            }
            for attempt in 0..retries.max(1) {
                budget.charge(1)?;
                let s = seed.wrapping_add(attempt as u64);
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let a = random_invertible(field, n, &mut rng);
                let module = linear_change(m, &a)?;
                if check(&module)? {
                    return Ok(GenericCoordinates { module, matrix: a, seed: Some(s), attempts: attempt + 1 });
                }
            }
            Err(AlgebraError::OutOfScope(format!(
                "genericity check {check_name:?} failed for {} random coordinate changes",
                retries.max(1)
            )))
        }
    }
}
