//! The four functional idempotents acting on functions `C → C`:
//!
//! ```text
//! (q₁f)(z) = z(f(z) + f(1 − z))
//! (q₂f)(z) = z(f(z) − f(1 − z))
//! (q₃f)(z) = (λ/2 − z)f(z) + (1 − λ/2 + z)f(λ − 1 − z)
//! (q₄f)(z) = (λ/2 − z)f(z) − (1 − λ/2 + z)f(λ − 1 − z)
//! ```

use super::FamilyError;
use crate::numerics::C64;

pub const MAX_WORD: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionalGen {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl FunctionalGen {
    pub const ALL: [FunctionalGen; 4] = [
        FunctionalGen::Q1,
        FunctionalGen::Q2,
        FunctionalGen::Q3,
        FunctionalGen::Q4,
    ];
}

/// Evaluates `(q_{w₀} q_{w₁} ⋯ q_{w_last} f)(z)`: the last letter acts
/// first. Cost doubles with every letter, hence the length cap.
pub fn functional_apply(
    word: &[FunctionalGen],
    f: &dyn Fn(C64) -> C64,
    z: C64,
    lambda: C64,
) -> Result<C64, FamilyError> {
    if word.len() > MAX_WORD {
        return Err(FamilyError::BadParameter(format!(
            "word length {} exceeds {MAX_WORD}",
            word.len()
        )));
    }
    Ok(eval(word, f, z, lambda))
}

fn eval(word: &[FunctionalGen], f: &dyn Fn(C64) -> C64, z: C64, lambda: C64) -> C64 {
    let Some((&g, rest)) = word.split_first() else {
        return f(z);
    };
    let inner = |w: C64| eval(rest, f, w, lambda);
    let one = C64::new(1.0, 0.0);
    match g {
        FunctionalGen::Q1 => z * (inner(z) + inner(one - z)),
        FunctionalGen::Q2 => z * (inner(z) - inner(one - z)),
        FunctionalGen::Q3 | FunctionalGen::Q4 => {
            let a = lambda / 2.0 - z;
            let b = one - lambda / 2.0 + z;
            let reflected = inner(lambda - one - z);
            if g == FunctionalGen::Q3 {
                a * inner(z) + b * reflected
            } else {
                a * inner(z) - b * reflected
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use FunctionalGen::*;

    fn poly(z: C64) -> C64 {
        C64::new(0.5, -1.0) + z * C64::new(2.0, 0.25) - z * z * z
    }

    #[test]
    fn q1_on_constant_is_twice_z() {
        let z = C64::new(0.3, -1.2);
        let v = functional_apply(&[Q1], &|_| C64::new(1.0, 0.0), z, C64::new(0.0, 0.0)).unwrap();
        assert!((v - 2.0 * z).norm() < 1e-15);
    }

    #[test]
    fn squares_and_sum() {
        let z = C64::new(-0.7, 0.4);
        let lam = C64::new(1.3, 0.2);
        let mut total = C64::new(0.0, 0.0);
        for g in FunctionalGen::ALL {
            let once = functional_apply(&[g], &poly, z, lam).unwrap();
            let twice = functional_apply(&[g, g], &poly, z, lam).unwrap();
            assert!((once - twice).norm() < 1e-12 * (1.0 + once.norm()));
            total += once;
        }
        assert!((total - lam * poly(z)).norm() < 1e-12);
    }

    #[test]
    fn word_cap() {
        let w = [Q1; 9];
        assert!(functional_apply(&w, &poly, C64::new(0.0, 0.0), C64::new(0.0, 0.0)).is_err());
    }
}
