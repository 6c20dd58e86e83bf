use super::{DnfFormula, Literal};
use crate::error::{invalid, Result};
use crate::gf2::RandomSource;

/// Random DNF with `m` cubes over `n` variables. Each cube width is uniform in
/// `[width_min, width_max]`, its variables are distinct and its polarities
/// are fair coin flips. Deterministic in `seed`.
pub fn gen_random(n: usize, m: usize, width_min: usize, width_max: usize, seed: u64) -> Result<DnfFormula> {
    if m == 0 {
        return Err(invalid("need at least one cube"));
    }
    if width_min == 0 || width_min > width_max || width_max > n {
        return Err(invalid(format!(
            "widths must satisfy 1 <= {width_min} <= {width_max} <= n = {n}"
        )));
    }
    let mut src = RandomSource::new(seed, 0x67656e);
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let cubes = (0..m)
        .map(|_| {
            let w = width_min + src.rand_below((width_max - width_min + 1) as u64) as usize;
            // Partial Fisher-Yates: the first w slots become a uniform w-subset.
            for i in 0..w {
                let j = i + src.rand_below((n - i) as u64) as usize;
                pool.swap(i, j);
            }
            pool[..w].iter().map(|&v| Literal::new(v, src.bit())).collect()
        })
        .collect();
    DnfFormula::new(n, cubes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::exact_count;

    #[test]
    fn deterministic() {
        assert_eq!(gen_random(10, 4, 3, 3, 7).unwrap(), gen_random(10, 4, 3, 3, 7).unwrap());
        assert_ne!(gen_random(10, 4, 3, 3, 7).unwrap(), gen_random(10, 4, 3, 3, 8).unwrap());
    }

    #[test]
    fn widths_in_range() {
        let phi = gen_random(20, 50, 2, 5, 1).unwrap();
        assert_eq!(phi.num_cubes(), 50);
        assert!(phi.cubes().iter().all(|c| (2..=5).contains(&c.width())));
    }

    #[test]
    fn full_width_cubes_have_one_model() {
        for seed in 0..10 {
            let phi = gen_random(5, 3, 5, 5, seed).unwrap();
            assert!(phi.cubes().iter().all(|c| c.width() == 5));
            assert!(exact_count(&phi).unwrap() <= 3);
        }
    }

    #[test]
    fn count_bounds() {
        for seed in 0..5 {
            let phi = gen_random(16, 8, 2, 5, seed).unwrap();
            let c = exact_count(&phi).unwrap();
            assert!((1 << 11..=1 << 16).contains(&c), "{c}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gen_random(5, 0, 1, 2, 0).is_err());
        assert!(gen_random(5, 2, 0, 2, 0).is_err());
        assert!(gen_random(5, 2, 3, 2, 0).is_err());
        assert!(gen_random(5, 2, 1, 6, 0).is_err());
    }
}
