use crate::error::{precondition, Result};

/// Result of a threshold search over constraint counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Level reached, or `None` when even the top level was still large.
    pub level: Option<usize>,
    pub probes: usize,
}

/// Bracketing binary search over `[low, hi]`.
///
/// `is_small(p)` probes one level. Every outcome is taken at face value:
/// the search keeps `ge` (a level probed large, or `low`) strictly below
/// `upper` (a level probed small, or the virtual `hi + 1`) and halves the
/// gap. It returns `low` if the first probe there is small, otherwise the
/// `upper` level once `upper = ge + 1`. Makes at most
/// `ceil(log2(hi - low + 2)) + 1` probes.
pub fn bracket_search<F>(low: usize, hi: usize, mut is_small: F) -> Result<SearchOutcome>
where
    F: FnMut(usize) -> Result<bool>,
{
    if low > hi {
        return Err(precondition(format!("empty search range [{low}, {hi}]")));
    }
    let mut probes = 1;
    if is_small(low)? {
        return Ok(SearchOutcome {
            level: Some(low),
            probes,
        });
    }
    let mut ge = low;
    let mut upper = hi + 1;
    while upper - ge > 1 {
        let mid = ge + (upper - ge) / 2;
        probes += 1;
        if is_small(mid)? {
            upper = mid;
        } else {
            ge = mid;
        }
    }
    Ok(SearchOutcome {
        level: (upper <= hi).then_some(upper),
        probes,
    })
}

/// Upper bound on the probes [`bracket_search`] makes over `[low, hi]`.
pub fn probe_bound(low: usize, hi: usize) -> usize {
    let span = (hi - low + 2) as u64;
    (64 - (span - 1).leading_zeros()) as usize + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(low: usize, hi: usize, outcomes: impl Fn(usize) -> bool) -> (SearchOutcome, Vec<(usize, bool)>) {
        let mut log = Vec::new();
        let out = bracket_search(low, hi, |p| {
            let r = outcomes(p);
            log.push((p, r));
            Ok(r)
        })
        .unwrap();
        (out, log)
    }

    #[test]
    fn monotone_outcomes_find_the_boundary() {
        for low in 0..6 {
            for hi in low..low + 20 {
                for boundary in low..=hi + 1 {
                    let (out, log) = run(low, hi, |p| p >= boundary);
                    let expect = (boundary <= hi).then_some(boundary);
                    assert_eq!(out.level, expect, "low {low} hi {hi} boundary {boundary}");
                    assert!(out.probes <= probe_bound(low, hi));
                    assert_eq!(out.probes, log.len());
                }
            }
        }
    }

    #[test]
    fn first_probe_small_returns_low() {
        let (out, log) = run(3, 9, |_| true);
        assert_eq!(out.level, Some(3));
        assert_eq!(log, vec![(3, true)]);
    }

    #[test]
    fn single_level_range() {
        assert_eq!(run(4, 4, |_| true).0, SearchOutcome { level: Some(4), probes: 1 });
        assert_eq!(run(4, 4, |_| false).0, SearchOutcome { level: None, probes: 1 });
    }

    /// For arbitrary (non-monotone) outcomes the returned level was probed
    /// small and its predecessor was probed large, or it is `low`.
    #[test]
    fn invariant_holds_for_noisy_outcomes() {
        for mask in 0u32..1 << 12 {
            let (out, log) = run(0, 11, |p| (mask >> p) & 1 == 1);
            assert!(out.probes <= probe_bound(0, 11));
            let rec = |p: usize| log.iter().find(|(q, _)| *q == p).map(|(_, r)| *r);
            let larges: Vec<usize> = log.iter().filter(|(_, r)| !r).map(|(p, _)| *p).collect();
            let smalls: Vec<usize> = log.iter().filter(|(_, r)| *r).map(|(p, _)| *p).collect();
            if let (Some(&max_large), Some(&min_small)) = (larges.iter().max(), smalls.iter().min()) {
                assert!(max_large < min_small, "bracket broken for mask {mask:b}");
            }
            match out.level {
                Some(0) => assert_eq!(rec(0), Some(true)),
                Some(p) => {
                    assert_eq!(rec(p), Some(true));
                    assert_eq!(rec(p - 1), Some(false));
                }
                None => assert_eq!(rec(11), Some(false)),
            }
        }
    }

    #[test]
    fn rejects_empty_range() {
        assert!(bracket_search(3, 2, |_| Ok(true)).is_err());
    }
}
