//! Fusion-size grids for the feature-count sweep.

use std::str::FromStr;

use super::ExperimentError;

/// Which (n_stat, n_temporal) pairs a sweep visits. Counts step by 10 up
/// to the budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    /// Statistical features only: (n, 0).
    SingleStat,
    /// Spatio-temporal features only: (0, n).
    SingleTemporal,
    /// Pairs summing to the budget: (n, budget - n).
    Complement,
    /// Equal shares: (n, n).
    Equal,
    /// Union of all of the above, deduplicated in that order.
    FullGrid,
}

impl GridKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GridKind::SingleStat => "single_stat",
            GridKind::SingleTemporal => "single_temporal",
            GridKind::Complement => "complement",
            GridKind::Equal => "equal",
            GridKind::FullGrid => "full_grid",
        }
    }
}

impl FromStr for GridKind {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single_stat" => Ok(GridKind::SingleStat),
            "single_temporal" => Ok(GridKind::SingleTemporal),
            "complement" => Ok(GridKind::Complement),
            "equal" => Ok(GridKind::Equal),
            "full_grid" => Ok(GridKind::FullGrid),
            other => Err(ExperimentError::UnknownGrid { name: other.to_string() }),
        }
    }
}

pub const STEP: usize = 10;

/// Enumerates the (n_stat, n_temporal) pairs for a grid with per-domain
/// budget `limit`.
pub fn enumerate_grid(kind: GridKind, limit: usize) -> Result<Vec<(usize, usize)>, ExperimentError> {
    if limit < STEP {
        return Err(ExperimentError::GridLimit { limit });
    }
    let steps = || (1..=limit / STEP).map(|i| i * STEP);
    let configs: Vec<(usize, usize)> = match kind {
        GridKind::SingleStat => steps().map(|n| (n, 0)).collect(),
        GridKind::SingleTemporal => steps().map(|n| (0, n)).collect(),
        GridKind::Complement => steps().filter(|&n| n + STEP <= limit).map(|n| (n, limit - n)).collect(),
        GridKind::Equal => steps().map(|n| (n, n)).collect(),
        GridKind::FullGrid => {
            let mut all = enumerate_grid(GridKind::SingleStat, limit)?;
            all.extend(enumerate_grid(GridKind::SingleTemporal, limit)?);
            all.extend(enumerate_grid(GridKind::Complement, limit)?);
            all.extend(enumerate_grid(GridKind::Equal, limit)?);
            let mut seen = Vec::new();
            all.retain(|pair| {
                if seen.contains(pair) {
                    false
                } else {
                    seen.push(*pair);
                    true
                }
            });
            all
        }
    };
    Ok(configs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_budget_yields_99_configs() {
        assert_eq!(enumerate_grid(GridKind::SingleStat, 250).unwrap().len(), 25);
        assert_eq!(enumerate_grid(GridKind::SingleTemporal, 250).unwrap().len(), 25);
        assert_eq!(enumerate_grid(GridKind::Complement, 250).unwrap().len(), 24);
        assert_eq!(enumerate_grid(GridKind::Equal, 250).unwrap().len(), 25);
        assert_eq!(enumerate_grid(GridKind::FullGrid, 250).unwrap().len(), 99);
    }

    #[test]
    fn full_grid_is_deduplicated_union_in_order() {
        let grid = enumerate_grid(GridKind::FullGrid, 20).unwrap();
        assert_eq!(grid, vec![(10, 0), (20, 0), (0, 10), (0, 20), (10, 10), (20, 20)]);
    }

    #[test]
    fn complement_pairs_sum_to_the_budget() {
        for pair in enumerate_grid(GridKind::Complement, 250).unwrap() {
            assert_eq!(pair.0 + pair.1, 250);
            assert!(pair.0 >= 10 && pair.1 >= 10);
        }
    }

    #[test]
    fn no_pair_is_empty_on_both_sides() {
        for kind in [
            GridKind::SingleStat,
            GridKind::SingleTemporal,
            GridKind::Complement,
            GridKind::Equal,
            GridKind::FullGrid,
        ] {
            for pair in enumerate_grid(kind, 100).unwrap() {
                assert!(pair.0 > 0 || pair.1 > 0, "{kind:?} produced (0, 0)");
            }
        }
    }

    #[test]
    fn tiny_budget_is_rejected() {
        assert!(matches!(enumerate_grid(GridKind::FullGrid, 9), Err(ExperimentError::GridLimit { limit: 9 })));
    }

    #[test]
    fn kind_round_trips_through_strings() {
        for kind in [
            GridKind::SingleStat,
            GridKind::SingleTemporal,
            GridKind::Complement,
            GridKind::Equal,
            GridKind::FullGrid,
        ] {
            assert_eq!(kind.as_str().parse::<GridKind>().unwrap(), kind);
        }
        assert!(matches!(
            "diagonal".parse::<GridKind>(),
            Err(ExperimentError::UnknownGrid { .. })
        ));
    }
}
