//! Pearson and Spearman correlation.

use crate::error::{Error, Result};

fn check_lengths(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "correlation needs at least 2 points, got {}",
            xs.len()
        )));
    }
    Ok(())
}

/// Sample Pearson product-moment correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_lengths(xs, ys)?;
    let n = xs.len() as f64;
    let sum_x: f64 = xs.iter().sum();
    let sum_y: f64 = ys.iter().sum();
    let sum_xy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sum_x2: f64 = xs.iter().map(|x| x * x).sum();
    let sum_y2: f64 = ys.iter().map(|y| y * y).sum();
    let var_x = n * sum_x2 - sum_x * sum_x;
    let var_y = n * sum_y2 - sum_y * sum_y;
    if var_x == 0.0 || var_y == 0.0 {
        return Err(Error::UndefinedCorrelation("constant series"));
    }
    Ok((n * sum_xy - sum_x * sum_y) / (var_x * var_y).sqrt())
}

/// Ranks with ties receiving the average of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("no NaN ranks"));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && values[order[end + 1]] == values[order[start]] {
            end += 1;
        }
        // ranks are 1-based; tied block shares the mean rank
        let shared = (start + end + 2) as f64 / 2.0;
        for &index in &order[start..=end] {
            ranks[index] = shared;
        }
        start = end + 1;
    }
    ranks
}

/// Spearman rank-order correlation: Pearson over average ranks.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    check_lengths(xs, ys)?;
    pearson(&average_ranks(xs), &average_ranks(ys))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: the textbook two-pass definition over centered data.
    fn pearson_oracle(xs: &[f64], ys: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let mean_x = xs.iter().sum::<f64>() / n;
        let mean_y = ys.iter().sum::<f64>() / n;
        let cov: f64 = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| (x - mean_x) * (y - mean_y))
            .sum();
        let sx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum::<f64>().sqrt();
        let sy: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum::<f64>().sqrt();
        cov / (sx * sy)
    }

    #[test]
    fn perfect_positive_linearity_is_exactly_one() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        assert_eq!(pearson(&xs, &ys).unwrap(), 1.0);
    }

    #[test]
    fn perfect_negation_is_exactly_minus_one() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert_eq!(pearson(&xs, &ys).unwrap(), -1.0);
    }

    #[test]
    fn pearson_matches_direct_definition() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [1.0, 3.0, 2.0, 4.0];
        let r = pearson(&xs, &ys).unwrap();
        assert!((r - 0.8).abs() < 1e-15);
        assert!((r - pearson_oracle(&xs, &ys)).abs() < 1e-12);
    }

    #[test]
    fn errors_on_bad_input() {
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            pearson(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::UndefinedCorrelation(_))
        ));
        assert!(pearson(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn spearman_is_invariant_under_monotone_transforms() {
        let xs: [f64; 5] = [1.0, 2.0, 5.0, 9.0, 12.0];
        let cubed: Vec<f64> = xs.iter().map(|x| x.powi(3)).collect();
        let exped: Vec<f64> = xs.iter().map(|x| (x / 4.0).exp()).collect();
        assert_eq!(spearman(&xs, &cubed).unwrap(), 1.0);
        assert_eq!(spearman(&xs, &exped).unwrap(), 1.0);
    }

    #[test]
    fn spearman_reversal_is_exactly_minus_one() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let ys = [9.0, 7.0, 5.0, 3.0, 1.0];
        assert_eq!(spearman(&xs, &ys).unwrap(), -1.0);
    }

    #[test]
    fn tied_values_share_average_ranks() {
        assert_eq!(average_ranks(&[1.0, 2.0, 2.0, 3.0]), [1.0, 2.5, 2.5, 4.0]);
        assert_eq!(average_ranks(&[5.0, 5.0, 5.0]), [2.0, 2.0, 2.0]);
    }

    #[test]
    fn spearman_with_ties_matches_rank_oracle() {
        let xs = [1.0, 2.0, 2.0, 3.0];
        let ys = [1.0, 2.0, 3.0, 4.0];
        let rho = spearman(&xs, &ys).unwrap();
        // oracle: average ranks by brute force, then the direct definition
        let oracle = pearson_oracle(&[1.0, 2.5, 2.5, 4.0], &[1.0, 2.0, 3.0, 4.0]);
        assert!((rho - oracle).abs() < 1e-12);
        assert!((rho - 0.9f64.sqrt()).abs() < 1e-12);
    }
}
