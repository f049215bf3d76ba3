use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Empirical cumulative distribution function of a finite sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantilePoint {
    pub p: f64,
    pub value: f64,
}

impl Ecdf {
    pub fn new(values: &[f64]) -> Result<Ecdf> {
        if values.is_empty() {
            return Err(Error::invalid("ECDF of an empty sample"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("ECDF sample has non-finite values"));
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Ecdf { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Fraction of the sample `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// Inverse ECDF (type 1): the smallest sample value `v` with
    /// `eval(v) >= p`. `p` is clamped to `[0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.sorted.len();
        let k = (p.clamp(0.0, 1.0) * n as f64).ceil() as usize;
        self.sorted[k.saturating_sub(1).min(n - 1)]
    }

    pub fn quantiles(&self, ps: &[f64]) -> Vec<QuantilePoint> {
        ps.iter()
            .map(|&p| QuantilePoint {
                p,
                value: self.quantile(p),
            })
            .collect()
    }

    /// `(x, eval(x))` at every distinct sample value.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        let n = self.sorted.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &v) in self.sorted.iter().enumerate() {
            let f = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = f,
                _ => out.push((v, f)),
            }
        }
        out
    }
}

/// Delimiters at every eighth, used for size-distribution plots.
pub const EIGHTHS: [f64; 7] = [0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875];

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_example() {
        let e = Ecdf::new(&[1.0, 2.0, 2.0, 5.0]).unwrap();
        assert_eq!(e.eval(2.0), 0.75);
        assert_eq!(e.eval(0.9), 0.0);
        assert_eq!(e.eval(5.0), 1.0);
        assert_eq!(e.steps(), vec![(1.0, 0.25), (2.0, 0.75), (5.0, 1.0)]);
    }

    #[test]
    fn type_one_quantiles() {
        let e = Ecdf::new(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(e.quantile(0.0), 1.0);
        assert_eq!(e.quantile(0.25), 1.0);
        assert_eq!(e.quantile(0.26), 2.0);
        assert_eq!(e.quantile(0.5), 2.0);
        assert_eq!(e.quantile(1.0), 4.0);
    }

    #[test]
    fn rejects_empty_and_nan() {
        assert!(Ecdf::new(&[]).is_err());
        assert!(Ecdf::new(&[1.0, f64::NAN]).is_err());
    }

    proptest! {
        #[test]
        fn monotone_and_bounded(mut v in prop::collection::vec(-100.0f64..100.0, 1..50), xs in prop::collection::vec(-150.0f64..150.0, 2..20)) {
            let e = Ecdf::new(&v).unwrap();
            let mut xs = xs;
            xs.sort_by(f64::total_cmp);
            let fs: Vec<f64> = xs.iter().map(|&x| e.eval(x)).collect();
            prop_assert!(fs.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(fs.iter().all(|f| (0.0..=1.0).contains(f)));
            v.sort_by(f64::total_cmp);
            prop_assert_eq!(e.eval(*v.last().unwrap()), 1.0);
            // Quantile inverts the ECDF.
            for p in [0.1, 0.5, 0.9] {
                let q = e.quantile(p);
                prop_assert!(e.eval(q) >= p);
            }
        }
    }
}
