/// Running means, variances and selected co-moments of a fixed-width
/// vector of per-sample quantities. Two accumulators merge exactly as if
/// their samples had been pushed into one, up to rounding.
#[derive(Clone, Debug)]
pub(crate) struct Moments {
    n: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
    pairs: Vec<(usize, usize)>,
    c2: Vec<f64>,
    delta: Vec<f64>,
}

impl Moments {
    pub fn new(width: usize, pairs: &[(usize, usize)]) -> Moments {
        Moments {
            n: 0,
            mean: vec![0.0; width],
            m2: vec![0.0; width],
            pairs: pairs.to_vec(),
            c2: vec![0.0; pairs.len()],
            delta: vec![0.0; width],
        }
    }

    pub fn push(&mut self, x: &[f64]) {
        debug_assert_eq!(x.len(), self.mean.len());
        self.n += 1;
        let inv = 1.0 / self.n as f64;
        for k in 0..x.len() {
            let d = x[k] - self.mean[k];
            self.delta[k] = d;
            self.mean[k] += d * inv;
            self.m2[k] += d * (x[k] - self.mean[k]);
        }
        for (c, &(i, j)) in self.c2.iter_mut().zip(&self.pairs) {
            *c += self.delta[i] * (x[j] - self.mean[j]);
        }
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (self.n as f64, other.n as f64);
        let n = na + nb;
        let d: Vec<f64> = other.mean.iter().zip(&self.mean).map(|(b, a)| b - a).collect();
        for k in 0..self.mean.len() {
            self.m2[k] += other.m2[k] + d[k] * d[k] * na * nb / n;
            self.mean[k] += d[k] * nb / n;
        }
        for (idx, &(i, j)) in self.pairs.iter().enumerate() {
            self.c2[idx] += other.c2[idx] + d[i] * d[j] * na * nb / n;
        }
        self.n += other.n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self, k: usize) -> f64 {
        self.mean[k]
    }

    /// Unbiased sample variance; zero for a single sample.
    pub fn variance(&self, k: usize) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2[k] / (self.n - 1) as f64).max(0.0)
        }
    }

    pub fn std_error(&self, k: usize) -> f64 {
        (self.variance(k) / self.n as f64).sqrt()
    }

    fn covariance(&self, i: usize, j: usize) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let idx = self
            .pairs
            .iter()
            .position(|&p| p == (i, j))
            .expect("co-moment pair was registered");
        self.c2[idx] / (self.n - 1) as f64
    }

    /// `mean(i) / mean(j)` with its delta-method standard error, or `None`
    /// when the denominator mean is zero.
    pub fn ratio(&self, i: usize, j: usize) -> Option<(f64, f64)> {
        let (x, y) = (self.mean(i), self.mean(j));
        if y == 0.0 {
            return None;
        }
        let r = x / y;
        let var = self.variance(i) - 2.0 * r * self.covariance(i, j) + r * r * self.variance(j);
        Some((r, (var.max(0.0) / (self.n as f64 * y * y)).sqrt()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(xs: &[[f64; 2]]) -> (f64, f64, f64) {
        let n = xs.len() as f64;
        let m0 = xs.iter().map(|x| x[0]).sum::<f64>() / n;
        let m1 = xs.iter().map(|x| x[1]).sum::<f64>() / n;
        let v0 = xs.iter().map(|x| (x[0] - m0).powi(2)).sum::<f64>() / (n - 1.0);
        let c = xs.iter().map(|x| (x[0] - m0) * (x[1] - m1)).sum::<f64>() / (n - 1.0);
        (m0, v0, c)
    }

    proptest! {
        #[test]
        fn merged_matches_naive(xs in prop::collection::vec((-10.0f64..10.0, 0.1f64..10.0), 2..60), split in 0usize..60) {
            let xs: Vec<[f64; 2]> = xs.into_iter().map(|(a, b)| [a, b]).collect();
            let split = split.min(xs.len());
            let mut a = Moments::new(2, &[(0, 1)]);
            let mut b = Moments::new(2, &[(0, 1)]);
            xs[..split].iter().for_each(|x| a.push(x));
            xs[split..].iter().for_each(|x| b.push(x));
            a.merge(&b);
            let (m0, v0, c) = naive(&xs);
            prop_assert_eq!(a.count(), xs.len() as u64);
            prop_assert!((a.mean(0) - m0).abs() < 1e-9);
            prop_assert!((a.variance(0) - v0).abs() < 1e-8 * (1.0 + v0));
            prop_assert!((a.covariance(0, 1) - c).abs() < 1e-8 * (1.0 + c.abs()));
        }
    }

    #[test]
    fn ratio_of_proportional_columns_has_no_error() {
        let mut m = Moments::new(2, &[(0, 1)]);
        for k in 1..100 {
            let y = k as f64;
            m.push(&[3.0 * y, y]);
        }
        let (r, se) = m.ratio(0, 1).unwrap();
        assert!((r - 3.0).abs() < 1e-14 && se < 1e-10);
        let zero = Moments::new(2, &[(0, 1)]);
        assert!(zero.ratio(0, 1).is_none());
    }
}
