use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-node probability of being white.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorDistribution(Vec<f64>);

impl ColorDistribution {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if let Some((node, &value)) = x
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::InvalidDistribution { node, value });
        }
        Ok(ColorDistribution(x))
    }

    /// All nodes black.
    pub fn zeros(n: usize) -> Self {
        ColorDistribution(vec![0.0; n])
    }

    pub fn uniform(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    /// Indicator vector `e_W` of a white seed set.
    pub fn from_seeds(n: usize, seeds: &[usize]) -> Result<Self> {
        let mut x = vec![0.0; n];
        for &s in seeds {
            if s >= n {
                return Err(Error::NodeOutOfRange { node: s, n });
            }
            x[s] = 1.0;
        }
        Ok(ColorDistribution(x))
    }

    /// Wraps values already known to lie in `[0, 1]`.
    pub(crate) fn from_vec_unchecked(x: Vec<f64>) -> Self {
        debug_assert!(x.iter().all(|v| (0.0..=1.0).contains(v)));
        ColorDistribution(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Expected number of white nodes, `1ᵀx`.
    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl std::ops::Index<usize> for ColorDistribution {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(ColorDistribution::new(vec![0.0, 1.0, 0.5]).is_ok());
        assert_eq!(
            ColorDistribution::new(vec![0.2, 1.5]).unwrap_err(),
            Error::InvalidDistribution {
                node: 1,
                value: 1.5
            }
        );
        assert!(ColorDistribution::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn seeds_indicator() {
        let x = ColorDistribution::from_seeds(4, &[1, 3]).unwrap();
        assert_eq!(x.as_slice(), &[0.0, 1.0, 0.0, 1.0]);
        assert_eq!(x.total(), 2.0);
        assert!(ColorDistribution::from_seeds(2, &[2]).is_err());
    }
}
