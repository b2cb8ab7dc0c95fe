use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::SourceModel;
use crate::error::{Error, Result};

/// An IID source over `{0, …, n−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IidModel {
    pmf: Vec<f64>,
    cdf: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

impl IidModel {
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        if pmf.is_empty() || pmf.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Domain("a pmf needs finite nonnegative entries".into()));
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("pmf sums to {total}, not 1")));
        }
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = pmf.iter().map(|p| {
            acc += p;
            acc
        }).collect();
        if let Some(last) = cdf.iter().rposition(|_| true) {
            cdf[last] = 1.0;
        }
        Ok(IidModel { pmf, cdf, exact: None })
    }

    pub fn from_rationals(pmf: Vec<BigRational>) -> Result<Self> {
        if pmf.iter().any(|p| p.is_negative()) {
            return Err(Error::Domain("negative probability".into()));
        }
        let total: BigRational = pmf.iter().cloned().sum();
        if !total.is_one() {
            return Err(Error::Domain(format!("pmf sums to {total}, not 1")));
        }
        let mut model = Self::new(pmf.iter().map(|p| p.to_f64().unwrap_or(0.0)).collect())?;
        model.exact = Some(pmf);
        Ok(model)
    }

    pub fn uniform(n: usize) -> Self {
        let p = BigRational::new(1.into(), (n as i64).into());
        Self::from_rationals(vec![p; n]).expect("uniform pmf is valid")
    }

    pub fn fair_coin() -> Self {
        Self::uniform(2)
    }

    /// A deterministic source emitting `symbol` forever.
    pub fn point(n: usize, symbol: usize) -> Self {
        let pmf = (0..n).map(|i| if i == symbol { BigRational::one() } else { BigRational::zero() }).collect();
        Self::from_rationals(pmf).expect("point mass is valid")
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn exact_pmf(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    pub fn alphabet_len(&self) -> usize {
        self.pmf.len()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cdf.partition_point(|&c| c <= u).min(self.pmf.len() - 1)
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        self.pmf.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
    }
}

impl SourceModel for IidModel {
    type Symbol = usize;
    type Hidden = ();

    fn realize<R: Rng + ?Sized>(&self, _rng: &mut R) {}

    fn draw<R: Rng + ?Sized>(&self, _hidden: &mut (), rng: &mut R) -> usize {
        self.sample(rng)
    }
}

/// A finite mixture of IID sources: each realization picks one component.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureModel {
    weights: IidModel,
    components: Vec<IidModel>,
}

impl MixtureModel {
    pub fn new(weights: Vec<f64>, components: Vec<IidModel>) -> Result<Self> {
        if weights.len() != components.len() {
            return Err(Error::Domain("one weight per component".into()));
        }
        let n = components.first().map(IidModel::alphabet_len).unwrap_or(0);
        if components.iter().any(|c| c.alphabet_len() != n) {
            return Err(Error::Domain("components must share an alphabet".into()));
        }
        Ok(MixtureModel { weights: IidModel::new(weights)?, components })
    }

    pub fn weights(&self) -> &[f64] {
        self.weights.pmf()
    }

    pub fn components(&self) -> &[IidModel] {
        &self.components
    }
}

impl SourceModel for MixtureModel {
    type Symbol = usize;
    type Hidden = usize;

    fn realize<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.weights.sample(rng)
    }

    fn draw<R: Rng + ?Sized>(&self, hidden: &mut usize, rng: &mut R) -> usize {
        self.components[*hidden].sample(rng)
    }
}
