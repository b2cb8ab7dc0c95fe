//! Source processes: the Santa Fe process, IID sources and mixtures of
//! them, the Champernowne sequence, the bit predictors and the
//! well-predictability sets.

mod champernowne;
mod iid;
mod predictors;
mod santa_fe;
mod vocab;

use rand::Rng;

pub use champernowne::{champernowne_digit_at, champernowne_digits, ChampernowneSource};
pub use iid::{IidModel, MixtureModel};
pub use predictors::{coded_predictions, predictor_bar_s, predictor_s, BOTH_OR_NEITHER};
pub use santa_fe::{sample_santa_fe, ProcessSample, SantaFeModel, ZRecord};
pub use vocab::{
    bar_u_estimate, exact_prediction_prob, power_law_bound, u_set, u_size, BarUEstimate, KEstimate, USet,
};

/// A conditionally IID source: a realization fixes hidden state, after
/// which symbols are drawn independently given that state.
///
/// Santa Fe fixes the bits `Z_k`; a mixture fixes its component; plain IID
/// sources have no hidden state.
pub trait SourceModel: Sync {
    type Symbol: Clone + Send + Sync;
    type Hidden: Send;

    fn realize<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Hidden;

    fn draw<R: Rng + ?Sized>(&self, hidden: &mut Self::Hidden, rng: &mut R) -> Self::Symbol;

    fn draw_n<R: Rng + ?Sized>(&self, hidden: &mut Self::Hidden, n: usize, rng: &mut R) -> Vec<Self::Symbol> {
        (0..n).map(|_| self.draw(hidden, rng)).collect()
    }
}
