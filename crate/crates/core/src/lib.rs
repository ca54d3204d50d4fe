//! Exact power indices for weighted majority games.
//!
//! The Banzhaf and Shapley-Shubik indices of every player are computed from
//! the generating functions `prod (1 + x^w_p)` and `prod (1 + y x^w_p)`,
//! evaluated as truncated formal power series over several NTT-friendly
//! prime fields and lifted back to exact integers by Chinese remaindering.
//!
//! Module map:
//! - [`game`]: problem instances and their normalized form
//! - [`ring`]: prime fields with NTT convolution, CRT over prime bases
//! - [`fps`]: univariate truncated series and subset-sum windows
//! - [`bifps`]: series in `x` over `F[y]/(y^m)` with Kronecker products
//! - [`banzhaf`], [`shapley`]: the end-to-end index pipelines
//! - [`oracle`]: enumeration and big-integer DP baselines

pub mod banzhaf;
pub mod bifps;
pub mod error;
pub mod fps;
pub mod game;
mod newton;
pub mod oracle;
pub mod ring;
pub mod shapley;

pub use banzhaf::{compute_banzhaf, BanzhafResult};
pub use error::{Error, Result};
pub use game::{normalize, random_game, Degeneracy, NormalizedGame, QuotaRule, WeightedGame};
pub use ring::{BigCount, BigRational, PrimeBasis, PrimeField};
pub use shapley::{compute_shapley, ShapleyResult};
