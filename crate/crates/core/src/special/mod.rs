//! Reference ("oracle") special functions. Everything here is independent of
//! the asymptotic evaluators it is used to validate.

mod gamma;
mod polylog;
mod zeta;

pub use gamma::{digamma, gamma};
pub use polylog::polylog;
pub use zeta::zeta_oracle;
