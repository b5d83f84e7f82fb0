//! Exact skew-product homeomorphisms of the plane and a checker for
//! left-order derivations over them.
//!
//! * [`exactpl`]: exact periodic piecewise-linear functions of the line.
//! * [`skew`]: vertical skew products `(x, y) ↦ (φ(x), y + ψ(x))` and the
//!   generators `α, β, γ, δ`.
//! * [`plane`]: words mixing vertical letters with their `η`-conjugates.
//! * [`orderlogic`]: inference rules for left-order inequalities, shipped
//!   derivation scripts, and a bounded positive-cone search.

pub mod exactpl;
pub mod orderlogic;
pub mod plane;
pub mod skew;
