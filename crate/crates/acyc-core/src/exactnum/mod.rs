//! Exact coefficient arithmetic: integers, cyclotomic integers, truncated p-adics,
//! polynomials and finite abelian groups.

pub mod abelian;
pub mod arith;
pub mod cyclo;
pub mod padic;
pub mod poly;

pub use abelian::{Character, DiscreteLog, FiniteAbelianGroup, GroupElem, GroupHom, Presentation, ProductGroup};
pub use cyclo::{CycFrac, CycInt};
pub use padic::{PadicCtx, PadicNum, DEFAULT_PRECISION};
pub use poly::{poly_divides, Divisibility, Poly, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("invalid cyclotomic conductor {0}")]
    BadConductor(u64),
    #[error("conductor {from} does not divide {to}")]
    ConductorMismatch { from: u64, to: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unsupported extension degree {0}")]
    UnsupportedDegree(u32),
    #[error("precision must be positive")]
    ZeroPrecision,
    #[error("value is not a unit")]
    NonUnit,
    #[error("division by a non-unit would lose precision")]
    DivisionByP,
    #[error("divisibility is not decidable in this coefficient ring")]
    UndecidableDivisibility,
    #[error("invariant factors must be positive and form a divisibility chain")]
    BadInvariants,
    #[error("relations do not present a finite group")]
    InfiniteGroup,
    #[error("group of even order {0} has no canonical square roots")]
    EvenOrder(u64),
    #[error("generator images violate the source relations")]
    NotWellDefined,
    #[error("homomorphism is not bijective")]
    NotBijective,
    #[error("candidates generate {got} elements, expected {want}")]
    GenerationFailed { got: usize, want: usize },
}
