//! Exact integer arithmetic: primes, factorization, Kronecker symbols and
//! fundamental discriminants.

pub mod batch;
pub mod discriminant;
pub mod factor;
pub mod kronecker;
pub mod primes;

pub use batch::{batch_character, CharacterTable, PrimeCharacter};
pub use discriminant::{
    enumerate_fundamental_discriminants, is_fundamental_discriminant, is_fundamental_with, DiscriminantSieve,
    FundamentalDiscriminant, SignFilter, BLOCK_WIDTH,
};
pub use factor::{
    factorize, orthogonality_mass, orthogonality_mass_of, orthogonality_mass_ratio, squarefree_decompose,
    Factorization, SquarefreeSplit,
};
pub use kronecker::kronecker;
pub use primes::{primes_in_window, sieve_primes};
