pub mod constants;
pub mod counts;
pub mod curves;
pub mod galois;
pub mod gl2;
pub mod modarith;
pub mod primes;
