//! Arithmetic in F_p, F_p[t] and F_p(t), places of F_p(t) and tame local symbols.

pub mod factor;
pub mod parse;
pub mod place;
pub mod poly;
pub mod ratfunc;
pub mod square;

pub use factor::{factor, is_irreducible, Factorization};
pub use parse::{parse_place, parse_poly, parse_ratfunc};
pub use place::{hilbert_symbol, is_local_square, quadratic_character, support, support_of, unit_residue, valuation, Place};
pub use poly::{check_prime, smallest_nonsquare, Poly};
pub use ratfunc::RatFunc;
pub use square::{LocalSquareClass, SquareClass};
