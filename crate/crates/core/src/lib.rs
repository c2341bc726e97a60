//! Elkies–Pell–Zagier polynomial identities and the integral points they
//! produce: template construction, exact elimination, p-adic search,
//! algebraic recognition, Pell families and certification.

pub mod arith;
pub mod builder;
pub mod elim;
pub mod exactpoly;
pub mod known;
pub mod linalg;
pub mod numfield;
pub mod padic;
pub mod pell;
pub mod recog;
pub mod ring;
pub mod verify;
