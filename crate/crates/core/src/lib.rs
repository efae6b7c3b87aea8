pub mod checker;
pub mod cyclotomic;
pub mod padic;
pub mod polyring;
pub mod qterms;
pub mod sums;
pub mod termlang;
