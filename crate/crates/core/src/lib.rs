//! Analysis toolkit for fusion rings: structure validation, character and
//! codegree spectra, categorification obstructions, and algebraic-integrality
//! criteria, all at controlled arbitrary precision with reproducible output.

pub mod ap;
pub mod catalog;
pub mod criteria;
pub mod integrality;
pub mod io;
pub mod linalg;
pub mod lll;
pub mod oracle;
pub mod report;
pub mod ring;
pub mod spectra;
