//! Edge subsidies that enforce target networks as equilibria of fair
//! cost-sharing network design games.

pub mod enforce;
pub mod game;
pub mod generators;
pub mod model;
pub mod oracles;
pub mod rational;
pub mod simplex;
pub mod sne;
