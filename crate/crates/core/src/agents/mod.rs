//! Cop adversaries and the robber strategies.
pub mod bigon;
pub mod bottleneck;
pub mod bs_sheet;
pub mod cops;
pub mod greedy_evader;
pub mod lamplighter;
pub mod projection;
pub mod scripted;

pub use bigon::BigonEvader;
pub use bottleneck::BottleneckEvader;
pub use bs_sheet::BsSheetEvader;
pub use cops::{GreedyCop, PusherCop, RandomCop};
pub use greedy_evader::GreedyEvader;
pub use lamplighter::LamplighterEvader;
pub use projection::ProjectionEvader;
pub use scripted::{ScriptedCop, ScriptedRobber};
