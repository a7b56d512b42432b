pub mod apps;
pub mod error;
pub mod fast;
pub mod format;
pub mod gen;
pub mod experiment;
pub mod graph;
pub mod lca;
pub mod oracle;
pub mod sim;
pub mod tap;
pub mod virtual_graph;
pub mod wtap;

pub use error::{Error, Result};
