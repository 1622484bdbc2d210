//! Tree decompositions: validation, construction, nice form and the
//! product-structure window decomposition.

mod compute;
mod nice;
mod td;
mod window;

pub use compute::{
    compute_td, elimination_width, exact_elimination_order, min_fill_order, td_from_elimination,
    DEFAULT_EXACT_THRESHOLD,
};
pub use nice::{make_nice, NiceKind, NiceNode, NiceTreeDecomposition};
pub use td::{validate_td, TreeDecomposition, Violation};
pub use window::{window_td, ProductEmbedding};
