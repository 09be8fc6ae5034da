//! Eta quotients, their expansions, and the infinite-product form.

pub mod counting;
pub mod eta;
pub mod product;

pub use counting::count_type_ia_groups;
pub use eta::{eta_expand, EtaQuotient};
pub use product::{eta_recognize, product_form_to_series, series_to_product_form, ProductForm, Recognition};
