//! Dimensions of M_(6,k) and the monomial bases realizing them.
use siegel::structure::{dim_vv, module_basis_labels};

fn main() {
    for k in (11..=31).step_by(2) {
        let labels: Vec<String> = module_basis_labels(k).iter().map(|l| l.to_string()).collect();
        println!("k={k:<2} dim {:<2} {}", dim_vv(k), labels.join(" "));
    }
}
