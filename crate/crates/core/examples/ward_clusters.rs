//! Ward clustering of item means and cuts at several heights.

use diphthong_dynamics::clustering::{cut_tree, standardize_columns, ward_linkage};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let items = [
        ("bar", [0.8, -40.0]),
        ("burr", [1.1, -50.0]),
        ("bore", [1.4, -60.0]),
        ("bee", [3.1, -70.0]),
        ("boo", [3.3, -40.0]),
        ("beer", [3.4, -10.0]),
        ("buy", [4.0, 80.0]),
        ("boy", [4.2, 110.0]),
        ("bough", [4.3, 100.0]),
    ];
    let rows: Vec<Vec<f64>> = items.iter().map(|(_, v)| v.to_vec()).collect();
    let z = standardize_columns(&rows, &["euclidean", "pc1"])?;
    let points: Vec<(String, Vec<f64>)> = items.iter().map(|(l, _)| l.to_string()).zip(z).collect();

    let tree = ward_linkage(&points)?;
    for (step, m) in tree.merges.iter().enumerate() {
        println!(
            "merge {step}: {} + {} -> {} (height {:.3}, size {})",
            m.cluster_a,
            m.cluster_b,
            tree.n_leaves() + step,
            m.height,
            m.size
        );
    }
    for k in [2, 3, 4] {
        println!("k = {k}: {:?}", cut_tree(&tree, k)?);
    }
    Ok(())
}
