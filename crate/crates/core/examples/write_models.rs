//! Regenerates the JSON model files in `models/` from the built-in
//! constructors. Run from the workspace root:
//! `cargo run -p stringtop --example write_models`

use stringtop::frobenius::{cp_model, product_model, sphere_model};
use stringtop::scalar::Field;
use stringtop::specfile::to_spec_string;

fn main() {
    let s3 = sphere_model(Field::Q, 3).unwrap();
    let models = [
        ("models/s2.json", sphere_model(Field::Q, 2).unwrap()),
        ("models/s3.json", s3.clone()),
        ("models/cp2.json", cp_model(Field::Q, 2).unwrap()),
        ("models/s3xs3.json", product_model(&s3, &s3).unwrap()),
    ];
    for (path, fr) in models {
        std::fs::write(path, to_spec_string(&fr) + "\n").unwrap();
        println!("wrote {path}");
    }
}
