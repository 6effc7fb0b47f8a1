//! Reading and writing model and transform files, with positioned errors.

use hyperinv::model::Model;
use hyperinv::parser::{parse_model, parse_transform, render_model};

const SYSTEM: &str = r#"
kind = cr-system
vars = t, x
params = lambda
alpha1 = "lambda/2"
alpha2 = "0"
beta1 = "lambda/2"
beta2 = "0"
gamma1 = "0"
gamma2 = "0"
"#;

fn main() {
    let file = parse_model(SYSTEM).unwrap();
    print!("{}", render_model(&file));
    let model = Model::from_text(SYSTEM).unwrap();
    println!("kind: {}", model.kind_name());

    let map = parse_transform("vars = t, x\nphi = \"2*t\"\npsi = \"x + 1\"\n").unwrap();
    println!("map phi = {}", map.phi);

    for bad in [
        "kind = scalar\nvars = t, x\nalpha = \"t +\"\nbeta = \"0\"\ngamma = \"0\"\n",
        "kind = cr-system\nvars = t, x\nalpha1 = \"1\"\n",
    ] {
        let e = parse_model(bad).unwrap_err();
        println!("model error at {:?}: {e}", e.pos());
    }
    let e = parse_transform("vars = t, x\nphi = \"y\"\npsi = \"x\"\n").unwrap_err();
    println!("transform error at {:?}: {e}", e.pos());
}
