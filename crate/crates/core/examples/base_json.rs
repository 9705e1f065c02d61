//! Round-trips a compiled base through its JSON form.
//!
//!     cargo run -p qcsp --example base_json

use qcsp::{compile, fixtures, CompileOptions, QcspBase};

fn main() {
    let (base, _) = compile(&fixtures::pstar(), CompileOptions::default()).unwrap();
    let text = base.to_json();
    println!("{text}");
    let back = QcspBase::from_json(&text).unwrap();
    println!("round trip equal: {}", back == base);

    match QcspBase::from_json(r#"{"kind":"pair","binder":[],"nodes":[{"id":0,"var":"q","edges":{}}],"guards":{}}"#) {
        Ok(_) => println!("accepted a broken base"),
        Err(e) => println!("rejected: {e}"),
    }
}
