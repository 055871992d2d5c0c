use ecconst::curves::{frobenius_stream, Curve, MemCache};
use ecconst::galois::*;

fn main() {
    let curve = Curve::new(1, 1).unwrap();
    let mut cache = MemCache::default();
    let records = frobenius_stream(&curve, 10_000, &mut cache).unwrap();
    println!("records: {}", records.len());
    for ell in [2u64, 3, 5, 7] {
        let s = mod_ell_statistics_test(&curve, ell, &records, 10_000).unwrap();
        println!("l={ell}: {s:?}");
    }
    let v = serre_heuristic_from_records(&curve, 7, &records, 10_000);
    println!("verdict: {:?} witness: {:?}", v.status, v.witness);
}
