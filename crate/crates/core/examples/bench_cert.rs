use qtseq_core::search::{enumerate_wt, SearchConfig};
use qtseq_core::hadamard::quadruple_certificate;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(5);
    let outcome = enumerate_wt(n, &SearchConfig::default()).unwrap();
    let q = &outcome.quadruples[0];
    let t0 = Instant::now();
    let _ = quadruple_certificate(q).unwrap();
    println!("n={n} (matrix {}x{}): {:?}", 4*n, 4*n, t0.elapsed());
}
