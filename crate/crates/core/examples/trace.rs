//! Step traces of both inclusion tests on `alpha ⊆ beta`.

use regtypes::{corpus, trace, DartZobel, PureTerm, TdSubset};

fn main() {
    let g = corpus::left_skewed();
    let (alpha, beta) = (PureTerm::ty("alpha"), PureTerm::ty("beta"));

    let mut dz = DartZobel::new(&g).with_trace();
    let result = dz.subset(&alpha, &beta);
    print!("{}", trace::render(&dz.take_trace()));
    println!("dz: {result:?}\n");

    let mut td = TdSubset::new(&g).with_trace();
    let result = td.subset(&alpha, &beta);
    print!("{}", trace::render(&td.take_trace()));
    println!("td: {result:?}");
}
