fn main() {
    use z2embed::gram::OmegaKind;
    use z2embed::search::*;
    let budget = SearchBudget::default();
    let flavors: Vec<SearchFlavor> = [
        "join:3,3", "join:4,4", "join:5,5", "Kn:5", "Kn:6", "Kn:7",
    ]
    .iter()
    .map(|d| parse_flavor(d).unwrap())
    .collect();
    let t = std::time::Instant::now();
    let rows = tabulate_min_beta(&flavors, &[OmegaKind::I, OmegaKind::H], &budget).unwrap();
    for r in rows {
        println!(
            "{:<10} {:?} min_beta={:?} exact={}",
            r.complex, r.kind, r.min_beta, r.exact
        );
    }
    println!("total {:?}", t.elapsed());
}
