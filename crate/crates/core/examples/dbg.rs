use dpsd_core::*;
use dpsd_core::lcp::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn seed(tag: u8) -> [u8; 32] { let mut s = [0u8; 32]; s[0] = tag; s }

fn main() {
    let mut rng = ChaCha20Rng::seed_from_u64(20);
    for trial in 0..4u8 {
        let _a = oracle::random_string(16, &mut rng);
        if trial % 2 == 1 {
            let (pa, pb) = oracle::plant_hamming_pair(16, 3, &mut rng).unwrap();
            let mut trng = ChaCha20Rng::seed_from_u64(u64::from(40 + trial));
            let t = DyadicTree::build(&pa, 4, f64::INFINITY, seed(40 + trial), &mut trng).unwrap();
            let qs = QuerySide::new(&pb, 4, seed(40 + trial)).unwrap();
            println!("trial {trial}: a={} b={}", pa.to_line(), pb.to_line());
            let (i, j) = (1usize, 6usize);
            let want = oracle::exact_lcp(&pa, i, &pb, j).unwrap();
            let got = lcp_query(&t, &qs, i, j, LcpBackend::WindowEncode).unwrap();
            println!("  i={i} j={j} want={want} got={} dists={:?}", got.w_tilde, got.distances);
            // distance at mid=3 manually
            let nodes = t.decompose(1, 3).unwrap();
            println!("  nodes={:?}", nodes);
            let sa = t.interval_sketch_of(&nodes).unwrap();
            let sb = qs.window_sketch(&t, &nodes, 5).unwrap();
            println!("  manual dist mid=3: {}", sa.distance(&sb).unwrap());
            println!("  a[1..3]={} b[6..8]={}", pa.substring(1,3).to_line(), pb.substring(6,3).to_line());
        }
    }
}
