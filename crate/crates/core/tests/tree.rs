mod common;

use bsgroupoid::bs::{BSParams, GroupWord};
use bsgroupoid::tree::{
    canonical_vertex, distance, geodesic, neighbors, signed_path_length, stabilizer_index, TreeVertex, DEFAULT_RADIUS,
};
use common::tree::{ball, smallest_power};
use common::words::random_word;
use num_bigint::BigInt;
use rand::SeedableRng;

fn bs(p: i64, q: i64) -> BSParams {
    BSParams::new(p, q).unwrap()
}

#[test]
fn stabilizer_index_matches_smallest_power_from_base() {
    for params in [bs(2, 3), bs(4, 6)] {
        let v0 = TreeVertex::base();
        for (v, _) in ball(&params, 4) {
            let got = stabilizer_index(&v0, &v, &params, DEFAULT_RADIUS).unwrap();
            let want = smallest_power(&GroupWord::identity(), &v.word(), &params).unwrap();
            assert_eq!(got, BigInt::from(want), "{v}");
        }
    }
}

#[test]
fn stabilizer_index_matches_smallest_power_between_vertices() {
    for params in [bs(2, 3), bs(2, -3), bs(4, 6)] {
        let near = ball(&params, 2);
        for (u, _) in near.iter().step_by(3) {
            for (v, _) in near.iter().step_by(2) {
                let got = stabilizer_index(u, v, &params, DEFAULT_RADIUS).unwrap();
                let want = smallest_power(&u.word(), &v.word(), &params).unwrap();
                assert_eq!(got, BigInt::from(want), "{u} -> {v}");
            }
        }
    }
}

#[test]
fn ball_sizes_and_degrees() {
    for (p, q) in [(2, 3), (4, 6), (3, -5)] {
        let params = bs(p, q);
        let deg = (p.abs() + q.abs()) as usize;
        let b = ball(&params, 3);
        // a tree: 1 + deg·Σ (deg − 1)^i
        assert_eq!(b.len(), 1 + deg + deg * (deg - 1) + deg * (deg - 1) * (deg - 1));
        for (v, d) in &b {
            assert_eq!(distance(&TreeVertex::base(), v, &params), *d);
            assert_eq!(neighbors(v, &params).len(), deg);
        }
    }
}

#[test]
fn geodesics_and_translation() {
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(41);
    for params in [bs(2, 3), bs(4, 6), bs(2, -5)] {
        for _ in 0..200 {
            let (g, h, k) = (random_word(&mut r, 8), random_word(&mut r, 8), random_word(&mut r, 6));
            let (u, v) = (canonical_vertex(&g, &params), canonical_vertex(&h, &params));
            let d = distance(&u, &v, &params);
            assert_eq!(d, distance(&v, &u, &params));
            let path = geodesic(&u, &v, &params, DEFAULT_RADIUS).unwrap();
            assert_eq!(path.len(), d);
            for w in path.windows(2) {
                assert_eq!(w[0].to_vertex(), w[1].from_vertex());
            }
            if let (Some(first), Some(last)) = (path.first(), path.last()) {
                assert_eq!(first.from_vertex(), &u);
                assert_eq!(last.to_vertex(), &v);
            }
            assert_eq!(distance(&u.translate(&k, &params), &v.translate(&k, &params), &params), d);
            assert_eq!(BigInt::from(signed_path_length(&g, &params)), g.t_exponent_sum());
        }
    }
}
