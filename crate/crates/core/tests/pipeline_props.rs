use std::collections::BTreeMap;
use std::path::Path;

use pfwg::corpus::{frame, Text};
use pfwg::expand::{build_dictionary_index, expand_wg};
use pfwg::pfp::{parse_pfp, reconstruct, PfpParams};
use pfwg::pipeline::{
    build_index, build_parse_graph, decode_index, load_index, run_bench, serialize_index,
    BuildOptions, IndexMeta, NoProbe,
};
use pfwg::suffix_bwt::naive_bwt_oracle;
use pfwg::tunnel::{apply_tunnel, find_blocks};
use pfwg::wheeler::{check_wheeler, succinct_to_edges};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn body(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(prop::sample::select(b"abcd".to_vec()), 1..max_len)
}

fn params() -> impl Strategy<Value = PfpParams> {
    (1usize..5, prop::sample::select(vec![2u64, 3, 5, 7, 11]))
        .prop_map(|(w, p)| PfpParams::hashed(w, p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn parse_reconstructs_and_phrases_are_distinct(t in body(200), params in params()) {
        let framed = frame(&Text::from_bytes(&t).unwrap(), params.w).unwrap();
        let pfp = parse_pfp(&framed, &params).unwrap();
        prop_assert_eq!(reconstruct(&pfp).unwrap(), framed);
        prop_assert!(pfp.dictionary.windows(2).all(|d| d[0] < d[1]));
        prop_assert!(pfp.dictionary.iter().all(|d| d.len() > params.w));
    }

    #[test]
    fn expansion_is_the_bwt_of_the_text(t in body(200), params in params(), tunnel in any::<bool>()) {
        let text = Text::from_bytes(&t).unwrap();
        let pfp = parse_pfp(&frame(&text, params.w).unwrap(), &params).unwrap();
        let mut parse = build_parse_graph(&pfp).unwrap();
        if tunnel {
            parse = apply_tunnel(&parse, &find_blocks(&parse)).unwrap();
        }
        let idx = build_dictionary_index(&pfp).unwrap();
        let wg = expand_wg(&parse, &pfp, &idx).unwrap();
        prop_assert!(check_wheeler(&succinct_to_edges(&wg)).is_valid());
        if !tunnel {
            let oracle = naive_bwt_oracle(&text.indexed_codes());
            prop_assert_eq!(wg.labels(), oracle.as_slice());
        }
    }

    /// Brute force: group every suffix longer than `w` of every phrase by
    /// its string.
    #[test]
    fn suffix_classes_match_brute_force(t in body(200), params in params()) {
        let framed = frame(&Text::from_bytes(&t).unwrap(), params.w).unwrap();
        let pfp = parse_pfp(&framed, &params).unwrap();
        let mut expect: BTreeMap<Vec<u8>, Vec<(u64, usize)>> = BTreeMap::new();
        for (i, d) in pfp.dictionary.iter().enumerate() {
            for o in 0..d.len() - params.w {
                expect.entry(d[o..].to_vec()).or_default().push((i as u64, o));
            }
        }
        let idx = build_dictionary_index(&pfp).unwrap();
        prop_assert_eq!(idx.classes.len(), expect.len());
        for (cl, (suffix, members)) in idx.classes.iter().zip(&expect) {
            let got: Vec<(u64, usize)> = cl.phrases.iter().copied().zip(cl.offsets.iter().copied()).collect();
            prop_assert_eq!(&got, members);
            prop_assert_eq!(cl.len, suffix.len());
            prop_assert_eq!(idx.ambiguity_class(suffix), Some(cl));
        }
    }
}

/// 500 random texts through build, serialise, load and decode.
#[test]
fn full_pipeline_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..500 {
        let sigma = [2, 4, 26][i % 3];
        let n = rng.gen_range(1..=300);
        let t: Vec<u8> = (0..n).map(|_| b'a' + rng.gen_range(0..sigma)).collect();
        let text = Text::from_bytes(&t).unwrap();
        let opts = BuildOptions {
            params: PfpParams::hashed(rng.gen_range(1..=6), [2, 5, 11, 50][i % 4]).unwrap(),
            tunnel: i % 2 == 0,
        };
        let built = build_index(&text, &opts).unwrap();
        let mut meta = built.meta.clone();
        let bytes = serialize_index(&built.graph, &mut meta).unwrap();
        let meta = IndexMeta::from_text(&meta.to_text()).unwrap();
        let graph = load_index(&bytes, &meta).unwrap();
        let decoded = decode_index(&graph, &meta).unwrap();
        assert_eq!(decoded, frame(&text, opts.params.w).unwrap(), "text {i}");
        assert_eq!(decoded.body_bytes(), t);
    }
}

#[test]
fn build_is_deterministic() {
    let t = pfwg::pipeline::synthetic_corpus(5, 2000, 0.01, 9);
    let text = Text::from_bytes(&t).unwrap();
    let opts = BuildOptions {
        params: PfpParams::hashed(4, 50).unwrap(),
        tunnel: true,
    };
    let serialize = || {
        let built = build_index(&text, &opts).unwrap();
        let mut meta = built.meta.clone();
        (
            serialize_index(&built.graph, &mut meta).unwrap(),
            meta.to_text(),
            built.plan.to_text(),
        )
    };
    assert_eq!(serialize(), serialize());
}

#[test]
fn bench_is_deterministic_apart_from_time() {
    let manifest = "a synth:3:3000:0.002\nb synth:6:3000:0.002\n";
    let opts = BuildOptions {
        params: PfpParams::hashed(4, 50).unwrap(),
        tunnel: true,
    };
    let strip_time = |csv: String| -> Vec<String> {
        csv.lines()
            .map(|l| {
                let mut f: Vec<&str> = l.split(',').collect();
                f.remove(2);
                f.join(",")
            })
            .collect()
    };
    let (a, _) = run_bench(manifest, Path::new("."), &opts, 5, &NoProbe).unwrap();
    let (b, _) = run_bench(manifest, Path::new("."), &opts, 5, &NoProbe).unwrap();
    assert_eq!(strip_time(a), strip_time(b));
}
