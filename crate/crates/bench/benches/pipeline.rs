use criterion::{black_box, criterion_group, criterion_main, Criterion};
use nudcode::{
    build_coloring_graph, color_exact, contamination_sets, decompose, find_odd_hole_or_antihole,
    maxflow_value, parse_paths_override, solve, Gf256, GfMatrix, SolveOptions,
};

fn fixture_solves(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    for f in nudcode::fixtures::all() {
        let paths = f.paths_text.map(|t| parse_paths_override(&f.network, t).unwrap());
        g.bench_function(f.name, |b| {
            b.iter(|| solve(black_box(&f.network), paths.as_ref(), SolveOptions::default()))
        });
    }
    g.finish();
}

fn coloring_search(c: &mut Criterion) {
    // The reduced 5-cycle at three colors: 33 vertices, clique-structured.
    let inst = match nudcode::reduction::generate_corpus(
        nudcode::reduction::CorpusKind::Cycle { len: 5, colors: 3 },
        0,
    )
    .remove(0)
    .payload
    {
        nudcode::reduction::CorpusPayload::Coloring(i) => i,
        _ => unreachable!(),
    };
    let out = nudcode::reduce_coloring_to_network(&inst).unwrap();
    let r = contamination_sets(&out.network, &out.paths);
    let cg = build_coloring_graph(&out.paths, &r, 3).unwrap();
    c.bench_function("color_exact/reduced_c5", |b| {
        b.iter(|| color_exact(black_box(&cg.graph), 3, 0, None).unwrap())
    });
}

fn hole_hunt(c: &mut Criterion) {
    let net = nudcode::fixtures::non_berge();
    let d = parse_paths_override(&net, nudcode::fixtures::non_berge_paths()).unwrap();
    let r = contamination_sets(&net, &d);
    let cg = build_coloring_graph(&d, &r, 3).unwrap();
    c.bench_function("odd_hole/non_berge", |b| {
        b.iter(|| find_odd_hole_or_antihole(black_box(&cg.graph), 11, 5_000_000))
    });
}

fn field_ops(c: &mut Criterion) {
    let m = {
        let mut m = GfMatrix::zero(8, 8);
        for i in 0..8 {
            for j in 0..8 {
                m.set(i, j, Gf256(((i * 8 + j) as u8).wrapping_mul(29).wrapping_add(1)));
            }
        }
        m
    };
    c.bench_function("gf256/inverse_8x8", |b| b.iter(|| black_box(&m).inverse()));
}

fn flows(c: &mut Criterion) {
    let net = nudcode::fixtures::non_berge();
    c.bench_function("maxflow/non_berge", |b| {
        b.iter(|| (0..4).map(|j| maxflow_value(black_box(&net), j).unwrap()).sum::<usize>())
    });
    c.bench_function("decompose/non_berge", |b| b.iter(|| decompose(black_box(&net))));
}

criterion_group!(benches, fixture_solves, coloring_search, hole_hunt, field_ops, flows);
criterion_main!(benches);
