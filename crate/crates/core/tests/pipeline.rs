use num_traits::ToPrimitive;
use ordered_turan::appendix::{check_binomial_average, check_locally_balanced_exhaustive};
use ordered_turan::density::{quarter_free_subgraph, rho_exact, rho_local_search, DEFAULT_NODE_BUDGET};
use ordered_turan::hostgen::{complete_hypercube, generate_r, BlockedGraph};
use ordered_turan::ordered::text::{parse_hypercube, parse_ordered, write_hypercube, write_ordered};
use ordered_turan::ordered::{BitString, OrderedGraph};
use ordered_turan::pattern::{build_hk, contains_ordered, has_monotone_p3};
use ordered_turan::richness::{embed_hk_rich, strip_top_forward_traced, subgraph_average_richness, Preset};
use ordered_turan::tiling::{edge_hit_counts, exact_edge_probability, tiling_guarantee_report, TilingConfig, DEFAULT_REPORT_BUDGET};

fn p3() -> OrderedGraph {
    OrderedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
}

#[test]
fn generated_hosts_survive_text_round_trips() {
    let r = generate_r(5, 3, 9, 1 << 10).unwrap();
    let back = BlockedGraph::from_text(&r.to_text()).unwrap();
    assert_eq!(back, r);
    let text = write_ordered(r.graph());
    assert_eq!(write_ordered(&parse_ordered(&text).unwrap()), text);
    let c = complete_hypercube(4, 64).unwrap();
    assert_eq!(parse_hypercube(&write_hypercube(&c)).unwrap(), c);
}

#[test]
fn solvers_agree_on_small_blocked_hosts() {
    for seed in 0..4 {
        let r = generate_r(2, 2, seed, 64).unwrap();
        let exact = rho_exact(&p3(), r.graph(), DEFAULT_NODE_BUDGET).unwrap();
        let local = rho_local_search(&p3(), r.graph(), 5_000, seed).unwrap();
        let quarter = quarter_free_subgraph(r.graph());
        assert!(exact.exact && exact.verify(&p3(), r.graph()));
        assert!(local.best_edge_count <= exact.best_edge_count);
        assert!(quarter.edge_count() <= exact.best_edge_count);
        assert!(!has_monotone_p3(&quarter));
        let sub = r.with_edges(exact.certificate.iter().copied()).unwrap();
        assert!(subgraph_average_richness(&sub) <= subgraph_average_richness(&r) + 1e-12);
    }
}

#[test]
fn strip_then_embed_on_complete_cube() {
    let g = complete_hypercube(9, 1 << 10).unwrap();
    let s = strip_top_forward_traced(&g);
    // x ending in 0 1^r loses its 2^r partners at level d - r
    assert_eq!(s.removed.iter().sum::<u64>(), 9 << 8);
    assert!((0..9).all(|r| s.removed[8 - r] == 1 << 8));
    let r = embed_hk_rich(&g, 3, 1.0, Preset::Desk);
    let w = r.witness.expect("H_3 embeds");
    let hk = build_hk(3).unwrap();
    assert!(contains_ordered(&hk, g.graph()).is_some());
    assert!(w.map.windows(2).all(|p| p[0] < p[1]));
}

#[test]
fn tiling_report_on_single_edge() {
    let e = OrderedGraph::from_edges(2, [(0, 1)]).unwrap();
    let cfg = TilingConfig::full(10, 4, 2).unwrap();
    let r = tiling_guarantee_report(&e, &cfg, 0.3, DEFAULT_REPORT_BUDGET).unwrap();
    assert_eq!(r.levels.len(), 10);
    assert!(r.levels.iter().all(|l| (0.0..=1.0).contains(&l.pass_fraction)));
    // the window never reaches levels below `a + w` for a = 0, so level 1
    // can only be the first chosen level
    assert!(r.levels[0].min_normalised >= 0.0);
}

#[test]
fn tiling_monte_carlo_small_cube() {
    let cfg = TilingConfig::full(6, 3, 3).unwrap();
    let x = BitString::new(6, 0b000110).unwrap();
    let y = BitString::new(6, 0b010100).unwrap();
    let p = exact_edge_probability(&p3(), &cfg, x, y).unwrap().to_f64().unwrap();
    assert!(p > 0.0);
    let n = 400_000;
    let hits = edge_hit_counts(&p3(), &cfg, n, 17, &[(x.value(), y.value())]).unwrap()[0];
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((hits as f64 / n as f64 - p).abs() <= 4.0 * se);
}

#[test]
fn appendix_small_instances() {
    let r = check_locally_balanced_exhaustive(16, 0.45).unwrap();
    assert!(r.samples == Some(1 << 16));
    let table: Vec<f64> = (0..200).map(|t| if t % 2 == 0 { 0.6 } else { 0.4 }).collect();
    let r = check_binomial_average(&table, 2, 2, 0.5, 0.3, 0.1).unwrap();
    assert_eq!(r.premise_holds, Some(true));
    assert!(r.pass);
}
