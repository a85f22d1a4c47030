use codesign::analysis::*;
use codesign::qaoa::{build_qaoa, LayerOrder, QaoaParams};
use codesign::topology::{backend_series, heavy_hex, BackendSize};
use codesign::transpiler::transpile_trials;
use codesign::Exec;

fn small_sweep(exec: Exec) -> Vec<SweepRecord> {
    let base = heavy_hex(2, 2).unwrap();
    let spec = SweepSpec::new(0.5, 1, 4, 31);
    let dens = parse_densities("base,0.3,1.0").unwrap();
    sweep_density(&[6, 9], &spec, &dens, &base, BackendSize::new(2, 2), exec).unwrap()
}

fn to_csv(records: &[SweepRecord]) -> Vec<u8> {
    let mut out = Vec::new();
    write_records(records, &mut out).unwrap();
    out
}

#[test]
fn sweeps_are_byte_identical_across_runs_and_workers() {
    let a = to_csv(&small_sweep(Exec::Parallel));
    let b = to_csv(&small_sweep(Exec::Sequential));
    let c = to_csv(&small_sweep(Exec::Parallel));
    assert_eq!(a, b);
    assert_eq!(a, c);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next().unwrap(), RECORD_COLUMNS.join(","));
    assert!(!text.contains('\r'));
}

#[test]
fn record_counts_and_full_connectivity() {
    let recs = small_sweep(Exec::Parallel);
    assert_eq!(recs.len(), 2 * 3 * 4);
    for r in recs.iter().filter(|r| r.coupling_density == 1.0) {
        assert_eq!(r.swap_count, 0);
    }
    let base = heavy_hex(1, 2).unwrap();
    let spec = SweepSpec::new(0.5, 1, 20, 2);
    let recs = sweep_density(&[5, 7], &spec, &[DensityTarget::Target(0.5)], &base, BackendSize::new(1, 2), Exec::Parallel).unwrap();
    assert_eq!(recs.iter().filter(|r| r.n_nodes == 5).count(), 20);
    assert_eq!(recs.iter().filter(|r| r.n_nodes == 7).count(), 20);
}

#[test]
fn records_replay_from_their_seeds() {
    use codesign::seed::derive;
    use codesign::topology::densify;
    let recs = small_sweep(Exec::Parallel);
    let spec = SweepSpec::new(0.5, 1, 4, 31);
    let base = heavy_hex(2, 2).unwrap();
    let maps = [
        base.clone(),
        densify(&base, 0.3, derive(31, "densify", &[1])).unwrap(),
        densify(&base, 1.0, derive(31, "densify", &[2])).unwrap(),
    ];
    for (ni, n) in [6usize, 9].into_iter().enumerate() {
        let g = spec.graph(n).unwrap();
        let params = QaoaParams::new(vec![SWEEP_BETA], vec![SWEEP_GAMMA]).unwrap();
        let c = build_qaoa(&g, &params, LayerOrder::GammaFirst).unwrap();
        for (ci, map) in maps.iter().enumerate() {
            let root = derive(31, "transpile", &[n as u64, ci as u64]);
            let trials = transpile_trials(&c, map, 4, root, Exec::Sequential).unwrap();
            for (t, trial) in trials.iter().enumerate() {
                let r = &recs[(ni * 3 + ci) * 4 + t];
                assert_eq!((r.n_nodes, r.trial_index, r.graph_seed), (n, t, g.seed()));
                assert_eq!(r.transpile_seed, trial.seed);
                assert_eq!(r.depth, trial.depth());
                assert_eq!(r.swap_count, trial.swaps);
            }
        }
    }
}

#[test]
fn csv_round_trip_and_schema_check() {
    let recs = small_sweep(Exec::Parallel);
    let back = read_records(to_csv(&recs).as_slice()).unwrap();
    assert_eq!(back, recs);
    assert!(read_records("a,b\n1,2\n".as_bytes()).is_err());
    assert_eq!(to_csv(&[]), format!("{}\n", RECORD_COLUMNS.join(",")).into_bytes());
}

#[test]
fn backend_sweep_shape() {
    let spec = SweepSpec::new(0.5, 1, 2, 4);
    let series: Vec<BackendSize> = backend_series().into_iter().take(2).collect();
    let recs = sweep_backend_size(12, &spec, &series, &[DensityTarget::Base, DensityTarget::Target(1.0)], Exec::Parallel).unwrap();
    assert_eq!(recs.len(), 2 * 2 * 2);
    assert_eq!(summarize(&recs).len(), 4);
    assert_eq!(backend_series().len(), 10);
    assert!(sweep_backend_size(70, &spec, &series, &[DensityTarget::Base], Exec::Parallel).is_err());
}

#[test]
fn grouped_fits_write_csv() {
    let recs = small_sweep(Exec::Parallel);
    let fits = fit_groups(&recs, &[GroupColumn::CouplingDensity], 0.5, 1).unwrap();
    assert_eq!(fits.len(), 3);
    let mut out = Vec::new();
    write_fits(&fits, &[GroupColumn::CouplingDensity], 1, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("coupling_density,tau,degree,c0,c1,c2,pinball_loss,n_points\n"));
}
