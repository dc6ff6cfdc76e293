//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use symorder_core::ensemble::EnsembleConfig;
use symorder_core::groups::{build_group, build_invariant, check_invariance, pair_orbits, GroupName};
use symorder_core::irrep::{
    block_spectra, cn_variance_factors, decompose, decompose_polyhedral,
    ground_state_irrep_census, Census,
};
use symorder_core::linalg::{eigenvalues, spectrum_multiset_equal, SymMatrix};
use symorder_core::output::{census_csv, gs_distribution_csv};
use symorder_core::su2::{f_space, gs_distribution, sigma_j_sq, DimensionTable, GsRun};

type Outcome = Result<String, String>;

const QUAD_POINTS: usize = 512;

/// Seeded baseline for the bundled dimension table: ground-state counts per
/// table row (twoJ = 0, 2, ..., 28) at seed 2024 and 10⁴ trials.
const GS_BASELINE_SEED: u64 = 2024;
const GS_BASELINE_COUNTS: [u64; 15] = [5942, 1248, 1906, 693, 194, 16, 1, 0, 0, 0, 0, 0, 0, 0, 0];

fn blocks_for(cfg: &EnsembleConfig, trial: u64, labels: usize) -> Vec<SymMatrix> {
    cfg.draw_blocks(trial, labels)
        .unwrap()
        .into_iter()
        .map(|b| b.matrix)
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_su2_widths() -> Outcome {
    let printed = [1.571, 0.393, 0.245, 0.178, 0.139];
    let mut got = Vec::new();
    for (j, want) in printed.iter().enumerate() {
        let v = sigma_j_sq(j as u32, QUAD_POINTS).map_err(|e| e.to_string())?;
        ensure((v - want).abs() <= 0.0005, || format!("J={j}: {v} vs {want}"))?;
        got.push(v);
    }
    ensure((got[0] - PI / 2.0).abs() < 1e-10, || format!("J=0 {} vs π/2", got[0]))?;
    ensure((got[1] - PI / 8.0).abs() < 1e-10, || format!("J=1 {} vs π/8", got[1]))?;
    Ok(format!("{got:.6?}"))
}

fn c2_polyhedral_variances() -> Outcome {
    let expected: [(GroupName, &[f64]); 3] = [
        (GroupName::Tetra, &[10.0, 2.0]),
        (GroupName::Octa, &[18.0, 6.0, 2.0]),
        (GroupName::Cube, &[20.0, 20.0, 4.0, 4.0]),
    ];
    let (m, draws) = (2usize, 10_000u64);
    let mut worst = 0.0_f64;
    for (name, factors) in expected {
        let g = build_group(name).map_err(|e| e.to_string())?;
        let decomp = decompose_polyhedral(&g).map_err(|e| e.to_string())?;
        ensure(decomp.variance_factors() == factors, || {
            format!("{name}: factors {:?}", decomp.variance_factors())
        })?;
        let cfg = EnsembleConfig::new(name, m, draws, 20_000);
        for irrep in &decomp.irreps {
            let mut sum = vec![0.0; m * m];
            let mut sq = vec![0.0; m * m];
            for t in 0..draws {
                let c = irrep.combine(&blocks_for(&cfg, t, decomp.num_labels())).unwrap();
                for (k, v) in c.as_slice().iter().enumerate() {
                    sum[k] += v;
                    sq[k] += v * v;
                }
            }
            let n = draws as f64;
            for k in (0..m * m).filter(|k| k / m <= k % m) {
                let mean = sum[k] / n;
                let var = (sq[k] - n * mean * mean) / (n - 1.0);
                let rel = (var / irrep.variance_factor - 1.0).abs();
                worst = worst.max(rel);
                ensure(rel < 0.05, || format!("{name} {} element {k}: var {var}", irrep.label))?;
            }
        }
    }
    Ok(format!("factors exact; worst empirical deviation {:.2}%", 100.0 * worst))
}

fn all_groups() -> Vec<GroupName> {
    let mut v: Vec<GroupName> = (2..=12).map(GroupName::Cyclic).collect();
    v.extend([GroupName::Tetra, GroupName::Octa, GroupName::Cube]);
    v
}

fn c3_spectrum_union() -> Outcome {
    let mut worst = 0.0_f64;
    let mut cases = 0;
    for name in all_groups() {
        let g = build_group(name).map_err(|e| e.to_string())?;
        let orbits = pair_orbits(&g);
        let decomp = decompose(&g).map_err(|e| e.to_string())?;
        for m in [1, 2, 5] {
            for seed in 0..20 {
                let cfg = EnsembleConfig::new(name, m, 1, 3000 + seed);
                let blocks = blocks_for(&cfg, 0, orbits.num_labels());
                let h = build_invariant(&orbits, &blocks).map_err(|e| e.to_string())?;
                let dense = eigenvalues(&h).map_err(|e| e.to_string())?;
                let union = block_spectra(&decomp, &blocks).map_err(|e| e.to_string())?.union;
                ensure(spectrum_multiset_equal(&dense, &union, 1e-8), || {
                    format!("{name} m={m} seed={seed}")
                })?;
                let dev = dense.iter().zip(&union).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
                worst = worst.max(dev);
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, max deviation {worst:.2e}"))
}

fn c4_invariance() -> Outcome {
    let mut worst = 0.0_f64;
    let mut cases = 0;
    for name in all_groups() {
        let g = build_group(name).map_err(|e| e.to_string())?;
        let orbits = pair_orbits(&g);
        for m in [1, 2, 5] {
            for seed in 0..20 {
                let cfg = EnsembleConfig::new(name, m, 1, 4000 + seed);
                let h = build_invariant(&orbits, &blocks_for(&cfg, 0, orbits.num_labels()))
                    .map_err(|e| e.to_string())?;
                let v = check_invariance(&h, &g, m).map_err(|e| e.to_string())?;
                worst = worst.max(v);
                cases += 1;
            }
        }
    }
    ensure(worst < 1e-12, || format!("violation {worst:e}"))?;
    Ok(format!("{cases} Hamiltonians, max violation {worst:e}"))
}

fn c5_tetra_scalar_census() -> Outcome {
    let trials = 10_000;
    let c = ground_state_irrep_census(&EnsembleConfig::new(GroupName::Tetra, 1, trials, 5000))
        .map_err(|e| e.to_string())?;
    let f = c.fraction_of("1dim").unwrap();
    let tol = 3.0 * (0.25 / trials as f64).sqrt();
    ensure((f - 0.5).abs() <= tol, || format!("1-dim fraction {f}, tolerance {tol}"))?;
    ensure(c.ties == 0, || format!("{} ties", c.ties))?;
    Ok(format!("1-dim fraction {f:.4} (|Δ| ≤ {tol:.3}); dimensional fraction 0.25"))
}

fn one_dim_excess(c: &Census) -> (f64, f64, f64) {
    let one_dim: Vec<usize> = c
        .irreps
        .iter()
        .enumerate()
        .filter(|(_, b)| b.copies == 1)
        .map(|(i, _)| i)
        .collect();
    let measured: f64 = one_dim.iter().map(|&i| c.fractions()[i]).sum();
    let p: f64 = one_dim.iter().map(|&i| c.dimensional_fractions()[i]).sum();
    let se = (p * (1.0 - p) / c.trials as f64).sqrt();
    (measured, p, se)
}

fn c6_low_dim_dominance() -> Outcome {
    let mut detail = Vec::new();
    for name in [GroupName::Tetra, GroupName::Octa, GroupName::Cube] {
        let c = ground_state_irrep_census(&EnsembleConfig::new(name, 20, 1000, 6000))
            .map_err(|e| e.to_string())?;
        let (f, p, se) = one_dim_excess(&c);
        ensure(f - p >= 5.0 * se, || format!("{name}: {f} vs {p} (se {se})"))?;
        detail.push(format!("{name} {f:.3} vs {p:.3} ({:.0} se)", (f - p) / se));
    }
    Ok(detail.join("; "))
}

fn c7_cn_ordering() -> Outcome {
    let mut failures = Vec::new();
    for n in 3..=12usize {
        let f = cn_variance_factors(n).map_err(|e| e.to_string())?;
        let strict = (1..n).all(|k| f[0] > f[k]);
        if !strict {
            let rivals: Vec<usize> = (1..n).filter(|&k| f[k] >= f[0]).collect();
            failures.push(format!("n={n}: factor_0={} not strictly above k={rivals:?}", f[0]));
        }
        let c = ground_state_irrep_census(&EnsembleConfig::new(GroupName::Cyclic(n), 10, 1000, 7000 + n as u64))
            .map_err(|e| e.to_string())?;
        let fr = c.fractions();
        if (1..fr.len()).any(|k| fr[k] >= fr[0]) {
            failures.push(format!("n={n}: census {fr:.3?} (k=0 not highest)"));
        }
    }
    if failures.is_empty() {
        Ok("factor_0 strictly maximal and k=0 modal for n=3..12".into())
    } else {
        Err(failures.join("; "))
    }
}

fn c8_f_rm_enhancement() -> Outcome {
    let dims = DimensionTable::bundled();
    let d = gs_distribution(&dims, &GsRun::new(10_000, GS_BASELINE_SEED)).map_err(|e| e.to_string())?;
    let fs0 = f_space(&dims)[0].1;
    let fr0 = d.f_rm(0).unwrap();
    ensure(fr0 > fs0, || format!("f_RM(0)={fr0} <= f_space(0)={fs0}"))?;
    ensure(d.modal_two_j() == 0, || format!("modal twoJ {}", d.modal_two_j()))?;
    ensure(d.counts == GS_BASELINE_COUNTS, || {
        format!("counts {:?} differ from stored baseline", d.counts)
    })?;
    Ok(format!("f_RM(0) = {fr0:.4} vs f_space(0) = {fs0:.4}; baseline reproduced"))
}

fn c9_determinism() -> Outcome {
    let render = |threads: usize| -> Result<(String, String), String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?;
        pool.install(|| {
            let c = ground_state_irrep_census(&EnsembleConfig::new(GroupName::Octa, 6, 500, 9000))
                .map_err(|e| e.to_string())?;
            let d = gs_distribution(&DimensionTable::bundled(), &GsRun::new(500, 9000))
                .map_err(|e| e.to_string())?;
            Ok((census_csv(&c), gs_distribution_csv(&d)))
        })
    };
    let reference = render(1)?;
    for threads in [1, 2, 4, 8] {
        ensure(render(threads)? == reference, || format!("output differs at {threads} threads"))?;
    }
    Ok("census and distribution CSV byte-identical for 1, 2, 4, 8 threads".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("1 SU(2) width table", c1_su2_widths, Duration::from_secs(1)),
        ("2 polyhedral variance factors", c2_polyhedral_variances, Duration::from_secs(30)),
        ("3 spectrum-union oracle", c3_spectrum_union, Duration::from_secs(60)),
        ("4 invariance", c4_invariance, Duration::from_secs(1)),
        ("5 tetrahedron analytic census", c5_tetra_scalar_census, Duration::from_secs(1)),
        ("6 low-dimensional irrep dominance", c6_low_dim_dominance, Duration::from_secs(60)),
        ("7 C_n width ordering", c7_cn_ordering, Duration::from_secs(60)),
        ("8 f_RM enhancement", c8_f_rm_enhancement, Duration::from_secs(10)),
        ("9 determinism", c9_determinism, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why} [{elapsed:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
