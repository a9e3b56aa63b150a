//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use orbitsym::gramgraph::build_gram_graph;
use orbitsym::groupcore::{isomorphic, MultiplicationTable};
use orbitsym::pointsym::{orbit_pairing, point_automorphisms, union_action};
use orbitsym::reconstruct::{align_by_orbit_action, recover_concrete_group, ConcreteGroup};
use orbitsym::reptheory::{character_table, irreps_over_field, orbit_threshold, CharacterTable};
use orbitsym::simulate::{build_group, catalog, sample_orbits, Family, GroupSpec};
use orbitsym::{Error, FieldTag, Scalar, TolerancePolicy, Vector};
use orbitsym_cli::run;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Orbit of a uniformly random base point, in group order.
fn raw_orbit(g: &ConcreteGroup, rng: &mut ChaCha8Rng) -> Vec<Vector> {
    let entries: Vec<Scalar> = (0..g.dimension())
        .map(|_| match g.field() {
            FieldTag::Real => Scalar::new(rng.random_range(-1.0..1.0), 0.0),
            FieldTag::Complex => Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        })
        .collect();
    let x = Vector::new(g.field(), entries).unwrap();
    g.matrices().iter().map(|m| m.apply(&x).unwrap()).collect()
}

fn real(f: Family) -> GroupSpec {
    GroupSpec::new(f, FieldTag::Real)
}

fn cli(args: &[&str]) -> (i32, Value) {
    let mut out = Vec::new();
    let mut full = vec!["orbitsym"];
    full.extend_from_slice(args);
    let code = run(full, &mut out);
    (code, serde_json::from_slice(&out).unwrap_or(Value::Null))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn recover_k(g: &ConcreteGroup) -> usize {
    match orbit_threshold(g) {
        Ok(t) => t.k_recover,
        Err(Error::TrivialGroup) => g.field().extension_degree(),
        Err(e) => panic!("threshold: {e}"),
    }
}

fn all_catalog() -> Vec<GroupSpec> {
    let mut out = catalog(FieldTag::Real);
    out.extend(catalog(FieldTag::Complex));
    out
}

fn gram_label_counts() -> Outcome {
    let policy = TolerancePolicy::default();
    let mut runs = 0;
    for n in 3..=12 {
        let cn = build_group(&real(Family::Cyclic(n))).unwrap();
        let dn = build_group(&real(Family::Dihedral(n))).unwrap();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * n as u64 + seed);
            let g = build_gram_graph(&raw_orbit(&cn, &mut rng), &policy).map_err(|e| e.to_string())?;
            check(g.label_count() == n / 2 + 1, || format!("C{n} seed {seed}: {} labels", g.label_count()))?;
            let g = build_gram_graph(&raw_orbit(&dn, &mut rng), &policy).map_err(|e| e.to_string())?;
            check(g.vertex_count() == 2 * n && g.label_count() == 3 * n / 2 + 1, || {
                format!("D{n} seed {seed}: {} vertices, {} labels", g.vertex_count(), g.label_count())
            })?;
            runs += 2;
        }
    }
    Ok(format!("{runs} orbits, all exact"))
}

fn g1_g2_labels() -> Outcome {
    let policy = TolerancePolicy::default();
    for (f, want) in [(Family::G1, 6), (Family::G2, 5)] {
        let g = build_group(&real(f.clone())).unwrap();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let labels = build_gram_graph(&raw_orbit(&g, &mut rng), &policy).unwrap().label_count();
            check(labels == want, || format!("{f:?} seed {seed}: {labels} labels"))?;
        }
    }
    Ok("G1: 6 labels, G2: 5 labels over 50 seeds each".into())
}

fn q8_symmetry_excess() -> Outcome {
    let policy = TolerancePolicy::default();
    let g = build_group(&real(Family::Quaternion8)).unwrap();
    let mut slowest = Duration::ZERO;
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let orbit = raw_orbit(&g, &mut rng);
        let start = Instant::now();
        let count = point_automorphisms(&orbit, &policy).unwrap().len();
        slowest = slowest.max(start.elapsed());
        check(count == 384, || format!("seed {seed}: {count} automorphisms"))?;
    }
    check(slowest < Duration::from_secs(10), || format!("took {slowest:?}"))?;
    Ok(format!("384 automorphisms, slowest run {slowest:.2?}"))
}

fn one_orbit_abstract_recovery() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let mut groups = 0;
    for spec in catalog(FieldTag::Complex) {
        let order = build_group(&spec).unwrap().order();
        if order > 24 {
            continue;
        }
        groups += 1;
        let dir = tmp.path().join(format!("g{groups}"));
        for seed in 0..100u64 {
            let mut spec = spec.clone();
            spec.conjugation_seed = Some(seed + 1);
            let hidden = build_group(&spec).unwrap();
            let orbits = sample_orbits(&hidden, 1, seed, &TolerancePolicy::default()).map_err(|e| e.to_string())?;
            std::fs::create_dir_all(&dir).unwrap();
            let file = orbitsym_cli::files::OrbitFile::from_orbits(FieldTag::Complex, hidden.dimension(), &orbits);
            orbitsym_cli::files::write_json(&dir.join("orbits.json"), &file).unwrap();
            let (code, report) = cli(&["recover-abstract", p(&dir.join("orbits.json"))]);
            check(code == 0, || format!("{} seed {seed}: exit {code}: {report}", spec.name()))?;
            let rows: Vec<Vec<usize>> = serde_json::from_value(report["table"].clone()).unwrap();
            let n = rows.len();
            let identity = (0..n).find(|&e| (0..n).all(|j| rows[e][j] == j)).unwrap();
            let t = MultiplicationTable::new(n, rows.concat(), identity).unwrap();
            check(isomorphic(&t, hidden.table()).is_some(), || format!("{} seed {seed}: not isomorphic", spec.name()))?;
        }
    }
    Ok(format!("{groups} complex groups x 100 seeds recovered"))
}

fn two_orbit_real_recovery() -> Outcome {
    let policy = TolerancePolicy::default();
    for n in 3..=8 {
        let g = build_group(&real(Family::Cyclic(n))).unwrap();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(100 * n as u64 + seed);
            let orbits = vec![raw_orbit(&g, &mut rng), raw_orbit(&g, &mut rng)];
            let one = union_action(&orbits[..1], &policy, true).map_err(|e| format!("C{n} seed {seed}: {e}"))?;
            check(one.insufficient && one.group.order() == 2 * n, || {
                format!("C{n} seed {seed}: one orbit gave order {}", one.group.order())
            })?;
            let two = union_action(&orbits, &policy, false).map_err(|e| format!("C{n} seed {seed}: {e}"))?;
            check(two.group.order() == n, || format!("C{n} seed {seed}: two orbits gave order {}", two.group.order()))?;
        }
    }
    Ok("one orbit: order 2n (flagged); two orbits: order n; 50/50 seeds for n = 3..8".into())
}

fn threshold_reproduction() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let group = tmp.path().join("group.json");
    let out = p(tmp.path());
    for d in 1..=6 {
        let dim = d.to_string();
        cli(&["simulate", "--family", "sign", "--field", "complex", "--dim", &dim, "--k", "1", "--out", out]);
        let (code, report) = cli(&["analyze", p(&group)]);
        check(code == 0 && report["k_span"] == d, || format!("sign d={d}: {report}"))?;
    }
    let regular: [&[&str]; 3] = [&["--family", "cyclic", "--n", "4"], &["--family", "symmetric", "--n", "3"], &["--family", "quaternion8"]];
    for fam in regular {
        let mut args = vec!["simulate", "--field", "complex", "--regular", "--k", "1", "--out", out];
        args.extend_from_slice(fam);
        cli(&args);
        let (code, report) = cli(&["analyze", p(&group)]);
        check(code == 0 && report["k_span"] == 1, || format!("regular {fam:?}: {report}"))?;
    }
    Ok("k_span = d for <-id> in U(d), d = 1..6; k_span = 1 for regular C4, S3, Q8".into())
}

fn concrete_round_trip() -> Outcome {
    let policy = TolerancePolicy::default();
    let mut worst: f64 = 0.0;
    let specs = all_catalog();
    for spec in &specs {
        for seed in 0..100u64 {
            let hidden = build_group(&spec.clone().conjugated(seed + 7)).unwrap();
            let k = recover_k(&hidden);
            let orbits = sample_orbits(&hidden, k, seed, &policy).map_err(|e| format!("{} seed {seed}: {e}", spec.name()))?;
            let (rec, report) =
                recover_concrete_group(&orbits, &policy, false).map_err(|e| format!("{} seed {seed}: {e}", spec.name()))?;
            check(!report.ambiguous, || format!("{} seed {seed}: flagged ambiguous", spec.name()))?;
            let map = align_by_orbit_action(&hidden, &rec, &orbits[0], &policy).map_err(|e| format!("{}: {e}", spec.name()))?;
            for (i, &j) in map.iter().enumerate() {
                worst = worst.max(hidden.matrix(i).frobenius_distance(rec.matrix(j)));
            }
            check(worst <= 1e-8, || format!("{} seed {seed}: error {worst:e}", spec.name()))?;
        }
    }
    Ok(format!("{} groups x 100 seeds, max Frobenius error {worst:.1e}", specs.len()))
}

fn ambiguity_detection() -> Outcome {
    let policy = TolerancePolicy::default();
    let g = build_group(&GroupSpec::new(Family::Sign, FieldTag::Complex).with_dim(2)).unwrap();
    for seed in 0..50 {
        for (k, want) in [(1, true), (2, false)] {
            let orbits = sample_orbits(&g, k, seed, &policy).unwrap();
            let (_, report) = recover_concrete_group(&orbits, &policy, false).unwrap();
            check(report.ambiguous == want, || format!("seed {seed} k={k}: ambiguous = {}", report.ambiguous))?;
        }
    }
    Ok("k=1 flagged 50/50, k=2 clear 50/50".into())
}

fn character_properties() -> Outcome {
    let mut checked = 0;
    for spec in all_catalog() {
        let g = build_group(&spec).unwrap();
        let ct = character_table(g.table()).map_err(|e| format!("{}: {e}", spec.name()))?;
        let k = ct.characters.len();
        check(ct.dims.iter().map(|d| d * d).sum::<usize>() == g.order(), || format!("{}: sum of squares", spec.name()))?;
        for i in 0..k {
            for j in 0..k {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = ct.inner(&ct.characters[i], &ct.characters[j]);
                check((got - want).norm() <= 1e-8, || format!("{}: rows {i},{j} give {got}", spec.name()))?;
                let col: Scalar = ct.characters.iter().map(|chi| chi[i].conj() * chi[j]).sum();
                let want = if i == j { g.order() as f64 / ct.classes.sizes[i] as f64 } else { 0.0 };
                check((col - want).norm() <= 1e-8, || format!("{}: columns {i},{j} give {col}", spec.name()))?;
            }
        }
        checked += 1;
    }
    let q8 = build_group(&real(Family::Quaternion8)).unwrap();
    let ct = character_table(q8.table()).unwrap();
    let two = ct.dims.iter().position(|&d| d == 2).unwrap();
    check(ct.fs_indicator[two] == -1, || format!("Q8 indicator {}", ct.fs_indicator[two]))?;
    Ok(format!("{checked} tables orthonormal, Q8 2-dim indicator -1"))
}

/// Isotypic projection of the left-regular representation for the given
/// complex constituents, restricted to a generic symmetric element of the
/// right-regular algebra: returns (number of eigenvalue clusters, cluster size).
fn regular_split(t: &MultiplicationTable, ct: &CharacterTable, constituents: &[usize], rng: &mut ChaCha8Rng) -> (usize, usize) {
    let n = t.order();
    let mut proj = DMatrix::<Scalar>::zeros(n, n);
    for &i in constituents {
        let d = ct.dims[i] as f64;
        for g in 0..n {
            let chi = ct.characters[i][ct.classes.class_of[g]].conj() * d / n as f64;
            for h in 0..n {
                proj[(t.mul(g, h), h)] += chi;
            }
        }
    }
    let proj = proj.map(|z| z.re);
    let eig = proj.symmetric_eigen();
    let cols: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    let basis = DMatrix::from_fn(n, cols.len(), |r, c| eig.eigenvectors[(r, cols[c])]);
    let mut x = DMatrix::<f64>::zeros(n, n);
    for g in 0..n {
        let gi = t.inverse(g);
        if gi < g {
            continue;
        }
        let a: f64 = rng.random_range(-1.0..1.0);
        for s in if gi == g { vec![g] } else { vec![g, gi] } {
            let si = t.inverse(s);
            for h in 0..n {
                x[(t.mul(h, si), h)] += a;
            }
        }
    }
    let restricted = basis.transpose() * x * &basis;
    let mut values: Vec<f64> = restricted.symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut clusters: Vec<usize> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for v in values {
        if v - last > 1e-7 {
            clusters.push(0);
        }
        *clusters.last_mut().unwrap() += 1;
        last = v;
    }
    let size = clusters[0];
    assert!(clusters.iter().all(|&c| c == size), "uneven clusters {clusters:?}");
    (clusters.len(), size)
}

fn regular_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut checked = 0;
    for spec in catalog(FieldTag::Real) {
        let g = build_group(&spec).unwrap();
        if g.order() > 12 {
            continue;
        }
        let ct = character_table(g.table()).unwrap();
        for rec in irreps_over_field(&ct, FieldTag::Real).unwrap() {
            let (copies, size) = regular_split(g.table(), &ct, &rec.constituents, &mut rng);
            check((copies, size) == (rec.regular_multiplicity, rec.dim), || {
                format!("{} {}: oracle {copies}x{size}, table {}x{}", spec.name(), rec.name, rec.regular_multiplicity, rec.dim)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} real irreducibles match the regular-representation oracle"))
}

fn pairing_equivariance() -> Outcome {
    let policy = TolerancePolicy::default();
    let mut checks = 0usize;
    for spec in all_catalog() {
        let g = build_group(&spec).unwrap();
        for seed in 0..50 {
            let orbits = sample_orbits(&g, 2, seed, &policy).map_err(|e| format!("{}: {e}", spec.name()))?;
            let action = union_action(&orbits, &policy, false).map_err(|e| format!("{}: {e}", spec.name()))?;
            let beta = orbit_pairing(&orbits[0], &orbits[1], &policy).unwrap();
            let m = action.orbit_size;
            for sigma in action.group.elements() {
                for x in 0..m {
                    check(sigma.image(m + beta[x]) - m == beta[sigma.image(x)], || {
                        format!("{} seed {seed}: violation at point {x}", spec.name())
                    })?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} checks, zero violations"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("gram label counts for C_n and D_n", gram_label_counts),
        ("G1 vs G2 label counts", g1_g2_labels),
        ("Q8 orbit symmetry excess", q8_symmetry_excess),
        ("one-orbit abstract recovery over C", one_orbit_abstract_recovery),
        ("two-orbit real recovery of C_n", two_orbit_real_recovery),
        ("threshold reproduction", threshold_reproduction),
        ("concrete round trip", concrete_round_trip),
        ("ambiguity detection", ambiguity_detection),
        ("character table properties", character_properties),
        ("real regular-representation oracle", regular_oracle),
        ("pairing equivariance", pairing_equivariance),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
