//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{Duration, Instant};

use convexity::construct::CATALOG;
use convexity::fractal::{
    apollonian_packing, box_dimension, cap_count, dyadic_scales, face_census, fibonacci_sphere,
    residual_sample, sierpinski_sphere, Vec3,
};
use convexity::oracle::{check_lemma1, random_pair};
use convexity::{
    build_pattern, catalog, face_pattern, sample_probe, ConvexBody, Direction, Pattern,
};

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn patterns() -> Vec<Pattern> {
    Pattern::all_up_to(5)
        .into_iter()
        .filter(|p| !p.dims().is_empty())
        .collect()
}

fn dims_of(body: &ConvexBody) -> std::result::Result<Vec<usize>, String> {
    let (p, _) = face_pattern(body).map_err(|e| e.to_string())?;
    Ok(p.dims().iter().copied().collect())
}

fn near_integer_gap(x: f64) -> f64 {
    (x - x.round()).abs()
}

fn pattern_construction() -> Check {
    let start = Instant::now();
    let all = patterns();
    ensure(all.len() == 31, || {
        format!("{} patterns enumerated", all.len())
    })?;
    for d in &all {
        let expected: Vec<usize> = std::iter::once(0).chain(d.dims().iter().copied()).collect();
        let found = dims_of(&build_pattern(d))?;
        ensure(found == expected, || format!("{d}: found {found:?}"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("31 patterns exact in {t:.2?}"))
}

fn catalog_patterns() -> Check {
    for (name, want) in [
        ("disk", vec![0, 2]),
        ("triangle", vec![0, 1, 2]),
        ("ball3", vec![0, 3]),
        ("tetrahedron", vec![0, 1, 2, 3]),
    ] {
        let got = dims_of(&catalog(name).map_err(|e| e.to_string())?)?;
        ensure(got == want, || format!("{name}: {got:?}"))?;
    }
    Ok("disk, triangle, ball3, tetrahedron exact".into())
}

fn lemma_suite() -> Check {
    let start = Instant::now();
    let mut faces = 0;
    let mut worst = 0.0f64;
    for (dim, max_vertices, seeds) in [(3, 8, 0..100u64), (4, 6, 0..20u64)] {
        for seed in seeds {
            let (p, q) = random_pair(seed, dim, max_vertices).map_err(|e| e.to_string())?;
            let d = check_lemma1(&p, &q).map_err(|e| format!("R^{dim} seed {seed}: {e}"))?;
            faces += d.len();
            worst = d.iter().map(|x| x.residual).fold(worst, f64::max);
        }
    }
    ensure(worst <= 1e-9, || format!("residual {worst:e}"))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(300), || format!("took {t:?}"))?;
    Ok(format!(
        "120 pairs, {faces} faces, max residual {worst:.1e}, {t:.2?}"
    ))
}

fn exposed_translate() -> Check {
    let mut checked = 0;
    for d in patterns() {
        let c = build_pattern(&d);
        let ConvexBody::Sum { left, right } = &c else {
            continue;
        };
        let (ConvexBody::Ball { dim: n, .. }, ConvexBody::Embed { inner, .. }) =
            (&**left, &**right)
        else {
            return Err(format!("{d}: unexpected composition"));
        };
        let n = *n;
        let mut e = vec![0.0; n];
        e[n - 1] = 1.0;
        let h = c
            .support_value(&Direction::new(e.clone()))
            .map_err(|x| x.to_string())?;
        ensure(h == 1.0, || format!("{d}: support {h}"))?;
        let face = c
            .exposed_face(&Direction::new(e))
            .map_err(|x| x.to_string())?;
        ensure(face.body_dim() == inner.body_dim(), || {
            format!("{d}: face dim {}", face.body_dim())
        })?;
        // Reference support of {e} + Q': u_n + h_Q(u restricted to Q's coordinates).
        let m = inner.ambient_dim();
        for i in 0..200u64 {
            let u = convexity::rng::CounterRng::new(i).unit_vector(0, n);
            let hq = inner
                .support_value(&Direction::new(u[..m].to_vec()))
                .unwrap_or(0.0);
            let want = u[n - 1] + hq;
            let got = face
                .support_value(&Direction::new(u))
                .map_err(|x| x.to_string())?;
            ensure((got - want).abs() <= 1e-9, || {
                format!("{d}: support {got} vs {want}")
            })?;
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} sums: face along the last axis is the translate"
    ))
}

fn spectrahedron() -> Check {
    let s = ConvexBody::spectrahedron(3).map_err(|e| e.to_string())?;
    ensure(s.body_dim() == 5, || format!("dimension {}", s.body_dim()))?;
    let dims = dims_of(&s)?;
    ensure(dims == [0, 2, 5], || format!("pattern {dims:?}"))?;
    let hist = sample_probe(&s, 10_000, 0).map_err(|e| e.to_string())?;
    ensure(hist.keys().eq([0].iter()), || format!("histogram {hist:?}"))?;
    Ok("dimension 5, pattern {0,2,5}, probe sees only points".into())
}

fn fixtures() -> Vec<(String, ConvexBody)> {
    let mut v: Vec<(String, ConvexBody)> = CATALOG
        .iter()
        .map(|n| (n.to_string(), catalog(n).unwrap()))
        .collect();
    v.push((
        "spectrahedron3".into(),
        ConvexBody::spectrahedron(3).unwrap(),
    ));
    v
}

fn sampling_consistency() -> Check {
    let mut violations = Vec::new();
    let mut seen: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for (name, body) in fixtures() {
        let dims: BTreeSet<usize> = dims_of(&body)?.into_iter().collect();
        for seed in 0..10 {
            let hist = sample_probe(&body, 10_000, seed).map_err(|e| e.to_string())?;
            for d in hist.keys() {
                seen.entry(name.clone()).or_default().insert(*d);
                if !dims.contains(d) {
                    violations.push(format!("{name} seed {seed} dim {d}"));
                }
            }
        }
    }
    ensure(violations.is_empty(), || {
        format!("violations: {violations:?}")
    })?;
    Ok(format!(
        "{} fixtures x 10 seeds x 10^4 directions, 0 violations",
        seen.len()
    ))
}

fn fractal_dimensions() -> Check {
    let start = Instant::now();
    let sier = sierpinski_sphere(1_000_000, 0).map_err(|e| e.to_string())?;
    let fs = box_dimension(&sier, &dyadic_scales(3, 9)).map_err(|e| e.to_string())?;
    ensure((1.50..=1.66).contains(&fs.slope) && fs.r2 >= 0.995, || {
        format!("sierpinski slope {:.4} r2 {:.4}", fs.slope, fs.r2)
    })?;
    let packing = apollonian_packing(8).map_err(|e| e.to_string())?;
    let res = residual_sample(&packing, 300_000, 0).map_err(|e| e.to_string())?;
    let fa = box_dimension(&res.points, &dyadic_scales(3, 9)).map_err(|e| e.to_string())?;
    ensure((1.20..=1.42).contains(&fa.slope) && fa.r2 >= 0.99, || {
        format!("apollonian slope {:.4} r2 {:.4}", fa.slope, fa.r2)
    })?;
    for s in [fs.slope, fa.slope] {
        ensure(near_integer_gap(s) >= 0.15, || {
            format!("slope {s:.4} within 0.15 of an integer")
        })?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(600), || format!("took {t:?}"))?;
    Ok(format!(
        "sierpinski {:.4} (r2 {:.4}), apollonian depth 8 {:.4} (r2 {:.4}, reference 1.3057, diff {:+.3}), {t:.1?}",
        fs.slope, fs.r2, fa.slope, fa.r2, fa.slope - 1.3057
    ))
}

fn gasket_hull() -> Check {
    for depth in 0..=6 {
        let p = apollonian_packing(depth).map_err(|e| e.to_string())?;
        let c = face_census(&p).map_err(|e| e.to_string())?;
        ensure(c.proper_dims == [0, 2], || {
            format!("depth {depth}: dims {:?}", c.proper_dims)
        })?;
        ensure(
            c.disk_faces == cap_count(depth) && c.disk_faces == p.len(),
            || format!("depth {depth}: {} disks for {} caps", c.disk_faces, p.len()),
        )?;
    }
    Ok(format!(
        "depths 0-6: dims {{0,2}}, disks = caps (4..{})",
        cap_count(6)
    ))
}

fn controls() -> Check {
    let n = 1_000_000;
    let circle: Vec<Vec3> = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            [t.cos(), t.sin(), 0.0]
        })
        .collect();
    let fc = box_dimension(&circle, &dyadic_scales(3, 9)).map_err(|e| e.to_string())?;
    let fs = box_dimension(&fibonacci_sphere(4_000_000), &dyadic_scales(2, 7))
        .map_err(|e| e.to_string())?;
    ensure((fc.slope - 1.0).abs() <= 0.05, || {
        format!("circle {:.4}", fc.slope)
    })?;
    ensure((fs.slope - 2.0).abs() <= 0.05, || {
        format!("sphere {:.4}", fs.slope)
    })?;
    Ok(format!("circle {:.4}, sphere {:.4}", fc.slope, fs.slope))
}

fn cli(args: &[&str]) -> std::result::Result<(), String> {
    let inv = convexity::cli::invoke(std::iter::once("convexity").chain(args.iter().copied()));
    ensure(inv.code == 0, || {
        format!("{args:?} exited {}: {:?}", inv.code, inv.message)
    })
}

/// Writes the artifacts of criteria 1, 3, 6 and 7 into `dir`.
fn artifacts(dir: &Path) -> std::result::Result<(), String> {
    let p = |name: String| dir.join(name).display().to_string();
    for d in patterns() {
        let tag = d
            .dims()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",");
        cli(&[
            "build",
            "--pattern",
            &tag,
            "--verify",
            "--out",
            &p(format!("body_{tag}.json")),
        ])?;
    }
    cli(&[
        "lemma-check",
        "--seed-range",
        "0..99",
        "--dim",
        "3",
        "--max-vertices",
        "8",
        "--out",
        &p("lemma3.json".into()),
    ])?;
    cli(&[
        "lemma-check",
        "--seed-range",
        "0..19",
        "--dim",
        "4",
        "--max-vertices",
        "6",
        "--out",
        &p("lemma4.json".into()),
    ])?;
    for name in CATALOG {
        for seed in 0..10 {
            cli(&[
                "probe",
                "--fixture",
                name,
                "--samples",
                "10000",
                "--seed",
                &seed.to_string(),
                "--out",
                &p(format!("probe_{name}_{seed}.json")),
            ])?;
        }
    }
    let sier = p("sierpinski.csv".into());
    cli(&[
        "fractal",
        "--kind",
        "sierpinski",
        "--points",
        "1000000",
        "--seed",
        "0",
        "--out",
        &sier,
    ])?;
    cli(&[
        "boxdim",
        "--in",
        &sier,
        "--scales",
        "3..9",
        "--out",
        &p("sierpinski_fit.json".into()),
    ])?;
    let gasket = p("gasket.csv".into());
    cli(&[
        "fractal", "--kind", "gasket", "--depth", "8", "--points", "300000", "--seed", "0",
        "--out", &gasket,
    ])?;
    cli(&[
        "boxdim",
        "--in",
        &gasket,
        "--scales",
        "3..9",
        "--out",
        &p("gasket_fit.json".into()),
    ])?;
    Ok(())
}

fn determinism() -> Check {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    artifacts(a.path())?;
    artifacts(b.path())?;
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    for n in &names {
        let x = std::fs::read(a.path().join(n)).map_err(|e| e.to_string())?;
        let y = std::fs::read(b.path().join(n)).map_err(|e| format!("{n:?}: {e}"))?;
        ensure(x == y, || format!("{n:?} differs between runs"))?;
    }
    Ok(format!(
        "{} output files identical across two runs",
        names.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        (
            "pattern construction for all 31 patterns",
            pattern_construction,
        ),
        ("catalog patterns", catalog_patterns),
        ("Minkowski face decomposition suite", lemma_suite),
        ("exposed face {e}+Q' of constructed sums", exposed_translate),
        ("trace-one spectrahedron of order 3", spectrahedron),
        (
            "sampled dimensions within face patterns",
            sampling_consistency,
        ),
        ("fractal box dimensions non-integer", fractal_dimensions),
        ("gasket hull faces", gasket_hull),
        ("smooth controls", controls),
        ("determinism of output files", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome =
            std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
