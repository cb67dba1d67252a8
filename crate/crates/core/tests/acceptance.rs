//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgeneric::cli::file::PointSetFile;
use qgeneric::cli::{cmd_construct, cmd_verify, RunConfig};
use qgeneric::curve::construct_q_generic;
use qgeneric::field::{is_prime, FieldElement, Prime};
use qgeneric::lift::construct_grid;
use qgeneric::quadform::{classify, FormClass, QuadraticForm, RationalForm};
use qgeneric::verify::{is_q_generic, quadric_determinant_vanishes, unique_quadric_through, PointSet};

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome { pass: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { pass: false, detail: detail.into() }
}

fn within(out: Outcome, elapsed: Duration, limit: Option<Duration>) -> Outcome {
    match limit {
        Some(l) if elapsed > l && out.pass => fail(format!("{} but took {:.1?} > {:?}", out.detail, elapsed, l)),
        _ => out,
    }
}

fn primes(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).filter(|&v| is_prime(v))
}

fn sphere_field(d: usize, p: u64) -> QuadraticForm {
    QuadraticForm::sphere(d, Prime::new(p).unwrap()).unwrap()
}

fn c1_finite_field_sizes() -> Outcome {
    let mut cases = 0;
    for d in 2..=4usize {
        for p in primes(5, 97) {
            let q = sphere_field(d, p);
            if !classify(&q, 0).unwrap().is_rich() {
                continue;
            }
            let c = match construct_q_generic(&q, d, 0) {
                Ok(c) => c,
                Err(e) => return fail(format!("d={d} p={p}: {e}")),
            };
            let size = c.points().len() as u64;
            if size != p + 1 - d as u64 {
                return fail(format!("d={d} p={p}: {size} points, expected {}", p + 1 - d as u64));
            }
            let cert = is_q_generic(&c.to_point_set(), &q.into()).unwrap();
            if !cert.is_pass() {
                return fail(format!("d={d} p={p}: {}", cert.status.label()));
            }
            cases += 1;
        }
    }
    ok(format!("{cases} rich (d, p) cases, all of size p+1-d and certified"))
}

fn c2_sphere_exclusion() -> Outcome {
    let mut checked = 0;
    for p in primes(3, 200) {
        for d in 2..=5usize {
            let irreducible = matches!(classify(&sphere_field(d, p), 0).unwrap(), FormClass::IrreducibleRank2 { .. });
            let expected = d == 2 && p % 4 == 3;
            if irreducible != expected {
                return fail(format!("d={d} p={p}: irreducible={irreducible}"));
            }
            checked += 1;
        }
    }
    ok(format!("{checked} (d, p) pairs, odd p <= 200, d in 2..=5"))
}

fn c3_grid(d: usize, min_points: usize) -> Outcome {
    let q = RationalForm::sphere(d).unwrap();
    let g = match construct_grid(100, d, &q, 0) {
        Ok(g) => g,
        Err(e) => return fail(e.to_string()),
    };
    let p = g.prime().get() as i64;
    if g.points().len() < min_points {
        return fail(format!("{} points < {min_points}", g.points().len()));
    }
    if p > 97 || g.points().iter().flatten().any(|&x| x < 1 || x > p) {
        return fail(format!("points leave {{1..{p}}}^{d}"));
    }
    let cert = is_q_generic(&g.to_point_set(), &q.into()).unwrap();
    if !cert.is_pass() {
        return fail(cert.status.label());
    }
    ok(format!("{} points in {{1..{p}}}^{d}, {} subsets certified", g.points().len(), cert.subsets_tested))
}

fn c4_general_forms() -> Outcome {
    let forms = ["1,2,1", "1,1,1;2,2,-1", "1,1,2;2,2,3", "1,1,1;1,2,1;2,2,1", "1,1,1;2,2,1"];
    let mut parts = Vec::new();
    for spec in forms {
        let q = RationalForm::parse(spec, 2).unwrap();
        let g = match construct_grid(200, 2, &q, 0) {
            Ok(g) => g,
            Err(e) => return fail(format!("{spec}: {e}")),
        };
        let p = g.prime().get();
        if g.points().len() as u64 != p - 1 {
            return fail(format!("{spec}: {} points at p={p}", g.points().len()));
        }
        if g.points().iter().flatten().any(|&x| x < 1 || x > 200) {
            return fail(format!("{spec}: point outside [200]^2"));
        }
        let cert = is_q_generic(&g.to_point_set(), &q.into()).unwrap();
        if !cert.is_pass() {
            return fail(format!("{spec}: {}", cert.status.label()));
        }
        parts.push(format!("[{spec}] p={p}"));
    }
    ok(parts.join(" "))
}

fn c5_bezout() -> Outcome {
    for p in [5u64, 13] {
        let q = sphere_field(2, p);
        let c = construct_q_generic(&q, 2, 0).unwrap();
        let pts: Vec<Vec<u64>> = c.points().iter().map(|a| a.residues()).collect();
        let mut worst = 0;
        for a in 0..p {
            for b in 0..p {
                for e in 0..p {
                    let hits = pts
                        .iter()
                        .filter(|v| {
                            let (x, y) = (v[0], v[1]);
                            (x * x + y * y + a + b * x + e * y) % p == 0
                        })
                        .count();
                    worst = worst.max(hits);
                }
            }
        }
        if worst > 3 {
            return fail(format!("p={p}: a sphere quadric meets {worst} points"));
        }
    }
    ok("max incidence 3 over all p^3 shifts for p in {5, 13}")
}

fn rational(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect()
}

/// Integer points of [lo, hi]^d on the quadric Q(x) + <a, x> + c = 0.
fn box_zeros(q: &RationalForm, a: &[i64], c: &BigRational, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let d = q.dim();
    let mut out = Vec::new();
    let mut x = vec![lo; d];
    loop {
        let lin: i64 = a.iter().zip(&x).map(|(u, w)| u * w).sum();
        if (q.evaluate(&rational(&x)) + BigRational::from_integer(BigInt::from(lin)) + c).is_zero() {
            out.push(x.clone());
        }
        let mut k = 0;
        while k < d {
            x[k] += 1;
            if x[k] <= hi {
                break;
            }
            x[k] = lo;
            k += 1;
        }
        if k == d {
            return out;
        }
    }
}

fn c6_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut summary = Vec::new();
    for d in 2..=3usize {
        let forms: Vec<RationalForm> = if d == 2 {
            ["1,1,1;2,2,1", "1,2,1", "1,1,1;2,2,-1", "1,1,2;1,2,1;2,2,3"].iter().map(|s| RationalForm::parse(s, 2).unwrap()).collect()
        } else {
            ["1,1,1;2,2,1;3,3,1", "1,2,1;3,3,1", "1,1,1;2,2,1;3,3,-1", "1,1,1;1,3,2;2,2,3;3,3,1"]
                .iter()
                .map(|s| RationalForm::parse(s, 3).unwrap())
                .collect()
        };
        let (mut done, mut positives, mut planted) = (0, 0, 0);
        while done < 500 {
            let q = &forms[rng.gen_range(0..forms.len())];
            let plant = rng.gen_bool(0.5);
            let pts: Vec<Vec<i64>> = if !plant {
                (0..d + 2).map(|_| (0..d).map(|_| rng.gen_range(-10..=10)).collect()).collect()
            } else {
                let x0: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
                let a: Vec<i64> = (0..d).map(|_| rng.gen_range(-4..=4)).collect();
                let ax0: i64 = a.iter().zip(&x0).map(|(u, w)| u * w).sum();
                let c = -q.evaluate(&rational(&x0)) - BigRational::from_integer(BigInt::from(ax0));
                let zeros = box_zeros(q, &a, &c, -10, 10);
                if zeros.len() < d + 2 {
                    continue;
                }
                let mut chosen = Vec::new();
                let mut pool = zeros;
                for _ in 0..d + 2 {
                    let k = rng.gen_range(0..pool.len());
                    chosen.push(pool.swap_remove(k));
                }
                chosen
            };
            let Ok(h) = unique_quadric_through(&pts[..d + 1], q) else { continue };
            let last = rational(&pts[d + 1]);
            let by_solve = (q.evaluate(&last) + h.evaluate(&last)).is_zero();
            let set = PointSet::grid(d, pts.clone()).unwrap();
            let by_det = quadric_determinant_vanishes(&set, &q.clone().into()).unwrap();
            if by_solve != by_det {
                return fail(format!("d={d}: disagreement on {pts:?} (solve {by_solve}, det {by_det})"));
            }
            positives += by_solve as usize;
            planted += plant as usize;
            done += 1;
        }
        summary.push(format!("d={d}: 500 agree ({planted} planted, {positives} on the quadric)"));
    }
    ok(summary.join("; "))
}

/// Rich per the definition: some basis v1, v2 of F_p^2 with Q(v1) = 0 != Q(v2).
fn brute_rich(q: &QuadraticForm) -> bool {
    let p = q.prime();
    let vecs: Vec<Vec<FieldElement>> =
        p.elements().flat_map(|a| p.elements().map(move |b| vec![a, b])).filter(|v| !v.iter().all(|x| x.is_zero())).collect();
    for v1 in &vecs {
        if !q.evaluate(v1).is_zero() {
            continue;
        }
        for v2 in &vecs {
            let independent = !(v1[0] * v2[1] - v1[1] * v2[0]).is_zero();
            if independent && !q.evaluate(v2).is_zero() {
                return true;
            }
        }
    }
    false
}

fn c7_classification() -> Outcome {
    let mut total = 0;
    for p in [3u64, 5, 7] {
        let prime = Prime::new(p).unwrap();
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    if a == 0 && b == 0 && c == 0 {
                        continue;
                    }
                    let coeffs = [a, b, c].iter().map(|&v| FieldElement::new(v, prime)).collect();
                    let q = QuadraticForm::new(2, prime, coeffs).unwrap();
                    let got = classify(&q, 0).unwrap().is_rich();
                    if got != brute_rich(&q) {
                        return fail(format!("p={p} form {q}: classify rich={got}"));
                    }
                    total += 1;
                }
            }
        }
    }
    ok(format!("{total} nonzero forms over F_3, F_5, F_7"))
}

fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else { return BigInt::zero() };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Lex-first violating subset by naive determinants: hyperplanes first, then quadrics.
fn brute_first_violation(points: &[Vec<i64>], q: &RationalForm) -> Option<Vec<usize>> {
    let d = points[0].len();
    let prim = q.primitive_integer_coeffs();
    let row = |i: usize, with_q: bool| {
        let mut r = Vec::new();
        if with_q {
            r.push(q.evaluate_primitive(&prim, &points[i]));
        }
        r.push(BigInt::one());
        r.extend(points[i].iter().map(|&v| BigInt::from(v)));
        r
    };
    for (k, with_q) in [(d + 1, false), (d + 2, true)] {
        let mut s: Vec<usize> = (0..k).collect();
        loop {
            if bareiss(s.iter().map(|&i| row(i, with_q)).collect()).is_zero() {
                return Some(s);
            }
            let Some(pos) = (0..k).rev().find(|&t| s[t] < points.len() - k + t) else { break };
            s[pos] += 1;
            for t in pos + 1..k {
                s[t] = s[t - 1] + 1;
            }
        }
    }
    None
}

fn verify_file(file: &PointSetFile, dir: &Path, name: &str) -> Result<(String, Vec<usize>), String> {
    let path = dir.join(name);
    std::fs::write(&path, file.to_json()).map_err(|e| e.to_string())?;
    let (_, cert) = cmd_verify(&RunConfig::verify(path)).map_err(|e| e.to_string())?;
    let subset = cert.violation().map(|v| v.subset.clone()).unwrap_or_default();
    Ok((cert.status.label().to_string(), subset))
}

fn expect_violation(file: &PointSetFile, dir: &Path, name: &str, kind: &str, subset: &[usize]) -> Result<(), String> {
    let (got_kind, got_subset) = verify_file(file, dir, name)?;
    if got_kind != kind || got_subset != subset {
        return Err(format!("{name}: got {got_kind} {got_subset:?}, expected {kind} {subset:?}"));
    }
    Ok(())
}

fn c8_negative_controls() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let sphere = RationalForm::sphere(2).unwrap();
    let run = || -> Result<usize, String> {
        // collinear point appended to the n=100 construction
        let mut big = cmd_construct(&RunConfig::construct_grid(2, 100, "sphere")).map_err(|e| e.to_string())?.file;
        let n = big.points.len();
        let extra = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find_map(|(i, j)| {
                let (p0, p1) = (&big.points[i], &big.points[j]);
                let (dx, dy) = (p1[0] - p0[0], p1[1] - p0[1]);
                let g = num_integer::gcd(dx, dy);
                (-100..=100)
                    .map(|t| vec![p0[0] + t * dx / g, p0[1] + t * dy / g])
                    .find(|v| v != p0 && v != p1 && !big.points.contains(v) && v.iter().all(|&c| (1..=100).contains(&c)))
            })
            .ok_or("no collinear grid point")?;
        big.points.push(extra);
        big.certificate = None;
        let expected = brute_first_violation(&big.points, &sphere).ok_or("brute force found no violation")?;
        if expected.len() != 3 || expected[2] != n {
            return Err(format!("collinear control: brute force gives {expected:?}"));
        }
        expect_violation(&big, dir.path(), "collinear.json", "hyperplane_violation", &expected)?;

        // concyclic point appended to a small construction; expected subset from brute force
        let mut small = cmd_construct(&RunConfig::construct_grid(2, 30, "sphere")).map_err(|e| e.to_string())?.file;
        small.certificate = None;
        let m = small.points.len();
        let mut found = None;
        'search: for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let tri = [small.points[i].clone(), small.points[j].clone(), small.points[k].clone()];
                    let h = unique_quadric_through(&tri, &sphere).map_err(|e| e.to_string())?;
                    for x in 1..=30i64 {
                        for y in 1..=30i64 {
                            let v = vec![x, y];
                            if small.points.contains(&v) {
                                continue;
                            }
                            let r = rational(&v);
                            if (sphere.evaluate(&r) + h.evaluate(&r)).is_zero() {
                                found = Some(v);
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        let extra = found.ok_or("no concyclic lattice point found")?;
        small.points.push(extra);
        let expected = brute_first_violation(&small.points, &sphere).ok_or("brute force found no violation")?;
        let kind = if expected.len() == 3 { "hyperplane_violation" } else { "quadric_violation" };
        if kind != "quadric_violation" {
            return Err(format!("concyclic control became collinear at {expected:?}"));
        }
        expect_violation(&small, dir.path(), "concyclic.json", kind, &expected)?;

        // hand-made examples
        let hand = |points: Vec<Vec<i64>>| PointSetFile {
            mode: qgeneric::cli::file::Mode::Grid,
            dim: 2,
            n: None,
            prime: None,
            form: qgeneric::cli::file::form_terms_rational(&sphere),
            points,
            certificate: None,
            tool_version: None,
            seed: None,
        };
        expect_violation(&hand(vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]), dir.path(), "square.json", "quadric_violation", &[0, 1, 2, 3])?;
        expect_violation(&hand(vec![vec![0, 0], vec![1, 1], vec![2, 2]]), dir.path(), "line.json", "hyperplane_violation", &[0, 1, 2])?;
        Ok(4)
    };
    match run() {
        Ok(k) => ok(format!("{k} injected or hand-made violations found at the expected lex-first subset")),
        Err(e) => fail(e),
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Option<u64>);
    let criteria: [Criterion; 9] = [
        ("1 finite-field sizes", c1_finite_field_sizes, Some(120)),
        ("2 sphere exclusion", c2_sphere_exclusion, None),
        ("3a grid n=100 d=2", || c3_grid(2, 96), Some(300)),
        ("3b grid n=100 d=3", || c3_grid(3, 95), Some(300)),
        ("4 general forms n=200", c4_general_forms, None),
        ("5 Bezout bound", c5_bezout, Some(10)),
        ("6 quadric oracle equivalence", c6_oracle_equivalence, None),
        ("7 classification dichotomy", c7_classification, Some(60)),
        ("8 negative controls", c8_negative_controls, None),
    ];
    let mut failures = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        let out = within(out, elapsed, limit.map(Duration::from_secs));
        if !out.pass {
            failures += 1;
        }
        println!("[{}] {name} ({:.2?}): {}", if out.pass { "PASS" } else { "FAIL" }, elapsed, out.detail);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
