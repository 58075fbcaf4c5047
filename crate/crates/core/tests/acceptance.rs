// One line per criterion; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use locmod::resolution::{self, RelationFamily};
use locmod::schemes::{self, ChainSpec};
use locmod::toric::{self, CharacterData};
use locmod::verification::{self, CheckConfig, CheckParams};

struct Line {
    ok: bool,
    detail: String,
}

fn run(name: &str, params: CheckParams, seed: Option<u64>) -> bool {
    let c = CheckConfig { check: name.into(), params, seed, max_pairs: None };
    match verification::run_check(&c) {
        Ok(o) => o.verdict,
        Err(e) => {
            eprintln!("  {name}: {e}");
            false
        }
    }
}

fn nrn(n: usize, r: usize, big_n: usize) -> CheckParams {
    CheckParams { n: Some(n), r: Some(r), big_n: Some(big_n), ..Default::default() }
}

fn within(t: Duration, secs: f64) -> bool {
    t.as_secs_f64() < secs
}

fn c1() -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for (g, want) in [(1usize, 1usize), (2, 5), (3, 12)] {
        let t = Instant::now();
        let rep = resolution::sigma_fiber_freecount(g).expect("fiber");
        let el = t.elapsed();
        let tri = g * (g + 1) / 2;
        let fams = [RelationFamily::First, RelationFamily::Second, RelationFamily::Third].map(|f| rep.consumed(f));
        ok &= rep.free_count == want && rep.consistent && fams == [tri, tri, tri] && within(el, 5.0);
        parts.push(format!("g={g}: {} (log {:?}, {:.2}s)", rep.free_count, fams, el.as_secs_f64()));
    }
    Line { ok, detail: parts.join("; ") }
}

fn c2() -> Line {
    let t = Instant::now();
    let mut ok = true;
    let mut cases = 0;
    for n in 2..=4u32 {
        for r in 1..n {
            for big_n in 1..=2 {
                let d = CharacterData::new(n, r, big_n).expect("data");
                let k = toric::kernel_is_torus_check(&d).expect("kernel");
                let q = toric::quotient_by_subtorus_check(&d).expect("quotient");
                let col = locmod::algebra::IntMatrix::column(&k.coords);
                ok &= k.verdict && q.verdict && k.snf.verify(&col);
                cases += 1;
            }
        }
    }
    let el = t.elapsed();
    ok &= within(el, 30.0);
    Line { ok, detail: format!("{cases} cases, {:.2}s < 30s", el.as_secs_f64()) }
}

fn c3() -> Line {
    let t = Instant::now();
    let ok = [(2, 1), (2, 2), (3, 1)].iter().all(|&(n, big_n)| run("open_cell", nrn(n, 1, big_n), None));
    let el = t.elapsed();
    Line { ok: ok && within(el, 120.0), detail: format!("(2,1) (2,2) (3,1), {:.2}s < 120s", el.as_secs_f64()) }
}

fn c4() -> Line {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [vec![1, 1], vec![1, 2], vec![2, 1]] {
        let n: usize = d.iter().sum();
        let spec = ChainSpec::unitary(n, 1, d.clone()).expect("spec");
        for q in [5u32, 7] {
            let rep = verification::normal_form_round_trips(&spec, q, 100, 4000 + q as u64).expect("round trips");
            ok &= rep.successes == 100 && rep.chart_members == 100;
        }
        let census = verification::normal_form_census(&spec, 2, 16).expect("census");
        ok &= census.failures == 0 && census.in_chart > 0;
        parts.push(format!("d={d:?}: F2 census {}/{} ok", census.successes, census.in_chart));
    }
    Line { ok, detail: format!("200 round trips per spec; {}", parts.join("; ")) }
}

fn c5() -> Line {
    let t = Instant::now();
    let mut ok = true;
    let mut cases = 0;
    for n in 2..=3 {
        for r in 1..n {
            for big_n in 1..=2 {
                ok &= run("generic_smoothness_mu", nrn(n, r, big_n), None);
                cases += 1;
            }
        }
    }
    for d in [vec![1, 1], vec![1, 2], vec![2, 1], vec![1, 1, 1]] {
        let n: usize = d.iter().sum();
        for r in 1..n {
            ok &= run("generic_smoothness_lm", CheckParams { n: Some(n), r: Some(r), d: Some(d.clone()), ..Default::default() }, None);
            cases += 1;
        }
    }
    let el = t.elapsed();
    Line { ok: ok && within(el, 300.0), detail: format!("{cases} specs, {:.1}s < 300s", el.as_secs_f64()) }
}

fn c6() -> Line {
    let mut ok = true;
    for n in 2..=3 {
        for r in 1..n {
            for big_n in 1..=2 {
                ok &= run("cyclic_shift", nrn(n, r, big_n), None);
            }
        }
    }
    for g in 1..=2 {
        for big_n in 1..=2 {
            ok &= run("symplectic_involution", CheckParams { g: Some(g), big_n: Some(big_n), ..Default::default() }, None);
        }
    }
    Line { ok, detail: "cyclic shifts n<=3 N<=2; involution g<=2 N<=2".into() }
}

fn c7() -> Line {
    let torsion = run("kill_torsion", CheckParams::default(), None);
    let charts = resolution::diagonal_tower(2).expect("tower");
    let (total, nonempty, principal) = resolution::tower_summary(&charts).expect("summary");
    let products = (1..=3).all(|g| resolution::diagonal_chart_ideals(g).and_then(|d| d.products_hold()).unwrap_or(false));
    let ok = torsion && nonempty == principal && nonempty > 0 && products;
    Line { ok, detail: format!("torsion corpus {torsion}; tower {principal}/{nonempty} principal of {total} charts; products g<=3 {products}") }
}

fn c8() -> Line {
    let s211 = toric::enumerate_index_set(2, 1, 1).expect("S").len();
    let s311 = toric::enumerate_index_set(3, 1, 1).expect("S").len();
    let sizes = s211 == 7 && s311 == 16 && verification::index_set_oracle(2, 1, 1) == 7 && verification::index_set_oracle(3, 1, 1) == 16;
    let spec = ChainSpec::unitary(2, 1, vec![1, 1]).expect("spec");
    let mut counts = Vec::new();
    let mut glued_ok = true;
    for q in [2u32, 3] {
        let g = verification::glued_local_model_count(&spec, q, 0, 12).expect("glued");
        let d = verification::direct_subspace_count(&spec, q, 0).expect("direct");
        glued_ok &= g == d && g == 2 * (q as u64 + 1) - 1;
        counts.push(format!("q={q}: {g}"));
    }
    let gb = schemes::mu_ideal(2, 1, 1).and_then(|m| m.ideal.dimension()).expect("dim");
    let pts = verification::mu_dimension_by_points(2, 1, 1).expect("dim");
    let ok = sizes && glued_ok && gb == 4 && pts == 4;
    Line { ok, detail: format!("|S| {s211},{s311}; glued {}; dim {gb} (Groebner) {pts} (points)", counts.join(" ")) }
}

type Criterion = (&'static str, fn() -> Line);

fn main() {
    let criteria: [Criterion; 8] = [
        ("symplectic fibre census", c1),
        ("torus-kernel criterion", c2),
        ("open-cell factorization", c3),
        ("chain normal form", c4),
        ("generic-fibre smoothness", c5),
        ("symmetry equivariance", c6),
        ("blowup and saturation", c7),
        ("oracle cross-checks", c8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let line = f();
        let verdict = if line.ok { "PASS" } else { "FAIL" };
        if !line.ok {
            failed += 1;
        }
        println!("criterion {} [{verdict}] {name}: {} ({:.1}s)", k + 1, line.detail, t.elapsed().as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
