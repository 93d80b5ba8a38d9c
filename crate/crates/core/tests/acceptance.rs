use std::collections::HashSet;
use std::io::Write;
use std::time::{Duration, Instant};

use chromatic::flip::{is_closed_family, SubgraphSpec};
use chromatic::matching::{
    conducting_certificate, hubs, path_to_hub, search_hub_path, standard_matching_census, ConductingType,
    PathClass, SplitChooser, StandardMatching,
};
use chromatic::osp::{enumerate_osps, level, osp_count, Prefix};
use chromatic::protocol::{brute_force_one_round, campaign};
use chromatic::wsb6::{self, VerifyOptions};
use chromatic::{matching::osp_step, Color, ColorSet};

// Direct writes to stderr bypass libtest capture.
fn report(k: u32, name: &str, ok: bool, took: Duration, detail: String) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "acceptance {k} [{tag}] {name} ({:.1}s): {detail}",
        took.as_secs_f64()
    );
}

fn fubini(n: usize) -> Vec<u64> {
    // a(m) = sum_{k=1..m} C(m,k) a(m-k), a(0) = 1
    let mut a = vec![1u64];
    for m in 1..=n + 1 {
        let mut c = 1u64;
        let mut s = 0;
        for k in 1..=m {
            c = c * (m - k + 1) as u64 / k as u64;
            s += c * a[m - k];
        }
        a.push(s);
    }
    a
}

#[test]
fn criterion_1_counts() {
    let t = Instant::now();
    let counts: Vec<u64> = (1..=5).map(osp_count).collect();
    let listed: Vec<u64> = (1..=5u8)
        .map(|n| enumerate_osps(ColorSet::full(n)).unwrap().len() as u64)
        .collect();
    let oracle: Vec<u64> = (1..=5).map(|n| fubini(n)[n + 1]).collect();
    let ok = counts == [3, 13, 75, 541, 4683] && counts == listed && counts == oracle && t.elapsed().as_secs() < 1;
    report(1, "enumeration counts", ok, t.elapsed(), format!("f = {counts:?}"));
    assert!(ok);
}

#[test]
fn criterion_2_exceptional_tables() {
    let t = Instant::now();
    let exc = wsb6::exceptional_vertices();
    let w = wsb6::w_set();
    let distinct: HashSet<String> = exc.iter().map(|v| format!("{v:?}")).collect();
    let ortho = wsb6::gamma5().osps.iter().filter(|s| wsb6::critical(s).is_some()).count();
    let ok = exc.len() == 136 && distinct.len() == 136 && w.len() == 42 && ortho == 42;
    report(
        2,
        "exceptional tables",
        ok,
        t.elapsed(),
        format!("{} exceptional vertices, |W| = {}", exc.len(), w.len()),
    );
    assert!(ok);
}

#[test]
fn criterion_3_standard_matchings() {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for n in 1..=5 {
        let c = standard_matching_census(n).unwrap();
        ok &= c.ok() && c.full_critical.len() == 1;
        detail.push(format!(
            "n={n}: {} critical, {} V, {} prefixes, {} violations",
            c.full_critical.len(),
            c.subsets_checked,
            c.prefix_classes,
            c.violations.len()
        ));
    }
    ok &= t.elapsed().as_secs() < 60;
    report(3, "standard matching census", ok, t.elapsed(), detail.join("; "));
    assert!(ok);
}

#[test]
fn criterion_4_hub_paths() {
    let t = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 4..=5u8 {
        let sigma: Vec<Color> = (0..=n).collect();
        let m = StandardMatching::new(&sigma);
        let (rho, nu) = hubs(n, &sigma);
        for s in enumerate_osps(ColorSet::full(n)).unwrap() {
            if level(&s, &sigma).is_none() {
                continue;
            }
            checked += 1;
            let p = match path_to_hub(&s, &sigma, &SplitChooser::Smallest) {
                Ok(p) => p,
                Err(e) => {
                    bad.push(format!("{s}: {e}"));
                    continue;
                }
            };
            let want = if s == rho || s == nu {
                PathClass::Empty
            } else {
                PathClass::WeaklySemiAugmenting
            };
            if (*p.end() != rho && *p.end() != nu) || p.classify(&m, osp_step) != want {
                bad.push(s.to_string());
            }
        }
    }
    // n = 2: (1|0|2) is the only dead end
    let sigma = [0, 1, 2];
    let m = StandardMatching::new(&sigma);
    let (rho, nu) = hubs(2, &sigma);
    let mut stuck = Vec::new();
    for s in enumerate_osps(ColorSet::full(2)).unwrap() {
        if level(&s, &sigma).is_some() && s != rho && s != nu && search_hub_path(&s, &m, &[rho, nu]).is_none() {
            stuck.push(s.to_string());
        }
    }
    let ok = bad.is_empty() && stuck == ["1|0|2"] && t.elapsed().as_secs() < 300;
    report(
        4,
        "paths to hubs",
        ok,
        t.elapsed(),
        format!("{checked} simplices, {} failures; n=2 dead ends {stuck:?}", bad.len()),
    );
    assert!(ok, "{:?}", &bad[..bad.len().min(5)]);
}

fn is_full(p: &[ColorSet], v: ColorSet) -> bool {
    p.iter().fold(ColorSet::EMPTY, |s, &b| s.union(b)) == v
}

#[test]
fn criterion_5_conducting() {
    let t = Instant::now();
    let mut certs = 0;
    let mut failures = Vec::new();
    let run = |n: Color, spec: SubgraphSpec, kind: ConductingType| match conducting_certificate(n, &spec, kind) {
        Ok(c) if c.ok() => None,
        Ok(c) => Some(format!("{spec:?}: {:?}", &c.failures[..c.failures.len().min(2)])),
        Err(e) => Some(format!("{spec:?}: {e}")),
    };
    for n in 3..=4 {
        certs += 1;
        failures.extend(run(n, SubgraphSpec::Full, ConductingType::First));
    }
    for n in 4..=5u8 {
        for v in ColorSet::full(n).subsets().filter(|v| !v.is_empty() && v.len() + 2 <= n as usize) {
            certs += 1;
            failures.extend(run(n, SubgraphSpec::RestrictedV(v), ConductingType::Second));
        }
    }
    // one σ per distinct shape of its prefix family, |S_p| >= 3
    let mut shapes = HashSet::new();
    let mut rows = 0;
    for s in &wsb6::gamma5().osps {
        let v = ColorSet::full(5).minus(s.last());
        let fam = wsb6::prefix_family(s);
        if s.last().len() < 3 || fam.is_empty() {
            continue;
        }
        let shape: Vec<Vec<usize>> = fam.iter().map(|p| p.iter().map(|b| b.len()).collect()).collect();
        if !shapes.insert((v.len(), shape)) {
            continue;
        }
        let fulls = fam.iter().filter(|p| is_full(p, v)).count();
        let mut omega = vec![Prefix::empty()];
        omega.extend(fam.into_iter().map(Prefix));
        if !is_closed_family(&omega, v) {
            failures.push(format!("family of {s} is not closed"));
        }
        // each full prefix leaves one critical simplex of M(Σ)
        let kind = if fulls % 2 == 0 {
            ConductingType::Second
        } else {
            ConductingType::First
        };
        rows += 1;
        certs += 1;
        failures.extend(run(5, SubgraphSpec::RestrictedFamily(v, omega), kind));
    }
    let ok = failures.is_empty() && rows >= 5 && t.elapsed().as_secs() < 1800;
    report(
        5,
        "conducting sweeps",
        ok,
        t.elapsed(),
        format!("{certs} certificates ({rows} prefix families), {} failures", failures.len()),
    );
    assert!(ok, "{:?}", &failures[..failures.len().min(5)]);
}

// Criteria 6 and 7 share one full census run.
#[test]
fn criteria_6_7_main_theorem() {
    let t = Instant::now();
    let r = wsb6::verify_theorem(&VerifyOptions::default()).unwrap();
    let took = t.elapsed();
    let ok6 = r.complete && r.oracle_checked && r.pairs == 4683 * 4683 && r.oracle_mismatches == 0;
    report(
        6,
        "mono membership vs oracle",
        ok6,
        took,
        format!("{} pairs, {} mono, {} disagreements", r.pairs, r.mono, r.oracle_mismatches),
    );

    let table = wsb6::exsimp();
    let mut seen = HashSet::new();
    let disjoint = table.paths.iter().flat_map(|p| p.vertices.iter()).all(|v| seen.insert(*v));
    let augmenting = table.paths.len() == 21
        && table
            .paths
            .iter()
            .all(|p| p.classify(&wsb6::TildeMatching, |v, c| v.flip(c)) == PathClass::Augmenting);
    let ok7 = r.ok()
        && r.tilde_criticals == 42
        && r.tilde_critical_mismatches == 0
        && r.final_criticals == 0
        && r.final_violations == 0
        && r.compliance_failures == 0
        && r.boundary_facet_failures == 0
        && r.samples == 1_000_000
        && r.monochromatic_samples == 0
        && disjoint
        && augmenting;
    report(
        7,
        "main theorem replay",
        ok7,
        took,
        format!(
            "{} criticals before lifting, {} after; {} disjoint augmenting paths; \
             {} boundary facets; {} of {} samples monochromatic",
            r.tilde_criticals,
            r.final_criticals,
            table.paths.len(),
            r.boundary_facets,
            r.monochromatic_samples,
            r.samples
        ),
    );
    assert!(ok6 && ok7, "{:?}", r.witnesses);
}

#[test]
fn criterion_8_protocol() {
    let t = Instant::now();
    let r = campaign(100_000, 1);
    let ok = r.ok() && r.schedules == 100_000 && r.passes == r.schedules && r.relabel_mismatches == 0;
    report(
        8,
        "protocol equivalence",
        ok,
        t.elapsed(),
        format!(
            "{} schedules, {} pass, {} label mismatches, {} relabel mismatches",
            r.schedules, r.passes, r.label_mismatches, r.relabel_mismatches
        ),
    );
    assert!(ok, "{:?}", r.witnesses);
}

#[test]
fn criterion_9_one_round() {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for n in 2..=5 {
        let r = brute_force_one_round(n).unwrap();
        ok &= r.ok() && r.maps == 1 << (n * (n + 1) / 2) && r.exhaustive == (n <= 4);
        if n <= 4 {
            ok &= r.schedules == osp_count(n - 1);
        }
        detail.push(format!("n={n}: {}/{}", r.defeated, r.maps));
    }
    ok &= t.elapsed().as_secs() < 300;
    report(9, "one-round lower bound", ok, t.elapsed(), detail.join(", "));
    assert!(ok);
}
