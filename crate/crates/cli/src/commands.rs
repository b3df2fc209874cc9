//! Subcommand implementations. All tabular output is CSV with the
//! versioned header line `# pfh-twist-lab v1`; rationals print as `p/q`
//! and floats with 12 significant digits.

use pfh_core::asymptotics::{
    convergence_table, lambda_area, lambda_polygon, length, length_action_sides,
    step2_inequality_holds, DualRegion, KRule,
};
use pfh_core::complex::{d_squared_zero, ChainWindow};
use pfh_core::path::validate;
use pfh_core::profile::load_profile;
use pfh_core::shapes::enumerate_shapes;
use pfh_core::spectral::{c_dk_bracket, c_dk_exact, SpectralTable};
use pfh_core::spectrum::{spec_d, spectrality_check};
use pfh_core::{count_j, index, path_action_breakdown, pick_check, LatticePath, PickOutcome,
    TwistProfile};

pub enum CmdError {
    Violation(String),
    Usage(String),
}

type CmdResult = Result<(), CmdError>;

const HEADER: &str = "# pfh-twist-lab v1";

fn usage<E: std::fmt::Display>(e: E) -> CmdError {
    CmdError::Usage(e.to_string())
}

fn violation<E: std::fmt::Display>(e: E) -> CmdError {
    CmdError::Violation(e.to_string())
}

fn get_profile(spec: &str) -> Result<TwistProfile, CmdError> {
    load_profile(spec).map_err(usage)
}

fn parse_path(text: &str) -> Result<LatticePath, CmdError> {
    LatticePath::parse(text).map_err(usage)
}

fn fmt_f64(x: f64) -> String {
    format!("{:.11e}", x)
}

// ---------------------------------------------------------------------------

pub fn profile_check(file: &str) -> CmdResult {
    let profile = get_profile(file)?;
    let report = profile.check();
    println!("{}", HEADER);
    println!("profile,{}", profile.name());
    println!("I,{}", profile.integral());
    println!("Cal,{}", profile.calabi());
    println!("h1,{}", profile.h1());
    println!("hprime1,{}", profile.hprime1());
    println!("h(-1)=0,{}", report.h_at_minus_one_zero);
    println!("h'(-1)=0,{}", report.hprime_at_minus_one_zero);
    println!("weakly_monotone_convex,{}", report.weakly_monotone_convex);
    println!(
        "strictly_increasing_interior,{}",
        report.strictly_increasing_interior
    );
    println!("rationally_invertible,{}", report.rationally_invertible);
    if report.core_ok() {
        Ok(())
    } else {
        Err(violation("profile invariants violated"))
    }
}

pub fn index_report(path: &str) -> CmdResult {
    let p = parse_path(path)?;
    let bad = p.structural_violations();
    if !bad.is_empty() {
        return Err(violation(bad.join("; ")));
    }
    let r = pfh_core::index::report(&p);
    println!("{}", HEADER);
    println!("path,{}", p.serialize());
    println!("d,{}", p.degree());
    println!("j_plus,{}", r.j_plus);
    println!("j_minus,{}", r.j_minus);
    println!("j,{}", r.j);
    println!("h,{}", r.h_count);
    println!("index,{}", r.index);
    Ok(())
}

pub fn action_report(path: &str, profile_spec: &str) -> CmdResult {
    let profile = get_profile(profile_spec)?;
    let p = parse_path(path)?;
    let issues = validate(&p, &profile);
    if !issues.is_empty() {
        let msgs: Vec<String> = issues.iter().map(|v| v.message.clone()).collect();
        return Err(violation(msgs.join("; ")));
    }
    let av = path_action_breakdown(&p, &profile).map_err(violation)?;
    println!("{}", HEADER);
    println!("path,{}", p.serialize());
    println!("value,{}", av.value);
    println!("start_y,{}", av.breakdown.start_y);
    for (slope, m, a) in &av.breakdown.per_edge {
        println!("edge,({},{})x{},{}", slope.q, slope.p, m, a);
    }
    Ok(())
}

pub fn complex_verify(d: i64, profile_spec: &str) -> CmdResult {
    let profile = get_profile(profile_spec)?;
    let span = 3 * d + 3;
    let window = ChainWindow::build(d, -span - 1, span + 1, &profile).map_err(violation)?;
    println!("{}", HEADER);
    let mut ok = true;
    for k in -span..=(span - 1) {
        let zero = d_squared_zero(&window, k, &profile).map_err(violation)?;
        let gens = window.set(k).len();
        println!("d2,{},{},{},{}", d, k, gens, if zero { "ok" } else { "FAIL" });
        ok &= zero;
    }
    // Differential pairs respect grading and action by construction
    // (loud errors otherwise); all-E cycles must be closed.
    for k in (-span + 1)..=span {
        let dm = window.differential(k, &profile).map_err(violation)?;
        let mut acc = pfh_core::gf2::BitVec::zeros(dm.rows.len());
        for (ci, g) in dm.cols.generators.iter().enumerate() {
            if g.path.is_all_e() {
                acc.xor_assign(&dm.cols_bits[ci]);
            }
        }
        let closed = acc.is_zero();
        println!("allE-cycle,{},{},{}", d, k, if closed { "ok" } else { "FAIL" });
        ok &= closed;
    }
    if ok {
        Ok(())
    } else {
        Err(violation("chain complex verification failed"))
    }
}

pub fn homology(d: i64, profile_spec: &str, span: Option<i64>) -> CmdResult {
    let profile = get_profile(profile_spec)?;
    let span = span.unwrap_or(3 * d + 3);
    let window = ChainWindow::build(d, -span - 1, span + 1, &profile).map_err(violation)?;
    println!("{}", HEADER);
    println!("d,k,rank,minmax");
    for k in -span..=span {
        let rank = window.homology_rank(k, &profile).map_err(violation)?;
        if rank == 1 {
            let mm = window.min_max(k, &profile).map_err(violation)?;
            println!("{},{},{},{}", d, k, rank, mm);
        } else {
            println!("{},{},{},", d, k, rank);
        }
    }
    Ok(())
}

pub fn minmax(d: i64, k: i64, profile_spec: &str) -> CmdResult {
    let profile = get_profile(profile_spec)?;
    let window = ChainWindow::build(d, k - 1, k + 1, &profile).map_err(violation)?;
    let v = window.min_max(k, &profile).map_err(violation)?;
    println!("{}", HEADER);
    println!("d,k,minmax");
    println!("{},{},{}", d, k, v);
    Ok(())
}

pub fn spectral(d: i64, k: Option<i64>, all: bool, profile_spec: &str, method: &str) -> CmdResult {
    let profile = get_profile(profile_spec)?;
    let ks: Vec<i64> = if all {
        let span = 3 * d + 3;
        (-span..=span).filter(|k| (k - d).rem_euclid(2) == 0).collect()
    } else {
        vec![k.ok_or_else(|| CmdError::Usage("need --k or --all".into()))?]
    };
    println!("{}", HEADER);
    println!("d,k,value,lo,hi,method");
    for k in ks {
        match method {
            "brute" => {
                let v = c_dk_exact(d, k, &profile).map_err(violation)?;
                println!("{},{},{},{},{},brute", d, k, v, v, v);
            }
            "bracket" => {
                let b = c_dk_bracket(d, k, &profile).map_err(violation)?;
                println!("{},{},,{},{},bracket", d, k, b.lo, b.hi);
            }
            other => return Err(CmdError::Usage(format!("unknown method {}", other))),
        }
    }
    Ok(())
}

pub fn converge(profile_spec: &str, dmax: i64, rule: &str, cap: i64) -> CmdResult {
    let profile = get_profile(profile_spec)?;
    let rule = KRule::parse(rule).ok_or_else(|| {
        CmdError::Usage(format!(
            "bad rule {:?}; expected k=-d, step1-grading, or residue=<r>",
            rule
        ))
    })?;
    let d_list: Vec<i64> = (1..=dmax).collect();
    let rows = convergence_table(&profile, &d_list, rule, cap).map_err(violation)?;
    println!("{}", HEADER);
    println!("d,k,estimate,err,lo,hi");
    for r in rows {
        println!(
            "{},{},{},{},{},{}",
            r.d,
            r.k,
            fmt_f64(r.estimate),
            fmt_f64(r.err),
            fmt_f64(r.lo),
            fmt_f64(r.hi)
        );
    }
    Ok(())
}

/// Small deterministic generator for sample paths (plain LCG).
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n.max(1)
    }
}

pub fn isoperimetric(profile_spec: &str, paths: u64, seed: u64) -> CmdResult {
    let profile = get_profile(profile_spec)?;
    println!("{}", HEADER);
    let region = DualRegion::new(&profile);
    let target = 2.0 * (2.0 * profile.h1().to_f64() - profile.integral().to_f64());
    let boundary = region.boundary_length();
    let rel1 = ((boundary - target) / target).abs();
    println!("boundary_length,{},{},{}", fmt_f64(boundary), fmt_f64(target), fmt_f64(rel1));
    let mut ok = rel1 <= 1e-6;

    let top = profile.hprime1_int().map_err(violation)?;
    let mut shapes_by_d = Vec::new();
    for d in 1..=8 {
        shapes_by_d.push(enumerate_shapes(d, top));
    }
    let mut rng = Lcg(seed.wrapping_mul(2) + 1);
    let area_omega = region.area().to_f64();
    let mut worst_identity: f64 = 0.0;
    let mut iso_violations = 0u64;
    let mut step2_violations = 0u64;
    for _ in 0..paths {
        let d = 1 + rng.below(8) as i64;
        let shapes = &shapes_by_d[(d - 1) as usize];
        let shape = &shapes[rng.below(shapes.len() as u64) as usize];
        let y = rng.below(11) as i64 - 5;
        let path = shape.all_e_path(y);
        let (measured, predicted) = length_action_sides(&path, &profile).map_err(violation)?;
        let scale = predicted.abs().max(1.0);
        worst_identity = worst_identity.max((measured - predicted).abs() / scale);
        let lambda = lambda_polygon(&path);
        let l = length(&lambda, &region);
        let a = lambda_area(&path);
        if l * l < 4.0 * area_omega * a - 1e-6 {
            iso_violations += 1;
        }
        if !step2_inequality_holds(&path, &profile).map_err(violation)? {
            step2_violations += 1;
        }
    }
    println!("length_action_worst_rel,{}", fmt_f64(worst_identity));
    println!("isoperimetric_violations,{}", iso_violations);
    println!("step2_violations,{}", step2_violations);
    ok &= worst_identity <= 1e-6 && iso_violations == 0 && step2_violations == 0;
    if ok {
        Ok(())
    } else {
        Err(violation("isoperimetric identities failed"))
    }
}

pub fn spectrum(d: i64, profile_spec: &str, window: &str) -> CmdResult {
    let profile = get_profile(profile_spec)?;
    let (a, b) = window
        .split_once(',')
        .and_then(|(a, b)| Some((a.trim().parse::<f64>().ok()?, b.trim().parse::<f64>().ok()?)))
        .ok_or_else(|| CmdError::Usage("window must be \"a,b\"".into()))?;
    if a > b {
        return Err(CmdError::Usage("window must have a <= b".into()));
    }
    let w = spec_d(&profile, d, a, b).map_err(violation)?;
    println!("{}", HEADER);
    println!("d,value");
    for v in &w.values {
        println!("{},{}", d, v);
    }
    if let Some(g) = w.min_gap {
        println!("# min_gap,{}", fmt_f64(g));
    }
    Ok(())
}

fn parse_disc_twist(spec: &str) -> Result<pfh_core::DiscTwist, CmdError> {
    if let Some(k) = spec.strip_prefix("r^-") {
        let k: u32 = k.parse().map_err(usage)?;
        return Ok(pfh_core::DiscTwist::inverse_power(k));
    }
    if let Some(c) = spec.strip_suffix("(1-r)") {
        let c: f64 = if c.is_empty() { 1.0 } else { c.parse().map_err(usage)? };
        return Ok(pfh_core::DiscTwist::linear(c));
    }
    Err(CmdError::Usage(format!(
        "unknown twist spec {:?}; use r^-<k> or <c>(1-r)",
        spec
    )))
}

pub fn infinite_twist(f: &str, i_list: &[u32], dmax: i64) -> CmdResult {
    let tw = parse_disc_twist(f)?;
    let mut d_list = Vec::new();
    let mut d = 4;
    while d <= dmax {
        d_list.push(d);
        d *= 2;
    }
    if d_list.is_empty() && dmax >= 1 {
        d_list.push(dmax);
    }
    let reports =
        pfh_core::demo::growth_report(&tw, i_list, &d_list, 10).map_err(violation)?;
    println!("{}", HEADER);
    println!("i,Cal_i,d,slope,lo,hi");
    for rep in &reports {
        if rep.cells.is_empty() {
            println!("{},{},,,,", rep.i, fmt_f64(rep.cal_disc));
        }
        for cell in &rep.cells {
            let slope = cell
                .brute_slope
                .map(fmt_f64)
                .unwrap_or_else(|| fmt_f64(0.5 * (cell.slope_lo + cell.slope_hi)));
            println!(
                "{},{},{},{},{},{}",
                rep.i,
                fmt_f64(rep.cal_disc),
                cell.d,
                slope,
                fmt_f64(cell.slope_lo),
                fmt_f64(cell.slope_hi)
            );
        }
    }
    Ok(())
}

pub fn selftest(profile_spec: &str) -> CmdResult {
    let profile = get_profile(profile_spec)?;
    println!("{}", HEADER);
    let mut failures = 0u32;
    let mut check = |name: &str, ok: bool| {
        println!("selftest,{},{}", name, if ok { "ok" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    check("profile-invariants", profile.check().core_ok());

    // Grading and action shift laws on every degree-2 generator.
    let shift_ok = (|| -> Result<bool, CmdError> {
        let window = ChainWindow::build(2, -8, 8, &profile).map_err(violation)?;
        for k in -8..=8 {
            for g in &window.set(k).generators {
                let up = g.path.shift(1);
                if index(&up) != index(&g.path) + 2 * g.path.degree() + 2 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    })()?;
    check("shift-law", shift_ok);

    // d^2 = 0 for small degrees.
    let mut d2_ok = true;
    for d in 1..=3 {
        let span = 2 * d + 2;
        let window = ChainWindow::build(d, -span - 1, span + 1, &profile).map_err(violation)?;
        for k in -span..=(span - 1) {
            d2_ok &= d_squared_zero(&window, k, &profile).map_err(violation)?;
        }
    }
    check("d-squared-zero", d2_ok);

    // Homology ranks and oracle equivalence for d <= 3.
    let mut rank_ok = true;
    let mut oracle_ok = true;
    for d in 1..=3 {
        let span = d + 4;
        let window = ChainWindow::build(d, -span - 1, span + 1, &profile).map_err(violation)?;
        for k in -span..=span {
            let rank = window.homology_rank(k, &profile).map_err(violation)?;
            let expect = if (k - d).rem_euclid(2) == 0 { 1 } else { 0 };
            rank_ok &= rank == expect;
            if rank == 1 {
                let mm = window.min_max(k, &profile).map_err(violation)?;
                let brute = c_dk_exact(d, k, &profile).map_err(violation)?;
                oracle_ok &= mm.cmp_tol(&brute, 1e-9) == std::cmp::Ordering::Equal;
            }
        }
    }
    check("homology-ranks", rank_ok);
    check("minmax-equals-brute", oracle_ok);

    // Spectrality for d <= 3.
    let mut table = SpectralTable::new(&profile);
    for d in 1..=3i64 {
        for k in -d..=d {
            if (k - d).rem_euclid(2) == 0 {
                let v = c_dk_exact(d, k, &profile).map_err(violation)?;
                table.push_brute(d, k, v);
            }
        }
    }
    let violations = spectrality_check(&table, &profile).map_err(violation)?;
    check("spectrality", violations.is_empty());

    // Pick identity on a few shifted samples.
    let mut pick_ok = true;
    for s in ["2; (1,0)x1:E; (2,1)x1:E; (1,2)x2:E", "-4; (3,1)x1:E; (1,1)x2:E"] {
        let p = LatticePath::parse(s).map_err(usage)?;
        pick_ok &= matches!(pick_check(&p), PickOutcome::Ok { .. });
    }
    check("pick-identity", pick_ok);

    // Boundary length identity.
    let region = DualRegion::new(&profile);
    let target = 2.0 * (2.0 * profile.h1().to_f64() - profile.integral().to_f64());
    let rel = ((region.boundary_length() - target) / target).abs();
    check("boundary-length", rel <= 1e-6);

    // count_j sanity against the closed form on the axis path.
    let axis = LatticePath::parse("0; (1,0)x3:E").map_err(usage)?;
    check("axis-index", count_j(&axis) == (0, 0, 0) && index(&axis) == -3);

    if failures == 0 {
        Ok(())
    } else {
        Err(violation(format!("{} selftest failures", failures)))
    }
}
