//! One line per acceptance criterion, evaluated on the preset parameter sets.
//! Exits non-zero when any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use vertexq_core::{run, Report, ReportFile, RunConfig};

struct Criterion {
    number: u32,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn preset(name: &str) -> RunConfig {
    RunConfig::preset(name).expect("known preset")
}

fn run_preset(name: &str) -> ReportFile {
    run(&preset(name)).unwrap_or_else(|e| panic!("{name}: setup failed: {e}"))
}

/// Pass iff every selected record passes and the summed check time is under `limit`.
fn judge(number: u32, title: &'static str, records: &[&Report], limit: f64) -> Criterion {
    let secs: f64 = records.iter().map(|r| r.wall_time).sum();
    let failing: Vec<&&Report> = records.iter().filter(|r| !r.pass).collect();
    let worst = records
        .iter()
        .filter_map(|r| r.residual.map(|x| x / r.tolerance))
        .fold(0.0, f64::max);
    let mut detail = format!("{} records, worst residual/tolerance {worst:.2e}, {secs:.2} s (limit {limit} s)", records.len());
    if !failing.is_empty() {
        let ids: Vec<&str> = failing.iter().take(4).map(|r| r.id.as_str()).collect();
        detail.push_str(&format!("; {} failing: {}", failing.len(), ids.join(", ")));
        if let Some(e) = failing.iter().find_map(|r| r.error.as_deref()) {
            detail.push_str(&format!("; error: {e}"));
        }
    }
    let pass = !records.is_empty() && failing.is_empty() && secs < limit;
    Criterion { number, title, pass, detail }
}

fn select<'a>(rep: &'a ReportFile, keep: impl Fn(&str) -> bool) -> Vec<&'a Report> {
    rep.records.iter().filter(|r| keep(&r.id)).collect()
}

fn main() -> ExitCode {
    let ev = run_preset("eight-vertex");
    let bx = run_preset("baxter-odd-N");
    let fb = run_preset("fabricius-spin1");

    let mut out = Vec::new();

    out.push(judge(1, "theta and special functions", &select(&ev, |id| id.starts_with("theta.")), 1.0));

    let rep_core = |id: &str| id.starts_with("rep.") && !id.starts_with("rep.form") && !id.starts_with("rep.gram") && id != "rep.quad_doubling";
    let mut recs = select(&ev, rep_core);
    recs.extend(select(&fb, rep_core));
    out.push(judge(2, "representation (l = 1/2 and l = 1)", &recs, 10.0));

    let forms = |id: &str| id.starts_with("rep.form") || id.starts_with("rep.gram") || id == "rep.quad_doubling";
    let mut recs = select(&ev, forms);
    recs.extend(select(&fb, forms));
    out.push(judge(3, "closed-form vs quadrature Sklyanin products", &recs, 30.0));

    let lattice = |id: &str| id.starts_with("rll.") || id.starts_with("tt.");
    let mut recs = select(&ev, lattice);
    recs.extend(select(&bx, lattice));
    out.push(judge(4, "lattice: RLL, [T,T'], adjoint law, eight-vertex", &recs, 20.0));

    let construction = |id: &str| ["tq.", "qt.", "wy.", "lemma.", "quasi."].iter().any(|p| id.starts_with(p));
    out.push(judge(5, "Baxter construction (baxter-odd-N)", &select(&bx, construction), 120.0));
    out.push(judge(6, "Fabricius construction (fabricius-spin1)", &select(&fb, construction), 120.0));

    let qfull = |id: &str| id.starts_with("q.");
    let mut recs = select(&bx, qfull);
    recs.extend(select(&fb, qfull));
    out.push(judge(7, "Q-operator end to end (both spin-1 presets)", &recs, 180.0));

    let t = Instant::now();
    let cfg = preset("baxter-odd-N");
    let again = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool").install(|| run(&cfg).expect("rerun"));
    let same = again.without_timings().to_json() == bx.without_timings().to_json();
    out.push(Criterion {
        number: 8,
        title: "determinism",
        pass: same,
        detail: format!("baxter-odd-N rerun on one thread, report.json without timings identical: {same} ({:.2} s)", t.elapsed().as_secs_f64()),
    });

    for c in &out {
        println!("criterion {} {}: {}  {}", c.number, if c.pass { "PASS" } else { "FAIL" }, c.title, c.detail);
    }
    let info = judge(0, "", &select(&ev, qfull), 180.0);
    println!("info: Q-operator end to end on eight-vertex (l = 1/2, N = 2): {}  {}", if info.pass { "pass" } else { "fail" }, info.detail);

    let failed = out.iter().filter(|c| !c.pass).count();
    println!("{} of {} criteria pass", out.len() - failed, out.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
