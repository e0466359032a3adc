use std::process::ExitCode;
use std::time::{Duration, Instant};

use divpow::chow::BlowupModel;
use divpow::verify::{
    chow_suite, divprod_suite, free_tensor_suite, gamma_suite, kummer_suite, lemend_suite, nakayama_suite,
    pairing_suite, tannaka_suite, Check,
};
use divpow::Result;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Result<Vec<Check>>,
}

fn kummer() -> Result<Vec<Check>> {
    kummer_suite(12, &[2, 3, 5])
}

fn gamma_relations() -> Result<Vec<Check>> {
    let mut checks = gamma_suite(&[0, 2, 3, 5], 3, 4, 200, 6, 7)?;
    checks.extend(pairing_suite(&[0, 2, 3, 5], 3, 4, 200, 11)?);
    Ok(checks)
}

fn flagship() -> Result<Vec<Check>> {
    let a = [2, 4, 8, 16];
    let mut checks = free_tensor_suite(2, 3, Some(&a), true)?;
    checks.extend(free_tensor_suite(0, 3, Some(&a), false)?);
    let detail = checks[0].detail.clone().unwrap_or_default();
    let mut shape = Check::new("flagship_dimensions");
    shape.record(detail["r"] == 30 && detail["ambient_dimension"] == 496, || detail.clone());
    let scanned = checks[1].detail.as_ref().map(|d| d["scanned"].clone()).unwrap_or_default();
    shape.record(scanned == 168, || scanned.clone());
    checks.push(shape);
    Ok(checks)
}

fn divprod() -> Result<Vec<Check>> {
    divprod_suite(&[2, 3], 3, 12, 3, 2, &[3, 9])
}

fn chow() -> Result<Vec<Check>> {
    chow_suite(&BlowupModel::new(10, [2, 3], [1, 5])?, 3)
}

fn lemend() -> Result<Vec<Check>> {
    lemend_suite(8, &[2, 3, 4, 5, 8, 9], 10)
}

fn tannaka() -> Result<Vec<Check>> {
    tannaka_suite(&[0, 2, 3], 8)
}

fn nakayama() -> Result<Vec<Check>> {
    nakayama_suite(2, 2, 2)
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "Kummer/Lucas", limit: Duration::from_secs(5), run: kummer },
        Criterion { id: 2, name: "divided-power relations", limit: Duration::from_secs(30), run: gamma_relations },
        Criterion { id: 3, name: "free tensor flagship", limit: Duration::from_secs(120), run: flagship },
        Criterion { id: 4, name: "multiplication maps", limit: Duration::from_secs(60), run: divprod },
        Criterion { id: 5, name: "Chow ring", limit: Duration::from_secs(10), run: chow },
        Criterion { id: 6, name: "bundle point counts", limit: Duration::from_secs(10), run: lemend },
        Criterion { id: 7, name: "Tannaka construction", limit: Duration::from_secs(60), run: tannaka },
        Criterion { id: 8, name: "Nakayama", limit: Duration::from_secs(30), run: nakayama },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (ok, note) = match &outcome {
            Ok(checks) => {
                let cases: u64 = checks.iter().map(|k| k.cases).sum();
                let failed: Vec<&Check> = checks.iter().filter(|k| !k.passed).collect();
                let mut note = format!("{} checks, {cases} cases", checks.len());
                for k in &failed {
                    note.push_str(&format!("; {} failed: {}", k.name, k.witness.clone().unwrap_or_default()));
                }
                (failed.is_empty(), note)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = elapsed <= c.limit;
        let verdict = if ok && in_time { "PASS" } else { "FAIL" };
        let timing = format!("{:.2}s / {}s", elapsed.as_secs_f64(), c.limit.as_secs());
        let late = if in_time { "" } else { " (over time limit)" };
        println!("{verdict} [{}] {}: {note} ({timing}){late}", c.id, c.name);
        if verdict == "FAIL" {
            failures += 1;
        }
    }
    if failures == 0 {
        println!("all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("{failures} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
