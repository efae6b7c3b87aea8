//! Running cases in parallel and recording the outcomes as JSON lines.

use std::io::{self, Write};
use std::time::Instant;

use qcong_core::checker::{verify_case, CaseSpec, CheckOptions, Verdict};
use qcong_core::qterms::CaseParams;
use rayon::prelude::*;
use serde::Serialize;

/// One executed case. Everything except `wall_ms` is deterministic.
#[derive(Debug, Serialize)]
pub struct CaseRecord {
    pub id: String,
    pub kind: &'static str,
    pub params: CaseParams,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term_count: Option<usize>,
    pub wall_ms: u64,
}

#[derive(Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

impl Summary {
    pub fn of(records: &[CaseRecord]) -> Self {
        let mut s = Summary {
            total: records.len(),
            ..Summary::default()
        };
        for r in records {
            match (&r.error, r.holds) {
                (Some(_), _) => s.errors += 1,
                (None, true) => s.passed += 1,
                (None, false) => s.failed += 1,
            }
        }
        s
    }
}

pub fn run_case(case: &CaseSpec, opts: CheckOptions) -> CaseRecord {
    let start = Instant::now();
    let result = verify_case(case, opts);
    let wall_ms = start.elapsed().as_millis() as u64;
    let (holds, verdict, error) = match result {
        Ok(v) => (v.holds, Some(v), None),
        Err(e) => (false, None, Some(e.to_string())),
    };
    CaseRecord {
        id: case.id.clone(),
        kind: case.kind(),
        params: case.params.clone(),
        holds,
        verdict,
        error,
        term_count: case.term_count(),
        wall_ms,
    }
}

/// Runs every case on a pool of `jobs` workers; records keep case order.
pub fn run_all(
    cases: &[CaseSpec],
    jobs: usize,
    opts: CheckOptions,
) -> anyhow::Result<Vec<CaseRecord>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    Ok(pool.install(|| cases.par_iter().map(|c| run_case(c, opts)).collect()))
}

pub fn write_report(out: &mut impl Write, records: &[CaseRecord]) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        writeln!(out)?;
    }
    #[derive(Serialize)]
    struct Tail<'a> {
        summary: &'a Summary,
    }
    serde_json::to_writer(
        &mut *out,
        &Tail {
            summary: &Summary::of(records),
        },
    )?;
    writeln!(out)
}

/// One human-readable line per case.
pub fn describe(r: &CaseRecord) -> String {
    match (&r.error, &r.verdict) {
        (Some(e), _) => format!("ERROR {}: {e}", r.id),
        (None, Some(v)) if v.holds => format!("ok    {} ({} ms)", r.id, r.wall_ms),
        (None, Some(v)) => {
            let why = v
                .witness
                .as_ref()
                .map(|w| format!(" at {}", w.failed_factor))
                .unwrap_or_default();
            format!("FAIL  {}{why} ({} ms)", r.id, r.wall_ms)
        }
        (None, None) => format!("FAIL  {}", r.id),
    }
}
