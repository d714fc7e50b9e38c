//! Command-line front end: single-invariant computation with certificate
//! output, family scans, witness checks, and cohomology verification
//! reports.
//!
//! Exit codes: 0 success, 2 validation failure, 3 internal guarantee
//! violation, 4 I/O failure, 5 cohomology check failure.

mod json;

use arithcs::kim::{self, KimError, ScanOutcome};
use arithcs::quadtower::FamilyDatum;
use arithcs::{cyccoh, Integer};
use clap::{Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

const EXIT_OK: i32 = 0;
const EXIT_VALIDATION: i32 = 2;
const EXIT_GUARANTEE: i32 = 3;
const EXIT_IO: i32 = 4;
const EXIT_COHOMOLOGY: i32 = 5;

#[derive(Parser)]
#[command(
    name = "arithcs",
    about = "Arithmetic Chern-Simons invariants of imaginary quadratic fields",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the invariant S for one field of the family and print the
    /// certificate.
    Compute {
        /// prime p = 1 mod 4
        #[arg(long)]
        p: i64,
        /// positive squarefree t prime to p
        #[arg(long)]
        t: i64,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        /// output path (default: standard output)
        #[arg(long)]
        out: Option<PathBuf>,
        /// print the per-prime character trace in human mode
        #[arg(short, long)]
        verbose: bool,
    },
    /// Scan all valid (p, t) with p <= p-max and t <= t-max.
    Scan {
        #[arg(long = "p-max")]
        p_max: i64,
        #[arg(long = "t-max")]
        t_max: i64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the witness conditions (t non-residue, -pt = 5 mod 8, 2 inert,
    /// S nontrivial) for one field.
    Witness {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        t: i64,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the cyclic-group cohomology verification suites.
    Cohomology {
        /// comma-separated group orders, each between 2 and 8
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Compute { p, t, format, out, verbose } => cmd_compute(p, t, format, out, verbose),
        Command::Scan { p_max, t_max, format, out } => cmd_scan(p_max, t_max, format, out),
        Command::Witness { p, t, format, out } => cmd_witness(p, t, format, out),
        Command::Cohomology { n, format, out } => cmd_cohomology(&n, format, out),
    };
    std::process::exit(code);
}

fn emit(out: &Option<PathBuf>, text: &str) -> i32 {
    match out {
        None => {
            if std::io::stdout().write_all(text.as_bytes()).is_err() {
                return EXIT_IO;
            }
            EXIT_OK
        }
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_IO
            }
        },
    }
}

fn kim_error_code(e: &KimError) -> i32 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_GUARANTEE
    }
}

fn validate(p: i64, t: i64) -> Result<FamilyDatum, i32> {
    FamilyDatum::validate(&Integer::from(p), &Integer::from(t)).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_VALIDATION
    })
}

fn cmd_compute(p: i64, t: i64, format: Format, out: Option<PathBuf>, verbose: bool) -> i32 {
    let datum = match validate(p, t) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let cert = match kim::compute_invariant(&datum) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return kim_error_code(&e);
        }
    };
    let text = match format {
        Format::Json => {
            let value = json::certificate_to_json(&cert);
            // round-trip self-check: the emitted shape must parse back and
            // re-verify its internal invariants
            if let Err(e) = json::certificate_from_json(&value) {
                eprintln!("error: certificate round-trip failed: {e}");
                return EXIT_GUARANTEE;
            }
            let mut s = serde_json::to_string_pretty(&value).unwrap();
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("p,t,D,h,S,oracle,agree\n");
            let h = match arithcs::idealcls::reduced_forms(datum.discriminant()) {
                Ok(cg) => cg.h(),
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_GUARANTEE;
                }
            };
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                datum.p(),
                datum.t(),
                datum.discriminant(),
                h,
                cert.s(),
                cert.oracle(),
                cert.agree()
            );
            s
        }
        Format::Human => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "family member: p = {}, t = {}  (F = Q(sqrt(-{})), D = {}, D1 = {}, D2 = {})",
                datum.p(),
                datum.t(),
                datum.m(),
                datum.discriminant(),
                datum.d1(),
                datum.d2()
            );
            let _ = writeln!(s, "fundamental unit of Q(sqrt({})): eps = {}", datum.p(), cert.epsilon());
            let _ = writeln!(s, "x = eps, Norm_K/F(x) = -1; u = x^2 = {}", cert.u());
            let _ = writeln!(s, "Hilbert 90 resolvent: y = {}", cert.y());
            let _ = writeln!(s, "w = Norm_K/F(y) = {}", cert.w());
            let _ = writeln!(s, "(w) = {}", cert.w_factored());
            let _ = writeln!(s, "I = sqrt of (w) = {}", cert.ideal());
            let _ = writeln!(s, "class of I: {}", cert.ideal_class());
            if verbose {
                for (prime, v) in cert.character_trace() {
                    let _ = writeln!(s, "  genus character at {prime}: {v}");
                }
            }
            let _ = writeln!(
                s,
                "S = {} ({}), oracle {} ({})",
                cert.s(),
                if cert.s().is_trivial() { "trivial" } else { "nontrivial" },
                cert.oracle(),
                if cert.agree() { "agrees" } else { "DISAGREES" }
            );
            s
        }
    };
    emit(&out, &text)
}

fn cmd_scan(p_max: i64, t_max: i64, format: Format, out: Option<PathBuf>) -> i32 {
    if p_max < 0 || t_max < 0 {
        eprintln!("error: bounds must be nonnegative");
        return EXIT_VALIDATION;
    }
    let table = kim::scan(&Integer::from(p_max), &Integer::from(t_max));
    let summary = format!(
        "scanned {} fields: {} trivial, {} nontrivial, {} failed",
        table.trivial + table.nontrivial + table.failed,
        table.trivial,
        table.nontrivial,
        table.failed
    );
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json::scan_table_to_json(&table)).unwrap();
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("p,t,D,h,S,oracle,agree\n");
            for outcome in &table.outcomes {
                match outcome {
                    ScanOutcome::Row(r) => {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{},{}",
                            r.p, r.t, r.d, r.h, r.s, r.oracle, r.agree
                        );
                    }
                    ScanOutcome::Failed { p, t, reason } => {
                        eprintln!("row ({p},{t}) failed: {reason}");
                    }
                }
            }
            eprintln!("{summary}");
            s
        }
        Format::Human => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{:>5} {:>5} {:>8} {:>4} {:>2} {:>7} {:>6}",
                "p", "t", "D", "h", "S", "oracle", "agree"
            );
            for outcome in &table.outcomes {
                match outcome {
                    ScanOutcome::Row(r) => {
                        let _ = writeln!(
                            s,
                            "{:>5} {:>5} {:>8} {:>4} {:>2} {:>7} {:>6}",
                            r.p.to_string(),
                            r.t.to_string(),
                            r.d.to_string(),
                            r.h,
                            r.s.to_string(),
                            r.oracle.to_string(),
                            r.agree
                        );
                    }
                    ScanOutcome::Failed { p, t, reason } => {
                        let _ = writeln!(s, "{p:>5} {t:>5} FAILED: {reason}");
                    }
                }
            }
            let _ = writeln!(s, "{summary}");
            s
        }
    };
    emit(&out, &text)
}

fn cmd_witness(p: i64, t: i64, format: Format, out: Option<PathBuf>) -> i32 {
    let datum = match validate(p, t) {
        Ok(d) => d,
        Err(code) => return code,
    };
    let report = match kim::remark_witness(&datum) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return kim_error_code(&e);
        }
    };
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json::witness_to_json(&report)).unwrap();
            s.push('\n');
            s
        }
        _ => {
            let flag = |b: bool| if b { "pass" } else { "FAIL" };
            let mut s = String::new();
            let _ = writeln!(s, "witness conditions for (p, t) = ({p}, {t}):");
            let _ = writeln!(s, "  p = 1 mod 4:            {}", flag(report.p_is_one_mod_four));
            let _ = writeln!(s, "  (t|p) = -1:             {}", flag(report.t_nonresidue_mod_p));
            let _ = writeln!(s, "  -pt = 5 mod 8:          {}", flag(report.minus_pt_is_five_mod_eight));
            let _ = writeln!(s, "  2 inert in F:           {}", flag(report.two_inert_in_f));
            let _ = writeln!(s, "  S nontrivial (S = {}):   {}", report.s, flag(report.s_nontrivial));
            let _ = writeln!(s, "  all conditions:         {}", flag(report.all_hold));
            let _ = writeln!(s, "  note: {}", report.pairing_note);
            s
        }
    };
    emit(&out, &text)
}

fn cmd_cohomology(ns: &[usize], format: Format, out: Option<PathBuf>) -> i32 {
    if ns.is_empty() {
        eprintln!("error: at least one group order is required (--n 2,3,...)");
        return EXIT_VALIDATION;
    }
    for &n in ns {
        if !(2..=8).contains(&n) {
            eprintln!("error: table-size guard: group orders must be between 2 and 8, got {n}");
            return EXIT_VALIDATION;
        }
    }
    let mut reports = Vec::new();
    for &n in ns {
        match cyccoh::full_suite(n) {
            Ok(r) => reports.push(r),
            Err(e) => {
                eprintln!("error: suite for n = {n} failed to run: {e}");
                return EXIT_GUARANTEE;
            }
        }
    }
    let all_passed = reports.iter().all(|r| r.passed);
    let text = match format {
        Format::Json => {
            let arr: Vec<_> = reports.iter().map(json::suite_to_json).collect();
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "schema": json::SCHEMA_VERSION,
                "suites": arr,
                "passed": all_passed,
            }))
            .unwrap();
            s.push('\n');
            s
        }
        _ => {
            let flag = |b: bool| if b { "pass" } else { "FAIL" };
            let mut s = String::new();
            let _ = writeln!(s, "{}", cyccoh::CONVENTIONS);
            for r in &reports {
                let _ = writeln!(s, "n = {}:", r.n);
                for (k, ord, ok) in &r.orders {
                    let _ = writeln!(
                        s,
                        "  |H^{k}(Z/{n}, Z/{n})| = {} (expect {n}): {}",
                        ord.map_or("infinite".into(), |o| o.to_string()),
                        flag(*ok),
                        n = r.n
                    );
                }
                let _ = writeln!(
                    s,
                    "  cup of H^1 and H^2 generators generates H^3: {}",
                    flag(r.cup_generates)
                );
                let _ = writeln!(
                    s,
                    "  sign identity d(a u b) = -(a~ u db) on {} pairs [{}]: {}",
                    r.sign.pairs_checked,
                    r.sign.analogue,
                    flag(r.sign.passed)
                );
                for w in &r.sign.failures {
                    let _ = writeln!(s, "    witness: alpha = {} beta = {}", w.alpha_coeff, w.beta_coeff);
                }
                let _ = writeln!(
                    s,
                    "  Bockstein factorization on {} classes [{}]: {}",
                    r.bockstein.classes_checked,
                    r.bockstein.analogue,
                    flag(r.bockstein.passed)
                );
                for w in &r.bockstein.failures {
                    let _ = writeln!(s, "    witness: {w}");
                }
                for p in &r.periodicity {
                    let _ = writeln!(
                        s,
                        "  cup-with-t periodicity, coefficients {:?}: |H^1| = {:?}, |H^3| = {:?}, injective = {}: {}",
                        p.module_orders,
                        p.h1_order,
                        p.h3_order,
                        p.injective,
                        flag(p.passed)
                    );
                }
            }
            let _ = writeln!(s, "overall: {}", flag(all_passed));
            s
        }
    };
    let code = emit(&out, &text);
    if code != EXIT_OK {
        return code;
    }
    if all_passed {
        EXIT_OK
    } else {
        EXIT_COHOMOLOGY
    }
}
