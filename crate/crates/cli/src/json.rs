//! JSON shapes for certificates, scan tables, witness and cohomology
//! reports.  All numbers are emitted in decimal, exact rationals as
//! "num/den" strings (integers print without the denominator).

use arithcs::artin::ArtinValue;
use arithcs::cyccoh::SuiteReport;
use arithcs::idealcls::{FactoredIdeal, PrimeIdeal, QuadForm, SplitKind};
use arithcs::kim::{Certificate, ScanOutcome, ScanTable, WitnessReport};
use arithcs::quadtower::{EUnit, FamilyDatum, FElement, TowerElement};
use arithcs::{Integer, Rational};
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn int(i: &Integer) -> Value {
    Value::String(i.to_string())
}

fn f_element(e: &FElement) -> Value {
    json!({ "u": rat(e.u()), "v": rat(e.v()) })
}

fn tower_element(t: &TowerElement) -> Value {
    json!({ "alpha": f_element(t.alpha()), "beta": f_element(t.beta()) })
}

fn eunit(e: &EUnit) -> Value {
    json!({ "r": rat(e.r()), "s": rat(e.s()) })
}

fn kind_str(k: SplitKind) -> &'static str {
    match k {
        SplitKind::Split => "split",
        SplitKind::Inert => "inert",
        SplitKind::Ramified => "ramified",
    }
}

fn prime(p: &PrimeIdeal) -> Value {
    let mut m = Map::new();
    m.insert("q".into(), int(p.q()));
    m.insert("kind".into(), Value::String(kind_str(p.kind()).into()));
    if let Some(b) = p.root() {
        m.insert("root".into(), int(b));
    }
    Value::Object(m)
}

fn factored_ideal(f: &FactoredIdeal) -> Value {
    Value::Array(
        f.factors()
            .iter()
            .map(|(p, e)| {
                let mut m = prime(p);
                m.as_object_mut()
                    .unwrap()
                    .insert("exponent".into(), json!(e));
                m
            })
            .collect(),
    )
}

fn form(f: &QuadForm) -> Value {
    json!({ "a": int(f.a()), "b": int(f.b()), "c": int(f.c()) })
}

pub fn certificate_to_json(cert: &Certificate) -> Value {
    let d = cert.datum();
    json!({
        "schema": SCHEMA_VERSION,
        "datum": {
            "p": int(d.p()),
            "t": int(d.t()),
            "d": int(d.discriminant()),
            "d1": int(d.d1()),
            "d2": int(d.d2()),
        },
        "epsilon": eunit(cert.epsilon()),
        "x": tower_element(cert.x()),
        "u": tower_element(cert.u()),
        "y": tower_element(cert.y()),
        "w": f_element(cert.w()),
        "w_factored": factored_ideal(cert.w_factored()),
        "ideal": factored_ideal(cert.ideal()),
        "ideal_class": form(cert.ideal_class()),
        "character_trace": cert.character_trace().iter().map(|(p, v)| {
            let mut m = prime(p);
            m.as_object_mut().unwrap().insert("frobenius".into(), json!(v.bit()));
            m
        }).collect::<Vec<_>>(),
        "s": cert.s().bit(),
        "oracle": cert.oracle().bit(),
        "agree": cert.agree(),
    })
}

fn parse_int(v: &Value, what: &str) -> Result<Integer, String> {
    let s = v.as_str().ok_or_else(|| format!("{what}: expected a string"))?;
    Integer::parse_bytes(s.as_bytes(), 10).ok_or_else(|| format!("{what}: bad integer {s}"))
}

fn parse_rat(v: &Value, what: &str) -> Result<Rational, String> {
    let s = v.as_str().ok_or_else(|| format!("{what}: expected a string"))?;
    match s.split_once('/') {
        Some((num, den)) => {
            let n = Integer::parse_bytes(num.as_bytes(), 10)
                .ok_or_else(|| format!("{what}: bad numerator {num}"))?;
            let d = Integer::parse_bytes(den.as_bytes(), 10)
                .ok_or_else(|| format!("{what}: bad denominator {den}"))?;
            Ok(Rational::new(n, d))
        }
        None => {
            let n = Integer::parse_bytes(s.as_bytes(), 10)
                .ok_or_else(|| format!("{what}: bad integer {s}"))?;
            Ok(Rational::from(n))
        }
    }
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, String> {
    v.get(key).ok_or_else(|| format!("missing field {key}"))
}

fn parse_f_element(v: &Value, m: &Integer, what: &str) -> Result<FElement, String> {
    Ok(FElement::new(
        parse_rat(get(v, "u")?, what)?,
        parse_rat(get(v, "v")?, what)?,
        m.clone(),
    ))
}

fn parse_tower(v: &Value, m: &Integer, p: &Integer, what: &str) -> Result<TowerElement, String> {
    Ok(TowerElement::new(
        parse_f_element(get(v, "alpha")?, m, what)?,
        parse_f_element(get(v, "beta")?, m, what)?,
        p,
    ))
}

fn parse_prime(v: &Value) -> Result<PrimeIdeal, String> {
    let q = parse_int(get(v, "q")?, "prime q")?;
    let kind = match get(v, "kind")?.as_str() {
        Some("split") => SplitKind::Split,
        Some("inert") => SplitKind::Inert,
        Some("ramified") => SplitKind::Ramified,
        other => return Err(format!("bad splitting kind {other:?}")),
    };
    let root = match v.get("root") {
        Some(r) => Some(parse_int(r, "prime root")?),
        None => None,
    };
    PrimeIdeal::from_parts(q, kind, root).map_err(|e| e.to_string())
}

fn parse_ideal(v: &Value, what: &str) -> Result<FactoredIdeal, String> {
    let arr = v.as_array().ok_or_else(|| format!("{what}: expected an array"))?;
    let mut factors = Vec::new();
    for item in arr {
        let p = parse_prime(item)?;
        let e = get(item, "exponent")?
            .as_i64()
            .ok_or_else(|| format!("{what}: bad exponent"))?;
        factors.push((p, e));
    }
    Ok(FactoredIdeal::from_factors(factors))
}

fn parse_form(v: &Value) -> Result<QuadForm, String> {
    Ok(QuadForm::new(
        parse_int(get(v, "a")?, "form a")?,
        parse_int(get(v, "b")?, "form b")?,
        parse_int(get(v, "c")?, "form c")?,
    ))
}

fn parse_artin(v: &Value, what: &str) -> Result<ArtinValue, String> {
    let bit = v.as_u64().ok_or_else(|| format!("{what}: expected 0 or 1"))?;
    ArtinValue::from_bit(bit as u8).ok_or_else(|| format!("{what}: expected 0 or 1"))
}

/// Parse a certificate back from its JSON shape and re-verify every
/// internal invariant.
pub fn certificate_from_json(v: &Value) -> Result<Certificate, String> {
    let schema = get(v, "schema")?.as_u64();
    if schema != Some(SCHEMA_VERSION) {
        return Err(format!("unsupported schema version {schema:?}"));
    }
    let dv = get(v, "datum")?;
    let p = parse_int(get(dv, "p")?, "p")?;
    let t = parse_int(get(dv, "t")?, "t")?;
    let datum = FamilyDatum::validate(&p, &t).map_err(|e| e.to_string())?;
    let m = datum.m();

    let ev = get(v, "epsilon")?;
    let epsilon = EUnit::from_parts(
        parse_rat(get(ev, "r")?, "epsilon r")?,
        parse_rat(get(ev, "s")?, "epsilon s")?,
        p.clone(),
    )
    .map_err(|e| e.to_string())?;

    let x = parse_tower(get(v, "x")?, &m, &p, "x")?;
    let u = parse_tower(get(v, "u")?, &m, &p, "u")?;
    let y = parse_tower(get(v, "y")?, &m, &p, "y")?;
    let w = parse_f_element(get(v, "w")?, &m, "w")?;
    let w_factored = parse_ideal(get(v, "w_factored")?, "w_factored")?;
    let ideal = parse_ideal(get(v, "ideal")?, "ideal")?;
    let ideal_class = parse_form(get(v, "ideal_class")?)?;
    let trace_arr = get(v, "character_trace")?
        .as_array()
        .ok_or("character_trace: expected an array")?;
    let mut character_trace = Vec::new();
    for item in trace_arr {
        character_trace.push((parse_prime(item)?, parse_artin(get(item, "frobenius")?, "frobenius")?));
    }
    let s = parse_artin(get(v, "s")?, "s")?;
    let oracle = parse_artin(get(v, "oracle")?, "oracle")?;
    let agree = get(v, "agree")?.as_bool().ok_or("agree: expected a boolean")?;

    Certificate::from_parts(
        datum,
        epsilon,
        x,
        u,
        y,
        w,
        w_factored,
        ideal,
        ideal_class,
        character_trace,
        s,
        oracle,
        agree,
    )
    .map_err(|e| e.to_string())
}

pub fn scan_table_to_json(table: &ScanTable) -> Value {
    let rows: Vec<Value> = table
        .outcomes
        .iter()
        .map(|o| match o {
            ScanOutcome::Row(r) => json!({
                "p": int(&r.p),
                "t": int(&r.t),
                "d": int(&r.d),
                "h": r.h,
                "s": r.s.bit(),
                "oracle": r.oracle.bit(),
                "agree": r.agree,
            }),
            ScanOutcome::Failed { p, t, reason } => json!({
                "p": int(p),
                "t": int(t),
                "failed": reason,
            }),
        })
        .collect();
    json!({
        "schema": SCHEMA_VERSION,
        "rows": rows,
        "trivial": table.trivial,
        "nontrivial": table.nontrivial,
        "failed": table.failed,
    })
}

pub fn witness_to_json(r: &WitnessReport) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "p_is_one_mod_four": r.p_is_one_mod_four,
        "t_nonresidue_mod_p": r.t_nonresidue_mod_p,
        "minus_pt_is_five_mod_eight": r.minus_pt_is_five_mod_eight,
        "two_inert_in_f": r.two_inert_in_f,
        "s": r.s.bit(),
        "s_nontrivial": r.s_nontrivial,
        "all_hold": r.all_hold,
        "pairing_note": r.pairing_note,
    })
}

pub fn suite_to_json(s: &SuiteReport) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "n": s.n,
        "conventions": s.conventions,
        "orders": s.orders.iter().map(|(k, ord, ok)| json!({
            "degree": k,
            "order": ord,
            "equals_n": ok,
        })).collect::<Vec<_>>(),
        "cup_generates_h3": s.cup_generates,
        "sign_identity": {
            "analogue": s.sign.analogue,
            "pairs_checked": s.sign.pairs_checked,
            "failures": s.sign.failures.iter().map(|w| json!({
                "alpha": w.alpha_coeff,
                "beta": w.beta_coeff,
                "equal_as_classes": w.equal_as_classes,
                "equal_as_cochains": w.equal_as_cochains,
            })).collect::<Vec<_>>(),
            "passed": s.sign.passed,
        },
        "bockstein_factorization": {
            "analogue": s.bockstein.analogue,
            "classes_checked": s.bockstein.classes_checked,
            "failures": s.bockstein.failures,
            "passed": s.bockstein.passed,
        },
        "periodicity": s.periodicity.iter().map(|p| json!({
            "module_orders": p.module_orders,
            "analogue": p.analogue,
            "h1_order": p.h1_order,
            "h3_order": p.h3_order,
            "injective": p.injective,
            "passed": p.passed,
        })).collect::<Vec<_>>(),
        "passed": s.passed,
    })
}
