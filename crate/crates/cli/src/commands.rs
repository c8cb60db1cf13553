use crate::output::{dim_json, poly_json, ratfun_fields, Document, Row};
use crate::{verify, Command, RunConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use qkw_core::counts::{mu_fiber_series, nakajima_polys, p_series, CountSeries, NakajimaVariant};
use qkw_core::ffrep::{census_abs_indec, CensusOptions};
use qkw_core::gkm::{ch_uq_minus, kac_constant_term_check};
use qkw_core::hua::{kac_table, HuaOptions};
use qkw_core::{Error, Result};
use serde_json::{json, Value};

pub struct Outcome {
    pub doc: Document,
    /// Lines for stderr, kept out of the document so output is reproducible.
    pub notes: Vec<String>,
    pub failed: bool,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let mut notes = Vec::new();
    let mut failed = false;
    let rows = match cfg.command {
        Command::Kac => kac_rows(cfg)?,
        Command::Series => series_rows(cfg)?,
        Command::Nakajima => nakajima_rows(cfg)?,
        Command::Gkm => gkm_rows(cfg)?,
        Command::Census => census_rows(cfg, &mut notes, &mut failed)?,
        Command::Verify => {
            let rows = verify::run(cfg, &mut notes)?;
            failed = rows.iter().any(|r| r.iter().any(|(k, v)| *k == "status" && v == "fail"));
            rows
        }
    };
    let command = match cfg.command {
        Command::Kac => "kac",
        Command::Series => "series",
        Command::Nakajima => "nakajima",
        Command::Gkm => "gkm",
        Command::Census => "census",
        Command::Verify => "verify",
    };
    Ok(Outcome { doc: Document { quiver: cfg.quiver.to_json(), command, bx: cfg.bx.clone(), rows }, notes, failed })
}

fn kac_rows(cfg: &RunConfig) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for &f in &cfg.flavors {
        let table = kac_table(&cfg.quiver, f, &cfg.bx, HuaOptions::default())?;
        for v in cfg.bx.points_below().into_iter().filter(|v| !v.is_zero()) {
            rows.push(vec![("flavor", json!(f.name())), ("dim_vector", dim_json(&v)), ("coeffs", poly_json(&table.get(&v)))]);
        }
    }
    Ok(rows)
}

fn count_rows(s: &CountSeries, kind: &str, flavor: Value, primes: &[u32], rows: &mut Vec<Row>) -> Result<()> {
    for v in s.series.bound().points_below() {
        let c = s.series.coeff(&v);
        let mut counts = serde_json::Map::new();
        for &p in primes {
            let n = s.point_count(&v, &BigRational::from_integer(BigInt::from(p)))?;
            counts.insert(p.to_string(), json!(n.to_string()));
        }
        let [num, den] = ratfun_fields(&c);
        rows.push(vec![("kind", json!(kind)), ("flavor", flavor.clone()), ("dim_vector", dim_json(&v)), num, den, ("point_counts", Value::Object(counts))]);
    }
    Ok(())
}

fn series_rows(cfg: &RunConfig) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let opts = HuaOptions::default();
    for &f in &cfg.flavors {
        count_rows(&p_series(&cfg.quiver, f, &cfg.bx, opts)?, "lambda", json!(f.name()), &cfg.primes, &mut rows)?;
    }
    count_rows(&mu_fiber_series(&cfg.quiver, &cfg.bx, opts)?, "mu_fiber", Value::Null, &cfg.primes, &mut rows)?;
    Ok(rows)
}

fn nakajima_rows(cfg: &RunConfig) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for variant in NakajimaVariant::ALL {
        for (v, np) in nakajima_polys(&cfg.quiver, &cfg.w, variant, &cfg.bx, HuaOptions::default())? {
            rows.push(vec![
                ("variant", json!(variant.name())),
                ("dim_vector", dim_json(&v)),
                ("w", dim_json(&cfg.w)),
                ("half_dim", json!(np.half_dim)),
                ("coeffs", poly_json(&np.poly)),
            ]);
        }
    }
    Ok(rows)
}

fn gkm_rows(cfg: &RunConfig) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let report = kac_constant_term_check(&cfg.quiver, &cfg.bx, HuaOptions::default())?;
    for r in &report.rows {
        rows.push(vec![
            ("kind", json!("multiplicity")),
            ("dim_vector", dim_json(&r.alpha)),
            ("value", json!(r.multiplicity.to_string())),
            ("constant_term", json!(r.constant_term.to_string())),
        ]);
    }
    let ch = ch_uq_minus(&cfg.quiver, &cfg.bx)?;
    for v in cfg.bx.points_below() {
        rows.push(vec![("kind", json!("character")), ("dim_vector", dim_json(&v)), ("value", json!(ch.coeff(&v).to_string()))]);
    }
    Ok(rows)
}

fn census_rows(cfg: &RunConfig, notes: &mut Vec<String>, failed: &mut bool) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let opts = CensusOptions { cap: cfg.cap, cross_check_radical: false };
    for &f in &cfg.flavors {
        let table = kac_table(&cfg.quiver, f, &cfg.bx, HuaOptions::default())?;
        for &p in &cfg.primes {
            for v in cfg.bx.points_below().into_iter().filter(|v| !v.is_zero()) {
                let expected = table.get(&v).eval_int(&BigInt::from(p));
                let base = vec![("flavor", json!(f.name())), ("p", json!(p)), ("dim_vector", dim_json(&v)), ("kac_value", json!(expected.to_string()))];
                match census_abs_indec(&cfg.quiver, &v, p, f, &opts) {
                    Ok(r) => {
                        let ok = BigInt::from(r.a_value) == expected;
                        *failed |= !ok;
                        notes.push(format!("census {f} p={p} v={v}: {:.3}s", r.elapsed.as_secs_f64()));
                        let mut row = base;
                        row.extend([
                            ("status", json!(if ok { "pass" } else { "fail" })),
                            ("a_value", json!(r.a_value.to_string())),
                            ("flavored", json!(r.flavored.to_string())),
                            ("reps_visited", json!(r.reps_visited)),
                            ("search_space", json!(r.search_space.to_string())),
                        ]);
                        rows.push(row);
                    }
                    Err(Error::Capacity(msg)) => {
                        let mut row = base;
                        row.push(("status", json!("skipped")));
                        notes.push(format!("census {f} p={p} v={v} skipped: {msg}"));
                        rows.push(row);
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(rows)
}
