//! Command-line driver. Every command returns its stdout text and exit code so the
//! binary stays a thin wrapper and the commands can be tested in-process.
//!
//! Exit codes: 0 success or witness, 1 usage or input error, 2 proven empty,
//! 3 exhausted, 4 reproduction claims failed.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{self, HalfIndexRoute};
use crate::counting::{self, Bound, BoundParams};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx, FieldOptions};
use crate::latin;
use crate::manifest;
use crate::orthomorphism::{AnyMap, CyclotomicMap, MapRecord, PermutationMap};
use crate::search::{self, SearchConfig, SearchReport, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_EMPTY: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;
pub const EXIT_CLAIMS_FAILED: i32 = 4;

/// The manifest shipped with the crate, used when `reproduce` gets no path.
pub const SHIPPED_MANIFEST: &str = include_str!("../manifests/claims.txt");

#[derive(Debug, Parser)]
#[command(
    name = "orthocyc",
    version,
    about = "Cyclotomic orthomorphisms of finite fields"
)]
pub struct Cli {
    /// Worker threads for parallel counting and search (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct FieldArgs {
    #[arg(long)]
    pub q: Option<u64>,
    /// Generator encoding; must be primitive.
    #[arg(long)]
    pub generator: Option<u32>,
    /// Monic irreducible modulus as comma-separated coefficients `c_0,..,c_n`.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
}

impl FieldArgs {
    fn build(&self) -> Result<FieldCtx> {
        let q = self
            .q
            .ok_or_else(|| Error::InvalidParameter("--q is required".into()))?;
        FieldCtx::with_options(
            q,
            &FieldOptions {
                modulus: self.modulus.clone(),
                generator: self.generator,
                max_order: None,
            },
        )
    }
}

#[derive(Debug, Args, Clone)]
pub struct SearchArgs {
    /// Largest q at which a completed search counts as proof of emptiness.
    #[arg(long, default_value_t = search::DEFAULT_EXHAUSTIVE_CAP)]
    pub cap: u32,
    /// Work units before a search gives up.
    #[arg(long, default_value_t = search::DEFAULT_BUDGET)]
    pub budget: u64,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            cap: self.cap,
            budget: self.budget,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    NearLinear,
    HalfIndex,
    Noncyclotomic,
    Irregular,
    OrthogonalSet,
    StrongOrthogonalSet,
    DdOrthoLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountKind {
    NearLinear,
    Ck,
    Dk,
    LinearPartners,
    Orthomorphisms,
    Solutions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundsKind {
    Q0,
    Weil,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SearchKind {
    Pair,
    DdLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Maps given either as a records file (`-` for stdin) or as `--map` multiplier lists.
#[derive(Debug, Args, Clone)]
pub struct MapInput {
    /// JSON record, array of records, or object with a `records` array.
    pub records: Option<String>,
    /// Multiplier list of a cyclotomic map; repeat for several maps. Needs --q.
    #[arg(long = "map")]
    pub maps: Vec<String>,
    #[command(flatten)]
    pub field: FieldArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and verify a map of the requested kind.
    Construct {
        kind: ConstructKind,
        #[command(flatten)]
        field: FieldArgs,
        /// Index for near-linear maps, or d for dd-ortho-linear.
        #[arg(long)]
        k: Option<u32>,
        /// Least indices of an orthogonal set.
        #[arg(long, value_delimiter = ',')]
        index_list: Option<Vec<u32>>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check maps: orthomorphism, strong, least index, pairwise orthogonality.
    Verify {
        #[command(flatten)]
        input: MapInput,
    },
    Count {
        what: CountKind,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: Option<u32>,
        /// Shift encodings for `solutions`.
        #[arg(long, value_delimiter = ',')]
        shifts: Option<Vec<u32>>,
        /// Multiplier list for `linear-partners` of one map.
        #[arg(long, value_delimiter = ',')]
        map: Option<Vec<u32>>,
        /// Largest index accepted by `ck` and `dk`.
        #[arg(long, default_value_t = counting::DEFAULT_COUNT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = search::DEFAULT_BUDGET)]
        budget: u64,
    },
    Bounds {
        what: BoundsKind,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value = "babai2")]
        bound: String,
        /// Shift encodings for `weil`; defaults to `0..t`.
        #[arg(long, value_delimiter = ',')]
        shifts: Option<Vec<u32>>,
    },
    /// Existence search with an honest verdict.
    Search {
        kind: SearchKind,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        a: Option<u32>,
        #[arg(long)]
        b: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run a claim manifest (the shipped one by default).
    Reproduce {
        manifest: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Export mutually orthogonal Latin squares built from orthogonal orthomorphisms.
    Mols {
        #[command(flatten)]
        input: MapInput,
        /// Directory for `L<i>.txt` files and the `mols.json` sidecar.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn json(v: &Value, code: i32) -> Self {
        Output {
            stdout: canonical(v) + "\n",
            code,
        }
    }
}

/// Compact JSON with sorted keys.
pub fn canonical(v: &Value) -> String {
    // serde_json's default map is ordered by key
    serde_json::to_string(v).expect("values always serialize")
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values always serialize")
}

/// `u128` as a JSON number when it fits in `u64`, otherwise as a decimal string.
pub fn big(n: u128) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

/// Exit code for an error.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::HalfIndexEmpty(_) => EXIT_EMPTY,
        Error::BudgetExceeded(_) | Error::CapExceeded { .. } | Error::NoWitness(_) => {
            EXIT_EXHAUSTED
        }
        _ => EXIT_USAGE,
    }
}

pub fn error_json(e: &Error) -> String {
    canonical(&json!({"error": e.to_string(), "reason_code": e.reason_code()}))
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Witness => EXIT_OK,
        Verdict::ProvenEmpty => EXIT_EMPTY,
        Verdict::Exhausted | Verdict::Skipped => EXIT_EXHAUSTED,
    }
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required")))
}

fn any_record(field: &FieldCtx, m: &AnyMap) -> MapRecord {
    match m {
        AnyMap::Cyclotomic(c) => MapRecord::cyclotomic(field, c),
        AnyMap::Table(t) => MapRecord::table(field, t),
    }
}

pub fn run(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Construct {
            kind,
            field,
            k,
            index_list,
            search,
        } => construct(kind, &field, k, index_list.as_deref(), &search.config()),
        Command::Verify { input } => verify(&input),
        Command::Count {
            what,
            field,
            k,
            shifts,
            map,
            cap,
            budget,
        } => count(
            what,
            &field,
            k,
            shifts.as_deref(),
            map.as_deref(),
            cap,
            budget,
        ),
        Command::Bounds {
            what,
            q,
            k,
            t,
            bound,
            shifts,
        } => bounds(what, q, k, t, &bound, shifts.as_deref()),
        Command::Search {
            kind,
            field,
            a,
            b,
            d,
            search,
        } => run_search(kind, &field, a, b, d, &search.config()),
        Command::Reproduce {
            manifest,
            format,
            search,
        } => reproduce(manifest.as_deref(), format, &search.config()),
        Command::Mols { input, out } => mols(&input, out.as_deref()),
    }
}

pub fn construct(
    kind: ConstructKind,
    fa: &FieldArgs,
    k: Option<u32>,
    index_list: Option<&[u32]>,
    cfg: &SearchConfig,
) -> Result<Output> {
    let field = fa.build()?;
    let desc = field.descriptor();
    let v = match kind {
        ConstructKind::NearLinear => {
            let k = need(k, "k")?;
            match constructions::near_linear_first(&field, k)? {
                Some(m) => json!({
                    "kind": "near-linear",
                    "field": desc,
                    "least_index": k,
                    "records": [MapRecord::cyclotomic(&field, &m)],
                }),
                None => {
                    return Ok(Output::json(
                        &json!({"kind": "near-linear", "field": desc, "records": []}),
                        EXIT_EMPTY,
                    ))
                }
            }
        }
        ConstructKind::HalfIndex => {
            let h = constructions::construct_half_index(&field)?;
            let route = match &h.route {
                HalfIndexRoute::Doubling => "doubling".to_string(),
                HalfIndexRoute::Evans(ex) => format!("family-{}", ex.family),
                HalfIndexRoute::EvansSearch { .. } => "evans-search".to_string(),
            };
            json!({
                "kind": "half-index",
                "field": desc,
                "least_index": (field.order() - 1) / 2,
                "route": route,
                "details": to_value(&h.route),
                "records": [MapRecord::table(&field, &h.map)],
            })
        }
        ConstructKind::Noncyclotomic => {
            let t = constructions::noncyclotomic(&field)?;
            json!({
                "kind": "noncyclotomic",
                "field": desc,
                "least_index": field.order() - 1,
                "records": [MapRecord::table(&field, &t)],
            })
        }
        ConstructKind::Irregular => {
            let t = constructions::construct_irregular(&field)?;
            json!({
                "kind": "irregular",
                "field": desc,
                "irregular": true,
                "records": [MapRecord::table(&field, &t)],
            })
        }
        ConstructKind::OrthogonalSet | ConstructKind::StrongOrthogonalSet => {
            let strong = kind == ConstructKind::StrongOrthogonalSet;
            let indices = index_list
                .ok_or_else(|| Error::InvalidParameter("--index-list is required".into()))?;
            let set = constructions::orthogonal_set(
                &field,
                indices,
                strong,
                constructions::DEFAULT_GREEDY_RETRIES,
                cfg.budget,
            )?;
            let name = if strong {
                "strong-orthogonal-set"
            } else {
                "orthogonal-set"
            };
            match set {
                Some(s) => {
                    let records: Vec<MapRecord> = s
                        .maps
                        .iter()
                        .map(|m| MapRecord::cyclotomic(&field, m))
                        .collect();
                    json!({
                        "kind": name,
                        "field": desc,
                        "indices": indices,
                        "method": if s.greedy { "greedy" } else { "backtracking" },
                        "records": records,
                    })
                }
                None => {
                    return Ok(Output::json(
                        &json!({"kind": name, "field": desc, "indices": indices, "records": []}),
                        EXIT_EXHAUSTED,
                    ))
                }
            }
        }
        ConstructKind::DdOrthoLinear => {
            let d = need(k, "k")?;
            let report = search::exists_dd_orthogonal_linear(&field, d, cfg)?;
            let code = verdict_code(report.verdict);
            return Ok(Output::json(
                &search_json(&field, "dd-ortho-linear", &report),
                code,
            ));
        }
    };
    Ok(Output::json(&v, EXIT_OK))
}

fn search_json(field: &FieldCtx, kind: &str, r: &SearchReport) -> Value {
    let mut v = to_value(r);
    v["kind"] = json!(kind);
    v["field"] = json!(field.descriptor());
    v["records"] = v["witness"].take();
    v.as_object_mut()
        .expect("report is an object")
        .remove("witness");
    v
}

fn parse_records(text: &str) -> Result<Vec<MapRecord>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::MalformedRecord(e.to_string()))?;
    let list = match v {
        Value::Array(a) => a,
        Value::Object(mut o) if o.contains_key("records") => match o.remove("records") {
            Some(Value::Array(a)) => a,
            _ => return Err(Error::MalformedRecord("records must be an array".into())),
        },
        v @ Value::Object(_) => vec![v],
        _ => {
            return Err(Error::MalformedRecord(
                "expected a record or an array".into(),
            ))
        }
    };
    list.into_iter()
        .map(|r| serde_json::from_value(r).map_err(|e| Error::MalformedRecord(e.to_string())))
        .collect()
}

fn parse_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("{x:?} is not an encoding")))
        })
        .collect()
}

fn read_input(path: &str) -> Result<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::MalformedRecord(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path)
            .map_err(|e| Error::MalformedRecord(format!("{path}: {e}")))?;
    }
    Ok(s)
}

/// Decodes the maps named on the command line, all over one field.
pub fn load_maps(input: &MapInput) -> Result<(FieldCtx, Vec<AnyMap>)> {
    match &input.records {
        Some(path) => {
            if !input.maps.is_empty() {
                return Err(Error::InvalidParameter(
                    "give either a records file or --map lists".into(),
                ));
            }
            let records = parse_records(&read_input(path)?)?;
            let first = records
                .first()
                .ok_or_else(|| Error::MalformedRecord("no records".into()))?;
            if records.iter().any(|r| r.field != first.field) {
                return Err(Error::FieldMismatch);
            }
            let field = FieldCtx::from_descriptor(&first.field)?;
            let maps = records
                .iter()
                .map(|r| r.decode(&field))
                .collect::<Result<_>>()?;
            Ok((field, maps))
        }
        None => {
            let field = input.field.build()?;
            let maps = input
                .maps
                .iter()
                .map(|m| {
                    let encs = parse_list(m)?;
                    let map = CyclotomicMap::from_encodings(&encs);
                    map.check_field(&field)?;
                    Ok(AnyMap::Cyclotomic(map))
                })
                .collect::<Result<_>>()?;
            Ok((field, maps))
        }
    }
}

pub fn verify(input: &MapInput) -> Result<Output> {
    let (field, maps) = load_maps(input)?;
    let tables: Vec<PermutationMap> = maps.iter().map(|m| m.to_table(&field)).collect();
    let mut per_map = Vec::new();
    for t in &tables {
        per_map.push(json!({
            "permutation": t.is_permutation(&field)?,
            "orthomorphism": t.is_orthomorphism(&field)?,
            "strong": t.is_strong(&field)?,
            "least_index": t.least_index(&field)?,
        }));
    }
    let n = tables.len();
    let mut matrix = vec![vec![Value::Null; n]; n];
    let mut all = true;
    for i in 0..n {
        for j in i + 1..n {
            let o = tables[i].is_orthogonal_to(&tables[j], &field)?;
            all &= o;
            matrix[i][j] = json!(o);
            matrix[j][i] = json!(o);
        }
    }
    let mut v = json!({
        "field": field.descriptor(),
        "maps": per_map,
        "orthogonality": matrix,
    });
    if n > 1 {
        v["orthogonal"] = json!(all);
    }
    Ok(Output::json(&v, EXIT_OK))
}

fn shift_elems(field: &FieldCtx, shifts: &[u32]) -> Result<Vec<Elem>> {
    shifts.iter().map(|&s| field.elem(u64::from(s))).collect()
}

pub fn count(
    what: CountKind,
    fa: &FieldArgs,
    k: Option<u32>,
    shifts: Option<&[u32]>,
    map: Option<&[u32]>,
    cap: usize,
    budget: u64,
) -> Result<Output> {
    let field = fa.build()?;
    let q = u64::from(field.order());
    let mut v = json!({"field": field.descriptor(), "q": q});
    match what {
        CountKind::NearLinear => {
            let k = need(k, "k")?;
            v["k"] = json!(k);
            v["count"] = json!(constructions::near_linear_all(&field, k)?.len());
            v["formula"] = json!(counting::near_linear_count(q, u64::from(k))?);
        }
        CountKind::Ck => {
            let k = need(k, "k")?;
            v["k"] = json!(k);
            v["count"] = big(counting::count_ck(&field, k, cap)?);
        }
        CountKind::Dk => {
            let k = need(k, "k")?;
            v["k"] = json!(k);
            v["count"] = big(counting::count_dk(&field, k, cap)?);
        }
        CountKind::LinearPartners => match map {
            Some(m) => {
                let m = CyclotomicMap::from_encodings(m);
                m.check_field(&field)?;
                let partners: Vec<u32> = search::linear_partners(&field, &m)?
                    .iter()
                    .map(|e| e.enc())
                    .collect();
                v["map"] = json!(m.encodings());
                v["count"] = json!(partners.len());
                v["partners"] = json!(partners);
            }
            None => {
                let d = need(k, "k")?;
                v["k"] = json!(d);
                v["formula"] = json!(counting::linear_partner_count(q, u64::from(d))?);
            }
        },
        CountKind::Orthomorphisms => match search::count_orthomorphisms(&field, budget) {
            Some(n) => v["count"] = big(n),
            None => return Err(Error::BudgetExceeded(budget)),
        },
        CountKind::Solutions => {
            let k = need(k, "k")?;
            let shifts =
                shifts.ok_or_else(|| Error::InvalidParameter("--shifts is required".into()))?;
            v["k"] = json!(k);
            v["shifts"] = json!(shifts);
            v["count"] = json!(counting::solution_count(
                &field,
                k,
                &shift_elems(&field, shifts)?
            )?);
        }
    }
    Ok(Output::json(&v, EXIT_OK))
}

pub fn bounds(
    what: BoundsKind,
    q: Option<u64>,
    k: u64,
    t: u64,
    bound: &str,
    shifts: Option<&[u32]>,
) -> Result<Output> {
    let v = match what {
        BoundsKind::Q0 => {
            let b: Bound = bound.parse()?;
            json!({
                "k": k,
                "t": t,
                "bound": b.name(),
                "q0": counting::q0_threshold(k, t, b)?,
            })
        }
        BoundsKind::Weil => {
            let q = need(q, "q")?;
            let params = BoundParams::new(q, k, t)?;
            let field = FieldCtx::new(q)?;
            let shifts: Vec<u32> = match shifts {
                Some(s) => s.to_vec(),
                None => (0..t as u32).collect(),
            };
            if shifts.len() as u64 != t {
                return Err(Error::InvalidParameter(format!("expected {t} shifts")));
            }
            let n = counting::solution_count(&field, k as u32, &shift_elems(&field, &shifts)?)?;
            let (lo, hi) = params.babai_bounds();
            json!({
                "q": q,
                "k": k,
                "t": t,
                "shifts": shifts,
                "solutions": n,
                "babai_lower": counting::decimal_string(lo),
                "babai_upper": counting::decimal_string(hi),
                "babai2_lower": counting::decimal_string(params.babai2_lower()),
                "within_babai": params.lower_holds(n, Bound::Babai)? && params.upper_holds(n)?,
                "above_babai2": params.lower_holds(n, Bound::Babai2)?,
            })
        }
    };
    Ok(Output::json(&v, EXIT_OK))
}

pub fn run_search(
    kind: SearchKind,
    fa: &FieldArgs,
    a: Option<u32>,
    b: Option<u32>,
    d: Option<u32>,
    cfg: &SearchConfig,
) -> Result<Output> {
    let field = fa.build()?;
    let (name, report) = match kind {
        SearchKind::Pair => (
            "pair",
            search::exists_orthogonal_pair(&field, need(a, "a")?, need(b, "b")?, cfg)?,
        ),
        SearchKind::DdLinear => (
            "dd-linear",
            search::exists_dd_orthogonal_linear(&field, need(d, "d")?, cfg)?,
        ),
    };
    Ok(Output::json(
        &search_json(&field, name, &report),
        verdict_code(report.verdict),
    ))
}

pub fn reproduce(path: Option<&Path>, format: Format, cfg: &SearchConfig) -> Result<Output> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Manifest {
            line: 0,
            msg: format!("{}: {e}", p.display()),
        })?,
        None => SHIPPED_MANIFEST.to_string(),
    };
    let claims = manifest::parse_manifest(&text)?;
    let outcomes = manifest::run_manifest(&claims, cfg);
    let passed = outcomes.iter().filter(|o| o.pass).count();
    let code = if passed == outcomes.len() {
        EXIT_OK
    } else {
        EXIT_CLAIMS_FAILED
    };
    let stdout = match format {
        Format::Text => manifest::render_text(&outcomes),
        Format::Json => {
            canonical(&json!({
                "claims": to_value(&outcomes),
                "passed": passed,
                "total": outcomes.len(),
            })) + "\n"
        }
    };
    Ok(Output { stdout, code })
}

pub fn mols(input: &MapInput, out: Option<&Path>) -> Result<Output> {
    let (field, maps) = load_maps(input)?;
    let tables: Vec<PermutationMap> = maps.iter().map(|m| m.to_table(&field)).collect();
    let squares = latin::mols_from_orthomorphisms(&field, &tables)?;
    let records: Vec<MapRecord> = maps.iter().map(|m| any_record(&field, m)).collect();
    let files: Vec<String> = (0..squares.len()).map(|i| format!("L{i}.txt")).collect();
    let sidecar = json!({
        "field": field.descriptor(),
        "order": field.order(),
        "squares": squares.len(),
        "files": files,
        "records": records,
    });
    match out {
        Some(dir) => {
            let io = |e: std::io::Error| Error::InvalidParameter(format!("{}: {e}", dir.display()));
            std::fs::create_dir_all(dir).map_err(io)?;
            for (sq, name) in squares.iter().zip(&files) {
                std::fs::write(dir.join(name), sq.to_text()).map_err(io)?;
            }
            std::fs::write(dir.join("mols.json"), canonical(&sidecar) + "\n").map_err(io)?;
            Ok(Output::json(&sidecar, EXIT_OK))
        }
        None => {
            let text: Vec<String> = squares.iter().map(|s| s.to_text()).collect();
            Ok(Output {
                stdout: text.join("\n"),
                code: EXIT_OK,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Output {
        let mut full = vec!["orthocyc"];
        full.extend_from_slice(args);
        run(Cli::try_parse_from(full).unwrap()).unwrap()
    }

    fn parsed(o: &Output) -> Value {
        serde_json::from_str(&o.stdout).unwrap()
    }

    #[test]
    fn half_index_q3_is_doubling() {
        let o = cli(&["construct", "half-index", "--q", "3"]);
        assert_eq!(o.code, 0);
        assert_eq!(parsed(&o)["route"], "doubling");
    }

    #[test]
    fn verify_identity_is_not_an_orthomorphism() {
        let o = cli(&["verify", "--q", "7", "--map", "1"]);
        assert_eq!(parsed(&o)["maps"][0]["orthomorphism"], false);
    }

    #[test]
    fn lifted_map_reports_least_index_2() {
        let o = cli(&["verify", "--q", "61", "--map", "8,31,8,31,8,31"]);
        assert_eq!(parsed(&o)["maps"][0]["least_index"], 2);
    }

    #[test]
    fn counts_and_bounds() {
        assert_eq!(
            parsed(&cli(&["count", "near-linear", "--q", "11", "--k", "2"]))["count"],
            12
        );
        assert_eq!(
            parsed(&cli(&["count", "dk", "--q", "7", "--k", "3"]))["count"],
            0
        );
        let o = cli(&["bounds", "q0", "--k", "6", "--t", "4"]);
        assert_eq!(parsed(&o)["q0"], 9154945);
    }

    #[test]
    fn proven_empty_exit_code() {
        let o = cli(&["search", "pair", "--q", "9", "--a", "2", "--b", "4"]);
        assert_eq!(o.code, EXIT_EMPTY);
        assert_eq!(parsed(&o)["verdict"], "proven-empty");
        let e =
            run(Cli::try_parse_from(["orthocyc", "construct", "half-index", "--q", "7"]).unwrap())
                .unwrap_err();
        assert_eq!(error_code(&e), EXIT_EMPTY);
    }

    #[test]
    fn big_values() {
        assert_eq!(big(5), json!(5));
        assert_eq!(big(u128::from(u64::MAX) + 1), json!("18446744073709551616"));
    }

    #[test]
    fn record_shapes() {
        let one = r#"{"field":"q=5^1;modulus=[];g=2","index":1,"multipliers":[2]}"#;
        assert_eq!(parse_records(one).unwrap().len(), 1);
        assert_eq!(parse_records(&format!("[{one},{one}]")).unwrap().len(), 2);
        assert_eq!(
            parse_records(&format!("{{\"records\":[{one}]}}"))
                .unwrap()
                .len(),
            1
        );
        assert!(parse_records("3").is_err());
        assert!(parse_records("{").is_err());
    }
}
