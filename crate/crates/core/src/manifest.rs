//! Claim manifests: one claim per line, `<id> <kind> key=value ... expect=<value>`, with `#`
//! starting a comment.
//!
//! | kind | keys | value compared with `expect` |
//! |------|------|------------------------------|
//! | `near-linear-count` | `q k` | number of near-linear maps of index `k` |
//! | `q0` | `k t bound` | threshold order |
//! | `dk-count` | `q k` | exact size of `D_k` |
//! | `half-index` | `q` | verdict |
//! | `noncyclotomic` | `q` | verdict |
//! | `irregular` | `q` | verdict |
//! | `orthogonal-pair` | `q a b` | verdict |
//! | `dd-linear` | `q d` | verdict |
//! | `orthogonal-set` | `q indices [strong]` | verdict |
//! | `published` | `q lists [orthogonal partners partner-list constraint]` | verdict |
//! | `linear-partners` | `q d` | partner count shared by all near-linear maps, or `mixed` |
//! | `exp-bound` | `q k` | `holds` or `fails` |
//! | `equal-c` | `q a b` | `equal` or `distinct` |
//!
//! Lists use commas inside a map and `/` between maps; `-` marks an absent entry.
//! Constraints are `element:k:class`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions;
use crate::counting::{self, Bound};
use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::numtheory;
use crate::search::{self, ClassConstraint, PublishedClaim, PublishedMap, SearchConfig, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub id: String,
    pub kind: String,
    pub params: BTreeMap<String, String>,
    pub expect: String,
    pub line: usize,
}

pub fn parse_manifest(text: &str) -> Result<Vec<Claim>> {
    let mut out = Vec::new();
    let mut ids = std::collections::BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Manifest { line, msg };
        let mut words = body.split_whitespace();
        let id = words.next().expect("nonempty line").to_string();
        let kind = words
            .next()
            .ok_or_else(|| err("missing claim kind".into()))?
            .to_string();
        let mut params = BTreeMap::new();
        for w in words {
            let (k, v) = w
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got {w:?}")))?;
            if params.insert(k.to_string(), v.to_string()).is_some() {
                return Err(err(format!("duplicate key {k:?}")));
            }
        }
        let expect = params
            .remove("expect")
            .ok_or_else(|| err("missing expect=".into()))?;
        if !ids.insert(id.clone()) {
            return Err(err(format!("duplicate claim id {id:?}")));
        }
        out.push(Claim {
            id,
            kind,
            params,
            expect,
            line,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimOutcome {
    pub id: String,
    pub kind: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

struct Params<'a>(&'a Claim);

impl Params<'_> {
    fn raw(&self, key: &str) -> Result<&str> {
        self.0
            .params
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::Manifest {
                line: self.0.line,
                msg: format!("missing {key}="),
            })
    }

    fn num(&self, key: &str) -> Result<u64> {
        let v = self.raw(key)?;
        v.parse().map_err(|_| Error::Manifest {
            line: self.0.line,
            msg: format!("{key}={v} is not a number"),
        })
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.0.params.get(key).map(String::as_str) {
            None | Some("false") => Ok(false),
            Some("true") => Ok(true),
            Some(v) => Err(Error::Manifest {
                line: self.0.line,
                msg: format!("{key}={v} is not a boolean"),
            }),
        }
    }

    fn nums(&self, s: &str) -> Result<Vec<u32>> {
        s.split(',')
            .map(|x| {
                x.parse().map_err(|_| Error::Manifest {
                    line: self.0.line,
                    msg: format!("{x:?} is not a number"),
                })
            })
            .collect()
    }

    fn field(&self) -> Result<FieldCtx> {
        FieldCtx::new(self.num("q")?)
    }
}

fn verdict_of<T>(r: Result<T>) -> Result<String> {
    match r {
        Ok(_) => Ok(Verdict::Witness.name().into()),
        Err(e) => Err(e),
    }
}

fn published_claim(p: &Params) -> Result<PublishedClaim> {
    let lists: Vec<Vec<u32>> = p
        .raw("lists")?
        .split('/')
        .map(|l| p.nums(l))
        .collect::<Result<_>>()?;
    let per_map = |key: &str| -> Result<Vec<Option<String>>> {
        Ok(match p.0.params.get(key) {
            None => vec![None; lists.len()],
            Some(v) => {
                let parts: Vec<Option<String>> = v
                    .split('/')
                    .map(|s| (s != "-").then(|| s.to_string()))
                    .collect();
                if parts.len() != lists.len() {
                    return Err(Error::Manifest {
                        line: p.0.line,
                        msg: format!("{key} needs one entry per list"),
                    });
                }
                parts
            }
        })
    };
    let partners = per_map("partners")?;
    let partner_lists = per_map("partner-list")?;
    let mut maps = Vec::new();
    for (i, l) in lists.iter().enumerate() {
        maps.push(PublishedMap {
            multipliers: l.clone(),
            least_index: l.len(),
            partners: partners[i]
                .as_ref()
                .map(|s| p.nums(s).map(|v| v[0] as usize))
                .transpose()?,
            partner_list: partner_lists[i].as_ref().map(|s| p.nums(s)).transpose()?,
        });
    }
    let constraints = match p.0.params.get("constraint") {
        None => Vec::new(),
        Some(v) => v
            .split('/')
            .map(|c| {
                let parts = p.nums(&c.replace(':', ","))?;
                match parts.as_slice() {
                    [element, k, class] => Ok(ClassConstraint {
                        element: *element,
                        k: *k,
                        class: *class,
                    }),
                    _ => Err(Error::Manifest {
                        line: p.0.line,
                        msg: format!("constraint {c:?} is not element:k:class"),
                    }),
                }
            })
            .collect::<Result<_>>()?,
    };
    Ok(PublishedClaim {
        q: p.num("q")? as u32,
        maps,
        pairwise_orthogonal: p.flag("orthogonal")?,
        constraints,
    })
}

fn evaluate(claim: &Claim, cfg: &SearchConfig) -> Result<(String, Option<String>)> {
    let p = Params(claim);
    let cap = counting::DEFAULT_COUNT_CAP;
    Ok(match claim.kind.as_str() {
        "near-linear-count" => {
            let f = p.field()?;
            let n = constructions::near_linear_all(&f, p.num("k")? as u32)?.len();
            (n.to_string(), None)
        }
        "q0" => {
            let bound: Bound = p.raw("bound")?.parse()?;
            (
                counting::q0_threshold(p.num("k")?, p.num("t")?, bound)?.to_string(),
                None,
            )
        }
        "dk-count" => {
            let f = p.field()?;
            (
                counting::count_dk(&f, p.num("k")? as u32, cap)?.to_string(),
                None,
            )
        }
        "half-index" => {
            let f = p.field()?;
            match constructions::construct_half_index(&f) {
                Err(Error::HalfIndexEmpty(q)) => {
                    let n = counting::count_dk(&f, (q - 1) / 2, cap)?;
                    let v = if n == 0 {
                        Verdict::ProvenEmpty
                    } else {
                        Verdict::Witness
                    };
                    (v.name().into(), Some(format!("count {n}")))
                }
                other => (verdict_of(other)?, None),
            }
        }
        "noncyclotomic" => {
            let f = p.field()?;
            if f.order() <= 5 {
                let n = counting::count_dk(&f, f.order() - 1, cap)?;
                let v = if n == 0 {
                    Verdict::ProvenEmpty
                } else {
                    Verdict::Witness
                };
                (v.name().into(), Some(format!("count {n}")))
            } else {
                (verdict_of(constructions::noncyclotomic(&f))?, None)
            }
        }
        "irregular" => {
            let f = p.field()?;
            (verdict_of(constructions::construct_irregular(&f))?, None)
        }
        "orthogonal-pair" => {
            let f = p.field()?;
            let r =
                search::exists_orthogonal_pair(&f, p.num("a")? as u32, p.num("b")? as u32, cfg)?;
            (r.verdict.name().into(), r.note)
        }
        "dd-linear" => {
            let f = p.field()?;
            let r = search::exists_dd_orthogonal_linear(&f, p.num("d")? as u32, cfg)?;
            (r.verdict.name().into(), r.note)
        }
        "orthogonal-set" => {
            let f = p.field()?;
            let indices = p.nums(p.raw("indices")?)?;
            let set = constructions::orthogonal_set(
                &f,
                &indices,
                p.flag("strong")?,
                constructions::DEFAULT_GREEDY_RETRIES,
                constructions::DEFAULT_SET_BUDGET,
            )?;
            match set {
                Some(s) => (
                    Verdict::Witness.name().into(),
                    Some(if s.greedy { "greedy" } else { "backtracking" }.into()),
                ),
                None => (Verdict::Exhausted.name().into(), None),
            }
        }
        "published" => {
            let pc = published_claim(&p)?;
            match search::validate_published(&claim.id, &pc) {
                Ok(r) => (
                    r.verdict.name().into(),
                    Some(format!("generator {}", r.generator)),
                ),
                Err(Error::NoLabellingFound(_)) => ("no-labelling".into(), None),
                Err(e) => return Err(e),
            }
        }
        "linear-partners" => {
            let f = p.field()?;
            let maps = constructions::near_linear_all(&f, p.num("d")? as u32)?;
            let mut counts = std::collections::BTreeSet::new();
            for m in &maps {
                counts.insert(search::count_linear_partners(&f, m)?);
            }
            let actual = match counts.len() {
                0 => "none".to_string(),
                1 => counts.first().expect("one").to_string(),
                _ => "mixed".to_string(),
            };
            (actual, Some(format!("{} maps", maps.len())))
        }
        "exp-bound" => {
            let f = p.field()?;
            let k = p.num("k")?;
            let bound = counting::exp_lower_bound(u64::from(f.order()), k)?;
            match search::count_orthomorphisms(&f, cfg.budget) {
                Some(n) => {
                    let ok = num_bigint::BigUint::from(n) >= bound;
                    (
                        if ok { "holds" } else { "fails" }.into(),
                        Some(format!("{n} orthomorphisms, bound {bound}")),
                    )
                }
                None => (Verdict::Exhausted.name().into(), None),
            }
        }
        "equal-c" => {
            let f = p.field()?;
            let (a, b) = (p.num("a")?, p.num("b")?);
            if b % a != 0 {
                return Err(Error::InvalidParameter(format!("{a} does not divide {b}")));
            }
            let mut distinct = None;
            for k in numtheory::divisors(b) {
                if a % k == 0 {
                    continue;
                }
                let n = counting::count_dk(&f, k as u32, cap)?;
                if n > 0 {
                    distinct = Some(format!("|D_{k}| = {n}"));
                    break;
                }
            }
            match distinct {
                Some(d) => ("distinct".into(), Some(d)),
                None => ("equal".into(), None),
            }
        }
        other => {
            return Err(Error::Manifest {
                line: claim.line,
                msg: format!("unknown claim kind {other:?}"),
            })
        }
    })
}

pub fn run_claim(claim: &Claim, cfg: &SearchConfig) -> ClaimOutcome {
    let (actual, detail) = match evaluate(claim, cfg) {
        Ok(v) => v,
        Err(e) => (format!("error:{}", e.reason_code()), Some(e.to_string())),
    };
    ClaimOutcome {
        id: claim.id.clone(),
        kind: claim.kind.clone(),
        pass: actual == claim.expect,
        expected: claim.expect.clone(),
        actual,
        detail,
    }
}

/// Runs every claim, in parallel, keeping manifest order.
pub fn run_manifest(claims: &[Claim], cfg: &SearchConfig) -> Vec<ClaimOutcome> {
    claims.par_iter().map(|c| run_claim(c, cfg)).collect()
}

pub fn render_text(outcomes: &[ClaimOutcome]) -> String {
    let width = outcomes.iter().map(|o| o.id.len()).max().unwrap_or(0);
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!(
            "{} {:width$} expected={} actual={}",
            if o.pass { "PASS" } else { "FAIL" },
            o.id,
            o.expected,
            o.actual,
        ));
        if let Some(d) = &o.detail {
            out.push_str(&format!(" ({d})"));
        }
        out.push('\n');
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    out.push_str(&format!("{passed}/{} claims pass\n", outcomes.len()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_run() {
        let text = "# comment\n\
                    nl-q11-k2 near-linear-count q=11 k=2 expect=12\n\
                    \n\
                    pair-q9 orthogonal-pair q=9 a=2 b=4 expect=witness  # wrong on purpose\n";
        let claims = parse_manifest(text).unwrap();
        assert_eq!(claims.len(), 2);
        assert_eq!(claims[1].line, 4);
        let out = run_manifest(&claims, &SearchConfig::default());
        assert!(out[0].pass);
        assert!(!out[1].pass);
        assert_eq!(out[1].actual, "proven-empty");
        assert!(render_text(&out).ends_with("1/2 claims pass\n"));
    }

    #[test]
    fn empty_manifest() {
        assert!(parse_manifest("").unwrap().is_empty());
        assert!(parse_manifest("# nothing\n\n").unwrap().is_empty());
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            parse_manifest("x q0 k=6"),
            Err(Error::Manifest { line: 1, .. })
        ));
        assert!(parse_manifest("x\n").is_err());
        assert!(parse_manifest("x q0 k6 expect=1").is_err());
        assert!(parse_manifest("x q0 expect=1\nx q0 expect=2").is_err());
        let c = parse_manifest("x frobnicate expect=1").unwrap();
        let o = run_claim(&c[0], &SearchConfig::default());
        assert_eq!(o.actual, "error:manifest-parse");
    }

    #[test]
    fn published_keys() {
        let c = parse_manifest(
            "f31 published q=31 lists=3,9,2/3,9,16 partners=1/5 partner-list=8/- \
             constraint=3:3:1 expect=witness",
        )
        .unwrap();
        assert!(run_claim(&c[0], &SearchConfig::default()).pass);
    }
}
