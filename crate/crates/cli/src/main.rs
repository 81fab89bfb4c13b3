//! `bblat`: JSON front end for the lattice library. Every subcommand writes a
//! single JSON document to stdout; exit code 0 on success, 1 on domain
//! errors, 2 on malformed input.

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use bblattice::chambers::{chamber_signature, is_kaehler, is_generic_3space};
use bblattice::db::{builtin_types, euler_characteristic, validate_type, DeformationType};
use bblattice::enumerate::short_vectors;
use bblattice::error::Error;
use bblattice::jsonio::{
    cvec_from_value, cvec_to_value, ext_scalar_to_obj, extvec_from_value, gram_to_value,
    int_to_value, intvec_from_value, intvec_to_value, period_from_value, period_to_value,
    qvec_from_value, qvec_to_value, rat_from_value, rat_to_value, sublattice_to_value,
    wallset_to_value,
};
use bblattice::lattice::{Constraint, IntVec, Lattice, Sublattice};
use bblattice::period::{
    component, default_wref, embed_h, find_bfield_scale, in_d_tilde, in_g, mirror, mirror_bar,
    mirror_polarized, projectively_equal, rotate_phase, MarkedPeriod, USummand,
};
use bblattice::scalar::{Int, Rat};
use bblattice::walls::{walls_in_definite_sublattice, walls_meeting_cone, Cone, WallNumerics};

#[derive(Parser)]
#[command(name = "bblat", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rank, signature and discriminant of a lattice
    LatticeInfo {
        #[arg(long)]
        spec: String,
    },
    /// Rational class representing a covector via the pairing
    Dual {
        #[arg(long)]
        spec: String,
        /// Inline JSON array of rationals
        #[arg(long)]
        covector: String,
    },
    /// Primitive orthogonal complement of a list of vectors
    Complement {
        #[arg(long)]
        spec: String,
        /// Inline JSON array of coordinate rows
        #[arg(long)]
        vectors: String,
        /// Radicand: rows are then [a, b] coordinates in Q(sqrt n)
        #[arg(long)]
        n: Option<u64>,
    },
    /// Vectors of a definite lattice with square in [lo, hi]
    Shortvec {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        lo: i64,
        #[arg(long)]
        hi: i64,
    },
    /// Collapsed Fujiki 4-fold product (c/24) sum of pairings
    Fujiki {
        #[arg(long)]
        spec: String,
        /// Fujiki constant, rational literal like 1 or 3/2
        #[arg(long)]
        c: String,
        /// Inline JSON array of exactly four coordinate rows
        #[arg(long)]
        vectors: String,
    },
    /// Wall classes inside a negative definite sublattice
    WallsEnum {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        numerics: String,
        /// Inline JSON array of integer basis rows
        #[arg(long)]
        sublattice: String,
    },
    /// Wall classes whose hyperplanes meet a rational cone
    WallsCone {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        numerics: String,
        /// Inline JSON array of generator rows
        #[arg(long)]
        cone: String,
        /// Interior reference class, inline JSON array
        #[arg(long)]
        omega: String,
    },
    /// Kaehler verdict for alpha relative to a reference class
    Kaehler {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        numerics: String,
        #[arg(long)]
        omega: String,
        #[arg(long)]
        alpha: String,
    },
    /// Chamber signature of alpha (wall classes with signs)
    Chamber {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        numerics: String,
        #[arg(long)]
        omega: String,
        #[arg(long)]
        alpha: String,
    },
    /// Whether three Q(sqrt n) vectors span a generic positive 3-space
    Generic3 {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        n: u64,
        /// Inline JSON array of three coordinate rows
        #[arg(long)]
        w: String,
    },
    /// Period domain membership of a marked period
    PeriodCheck {
        #[arg(long)]
        input: String,
        #[arg(long)]
        spec: Option<String>,
        /// When given, additionally report the wall-free condition
        #[arg(long)]
        numerics: Option<String>,
    },
    /// Orientation component (1 or 2) of a marked period
    Component {
        #[arg(long)]
        input: String,
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        summand: usize,
        /// Optional reference 3-space: inline JSON array of three rows
        #[arg(long)]
        wref: Option<String>,
    },
    /// Apply the mirror involution to a marked period
    MirrorApply {
        #[arg(long)]
        input: String,
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        summand: usize,
    },
    /// Involution, component exchange and embedding compatibility checks
    MirrorCheck {
        #[arg(long)]
        input: String,
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        summand: usize,
    },
    /// Embed a marked period into the extended Grassmannian
    Hbar {
        #[arg(long)]
        input: String,
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        summand: usize,
        /// Also apply the slot-swapping involution to the image
        #[arg(long)]
        bar: bool,
    },
    /// Canonical phase rotation of a complex class against v
    Rotate {
        /// File with {"lattice", "n", "sigma": {"re", "im"}}
        #[arg(long)]
        input: String,
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        summand: usize,
        /// Error out when sigma is entirely orthogonal to v
        #[arg(long)]
        transverse: bool,
    },
    /// First B-field scale putting a period in the full mirror domain
    BfieldScan {
        #[arg(long)]
        input: String,
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        summand: usize,
        #[arg(long)]
        numerics: String,
        /// Inline JSON array of rational candidates
        #[arg(long)]
        candidates: String,
    },
    /// Mirror of a polarizing sublattice
    PolarizedMirror {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        summand: usize,
        /// Inline JSON array of integer basis rows for N
        #[arg(long)]
        nbasis: String,
    },
    /// Euler characteristic from Betti numbers and singularity data
    Euler {
        #[arg(long)]
        b2: i64,
        #[arg(long)]
        b3: i64,
        /// Singularity inventory, e.g. "-1x28" or "-1x28,-2x3"
        #[arg(long, allow_hyphen_values = true)]
        sing: Option<String>,
    },
    /// Built-in deformation-type records with diagnostics
    Types {
        /// Restrict to one record by name
        #[arg(long)]
        name: Option<String>,
        /// Merge user records from a JSON file (by name)
        #[arg(long)]
        file: Option<String>,
    },
}

/// Exit 1: a well-formed request the mathematics rejects.
/// Exit 2: the request itself is malformed.
enum Failure {
    Domain(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec(_) | Error::InvalidNumerics(_) => Failure::Input(e.to_string()),
            other => Failure::Domain(other),
        }
    }
}

fn input_err(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_err(format!("cannot read {path}: {e}")))
}

fn parse_json(s: &str, what: &str) -> Result<Value, Failure> {
    serde_json::from_str(s).map_err(|e| input_err(format!("{what}: invalid JSON: {e}")))
}

/// A lattice spec file (or inline value) holds either a JSON string in the
/// block mini-language ("U(2)^3+E8(-1)") or a structured spec object.
fn lattice_from_value(v: &Value) -> Result<Lattice, Failure> {
    match v {
        Value::String(s) => Ok(Lattice::parse(s)?),
        other => {
            let spec = serde_json::from_value(other.clone())
                .map_err(|e| input_err(format!("invalid lattice spec: {e}")))?;
            Ok(Lattice::build(&spec)?)
        }
    }
}

fn load_lattice(path: &str) -> Result<Lattice, Failure> {
    let v = parse_json(&read_file(path)?, path)?;
    lattice_from_value(&v)
}

/// Numerics argument: the literals "k3" and "k3[2]", or a path to a JSON file
/// {"bound": N, "rules": [{"square": s, "div": d?}, ...]}.
fn load_numerics(arg: &str) -> Result<WallNumerics, Failure> {
    match arg {
        "k3" => Ok(WallNumerics::k3()),
        "k3[2]" => Ok(WallNumerics::k3_hilb2()),
        path => Ok(WallNumerics::from_json(&read_file(path)?)?),
    }
}

fn qvec_arg(s: &str, what: &str) -> Result<bblattice::lattice::QVec, Failure> {
    Ok(qvec_from_value(&parse_json(s, what)?)?)
}

fn rows_arg(s: &str, what: &str) -> Result<Vec<Value>, Failure> {
    parse_json(s, what)?
        .as_array()
        .cloned()
        .ok_or_else(|| input_err(format!("{what}: expected an array of rows")))
}

/// A period input file: the MarkedPeriod fields plus an optional "lattice"
/// key; --spec overrides the embedded lattice.
fn load_period(path: &str, spec: &Option<String>) -> Result<(Lattice, MarkedPeriod), Failure> {
    let v = parse_json(&read_file(path)?, path)?;
    let l = match spec {
        Some(p) => load_lattice(p)?,
        None => {
            let lv = v
                .get("lattice")
                .ok_or_else(|| input_err(format!("{path} has no \"lattice\"; pass --spec")))?;
            lattice_from_value(lv)?
        }
    };
    let p = period_from_value(&v)?;
    if p.alpha.len() != l.rank() {
        return Err(input_err(format!(
            "period has {} coordinates but the lattice has rank {}",
            p.alpha.len(),
            l.rank()
        )));
    }
    Ok((l, p))
}

fn summand_of(l: &Lattice, idx: usize) -> Result<USummand, Failure> {
    Ok(USummand::from_block(l, idx)?)
}

fn int_sublattice(l: &Lattice, rows: &[Value]) -> Result<Sublattice, Failure> {
    let basis: Vec<IntVec> = rows
        .iter()
        .map(intvec_from_value)
        .collect::<Result<_, _>>()?;
    let k = basis.len();
    let mut gram = vec![vec![Int::from(0); k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = l.pair_int(&basis[i], &basis[j])?;
        }
    }
    let degenerate = {
        let g = bblattice::mat::int_to_rat_mat(&gram);
        bblattice::mat::rank_rat(&g) < k
    };
    Ok(Sublattice { basis, gram, degenerate })
}

fn parse_sing(s: &str) -> Result<Vec<(i64, u32)>, Failure> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (sx, count) = part
            .rsplit_once('x')
            .ok_or_else(|| input_err(format!("bad singularity entry `{part}`; use SXxCOUNT")))?;
        let sx: i64 = sx
            .trim()
            .parse()
            .map_err(|_| input_err(format!("bad s_x in `{part}`")))?;
        let count: u32 = count
            .trim()
            .parse()
            .map_err(|_| input_err(format!("bad count in `{part}`")))?;
        out.push((sx, count));
    }
    Ok(out)
}

fn signature_json(sig: &bblattice::chambers::ChamberSignature) -> (Value, Value) {
    let walls = Value::Array(sig.walls.walls.iter().map(intvec_to_value).collect());
    let signs = Value::Array(
        sig.signs
            .iter()
            .map(|s| Value::String(s.as_str().into()))
            .collect(),
    );
    (walls, signs)
}

fn type_record(t: &DeformationType) -> Value {
    let lat = t.lattice();
    let (pos, neg, disc) = match lat.signature_disc() {
        Ok(x) => x,
        Err(_) => (0, 0, Int::from(0)),
    };
    json!({
        "name": t.name,
        "b2": t.b2,
        "b3": t.b3,
        "rank": lat.rank(),
        "signature": [pos, neg],
        "disc": int_to_value(&disc),
        "fujiki_constant": t.fujiki_constant.as_ref().map(rat_to_value),
        "wall_numerics": t.wall_numerics.as_ref().map(|w| serde_json::to_value(w).unwrap()),
        "singularities": t.singularities.iter().map(|s| json!({
            "kind": s.kind, "s_x": s.s_x, "count": s.count,
        })).collect::<Vec<_>>(),
        "findings": validate_type(t),
    })
}

fn user_types(path: &str) -> Result<Vec<DeformationType>, Failure> {
    let v = parse_json(&read_file(path)?, path)?;
    let arr = v
        .as_array()
        .ok_or_else(|| input_err(format!("{path}: expected an array of type records")))?;
    let mut out = Vec::new();
    for rec in arr {
        let obj = rec
            .as_object()
            .ok_or_else(|| input_err("type record must be an object"))?;
        let name = obj
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| input_err("type record needs a name"))?
            .to_string();
        let lattice_v = obj
            .get("lattice")
            .ok_or_else(|| input_err("type record needs a lattice"))?;
        let lattice = match lattice_v {
            Value::String(s) => bblattice::lattice::parse_spec_string(s)?,
            other => serde_json::from_value(other.clone())
                .map_err(|e| input_err(format!("invalid lattice spec: {e}")))?,
        };
        let b2 = obj
            .get("b2")
            .and_then(Value::as_u64)
            .ok_or_else(|| input_err("type record needs an integer b2"))? as u32;
        let b3 = obj.get("b3").and_then(Value::as_u64).map(|x| x as u32);
        let fujiki_constant = match obj.get("fujiki_constant") {
            None | Some(Value::Null) => None,
            Some(v) => Some(rat_from_value(v)?),
        };
        let wall_numerics = match obj.get("wall_numerics") {
            None | Some(Value::Null) => None,
            Some(v) => {
                let w: WallNumerics = serde_json::from_value(v.clone())
                    .map_err(|e| input_err(format!("invalid wall numerics: {e}")))?;
                Some(WallNumerics::new(w.bound, w.rules)?)
            }
        };
        let mut singularities = Vec::new();
        if let Some(sv) = obj.get("singularities") {
            let sarr = sv
                .as_array()
                .ok_or_else(|| input_err("singularities must be an array"))?;
            for s in sarr {
                singularities.push(bblattice::db::Singularity {
                    kind: s
                        .get("kind")
                        .and_then(Value::as_str)
                        .unwrap_or("unknown")
                        .to_string(),
                    s_x: s
                        .get("s_x")
                        .and_then(Value::as_i64)
                        .ok_or_else(|| input_err("singularity needs integer s_x"))?,
                    count: s
                        .get("count")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| input_err("singularity needs a count"))?
                        as u32,
                });
            }
        }
        out.push(DeformationType {
            name,
            lattice,
            b2,
            b3,
            fujiki_constant,
            wall_numerics,
            singularities,
            flags: bblattice::db::TypeFlags {
                projective_known: false,
                b2_ge_5: b2 >= 5,
                surface: false,
            },
        });
    }
    Ok(out)
}

fn run(cmd: Cmd) -> Result<Value, Failure> {
    match cmd {
        Cmd::LatticeInfo { spec } => {
            let l = load_lattice(&spec)?;
            let (pos, neg, disc) = l.signature_disc()?;
            Ok(json!({
                "rank": l.rank(),
                "signature": [pos, neg],
                "disc": int_to_value(&disc),
            }))
        }
        Cmd::Dual { spec, covector } => {
            let l = load_lattice(&spec)?;
            let f = qvec_arg(&covector, "--covector")?;
            let d = l.dual_class(&f.0)?;
            Ok(json!({"dual": qvec_to_value(&d)}))
        }
        Cmd::Complement { spec, vectors, n } => {
            let l = load_lattice(&spec)?;
            let rows = rows_arg(&vectors, "--vectors")?;
            let constraints: Vec<Constraint> = match n {
                None => rows
                    .iter()
                    .map(|r| Ok(Constraint::Q(qvec_from_value(r)?)))
                    .collect::<Result<_, Failure>>()?,
                Some(n) => rows
                    .iter()
                    .map(|r| Ok(Constraint::Ext(extvec_from_value(r, n)?)))
                    .collect::<Result<_, Failure>>()?,
            };
            let sub = l.orth_complement(&constraints)?;
            Ok(sublattice_to_value(&sub))
        }
        Cmd::Shortvec { spec, lo, hi } => {
            let l = load_lattice(&spec)?;
            let vs = short_vectors(&l, &Int::from(lo), &Int::from(hi))?;
            Ok(json!({"vectors": vs.iter().map(intvec_to_value).collect::<Vec<_>>()}))
        }
        Cmd::Fujiki { spec, c, vectors } => {
            let l = load_lattice(&spec)?;
            let c = Rat::from_str(c.trim()).map_err(|_| input_err("bad --c rational"))?;
            let rows = rows_arg(&vectors, "--vectors")?;
            if rows.len() != 4 {
                return Err(input_err("--vectors needs exactly four rows"));
            }
            let a: Vec<_> = rows
                .iter()
                .map(qvec_from_value)
                .collect::<Result<_, _>>()?;
            let v = l.fujiki_product(&c, &a[0], &a[1], &a[2], &a[3])?;
            Ok(json!({"value": rat_to_value(&v)}))
        }
        Cmd::WallsEnum { spec, numerics, sublattice } => {
            let l = load_lattice(&spec)?;
            let num = load_numerics(&numerics)?;
            let rows = rows_arg(&sublattice, "--sublattice")?;
            let sub = int_sublattice(&l, &rows)?;
            let walls = walls_in_definite_sublattice(&l, &sub, &num)?;
            Ok(json!({"walls": wallset_to_value(&walls)}))
        }
        Cmd::WallsCone { spec, numerics, cone, omega } => {
            let l = load_lattice(&spec)?;
            let num = load_numerics(&numerics)?;
            let rows = rows_arg(&cone, "--cone")?;
            let gens = rows
                .iter()
                .map(qvec_from_value)
                .collect::<Result<_, _>>()?;
            let cone = Cone::new(gens)?;
            let omega = qvec_arg(&omega, "--omega")?;
            let walls = walls_meeting_cone(&l, &num, &cone, &omega)?;
            Ok(json!({"walls": wallset_to_value(&walls)}))
        }
        Cmd::Kaehler { spec, numerics, omega, alpha } => {
            let l = load_lattice(&spec)?;
            let num = load_numerics(&numerics)?;
            let omega = qvec_arg(&omega, "--omega")?;
            let alpha = qvec_arg(&alpha, "--alpha")?;
            let (ok, sig) = is_kaehler(&l, &num, &omega, &alpha)?;
            let (walls, signs) = signature_json(&sig);
            Ok(json!({"kaehler": ok, "walls": walls, "signs": signs}))
        }
        Cmd::Chamber { spec, numerics, omega, alpha } => {
            let l = load_lattice(&spec)?;
            let num = load_numerics(&numerics)?;
            let omega = qvec_arg(&omega, "--omega")?;
            let alpha = qvec_arg(&alpha, "--alpha")?;
            let sig = chamber_signature(&l, &num, &omega, &alpha)?;
            let (walls, signs) = signature_json(&sig);
            Ok(json!({"walls": walls, "signs": signs}))
        }
        Cmd::Generic3 { spec, n, w } => {
            let l = load_lattice(&spec)?;
            let rows = rows_arg(&w, "--w")?;
            let gens: Vec<_> = rows
                .iter()
                .map(|r| extvec_from_value(r, n))
                .collect::<Result<_, _>>()?;
            Ok(json!({"generic": is_generic_3space(&l, &gens)?}))
        }
        Cmd::PeriodCheck { input, spec, numerics } => {
            let (l, p) = load_period(&input, &spec)?;
            let g = in_g(&l, &p)?;
            match numerics {
                None => Ok(json!({"in_g": g})),
                Some(num) => {
                    let num = load_numerics(&num)?;
                    Ok(json!({"in_g": g, "in_d_tilde": in_d_tilde(&l, &num, &p)?}))
                }
            }
        }
        Cmd::Component { input, spec, summand, wref } => {
            let (l, p) = load_period(&input, &spec)?;
            let s = summand_of(&l, summand)?;
            let w = match wref {
                None => default_wref(&l, &s, &p)?,
                Some(raw) => rows_arg(&raw, "--wref")?
                    .iter()
                    .map(|r| extvec_from_value(r, p.radicand()))
                    .collect::<Result<_, _>>()?,
            };
            Ok(json!({"component": component(&l, &p, &w)?}))
        }
        Cmd::MirrorApply { input, spec, summand } => {
            let (l, p) = load_period(&input, &spec)?;
            let s = summand_of(&l, summand)?;
            Ok(period_to_value(&mirror(&l, &s, &p)?))
        }
        Cmd::MirrorCheck { input, spec, summand } => {
            let (l, p) = load_period(&input, &spec)?;
            let s = summand_of(&l, summand)?;
            let m = mirror(&l, &s, &p)?;
            let involution = mirror(&l, &s, &m)? == p;
            let w = default_wref(&l, &s, &p)?;
            let lhs = embed_h(&l, &s, &m)?;
            let rhs = mirror_bar(&embed_h(&l, &s, &p)?)?;
            Ok(json!({
                "involution": involution,
                "component_in": component(&l, &p, &w)?,
                "component_out": component(&l, &m, &w)?,
                "h_compatible": projectively_equal(&lhs, &rhs)?,
            }))
        }
        Cmd::Hbar { input, spec, summand, bar } => {
            let (l, p) = load_period(&input, &spec)?;
            let s = summand_of(&l, summand)?;
            let mut g = embed_h(&l, &s, &p)?;
            if bar {
                g = mirror_bar(&g)?;
            }
            Ok(json!({"a1": cvec_to_value(&g.a1), "a2": cvec_to_value(&g.a2)}))
        }
        Cmd::Rotate { input, spec, summand, transverse } => {
            let v = parse_json(&read_file(&input)?, &input)?;
            let l = match &spec {
                Some(p) => load_lattice(p)?,
                None => lattice_from_value(
                    v.get("lattice")
                        .ok_or_else(|| input_err("input has no \"lattice\"; pass --spec"))?,
                )?,
            };
            let n = v
                .get("n")
                .and_then(Value::as_u64)
                .ok_or_else(|| input_err("input needs a positive integer n"))?;
            if n == 0 {
                return Err(input_err("n must be positive"));
            }
            let sigma = cvec_from_value(
                v.get("sigma").ok_or_else(|| input_err("input needs sigma"))?,
                n,
            )?;
            let s = summand_of(&l, summand)?;
            let (a, b, rotated) = rotate_phase(&l, &sigma, &s.v, transverse)?;
            Ok(json!({
                "a": ext_scalar_to_obj(&a),
                "b": ext_scalar_to_obj(&b),
                "rotated": cvec_to_value(&rotated),
            }))
        }
        Cmd::BfieldScan { input, spec, summand, numerics, candidates } => {
            let (l, p) = load_period(&input, &spec)?;
            let s = summand_of(&l, summand)?;
            let num = load_numerics(&numerics)?;
            let cands: Vec<Rat> = rows_arg(&candidates, "--candidates")?
                .iter()
                .map(rat_from_value)
                .collect::<Result<_, _>>()?;
            let hit = find_bfield_scale(&l, &s, &num, &p, &cands)?;
            Ok(json!({"scale": hit.as_ref().map(rat_to_value)}))
        }
        Cmd::PolarizedMirror { spec, summand, nbasis } => {
            let l = load_lattice(&spec)?;
            let s = summand_of(&l, summand)?;
            let rows = rows_arg(&nbasis, "--nbasis")?;
            let basis: Vec<IntVec> = rows
                .iter()
                .map(intvec_from_value)
                .collect::<Result<_, _>>()?;
            let (saturated, sub) = mirror_polarized(&l, &basis, &s)?;
            Ok(json!({
                "saturated": saturated,
                "basis": sub.basis.iter().map(intvec_to_value).collect::<Vec<_>>(),
                "gram": gram_to_value(&sub.gram),
                "degenerate": sub.degenerate,
            }))
        }
        Cmd::Euler { b2, b3, sing } => {
            let inventory = match sing {
                None => Vec::new(),
                Some(s) => parse_sing(&s)?,
            };
            Ok(json!({"chi": euler_characteristic(b2, b3, &inventory)}))
        }
        Cmd::Types { name, file } => {
            let mut records = builtin_types();
            if let Some(path) = file {
                for user in user_types(&path)? {
                    match records.iter_mut().find(|t| t.name == user.name) {
                        Some(slot) => *slot = user,
                        None => records.push(user),
                    }
                }
            }
            if let Some(n) = name {
                records.retain(|t| t.name == n);
                if records.is_empty() {
                    return Err(input_err(format!("unknown type `{n}`")));
                }
            }
            Ok(json!({"types": records.iter().map(type_record).collect::<Vec<_>>()}))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let msg = e.to_string();
            println!(
                "{}",
                json!({"error": {"kind": "usage", "message": msg}})
            );
            return ExitCode::from(2);
        }
    };
    match run(cli.cmd) {
        Ok(doc) => {
            println!("{doc}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(e)) => {
            println!(
                "{}",
                json!({"error": {"kind": "domain", "message": e.to_string()}})
            );
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            println!(
                "{}",
                json!({"error": {"kind": "input", "message": msg}})
            );
            ExitCode::from(2)
        }
    }
}
