//! Command line front end. [`run`] does all the work and returns the exit
//! code with the JSON document to print, so it can be tested in-process.
//!
//! Exit codes: 0 for semistable / stable / true, 1 for unstable / false
//! (with a witness when there is one), 2 for input errors.

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

use stable_pairs::binary_forms::{self, BfVerdict, BinaryForm, OracleVerdict, Violation};
use stable_pairs::energy::{self, DescentParams, InfimumEstimate, TorusElement};
use stable_pairs::futaki::{self, SpanRelation};
use stable_pairs::io::{self, int_to_json, one_ps_to_json, point_set_to_json, rational_to_json};
use stable_pairs::lattice::{LatticePoint, OnePS};
use stable_pairs::limits;
use stable_pairs::pairs::{self, Pair, StableVerdict, Verdict};
use stable_pairs::polytope::{self, PointSet};
use stable_pairs::varieties::{self, VarietyDatum};
use stable_pairs::Error;

#[derive(Parser, Debug)]
#[command(name = "stable-pairs", version, about = "Stability of pairs in torus representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// problem file, or `-` for standard input
    file: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Torus semistability of the pair in FILE.
    Check(Input),
    /// Search for the least stabilizing exponent m.
    Stable {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 32)]
        max_m: u32,
        /// override the module degree q
        #[arg(long)]
        q: Option<u32>,
    },
    /// Destabilizing one-parameter subgroup with its weights and limits.
    Destabilize(Input),
    /// Relative invariant certificate for a character of v.
    Relinv {
        #[command(flatten)]
        input: Input,
        /// a support point of v, e.g. `1,0` or `[1,0]`
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
    },
    /// One-parameter subgroup degenerating supp(v) onto the target support.
    Limit {
        #[command(flatten)]
        input: Input,
        /// points separated by `;`, e.g. `1,0;0,1`, or a JSON list of points
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
    /// Extension criterion with A = supp(v) and B = supp(w).
    Extend(Input),
    /// Pair energy, at the identity or along a one-parameter subgroup.
    Energy {
        #[command(flatten)]
        input: Input,
        /// one-parameter subgroup, e.g. `1,-1`
        #[arg(long, allow_hyphen_values = true)]
        ops: Option<String>,
        /// also report the asymptotic slope along --ops
        #[arg(long, requires = "ops")]
        slope: bool,
    },
    /// Stabilizer subtorus, classical Futaki character and affine spans.
    Futaki(Input),
    /// Pair of binary forms given by roots, e.g. `--g "[0:1]^2 [1:0]"`.
    Binary {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// also run the conjugated-torus oracle
        #[arg(long)]
        oracle: bool,
    },
    /// Degrees and partitions for X^n in P^N of degree d.
    Variety {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        /// average scalar curvature, e.g. `1` or `1/3`
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long = "N")]
        big_n: u32,
        #[arg(long)]
        genus_check: bool,
    },
}

/// Exit code and JSON document of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: Value,
}

impl Outcome {
    fn yes(output: Value) -> Self {
        Outcome { code: 0, output }
    }

    fn no(output: Value) -> Self {
        Outcome { code: 1, output }
    }

    fn input_error(msg: impl std::fmt::Display) -> Self {
        Outcome { code: 2, output: json!({"status": "error", "error": msg.to_string()}) }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome::yes(json!({"status": "help", "text": e.to_string()}))
                }
                _ => Outcome::input_error(e.to_string().trim_end()),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(out) => out,
        Err(e) => Outcome::input_error(e),
    }
}

fn read_pair(input: &Input) -> Result<Pair, Error> {
    let text = if input.file.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Parse(e.to_string()))?;
        s
    } else {
        fs::read_to_string(&input.file)
            .map_err(|e| Error::Parse(format!("{}: {e}", input.file.display())))?
    };
    io::parse_pair(&text)
}

fn parse_coords(s: &str) -> Result<Vec<BigInt>, Error> {
    let s = s.trim();
    if s.starts_with('[') {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        return io::coords_from_json(&v);
    }
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer {t:?}"))))
        .collect()
}

fn parse_point(s: &str, rank: usize) -> Result<LatticePoint, Error> {
    let c = parse_coords(s)?;
    if c.len() != rank {
        return Err(Error::DimensionMismatch { expected: rank, found: c.len() });
    }
    Ok(LatticePoint::new(c))
}

fn parse_points(s: &str, rank: usize) -> Result<PointSet, Error> {
    let s = s.trim();
    if s.starts_with("[[") || s == "[]" {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        return io::point_set_from_json(&v, rank);
    }
    let pts = s.split(';').map(|p| parse_point(p, rank)).collect::<Result<Vec<_>, _>>()?;
    PointSet::new(rank, pts)
}

fn internal(msg: &str) -> Error {
    Error::InvalidArgument(format!("internal check failed: {msg}"))
}

/// The witness inequality `w_u(w) > w_u(v)`, re-checked before printing.
fn unstable_json(p: &Pair, witness: &OnePS) -> Result<Value, Error> {
    let wv = pairs::weight(witness, p.v(), p.problem())?;
    let ww = pairs::weight(witness, p.w(), p.problem())?;
    if ww <= wv {
        return Err(internal("witness does not destabilize"));
    }
    Ok(json!({
        "status": "unstable",
        "witness": one_ps_to_json(witness),
        "weight_v": int_to_json(&wv),
        "weight_w": int_to_json(&ww),
    }))
}

fn dispatch(cmd: Command) -> Result<Outcome, Error> {
    match cmd {
        Command::Check(input) => {
            let p = read_pair(&input)?;
            match pairs::t_semistable(&p)? {
                Verdict::Semistable => Ok(Outcome::yes(json!({"status": "semistable"}))),
                Verdict::Unstable { witness } => Ok(Outcome::no(unstable_json(&p, &witness)?)),
            }
        }
        Command::Stable { input, max_m, q } => {
            let p = read_pair(&input)?;
            let q = match q {
                Some(q) => q,
                None => pairs::degree_of(p.v(), p.problem())?,
            };
            match pairs::stable_with_degree(&p, max_m, q)? {
                StableVerdict::Stable { exponent } => {
                    if !pairs::t_semistable(&pairs::perturb(&p, exponent, q)?)?.is_semistable() {
                        return Err(internal("perturbed pair is not semistable"));
                    }
                    Ok(Outcome::yes(json!({"status": "stable", "exponent": exponent, "degree": q})))
                }
                StableVerdict::NotStableUpTo { max_exponent } => Ok(Outcome::no(
                    json!({"status": "not_stable", "max_m": max_exponent, "degree": q}),
                )),
                StableVerdict::UnstableBase { witness } => Ok(Outcome::no(unstable_json(&p, &witness)?)),
            }
        }
        Command::Destabilize(input) => {
            let p = read_pair(&input)?;
            match pairs::t_semistable(&p)? {
                Verdict::Semistable => Ok(Outcome::yes(json!({"status": "semistable"}))),
                Verdict::Unstable { witness } => {
                    let mut out = unstable_json(&p, &witness)?;
                    out["futaki_gen"] = int_to_json(&pairs::futaki_gen(&witness, &p)?);
                    out["limit_v"] = point_set_to_json(&limits::limit_support(&p.v().support(), &witness)?);
                    out["limit_w"] = point_set_to_json(&limits::limit_support(&p.w().support(), &witness)?);
                    Ok(Outcome::no(out))
                }
            }
        }
        Command::Relinv { input, chi } => {
            let p = read_pair(&input)?;
            let chi = parse_point(&chi, p.problem().rank())?;
            if let Verdict::Unstable { witness } = pairs::t_semistable(&p)? {
                return Ok(Outcome::no(unstable_json(&p, &witness)?));
            }
            let inv = pairs::relative_invariant(&p, &chi)?;
            if !inv.verify(&chi, p.w(), p.problem().context()) {
                return Err(internal("relative invariant identities"));
            }
            let exponents: Vec<Value> = inv
                .exponents
                .iter()
                .map(|(b, n)| json!({"point": io::coords_to_json(b.coords()), "exponent": int_to_json(n)}))
                .collect();
            Ok(Outcome::yes(json!({
                "status": "semistable",
                "chi": io::coords_to_json(chi.coords()),
                "degree": int_to_json(&inv.degree),
                "exponents": exponents,
            })))
        }
        Command::Limit { input, target } => {
            let p = read_pair(&input)?;
            let a = p.v().support();
            let b = parse_points(&target, p.problem().rank())?;
            match limits::find_degeneration(&a, &b, p.problem().context()) {
                Ok(u) => {
                    let lim = limits::limit_support(&a, &u)?;
                    if lim != b || !p.problem().is_admissible(&u) {
                        return Err(internal("degeneration does not reach the target"));
                    }
                    Ok(Outcome::yes(json!({
                        "status": "found",
                        "u": one_ps_to_json(&u),
                        "limit_support": point_set_to_json(&lim),
                    })))
                }
                Err(Error::NotLimitSupport) => {
                    Ok(Outcome::no(json!({"status": "not_a_limit_support"})))
                }
                Err(e) => Err(e),
            }
        }
        Command::Extend(input) => {
            let p = read_pair(&input)?;
            let (a, b) = (p.v().support(), p.w().support());
            let ctx = p.problem().context();
            if limits::extension_criterion(&a, &b, ctx)? {
                return Ok(Outcome::yes(json!({"status": "extends"})));
            }
            let u = limits::extension_obstruction(&a, &b, ctx)?
                .ok_or_else(|| internal("missing obstruction"))?;
            let mut base = b.clone();
            base.insert(LatticePoint::zero(a.rank()))?;
            let rest = a.difference(&b);
            if polytope::min_functional(&rest, &u)? >= polytope::min_functional(&base, &u)? {
                return Err(internal("obstruction does not separate"));
            }
            Ok(Outcome::no(json!({"status": "does_not_extend", "obstruction": one_ps_to_json(&u)})))
        }
        Command::Energy { input, ops, slope } => {
            let p = read_pair(&input)?;
            match ops {
                None => {
                    let id = TorusElement::identity(p.problem().rank());
                    let mut out = json!({
                        "energy_at_identity": energy::energy_at(&p, &id)?,
                        "log_tan2_distance": energy::kempf_ness_distance(&p, &id)?,
                    });
                    match energy::infimum_estimate(&p, &DescentParams::default())? {
                        InfimumEstimate::Unbounded { witness } => {
                            if !pairs::futaki_gen(&witness, &p)?.is_positive() {
                                return Err(internal("unbounded direction"));
                            }
                            out["status"] = json!("unbounded");
                            out["witness"] = one_ps_to_json(&witness);
                            Ok(Outcome::no(out))
                        }
                        InfimumEstimate::Bounded { upper_bound, at } => {
                            out["status"] = json!("bounded");
                            out["infimum_upper_bound"] = json!(upper_bound);
                            out["at"] = json!(at);
                            Ok(Outcome::yes(out))
                        }
                    }
                }
                Some(u) => {
                    let u = OnePS::new(parse_coords(&u)?);
                    p.problem().check_admissible(&u)?;
                    let f = pairs::futaki_gen(&u, &p)?;
                    let samples: Vec<Value> = [1.0, 1e-1, 1e-2, 1e-4, 1e-6, 1e-8]
                        .iter()
                        .map(|&t| Ok(json!({"t": t, "energy": energy::energy_along(&p, &u, t)?})))
                        .collect::<Result<_, Error>>()?;
                    let mut out = json!({
                        "u": one_ps_to_json(&u),
                        "futaki_gen": int_to_json(&f),
                        "samples": samples,
                    });
                    if slope {
                        out["slope"] = json!(energy::asymptotic_slope(&p, &u)?);
                    }
                    if f.is_positive() {
                        out["status"] = json!("unbounded_along_u");
                        Ok(Outcome::no(out))
                    } else {
                        out["status"] = json!("bounded_along_u");
                        Ok(Outcome::yes(out))
                    }
                }
            }
        }
        Command::Futaki(input) => {
            let p = read_pair(&input)?;
            let sub = futaki::stabilizer_subtorus(&p)?;
            let mut basis = Vec::new();
            for u in &sub.basis {
                if !futaki::in_stabilizer(&p, u)? {
                    return Err(internal("stabilizer basis"));
                }
                basis.push(json!({
                    "u": one_ps_to_json(u),
                    "futaki": int_to_json(&futaki::futaki_classical(&p, u)?),
                }));
            }
            let relation = futaki::affine_span_test(&p)?;
            let out = json!({
                "stabilizer_rank": sub.rank(),
                "basis": basis,
                "affine_spans": match relation { SpanRelation::Equal => "equal", SpanRelation::Disjoint => "disjoint" },
            });
            Ok(match relation {
                SpanRelation::Equal => Outcome::yes(out),
                SpanRelation::Disjoint => Outcome::no(out),
            })
        }
        Command::Binary { f, g, oracle } => {
            let f: BinaryForm = f.parse()?;
            let g: BinaryForm = g.parse()?;
            let verdict = binary_forms::semistable_bf(&f, &g);
            let mut out = match &verdict {
                BfVerdict::Semistable => json!({"status": "semistable"}),
                BfVerdict::Unstable(Violation::DegreeExceeded { e, d }) => json!({
                    "status": "unstable",
                    "violation": {"kind": "degree", "e": e, "d": d},
                }),
                BfVerdict::Unstable(Violation::Order { point, ord_g, ord_f }) => {
                    if 2 * (i64::from(*ord_g) - i64::from(*ord_f))
                        <= i64::from(g.degree()) - i64::from(f.degree())
                    {
                        return Err(internal("order violation"));
                    }
                    json!({
                        "status": "unstable",
                        "violation": {"kind": "order", "point": point.to_string(), "ord_g": ord_g, "ord_f": ord_f},
                    })
                }
            };
            out["e"] = json!(f.degree());
            out["d"] = json!(g.degree());
            if oracle {
                let o = binary_forms::torus_oracle_bf(&f, &g)?;
                out["oracle"] = match &o {
                    OracleVerdict::Semistable => json!({"status": "semistable"}),
                    OracleVerdict::Unstable { point, witness } => json!({
                        "status": "unstable",
                        "point": point.to_string(),
                        "witness": one_ps_to_json(witness),
                    }),
                };
                out["agree"] = json!(o.is_semistable() == verdict.is_semistable());
            }
            Ok(if verdict.is_semistable() { Outcome::yes(out) } else { Outcome::no(out) })
        }
        Command::Variety { n, d, mu, big_n, genus_check } => {
            let vd = VarietyDatum::new(n, d, io::parse_rational(&mu)?, big_n)?;
            let rep = if genus_check {
                varieties::degrees_with_genus_check(&vd)?
            } else {
                varieties::degrees(&vd)?
            };
            let ints = |xs: &[BigInt]| xs.iter().map(int_to_json).collect::<Vec<_>>();
            Ok(Outcome::yes(json!({
                "status": "ok",
                "mu": rational_to_json(&vd.mu),
                "deg_R": int_to_json(&rep.deg_r),
                "deg_Delta": int_to_json(&rep.deg_delta),
                "r": int_to_json(&rep.r),
                "lambda": ints(&rep.lambda_partition),
                "mu_partition": ints(&rep.mu_partition),
            })))
        }
    }
}
