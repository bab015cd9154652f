//! Command-line front end and the textual product/sequence format.
//!
//! ```text
//! base=2; exponent=count_digit_pow(-1,1); factors=1:1
//! base=4; exponent=thue_morse; factors=0:-1,2:1@1
//! ```
//!
//! Entries are `key=value`, separated by `;` or newlines. Keys: `base`,
//! `exponent`, `factors`, and optionally `exponent_base` (defaults to `base`).
//! A factor is `k[:c][@start]`; `c` defaults to 1 and `start` to 1 for k = 0
//! and 0 otherwise. Without `factors` the text describes a sequence only.
//! `#` starts a comment that runs to the end of the line.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::digits::{expand, Base, DigitCounts, DigitStat};
use crate::error::{Error, Result};
use crate::gammaproducts::{
    eval_gamma_quotient, odd_base_products, partial_quotient, verify_gamma_side, GammaQuotientSpec,
};
use crate::identities::{estimate_qr, find_claim, verify_all, verify_with_tol, DEFAULT_TERMS};
use crate::products::{default_start, eval_abel, eval_naive, Factor, ProductSpec};
use crate::sequences::{hb_profile, hb_profile_in, ExponentSeq};
use crate::summatory::{geometric_checkpoints, growth_check};

/// What a spec text describes.
#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Product(ProductSpec),
    Sequence(ExponentSeq),
}

impl Parsed {
    pub fn seq(&self) -> &ExponentSeq {
        match self {
            Parsed::Product(p) => p.seq(),
            Parsed::Sequence(s) => s,
        }
    }
}

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// A piece of the input together with its byte offset.
#[derive(Clone, Copy)]
struct Span<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Span<'a> {
    fn trim(self) -> Span<'a> {
        let lead = self.text.len() - self.text.trim_start().len();
        Span {
            text: self.text.trim(),
            pos: self.pos + lead,
        }
    }

    fn split(self, sep: char) -> impl Iterator<Item = Span<'a>> {
        let mut offset = self.pos;
        self.text.split(sep).map(move |part| {
            let s = Span {
                text: part,
                pos: offset,
            };
            offset += part.len() + sep.len_utf8();
            s
        })
    }

    fn split_once(self, sep: char) -> Option<(Span<'a>, Span<'a>)> {
        let i = self.text.find(sep)?;
        Some((
            Span {
                text: &self.text[..i],
                pos: self.pos,
            },
            Span {
                text: &self.text[i + sep.len_utf8()..],
                pos: self.pos + i + sep.len_utf8(),
            },
        ))
    }
}

/// Parses a complex literal such as `-1`, `i`, `0.5+0.5i`; whitespace is ignored.
pub fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty number".into());
    }
    let z = Complex64::from_str(&compact).map_err(|_| format!("`{compact}` is not a complex number"))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("`{compact}` is not finite"));
    }
    Ok(z)
}

fn complex_at(s: Span<'_>) -> Result<Complex64> {
    let s = s.trim();
    parse_complex(s.text).map_err(|m| perr(s.pos, m))
}

fn uint_at(s: Span<'_>) -> Result<u64> {
    let s = s.trim();
    s.text
        .parse()
        .map_err(|_| perr(s.pos, format!("`{}` is not a nonnegative integer", s.text)))
}

fn parse_exponent(value: Span<'_>, base: Base) -> Result<ExponentSeq> {
    let value = value.trim();
    let (name, args) = match value.text.find('(') {
        Some(i) => {
            if !value.text.ends_with(')') {
                return Err(perr(value.pos + value.text.len(), "missing `)`"));
            }
            let inner = Span {
                text: &value.text[i + 1..value.text.len() - 1],
                pos: value.pos + i + 1,
            };
            (value.text[..i].trim(), Some(inner))
        }
        None => (value.text, None),
    };
    let args: Vec<Span<'_>> = match args {
        Some(a) if !a.text.trim().is_empty() => a.split(',').collect(),
        _ => Vec::new(),
    };
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(perr(
                value.pos,
                format!("`{name}` takes {n} argument(s), got {}", args.len()),
            ))
        }
    };
    match name {
        "thue_morse" => {
            arity(0)?;
            Ok(ExponentSeq::thue_morse())
        }
        "digit_sum_pow" => {
            arity(1)?;
            ExponentSeq::digit_stat_power(base, complex_at(args[0])?, DigitStat::DigitSum)
        }
        "length_pow" => {
            arity(1)?;
            ExponentSeq::digit_stat_power(base, complex_at(args[0])?, DigitStat::Length)
        }
        "count_digit_pow" => {
            arity(2)?;
            ExponentSeq::digit_stat_power(base, complex_at(args[0])?, DigitStat::CountDigit(uint_at(args[1])?))
        }
        "count_set_pow" => {
            arity(2)?;
            let set = args[1].trim();
            let list = match set.split_once('=') {
                Some((key, rest)) if key.text.trim() == "J" => rest,
                _ => return Err(perr(set.pos, "expected `J=j1|j2|...`")),
            };
            let digits = list.split('|').map(uint_at).collect::<Result<Vec<_>>>()?;
            ExponentSeq::digit_stat_power(base, complex_at(args[0])?, DigitStat::count_set(digits)?)
        }
        "periodic_pow" => {
            arity(2)?;
            ExponentSeq::periodic_power(base, uint_at(args[0])?, uint_at(args[1])?)
        }
        "table" => {
            let table = args.iter().map(|&a| complex_at(a)).collect::<Result<Vec<_>>>()?;
            ExponentSeq::strongly_multiplicative(base, table)
        }
        "residue" => {
            let values = args.iter().map(|&a| complex_at(a)).collect::<Result<Vec<_>>>()?;
            ExponentSeq::signed_residue(base, values)
        }
        other => Err(perr(value.pos, format!("unknown exponent kind `{other}`"))),
    }
}

fn parse_factors(value: Span<'_>) -> Result<Vec<Factor>> {
    value
        .split(',')
        .map(|item| {
            let item = item.trim();
            if item.text.is_empty() {
                return Err(perr(item.pos, "empty factor"));
            }
            let (head, start) = match item.split_once('@') {
                Some((h, s)) => (h, Some(uint_at(s)?)),
                None => (item, None),
            };
            let (k, c) = match head.split_once(':') {
                Some((k, c)) => (uint_at(k)?, complex_at(c)?),
                None => (uint_at(head)?, Complex64::new(1.0, 0.0)),
            };
            Ok(Factor {
                residue: k,
                multiplier: c,
                start: start.unwrap_or_else(|| default_start(k)),
            })
        })
        .collect()
}

/// Parses the textual product/sequence format described in the module docs.
pub fn parse_spec(text: &str) -> Result<Parsed> {
    let mut base = None;
    let mut exponent_base = None;
    let mut exponent = None;
    let mut factors = None;
    let whole = Span { text, pos: 0 };
    for line in whole.split('\n') {
        let line = line.split_once('#').map_or(line, |(code, _)| code);
        for entry in line.split(';') {
            let entry = entry.trim();
            if entry.text.is_empty() {
                continue;
            }
            let (key, value) = entry
                .split_once('=')
                .ok_or_else(|| perr(entry.pos, format!("expected `key=value`, got `{}`", entry.text)))?;
            let slot = match key.text.trim() {
                "base" => &mut base,
                "exponent_base" => &mut exponent_base,
                "exponent" => &mut exponent,
                "factors" => &mut factors,
                other => return Err(perr(key.pos, format!("unknown key `{other}`"))),
            };
            if slot.is_some() {
                return Err(perr(key.pos, format!("duplicate key `{}`", key.text.trim())));
            }
            *slot = Some(value);
        }
    }
    let base_span = base.ok_or_else(|| perr(text.len(), "missing `base`"))?;
    let base = Base::new(uint_at(base_span)?)?;
    let seq_base = match exponent_base {
        Some(s) => Base::new(uint_at(s)?)?,
        None => base,
    };
    let exponent = exponent.ok_or_else(|| perr(text.len(), "missing `exponent`"))?;
    let seq = parse_exponent(exponent, seq_base)?;
    match factors {
        None => Ok(Parsed::Sequence(seq)),
        Some(f) => Ok(Parsed::Product(ProductSpec::new(base, parse_factors(f)?, seq)?)),
    }
}

/// Shortest round-trip form of a complex number in the spec syntax.
pub fn render_complex(z: Complex64) -> String {
    if z.im == 0.0 && !z.im.is_sign_negative() {
        return format!("{}", z.re);
    }
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

fn render_seq(seq: &ExponentSeq) -> String {
    match seq {
        ExponentSeq::StronglyMultiplicative { table, .. } => {
            format!(
                "table({})",
                table.iter().map(|&z| render_complex(z)).collect::<Vec<_>>().join(",")
            )
        }
        ExponentSeq::DigitStatPower { w, stat, .. } => {
            let w = render_complex(*w);
            match stat {
                DigitStat::DigitSum => format!("digit_sum_pow({w})"),
                DigitStat::Length => format!("length_pow({w})"),
                DigitStat::CountDigit(j) => format!("count_digit_pow({w},{j})"),
                DigitStat::CountSet(set) => format!(
                    "count_set_pow({w},J={})",
                    set.iter().map(|j| j.to_string()).collect::<Vec<_>>().join("|")
                ),
            }
        }
        ExponentSeq::PeriodicPower { q, p, .. } => format!("periodic_pow({q},{p})"),
        ExponentSeq::SignedResidue { values, .. } => {
            format!(
                "residue({})",
                values.iter().map(|&z| render_complex(z)).collect::<Vec<_>>().join(",")
            )
        }
    }
}

fn render_head(base: Base, seq: &ExponentSeq) -> String {
    let mut out = format!("base={base}; ");
    if seq.base() != base {
        let _ = write!(out, "exponent_base={}; ", seq.base());
    }
    let _ = write!(out, "exponent={}", render_seq(seq));
    out
}

/// Inverse of [`parse_spec`] for products.
pub fn render(spec: &ProductSpec) -> String {
    let factors: Vec<String> = spec
        .factors()
        .iter()
        .map(|f| {
            let mut s = format!("{}:{}", f.residue, render_complex(f.multiplier));
            if f.start != default_start(f.residue) {
                let _ = write!(s, "@{}", f.start);
            }
            s
        })
        .collect();
    format!(
        "{}; factors={}",
        render_head(spec.base(), spec.seq()),
        factors.join(",")
    )
}

/// Inverse of [`parse_spec`] for sequences.
pub fn render_sequence(seq: &ExponentSeq) -> String {
    render_head(seq.base(), seq)
}

/// Parses `a=1,1;b=0.5,1.5`.
pub fn parse_quotient(text: &str) -> Result<GammaQuotientSpec> {
    let mut a = None;
    let mut b = None;
    for entry in (Span { text, pos: 0 }).split(';') {
        let entry = entry.trim();
        if entry.text.is_empty() {
            continue;
        }
        let (key, list) = entry
            .split_once('=')
            .ok_or_else(|| perr(entry.pos, "expected `a=...` or `b=...`"))?;
        let values = list
            .split(',')
            .map(|v| {
                let v = v.trim();
                v.text
                    .parse::<f64>()
                    .map_err(|_| perr(v.pos, format!("`{}` is not a number", v.text)))
            })
            .collect::<Result<Vec<f64>>>()?;
        match key.text.trim() {
            "a" => a = Some(values),
            "b" => b = Some(values),
            other => return Err(perr(key.pos, format!("unknown key `{other}`"))),
        }
    }
    GammaQuotientSpec::new(
        a.ok_or_else(|| perr(0, "missing `a=`"))?,
        b.ok_or_else(|| perr(0, "missing `b=`"))?,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Output {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalMethod {
    /// Summation by parts with tail removal.
    Extrapolate,
    /// Summation by parts, truncated.
    Abel,
    /// Plain truncated sum.
    Naive,
}

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(
    name = "digitprod",
    version,
    about = "Infinite products with digit-indexed exponents"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Number of terms n (rounded up to a multiple of the base by summation by parts).
    #[arg(long, global = true, default_value_t = DEFAULT_TERMS, value_parser = clap::value_parser!(u64).range(1..))]
    pub terms: u64,
    /// Override a claim's tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    pub output: Output,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Evaluate a product.
    Eval {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value_t = EvalMethod::Extrapolate)]
        method: EvalMethod,
    },
    /// Verify one catalog identity.
    Verify {
        #[arg(long)]
        claim: String,
    },
    /// Verify the whole catalog.
    VerifyAll,
    /// List catalog claims with their products.
    Catalog,
    /// Summatory function F(N) on a geometric grid up to --terms.
    Summatory {
        #[command(flatten)]
        spec: SpecArgs,
        /// Checkpoints per doubling of N.
        #[arg(long, default_value_t = 2)]
        per_octave: u32,
    },
    /// Estimate a constant without closed form (currently `qr`).
    Estimate {
        #[arg(value_parser = ["qr", "QR"])]
        what: String,
    },
    /// Gamma-function products.
    Gamma {
        /// Balanced quotient, e.g. `a=1,1;b=0.5,1.5`.
        #[arg(long, conflicts_with = "odd_base")]
        quotient: Option<String>,
        /// Odd base B for the alternating products.
        #[arg(long)]
        odd_base: Option<u64>,
    },
    /// Digits and digit statistics of an integer.
    Digits {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        base: u64,
    },
}

#[derive(Debug, Clone, PartialEq, clap::Args)]
#[group(required = true, multiple = false)]
pub struct SpecArgs {
    /// Spec text, e.g. `base=2; exponent=thue_morse; factors=1:1`.
    #[arg(long)]
    pub spec: Option<String>,
    /// File holding the spec text.
    #[arg(long)]
    pub spec_file: Option<PathBuf>,
}

impl SpecArgs {
    fn parse(&self) -> Result<Parsed> {
        match (&self.spec, &self.spec_file) {
            (Some(s), _) => parse_spec(s),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
                parse_spec(&text)
            }
            (None, None) => Err(Error::Validation("give --spec or --spec-file".into())),
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        e if e.is_convergence() => EXIT_CONVERGENCE,
        Error::HypothesisFailed { .. } | Error::NoNonzeroSeed { .. } => EXIT_CONVERGENCE,
        _ => EXIT_USAGE,
    }
}

/// Result of one command: exit status and the text for standard output.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn csv_rows<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

fn status(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

#[derive(Serialize)]
struct SummatoryRow {
    #[serde(rename = "N")]
    n: u64,
    #[serde(rename = "re_F")]
    re_f: f64,
    #[serde(rename = "im_F")]
    im_f: f64,
    #[serde(rename = "abs_F")]
    abs_f: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct DigitsReport {
    n: u64,
    base: u64,
    /// Most significant digit first.
    expansion: String,
    digits: Vec<u64>,
    digit_sum: u64,
    length: u32,
    counts: Vec<u64>,
    thue_morse: Option<i32>,
}

#[derive(Serialize)]
struct QuotientReport {
    a: Vec<f64>,
    b: Vec<f64>,
    value: f64,
    partial: f64,
    terms: u64,
}

#[derive(Serialize)]
struct OddBaseReport {
    products: crate::gammaproducts::OddBaseProducts,
    check: crate::gammaproducts::GammaSideReport,
}

fn digit_char(d: u64) -> char {
    char::from_digit(d as u32, 36).expect("digit below 36")
}

fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let ok = |stdout: String| Ok(Outcome { code: EXIT_OK, stdout });
    match &cfg.command {
        Command::Eval { spec, method } => {
            let spec = match spec.parse()? {
                Parsed::Product(p) => p,
                Parsed::Sequence(_) => return Err(Error::Validation("eval needs `factors=`".into())),
            };
            let r = match method {
                EvalMethod::Extrapolate => eval_abel(&spec, cfg.terms, true)?,
                EvalMethod::Abel => eval_abel(&spec, cfg.terms, false)?,
                EvalMethod::Naive => eval_naive(&spec, cfg.terms)?,
            };
            let rep = r.report();
            ok(match cfg.output {
                Output::Json => json(&rep),
                Output::Csv => csv_rows(&[rep]),
                Output::Plain => format!(
                    "value {} {:+}i\nlog {} {:+}i\nerr_est {}\nterms {}\nmethod {}\n",
                    rep.value_re,
                    rep.value_im,
                    rep.log_re,
                    rep.log_im,
                    rep.err_est,
                    rep.terms,
                    r.method.as_str()
                ),
            })
        }
        Command::Verify { claim } => {
            let c = find_claim(claim)?;
            let rep = verify_with_tol(&c, cfg.terms, cfg.tol.unwrap_or(c.tol))?;
            let text = match cfg.output {
                Output::Json => json(&rep),
                Output::Csv => csv_rows(&[&rep]),
                Output::Plain => plain_verify_line(&rep),
            };
            Ok(Outcome {
                code: status(rep.pass),
                stdout: text,
            })
        }
        Command::VerifyAll => {
            let mut sum = verify_all(cfg.terms)?;
            if let Some(tol) = cfg.tol {
                for r in &mut sum.reports {
                    r.tol = tol;
                    r.pass = r.rel_err <= tol;
                }
                sum.passed = sum.reports.iter().filter(|r| r.pass).count();
            }
            let text = match cfg.output {
                Output::Json => json(&sum),
                Output::Csv => csv_rows(&sum.reports),
                Output::Plain => {
                    let mut s: String = sum.reports.iter().map(plain_verify_line).collect();
                    let _ = writeln!(
                        s,
                        "{}/{} passed at N = {}, worst rel_err {:.3e} ({})",
                        sum.passed, sum.total, sum.terms, sum.worst_rel_err, sum.worst_claim
                    );
                    s
                }
            };
            Ok(Outcome {
                code: status(sum.passed == sum.total),
                stdout: text,
            })
        }
        Command::Catalog => {
            let mut s = String::new();
            for c in crate::identities::catalog() {
                for comp in &c.components {
                    let _ = writeln!(
                        s,
                        "{}\t{:?}\t{}\t{}",
                        c.name,
                        comp.part,
                        render_complex(comp.power),
                        render(&comp.spec)
                    );
                }
            }
            ok(s)
        }
        Command::Summatory { spec, per_octave } => {
            let parsed = spec.parse()?;
            let profile = match &parsed {
                Parsed::Product(p) => hb_profile_in(p.seq(), p.base(), crate::products::PROFILE_SPAN)?,
                Parsed::Sequence(s) => hb_profile(s, crate::products::PROFILE_SPAN)?,
            };
            let cps = geometric_checkpoints(profile.base.get(), cfg.terms.max(profile.base.get()), *per_octave);
            let rep = growth_check(&profile, parsed.seq(), &cps)?;
            ok(match cfg.output {
                Output::Json => json(&rep),
                Output::Csv | Output::Plain => {
                    let rows: Vec<SummatoryRow> = rep
                        .rows
                        .iter()
                        .map(|r| SummatoryRow {
                            n: r.n,
                            re_f: r.f.re,
                            im_f: r.f.im,
                            abs_f: r.f.norm(),
                            ratio: r.ratio,
                        })
                        .collect();
                    csv_rows(&rows)
                }
            })
        }
        Command::Estimate { .. } => {
            let est = estimate_qr(cfg.terms)?;
            ok(match cfg.output {
                Output::Json => json(&est),
                Output::Csv => csv_rows(&[est]),
                Output::Plain => format!(
                    "Q {} (err_est {:.2e})\nR {} (err_est {:.2e})\nQR {}\n",
                    est.q, est.q_err_est, est.r, est.r_err_est, est.product_check
                ),
            })
        }
        Command::Gamma { quotient, odd_base } => match (quotient, odd_base) {
            (Some(q), _) => {
                let spec = parse_quotient(q)?;
                let rep = QuotientReport {
                    value: eval_gamma_quotient(&spec)?,
                    partial: partial_quotient(&spec, cfg.terms)?,
                    terms: cfg.terms,
                    a: spec.a,
                    b: spec.b,
                };
                ok(json(&rep))
            }
            (None, Some(b)) => {
                let products = odd_base_products(*b)?;
                let check = verify_gamma_side(*b, cfg.terms + cfg.terms % 2)?;
                Ok(Outcome {
                    code: status(check.pass),
                    stdout: json(&OddBaseReport { products, check }),
                })
            }
            (None, None) => Err(Error::Validation("give --quotient or --odd-base".into())),
        },
        Command::Digits { n, base } => {
            let b = Base::new(*base)?;
            let mut digits = expand(*n, b);
            digits.reverse();
            let expansion = if digits.is_empty() {
                "0".to_string()
            } else if *base <= 36 {
                digits.iter().map(|&d| digit_char(d)).collect()
            } else {
                digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
            };
            let counts = DigitCounts::of(*n, b);
            let rep = DigitsReport {
                n: *n,
                base: *base,
                expansion,
                digit_sum: counts.digit_sum,
                length: counts.len,
                counts: (0..*base).map(|j| counts.count(j)).collect(),
                thue_morse: (*base == 2).then(|| crate::digits::thue_morse(*n)),
                digits,
            };
            ok(match cfg.output {
                Output::Json => json(&rep),
                Output::Csv | Output::Plain => {
                    let mut s = format!("{}\n", rep.expansion);
                    let _ = writeln!(s, "digit_sum {}\nlength {}", rep.digit_sum, rep.length);
                    for (j, c) in rep.counts.iter().enumerate() {
                        let _ = writeln!(s, "count[{}] {}", j, c);
                    }
                    if let Some(t) = rep.thue_morse {
                        let _ = writeln!(s, "thue_morse {t}");
                    }
                    s
                }
            })
        }
    }
}

fn plain_verify_line(r: &crate::identities::VerifyReport) -> String {
    format!(
        "{} {} computed {} {:+}i expected {} rel_err {:.3e} tol {:.0e} terms {}\n",
        if r.pass { "PASS" } else { "FAIL" },
        r.name,
        r.computed,
        r.computed_im,
        r.expected,
        r.rel_err,
        r.tol,
        r.terms
    )
}

/// Runs a parsed command line. Errors become an exit status and a message on
/// standard error.
pub fn run(cfg: &RunConfig) -> Outcome {
    let exec = || execute(cfg);
    let result = if cfg.threads == 0 {
        exec()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build() {
            Ok(pool) => pool.install(exec),
            Err(e) => Err(Error::Validation(format!("thread pool: {e}"))),
        }
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        Outcome {
            code: exit_code(&e),
            stdout: String::new(),
        }
    })
}

/// Entry point of the `digitprod` binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let out = run(&cfg);
    print!("{}", out.stdout);
    out.code
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::catalog;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-1").unwrap(), c(-1.0, 0.0));
        assert_eq!(parse_complex(" 0.5 + 0.5i ").unwrap(), c(0.5, 0.5));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1-2i").unwrap(), c(1.0, -2.0));
        assert!(parse_complex("").is_err());
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("inf").is_err());
    }

    #[test]
    fn woods_robbins_text() {
        let Parsed::Product(p) = parse_spec("base=2; exponent=count_digit_pow(-1,1); factors=1:1").unwrap() else {
            panic!("expected a product");
        };
        assert_eq!(p, find_claim("woods_robbins").unwrap().spec().clone());
    }

    #[test]
    fn sum_of_digits_text() {
        let Parsed::Product(p) = parse_spec("base=6; exponent=digit_sum_pow(-1); factors=1:1,3:1,5:1").unwrap() else {
            panic!("expected a product");
        };
        assert_eq!(p, find_claim("sum_of_digits_b6").unwrap().spec().clone());
    }

    #[test]
    fn oversized_table_parses_but_profile_rejects() {
        let parsed = parse_spec("base=2; exponent=table(2)").unwrap();
        assert!(matches!(parsed, Parsed::Sequence(_)));
        let err = hb_profile(parsed.seq(), 1024)
            .and_then(|p| p.require_bounded())
            .unwrap_err();
        assert!(err.is_convergence(), "{err:?}");
        // |u| > 1 with |G(B)| < B is still refused.
        let parsed = parse_spec("base=4; exponent=table(1.5,-1,-1)").unwrap();
        assert!(matches!(
            hb_profile(parsed.seq(), 1024).and_then(|p| p.require_bounded()),
            Err(Error::UnboundedExponent { .. })
        ));
    }

    #[test]
    fn defaults_and_overrides() {
        let Parsed::Product(p) = parse_spec("base=4\nexponent=thue_morse\nfactors=0:-1, 2@1").unwrap() else {
            panic!("expected a product");
        };
        assert_eq!(p.factors()[0], Factor::real(0, -1.0));
        assert_eq!(p.factors()[1], Factor::real(2, 1.0).with_start(1));
        assert_eq!(p, crate::identities::r_spec());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let cases = [
            ("base=2; exponent=nope(1); factors=1:1", 17),
            ("base=2; exponent=thue_morse; factors=1:zz", 39),
            ("base=x; exponent=thue_morse", 5),
            ("base=2; exponent=digit_sum_pow(1; factors=1", 0),
            ("base=2; colour=red", 8),
        ];
        for (text, _) in cases {
            assert!(matches!(parse_spec(text), Err(Error::Parse { .. })), "{text}");
        }
        match parse_spec("base=2; exponent=thue_morse; factors=1:zz") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 39),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_spec("base=3; exponent=count_digit_pow(-1,3); factors=1"),
            Err(Error::InvalidDigit { .. })
        ));
        assert!(matches!(
            parse_spec("base=3; exponent=thue_morse; factors=3"),
            Err(Error::InvalidDigit { .. })
        ));
    }

    #[test]
    fn divergent_spec_is_rejected_at_parse() {
        let e = parse_spec("base=2; exponent=count_set_pow(-1,J=0|1); factors=0:1,1:1").unwrap_err();
        assert!(e.is_convergence());
        assert_eq!(exit_code(&e), EXIT_CONVERGENCE);
    }

    #[test]
    fn catalog_round_trip() {
        for claim in catalog() {
            for comp in &claim.components {
                let text = render(&comp.spec);
                assert_eq!(parse_spec(&text).unwrap(), Parsed::Product(comp.spec.clone()), "{text}");
            }
        }
        let r = crate::identities::r_spec();
        assert_eq!(parse_spec(&render(&r)).unwrap(), Parsed::Product(r));
    }

    #[test]
    fn comments_are_stripped() {
        let text = "# R\nbase=4\nexponent=thue_morse  # signs\nexponent_base=2\nfactors=0:-1, 2:1@1 # 4n/(4n+1)";
        assert_eq!(parse_spec(text).unwrap(), Parsed::Product(crate::identities::r_spec()));
        let e = parse_spec("base=2; exponent=thue_morse\n# factors=1\nfactors=9").unwrap_err();
        assert!(matches!(e, Error::InvalidDigit { digit: 9, base: 2 }), "{e:?}");
    }

    #[test]
    fn sequence_round_trip() {
        let s = ExponentSeq::digit_stat_power(Base::new(5).unwrap(), c(0.1, -0.0), DigitStat::Length).unwrap();
        assert_eq!(parse_spec(&render_sequence(&s)).unwrap(), Parsed::Sequence(s));
    }

    #[test]
    fn quotient_text() {
        let q = parse_quotient("a=1,1;b=0.5,1.5").unwrap();
        assert_eq!(q, crate::gammaproducts::wallis_spec());
        assert!(matches!(parse_quotient("a=1;b=2"), Err(Error::Balance { .. })));
        assert!(matches!(parse_quotient("a=1;c=1"), Err(Error::Parse { .. })));
    }
}
