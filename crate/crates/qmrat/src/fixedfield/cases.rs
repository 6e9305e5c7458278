//! Per-case variable changes for each group and normal subgroup.
//!
//! Symbol names: `w` is a primitive cube root of unity, `cr` a cube root of
//! `c`, `sa`/`sb`/`sc` square roots of `a`/`b`/`c`, `al*`/`be` generators of
//! `K`, `d0..d4` norm factors with `d5 = 1/(d0 d1 d2 d3 d4)`.

use std::collections::BTreeMap;

use super::{Chain, Check, FixedFieldError, TransformChain};
use crate::glz::ConjugacyLabel::{self, *};

#[derive(Clone, Copy, Debug)]
pub struct CaseSpec {
    pub tag: &'static str,
    pub group: ConjugacyLabel,
    pub h: &'static str,
    pub heading: &'static str,
}

const fn spec(tag: &'static str, group: ConjugacyLabel, h: &'static str, heading: &'static str) -> CaseSpec {
    CaseSpec { tag, group, h, heading }
}

pub const CASES: &[CaseSpec] = &[
    spec("c2_1", C2_1, "1", "-I flips sqrt(a)"),
    spec("c2_2", C2_2, "1", "lambda flips sqrt(a); eps normalized to 1"),
    spec("c2_3", C2_3, "1", "tau flips sqrt(a); b normalized to 1"),
    spec("c3", C3, "1", "normalization b = 1"),
    spec("c3/1", C3, "1", "omega in k, K = k(cbrt a)"),
    spec("c3/2", C3, "1", "omega not in k"),
    spec("c3/2-1", C3, "1", "cbrt(c) in k"),
    spec("c3/2-2", C3, "1", "cbrt(c) not in K"),
    spec("c4", C4, "1", "normalization b = 1"),
    spec("c4/1", C4, "1", "H = 1, Cayley coordinates"),
    spec("c4/1-1", C4, "1", "sqrt(c) in k"),
    spec("c4/1-2", C4, "1", "sqrt(c) in the quadratic subfield"),
    spec("c4/1-3", C4, "1", "sqrt(c) not in K"),
    spec("c4/2", C4, "sigma^2", "H = <sigma^2>"),
    spec("c6", C6, "1", "normalization b = c = 1"),
    spec("v4_1/1", V4_1, "1", "H = 1"),
    spec("v4_1/2", V4_1, "-I", "H = <-I>"),
    spec("v4_1/3", V4_1, "lambda", "H = <lambda>, eps2 normalized"),
    spec("v4_1/3-1", V4_1, "lambda", "H = <lambda>, eps1 = 1"),
    spec("v4_1/3-2", V4_1, "lambda", "H = <lambda>, eps1 = -1"),
    spec("v4_1/4", V4_1, "-lambda", "H = <-lambda>"),
    spec("v4_2", V4_2, "1", "normalization b = 1, d = c"),
    spec("v4_2/1", V4_2, "1", "H = 1"),
    spec("v4_2/2", V4_2, "-I", "H = <-I>"),
    spec("v4_2/3", V4_2, "tau", "H = <tau>"),
    spec("v4_2/4", V4_2, "-tau", "H = <-tau>"),
    spec("s3_1", S3_1, "1", "H = 1"),
    spec("s3_1/1-1", S3_1, "1", "cbrt(c) in k"),
    spec("s3_1/1-2", S3_1, "1", "cbrt(c) in K \\ k"),
    spec("s3_1/1-3", S3_1, "1", "cbrt(c) not in K"),
    spec("s3_1/1-3-1", S3_1, "1", "omega in k"),
    spec("s3_1/1-3-1/remark", S3_1, "1", "omega in k, r1 r2 coordinates"),
    spec("s3_1/1-3-2", S3_1, "1", "omega in K \\ k"),
    spec("s3_1/1-3-3", S3_1, "1", "omega not in K"),
    spec("s3_1/2", S3_1, "rho^2", "H = <rho^2>"),
    spec("s3_2", S3_2, "1", "c^2 = d^3, monomial reduction"),
    spec("d4/1", D4, "1", "H = 1"),
    spec("d4/1-1", D4, "1", "sqrt(c) in k"),
    spec("d4/1-1-1", D4, "1", "sqrt(c) in k, eps = 1"),
    spec("d4/1-1-2", D4, "1", "sqrt(c) in k, eps = -1"),
    spec("d4/1-2", D4, "1", "sqrt(c) in K^<sigma>"),
    spec("d4/1-2-1", D4, "1", "sqrt(c) in K^<sigma>, eps = 1"),
    spec("d4/1-2-2", D4, "1", "sqrt(c) in K^<sigma>, eps = -1"),
    spec("d4/1-3", D4, "1", "sqrt(c) in K^<sigma^2,tau>"),
    spec("d4/1-3-1", D4, "1", "sqrt(c) in K^<sigma^2,tau>, eps = 1"),
    spec("d4/1-3-2", D4, "1", "sqrt(c) in K^<sigma^2,tau>, eps = -1"),
    spec("d4/1-4", D4, "1", "sqrt(c) in K^<sigma^2,sigma*tau>"),
    spec("d4/1-4-1", D4, "1", "sqrt(c) in K^<sigma^2,sigma*tau>, eps = 1"),
    spec("d4/1-4-2", D4, "1", "sqrt(c) in K^<sigma^2,sigma*tau>, eps = -1"),
    spec("d4/1-5", D4, "1", "sqrt(c) not in K"),
    spec("d4/1-5-1", D4, "1", "sqrt(c) not in K, eps = 1"),
    spec("d4/1-5-2", D4, "1", "sqrt(c) not in K, eps = -1"),
    spec("d4/2", D4, "-I", "H = <-I>"),
    spec("d4/2-1", D4, "-I", "H = <-I>, eps = 1"),
    spec("d4/2-2", D4, "-I", "H = <-I>, eps = -1"),
    spec("d4/3", D4, "-I,tau*sigma", "H = <-I, tau sigma>"),
    spec("d4/4", D4, "-I,tau", "H = <-I, tau>"),
    spec("d4/4-1", D4, "-I,tau", "H = <-I, tau>, eps = 1"),
    spec("d4/4-2", D4, "-I,tau", "H = <-I, tau>, eps = -1"),
    spec("d4/5", D4, "sigma", "H = <sigma>"),
    spec("d4/5-1", D4, "sigma", "H = <sigma>, eps = 1"),
    spec("d4/5-2", D4, "sigma", "H = <sigma>, eps = -1"),
    spec("d6", D6, "1", "normalization d = e = 1, c = 1/b^2"),
];

pub fn case_tags() -> Vec<&'static str> {
    CASES.iter().map(|c| c.tag).collect()
}

pub fn case_spec(tag: &str) -> Option<CaseSpec> {
    CASES.iter().find(|c| c.tag == tag).copied()
}

/// Runs every check of a case and returns the full record.
pub fn case_chain_with(tag: &str, params: &BTreeMap<String, String>) -> Result<TransformChain, FixedFieldError> {
    let spec = case_spec(tag).ok_or_else(|| FixedFieldError::UnknownCase(tag.to_string()))?;
    let parts = build(tag).ok_or_else(|| FixedFieldError::UnknownCase(tag.to_string()))?;
    let mut checks: Vec<Check> = Vec::new();
    for p in parts {
        checks.extend(p.with_params(params).verify()?);
    }
    if checks.is_empty() {
        return Err(FixedFieldError::Malformed { tag: tag.into(), msg: "no checks".into() });
    }
    Ok(TransformChain { tag: tag.to_string(), title: format!("{}: {}", spec.group.as_str(), spec.heading), checks })
}

/// Like [`case_chain_with`], but any failing check is an error.
pub fn case_chain(tag: &str, params: &BTreeMap<String, String>) -> Result<TransformChain, FixedFieldError> {
    let chain = case_chain_with(tag, params)?;
    match chain.first_failure() {
        Some(c) => Err(FixedFieldError::VerificationFailure { tag: tag.to_string(), check: c.to_string() }),
        None => Ok(chain),
    }
}

const EIGEN_U: &str = "(1 + w^-1*X + w*X*Y)/(1 + X + X*Y)";
const EIGEN_V: &str = "(1 + w*X + w^-1*X*Y)/(1 + X + X*Y)";
const CAYLEY_X: &str = "(x + sc)/(x - sc)";
const CAYLEY_Y: &str = "(y + sc)/(y - sc)";
const L21_X: &str = "(x*y + c)/(x + y)";
const L21_Y: &str = "(x*y - c)/(x - y)";
const ALPHAS: [&str; 3] = ["al0", "al1", "al2"];
const RHO2_AL: [(&str, &str); 3] = [("al0", "al1"), ("al1", "al2"), ("al2", "al0")];
const TAU_AL: [(&str, &str); 2] = [("al1", "al2"), ("al2", "al1")];
const A_OMEGA: &str = "al0 + w^-1*al1 + w*al2";
const B_OMEGA: &str = "al0 + w*al1 + w^-1*al2";

fn eps_name(e: i32) -> String {
    format!("eps={e}")
}

fn build(tag: &str) -> Option<Vec<Chain>> {
    Some(match tag {
        "c2_1" => vec![Chain::new("main", &["x", "y"])
            .free(&["a", "b", "c"])
            .sqrt("sa", "a")
            .gen("-I", &[("sa", "-sa")], &["b/x", "c/y"])
            .header(&["-I"], C2_1, "1")],
        "c2_2" => [1, -1]
            .iter()
            .map(|&e| {
                let x_img = format!("{e}*x");
                let xdef = if e == 1 { "x" } else { "sa*x" };
                Chain::new(&eps_name(e), &["x", "y"])
                    .free(&["a", "b"])
                    .sqrt("sa", "a")
                    .gen("lambda", &[("sa", "-sa")], &[&x_img, "b/y"])
                    .header(&["lambda"], C2_2, "1")
                    .step("normalize", &[("X", xdef), ("Y", "y")], &[("lambda", &[("X", "X"), ("Y", "b/Y")])])
            })
            .collect(),
        "c2_3" => vec![Chain::new("main", &["x", "y"])
            .free(&["a", "b"])
            .sqrt("sa", "a")
            .gen("tau", &[("sa", "-sa")], &["b*y", "x/b"])
            .header(&["tau"], C2_3, "1")
            .step("y -> by", &[("X", "x"), ("Y", "b*y")], &[("tau", &[("X", "Y"), ("Y", "X")])])],
        "c3" | "c3/2" => vec![Chain::new("main", &["x", "y"])
            .free(&ALPHAS)
            .free(&["b", "c"])
            .gen("rho2", &RHO2_AL, &["b*y", "c/(x*y)"])
            .header(&["rho2"], C3, "1")
            .step("y -> by", &[("X", "x"), ("Y", "b*y")], &[("rho2", &[("X", "Y"), ("Y", "b^2*c/(X*Y)")])])],
        "c3/1" => vec![Chain::new("main", &["x", "y"])
            .free(&["a", "c"])
            .cbrt("ar", "a")
            .omega("w")
            .gen("rho2", &[("ar", "w*ar")], &["y", "c/(x*y)"])
            .header(&["rho2"], C3, "1")],
        "c3/2-1" => vec![Chain::new("main", &["x", "y"])
            .free(&ALPHAS)
            .free(&["r"])
            .define("c", "r^3")
            .gen("rho2", &RHO2_AL, &["y", "c/(x*y)"])
            .header(&["rho2"], C3, "1")
            .step("X, Y", &[("X", "x/r"), ("Y", "y/r")], &[("rho2", &[("X", "Y"), ("Y", "1/(X*Y)")])])],
        "c3/2-2" => c3_22(),
        "c4" => vec![Chain::new("main", &["x", "y"])
            .free(&["al", "be", "b", "c"])
            .gen("sigma", &[("al", "be"), ("be", "-al")], &["b*y", "c/x"])
            .header(&["sigma"], C4, "1")
            .step("y -> by", &[("X", "x"), ("Y", "b*y")], &[("sigma", &[("X", "Y"), ("Y", "b*c/X")])])],
        "c4/1" => vec![Chain::new("main", &["x", "y"])
            .free(&["al", "be", "c"])
            .sqrt("sc", "c")
            .gen("sigma", &[("al", "be"), ("be", "-al")], &["y", "c/x"])
            .header(&["sigma"], C4, "1")
            .step("Cayley", &[("X", CAYLEY_X), ("Y", CAYLEY_Y)], &[("sigma", &[("X", "Y"), ("Y", "-X")])])],
        "c4/1-1" => vec![c4_uv(C4Root::InK).pipe(c4_ab_tail)],
        "c4/1-2" => vec![c4_uv(C4Root::Flipped)],
        "c4/1-3" => vec![c4_uv(C4Root::Outside)
            .define("A", "al*be")
            .define("B", "al/be")
            .define("a", "A*(B + 1/B)")
            .define("b", "B - 1/B")
            .step(
                "U, V",
                &[("U", "u + v"), ("V", "A*(u - v)")],
                &[
                    ("sigma", &[("U", "U"), ("V", "V")]),
                    (
                        "phi_c",
                        &[
                            ("sc", "-sc"),
                            ("U", "2*a^2*(a*U - b*V)/(a^2*U^2 - b^2*V^2 - 4*V^2)"),
                            ("V", "2*a^3*(a*b*U - b^2*V - 4*V)/((b^2 + 4)*(a^2*U^2 - b^2*V^2 - 4*V^2))"),
                        ],
                    ),
                ],
            )
            .step(
                "s, t",
                &[("s", "(a*b*U - b^2*V - 4*V)/(2*V)"), ("t", "b*(a^2*U^2 - b^2*V^2 - 4*V^2)/(4*a*V)")],
                &[(
                    "phi_c",
                    &[("s", "(b^2 + 4)/s"), ("t", "(a*(s + (b^2 + 4)/s) + a*(b^2 + 4))/t")],
                )],
            )],
        "c4/2" => vec![Chain::new("main", &["x", "y"])
            .free(&["a", "c"])
            .sqrt("sa", "a")
            .gen("sigma", &[("sa", "-sa")], &["y", "c/x"])
            .composite("sigma2", "sigma", "sigma")
            .header(&["sigma"], C4, "sigma^2")
            .invariant_under("sigma^2 fixes u, v", &["sigma2"], &["(x*y + c)/(x + y)", "(x*y - c)/(x - y)"])
            .step(
                "u, v",
                &[("u", "(x*y + c)/(x + y)"), ("v", "(x*y - c)/(x - y)")],
                &[("sigma", &[("u", "c/u"), ("v", "-c/v")])],
            )],
        "c6" => vec![Chain::new("main", &["x", "y"])
            .free(&["al0", "al1", "al2", "al3", "al4", "al5", "b", "c"])
            .gen(
                "rho",
                &[("al0", "al1"), ("al1", "al2"), ("al2", "al3"), ("al3", "al4"), ("al4", "al5"), ("al5", "al0")],
                &["b*x*y", "c/x"],
            )
            .header(&["rho"], C6, "1")
            .step("monomial", &[("X", "x/(b*c)"), ("Y", "b*y")], &[("rho", &[("X", "X*Y"), ("Y", "1/X")])])],
        "v4_1/1" => v41_case1(),
        "v4_1/2" => v41_case2(),
        "v4_1/3" => v41_case3(None),
        "v4_1/3-1" => v41_case3(Some(1)),
        "v4_1/3-2" => v41_case3(Some(-1)),
        "v4_1/4" => v41_case4(),
        "v4_2" => vec![Chain::new("main", &["x", "y"])
            .free(&["a", "b0", "b", "c"])
            .sqrt("sa", "a")
            .sqrt("sb", "b0")
            .define("d", "c/b^2")
            .gen("tau", &[("sa", "-sa")], &["b*y", "x/b"])
            .gen("-I", &[("sb", "-sb")], &["c/x", "d/y"])
            .header(&["tau", "-I"], V4_2, "1")
            .step(
                "y -> by",
                &[("X", "x"), ("Y", "b*y")],
                &[("tau", &[("X", "Y"), ("Y", "X")]), ("-I", &[("X", "c/X"), ("Y", "c/Y")])],
            )],
        "v4_2/1" => vec![v42_base(("-sa", "sb"), ("sa", "-sb"), "1")
            .define("u", "x + y")
            .define("v", "sa*(x - y)")
            .invariant_under("tau fixes u, v", &["tau"], &["u", "v"])
            .step(
                "U, V",
                &[("U", "sb*u/v"), ("V", "(U^2 - 1/a)*v/2")],
                &[("-I", &[("sb", "-sb"), ("U", "U"), ("V", "-c*(U^2 - 1/a)^2/((U^2/b - 1/a)*V)")])],
            )
            .printed("-I", "V", "-c*(U^2 - 1/a)/V")
            .step(
                "U, W",
                &[("U", "U"), ("W", "(U^2/b - 1/a)*V/(U^2 - 1/a)")],
                &[("-I", &[("U", "U"), ("W", "-c*(U^2/b - 1/a)/W")])],
            )],
        "v4_2/2" => vec![v42_base(("-sa", "sb"), ("sa", "sb"), "-I")
            .step(
                "X, Y",
                &[("X", L21_X), ("Y", L21_Y)],
                &[("tau", &[("X", "X"), ("Y", "-Y")]), ("-I", &[("X", "X"), ("Y", "Y")])],
            )
            .invariant_under("rational generators", &["tau", "-I"], &["X", "sa*Y"])],
        "v4_2/3" => vec![v42_base(("sa", "sb"), ("-sa", "sb"), "tau").step(
            "u, v",
            &[("u", "x*y/c"), ("v", "x + y")],
            &[("tau", &[("u", "u"), ("v", "v")]), ("-I", &[("u", "1/u"), ("v", "v/u")])],
        )],
        "v4_2/4" => vec![v42_base(("-sa", "sb"), ("-sa", "sb"), "-tau")
            .step(
                "u, v",
                &[("u", "(x + y)/(sa*(x - y))"), ("v", "sa*(x - y)")],
                &[("tau", &[("u", "u"), ("v", "v")]), ("-I", &[("u", "u"), ("v", "4*a*c/((a*u^2 - 1)*v)")])],
            )
            .invariant("rational generator", &["v + 4*a*c/((a*u^2 - 1)*v)"])],
        "s3_1" => vec![s31_alpha_base()],
        "s3_1/1-1" => vec![Chain::new("main", &["x", "y"])
            .free(&ALPHAS)
            .free(&["r"])
            .define("c", "r^3")
            .gen("rho2", &RHO2_AL, &["y", "c/(x*y)"])
            .gen("tau", &TAU_AL, &["y", "x"])
            .header(&["rho2", "tau"], S3_1, "1")
            .step(
                "X, Y",
                &[("X", "x/r"), ("Y", "y/r")],
                &[("rho2", &[("X", "Y"), ("Y", "1/(X*Y)")]), ("tau", &[("X", "Y"), ("Y", "X")])],
            )],
        "s3_1/1-2" => vec![Chain::new("main", &["x", "y"])
            .free(&["c"])
            .cbrt("cr", "c")
            .omega("w")
            .gen("rho2", &[("cr", "w*cr")], &["y", "c/(x*y)"])
            .gen("tau", &[("w", "w^-1")], &["y", "x"])
            .header(&["rho2", "tau"], S3_1, "1")
            .step(
                "X, Y",
                &[("X", "x/cr"), ("Y", "y/cr")],
                &[("rho2", &[("X", "w^-1*Y"), ("Y", "w^-1/(X*Y)")]), ("tau", &[("X", "Y"), ("Y", "X")])],
            )
            .printed("rho2", "X", "Y")
            .printed("rho2", "Y", "1/(X*Y)")],
        "s3_1/1-3" => vec![s31_133_xy()],
        "s3_1/1-3-1" => s31_131(false),
        "s3_1/1-3-1/remark" => s31_131(true),
        "s3_1/1-3-2" => s31_132(),
        "s3_1/1-3-3" => s31_133(),
        "s3_1/2" => vec![Chain::new("main", &["x", "y"])
            .free(&["a", "c"])
            .sqrt("sa", "a")
            .gen("rho2", &[], &["y", "c/(x*y)"])
            .gen("tau", &[("sa", "-sa")], &["y", "x"])
            .header(&["rho2", "tau"], S3_1, "rho^2")
            .step(
                "X, Y",
                &[
                    ("X", "y*(y^3*x^3 + c*x^3 - 3*c*y*x^2 + c^2)/(y^2*x^4 - y^3*x^3 + y^4*x^2 - c*y*x^2 - c*y^2*x + c^2)"),
                    ("Y", "x*(x^3*y^3 + c*y^3 - 3*c*x*y^2 + c^2)/(y^2*x^4 - y^3*x^3 + y^4*x^2 - c*y*x^2 - c*y^2*x + c^2)"),
                ],
                &[("rho2", &[("X", "X"), ("Y", "Y")]), ("tau", &[("sa", "-sa"), ("X", "Y"), ("Y", "X")])],
            )
            .invariant_under("rational generators", &["tau"], &["X + Y", "sa*(X - Y)"])],
        "s3_2" => vec![Chain::new("main", &["x", "y"])
            .free(&ALPHAS)
            .free(&["t"])
            .define("c", "t^3")
            .define("d", "t^2")
            .gen("rho2", &RHO2_AL, &["y", "c/(x*y)"])
            .gen("-tau", &TAU_AL, &["d/y", "d/x"])
            .header(&["rho2", "-tau"], S3_2, "1")
            .step(
                "X, Y",
                &[("X", "d*x/c"), ("Y", "d*y/c")],
                &[("rho2", &[("X", "Y"), ("Y", "1/(X*Y)")]), ("-tau", &[("X", "1/Y"), ("Y", "1/X")])],
            )
            .printed("-tau", "y", "1/X")],
        "d4/1" => [1, -1].iter().map(|&e| d4_head(e, D4Root::Outside)).collect(),
        "d4/1-1" => [1, -1].iter().map(|&e| d4_uv(e, D4Root::InK, false)).collect(),
        "d4/1-1-1" => vec![d4_uv(1, D4Root::InK, false).pipe(d4_tail_111)],
        "d4/1-1-2" => vec![d4_uv(-1, D4Root::InK, false).pipe(d4_tail_112)],
        "d4/1-2" => [1, -1].iter().map(|&e| d4_uv(e, D4Root::Sigma, false)).collect(),
        "d4/1-2-1" => vec![d4_uv(1, D4Root::Sigma, false).pipe(d4_tail_112)],
        "d4/1-2-2" => vec![d4_uv(-1, D4Root::Sigma, false).pipe(d4_tail_111)],
        "d4/1-3" => [1, -1].iter().map(|&e| d4_uv(e, D4Root::Sigma2Tau, false)).collect(),
        "d4/1-3-1" => vec![d4_uv(1, D4Root::Sigma2Tau, false).pipe(d4_tail_112)],
        "d4/1-3-2" => vec![d4_uv(-1, D4Root::Sigma2Tau, false).pipe(d4_tail_111)],
        "d4/1-4" => [1, -1].iter().map(|&e| d4_uv(e, D4Root::Sigma2SigmaTau, false)).collect(),
        "d4/1-4-1" => vec![d4_uv(1, D4Root::Sigma2SigmaTau, false).pipe(d4_tail_111)],
        "d4/1-4-2" => vec![d4_uv(-1, D4Root::Sigma2SigmaTau, false).pipe(d4_tail_112)],
        "d4/1-5" => [1, -1].iter().map(|&e| d4_uv(e, D4Root::Outside, false)).collect(),
        "d4/1-5-1" => vec![d4_151()],
        "d4/1-5-2" => vec![d4_152()],
        "d4/2" => [1, -1].iter().map(|&e| d4_quad(e, D4Quad::MinusI)).collect(),
        "d4/2-1" => vec![d4_quad(1, D4Quad::MinusI).step(
            "S, T",
            &[("S", "X"), ("T", "sb*Y")],
            &[("sigma", &[("sa", "-sa"), ("S", "c/S"), ("T", "-b*c/T")]), ("tau", &[("S", "S"), ("T", "T")])],
        )],
        "d4/2-2" => vec![d4_quad(-1, D4Quad::MinusI).step(
            "S, T",
            &[("S", "sb*X"), ("T", "Y")],
            &[("sigma", &[("sa", "-sa"), ("S", "b*c/S"), ("T", "-c/T")]), ("tau", &[("S", "S"), ("T", "T")])],
        )],
        "d4/3" => [1, -1]
            .iter()
            .map(|&e| {
                let ec = format!("{e}*c");
                let s = format!("(X*Y + {ec})/(X + Y)");
                let t = format!("(X*Y - {ec})/(X - Y)");
                let me_t = format!("{}*T", -e);
                let me_s = format!("{}*S", -e);
                let inv1 = format!("S - {e}*T");
                let inv2 = format!("sa*(S + {e}*T)");
                d4_quad(e, D4Quad::TauSigma)
                    .step(
                        "S, T",
                        &[("S", &s), ("T", &t)],
                        &[
                            ("sigma", &[("sa", "-sa"), ("S", &me_t), ("T", &me_s)]),
                            ("tau", &[("sa", "-sa"), ("S", &me_t), ("T", &me_s)]),
                            ("tau*sigma", &[("S", "S"), ("T", "T")]),
                        ],
                    )
                    .invariant("rational generators", &[&inv1, &inv2])
            })
            .collect(),
        "d4/4" => [1, -1].iter().map(|&e| d4_quad(e, D4Quad::MinusITau)).collect(),
        "d4/4-1" => vec![d4_quad(1, D4Quad::MinusITau).step(
            "S, T",
            &[("S", "X"), ("T", "Y^2/c")],
            &[("sigma", &[("sa", "-sa"), ("S", "c/S"), ("T", "1/T")]), ("tau", &[("S", "S"), ("T", "T")])],
        )],
        "d4/4-2" => vec![d4_quad(-1, D4Quad::MinusITau).step(
            "S, T",
            &[("S", "X^2/c"), ("T", "Y")],
            &[("sigma", &[("sa", "-sa"), ("S", "1/S"), ("T", "-c/T")]), ("tau", &[("S", "S"), ("T", "T")])],
        )],
        "d4/5" => [1, -1].iter().map(|&e| d4_quad(e, D4Quad::Sigma)).collect(),
        "d4/5-1" => vec![d4_quad(1, D4Quad::Sigma).step(
            "S, T",
            &[("S", "X"), ("T", "sa*Y")],
            &[("sigma", &[("S", "c/S"), ("T", "-a*c/T")]), ("tau", &[("S", "S"), ("T", "T")])],
        )],
        "d4/5-2" => vec![d4_quad(-1, D4Quad::Sigma).step(
            "S, T",
            &[("S", "sa*X"), ("T", "Y")],
            &[("sigma", &[("S", "a*c/S"), ("T", "-c/T")]), ("tau", &[("S", "S"), ("T", "T")])],
        )],
        "d6" => vec![Chain::new("main", &["x", "y"])
            .free(&["al0", "al1", "al2", "al3", "al4", "al5", "b", "d"])
            .define("e", "1/d")
            .define("c", "d/b^2")
            .gen(
                "rho",
                &[("al0", "al1"), ("al1", "al2"), ("al2", "al3"), ("al3", "al4"), ("al4", "al5"), ("al5", "al0")],
                &["b*x*y", "c/x"],
            )
            .gen(
                "tau",
                &[("al1", "al5"), ("al5", "al1"), ("al2", "al4"), ("al4", "al2")],
                &["d*y", "e*x"],
            )
            .header(&["rho", "tau"], D6, "1")
            .step(
                "y -> dy",
                &[("x1", "x"), ("y1", "d*y")],
                &[("rho", &[("x1", "(b/d)*x1*y1"), ("y1", "c*d/x1")]), ("tau", &[("x1", "y1"), ("y1", "x1")])],
            )
            .step(
                "X, Y",
                &[("X", "(b/d)*x1"), ("Y", "(b/d)*y1")],
                &[("rho", &[("X", "X*Y"), ("Y", "1/X")]), ("tau", &[("X", "Y"), ("Y", "X")])],
            )
            .printed("rho", "Y", "1/Y")],
        _ => return None,
    })
}

trait Pipe: Sized {
    fn pipe(self, f: impl FnOnce(Self) -> Self) -> Self {
        f(self)
    }
}
impl Pipe for Chain {}

fn c3_22() -> Vec<Chain> {
    let xy = Chain::new("X..s", &["x", "y"])
        .free(&ALPHAS)
        .free(&["c"])
        .cbrt("cr", "c")
        .omega("w")
        .define("A", A_OMEGA)
        .define("B", B_OMEGA)
        .gen("rho2", &RHO2_AL, &["y", "c/(x*y)"])
        .gen("phi_c", &[("cr", "w*cr")], &["x", "y"])
        .gen("phi_w", &[("w", "w^-1")], &["x", "y"])
        .header(&["rho2"], C3, "1")
        .step(
            "X, Y",
            &[("X", "x/cr"), ("Y", "y/cr")],
            &[
                ("rho2", &[("X", "Y"), ("Y", "1/(X*Y)")]),
                ("phi_c", &[("X", "w^-1*X"), ("Y", "w^-1*Y")]),
                ("phi_w", &[("X", "X"), ("Y", "Y")]),
            ],
        )
        .step(
            "u, v",
            &[("u", EIGEN_U), ("v", EIGEN_V)],
            &[
                ("rho2", &[("u", "w*u"), ("v", "w^-1*v")]),
                ("phi_c", &[("u", "v/u"), ("v", "1/u")]),
                ("phi_w", &[("u", "v"), ("v", "u")]),
            ],
        )
        .step(
            "s, t",
            &[("s", "(u - v^2)/(v*(u*v - 1))"), ("t", "u*(u*v - 1)/(v - u^2)")],
            &[
                ("rho2", &[("s", "w^-1*s"), ("t", "w^-1*t")]),
                ("phi_c", &[("s", "t"), ("t", "1/(s*t)")]),
                ("phi_w", &[("s", "1/t"), ("t", "1/s")]),
            ],
        )
        .step(
            "A, B",
            &[],
            &[
                ("rho2", &[("A", "w*A"), ("B", "w^-1*B")]),
                ("phi_c", &[("A", "A"), ("B", "B")]),
                ("phi_w", &[("A", "B"), ("B", "A")]),
            ],
        )
        .invariant("A0 in k", &["al0 + al1 + al2"]);
    let st = Chain::new("S..T'", &["s", "t"])
        .free(&["A", "B", "c"])
        .cbrt("cr", "c")
        .omega("w")
        .define("alpha", "A^3")
        .define("b", "A*B")
        .define("ap", "b^3/alpha^2")
        .gen("rho2", &[("A", "w*A"), ("B", "w^-1*B")], &["w^-1*s", "w^-1*t"])
        .gen("phi_c", &[("cr", "w*cr")], &["t", "1/(s*t)"])
        .gen("phi_w", &[("w", "w^-1"), ("A", "B"), ("B", "A")], &["1/t", "1/s"])
        .step(
            "S, T",
            &[("S", "A*s"), ("T", "A*t")],
            &[
                ("rho2", &[("alpha", "alpha"), ("S", "S"), ("T", "T")]),
                ("phi_c", &[("alpha", "alpha"), ("S", "T"), ("T", "alpha/(S*T)")]),
                ("phi_w", &[("alpha", "b^3/alpha"), ("S", "b/T"), ("T", "b/S")]),
            ],
        )
        .step(
            "S', T'",
            &[("S'", "b*S/alpha"), ("T'", "b*T/alpha")],
            &[
                ("phi_c", &[("ap", "ap"), ("S'", "T'"), ("T'", "ap/(S'*T')")]),
                ("phi_w", &[("ap", "1/ap"), ("S'", "1/T'"), ("T'", "1/S'")]),
            ],
        )
        .identity("alpha' = (B/A)^3", "ap", "(B/A)^3");
    let delta = delta_chain(
        "(i) norm",
        &[
            ("phi_c", &[("cr", "w*cr")], &["T'", "ap/(S'*T')"], DeltaPerm::Cycle),
            ("phi_w", &[("w", "w^-1")], &["1/T'", "1/S'"], DeltaPerm::Omega),
        ],
    )
    .step(
        "p, q",
        &[("p", "S'/(d0*d2*d4)"), ("q", "T'/(d0*d1*d5)")],
        &[("phi_c", &[("p", "q"), ("q", "1/(p*q)")]), ("phi_w", &[("p", "1/q"), ("q", "1/p")])],
    );
    vec![xy, st, delta]
}

#[derive(Clone, Copy)]
enum DeltaPerm {
    Cycle,
    Omega,
    Tau,
}

fn delta_chain(name: &str, gens: &[(&str, &[(&str, &str)], &[&str], DeltaPerm)]) -> Chain {
    let mut ch = Chain::new(name, &["S'", "T'"])
        .free(&["d0", "d1", "d2", "d3", "d4", "c"])
        .cbrt("cr", "c")
        .omega("w")
        .define("d5", "1/(d0*d1*d2*d3*d4)")
        .define("ap", "d0*d1*d2");
    let mut checks: Vec<(String, Vec<(String, String)>)> = Vec::new();
    for (g, consts, start, perm) in gens {
        let mut all: Vec<(&str, &str)> = consts.to_vec();
        let p: &[(&str, &str)] = match perm {
            DeltaPerm::Cycle => &[("d0", "d1"), ("d1", "d2"), ("d2", "d0"), ("d3", "d4"), ("d4", "d5")],
            DeltaPerm::Omega => &[("d0", "d3"), ("d1", "d5"), ("d2", "d4"), ("d3", "d0"), ("d4", "d2")],
            DeltaPerm::Tau => &[("d0", "d3"), ("d1", "d4"), ("d2", "d5"), ("d3", "d0"), ("d4", "d1")],
        };
        all.extend_from_slice(p);
        ch = ch.gen(g, &all, start);
        let target = match perm {
            DeltaPerm::Cycle => "ap",
            _ => "1/ap",
        };
        let mut entries = vec![("ap".to_string(), target.to_string())];
        let last = match perm {
            DeltaPerm::Cycle => ("d5", "d3"),
            DeltaPerm::Omega => ("d5", "d1"),
            DeltaPerm::Tau => ("d5", "d2"),
        };
        entries.push((last.0.to_string(), last.1.to_string()));
        checks.push((g.to_string(), entries));
    }
    let refs: Vec<(&str, Vec<(&str, &str)>)> =
        checks.iter().map(|(g, e)| (g.as_str(), e.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect())).collect();
    let refs2: Vec<(&str, &[(&str, &str)])> = refs.iter().map(|(g, e)| (*g, e.as_slice())).collect();
    ch.step("norm factors", &[], &refs2)
}

#[derive(Clone, Copy, PartialEq)]
enum C4Root {
    InK,
    Flipped,
    Outside,
}

fn c4_uv(root: C4Root) -> Chain {
    let mut ch = Chain::new("main", &["x", "y"]).free(&["al", "be"]);
    let (sigma_c, v_def): (&[(&str, &str)], &str) = match root {
        C4Root::InK => {
            ch = ch.free(&["sc"]).define("c", "sc^2");
            (&[("al", "be"), ("be", "-al")], "be*Y")
        }
        C4Root::Flipped => {
            ch = ch.free(&["c"]).sqrt("sc", "c");
            (&[("al", "be"), ("be", "-al"), ("sc", "-sc")], "be/Y")
        }
        C4Root::Outside => {
            ch = ch.free(&["c"]).sqrt("sc", "c");
            (&[("al", "be"), ("be", "-al")], "be*Y")
        }
    };
    ch = ch
        .define("X", CAYLEY_X)
        .define("Y", CAYLEY_Y)
        .gen("sigma", sigma_c, &["y", "c/x"])
        .composite("sigma2", "sigma", "sigma");
    if root == C4Root::Outside {
        ch = ch.gen("phi_c", &[("sc", "-sc")], &["x", "y"]);
    }
    ch = ch.header(&["sigma"], C4, "1");
    let mut exp: Vec<(&str, &[(&str, &str)])> =
        vec![("sigma", &[("u", "v"), ("v", "u")]), ("sigma2", &[("al", "-al"), ("be", "-be"), ("u", "u"), ("v", "v")])];
    if root == C4Root::Outside {
        exp.push(("phi_c", &[("u", "al^2/u"), ("v", "be^2/v")]));
    }
    ch.step("u, v", &[("u", "al*X"), ("v", v_def)], &exp)
}

fn c4_ab_tail(ch: Chain) -> Chain {
    ch.define("A", "al*be")
        .define("B", "al/be")
        .define("a", "A*(B + 1/B)")
        .define("b", "B - 1/B")
        .invariant_under("sigma^2 fixes A, B", &["sigma2"], &["A", "B"])
        .step("A, B", &[], &[("sigma", &[("A", "-A"), ("B", "-1/B")])])
        .identity("a", "a", "al^2 + be^2")
        .identity("b", "b", "(al^2 - be^2)/(al*be)")
        .invariant("a, b in k", &["a", "b"])
        .step("U, V", &[("U", "u + v"), ("V", "A*(u - v)")], &[("sigma", &[("U", "U"), ("V", "V")])])
}

fn v41_norm(e1: i32, e2: i32) -> (String, String, String, String) {
    let xdef = if e1 == 1 { "x" } else { "sa*x" };
    let ydef = if e2 == 1 { "y" } else { "sa*y" };
    let c2 = if e1 == 1 { "c" } else { "a*c" };
    let d2 = if e2 == 1 { "d" } else { "a*d" };
    (xdef.into(), ydef.into(), c2.into(), d2.into())
}

fn v41_case1() -> Vec<Chain> {
    let mut out = Vec::new();
    for (e1, e2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let (xdef, ydef, c2, d2) = v41_norm(e1, e2);
        let lx = format!("{e1}*x");
        let ly = format!("{e2}*d/y");
        let cx = format!("{c2}/X");
        let dy = format!("{d2}/Y");
        let ch = Chain::new(&format!("eps1={e1},eps2={e2}"), &["x", "y"])
            .free(&["a", "b", "c", "d"])
            .sqrt("sa", "a")
            .sqrt("sb", "b")
            .define("sab", "sa*sb")
            .gen("lambda", &[("sa", "-sa")], &[&lx, &ly])
            .gen("-I", &[("sb", "-sb")], &["c/x", "d/y"])
            .composite("-lambda", "lambda", "-I")
            .header(&["lambda", "-I"], V4_1, "1")
            .step(
                "normalize",
                &[("X", &xdef), ("Y", &ydef)],
                &[
                    ("lambda", &[("X", "X"), ("Y", &dy)]),
                    ("-I", &[("X", &cx), ("Y", &dy)]),
                    ("-lambda", &[("X", &cx), ("Y", "Y")]),
                ],
            )
            .step(
                "sqrt(ab)",
                &[],
                &[
                    ("lambda", &[("sab", "-sab"), ("sb", "sb")]),
                    ("-lambda", &[("sab", "sab"), ("sb", "-sb")]),
                ],
            );
        out.push(ch);
    }
    out
}

fn v41_case2() -> Vec<Chain> {
    let mut out = Vec::new();
    for (e1, e2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let (xdef, ydef, c2, d2) = v41_norm(e1, e2);
        let lx = format!("{e1}*x");
        let ly = format!("{e2}*d/y");
        let cx = format!("{c2}/X");
        let dy = format!("{d2}/Y");
        let u = format!("Y*(X^2 - {c2})/(X^2*Y^2 - {c2}*{d2})");
        let v = format!("X*(Y^2 - {d2})/(X^2*Y^2 - {c2}*{d2})");
        let vdef = format!("({c2} - {d2}*U^2)*v");
        let vimg = format!("(({c2}) - ({d2})*U^2)^2/((({c2}) - ({d2})*U^2/a)*V)");
        let wdef = format!("(({c2}) - ({d2})*U^2/a)*V/(({c2}) - ({d2})*U^2)");
        let wimg = format!("(({c2}) - ({d2})*U^2/a)/W");
        let printed = format!("-({d2})*(U^2 - ({c2})/({d2}))/V");
        let ch = Chain::new(&format!("eps1={e1},eps2={e2}"), &["x", "y"])
            .free(&["a", "c", "d"])
            .sqrt("sa", "a")
            .define("u", &u)
            .define("v", &v)
            .gen("lambda", &[("sa", "-sa")], &[&lx, &ly])
            .gen("-I", &[], &["c/x", "d/y"])
            .header(&["lambda", "-I"], V4_1, "-I")
            .step(
                "normalize",
                &[("X", &xdef), ("Y", &ydef)],
                &[("lambda", &[("X", "X"), ("Y", &dy)]), ("-I", &[("X", &cx), ("Y", &dy)])],
            )
            .invariant_under("-I fixes u, v", &["-I"], &["u", "v"])
            .step(
                "U, V",
                &[("U", "sa*u/v"), ("V", &vdef)],
                &[("lambda", &[("sa", "-sa"), ("U", "U"), ("V", &vimg)])],
            )
            .printed("lambda", "V", &printed)
            .step("U, W", &[("U", "U"), ("W", &wdef)], &[("lambda", &[("U", "U"), ("W", &wimg)])]);
        out.push(ch);
    }
    out
}

fn v41_case3(e1_only: Option<i32>) -> Vec<Chain> {
    let mut out = Vec::new();
    let e1s: Vec<i32> = e1_only.map_or(vec![1, -1], |e| vec![e]);
    for e1 in e1s {
        for e2 in [1, -1] {
            let ydef = if e2 == 1 { "y" } else { "sa*y" };
            let d2 = if e2 == 1 { "d" } else { "a*d" };
            let lx = format!("{e1}*x");
            let iy = format!("{e2}*d/y");
            let xl = format!("{e1}*X");
            let dy = format!("{d2}/Y");
            let mut ch = Chain::new(&format!("eps1={e1},eps2={e2}"), &["x", "y"])
                .free(&["a", "c", "d"])
                .sqrt("sa", "a")
                .gen("lambda", &[], &[&lx, "d/y"])
                .gen("-I", &[("sa", "-sa")], &["c/x", &iy])
                .header(&["lambda", "-I"], V4_1, "lambda")
                .step(
                    "normalize",
                    &[("X", "x"), ("Y", ydef)],
                    &[("lambda", &[("X", &xl), ("Y", &dy)]), ("-I", &[("X", "c/X"), ("Y", &dy)])],
                );
            if e1_only.is_some() {
                let w = format!("Y + {d2}/Y");
                if e1 == 1 {
                    ch = ch.invariant_under("lambda fixes X, W", &["lambda"], &["X", &w]).step(
                        "W",
                        &[("X", "X"), ("W", &w)],
                        &[("-I", &[("sa", "-sa"), ("X", "c/X"), ("W", "W")])],
                    );
                } else {
                    let u = format!("X*(Y - {d2}/Y)");
                    let uimg = format!("-c*(v^2 - 4*{d2})/u");
                    ch = ch.invariant_under("lambda fixes u, v", &["lambda"], &[&u, &w]).step(
                        "u, v",
                        &[("u", &u), ("v", &w)],
                        &[("-I", &[("sa", "-sa"), ("u", &uimg), ("v", "v")])],
                    );
                }
            }
            out.push(ch);
        }
    }
    out
}

fn v41_case4() -> Vec<Chain> {
    let mut out = Vec::new();
    for e1 in [1, -1] {
        for e2 in [1, -1] {
            let ydef = if e1 == 1 { "x" } else { "sa*x" };
            let c2 = if e1 == 1 { "c" } else { "a*c" };
            let ly = format!("{e2}*y");
            let ix = format!("{e1}*c/x");
            let xl = format!("{e2}*X");
            let cy = format!("{c2}/Y");
            let w = format!("Y + {c2}/Y");
            let mut ch = Chain::new(&format!("eps1={e1},eps2={e2}"), &["x", "y"])
                .free(&["a", "c", "d"])
                .sqrt("sa", "a")
                .gen("-lambda", &[], &["c/x", &ly])
                .gen("-I", &[("sa", "-sa")], &[&ix, "d/y"])
                .header(&["-lambda", "-I"], V4_1, "-lambda")
                .step(
                    "swap and normalize",
                    &[("X", "y"), ("Y", ydef)],
                    &[("-lambda", &[("X", &xl), ("Y", &cy)]), ("-I", &[("X", "d/X"), ("Y", &cy)])],
                );
            if e2 == 1 {
                ch = ch.invariant_under("-lambda fixes X, W", &["-lambda"], &["X", &w]).step(
                    "W",
                    &[("X", "X"), ("W", &w)],
                    &[("-I", &[("sa", "-sa"), ("X", "d/X"), ("W", "W")])],
                );
            } else {
                let u = format!("X*(Y - {c2}/Y)");
                let uimg = format!("-d*(v^2 - 4*{c2})/u");
                ch = ch.invariant_under("-lambda fixes u, v", &["-lambda"], &[&u, &w]).step(
                    "u, v",
                    &[("u", &u), ("v", &w)],
                    &[("-I", &[("sa", "-sa"), ("u", &uimg), ("v", "v")])],
                );
            }
            out.push(ch);
        }
    }
    out
}

fn v42_base(tau_c: (&str, &str), mi_c: (&str, &str), h: &str) -> Chain {
    Chain::new("main", &["x", "y"])
        .free(&["a", "b", "c"])
        .sqrt("sa", "a")
        .sqrt("sb", "b")
        .gen("tau", &[("sa", tau_c.0), ("sb", tau_c.1)], &["y", "x"])
        .gen("-I", &[("sa", mi_c.0), ("sb", mi_c.1)], &["c/x", "c/y"])
        .header(&["tau", "-I"], V4_2, h)
}

fn s31_alpha_base() -> Chain {
    Chain::new("main", &["x", "y"])
        .free(&ALPHAS)
        .free(&["c"])
        .gen("rho2", &RHO2_AL, &["y", "c/(x*y)"])
        .gen("tau", &TAU_AL, &["y", "x"])
        .header(&["rho2", "tau"], S3_1, "1")
}

fn s31_133_xy() -> Chain {
    Chain::new("X..s", &["x", "y"])
        .free(&ALPHAS)
        .free(&["c"])
        .cbrt("cr", "c")
        .omega("w")
        .define("A", A_OMEGA)
        .define("B", B_OMEGA)
        .gen("rho2", &RHO2_AL, &["y", "c/(x*y)"])
        .gen("tau", &TAU_AL, &["y", "x"])
        .gen("phi_c", &[("cr", "w*cr")], &["x", "y"])
        .gen("phi_w", &[("w", "w^-1")], &["x", "y"])
        .header(&["rho2", "tau"], S3_1, "1")
        .step(
            "X, Y",
            &[("X", "x/cr"), ("Y", "y/cr")],
            &[
                ("rho2", &[("X", "Y"), ("Y", "1/(X*Y)")]),
                ("tau", &[("X", "Y"), ("Y", "X")]),
                ("phi_c", &[("X", "w^-1*X"), ("Y", "w^-1*Y")]),
                ("phi_w", &[("X", "X"), ("Y", "Y")]),
            ],
        )
}

const TAU_U_FIXED_W: [(&str, &str); 2] = [("u", "w*(v - u^2)/(u*v - 1)"), ("v", "w^-1*(u - v^2)/(u*v - 1)")];
const S_DEF: &str = "w^-1*(u - v^2)/(v*(u*v - 1))";
const T_DEF: &str = "w^-1*u*(u*v - 1)/(v - u^2)";

fn s31_133() -> Vec<Chain> {
    let xy = s31_133_xy()
        .step(
            "u, v",
            &[("u", EIGEN_U), ("v", EIGEN_V)],
            &[
                ("rho2", &[("u", "w*u"), ("v", "w^-1*v")]),
                ("tau", &TAU_U_FIXED_W),
                ("phi_c", &[("u", "v/u"), ("v", "1/u")]),
                ("phi_w", &[("u", "v"), ("v", "u")]),
            ],
        )
        .step(
            "s, t",
            &[("s", S_DEF), ("t", T_DEF)],
            &[
                ("rho2", &[("s", "w^-1*s"), ("t", "w^-1*t")]),
                ("tau", &[("s", "1/s"), ("t", "1/t")]),
                ("phi_c", &[("s", "t"), ("t", "1/(s*t)")]),
                ("phi_w", &[("s", "1/t"), ("t", "1/s")]),
            ],
        )
        .step(
            "A, B",
            &[],
            &[
                ("rho2", &[("A", "w*A"), ("B", "w^-1*B")]),
                ("tau", &[("A", "B"), ("B", "A")]),
                ("phi_c", &[("A", "A"), ("B", "B")]),
                ("phi_w", &[("A", "B"), ("B", "A")]),
            ],
        );
    let st = Chain::new("S..T'", &["s", "t"])
        .free(&["A", "B", "c"])
        .cbrt("cr", "c")
        .omega("w")
        .define("alpha", "A^3")
        .define("b", "A*B")
        .define("ap", "b^3/alpha^2")
        .gen("rho2", &[("A", "w*A"), ("B", "w^-1*B")], &["w^-1*s", "w^-1*t"])
        .gen("tau", &[("A", "B"), ("B", "A")], &["1/s", "1/t"])
        .gen("phi_c", &[("cr", "w*cr")], &["t", "1/(s*t)"])
        .gen("phi_w", &[("w", "w^-1"), ("A", "B"), ("B", "A")], &["1/t", "1/s"])
        .step(
            "S, T",
            &[("S", "A*s"), ("T", "A*t")],
            &[
                ("rho2", &[("alpha", "alpha"), ("S", "S"), ("T", "T")]),
                ("tau", &[("alpha", "b^3/alpha"), ("S", "b/S"), ("T", "b/T")]),
                ("phi_c", &[("alpha", "alpha"), ("S", "T"), ("T", "alpha/(S*T)")]),
                ("phi_w", &[("alpha", "b^3/alpha"), ("S", "b/T"), ("T", "b/S")]),
            ],
        )
        .step(
            "S', T'",
            &[("S'", "b*S/alpha"), ("T'", "b*T/alpha")],
            &[
                ("tau", &[("ap", "1/ap"), ("S'", "1/S'"), ("T'", "1/T'")]),
                ("phi_c", &[("ap", "ap"), ("S'", "T'"), ("T'", "ap/(S'*T')")]),
                ("phi_w", &[("ap", "1/ap"), ("S'", "1/T'"), ("T'", "1/S'")]),
            ],
        );
    let delta = delta_chain(
        "(i) norm",
        &[
            ("tau", &[], &["1/S'", "1/T'"], DeltaPerm::Tau),
            ("phi_c", &[("cr", "w*cr")], &["T'", "ap/(S'*T')"], DeltaPerm::Cycle),
            ("phi_w", &[("w", "w^-1")], &["1/T'", "1/S'"], DeltaPerm::Omega),
        ],
    )
    .step(
        "p, q",
        &[("p", "S'/(d0*d2*d4)"), ("q", "T'/(d0*d1*d5)")],
        &[
            ("tau", &[("p", "1/p"), ("q", "1/q")]),
            ("phi_c", &[("p", "q"), ("q", "1/(p*q)")]),
            ("phi_w", &[("p", "1/q"), ("q", "1/p")]),
        ],
    );
    vec![xy, st, delta]
}

fn s31_131(remark: bool) -> Vec<Chain> {
    let ab = Chain::new("A, B", &["x", "y"])
        .free(&ALPHAS)
        .free(&["c"])
        .omega("w")
        .define("A", A_OMEGA)
        .define("B", B_OMEGA)
        .gen("rho2", &RHO2_AL, &["y", "c/(x*y)"])
        .gen("tau", &TAU_AL, &["y", "x"])
        .header(&["rho2", "tau"], S3_1, "1")
        .step("A, B", &[], &[("rho2", &[("A", "w*A"), ("B", "w^-1*B")]), ("tau", &[("A", "B"), ("B", "A")])]);
    let main = Chain::new("X..T'", &["x", "y"])
        .free(&["A", "B", "c"])
        .cbrt("cr", "c")
        .omega("w")
        .define("alpha", "A^3")
        .define("b", "A*B")
        .define("ap", "b^3/alpha^2")
        .gen("rho2", &[("A", "w*A"), ("B", "w^-1*B")], &["y", "c/(x*y)"])
        .gen("tau", &[("A", "B"), ("B", "A")], &["y", "x"])
        .gen("phi_c", &[("cr", "w*cr")], &["x", "y"])
        .step(
            "X, Y",
            &[("X", "x/cr"), ("Y", "y/cr")],
            &[
                ("rho2", &[("X", "Y"), ("Y", "1/(X*Y)")]),
                ("tau", &[("X", "Y"), ("Y", "X")]),
                ("phi_c", &[("X", "w^-1*X"), ("Y", "w^-1*Y")]),
            ],
        )
        .step(
            "u, v",
            &[("u", EIGEN_U), ("v", EIGEN_V)],
            &[
                ("rho2", &[("u", "w*u"), ("v", "w^-1*v")]),
                ("tau", &TAU_U_FIXED_W),
                ("phi_c", &[("u", "v/u"), ("v", "1/u")]),
            ],
        )
        .step(
            "s, t",
            &[("s", S_DEF), ("t", T_DEF)],
            &[
                ("rho2", &[("s", "w^-1*s"), ("t", "w^-1*t")]),
                ("tau", &[("s", "1/s"), ("t", "1/t")]),
                ("phi_c", &[("s", "t"), ("t", "1/(s*t)")]),
            ],
        )
        .step(
            "S, T",
            &[("S", "A*s"), ("T", "A*t")],
            &[
                ("rho2", &[("S", "S"), ("T", "T")]),
                ("tau", &[("alpha", "b^3/alpha"), ("S", "b/S"), ("T", "b/T")]),
                ("phi_c", &[("alpha", "alpha"), ("S", "T"), ("T", "alpha/(S*T)")]),
            ],
        )
        .step(
            "S', T'",
            &[("S'", "b*S/alpha"), ("T'", "b*T/alpha")],
            &[
                ("tau", &[("ap", "1/ap"), ("S'", "1/S'"), ("T'", "1/T'")]),
                ("phi_c", &[("ap", "ap"), ("S'", "T'"), ("T'", "ap/(S'*T')")]),
            ],
        );
    let delta = delta_chain(
        "(i) norm",
        &[
            ("tau", &[], &["1/S'", "1/T'"], DeltaPerm::Tau),
            ("phi_c", &[("cr", "w*cr")], &["T'", "ap/(S'*T')"], DeltaPerm::Cycle),
        ],
    )
    .step(
        "p, q",
        &[("p", "S'/(d0*d2*d4)"), ("q", "T'/(d0*d1*d5)")],
        &[("tau", &[("p", "1/p"), ("q", "1/q")]), ("phi_c", &[("p", "q"), ("q", "1/(p*q)")])],
    );
    let t_img = "(1 - S'' - T'' + app^2*S''*T'')/(1 - app^2*S'' - app^2*T'' + app^2*S''*T'')";
    let mut second = Chain::new("(ii) S'', T''", &["S'", "T'"])
        .free(&["ap", "c"])
        .cbrt("cr", "c")
        .omega("w")
        .define("app", "(ap + 1)/(ap - 1)")
        .define("a", "4/(app^2 - 1)")
        .gen("tau", &[("ap", "1/ap")], &["1/S'", "1/T'"])
        .gen("phi_c", &[("cr", "w*cr")], &["T'", "ap/(S'*T')"])
        .step(
            "S'', T''",
            &[("S''", "((S' + 1)/(S' - 1))/app"), ("T''", "((T' + 1)/(T' - 1))/app")],
            &[
                ("tau", &[("app", "-app"), ("S''", "S''"), ("T''", "T''")]),
                ("phi_c", &[("app", "app"), ("S''", "T''"), ("T''", t_img)]),
            ],
        );
    if remark {
        second = second.step(
            "r1, r2",
            &[("r1", "(S'' - 1)/(2*S'')"), ("r2", "(T'' - 1)/(2*T'')")],
            &[("phi_c", &[("r1", "r2"), ("r2", "(1 - r1 - r2)/(1 + a*r1*r2)")])],
        );
        return vec![second];
    }
    vec![ab, main, delta, second]
}

fn s31_132() -> Vec<Chain> {
    let main = Chain::new("X..S", &["x", "y"])
        .free(&["a", "c"])
        .cbrt("al", "a")
        .cbrt("cr", "c")
        .omega("w")
        .gen("rho2", &[("al", "w*al")], &["y", "c/(x*y)"])
        .gen("tau", &[("w", "w^-1")], &["y", "x"])
        .gen("phi_c", &[("cr", "w*cr")], &["x", "y"])
        .header(&["rho2", "tau"], S3_1, "1")
        .step(
            "X, Y",
            &[("X", "x/cr"), ("Y", "y/cr")],
            &[
                ("rho2", &[("X", "Y"), ("Y", "1/(X*Y)")]),
                ("tau", &[("X", "Y"), ("Y", "X")]),
                ("phi_c", &[("X", "w^-1*X"), ("Y", "w^-1*Y")]),
            ],
        )
        .step(
            "u, v",
            &[("u", EIGEN_U), ("v", EIGEN_V)],
            &[
                ("rho2", &[("u", "w*u"), ("v", "w^-1*v")]),
                ("tau", &[("u", "w^-1*(u - v^2)/(u*v - 1)"), ("v", "w*(v - u^2)/(u*v - 1)")]),
                ("phi_c", &[("u", "v/u"), ("v", "1/u")]),
            ],
        )
        .step(
            "s, t",
            &[("s", S_DEF), ("t", T_DEF)],
            &[
                ("rho2", &[("s", "w^-1*s"), ("t", "w^-1*t")]),
                ("tau", &[("s", "t"), ("t", "s")]),
                ("phi_c", &[("s", "t"), ("t", "1/(s*t)")]),
            ],
        )
        .step(
            "S, T",
            &[("S", "al*s"), ("T", "al*t")],
            &[
                ("rho2", &[("S", "S"), ("T", "T")]),
                ("tau", &[("S", "T"), ("T", "S")]),
                ("phi_c", &[("S", "T"), ("T", "a/(S*T)")]),
            ],
        );
    let norm = Chain::new("(i) norm", &["S", "T"])
        .free(&["d0", "d1", "d2", "c"])
        .cbrt("cr", "c")
        .omega("w")
        .define("a", "d0*d1*d2")
        .gen("tau", &[("w", "w^-1"), ("d1", "d2"), ("d2", "d1")], &["T", "S"])
        .gen("phi_c", &[("d0", "d1"), ("d1", "d2"), ("d2", "d0"), ("cr", "w*cr")], &["T", "a/(S*T)"])
        .step("a in k", &[], &[("tau", &[("a", "a")]), ("phi_c", &[("a", "a")])])
        .step(
            "p, q",
            &[("p", "S/d1"), ("q", "T/d2")],
            &[("tau", &[("p", "q"), ("q", "p")]), ("phi_c", &[("p", "q"), ("q", "1/(p*q)")])],
        );
    let second = Chain::new("(ii) S', T', U'", &["S", "T"])
        .free(&["a", "c"])
        .cbrt("cr", "c")
        .omega("w")
        .gen("tau", &[("w", "w^-1")], &["T", "S"])
        .gen("phi_c", &[("cr", "w*cr")], &["T", "a/(S*T)"])
        .step(
            "U",
            &[("S", "S"), ("T", "T"), ("U", "a/(S*T)")],
            &[
                ("tau", &[("S", "T"), ("T", "S"), ("U", "U")]),
                ("phi_c", &[("S", "T"), ("T", "U"), ("U", "S")]),
            ],
        )
        .step(
            "S', T', U'",
            &[("S'", "S + T + U"), ("T'", "w^-1*S + w*T + U"), ("U'", "w*S + w^-1*T + U")],
            &[
                ("tau", &[("S'", "S'"), ("T'", "T'"), ("U'", "U'")]),
                ("phi_c", &[("S'", "S'"), ("T'", "w*T'"), ("U'", "w^-1*U'")]),
            ],
        )
        .invariant("generators", &["S'", "T'/cr", "cr*U'"]);
    vec![main, norm, second]
}

#[derive(Clone, Copy, PartialEq)]
enum D4Root {
    InK,
    Sigma,
    Sigma2Tau,
    Sigma2SigmaTau,
    Outside,
}

fn d4_head(e: i32, root: D4Root) -> Chain {
    let mut ch = Chain::new(&eps_name(e), &["x", "y"]).free(&["al", "be"]);
    let (sig_sc, tau_sc): (Option<&str>, Option<&str>) = match root {
        D4Root::InK => {
            ch = ch.free(&["sc"]).define("c", "sc^2");
            (None, None)
        }
        D4Root::Sigma => (None, Some("-sc")),
        D4Root::Sigma2Tau => (Some("-sc"), None),
        D4Root::Sigma2SigmaTau => (Some("-sc"), Some("-sc")),
        D4Root::Outside => (None, None),
    };
    if root != D4Root::InK {
        ch = ch.free(&["c"]).sqrt("sc", "c");
    }
    let mut sc: Vec<(&str, &str)> = vec![("al", "be"), ("be", "-al")];
    if let Some(s) = sig_sc {
        sc.push(("sc", s));
    }
    let mut tc: Vec<(&str, &str)> = vec![("al", "be"), ("be", "al")];
    if let Some(s) = tau_sc {
        tc.push(("sc", s));
    }
    let ex = format!("{e}*x");
    let ey = format!("{e}*y");
    ch = ch
        .define("X", CAYLEY_X)
        .define("Y", CAYLEY_Y)
        .gen("sigma", &sc, &["y", "c/x"])
        .gen("tau", &tc, &[&ey, &ex])
        .composite("sigma2", "sigma", "sigma")
        .composite("sigma*tau", "sigma", "tau");
    if root == D4Root::Outside {
        ch = ch.gen("phi_c", &[("sc", "-sc")], &["x", "y"]);
    }
    ch.header(&["sigma", "tau"], D4, "1")
}

/// `u = αX` and `v = βY` (or `β/Y`) with the action of σ, σ², τ, στ.
fn d4_uv(e: i32, root: D4Root, _unused: bool) -> Chain {
    let ch = d4_head(e, root);
    let inverted = matches!(root, D4Root::Sigma2Tau | D4Root::Sigma2SigmaTau);
    let v_def = if inverted { "be/Y" } else { "be*Y" };
    // tau swaps u and v, or sends u -> be^2/v, v -> al^2/u.
    let swaps = match root {
        D4Root::InK | D4Root::Outside | D4Root::Sigma2SigmaTau => e == 1,
        D4Root::Sigma | D4Root::Sigma2Tau => e == -1,
    };
    let tau_img: &[(&str, &str)] = if swaps { &[("u", "v"), ("v", "u")] } else { &[("u", "be^2/v"), ("v", "al^2/u")] };
    let st_img: &[(&str, &str)] = if swaps { &[("u", "u"), ("v", "v")] } else { &[("u", "al^2/u"), ("v", "be^2/v")] };
    let mut exp: Vec<(&str, &[(&str, &str)])> = vec![
        ("sigma", &[("u", "v"), ("v", "u")]),
        ("sigma2", &[("al", "-al"), ("be", "-be"), ("u", "u"), ("v", "v")]),
        ("tau", tau_img),
        ("sigma*tau", st_img),
    ];
    if root == D4Root::Outside {
        exp.push(("phi_c", &[("u", "al^2/u"), ("v", "be^2/v")]));
    }
    ch.step("u, v", &[("u", "al*X"), ("v", v_def)], &exp)
}

fn d4_tail_111(ch: Chain) -> Chain {
    ch.define("A", "al^2")
        .define("B", "be^2")
        .define("a", "A + B")
        .define("b", "(A - B)^2")
        .invariant_under("A, B fixed by sigma^2, sigma*tau", &["sigma2", "sigma*tau"], &["A", "B"])
        .invariant("a, b in k", &["a", "b"])
        .step("A, B", &[("u", "u"), ("v", "v")], &[("sigma", &[("A", "B"), ("B", "A"), ("u", "v"), ("v", "u")])])
        .step("U, V", &[("U", "u + v"), ("V", "(A - B)*(u - v)")], &[("sigma", &[("U", "U"), ("V", "V")])])
}

fn d4_tail_112(ch: Chain) -> Chain {
    let g4 = "(g^2 + 4)";
    let den = format!("(a^2*U^2 - {g4}*V^2)");
    let u_img = format!("2*a^2*(a*U - g*V)/{den}");
    let v_img = format!("-2*a^3*(a*g*U - {g4}*V)/({g4}*{den})");
    let s_def = format!("{g4}*(a*U - g*V)/(2*a*U)");
    let s_img = format!("{g4}/S");
    let t_img = format!("a*(S + {g4}/S - g^2 - 4)/T");
    ch.define("A", "al*be")
        .define("B", "al/be")
        .define("a", "A*(B + 1/B)")
        .define("g", "B - 1/B")
        .invariant_under("A, B fixed by sigma^2", &["sigma2"], &["A", "B"])
        .step(
            "A, B",
            &[("u", "u"), ("v", "v")],
            &[
                ("sigma", &[("A", "-A"), ("B", "-1/B"), ("u", "v"), ("v", "u")]),
                ("tau", &[("A", "A"), ("B", "1/B"), ("u", "A/(B*v)"), ("v", "A*B/u")]),
                ("sigma*tau", &[("u", "A*B/u"), ("v", "A/(B*v)")]),
            ],
        )
        .identity("a", "a", "al^2 + be^2")
        .identity("gamma", "g", "(al^2 - be^2)/(al*be)")
        .step(
            "U, V",
            &[("U", "u + v"), ("V", "A*(u - v)")],
            &[
                ("sigma", &[("U", "U"), ("V", "V")]),
                ("sigma*tau", &[("a", "a"), ("g", "-g"), ("U", &u_img), ("V", &v_img)]),
            ],
        )
        .step(
            "S, T",
            &[("S", &s_def), ("T", "a*g/U")],
            &[("sigma*tau", &[("g", "-g"), ("S", &s_img), ("T", &t_img)])],
        )
}

const PHI_U: &str = "2*b*(a*U - V)/(b*U^2 - V^2)";
const PHI_V: &str = "2*b*(b*U - a*V)/(b*U^2 - V^2)";
const ST_S: &str = "(b*U - a*V)/V";
const ST_T: &str = "(b*U^2 - V^2)/(b*U - a*V)";
const ST_S_IMG: &str = "(a^2 - b)/s";
const ST_T_IMG: &str = "(2*(s + (a^2 - b)/s) + 4*a)/t";

fn d4_151() -> Chain {
    d4_uv(1, D4Root::Outside, false)
        .define("A", "al^2")
        .define("B", "be^2")
        .define("a", "A + B")
        .define("b", "(A - B)^2")
        .invariant("a, b in k", &["a", "b"])
        .step(
            "U, V",
            &[("U", "u + v"), ("V", "(A - B)*(u - v)")],
            &[
                ("sigma", &[("U", "U"), ("V", "V")]),
                ("tau", &[("U", "U"), ("V", "V")]),
                ("phi_c", &[("sc", "-sc"), ("U", PHI_U), ("V", PHI_V)]),
            ],
        )
        .step("s, t", &[("s", ST_S), ("t", ST_T)], &[("phi_c", &[("s", ST_S_IMG), ("t", ST_T_IMG)])])
}

fn d4_152() -> Chain {
    d4_head(-1, D4Root::Outside)
        .composite("tau*phi_c", "tau", "phi_c")
        .composite("stp", "sigma", "tau*phi_c")
        .define("A", "al^2")
        .define("B", "be^2")
        .define("C", "al*be*sc")
        .define("a", "A + B")
        .define("b", "(A - B)^2")
        .define("g", "2*(A - B)*C")
        .step(
            "u, v",
            &[("u", "al*X"), ("v", "be*Y")],
            &[
                ("sigma", &[("u", "v"), ("v", "u")]),
                ("sigma2", &[("u", "u"), ("v", "v")]),
                ("tau", &[("u", "be^2/v"), ("v", "al^2/u")]),
                ("stp", &[("al", "-al"), ("be", "be"), ("sc", "-sc"), ("u", "u"), ("v", "v")]),
            ],
        )
        .invariant_under("A, B, C fixed", &["sigma2", "stp"], &["A", "B", "C"])
        .step(
            "A, B, C",
            &[("u", "u"), ("v", "v")],
            &[
                ("sigma", &[("A", "B"), ("B", "A"), ("C", "-C"), ("u", "v"), ("v", "u")]),
                ("tau", &[("A", "B"), ("B", "A"), ("C", "C"), ("u", "B/v"), ("v", "A/u")]),
            ],
        )
        .invariant("a, b fixed", &["a", "b"])
        .step(
            "U, V",
            &[("U", "u + v"), ("V", "(A - B)*(u - v)")],
            &[("sigma", &[("U", "U"), ("V", "V")]), ("tau", &[("g", "-g"), ("U", PHI_U), ("V", PHI_V)])],
        )
        .step("s, t", &[("s", ST_S), ("t", ST_T)], &[("tau", &[("g", "-g"), ("s", ST_S_IMG), ("t", ST_T_IMG)])])
        .identity("gamma^2", "g^2", "b*c*(a^2 - b)")
}

#[derive(Clone, Copy, PartialEq)]
enum D4Quad {
    MinusI,
    TauSigma,
    MinusITau,
    Sigma,
}

fn d4_quad(e: i32, kind: D4Quad) -> Chain {
    let ex = format!("{e}*x");
    let ey = format!("{e}*y");
    let ex_img = format!("{e}*X");
    let ey_img = format!("{}*Y", -e);
    let mut ch = Chain::new(&eps_name(e), &["x", "y"]).free(&["a", "c"]).sqrt("sa", "a");
    let (sig, tau, h): (Vec<(&str, &str)>, Vec<(&str, &str)>, &str) = match kind {
        D4Quad::MinusI => {
            ch = ch.free(&["b"]).sqrt("sb", "b");
            (vec![("sa", "-sa")], vec![("sb", "-sb")], "-I")
        }
        D4Quad::TauSigma => (vec![("sa", "-sa")], vec![("sa", "-sa")], "-I,tau*sigma"),
        D4Quad::MinusITau => (vec![("sa", "-sa")], vec![], "-I,tau"),
        D4Quad::Sigma => (vec![], vec![("sa", "-sa")], "sigma"),
    };
    ch = ch
        .gen("sigma", &sig, &["y", "c/x"])
        .gen("tau", &tau, &[&ey, &ex])
        .composite("tau*sigma", "tau", "sigma")
        .header(&["sigma", "tau"], D4, h);
    let mut exp: Vec<(&str, Vec<(&str, &str)>)> =
        vec![("sigma", vec![("X", "c/X"), ("Y", "-c/Y")]), ("tau", vec![("X", &ex_img), ("Y", &ey_img)])];
    let ts_x = format!("{e}*c/X");
    let ts_y = format!("{e}*c/Y");
    if kind == D4Quad::TauSigma {
        exp.push(("tau*sigma", vec![("sa", "sa"), ("X", &ts_x), ("Y", &ts_y)]));
    }
    let refs: Vec<(&str, &[(&str, &str)])> = exp.iter().map(|(g, v)| (*g, v.as_slice())).collect();
    ch.step("X, Y", &[("X", L21_X), ("Y", L21_Y)], &refs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_tag_builds() {
        for t in case_tags() {
            assert!(build(t).is_some(), "{t}");
        }
    }
}
