//! Catalog of metric, map, theorem and check ids with their parameters.

use std::fmt::Write as _;

use schwarz_core::schwarz::TheoremId;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Param {
    pub name: &'static str,
    #[serde(rename = "type")]
    pub ty: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub default: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub id: &'static str,
    pub summary: &'static str,
    pub params: Vec<Param>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Catalog {
    pub metrics: Vec<Entry>,
    pub maps: Vec<Entry>,
    pub theorems: Vec<Entry>,
    pub checks: Vec<Entry>,
}

fn p(name: &'static str, ty: &'static str) -> Param {
    Param { name, ty, default: None }
}

fn pd(name: &'static str, ty: &'static str, default: &'static str) -> Param {
    Param { name, ty, default: Some(default) }
}

fn e(id: &'static str, summary: &'static str, params: Vec<Param>) -> Entry {
    Entry { id, summary, params }
}

pub fn catalog() -> Catalog {
    let metrics = vec![
        e("flat", "Euclidean metric on C^dim", vec![p("dim", "integer")]),
        e(
            "fubini_study",
            "affine chart of CP^dim, holomorphic sectional curvature 2/scale",
            vec![p("dim", "integer"), pd("scale", "number", "1.0")],
        ),
        e(
            "poincare_ball",
            "unit ball in C^dim, holomorphic sectional curvature -2/scale",
            vec![p("dim", "integer"), pd("scale", "number", "1.0")],
        ),
        e("scaled", "factor times an inner metric", vec![p("factor", "number"), p("inner", "metric")]),
        e("product", "Riemannian product of the factors", vec![p("factors", "array of metric")]),
    ];
    let maps = vec![
        e("identity", "z -> z", vec![]),
        e("constant", "z -> value", vec![p("value", "array of [re, im]")]),
        e("scale", "z -> factor z", vec![p("factor", "[re, im]")]),
        e(
            "linear",
            "z -> matrix z + offset",
            vec![p("matrix", "rows of [re, im]"), pd("offset", "array of [re, im]", "[]")],
        ),
        e("projection", "z -> (z_keep[0], z_keep[1], ...)", vec![p("keep", "array of integer")]),
        e(
            "polynomial",
            "one monomial list per target coordinate",
            vec![p("components", "array of array of {coeff: [re, im], powers: [integer]}")],
        ),
    ];
    let theorem_params = || {
        vec![
            p("name", "string"),
            p("source", "metric"),
            p("target", "metric"),
            p("map", "map"),
            pd("ell", "integer", "theorem dependent"),
            pd("part", "i | ii | iii | iv", "i"),
            p("region", "{radius, points, center?}"),
            pd("constants", "measured | analytic", "measured"),
            pd("seed", "integer", "derived from the suite seed"),
            pd("budget", "{frames, refine}", "{frames = 24, refine = 40}"),
            pd("refine", "integer", "200"),
        ]
    };
    let theorems = TheoremId::ALL
        .iter()
        .map(|t| Entry { id: t.id(), summary: t.statement(), params: theorem_params() })
        .collect();
    let seed = || pd("seed", "integer", "derived from the suite seed");
    let map_params = |extra: Vec<Param>| {
        let mut v = vec![p("name", "string"), p("source", "metric"), p("target", "metric"), p("map", "map")];
        v.extend(extra);
        v.push(seed());
        v
    };
    let checks = vec![
        e("theorem", "Schwarz-type bound, see the theorem ids", vec![p("theorem", "theorem id")]),
        e(
            "majorization",
            "partial trace and determinant bounds on random Hermitian pencils",
            vec![p("name", "string"), pd("trials", "integer", "500"), pd("max_dim", "integer", "5"), pd("equality_trials", "integer", "20"), seed()],
        ),
        e(
            "compound",
            "compound matrix functoriality and singular-product norm identity",
            vec![p("name", "string"), pd("trials", "integer", "200"), pd("max_dim", "integer", "4"), seed()],
        ),
        e(
            "sandwich",
            "sum of fourth powers <= U^2 <= l' times sum of fourth powers",
            vec![p("name", "string"), pd("trials", "integer", "200"), pd("max_len", "integer", "6"), seed()],
        ),
        e(
            "curvature",
            "constant holomorphic curvature structure or finite-difference agreement",
            vec![p("name", "string"), p("metric", "metric"), p("region", "region"), p("mode", "constant_h | fd_agreement"), seed()],
        ),
        e(
            "functionals",
            "closed forms of restricted Ricci and scalar curvature, Ricci-perp identity",
            vec![p("name", "string"), p("metric", "metric"), p("region", "region"), seed()],
        ),
        e(
            "bochner",
            "ddbar log identity for U_l or W_l at a point",
            map_params(vec![
                p("point", "array of [re, im]"),
                pd("direction", "array of [re, im]", "random"),
                p("ell", "integer"),
                p("barrier", "u | w"),
                pd("step", "number", "0.05"),
            ]),
        ),
        e(
            "quartic",
            "quartic curvature term against its averaged bound, three evaluations",
            map_params(vec![
                p("point", "array of [re, im]"),
                p("ell", "integer"),
                pd("samples", "integer", "100000"),
                pd("kappa", "number", "from the target model"),
            ]),
        ),
        e(
            "psh",
            "line Hessians of log sigma_l",
            map_params(vec![p("region", "region"), p("ell", "integer"), pd("lines", "integer", "8")]),
        ),
        e(
            "equivalence",
            "pointwise comparison of two negatively curved metrics",
            vec![
                p("name", "string"),
                p("first", "metric"),
                p("second", "metric"),
                p("region", "region"),
                pd("probes", "integer", "200"),
                pd("budget", "{frames, refine}", "suite budget"),
                seed(),
            ],
        ),
    ];
    Catalog { metrics, maps, theorems, checks }
}

pub fn render_text(cat: &Catalog) -> String {
    let mut out = String::new();
    for (title, entries) in [("metrics", &cat.metrics), ("maps", &cat.maps), ("theorems", &cat.theorems), ("checks", &cat.checks)] {
        let _ = writeln!(out, "{title}:");
        for entry in entries {
            let _ = writeln!(out, "  {:<18} {}", entry.id, entry.summary);
            if !entry.params.is_empty() {
                let params: Vec<String> = entry
                    .params
                    .iter()
                    .map(|p| match p.default {
                        Some(d) => format!("{}: {} = {d}", p.name, p.ty),
                        None => format!("{}: {}", p.name, p.ty),
                    })
                    .collect();
                let _ = writeln!(out, "  {:<18} ({})", "", params.join("; "));
            }
        }
    }
    out
}
