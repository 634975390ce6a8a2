//! Machine-readable report with a fixed field set:
//! `order`, `prime_components[{generators, dimension, flags,
//! regularity_components[{equations, inequations, classification,
//! vessiot_dim, symbol_dim, complement_dim, N_a, N_b, N_cd, generic}]}]`.
//! Polynomials are serialized in their canonical normalized string form.

use diffreg::arith::{Context, Ranking, RankingStyle};
use diffreg::regularity::RegularityReport;
use serde::Serialize;

use crate::parse::print_poly;

#[derive(Debug, Serialize)]
pub struct JsonReport {
    pub order: u32,
    pub prime_components: Vec<JsonPrime>,
}

#[derive(Debug, Serialize)]
pub struct JsonPrime {
    pub generators: Vec<String>,
    pub dimension: usize,
    pub flags: JsonFlags,
    pub regularity_components: Vec<JsonComponent>,
}

#[derive(Debug, Serialize)]
pub struct JsonFlags {
    pub codimension: usize,
    pub simple_system: usize,
    pub over_q_caveat: bool,
    pub decomposition_incomplete: bool,
    pub merged: bool,
    pub factor_bound: u32,
    pub ranking: String,
}

#[derive(Debug, Serialize)]
pub struct JsonComponent {
    pub equations: Vec<String>,
    pub inequations: Vec<String>,
    pub classification: String,
    pub vessiot_dim: usize,
    pub symbol_dim: usize,
    pub complement_dim: usize,
    #[serde(rename = "N_a")]
    pub n_a: usize,
    #[serde(rename = "N_b")]
    pub n_b: usize,
    #[serde(rename = "N_cd")]
    pub n_cd: usize,
    pub generic: bool,
}

fn ranking_name(r: &Ranking) -> String {
    match &r.style {
        RankingStyle::Orderly => "orderly".to_string(),
        RankingStyle::LexByDerivative => "lex".to_string(),
        RankingStyle::Custom(_) => "custom".to_string(),
    }
}

pub fn build_report(report: &RegularityReport, ctx: &Context, ranking: &Ranking) -> JsonReport {
    let mut primes = Vec::new();
    for (k, sys) in report.systems.iter().enumerate() {
        for prime in &sys.primes {
            let generators = prime
                .prime
                .ideal
                .groebner()
                .iter()
                .map(|p| print_poly(ctx, ranking, p))
                .collect();
            let regularity_components = prime
                .components
                .iter()
                .map(|c| JsonComponent {
                    equations: c.equations.iter().map(|p| print_poly(ctx, ranking, p)).collect(),
                    inequations: c
                        .inequations
                        .iter()
                        .map(|p| print_poly(ctx, ranking, p))
                        .collect(),
                    classification: c.classification.as_str().to_string(),
                    vessiot_dim: c.vessiot_dim,
                    symbol_dim: c.symbol_dim,
                    complement_dim: c.complement_dim,
                    n_a: c.n_a,
                    n_b: c.n_b,
                    n_cd: c.n_cd,
                    generic: c.generic,
                })
                .collect();
            primes.push(JsonPrime {
                generators,
                dimension: prime.prime.dimension,
                flags: JsonFlags {
                    codimension: prime.prime.codimension,
                    simple_system: k,
                    over_q_caveat: prime.prime.over_q_caveat,
                    decomposition_incomplete: prime.prime.decomposition_incomplete,
                    merged: report.merged,
                    factor_bound: report.factor_bound,
                    ranking: ranking_name(ranking),
                },
                regularity_components,
            });
        }
    }
    JsonReport { order: report.order, prime_components: primes }
}

/// Human-readable rendering of the same report.
pub fn render_text(report: &RegularityReport, ctx: &Context, ranking: &Ranking) -> String {
    let mut out = String::new();
    out.push_str(&format!("order {}\n", report.order));
    for (k, sys) in report.systems.iter().enumerate() {
        out.push_str(&format!("simple differential system {}\n", k + 1));
        for p in &sys.system.equations {
            out.push_str(&format!("  eq   {} = 0\n", print_poly(ctx, ranking, p)));
        }
        for q in &sys.system.inequations {
            out.push_str(&format!("  ineq {} != 0\n", print_poly(ctx, ranking, q)));
        }
        for prime in &sys.primes {
            out.push_str(&format!(
                "  prime component (dimension {}, codimension {})\n",
                prime.prime.dimension, prime.prime.codimension
            ));
            for g in prime.prime.ideal.groebner() {
                out.push_str(&format!("    gen {}\n", print_poly(ctx, ranking, g)));
            }
            for c in &prime.components {
                let generic = if c.generic { ", generic" } else { "" };
                out.push_str(&format!(
                    "    component: {}{} (vessiot {}, symbol {}, complement {})\n",
                    c.classification.as_str(),
                    generic,
                    c.vessiot_dim,
                    c.symbol_dim,
                    c.complement_dim
                ));
                for e in &c.equations {
                    out.push_str(&format!("      eq   {} = 0\n", print_poly(ctx, ranking, e)));
                }
                for q in &c.inequations {
                    out.push_str(&format!("      ineq {} != 0\n", print_poly(ctx, ranking, q)));
                }
            }
        }
    }
    out
}
