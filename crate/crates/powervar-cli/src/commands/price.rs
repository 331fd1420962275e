//! `price`: one row per requested spot at the valuation time, using the
//! selected engine.

use log::{info, warn};
use powervar::{monte_carlo_price, project_coefficients, FdConfig, McConfig};

use crate::config::{CommonArgs, Format, Method, RunConfig, PRICE_DEFAULTS};
use crate::output::{csv_num, json_num, json_obj, json_str, render_csv, render_json, write_document};
use crate::CliError;

const CSV_HEADER: &str = "t,S,value,method,n_terms,tail_ratio";

struct PriceRow {
    t: f64,
    s: f64,
    value: f64,
    method: Method,
    n_terms: Option<usize>,
    tail_ratio: Option<f64>,
}

impl PriceRow {
    fn to_json(&self) -> String {
        json_obj(&[
            ("t", json_num(self.t)),
            ("S", json_num(self.s)),
            ("value", json_num(self.value)),
            ("method", json_str(self.method.name())),
            (
                "n_terms",
                self.n_terms.map_or_else(|| "null".to_string(), |n| n.to_string()),
            ),
            (
                "tail_ratio",
                self.tail_ratio.map_or_else(|| "null".to_string(), json_num),
            ),
        ])
    }

    fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            csv_num(self.t),
            csv_num(self.s),
            csv_num(self.value),
            self.method.name(),
            self.n_terms.map_or_else(String::new, |n| n.to_string()),
            self.tail_ratio.map_or_else(String::new, csv_num),
        )
    }
}

fn compute_rows(cfg: &RunConfig) -> Result<Vec<PriceRow>, CliError> {
    let model = super::build_model(cfg)?;
    let payoff = super::build_payoff(cfg)?;
    let t = cfg.valuation;
    let row = |s: f64, value: f64, n_terms, tail_ratio| PriceRow {
        t,
        s,
        value,
        method: cfg.method,
        n_terms,
        tail_ratio,
    };

    match cfg.method {
        Method::Spectral => {
            let rule = super::projection_rule(&model, cfg.quad_nodes)?;
            let sol = project_coefficients(&model, &payoff, cfg.maturity, cfg.terms, &rule)
                .map_err(CliError::Pricing)?;
            if sol.support_warning() {
                warn!("payoff mass falls outside the quadrature window; increase quad_nodes");
            }
            let mut rows = Vec::with_capacity(cfg.spots.len());
            for &s in &cfg.spots {
                let value = sol.evaluate(t, s).map_err(CliError::Pricing)?;
                rows.push(row(s, value, Some(cfg.terms), Some(sol.tail_ratio())));
            }
            Ok(rows)
        }
        Method::CrankNicolson => {
            // The operator has no explicit time dependence, so pricing at
            // time t is a solve over the remaining horizon.
            let horizon = cfg.maturity - t;
            if horizon == 0.0 {
                return Ok(cfg.spots.iter().map(|&s| row(s, payoff.value(s), None, None)).collect());
            }
            let fd = FdConfig { s_max: cfg.fd_s_max, n_space: cfg.fd_space, n_time: cfg.fd_time };
            let (values, support_ok, non_dominant) =
                super::fd_prices_at(&model, &payoff, horizon, &fd, &cfg.spots)
                    .map_err(CliError::Pricing)?;
            if !support_ok {
                warn!("payoff mass reaches fd_s_max; the zero far boundary biases prices low");
            }
            info!("fd solve: {non_dominant} non-dominant interior row(s)");
            Ok(cfg
                .spots
                .iter()
                .zip(values)
                .map(|(&s, v)| row(s, v, None, None))
                .collect())
        }
        Method::MonteCarlo => {
            let mc = McConfig { n_paths: cfg.mc_paths, n_steps: cfg.mc_steps, seed: cfg.seed };
            let mut rows = Vec::with_capacity(cfg.spots.len());
            for &s in &cfg.spots {
                let out = monte_carlo_price(&model, &payoff, t, s, cfg.maturity, &mc)
                    .map_err(CliError::Pricing)?;
                info!(
                    "mc at S = {s}: stderr {:.3e}, {} blown-up path(s)",
                    out.stderr, out.blown_up
                );
                rows.push(row(s, out.mean, None, None));
            }
            Ok(rows)
        }
    }
}

pub fn run(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(args, PRICE_DEFAULTS)?;
    let rows = compute_rows(&cfg)?;
    let doc = match cfg.format {
        Format::Json => {
            let lines: Vec<String> = rows.iter().map(PriceRow::to_json).collect();
            render_json(&cfg, "price", "rows", &lines)
        }
        Format::Csv => {
            let lines: Vec<String> = rows.iter().map(PriceRow::to_csv).collect();
            render_csv(CSV_HEADER, &lines)
        }
    };
    write_document(&cfg, &doc)
}
