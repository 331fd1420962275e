//! `converge`: truncation study. One projection at the largest requested N,
//! then reconstruction error and probe prices for every prefix, with deltas
//! against the finest truncation.

use powervar::project_coefficients;

use crate::config::{CommonArgs, Format, RunConfig, CONVERGE_DEFAULTS};
use crate::output::{csv_num, json_num, json_obj, render_csv, render_json, write_document};
use crate::CliError;

const CSV_HEADER: &str = "n_terms,reconstruction_error,S,price,delta_vs_finest";

pub fn run(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(args, CONVERGE_DEFAULTS)?;
    let model = super::build_model(&cfg)?;
    let payoff = super::build_payoff(&cfg)?;
    let rule = super::projection_rule(&model, cfg.quad_nodes)?;
    let n_max = *cfg.n_list.iter().max().expect("n_list validated nonempty");
    let sol = project_coefficients(&model, &payoff, cfg.maturity, n_max, &rule)
        .map_err(CliError::Pricing)?;

    // Prices at the finest truncation anchor the delta column.
    let mut finest = Vec::with_capacity(cfg.spots.len());
    for &s in &cfg.spots {
        finest.push(sol.evaluate_truncated(n_max, cfg.valuation, s).map_err(CliError::Pricing)?);
    }

    let mut json_rows = Vec::new();
    let mut csv_rows = Vec::new();
    for &n in &cfg.n_list {
        let recon = sol.reconstruction_error(n, &rule).map_err(CliError::Pricing)?;
        for (j, &s) in cfg.spots.iter().enumerate() {
            let price = sol
                .evaluate_truncated(n, cfg.valuation, s)
                .map_err(CliError::Pricing)?;
            let delta = price - finest[j];
            match cfg.format {
                Format::Json => json_rows.push(json_obj(&[
                    ("n_terms", n.to_string()),
                    ("reconstruction_error", json_num(recon)),
                    ("S", json_num(s)),
                    ("price", json_num(price)),
                    ("delta_vs_finest", json_num(delta)),
                ])),
                Format::Csv => csv_rows.push(format!(
                    "{n},{},{},{},{}",
                    csv_num(recon),
                    csv_num(s),
                    csv_num(price),
                    csv_num(delta)
                )),
            }
        }
    }

    let doc = match cfg.format {
        Format::Json => render_json(&cfg, "converge", "rows", &json_rows),
        Format::Csv => render_csv(CSV_HEADER, &csv_rows),
    };
    write_document(&cfg, &doc)
}
