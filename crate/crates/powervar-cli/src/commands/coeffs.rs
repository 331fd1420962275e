//! `coeffs`: the projection coefficients, their discounted values over the
//! remaining horizon, and each mode's decay rate.

use powervar::project_coefficients;

use crate::config::{CommonArgs, Format, RunConfig, COEFFS_DEFAULTS};
use crate::output::{csv_num, json_num, json_obj, render_csv, render_json, write_document};
use crate::CliError;

const CSV_HEADER: &str = "n,raw_coeff,discounted,decay_rate";

pub fn run(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(args, COEFFS_DEFAULTS)?;
    let model = super::build_model(&cfg)?;
    let payoff = super::build_payoff(&cfg)?;
    let rule = super::projection_rule(&model, cfg.quad_nodes)?;
    let sol = project_coefficients(&model, &payoff, cfg.maturity, cfg.terms, &rule)
        .map_err(CliError::Pricing)?;
    let horizon = cfg.maturity - cfg.valuation;
    if !(horizon >= 0.0) {
        return Err(CliError::Pricing(powervar::PricingError::BadDomain {
            what: "valuation time past maturity",
            value: cfg.valuation,
        }));
    }

    let mut json_rows = Vec::with_capacity(cfg.terms);
    let mut csv_rows = Vec::with_capacity(cfg.terms);
    for (n, &c) in sol.coefficients().iter().enumerate() {
        let discounted = c * model.mode_discount(n, horizon);
        let decay_rate = -model.eigenvalue(n);
        match cfg.format {
            Format::Json => json_rows.push(json_obj(&[
                ("n", n.to_string()),
                ("raw_coeff", json_num(c)),
                ("discounted", json_num(discounted)),
                ("decay_rate", json_num(decay_rate)),
            ])),
            Format::Csv => csv_rows.push(format!(
                "{n},{},{},{}",
                csv_num(c),
                csv_num(discounted),
                csv_num(decay_rate)
            )),
        }
    }

    let doc = match cfg.format {
        Format::Json => render_json(&cfg, "coeffs", "rows", &json_rows),
        Format::Csv => render_csv(CSV_HEADER, &csv_rows),
    };
    write_document(&cfg, &doc)
}
