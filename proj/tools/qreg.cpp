// qreg: batch CLI for quantile-regression studies.
//
// Subcommands:
//   simulate  generate a synthetic dataset from a documented DGP
//   fit       fit one estimator at one quantile on a CSV dataset
//   study     run a full manifest-driven study over a quantile grid
//   report    re-render a study CSV table in another format
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bqr/design.hpp"
#include "bqr/dgp.hpp"
#include "bqr/endogeneity.hpp"
#include "bqr/io.hpp"
#include "bqr/manifest.hpp"
#include "bqr/study.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void write_output(const std::string& doc, const std::string& path) {
  if (path.empty()) {
    std::cout << doc;
    return;
  }
  std::ofstream out(path);
  if (!out) throw bqr::ParseError("cannot write '" + path + "'");
  out << doc;
}

int cmd_simulate(const std::string& kind, int n, const std::string& beta_csv,
                 const std::string& gamma_csv, const std::string& noise, double rho,
                 std::uint64_t seed, const std::string& out_path) {
  bqr::DgpConfig cfg;
  cfg.kind = kind == "simultaneous" ? bqr::DgpKind::Simultaneous : bqr::DgpKind::LocationScale;
  cfg.n = n;
  cfg.rho = rho;
  cfg.seed = seed;
  cfg.noise = noise == "laplace" ? bqr::NoiseKind::Laplace : bqr::NoiseKind::Normal;
  auto beta = parse_doubles(beta_csv);
  cfg.beta = Eigen::Map<bqr::Vector>(beta.data(), beta.size());
  if (!gamma_csv.empty()) {
    auto gamma = parse_doubles(gamma_csv);
    cfg.gamma = Eigen::Map<bqr::Vector>(gamma.data(), gamma.size());
  } else {
    cfg.gamma = bqr::Vector::Zero(cfg.beta.size());
  }
  auto sim = bqr::simulate_dgp(cfg);
  bqr::save_dataset_csv(sim.dataset, out_path);
  std::cerr << "wrote " << sim.dataset.n() << " rows to " << out_path << "\n";
  return 0;
}

int cmd_fit(const std::vector<std::string>& data, const std::vector<std::string>& columns,
            const std::string& response, const std::string& regressors_csv, bool no_intercept,
            const std::string& estimator, double tau, int draws, int burn_in,
            std::uint64_t seed, const std::string& chain_out, const std::string& endogenous) {
  std::vector<bqr::ColumnSchema> schemas;
  for (const auto& c : columns) {
    // NAME:HEADER[:log][:fillN], same grammar as the manifest
    std::stringstream ss(c);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() < 2) throw bqr::ParseError("--column needs NAME:HEADER[:log][:fillN]");
    bqr::ColumnSchema s{parts[0], parts[1], false, 0};
    for (std::size_t i = 2; i < parts.size(); ++i) {
      if (parts[i] == "log") s.log_transform = true;
      else if (parts[i].rfind("fill", 0) == 0) s.fill_limit = std::stoi(parts[i].substr(4));
      else throw bqr::ParseError("unknown --column option '" + parts[i] + "'");
    }
    schemas.push_back(s);
  }
  auto dataset = bqr::load_csv(data, schemas);

  bqr::ModelSpec spec;
  spec.response = response;
  {
    std::stringstream ss(regressors_csv);
    std::string item;
    while (std::getline(ss, item, ',')) spec.regressors.push_back(item);
  }
  spec.intercept = !no_intercept;
  if (!endogenous.empty()) spec.instrument_block = bqr::InstrumentBlock{endogenous, {}};
  auto d = bqr::build_design(dataset, spec);

  bqr::CoefficientTable table;
  std::vector<bqr::TestResult> tests;
  if (estimator == "ols") {
    auto r = bqr::ols_fit(d.X, d.y);
    for (Eigen::Index j = 0; j < r.coefficients.size(); ++j)
      table.rows.push_back({d.names[j], std::nan(""), "ols", r.coefficients(j),
                            r.coefficients(j) - 1.6449 * r.std_errors(j),
                            r.coefficients(j) + 1.6449 * r.std_errors(j), r.p_values(j),
                            bqr::stars_for_prob(r.p_values(j))});
  } else if (estimator == "qr") {
    auto r = bqr::qr_fit(d.X, d.y, bqr::QuantileLevel(tau));
    for (Eigen::Index j = 0; j < r.coefficients.size(); ++j)
      table.rows.push_back({d.names[j], tau, "qr", r.coefficients(j), r.coefficients(j),
                            r.coefficients(j), 1.0, 0});
  } else if (estimator == "bqr" || estimator == "bqr_2sls") {
    bqr::McmcConfig cfg;
    cfg.draws = draws;
    cfg.burn_in = burn_in;
    cfg.seed = seed;
    bqr::PosteriorChain chain;
    if (estimator == "bqr") {
      chain = bqr::bqr_fit(d.X, d.y, bqr::QuantileLevel(tau), bqr::BqrPrior{}, cfg, d.names);
    } else {
      if (!spec.instrument_block)
        throw bqr::ParseError("bqr_2sls needs --endogenous");
      auto iv = bqr::build_instruments(dataset, spec);
      bqr::Matrix X = d.X.bottomRows(iv.Z.rows());
      bqr::Vector y = d.y.tail(iv.Z.rows());
      auto it = std::find(d.names.begin(), d.names.end(), spec.instrument_block->endogenous);
      chain = bqr::bqr_2sls(X, y, it - d.names.begin(), iv.Z, bqr::QuantileLevel(tau),
                            bqr::BqrPrior{}, cfg, d.names);
    }
    if (!chain_out.empty()) bqr::save_chain_csv(chain, chain_out);
    auto rows = bqr::summarize_chain(chain, 0.90);
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  } else if (estimator == "tsls") {
    if (!spec.instrument_block) throw bqr::ParseError("tsls needs --endogenous");
    auto iv = bqr::build_instruments(dataset, spec);
    bqr::Matrix X = d.X.bottomRows(iv.Z.rows());
    bqr::Vector y = d.y.tail(iv.Z.rows());
    auto it = std::find(d.names.begin(), d.names.end(), spec.instrument_block->endogenous);
    auto r = bqr::tsls_fit(X, y, it - d.names.begin(), iv.Z, iv.excluded);
    for (Eigen::Index j = 0; j < r.coefficients.size(); ++j)
      table.rows.push_back({d.names[j], std::nan(""), "tsls", r.coefficients(j),
                            r.coefficients(j) - 1.6449 * r.std_errors(j),
                            r.coefficients(j) + 1.6449 * r.std_errors(j), r.p_values(j),
                            bqr::stars_for_prob(r.p_values(j))});
    tests.push_back(r.sargan);
    if (r.weak_id_F)
      tests.push_back({"stock-yogo weak identification F", *r.weak_id_F, 0,
                       r.weak_id_pass ? 0.0 : 1.0});
  } else {
    throw bqr::ParseError("unknown estimator '" + estimator + "'");
  }
  std::cout << bqr::render_report(table, tests, bqr::ReportFormat::Text);
  return 0;
}

int cmd_report(const std::string& table_path, const std::string& format,
               const std::string& out_path) {
  std::ifstream in(table_path);
  if (!in) throw bqr::ParseError("cannot open '" + table_path + "'");
  std::string header;
  std::getline(in, header);
  if (header.rfind("estimator,regressor,quantile", 0) != 0)
    throw bqr::ParseError("'" + table_path + "' is not a study CSV table");
  bqr::CoefficientTable table;
  std::vector<bqr::TestResult> tests;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    cells.resize(8);
    if (cells[0] == "test") {
      tests.push_back({cells[1], std::stod(cells[3]), 0, std::stod(cells[6])});
      continue;
    }
    double prob = std::stod(cells[6]);
    table.rows.push_back({cells[1], cells[2].empty() ? std::nan("") : std::stod(cells[2]),
                          cells[0], std::stod(cells[3]), std::stod(cells[4]),
                          std::stod(cells[5]), prob, bqr::stars_for_prob(prob)});
  }
  bqr::ReportFormat fmt = format == "markdown" ? bqr::ReportFormat::Markdown
                          : format == "csv"    ? bqr::ReportFormat::Csv
                                               : bqr::ReportFormat::Text;
  write_output(bqr::render_report(table, tests, fmt), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantile-regression econometrics pipeline"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  std::string kind = "location_scale", beta_csv = "1,1", gamma_csv, noise = "normal";
  std::string out_path = "simulated.csv";
  int n = 500;
  double rho = 0.0;
  std::uint64_t seed = 1;
  sim->add_option("--kind", kind, "location_scale | simultaneous");
  sim->add_option("--n", n, "observations (>= 50)");
  sim->add_option("--beta", beta_csv, "location coefficients, comma separated");
  sim->add_option("--gamma", gamma_csv, "scale coefficients (location_scale kind)");
  sim->add_option("--noise", noise, "normal | laplace");
  sim->add_option("--rho", rho, "endogeneity strength (simultaneous kind)");
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--out", out_path, "output CSV path");

  // fit
  auto* fit = app.add_subcommand("fit", "fit one estimator");
  std::vector<std::string> data, columns;
  std::string response, regressors, estimator = "qr", chain_out, endogenous;
  bool no_intercept = false;
  double tau = 0.5;
  int draws = 11000, burn_in = 1000;
  std::uint64_t fit_seed = 1;
  fit->add_option("--data", data, "input CSV paths")->required();
  fit->add_option("--column", columns, "column schema NAME:HEADER[:log][:fillN]")->required();
  fit->add_option("--response", response)->required();
  fit->add_option("--regressors", regressors, "comma separated")->required();
  fit->add_flag("--no-intercept", no_intercept);
  fit->add_option("--estimator", estimator, "ols | qr | bqr | tsls | bqr_2sls");
  fit->add_option("--tau", tau, "quantile level");
  fit->add_option("--draws", draws);
  fit->add_option("--burn-in", burn_in);
  fit->add_option("--seed", fit_seed);
  fit->add_option("--chain-out", chain_out, "persist posterior draws as CSV");
  fit->add_option("--endogenous", endogenous, "endogenous regressor for 2SLS estimators");

  // study
  auto* study = app.add_subcommand("study", "run a manifest-driven study");
  std::string manifest_path, study_out;
  study->add_option("manifest", manifest_path, "run manifest path")->required();
  study->add_option("--out", study_out, "override the manifest's output path");

  // report
  auto* report = app.add_subcommand("report", "re-render a study CSV table");
  std::string table_path, report_format = "text", report_out;
  report->add_option("table", table_path, "study table in csv format")->required();
  report->add_option("--format", report_format, "text | csv | markdown");
  report->add_option("--out", report_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(kind, n, beta_csv, gamma_csv, noise, rho, seed, out_path);
    if (fit->parsed())
      return cmd_fit(data, columns, response, regressors, no_intercept, estimator, tau, draws,
                     burn_in, fit_seed, chain_out, endogenous);
    if (study->parsed()) {
      auto m = bqr::parse_manifest(manifest_path);
      if (!study_out.empty()) m.output = study_out;
      write_output(bqr::run_manifest(m), m.output);
      return 0;
    }
    if (report->parsed()) return cmd_report(table_path, report_format, report_out);
  } catch (const bqr::ManifestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const bqr::ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const bqr::MissingColumnError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const bqr::DegenerateSampleError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const bqr::SingularDesignError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const bqr::SamplerDivergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const bqr::DegenerateVarianceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
