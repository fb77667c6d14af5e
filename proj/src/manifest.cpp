#include <fstream>
#include <sstream>

#include "bqr/design.hpp"
#include "bqr/manifest.hpp"

namespace bqr {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

ColumnSchema parse_column(const std::string& value, int line) {
  // NAME:HEADER[:log][:fillN]
  auto parts = split(value, ':');
  if (parts.size() < 2)
    throw ManifestError("manifest line " + std::to_string(line) +
                     ": column needs NAME:HEADER[:log][:fillN]");
  ColumnSchema s;
  s.name = parts[0];
  s.header = parts[1];
  for (std::size_t i = 2; i < parts.size(); ++i) {
    if (parts[i] == "log")
      s.log_transform = true;
    else if (parts[i].rfind("fill", 0) == 0)
      s.fill_limit = std::stoi(parts[i].substr(4));
    else
      throw ManifestError("manifest line " + std::to_string(line) + ": unknown column option '" +
                       parts[i] + "'");
  }
  s.validate();
  return s;
}

Estimator parse_estimator(const std::string& s, int line) {
  if (s == "ols") return Estimator::Ols;
  if (s == "qr") return Estimator::Qr;
  if (s == "bqr") return Estimator::Bqr;
  if (s == "tsls") return Estimator::Tsls;
  if (s == "bqr_2sls") return Estimator::Bqr2sls;
  throw ManifestError("manifest line " + std::to_string(line) + ": unknown estimator '" + s + "'");
}

bool parse_bool(const std::string& s, int line) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ManifestError("manifest line " + std::to_string(line) + ": expected a boolean, got '" + s +
                   "'");
}

}  // namespace

RunManifest parse_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest '" + path + "'");
  RunManifest m;
  m.study.estimators.clear();

  std::string line;
  int lineno = 0;
  std::vector<std::string> extra_instruments;
  std::string endogenous;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ManifestError("manifest line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));

    if (key == "data") {
      for (auto& p : split(value, ';')) m.data_paths.push_back(p);
    } else if (key == "column") {
      m.schemas.push_back(parse_column(value, lineno));
    } else if (key == "response") {
      m.spec.response = value;
    } else if (key == "regressors") {
      m.spec.regressors = split(value, ',');
    } else if (key == "intercept") {
      m.spec.intercept = parse_bool(value, lineno);
    } else if (key == "endogenous") {
      endogenous = value;
    } else if (key == "instruments") {
      extra_instruments = split(value, ',');
    } else if (key == "taus") {
      m.study.tau_grid.clear();
      for (auto& v : split(value, ',')) m.study.tau_grid.push_back(std::stod(v));
    } else if (key == "estimators") {
      for (auto& v : split(value, ',')) m.study.estimators.insert(parse_estimator(v, lineno));
    } else if (key == "draws") {
      m.study.mcmc.draws = std::stoi(value);
    } else if (key == "burn_in") {
      m.study.mcmc.burn_in = std::stoi(value);
    } else if (key == "thin") {
      m.study.mcmc.thin = std::stoi(value);
    } else if (key == "seed") {
      m.study.seed = std::stoull(value);
    } else if (key == "bootstrap_reps") {
      m.study.bootstrap.replications = std::stoi(value);
    } else if (key == "run_slope_tests") {
      m.study.run_slope_tests = parse_bool(value, lineno);
    } else if (key == "slope_pairs") {
      m.study.slope_pairs.clear();
      for (auto& pair : split(value, ',')) {
        auto lh = split(pair, ':');
        if (lh.size() != 2)
          throw ManifestError("manifest line " + std::to_string(lineno) +
                           ": slope pair needs LO:HI");
        m.study.slope_pairs.emplace_back(std::stod(lh[0]), std::stod(lh[1]));
      }
    } else if (key == "interval_mass") {
      m.study.interval_mass = std::stod(value);
    } else if (key == "format") {
      if (value == "text") m.format = ReportFormat::Text;
      else if (value == "csv") m.format = ReportFormat::Csv;
      else if (value == "markdown") m.format = ReportFormat::Markdown;
      else
        throw ManifestError("manifest line " + std::to_string(lineno) + ": unknown format '" +
                         value + "'");
    } else if (key == "output") {
      m.output = value;
    } else {
      throw ManifestError("manifest line " + std::to_string(lineno) + ": unknown key '" + key +
                       "'");
    }
  }
  if (!endogenous.empty())
    m.spec.instrument_block = InstrumentBlock{endogenous, extra_instruments};
  if (m.study.estimators.empty())
    m.study.estimators = {Estimator::Ols, Estimator::Bqr};
  if (m.data_paths.empty()) throw ManifestError("manifest: no data files given");
  if (m.schemas.empty()) throw ManifestError("manifest: no columns given");
  m.spec.validate();
  return m;
}

std::string run_manifest(const RunManifest& manifest) {
  Dataset dataset = load_csv(manifest.data_paths, manifest.schemas);
  StudyResult result = run_study(dataset, manifest.spec, manifest.study);
  return render_report(result.table, result.tests, manifest.format);
}

}  // namespace bqr
