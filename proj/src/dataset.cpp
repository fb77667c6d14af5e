#include <algorithm>
#include <cmath>
#include <set>

#include "bqr/design.hpp"
#include "bqr/types.hpp"

namespace bqr {

Dataset::Dataset(std::vector<std::string> dates,
                 std::vector<std::pair<std::string, std::vector<double>>> columns)
    : dates_(std::move(dates)) {
  if (dates_.empty()) throw DegenerateSampleError("dataset must contain at least one row");
  for (std::size_t i = 1; i < dates_.size(); ++i) {
    if (!(dates_[i - 1] < dates_[i]))
      throw std::invalid_argument("dates must be strictly increasing; violation at '" +
                                  dates_[i] + "'");
  }
  for (auto& [name, series] : columns) {
    if (series.size() != dates_.size())
      throw std::invalid_argument("column '" + name + "' has " +
                                  std::to_string(series.size()) + " entries, expected " +
                                  std::to_string(dates_.size()));
    for (double v : series) {
      if (!std::isfinite(v))
        throw std::invalid_argument("column '" + name + "' contains a non-finite value");
    }
    if (!columns_.emplace(name, std::move(series)).second)
      throw std::invalid_argument("duplicate column name '" + name + "'");
    names_.push_back(name);
  }
}

bool Dataset::has_column(const std::string& name) const { return columns_.count(name) > 0; }

const std::vector<double>& Dataset::column(const std::string& name) const {
  auto it = columns_.find(name);
  if (it == columns_.end()) throw MissingColumnError("no column named '" + name + "'");
  return it->second;
}

void ModelSpec::validate() const {
  if (response.empty()) throw std::invalid_argument("model spec has no response");
  for (const auto& r : regressors)
    if (r == response)
      throw std::invalid_argument("response '" + response + "' also listed as a regressor");
  std::set<std::string> seen(regressors.begin(), regressors.end());
  if (seen.size() != regressors.size())
    throw std::invalid_argument("duplicate regressor in model spec");
  if (instrument_block) {
    if (std::find(regressors.begin(), regressors.end(), instrument_block->endogenous) ==
        regressors.end())
      throw std::invalid_argument("endogenous variable '" + instrument_block->endogenous +
                                  "' is not among the regressors");
  }
}

namespace {

// Shifts a series by the transform, marking undefined head entries via the
// returned head-loss count.
std::pair<std::vector<double>, int> shifted(const std::vector<double>& s, const Transform& t) {
  const std::size_t n = s.size();
  std::vector<double> out(n, 0.0);
  switch (t.kind) {
    case TransformKind::Log: {
      for (std::size_t i = 0; i < n; ++i) {
        if (!(s[i] > 0.0))
          throw std::domain_error("log transform on column '" + t.column +
                                  "': non-positive value at row " + std::to_string(i));
        out[i] = std::log(s[i]);
      }
      return {out, 0};
    }
    case TransformKind::Lag: {
      if (t.lag < 1) throw std::invalid_argument("lag order must be >= 1");
      int k = t.lag;
      // Head placeholders copy s[0]; they are trimmed by the caller and must
      // stay harmless for stacked transforms (e.g. a later log).
      for (std::size_t i = 0; i < std::min<std::size_t>(k, n); ++i) out[i] = s[0];
      for (std::size_t i = static_cast<std::size_t>(k); i < n; ++i) out[i] = s[i - k];
      return {out, k};
    }
    case TransformKind::Diff: {
      for (std::size_t i = 1; i < n; ++i) out[i] = s[i] - s[i - 1];
      return {out, 1};
    }
  }
  throw std::logic_error("unreachable transform kind");
}

const char* suffix_of(const Transform& t) {
  switch (t.kind) {
    case TransformKind::Log: return "_log";
    case TransformKind::Diff: return "_diff";
    case TransformKind::Lag: return "_lag";
  }
  return "";
}

}  // namespace

Design build_design(const Dataset& dataset, const ModelSpec& spec) {
  spec.validate();
  const std::size_t n = dataset.n();

  // Resolve each needed column, applying any lag/diff transforms from the
  // spec in declaration order. Log transforms are a precondition violation
  // here since the dataset is expected to hold them already.
  auto resolve = [&](const std::string& name) -> std::pair<std::vector<double>, int> {
    std::vector<double> s = dataset.column(name);
    int head = 0;
    for (const auto& t : spec.transforms) {
      if (t.column != name) continue;
      auto [shift, h] = shifted(s, t);
      s = std::move(shift);
      head += h;
    }
    return {std::move(s), head};
  };

  auto [y_full, y_head] = resolve(spec.response);
  std::vector<std::vector<double>> cols;
  int head = y_head;
  for (const auto& r : spec.regressors) {
    auto [s, h] = resolve(r);
    head = std::max(head, h);
    cols.push_back(std::move(s));
  }
  if (static_cast<std::size_t>(head) >= n)
    throw DegenerateSampleError("no rows remain after lag-induced trimming");
  const std::size_t rows = n - static_cast<std::size_t>(head);
  const std::size_t p = cols.size() + (spec.intercept ? 1 : 0);

  Design d;
  d.X.resize(rows, p);
  d.y.resize(rows);
  std::size_t col = 0;
  if (spec.intercept) {
    d.X.col(0).setOnes();
    d.names.push_back("const");
    col = 1;
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < rows; ++i) d.X(i, col + j) = cols[j][i + head];
    d.names.push_back(spec.regressors[j]);
  }
  for (std::size_t i = 0; i < rows; ++i) d.y(i) = y_full[i + head];
  return d;
}

std::pair<Dataset, ModelSpec> apply_transforms(const Dataset& dataset, const ModelSpec& spec) {
  spec.validate();
  const std::size_t n = dataset.n();

  // Apply transforms per column in declaration order. Stacked transforms on
  // one column accumulate head loss; across columns the maximum applies.
  struct Working {
    std::vector<double> series;
    std::string name;
    int head = 0;
  };
  std::map<std::string, Working> out;  // keyed by original name
  for (const auto& name : dataset.column_names())
    out.emplace(name, Working{dataset.column(name), name, 0});
  for (const auto& t : spec.transforms) {
    auto it = out.find(t.column);
    if (it == out.end())
      throw MissingColumnError("transform references unknown column '" + t.column + "'");
    auto [s, h] = shifted(it->second.series, t);
    it->second.series = std::move(s);
    it->second.name += suffix_of(t);
    if (t.kind == TransformKind::Lag && t.lag != 1) it->second.name += std::to_string(t.lag);
    it->second.head += h;
  }
  int head = 0;
  for (const auto& [k, w] : out) head = std::max(head, w.head);
  if (static_cast<std::size_t>(head) >= n)
    throw DegenerateSampleError("no rows remain after transform trimming");

  std::vector<std::string> dates(dataset.dates().begin() + head, dataset.dates().end());
  std::vector<std::pair<std::string, std::vector<double>>> cols;
  std::map<std::string, std::string> renamed;
  for (const auto& name : dataset.column_names()) {
    const auto& w = out.at(name);
    renamed[name] = w.name;
    cols.emplace_back(w.name, std::vector<double>(w.series.begin() + head, w.series.end()));
  }

  ModelSpec rewritten = spec;
  rewritten.transforms.clear();
  rewritten.response = renamed.at(spec.response);
  for (auto& r : rewritten.regressors) r = renamed.at(r);
  if (rewritten.instrument_block) {
    rewritten.instrument_block->endogenous = renamed.at(spec.instrument_block->endogenous);
    for (auto& z : rewritten.instrument_block->instruments) z = renamed.at(z);
  }
  return {Dataset(std::move(dates), std::move(cols)), rewritten};
}

}  // namespace bqr
