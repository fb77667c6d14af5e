#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bqr/io.hpp"

namespace bqr {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

bool valid_iso_date(const std::string& d) {
  if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
  return true;
}

// Days since epoch-ish count, good enough for gap arithmetic on valid dates.
long date_ordinal(const std::string& d) {
  int y = std::stoi(d.substr(0, 4)), m = std::stoi(d.substr(5, 2)), day = std::stoi(d.substr(8, 2));
  // Howard Hinnant's days-from-civil.
  y -= m <= 2;
  long era = (y >= 0 ? y : y - 399) / 400;
  unsigned yoe = static_cast<unsigned>(y - era * 400);
  unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + day - 1;
  unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

}  // namespace

Dataset load_csv(const std::vector<std::string>& paths,
                 const std::vector<ColumnSchema>& schemas) {
  for (const auto& s : schemas) s.validate();

  // date -> header -> value, merged across files.
  std::map<std::string, std::map<std::string, double>> by_date;
  std::set<std::string> seen_headers;

  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "' is empty");
    auto headers = split_csv_line(line);
    for (auto& h : headers) h = trim(h);
    if (headers.empty() || headers[0] != "date")
      throw ParseError("'" + path + "': first column must be 'date'");
    for (std::size_t j = 1; j < headers.size(); ++j) seen_headers.insert(headers[j]);

    int row = 1;
    while (std::getline(in, line)) {
      ++row;
      if (trim(line).empty()) continue;
      auto cells = split_csv_line(line);
      if (cells.size() != headers.size())
        throw ParseError(path + ":" + std::to_string(row) + ": expected " +
                         std::to_string(headers.size()) + " cells, got " +
                         std::to_string(cells.size()));
      std::string date = trim(cells[0]);
      if (!valid_iso_date(date))
        throw ParseError(path + ":" + std::to_string(row) + ": column 'date': bad date '" +
                         date + "'");
      auto& dest = by_date[date];
      for (std::size_t j = 1; j < headers.size(); ++j) {
        std::string cell = trim(cells[j]);
        if (cell.empty()) continue;  // missing value
        double v;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
          throw ParseError(path + ":" + std::to_string(row) + ": column '" + headers[j] +
                           "': cannot parse '" + cell + "'");
        dest[headers[j]] = v;
      }
    }
  }

  for (const auto& s : schemas) {
    if (!seen_headers.count(s.header))
      throw MissingColumnError("no source file provides header '" + s.header + "'");
  }

  std::vector<std::string> calendar;
  calendar.reserve(by_date.size());
  for (const auto& [d, _] : by_date) calendar.push_back(d);  // map is sorted

  // Forward fill per schema column, bounded by its fill limit in days.
  const std::size_t n_all = calendar.size();
  const double nan = std::nan("");
  std::vector<std::vector<double>> series(schemas.size(), std::vector<double>(n_all, nan));
  for (std::size_t c = 0; c < schemas.size(); ++c) {
    const auto& sch = schemas[c];
    double last = nan;
    long last_ord = 0;
    for (std::size_t i = 0; i < n_all; ++i) {
      auto& row = by_date[calendar[i]];
      auto it = row.find(sch.header);
      long ord = date_ordinal(calendar[i]);
      if (it != row.end()) {
        last = it->second;
        last_ord = ord;
        series[c][i] = last;
      } else if (!std::isnan(last) && ord - last_ord <= sch.fill_limit) {
        series[c][i] = last;
      }
    }
  }

  // Keep only rows where every column is present.
  std::vector<std::string> dates;
  std::vector<std::vector<double>> kept(schemas.size());
  for (std::size_t i = 0; i < n_all; ++i) {
    bool full = true;
    for (std::size_t c = 0; c < schemas.size(); ++c)
      if (std::isnan(series[c][i])) {
        full = false;
        break;
      }
    if (!full) continue;
    dates.push_back(calendar[i]);
    for (std::size_t c = 0; c < schemas.size(); ++c) kept[c].push_back(series[c][i]);
  }
  if (dates.empty()) throw DegenerateSampleError("no complete rows after joining sources");

  std::vector<std::pair<std::string, std::vector<double>>> cols;
  for (std::size_t c = 0; c < schemas.size(); ++c) {
    if (schemas[c].log_transform) {
      for (std::size_t i = 0; i < kept[c].size(); ++i) {
        if (!(kept[c][i] > 0.0))
          throw std::domain_error("log transform on column '" + schemas[c].name +
                                  "': non-positive value at " + dates[i]);
        kept[c][i] = std::log(kept[c][i]);
      }
    }
    cols.emplace_back(schemas[c].name, std::move(kept[c]));
  }
  return Dataset(std::move(dates), std::move(cols));
}

void save_dataset_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << "date";
  for (const auto& name : dataset.column_names()) out << "," << name;
  out << "\n";
  char buf[32];
  for (std::size_t i = 0; i < dataset.n(); ++i) {
    out << dataset.dates()[i];
    for (const auto& name : dataset.column_names()) {
      std::snprintf(buf, sizeof(buf), "%.17g", dataset.column(name)[i]);
      out << "," << buf;
    }
    out << "\n";
  }
}

void save_chain_csv(const PosteriorChain& chain, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  const Eigen::Index p = chain.beta_draws.cols();
  for (Eigen::Index j = 0; j < p; ++j) {
    out << (j < static_cast<Eigen::Index>(chain.regressor_names.size())
                ? chain.regressor_names[j]
                : "b" + std::to_string(j))
        << ",";
  }
  out << "sigma\n";
  char buf[32];
  for (Eigen::Index s = 0; s < chain.beta_draws.rows(); ++s) {
    for (Eigen::Index j = 0; j < p; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", chain.beta_draws(s, j));
      out << buf << ",";
    }
    std::snprintf(buf, sizeof(buf), "%.17g", chain.sigma_draws(s));
    out << buf << "\n";
  }
}

}  // namespace bqr
