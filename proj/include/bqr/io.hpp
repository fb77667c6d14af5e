#pragma once

#include <string>
#include <vector>

#include "bqr/types.hpp"

namespace bqr {

struct ColumnSchema {
  std::string name;         // dataset column name
  std::string header;       // header in the source file
  bool log_transform = false;
  int fill_limit = 0;       // forward-fill limit in days, 0..5

  void validate() const {
    if (fill_limit < 0 || fill_limit > 5)
      throw std::invalid_argument("fill limit must lie in [0, 5]");
  }
};

// Loads and aligns one or more CSV sources on their date column. Market-
// closed gaps are forward-filled up to each column's fill limit; rows still
// missing a value afterwards are dropped. Headers not named by any schema
// are ignored.
Dataset load_csv(const std::vector<std::string>& paths, const std::vector<ColumnSchema>& schemas);

// Round-trippable dataset serialization: date column plus all data columns,
// 17 significant digits.
void save_dataset_csv(const Dataset& dataset, const std::string& path);

// One row per draw; header = coefficient names + sigma.
void save_chain_csv(const PosteriorChain& chain, const std::string& path);

}  // namespace bqr
