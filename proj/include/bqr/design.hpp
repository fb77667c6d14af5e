#pragma once

#include "bqr/types.hpp"

namespace bqr {

struct Design {
  Matrix X;
  Vector y;
  std::vector<std::string> names;  // column names of X
};

// Materializes the regression design from a dataset. Column order is
// [intercept] + spec.regressors. Lag/diff transforms listed in the spec are
// applied here; rows made undefined by lagging are trimmed from the head of
// both X and y. Log transforms must already be applied to the dataset.
Design build_design(const Dataset& dataset, const ModelSpec& spec);

// Applies spec.transforms to the dataset, renaming transformed columns with
// a suffix (_log, _lagK, _diff) and trimming the head rows lost to lags or
// differencing. Returns the transformed dataset together with a rewritten
// spec whose transform list is empty and whose column names point at the
// transformed columns.
std::pair<Dataset, ModelSpec> apply_transforms(const Dataset& dataset, const ModelSpec& spec);

}  // namespace bqr
