#pragma once

#include <string>

#include "bqr/io.hpp"
#include "bqr/study.hpp"

namespace bqr {

// A parsed run manifest: plain-text key = value lines, '#' comments.
// Unknown keys are errors. See tools/qreg --help for the key list.
struct RunManifest {
  std::vector<std::string> data_paths;
  std::vector<ColumnSchema> schemas;
  ModelSpec spec;
  StudyConfig study;
  ReportFormat format = ReportFormat::Text;
  std::string output;  // empty = stdout
};

RunManifest parse_manifest(const std::string& path);

// Executes the manifest end to end and returns the rendered report.
std::string run_manifest(const RunManifest& manifest);

}  // namespace bqr
