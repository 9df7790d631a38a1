#pragma once

#include <string>
#include <vector>

#include "hdperm/dataset.hpp"

namespace hdperm {

/// Column roles for CSV ingestion: one outcome column, one or more interest
/// columns, every remaining column is nuisance.
struct ColumnRoles {
  std::string outcome;
  std::vector<std::string> interest;
};

struct IngestResult {
  Dataset data;
  std::vector<std::string> interest_names;
  std::vector<std::string> nuisance_names;
};

/// Parses a UTF-8 CSV with a header row into a centered Dataset.
/// Throws ParseError (with row/column location), MissingColumn, NonFinite.
IngestResult ingest_csv(const std::string& path, const ColumnRoles& roles,
                        bool standardize = false);

/// Writes a dataset back to CSV (17 significant digits) with the given
/// column names; used for round-trip checks.
void write_csv(const std::string& path, const Dataset& data, const std::string& outcome_name,
               const std::vector<std::string>& interest_names,
               const std::vector<std::string>& nuisance_names);

/// Formats a double with 17 significant digits.
std::string format_g17(double v);

} // namespace hdperm
