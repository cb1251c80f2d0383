#pragma once

#include "clate/kernels.hpp"
#include "clate/model.hpp"
#include "clate/observable.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace clate {

/// Observed rows (x, z, d, y) with supports inferred in order of first
/// appearance. Treatment levels are {0,1} (binary) or {1..K} (ordered).
struct Dataset {
  Support x_support;
  Support z_support;
  Support y_support;
  TreatmentScale scale;
  std::vector<kernels::Row> rows;
  /// Ingestion notes (level relabeling, binning) carried into reports.
  std::vector<std::string> notes;

  std::size_t size() const { return rows.size(); }
};

struct CsvOptions {
  std::string x_column = "x";
  std::string z_column = "z";
  std::string d_column = "d";
  std::string y_column = "y";
  /// Bin edges for numeric outcomes: bin i is [edges[i], edges[i+1]).
  std::vector<double> y_bin_edges;
};

/// Throws ParseError (with line number), SchemaError for missing columns or
/// non-contiguous treatment levels, and ContinuousOutcomeError for
/// non-integer numeric outcomes without bin edges.
Dataset ingest_csv(std::istream& in, const CsvOptions& options = {});
Dataset ingest_csv_file(const std::string& path, const CsvOptions& options = {});

/// Writes the header "x,z,d,y" followed by one line per row.
void write_csv(std::ostream& out, const Dataset& data);

/// Exact cell frequencies count / n of the observables.
ObservableJoint empirical_model(const Dataset& data);

}  // namespace clate
