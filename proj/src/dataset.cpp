#include "clate/dataset.hpp"

#include "clate/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <optional>

namespace clate {

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (!field.empty()) throw ParseError("quote inside an unquoted field", line_no);
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_no);
  fields.push_back(std::move(field));
  return fields;
}

std::optional<long long> parse_int(const std::string& s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string bin_label(double lo, double hi) {
  std::ostringstream out;
  out << '[' << lo << ',' << hi << ')';
  return out.str();
}

class LabelIndex {
 public:
  std::uint32_t intern(const std::string& label) {
    auto [it, fresh] = index_.emplace(label, static_cast<std::uint32_t>(labels_.size()));
    if (fresh) labels_.push_back(label);
    return it->second;
  }
  std::vector<std::string> labels() const { return labels_; }
  bool empty() const { return labels_.empty(); }

 private:
  std::map<std::string, std::uint32_t> index_;
  std::vector<std::string> labels_;
};

}  // namespace

Dataset ingest_csv(std::istream& in, const CsvOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw SchemaError("empty input: missing header row");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line, line_no);
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw SchemaError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cx = column(options.x_column);
  const std::size_t cz = column(options.z_column);
  const std::size_t cd = column(options.d_column);
  const std::size_t cy = column(options.y_column);
  const bool binned = !options.y_bin_edges.empty();
  if (binned) {
    if (options.y_bin_edges.size() < 2 || !std::is_sorted(options.y_bin_edges.begin(), options.y_bin_edges.end())) {
      throw SchemaError("outcome bin edges must be at least two increasing values");
    }
  }

  LabelIndex xs, zs, ys;
  std::vector<kernels::Row> rows;
  std::vector<long long> levels;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line, line_no);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()),
                       line_no);
    }
    for (auto c : {cx, cz, cd, cy}) {
      if (fields[c].empty()) throw ParseError("missing value in column '" + header[c] + "'", line_no);
    }
    const auto d = parse_int(fields[cd]);
    if (!d) throw ParseError("treatment '" + fields[cd] + "' is not an integer level", line_no);

    std::string y_label = fields[cy];
    if (binned) {
      const auto v = parse_number(fields[cy]);
      if (!v) throw ParseError("outcome '" + fields[cy] + "' is not numeric", line_no);
      const auto& edges = options.y_bin_edges;
      if (*v < edges.front() || *v >= edges.back()) {
        throw ParseError("outcome " + fields[cy] + " outside the bin edges", line_no);
      }
      const auto bin = static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), *v) - edges.begin()) - 1;
      y_label = bin_label(edges[bin], edges[bin + 1]);
    } else if (!parse_int(fields[cy]) && parse_number(fields[cy])) {
      throw ContinuousOutcomeError("line " + std::to_string(line_no) + ": outcome '" + fields[cy] +
                                   "' looks continuous; supply bin edges");
    }
    rows.push_back({xs.intern(fields[cx]), zs.intern(fields[cz]), static_cast<std::int32_t>(*d), ys.intern(y_label)});
    levels.push_back(*d);
  }
  if (rows.empty()) throw SchemaError("no data rows");

  Dataset data;
  data.x_support = Support(xs.labels());
  data.z_support = Support(zs.labels());
  data.y_support = Support(ys.labels());
  std::set<long long> distinct(levels.begin(), levels.end());
  const long long lo = *distinct.begin();
  const long long hi = *distinct.rbegin();
  if (static_cast<long long>(distinct.size()) != hi - lo + 1) {
    throw SchemaError("treatment levels are not contiguous");
  }
  if (lo >= 0 && hi <= 1) {
    data.scale = TreatmentScale::binary();
  } else {
    const long long k = hi - lo + 1;
    data.scale = TreatmentScale::ordered(static_cast<int>(k));
    if (lo != 1) {
      const long long shift = 1 - lo;
      for (auto& row : rows) row.d = static_cast<std::int32_t>(row.d + shift);
      data.notes.push_back("treatment levels " + std::to_string(lo) + ".." + std::to_string(hi) +
                           " relabeled to 1.." + std::to_string(k));
    }
  }
  if (binned) data.notes.push_back("outcomes binned into " + std::to_string(options.y_bin_edges.size() - 1) + " bins");
  data.rows = std::move(rows);
  return data;
}

Dataset ingest_csv_file(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open '" + path + "'");
  return ingest_csv(in, options);
}

void write_csv(std::ostream& out, const Dataset& data) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  };
  out << "x,z,d,y\n";
  for (const auto& row : data.rows) {
    out << field(data.x_support[row.x]) << ',' << field(data.z_support[row.z]) << ',' << row.d << ','
        << field(data.y_support[row.y]) << '\n';
  }
}

ObservableJoint empirical_model(const Dataset& data) {
  if (data.rows.empty()) throw ShapeError("empty dataset");
  const kernels::CountShape shape{data.x_support.size(), data.z_support.size(),
                                  static_cast<std::size_t>(data.scale.levels), data.y_support.size(),
                                  data.scale.lowest};
  return ObservableJoint::from_counts(data.z_support, data.x_support, data.y_support, data.scale,
                                      kernels::tabulate_parallel(data.rows, shape));
}

}  // namespace clate
