// clate: command-line front end for model audits, representations and simulation.

#include "clate/audit.hpp"
#include "clate/errors.hpp"
#include "clate/json_io.hpp"
#include "clate/monotonicity.hpp"
#include "clate/ordered.hpp"
#include "clate/representation.hpp"
#include "clate/simulate.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

clate::Json parse_json(const std::string& text, const std::string& path) {
  try {
    return clate::Json::parse(text);
  } catch (const clate::Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

bool looks_like_json(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && (text[pos] == '{' || text[pos] == '[');
}

std::vector<double> parse_edges(const std::string& text) {
  std::vector<double> edges;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      edges.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InputError("bad bin edge '" + item + "'");
    }
  }
  return edges;
}

struct Globals {
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tol = clate::SampleTolerance{}.floor;
  std::string out;
  std::string format = "json";
};

struct AuditArgs {
  std::string input;
  std::string anchor;
  std::string y_bins;
  clate::CsvOptions csv;
};

int run_audit(const Globals& g, const AuditArgs& a) {
  const std::string bytes = read_file(a.input);
  clate::AuditOptions options;
  options.tolerance.floor = g.tol;
  if (!a.anchor.empty()) options.anchor = a.anchor;
  const std::string digest = clate::sha256_hex(bytes);

  clate::AuditReport report;
  if (looks_like_json(bytes)) {
    const auto doc = parse_json(bytes, a.input);
    report = clate::audit(clate::joint_from_json(doc), options, digest);
  } else {
    auto csv = a.csv;
    if (!a.y_bins.empty()) csv.y_bin_edges = parse_edges(a.y_bins);
    std::istringstream in(bytes);
    report = clate::audit(clate::ingest_csv(in, csv), options, digest);
  }
  emit(clate::dump_canonical(clate::report_to_json(report)), g.out);
  return report.passed() ? kPass : kCheckFailed;
}

clate::Json monotonicity_failure(const clate::MonotonicityError& e, const clate::FiniteModel& model) {
  const auto& z = model.z_support();
  const auto& x = model.x_support();
  clate::Json witnesses = clate::Json::array();
  for (const auto& w : e.verdict().coexisting) {
    witnesses.push_back({{"kind", "coexistence"}, {"z", z[w.z]}, {"z_prime", z[w.z_prime]}, {"x", x[w.x]}});
  }
  for (const auto& w : e.verdict().flips) {
    witnesses.push_back({{"kind", "direction_flip"},
                         {"z", z[w.z]},
                         {"z_prime", z[w.z_prime]},
                         {"x", x[w.x]},
                         {"x_prime", x[w.x_prime]}});
  }
  clate::Json j = {{"error", e.what()},
                   {"verdict", std::string(clate::to_string(e.verdict().verdict))},
                   {"witnesses", std::move(witnesses)}};
  if (e.level()) j["cut"] = *e.level();
  return j;
}

int run_represent(const Globals& g, const std::string& model_path, const std::string& anchor) {
  const auto model = clate::model_from_json(parse_json(read_file(model_path), model_path));
  if (!model.is_binary()) throw InputError("ordered treatment: use the 'ordered' subcommand");
  std::optional<std::size_t> anchor_index;
  if (!anchor.empty()) anchor_index = model.x_support().index_of(anchor, "anchor covariate");
  try {
    const auto rep = clate::normalize_uniform(clate::construct_representation(model, anchor_index), model);
    const auto verified = clate::verify_representation(model, rep);
    emit(clate::dump_canonical(clate::representation_to_json(rep, model)), g.out);
    return verified.ok ? kPass : kCheckFailed;
  } catch (const clate::MonotonicityError& e) {
    emit(clate::dump_canonical(monotonicity_failure(e, model)), g.out);
    return kCheckFailed;
  }
}

int run_ordered(const Globals& g, const std::string& model_path) {
  const auto model = clate::model_from_json(parse_json(read_file(model_path), model_path));
  try {
    clate::ordered_index(model);
    const auto rep = clate::construct_ordered_representation(model);
    const auto verified = clate::verify_ordered(model, rep);
    emit(clate::dump_canonical(clate::thresholds_to_json(rep, model)), g.out);
    return verified.ok ? kPass : kCheckFailed;
  } catch (const clate::MonotonicityError& e) {
    emit(clate::dump_canonical(monotonicity_failure(e, model)), g.out);
    return kCheckFailed;
  } catch (const clate::AmbiguousIndexError& e) {
    emit(clate::dump_canonical(clate::Json{{"error", e.what()}}), g.out);
    return kCheckFailed;
  }
}

struct SimulateArgs {
  std::string spec;
  std::size_t n = 0;
  std::string model_out;
};

int run_simulate(const Globals& g, const SimulateArgs& a) {
  const auto doc = parse_json(read_file(a.spec), a.spec);
  std::optional<clate::FiniteModel> model;
  if (doc.contains("z_support")) {
    model = clate::model_from_json(doc);
  } else {
    auto spec = clate::dgp_spec_from_json(doc);
    if (!doc.contains("seed")) spec.seed = g.seed;
    model = clate::generate_model(spec).model;
  }
  if (!a.model_out.empty()) emit(clate::dump_canonical(clate::model_to_json(*model)), a.model_out);
  if (a.n == 0) {
    if (a.model_out.empty()) emit(clate::dump_canonical(clate::model_to_json(*model)), g.out);
    return kPass;
  }
  const auto data = clate::sample(*model, a.n, g.seed);
  std::ostringstream csv;
  clate::write_csv(csv, data);
  emit(csv.str(), g.out);
  return kPass;
}

int run_check_model(const Globals& g, const std::string& model_path, const std::string& rep_path) {
  const auto model = clate::model_from_json(parse_json(read_file(model_path), model_path));
  const auto verdict = clate::classify_monotonicity(model);
  const auto regularity = clate::check_regularity(model);
  clate::Json out = {{"valid", true},
                     {"K", model.scale().levels},
                     {"monotonicity", std::string(clate::to_string(verdict.verdict))},
                     {"overlap", regularity.overlap()},
                     {"relevance", regularity.relevance()}};
  int code = kPass;
  if (!rep_path.empty()) {
    const auto doc = parse_json(read_file(rep_path), rep_path);
    clate::VerificationResult result;
    if (doc.contains("thresholds")) {
      result = clate::verify_ordered(model, clate::thresholds_from_json(doc, model));
    } else {
      const auto rep = clate::representation_from_json(doc, model);
      result = clate::verify_representation(model, rep);
      if (result.ok && rep.normalized) result = clate::verify_normalized(model, rep);
    }
    clate::Json r = {{"ok", result.ok}};
    if (!result.ok) {
      r["failure"] = result.failure;
      if (result.witness) {
        r["witness"] = {{"x", model.x_support()[result.witness->x]},
                        {"type", result.witness->type},
                        {"z", model.z_support()[result.witness->z]},
                        {"expected", result.witness->expected},
                        {"reproduced", result.witness->reproduced}};
      }
      if (result.ordering) {
        r["witness"] = {{"x", model.x_support()[result.ordering->x]},
                        {"type", result.ordering->type},
                        {"k", result.ordering->k}};
      }
      if (result.cell) r["cell"] = model.x_support()[*result.cell];
      code = kCheckFailed;
    }
    out["representation"] = std::move(r);
  }
  emit(clate::dump_canonical(out), g.out);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent-index representation toolkit for conditional LATE models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(clate::kToolkitVersion));
  app.option_defaults()->always_capture_default();

  Globals g;
  app.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) {
    g.seed = s;
    g.seed_set = true;
  }, "RNG seed");
  app.add_option("--tol", g.tol, "Sample tolerance floor")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json"}));

  AuditArgs audit_args;
  auto* audit = app.add_subcommand("audit", "Audit a model JSON or a CSV sample");
  audit->fallthrough();
  audit->add_option("--input", audit_args.input, "model.json or data.csv")->required();
  audit->add_option("--anchor", audit_args.anchor, "Covariate cell anchoring the index");
  audit->add_option("--y-bins", audit_args.y_bins, "Comma-separated bin edges for numeric outcomes");
  audit->add_option("--x-column", audit_args.csv.x_column);
  audit->add_option("--z-column", audit_args.csv.z_column);
  audit->add_option("--d-column", audit_args.csv.d_column);
  audit->add_option("--y-column", audit_args.csv.y_column);

  std::string model_path;
  std::string anchor;
  auto* represent = app.add_subcommand("represent", "Construct the latent-index representation");
  represent->fallthrough();
  represent->add_option("--model", model_path)->required();
  represent->add_option("--anchor", anchor);

  auto* ordered = app.add_subcommand("ordered", "Construct the ordered threshold representation");
  ordered->fallthrough();
  ordered->add_option("--model", model_path)->required();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a model and draw a sample");
  simulate->fallthrough();
  simulate->add_option("--spec", sim.spec, "DGP spec JSON, or a model JSON to sample from")->required();
  simulate->add_option("--n", sim.n, "Rows to draw (0: model only)");
  simulate->add_option("--model-out", sim.model_out);

  std::string rep_path;
  auto* check = app.add_subcommand("check-model", "Validate a model and optionally verify a representation");
  check->fallthrough();
  check->add_option("--model", model_path)->required();
  check->add_option("--rep", rep_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*audit) return run_audit(g, audit_args);
    if (*represent) return run_represent(g, model_path, anchor);
    if (*ordered) return run_ordered(g, model_path);
    if (*simulate) return run_simulate(g, sim);
    if (*check) return run_check_model(g, model_path, rep_path);
  } catch (const clate::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const clate::Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kInputError;
}
