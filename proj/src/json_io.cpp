#include "clate/json_io.hpp"

#include "clate/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

namespace clate {

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

namespace {

std::string rational_text(const Rational& r) { return to_string(r); }

Rational rational_field(const Json& j, std::string_view what) {
  if (!j.is_string()) throw ModelError(std::string(what) + " must be a \"num/den\" string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ModelError(std::string(what) + ": " + e.what());
  }
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ModelError(std::string("missing field '") + key + "'");
  return j.at(key);
}

Support support_field(const Json& j, const char* key) {
  const auto& list = member(j, key);
  if (!list.is_array()) throw ModelError(std::string(key) + " must be a list");
  std::vector<std::string> labels;
  for (const auto& v : list) {
    if (!v.is_string()) throw ModelError(std::string(key) + " labels must be strings");
    labels.push_back(v.get<std::string>());
  }
  return Support(std::move(labels));
}

TreatmentScale scale_field(const Json& j) {
  if (!j.contains("K")) return TreatmentScale::binary();
  const auto& k = j.at("K");
  if (!k.is_number_integer() || k.get<int>() < 2) throw ModelError("K must be an integer >= 2");
  return TreatmentScale::ordered(k.get<int>());
}

ResponseType type_field(const Json& map, const Support& z) {
  if (!map.is_object() || map.size() != z.size()) {
    throw ModelError("treatment_map must assign a level to every instrument value");
  }
  ResponseType t;
  t.levels.assign(z.size(), 0);
  for (const auto& [label, level] : map.items()) {
    if (!level.is_number_integer()) throw ModelError("treatment levels must be integers");
    t.levels[z.index_of(label, "instrument")] = level.get<int>();
  }
  return t;
}

Json type_json(const ResponseType& t, const Support& z) {
  Json map = Json::object();
  for (std::size_t i = 0; i < z.size(); ++i) map[z[i]] = t(i);
  return map;
}

std::vector<std::size_t> outcomes_field(const Json& list, const Support& y) {
  if (!list.is_array()) throw ModelError("outcomes must be a list of outcome labels");
  std::vector<std::size_t> out;
  for (const auto& v : list) {
    if (!v.is_string()) throw ModelError("outcome labels must be strings");
    out.push_back(y.index_of(v.get<std::string>(), "outcome"));
  }
  return out;
}

Json outcomes_json(const std::vector<std::size_t>& outcomes, const Support& y) {
  Json list = Json::array();
  for (auto o : outcomes) list.push_back(y[o]);
  return list;
}

Json index_json(const IndexFunction& m, const Support& z) {
  Json out = Json::object();
  for (std::size_t i = 0; i < z.size(); ++i) out[z[i]] = rational_text(m(i));
  return out;
}

IndexFunction index_field(const Json& j, const Support& z) {
  if (!j.is_object() || j.size() != z.size()) throw ModelError("m must give a level for every instrument value");
  IndexFunction m{std::vector<Rational>(z.size())};
  for (const auto& [label, v] : j.items()) m.values[z.index_of(label, "instrument")] = rational_field(v, "m");
  return m;
}

const Json& cell_field(const Json& j, const char* key, const std::string& x) {
  const auto& cells = member(j, key);
  if (!cells.is_object() || !cells.contains(x)) {
    throw ModelError(std::string(key) + " has no entry for covariate cell '" + x + "'");
  }
  return cells.at(x);
}

}  // namespace

bool is_ordered_document(const Json& j) { return j.is_object() && j.contains("K"); }

Json model_to_json(const FiniteModel& model) {
  const auto& z = model.z_support();
  const auto& x = model.x_support();
  const auto& y = model.y_support();
  Json j;
  j["z_support"] = z.labels();
  j["x_support"] = x.labels();
  j["y_support"] = y.labels();
  if (!model.is_binary()) j["K"] = model.scale().levels;
  Json pzx = Json::object();
  Json types = Json::object();
  for (std::size_t xi = 0; xi < model.nx(); ++xi) {
    Json row = Json::object();
    for (std::size_t zi = 0; zi < model.nz(); ++zi) row[z[zi]] = rational_text(model.pzx(xi, zi));
    pzx[x[xi]] = std::move(row);
    Json entries = Json::array();
    for (const auto& entry : model.types(xi)) {
      Json law = Json::array();
      for (const auto& atom : entry.outcome_law) {
        law.push_back({{"outcomes", outcomes_json(atom.outcomes, y)}, {"prob", rational_text(atom.prob)}});
      }
      entries.push_back({{"treatment_map", type_json(entry.type, z)},
                         {"outcome_law", std::move(law)},
                         {"prob", rational_text(entry.prob)}});
    }
    types[x[xi]] = std::move(entries);
  }
  j["pzx"] = std::move(pzx);
  j["types_given_x"] = std::move(types);
  return j;
}

namespace {

FiniteModel factored_from_json(const Json& j) {
  Support z = support_field(j, "z_support");
  Support x = support_field(j, "x_support");
  Support y = support_field(j, "y_support");
  const auto scale = scale_field(j);
  std::vector<std::vector<Rational>> pzx(x.size(), std::vector<Rational>(z.size(), Rational(0)));
  std::vector<std::vector<TypeEntry>> types(x.size());
  for (std::size_t xi = 0; xi < x.size(); ++xi) {
    const auto& row = cell_field(j, "pzx", x[xi]);
    if (!row.is_object() || row.size() != z.size()) throw ModelError("pzx row must cover every instrument value");
    for (const auto& [label, p] : row.items()) pzx[xi][z.index_of(label, "instrument")] = rational_field(p, "pzx");
    const auto& entries = cell_field(j, "types_given_x", x[xi]);
    if (!entries.is_array()) throw ModelError("types_given_x entries must be lists");
    for (const auto& e : entries) {
      TypeEntry entry{type_field(member(e, "treatment_map"), z), {}, rational_field(member(e, "prob"), "prob")};
      const auto& law = member(e, "outcome_law");
      if (!law.is_array()) throw ModelError("outcome_law must be a list");
      for (const auto& atom : law) {
        entry.outcome_law.push_back(
            {outcomes_field(member(atom, "outcomes"), y), rational_field(member(atom, "prob"), "prob")});
      }
      types[xi].push_back(std::move(entry));
    }
  }
  return FiniteModel(std::move(z), std::move(x), std::move(y), scale, std::move(pzx), std::move(types));
}

JointLaw raw_joint_from_json(const Json& j) {
  Support z = support_field(j, "z_support");
  Support x = support_field(j, "x_support");
  Support y = support_field(j, "y_support");
  const auto scale = scale_field(j);
  const auto& list = member(j, "joint");
  if (!list.is_array()) throw ModelError("joint must be a list");
  std::vector<JointAtom> atoms;
  for (const auto& a : list) {
    if (!member(a, "x").is_string() || !member(a, "z").is_string()) throw ModelError("joint x/z must be labels");
    atoms.push_back({x.index_of(a.at("x").get<std::string>(), "covariate"),
                     z.index_of(a.at("z").get<std::string>(), "instrument"), type_field(member(a, "treatment_map"), z),
                     outcomes_field(member(a, "outcomes"), y), rational_field(member(a, "prob"), "prob")});
  }
  return JointLaw(std::move(z), std::move(x), std::move(y), scale, std::move(atoms));
}

}  // namespace

FiniteModel model_from_json(const Json& j) {
  if (j.is_object() && j.contains("joint")) return FiniteModel::from_joint(raw_joint_from_json(j));
  return factored_from_json(j);
}

JointLaw joint_from_json(const Json& j) {
  if (j.is_object() && j.contains("joint")) return raw_joint_from_json(j);
  return factored_from_json(j).to_joint();
}

Json joint_to_json(const JointLaw& joint) {
  Json j;
  j["z_support"] = joint.z_support().labels();
  j["x_support"] = joint.x_support().labels();
  j["y_support"] = joint.y_support().labels();
  if (!joint.scale().is_binary()) j["K"] = joint.scale().levels;
  Json list = Json::array();
  for (const auto& atom : joint.atoms()) {
    list.push_back({{"x", joint.x_support()[atom.x]},
                    {"z", joint.z_support()[atom.z]},
                    {"treatment_map", type_json(atom.type, joint.z_support())},
                    {"outcomes", outcomes_json(atom.outcomes, joint.y_support())},
                    {"prob", rational_text(atom.prob)}});
  }
  j["joint"] = std::move(list);
  return j;
}

Json representation_to_json(const IndexRepresentation& rep, const FiniteModel& model) {
  const auto& x = model.x_support();
  Json j;
  j["m"] = index_json(rep.m, model.z_support());
  j["sentinels"] = {{"lower", rational_text(rep.lower_sentinel)}, {"upper", rational_text(rep.upper_sentinel)}};
  Json u_law = Json::object();
  Json coupling = Json::object();
  for (std::size_t xi = 0; xi < rep.u_law.size(); ++xi) {
    Json levels = Json::array();
    for (const auto& level : rep.u_law[xi].levels) {
      levels.push_back({{"level", rational_text(level.u)},
                        {"threshold", rational_text(level.threshold)},
                        {"prob", rational_text(level.prob)}});
    }
    u_law[x[xi]] = std::move(levels);
    Json types = Json::array();
    for (auto level : rep.u_law[xi].type_level) {
      if (level == kNoLevel) {
        types.push_back(nullptr);
      } else {
        types.push_back(level);
      }
    }
    coupling[x[xi]] = std::move(types);
  }
  j["u_law"] = std::move(u_law);
  j["coupling"] = std::move(coupling);
  if (rep.normalized) {
    Json q_star = Json::object();
    for (std::size_t xi = 0; xi < rep.normalized->q_star.size(); ++xi) {
      Json pieces = Json::array();
      for (const auto& piece : rep.normalized->q_star[xi]) {
        pieces.push_back({{"u_star_interval", {rational_text(piece.lo), rational_text(piece.hi)}},
                          {"threshold", rational_text(piece.threshold)},
                          {"level", piece.level}});
      }
      q_star[x[xi]] = std::move(pieces);
    }
    j["q_star"] = std::move(q_star);
  }
  return j;
}

IndexRepresentation representation_from_json(const Json& j, const FiniteModel& model) {
  IndexRepresentation rep;
  rep.m = index_field(member(j, "m"), model.z_support());
  const auto& sentinels = member(j, "sentinels");
  rep.lower_sentinel = rational_field(member(sentinels, "lower"), "lower sentinel");
  rep.upper_sentinel = rational_field(member(sentinels, "upper"), "upper sentinel");
  const auto& x = model.x_support();
  for (std::size_t xi = 0; xi < x.size(); ++xi) {
    CellLatentLaw cell;
    for (const auto& level : cell_field(j, "u_law", x[xi])) {
      cell.levels.push_back({rational_field(member(level, "level"), "level"),
                             rational_field(member(level, "threshold"), "threshold"),
                             rational_field(member(level, "prob"), "prob")});
    }
    for (const auto& t : cell_field(j, "coupling", x[xi])) {
      cell.type_level.push_back(t.is_null() ? kNoLevel : t.get<std::size_t>());
    }
    rep.u_law.push_back(std::move(cell));
  }
  if (j.contains("q_star")) {
    NormalizedForm form;
    for (std::size_t xi = 0; xi < x.size(); ++xi) {
      std::vector<QStarPiece> pieces;
      for (const auto& piece : cell_field(j, "q_star", x[xi])) {
        const auto& interval = member(piece, "u_star_interval");
        if (!interval.is_array() || interval.size() != 2) throw ModelError("u_star_interval must be [lo, hi)");
        pieces.push_back({rational_field(interval[0], "lo"), rational_field(interval[1], "hi"),
                          rational_field(member(piece, "threshold"), "threshold"),
                          member(piece, "level").get<std::size_t>()});
      }
      form.q_star.push_back(std::move(pieces));
    }
    rep.normalized = std::move(form);
  }
  return rep;
}

Json thresholds_to_json(const ThresholdRepresentation& rep, const FiniteModel& model) {
  Json j;
  j["K"] = rep.scale.levels;
  j["m"] = index_json(rep.m, model.z_support());
  j["sentinels"] = {{"lower", rational_text(rep.lower_sentinel)}, {"upper", rational_text(rep.upper_sentinel)}};
  Json cells = Json::object();
  for (std::size_t xi = 0; xi < rep.cells.size(); ++xi) {
    Json entries = Json::array();
    for (const auto& entry : rep.cells[xi]) {
      Json thresholds = Json::array();
      for (const auto& u : entry.thresholds) thresholds.push_back(rational_text(u));
      entries.push_back({{"type_id", entry.type}, {"thresholds", std::move(thresholds)}, {"prob", rational_text(entry.prob)}});
    }
    cells[model.x_support()[xi]] = std::move(entries);
  }
  j["thresholds"] = std::move(cells);
  return j;
}

ThresholdRepresentation thresholds_from_json(const Json& j, const FiniteModel& model) {
  ThresholdRepresentation rep;
  rep.scale = model.scale();
  if (member(j, "K").get<int>() != rep.scale.levels) throw ShapeError("K differs from the model");
  rep.m = index_field(member(j, "m"), model.z_support());
  const auto& sentinels = member(j, "sentinels");
  rep.lower_sentinel = rational_field(member(sentinels, "lower"), "lower sentinel");
  rep.upper_sentinel = rational_field(member(sentinels, "upper"), "upper sentinel");
  for (const auto& label : model.x_support().labels()) {
    std::vector<ThresholdEntry> entries;
    for (const auto& e : cell_field(j, "thresholds", label)) {
      ThresholdEntry entry{member(e, "type_id").get<std::size_t>(), {}, rational_field(member(e, "prob"), "prob")};
      for (const auto& u : member(e, "thresholds")) entry.thresholds.push_back(rational_field(u, "threshold"));
      entries.push_back(std::move(entry));
    }
    rep.cells.push_back(std::move(entries));
  }
  return rep;
}

Json dgp_spec_to_json(const DgpSpec& spec) {
  return {{"nz", spec.nz},
          {"nx", spec.nx},
          {"ny", spec.ny},
          {"K", spec.levels},
          {"ordered", spec.ordered},
          {"class", std::string(to_string(spec.cls))},
          {"seed", spec.seed},
          {"granularity", spec.granularity},
          {"max_types", spec.max_types},
          {"max_attempts", spec.max_attempts}};
}

DgpSpec dgp_spec_from_json(const Json& j) {
  if (!j.is_object()) throw ModelError("model spec must be an object");
  DgpSpec spec;
  spec.nz = j.value("nz", spec.nz);
  spec.nx = j.value("nx", spec.nx);
  spec.ny = j.value("ny", spec.ny);
  spec.levels = j.value("K", spec.levels);
  spec.ordered = j.value("ordered", spec.levels > 2);
  spec.cls = parse_dgp_class(j.value("class", std::string(to_string(spec.cls))));
  spec.seed = j.value("seed", spec.seed);
  spec.granularity = j.value("granularity", spec.granularity);
  spec.max_types = j.value("max_types", spec.max_types);
  spec.max_attempts = j.value("max_attempts", spec.max_attempts);
  return spec;
}

}  // namespace clate
