#include "qsmin/params_io.hpp"

#include "qsmin/errors.hpp"

namespace qsmin {

namespace {

using nlohmann::json;

Rational rational_field(const json& value, const char* where) {
  if (!value.is_string()) {
    throw ConfigError(std::string(where) + ": rationals must be strings \"p/q\", got " + value.dump());
  }
  return parse_rational(value.get<std::string>());
}

int integer_field(const json& value, const char* where) {
  if (!value.is_number_integer()) throw ConfigError(std::string(where) + ": expected an integer, got " + value.dump());
  return value.get<int>();
}

std::vector<Rational> rational_list(const json& value, const char* where) {
  if (!value.is_array()) throw ConfigError(std::string(where) + ": expected an array");
  std::vector<Rational> out;
  out.reserve(value.size());
  for (const auto& v : value) out.push_back(rational_field(v, where));
  return out;
}

const json& rule_params(const json& node) {
  static const json empty = json::object();
  auto it = node.find("params");
  return it == node.end() ? empty : *it;
}

std::string rule_name(const json& node, const char* where) {
  auto it = node.find("rule");
  if (it == node.end() || !it->is_string()) throw ConfigError(std::string(where) + ": rule object needs a \"rule\" name");
  return it->get<std::string>();
}

BranchingSource parse_branching(const json& node, SequenceMode array_mode) {
  BranchingSource src;
  if (node.is_array()) {
    for (const auto& v : node) src.values.push_back(integer_field(v, "branching"));
    src.mode = array_mode;
    return src;
  }
  if (!node.is_object()) throw ConfigError("branching: expected an array or a rule object");
  const std::string rule = rule_name(node, "branching");
  const json& params = rule_params(node);
  src.mode = SequenceMode::periodic;
  if (rule == "constant") {
    src.values = {integer_field(params.at("value"), "branching.value")};
  } else if (rule == "periodic") {
    for (const auto& v : params.at("values")) src.values.push_back(integer_field(v, "branching.values"));
  } else {
    throw ConfigError("branching: unknown rule \"" + rule + "\"");
  }
  return src;
}

RatioSource parse_ratio(const json& node, SequenceMode array_mode) {
  RatioSource src;
  if (node.is_array()) {
    src.values = rational_list(node, "ratio");
    src.mode = array_mode;
    return src;
  }
  if (!node.is_object()) throw ConfigError("ratio: expected an array or a rule object");
  const std::string rule = rule_name(node, "ratio");
  const json& params = rule_params(node);
  src.mode = SequenceMode::periodic;
  if (rule == "constant") {
    src.values = {rational_field(params.at("value"), "ratio.value")};
  } else if (rule == "periodic") {
    src.values = rational_list(params.at("values"), "ratio.values");
  } else if (rule == "dim_one") {
    src.rule = RatioSource::Rule::dim_one;
    if (params.contains("exponent")) src.exponent = integer_field(params.at("exponent"), "ratio.exponent");
    if (src.exponent < 1) throw ConfigError("ratio.exponent must be positive");
  } else if (rule == "full") {
    src.rule = RatioSource::Rule::full;
  } else {
    throw ConfigError("ratio: unknown rule \"" + rule + "\"");
  }
  return src;
}

GapSource parse_gaps(const json& node, SequenceMode array_mode) {
  GapSource src;
  auto read_rows = [&src](const json& rows) {
    if (!rows.is_array()) throw ConfigError("gaps: expected an array of per-level arrays");
    for (const auto& row : rows) src.values.push_back(rational_list(row, "gaps"));
  };
  if (node.is_array()) {
    read_rows(node);
    src.mode = array_mode;
    return src;
  }
  if (!node.is_object()) throw ConfigError("gaps: expected an array or a rule object");
  const std::string rule = rule_name(node, "gaps");
  const json& params = rule_params(node);
  src.mode = SequenceMode::periodic;
  if (rule == "uniform") {
    src.rule = GapSource::Rule::uniform;
  } else if (rule == "ends") {
    src.rule = GapSource::Rule::ends;
  } else if (rule == "constant") {
    src.values = {rational_list(params.at("value"), "gaps.value")};
  } else if (rule == "periodic") {
    read_rows(params.at("values"));
  } else {
    throw ConfigError("gaps: unknown rule \"" + rule + "\"");
  }
  return src;
}

json mode_rule(const json& values, SequenceMode mode) {
  if (mode == SequenceMode::finite) return values;
  return {{"rule", "periodic"}, {"params", {{"values", values}}}};
}

}  // namespace

RawParams raw_params_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("parameter document must be a JSON object");
  for (const char* key : {"branching", "ratio", "gaps"}) {
    if (!doc.contains(key)) throw ConfigError(std::string("parameter document lacks \"") + key + "\"");
  }
  SequenceMode array_mode = SequenceMode::finite;
  if (auto it = doc.find("tail"); it != doc.end()) {
    const auto tail = it->get<std::string>();
    if (tail == "periodic") {
      array_mode = SequenceMode::periodic;
    } else if (tail != "finite") {
      throw ConfigError("tail must be \"finite\" or \"periodic\"");
    }
  }
  RawParams raw;
  raw.branching = parse_branching(doc.at("branching"), array_mode);
  raw.ratio = parse_ratio(doc.at("ratio"), array_mode);
  raw.gaps = parse_gaps(doc.at("gaps"), array_mode);
  if (auto it = doc.find("gap_kind"); it != doc.end()) {
    const auto kind = it->get<std::string>();
    if (kind == "absolute") {
      raw.gap_kind = GapKind::absolute;
    } else if (kind != "relative") {
      throw ConfigError("gap_kind must be \"relative\" or \"absolute\"");
    }
  }
  return raw;
}

json to_json(const RawParams& raw) {
  json doc;
  doc["branching"] = mode_rule(json(raw.branching.values), raw.branching.mode);

  switch (raw.ratio.rule) {
    case RatioSource::Rule::dim_one:
      doc["ratio"] = {{"rule", "dim_one"}, {"params", {{"exponent", raw.ratio.exponent}}}};
      break;
    case RatioSource::Rule::full:
      doc["ratio"] = {{"rule", "full"}};
      break;
    case RatioSource::Rule::none: {
      json values = json::array();
      for (const auto& c : raw.ratio.values) values.push_back(to_string(c));
      doc["ratio"] = mode_rule(values, raw.ratio.mode);
      break;
    }
  }

  switch (raw.gaps.rule) {
    case GapSource::Rule::uniform:
      doc["gaps"] = {{"rule", "uniform"}};
      break;
    case GapSource::Rule::ends:
      doc["gaps"] = {{"rule", "ends"}};
      break;
    case GapSource::Rule::none: {
      json rows = json::array();
      for (const auto& row : raw.gaps.values) {
        json r = json::array();
        for (const auto& e : row) r.push_back(to_string(e));
        rows.push_back(r);
      }
      doc["gaps"] = mode_rule(rows, raw.gaps.mode);
      break;
    }
  }
  doc["gap_kind"] = raw.gap_kind == GapKind::absolute ? "absolute" : "relative";
  return doc;
}

json levels_to_json(const ParamSpec& params, int depth) {
  json levels = json::array();
  for (int k = 1; k <= depth; ++k) {
    const LevelParams lp = params.level(k);
    json gaps = json::array();
    for (const auto& e : lp.gaps) gaps.push_back(to_string(e));
    levels.push_back({{"k", k}, {"n", lp.branching}, {"c", to_string(lp.ratio)}, {"e", gaps}});
  }
  return levels;
}

}  // namespace qsmin
