#include "lindyn/config.hpp"

#include <json.hpp>

#include "lindyn/errors.hpp"

namespace lindyn {

namespace {

using nlohmann::json;

Rational rational_field(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("operator config misses key \"" + key + "\"");
  const json& v = j.at(key);
  if (!v.is_string()) {
    throw ConfigError("operator config key \"" + key + "\" must be a num/den string");
  }
  return Rational::parse(v.get<std::string>());
}

std::vector<Rational> rational_list(const json& j, const std::string& key) {
  std::vector<Rational> out;
  if (!j.contains(key)) return out;
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError("operator config key \"" + key + "\" must be a list");
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError("weights must be num/den strings");
    out.push_back(Rational::parse(e.get<std::string>()));
  }
  return out;
}

std::int64_t integer_field(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw ConfigError("operator config misses integer key \"" + key + "\"");
  }
  return j.at(key).get<std::int64_t>();
}

Operator from_json(const json& j) {
  if (!j.is_object() || !j.contains("op") || !j.at("op").is_string()) {
    throw ConfigError("operator config must be an object with an \"op\" string");
  }
  const std::string op = j.at("op").get<std::string>();
  if (op == "identity") {
    IndexDomain d = IndexDomain::Naturals;
    if (j.contains("domain")) {
      const std::string dom = j.at("domain").get<std::string>();
      if (dom == "integers") {
        d = IndexDomain::Integers;
      } else if (dom != "naturals") {
        throw ConfigError("unknown index domain \"" + dom + "\"");
      }
    }
    return Operator::identity(d);
  }
  if (op == "weighted_backward_shift") {
    return Operator::weighted_backward_shift(rational_list(j, "prefix"),
                                             rational_field(j, "tail"));
  }
  if (op == "weighted_forward_shift") {
    return Operator::weighted_forward_shift(rational_list(j, "prefix"),
                                            rational_field(j, "tail"));
  }
  if (op == "doubling_shift_fixed_line") return Operator::doubling_shift_fixed_line();
  if (op == "bilateral_shift") return Operator::bilateral_shift(rational_field(j, "weight"));
  if (op == "bilateral_forward_shift") {
    return Operator::bilateral_forward_shift(rational_field(j, "weight"));
  }
  if (op == "diagonal") {
    return Operator::diagonal(rational_list(j, "prefix"), rational_field(j, "default"));
  }
  if (op == "rotation") {
    return Operator::rotation(rational_field(j, "a"), rational_field(j, "b"));
  }
  if (op == "scalar_multiple") {
    if (!j.contains("inner")) throw ConfigError("scalar_multiple needs an \"inner\" operator");
    return Operator::scalar_multiple(rational_field(j, "scalar"), from_json(j.at("inner")));
  }
  if (op == "direct_sum") {
    if (!j.contains("left") || !j.contains("right")) {
      throw ConfigError("direct_sum needs \"left\" and \"right\" operators");
    }
    return Operator::direct_sum(from_json(j.at("left")), from_json(j.at("right")),
                                integer_field(j, "offset"));
  }
  if (op == "product") {
    if (!j.contains("factors") || !j.at("factors").is_array()) {
      throw ConfigError("product needs a \"factors\" list");
    }
    std::vector<Operator> factors;
    for (const auto& f : j.at("factors")) factors.push_back(from_json(f));
    if (!j.contains("widths") || !j.at("widths").is_array()) {
      throw ConfigError("product needs a \"widths\" list");
    }
    std::vector<std::int64_t> widths;
    for (const auto& w : j.at("widths")) {
      if (!w.is_number_integer()) throw ConfigError("widths must be integers");
      widths.push_back(w.get<std::int64_t>());
    }
    return Operator::product(std::move(factors), std::move(widths));
  }
  throw ConfigError("unknown operator kind \"" + op + "\"");
}

json weights_json(const std::vector<Rational>& prefix) {
  json arr = json::array();
  for (const auto& q : prefix) arr.push_back(q.str());
  return arr;
}

json to_json(const Operator& op) {
  json j;
  switch (op.kind()) {
    case OperatorKind::Identity:
      j["op"] = "identity";
      j["domain"] = op.domain() == IndexDomain::Integers ? "integers" : "naturals";
      break;
    case OperatorKind::WeightedBackwardShift:
      j["op"] = "weighted_backward_shift";
      j["prefix"] = weights_json(op.weight_prefix());
      j["tail"] = op.weight_tail().str();
      break;
    case OperatorKind::WeightedForwardShift:
      j["op"] = "weighted_forward_shift";
      j["prefix"] = weights_json(op.weight_prefix());
      j["tail"] = op.weight_tail().str();
      break;
    case OperatorKind::DoublingShiftFixedLine:
      j["op"] = "doubling_shift_fixed_line";
      break;
    case OperatorKind::BilateralShift:
      j["op"] = "bilateral_shift";
      j["weight"] = op.weight_tail().str();
      break;
    case OperatorKind::BilateralForwardShift:
      j["op"] = "bilateral_forward_shift";
      j["weight"] = op.weight_tail().str();
      break;
    case OperatorKind::Diagonal:
      j["op"] = "diagonal";
      j["prefix"] = weights_json(op.weight_prefix());
      j["default"] = op.weight_tail().str();
      break;
    case OperatorKind::Rotation:
      j["op"] = "rotation";
      j["a"] = op.rotation_cos().str();
      j["b"] = op.rotation_sin().str();
      break;
    case OperatorKind::ScalarMultiple:
      j["op"] = "scalar_multiple";
      j["scalar"] = op.scalar().str();
      j["inner"] = to_json(op.inner());
      break;
    case OperatorKind::DirectSum: {
      const auto bs = op.blocks();
      j["op"] = "direct_sum";
      j["left"] = to_json(bs[0].op);
      j["right"] = to_json(bs[1].op);
      j["offset"] = bs[1].start;
      break;
    }
    case OperatorKind::Product: {
      const auto bs = op.blocks();
      j["op"] = "product";
      json factors = json::array();
      json widths = json::array();
      for (const auto& b : bs) {
        factors.push_back(to_json(b.op));
        widths.push_back(*b.width);
      }
      j["factors"] = std::move(factors);
      j["widths"] = std::move(widths);
      break;
    }
  }
  return j;
}

}  // namespace

Operator operator_from_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed operator config: ") + e.what());
  }
  return from_json(j);
}

std::string operator_to_config_text(const Operator& op) { return to_json(op).dump(); }

}  // namespace lindyn
