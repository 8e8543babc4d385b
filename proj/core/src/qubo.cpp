#include "conbqa/qubo.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include <json.hpp>

#include "conbqa/errors.hpp"

namespace conbqa {

Qubo::Qubo(std::size_t num_vars, std::map<std::size_t, double> linear, std::map<Pair, double> quadratic)
    : num_vars_(num_vars) {
  for (const auto& [i, c] : linear) set_linear(i, c);
  for (const auto& [key, c] : quadratic) {
    if (key.first >= key.second) throw InvalidParameter("Qubo: quadratic keys must satisfy i < j");
    set_quadratic(key.first, key.second, c);
  }
}

double Qubo::linear(std::size_t i) const {
  const auto it = linear_.find(i);
  return it == linear_.end() ? 0.0 : it->second;
}

double Qubo::quadratic(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const auto it = quadratic_.find({i, j});
  return it == quadratic_.end() ? 0.0 : it->second;
}

void Qubo::set_linear(std::size_t i, double c) {
  if (i >= num_vars_) throw InvalidParameter("Qubo: linear index out of range");
  if (!std::isfinite(c)) throw NumericError("Qubo: non-finite coefficient");
  linear_[i] = c + 0.0;  // folds -0.0 into +0.0
}

void Qubo::set_quadratic(std::size_t i, std::size_t j, double c) {
  if (i == j) throw InvalidParameter("Qubo: diagonal quadratic term; use linear instead");
  if (i > j) std::swap(i, j);
  if (j >= num_vars_) throw InvalidParameter("Qubo: quadratic index out of range");
  if (!std::isfinite(c)) throw NumericError("Qubo: non-finite coefficient");
  quadratic_[{i, j}] = c + 0.0;
}

double Qubo::energy(const BitVector& z) const {
  if (z.size() != num_vars_) throw ContractError("Qubo::energy: code length != num_vars");
  double e = 0.0;
  for (const auto& [i, c] : linear_) {
    if (z[i]) e += c;
  }
  for (const auto& [key, c] : quadratic_) {
    if (z[key.first] && z[key.second]) e += c;
  }
  return e;
}

std::string Qubo::to_json() const {
  nlohmann::json doc;
  doc["num_vars"] = num_vars_;
  doc["sense"] = "min";
  auto lin = nlohmann::json::object();
  for (const auto& [i, c] : linear_) lin[std::to_string(i)] = c;
  auto quad = nlohmann::json::object();
  for (const auto& [key, c] : quadratic_) {
    quad[std::to_string(key.first) + "," + std::to_string(key.second)] = c;
  }
  doc["linear"] = std::move(lin);
  doc["quadratic"] = std::move(quad);
  return doc.dump();
}

namespace {

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::size_t parse_index(std::string_view s, std::string_view field, std::string_view key) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError("qubo: field '" + std::string(field) + "': bad index in key '" + std::string(key) + "'");
  }
  return v;
}

double coefficient(const nlohmann::json& v, std::string_view field, const std::string& key) {
  if (!v.is_number()) {
    throw ParseError("qubo: field '" + std::string(field) + "': value for key '" + key + "' is not a number");
  }
  return v.get<double>();
}

}  // namespace

Qubo Qubo::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("qubo: malformed JSON at " + location(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("qubo: top level must be an object");
  for (const char* field : {"num_vars", "linear", "quadratic"}) {
    if (!doc.contains(field)) throw ParseError(std::string("qubo: missing field '") + field + "'");
  }
  if (!doc["num_vars"].is_number_unsigned()) {
    throw ParseError("qubo: field 'num_vars' must be a nonnegative integer");
  }
  if (doc.contains("sense") && doc["sense"] != "min") {
    throw ParseError("qubo: field 'sense' must be \"min\"");
  }
  if (!doc["linear"].is_object()) throw ParseError("qubo: field 'linear' must be an object");
  if (!doc["quadratic"].is_object()) throw ParseError("qubo: field 'quadratic' must be an object");

  Qubo q(doc["num_vars"].get<std::size_t>());
  try {
    for (const auto& [key, v] : doc["linear"].items()) {
      q.set_linear(parse_index(key, "linear", key), coefficient(v, "linear", key));
    }
    for (const auto& [key, v] : doc["quadratic"].items()) {
      const auto comma = key.find(',');
      if (comma == std::string::npos) {
        throw ParseError("qubo: field 'quadratic': key '" + key + "' is not of the form \"i,j\"");
      }
      const std::string_view ks(key);
      const auto i = parse_index(ks.substr(0, comma), "quadratic", key);
      const auto j = parse_index(ks.substr(comma + 1), "quadratic", key);
      if (i >= j) throw ParseError("qubo: field 'quadratic': key '" + key + "' must have i < j");
      q.set_quadratic(i, j, coefficient(v, "quadratic", key));
    }
  } catch (const InvalidParameter& e) {
    throw ParseError(std::string("qubo: ") + e.what());
  }
  return q;
}

double acquisition_scale(const Weights& weights) {
  const double wmax = weights.max();
  return wmax > 0.0 ? 1.0 / wmax : 1.0;
}

Qubo build_qubo(const Weights& weights, const Codebook& codebook, double penalty) {
  if (weights.size() != codebook.size()) throw ContractError("build_qubo: weights length != m");
  const double scale = acquisition_scale(weights);
  Qubo q(codebook.size());
  for (std::size_t i = 0; i < weights.size(); ++i) q.set_linear(i, -scale * weights.w[i]);
  for (const auto& [i, j] : codebook.disjoint_pairs()) q.set_quadratic(i, j, penalty);
  return q;
}

bool feasible_for_C(const Codebook& codebook, const BitVector& z) {
  if (z.size() != codebook.size()) throw ContractError("feasible_for_C: code length != m");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!z[i]) continue;
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      if (z[j] && !codebook.overlaps(i, j)) return false;
    }
  }
  return true;
}

}  // namespace conbqa
