#include "nlts/params_json.hpp"

#include <set>

namespace nlts {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& doc, const std::set<std::string>& allowed) {
  std::vector<std::string> bad;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!allowed.count(it.key())) bad.push_back("unknown key '" + it.key() + "'");
  }
  if (!bad.empty()) throw ValidationError(bad);
}

const json& need(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ValidationError(std::string("missing key '") + key + "'");
  return doc.at(key);
}

double number(const json& doc, const char* key) {
  const json& v = need(doc, key);
  if (!v.is_number()) throw ValidationError(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

int integer(const json& doc, const char* key) {
  const json& v = need(doc, key);
  if (!v.is_number_integer()) throw ValidationError(std::string("key '") + key + "' must be an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& doc, const char* key) {
  const json& v = need(doc, key);
  if (!v.is_array()) throw ValidationError(std::string("key '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ValidationError(std::string("key '") + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

double single(const json& doc, const char* key) {
  const json& v = need(doc, key);
  if (v.is_number()) return v.get<double>();
  auto vals = numbers(doc, key);
  if (vals.size() != 1) throw ValidationError(std::string("key '") + key + "' must have one element");
  return vals[0];
}

void check_order(const json& doc, const char* key, int actual) {
  if (doc.contains(key) && integer(doc, key) != actual) {
    throw ValidationError(std::string("key '") + key + "' disagrees with coefficient lengths");
  }
}

}  // namespace

json params_to_json(const AnyParams& params) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        json doc;
        if constexpr (std::is_same_v<T, StgarchParams>) {
          doc["family"] = "stgarch";
          doc["gamma"] = p.gamma;
          doc["omega"] = p.omega;
          doc["alpha1"] = p.alpha1;
          doc["alpha2"] = p.alpha2;
          doc["beta"] = p.beta;
          doc["d"] = p.d;
          doc["p"] = p.p();
          doc["q"] = p.q();
        } else if constexpr (std::is_same_v<T, AgarchParams>) {
          doc["family"] = "agarch";
          doc["omega"] = p.omega;
          doc["alpha1"] = json::array({p.alpha});
          doc["beta"] = json::array({p.beta});
          doc["gamma"] = p.gamma;
        } else if constexpr (std::is_same_v<T, IntgarchParams>) {
          doc["family"] = "intgarch";
          doc["omega"] = p.omega;
          doc["alpha1"] = json::array({p.alpha1});
          doc["alpha2"] = json::array({p.alpha2});
          doc["beta"] = json::array({p.beta});
          doc["l"] = p.l;
        } else {
          doc["family"] = "star";
          json regimes = json::array();
          for (Eigen::Index i = 0; i < p.phi.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < p.phi.cols(); ++j) row.push_back(p.phi(i, j));
            regimes.push_back(row);
          }
          doc["regimes"] = regimes;
          doc["gamma"] = std::vector<double>(p.gamma.data(), p.gamma.data() + p.gamma.size());
          doc["c"] = std::vector<double>(p.c.data(), p.c.data() + p.c.size());
          doc["d"] = p.d;
          doc["M"] = p.M();
          doc["p"] = p.p();
        }
        return doc;
      },
      params);
}

AnyParams params_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("model document must be an object");
  const json& fam = need(doc, "family");
  if (!fam.is_string()) throw ValidationError("key 'family' must be a string");
  switch (family_from_string(fam.get<std::string>())) {
    case Family::stgarch: {
      reject_unknown_keys(doc, {"family", "gamma", "omega", "alpha1", "alpha2", "beta", "d", "p", "q"});
      StgarchParams p;
      p.gamma = number(doc, "gamma");
      p.omega = number(doc, "omega");
      p.alpha1 = numbers(doc, "alpha1");
      p.alpha2 = numbers(doc, "alpha2");
      p.beta = doc.contains("beta") ? numbers(doc, "beta") : std::vector<double>{};
      p.d = doc.contains("d") ? integer(doc, "d") : 1;
      check_order(doc, "p", p.p());
      check_order(doc, "q", p.q());
      return p;
    }
    case Family::agarch: {
      reject_unknown_keys(doc, {"family", "omega", "alpha1", "beta", "gamma"});
      AgarchParams p;
      p.omega = number(doc, "omega");
      p.alpha = single(doc, "alpha1");
      p.beta = single(doc, "beta");
      p.gamma = number(doc, "gamma");
      return p;
    }
    case Family::intgarch: {
      reject_unknown_keys(doc, {"family", "omega", "alpha1", "alpha2", "beta", "l"});
      IntgarchParams p;
      p.omega = number(doc, "omega");
      p.alpha1 = single(doc, "alpha1");
      p.alpha2 = single(doc, "alpha2");
      p.beta = single(doc, "beta");
      p.l = integer(doc, "l");
      return p;
    }
    case Family::star: {
      reject_unknown_keys(doc, {"family", "regimes", "gamma", "c", "d", "M", "p"});
      const json& regimes = need(doc, "regimes");
      if (!regimes.is_array() || regimes.empty() || !regimes[0].is_array()) {
        throw ValidationError("key 'regimes' must be a non-empty array of arrays");
      }
      StarParams p;
      const auto rows = static_cast<Eigen::Index>(regimes.size());
      const auto cols = static_cast<Eigen::Index>(regimes[0].size());
      p.phi.resize(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = regimes[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
          throw ValidationError("regime vectors must all have length p+1");
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
          const json& e = row[static_cast<std::size_t>(j)];
          if (!e.is_number()) throw ValidationError("regime coefficients must be numbers");
          p.phi(i, j) = e.get<double>();
        }
      }
      const auto g = numbers(doc, "gamma");
      const auto c = numbers(doc, "c");
      p.gamma = Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
      p.c = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
      p.d = doc.contains("d") ? integer(doc, "d") : 1;
      check_order(doc, "M", p.M());
      check_order(doc, "p", p.p());
      return p;
    }
  }
  throw ValidationError("unknown family");
}

json innovation_to_json(const InnovationSpec& spec) {
  json doc;
  doc["kind"] = std::string(to_string(spec.kind));
  if (spec.kind == InnovationSpec::Kind::student_t) doc["nu"] = spec.nu;
  if (spec.kind == InnovationSpec::Kind::three_point) {
    doc["values"] = spec.values;
    doc["probs"] = spec.probs;
  }
  return doc;
}

InnovationSpec innovation_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("innovation must be an object");
  const json& kind = need(doc, "kind");
  if (!kind.is_string()) throw ValidationError("innovation 'kind' must be a string");
  const auto k = kind.get<std::string>();
  if (k == "normal") {
    reject_unknown_keys(doc, {"kind"});
    return InnovationSpec::normal();
  }
  if (k == "student_t") {
    reject_unknown_keys(doc, {"kind", "nu"});
    return InnovationSpec::student_t(number(doc, "nu"));
  }
  if (k == "three_point") {
    reject_unknown_keys(doc, {"kind", "values", "probs"});
    std::array<double, 3> probs{0.25, 0.5, 0.25};
    std::array<double, 3> raw{-1.0, 0.0, 1.0};
    if (doc.contains("probs")) {
      auto v = numbers(doc, "probs");
      if (v.size() != 3) throw ValidationError("three_point 'probs' needs 3 entries");
      std::copy(v.begin(), v.end(), probs.begin());
    }
    if (doc.contains("values")) {
      auto v = numbers(doc, "values");
      if (v.size() != 3) throw ValidationError("three_point 'values' needs 3 entries");
      std::copy(v.begin(), v.end(), raw.begin());
    }
    return InnovationSpec::three_point(probs, raw);
  }
  throw ValidationError("unknown innovation kind '" + k + "'");
}

}  // namespace nlts
