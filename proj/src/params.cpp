#include "nlts/params.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace nlts {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

template <typename P>
ValidationResult<P> make_result(const P& params, std::vector<std::string> v) {
  if (v.empty()) return ValidationResult<P>(detail::ValidAccess::make(params), {});
  return ValidationResult<P>(std::nullopt, std::move(v));
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(join(violations)), violations_(std::move(violations)) {}

ValidationError::ValidationError(const std::string& what) : Error(what), violations_{what} {}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::stgarch: return "stgarch";
    case Family::agarch: return "agarch";
    case Family::intgarch: return "intgarch";
    case Family::star: return "star";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  if (name == "stgarch") return Family::stgarch;
  if (name == "agarch") return Family::agarch;
  if (name == "intgarch") return Family::intgarch;
  if (name == "star") return Family::star;
  throw ValidationError("unknown family '" + std::string(name) + "'");
}

Family family_of(const AnyParams& params) {
  return static_cast<Family>(params.index());
}

double StgarchParams::beta_sum() const noexcept {
  return std::accumulate(beta.begin(), beta.end(), 0.0);
}

// ---------------------------------------------------------------------------
// Innovations

InnovationSpec InnovationSpec::normal() { return {}; }

InnovationSpec InnovationSpec::student_t(double nu) {
  InnovationSpec s;
  s.kind = Kind::student_t;
  s.nu = nu;
  return s;
}

InnovationSpec InnovationSpec::three_point(std::array<double, 3> probs, std::array<double, 3> raw) {
  InnovationSpec s;
  s.kind = Kind::three_point;
  s.probs = probs;
  double m = 0.0;
  for (int i = 0; i < 3; ++i) m += probs[i] * raw[i];
  double v = 0.0;
  for (int i = 0; i < 3; ++i) v += probs[i] * (raw[i] - m) * (raw[i] - m);
  const double sd = std::sqrt(v);
  for (int i = 0; i < 3; ++i) s.values[i] = sd > 0.0 ? (raw[i] - m) / sd : 0.0;
  return s;
}

double InnovationSpec::mean() const noexcept {
  if (kind != Kind::three_point) return 0.0;
  double m = 0.0;
  for (int i = 0; i < 3; ++i) m += probs[i] * values[i];
  return m;
}

double InnovationSpec::variance() const noexcept {
  if (kind != Kind::three_point) return 1.0;
  const double m = mean();
  double v = 0.0;
  for (int i = 0; i < 3; ++i) v += probs[i] * (values[i] - m) * (values[i] - m);
  return v;
}

std::string_view to_string(InnovationSpec::Kind kind) {
  switch (kind) {
    case InnovationSpec::Kind::normal: return "normal";
    case InnovationSpec::Kind::student_t: return "student_t";
    case InnovationSpec::Kind::three_point: return "three_point";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Violations

std::vector<std::string> violations(const StgarchParams& p) {
  std::vector<std::string> v;
  if (!std::isfinite(p.gamma) || !std::isfinite(p.omega) || !all_finite(p.alpha1) ||
      !all_finite(p.alpha2) || !all_finite(p.beta)) {
    v.emplace_back("all parameters finite");
  }
  if (p.q() < 1) v.emplace_back("q ≥ 1");
  if (p.alpha2.size() != p.alpha1.size()) v.emplace_back("alpha1 and alpha2 have length q");
  if (!(p.gamma >= 0.0)) v.emplace_back("gamma ≥ 0");
  if (!(p.omega > 0.0)) v.emplace_back("omega > 0");
  bool cone_ok = true;
  bool alpha1_ok = true;
  for (std::size_t i = 0; i < p.alpha1.size(); ++i) {
    if (!(p.alpha1[i] >= 0.0)) alpha1_ok = false;
    if (i < p.alpha2.size() && !(std::abs(p.alpha2[i]) <= 2.0 * p.alpha1[i])) cone_ok = false;
  }
  if (!alpha1_ok) v.emplace_back("alpha1 ≥ 0");
  if (!cone_ok) v.emplace_back("cone |alpha2| ≤ 2·alpha1");
  bool beta_ok = true;
  for (double b : p.beta) {
    if (!(b >= 0.0 && b < 1.0)) beta_ok = false;
  }
  if (!beta_ok) v.emplace_back("beta in [0,1)");
  if (!(p.beta_sum() < 1.0)) v.emplace_back("Σβ < 1");
  if (p.d < 1 || p.d > std::max(p.q(), 1)) v.emplace_back("1 ≤ d ≤ q");
  return v;
}

std::vector<std::string> violations(const AgarchParams& p) {
  std::vector<std::string> v;
  if (!(p.omega > 0.0) || !std::isfinite(p.omega)) v.emplace_back("omega > 0");
  if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha)) v.emplace_back("alpha ≥ 0");
  if (!(p.beta >= 0.0 && p.beta < 1.0)) v.emplace_back("beta in [0,1)");
  if (!(p.gamma >= -1.0 && p.gamma <= 1.0)) v.emplace_back("gamma in [-1,1]");
  return v;
}

std::vector<std::string> violations(const IntgarchParams& p) {
  std::vector<std::string> v;
  if (!(p.omega > 0.0) || !std::isfinite(p.omega)) v.emplace_back("omega > 0");
  if (!(p.alpha1 >= 0.0 && p.alpha1 < 1.0)) v.emplace_back("alpha1 in [0,1)");
  if (!(p.alpha2 >= 0.0 && p.alpha2 < 1.0)) v.emplace_back("alpha2 in [0,1)");
  if (!(p.beta >= 0.0 && p.beta < 1.0)) v.emplace_back("beta in [0,1)");
  if (p.l < 1) v.emplace_back("l ≥ 1");
  return v;
}

std::vector<std::string> violations(const StarParams& p, bool require_identified) {
  std::vector<std::string> v;
  const int M = p.M();
  if (M < 1) v.emplace_back("M ≥ 1");
  if (p.p() < 1) v.emplace_back("p ≥ 1");
  if (p.phi.rows() != M + 1) v.emplace_back("M+1 regime vectors");
  if (p.c.size() != M) v.emplace_back("M thresholds");
  if (!p.phi.allFinite() || !p.gamma.allFinite() || !p.c.allFinite()) {
    v.emplace_back("all parameters finite");
  }
  if (M >= 1 && !(p.gamma.array() > 0.0).all()) v.emplace_back("gamma > 0");
  for (Eigen::Index i = 1; i < p.c.size(); ++i) {
    if (!(p.c[i - 1] < p.c[i])) {
      v.emplace_back("thresholds strictly increasing");
      break;
    }
  }
  if (p.d < 1 || p.d > std::max(p.p(), 1)) v.emplace_back("1 ≤ d ≤ p");
  if (require_identified && p.phi.rows() == M + 1) {
    for (int i = 1; i <= M; ++i) {
      if (p.phi.row(i).isZero(0.0)) {
        v.emplace_back("regime vector " + std::to_string(i) + " non-zero");
      }
    }
  }
  return v;
}

std::vector<std::string> violations(const InnovationSpec& s) {
  std::vector<std::string> v;
  switch (s.kind) {
    case InnovationSpec::Kind::normal:
      break;
    case InnovationSpec::Kind::student_t:
      if (!(s.nu > 4.0)) v.emplace_back("student_t requires nu > 4");
      break;
    case InnovationSpec::Kind::three_point: {
      double total = 0.0;
      bool has_pos = false;
      bool has_neg = false;
      for (int i = 0; i < 3; ++i) {
        if (!(s.probs[i] > 0.0)) v.emplace_back("three_point probabilities > 0");
        total += s.probs[i];
        if (s.values[i] > 0.0) has_pos = true;
        if (s.values[i] < 0.0) has_neg = true;
      }
      if (std::abs(total - 1.0) > 1e-12) v.emplace_back("three_point probabilities sum to 1");
      if (!(has_pos && has_neg)) v.emplace_back("three_point support has a positive and a negative point");
      if (s.values[0] == s.values[1] || s.values[1] == s.values[2] || s.values[0] == s.values[2]) {
        v.emplace_back("three_point support points distinct");
      }
      if (std::abs(s.mean()) > 1e-12 || std::abs(s.variance() - 1.0) > 1e-12) {
        v.emplace_back("three_point standardized to mean 0, variance 1");
      }
      break;
    }
  }
  return v;
}

std::vector<std::string> violations(const AnyParams& params) {
  return std::visit([](const auto& p) { return violations(p); }, params);
}

ValidationResult<StgarchParams> validate(const StgarchParams& p) { return make_result(p, violations(p)); }
ValidationResult<AgarchParams> validate(const AgarchParams& p) { return make_result(p, violations(p)); }
ValidationResult<IntgarchParams> validate(const IntgarchParams& p) { return make_result(p, violations(p)); }
ValidationResult<StarParams> validate(const StarParams& p, bool require_identified) {
  return make_result(p, violations(p, require_identified));
}
ValidationResult<InnovationSpec> validate(const InnovationSpec& s) { return make_result(s, violations(s)); }

// ---------------------------------------------------------------------------
// Coordinates

namespace {

struct CoordinatesVisitor {
  Eigen::VectorXd operator()(const StgarchParams& p) const {
    const int q = p.q();
    Eigen::VectorXd v(2 + 2 * q + p.p());
    v[0] = p.gamma;
    v[1] = p.omega;
    for (int i = 0; i < q; ++i) {
      v[2 + i] = p.alpha1[i];
      v[2 + q + i] = p.alpha2[i];
    }
    for (int j = 0; j < p.p(); ++j) v[2 + 2 * q + j] = p.beta[j];
    return v;
  }
  Eigen::VectorXd operator()(const AgarchParams& p) const {
    return Eigen::Vector4d(p.omega, p.alpha, p.beta, p.gamma);
  }
  Eigen::VectorXd operator()(const IntgarchParams& p) const {
    return Eigen::Vector4d(p.omega, p.alpha1, p.alpha2, p.beta);
  }
  Eigen::VectorXd operator()(const StarParams& p) const {
    const Eigen::Index nphi = p.phi.size();
    Eigen::VectorXd v(nphi + 2 * p.M());
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < p.phi.rows(); ++i) {
      for (Eigen::Index j = 0; j < p.phi.cols(); ++j) v[k++] = p.phi(i, j);
    }
    v.segment(k, p.M()) = p.gamma;
    v.segment(k + p.M(), p.M()) = p.c;
    return v;
  }
};

struct NamesVisitor {
  std::vector<std::string> operator()(const StgarchParams& p) const {
    std::vector<std::string> n{"gamma", "omega"};
    for (int i = 1; i <= p.q(); ++i) n.push_back("alpha1[" + std::to_string(i) + "]");
    for (int i = 1; i <= p.q(); ++i) n.push_back("alpha2[" + std::to_string(i) + "]");
    for (int j = 1; j <= p.p(); ++j) n.push_back("beta[" + std::to_string(j) + "]");
    return n;
  }
  std::vector<std::string> operator()(const AgarchParams&) const {
    return {"omega", "alpha", "beta", "gamma"};
  }
  std::vector<std::string> operator()(const IntgarchParams&) const {
    return {"omega", "alpha1", "alpha2", "beta"};
  }
  std::vector<std::string> operator()(const StarParams& p) const {
    std::vector<std::string> n;
    for (Eigen::Index i = 0; i < p.phi.rows(); ++i) {
      for (Eigen::Index j = 0; j < p.phi.cols(); ++j) {
        n.push_back("phi[" + std::to_string(i) + "][" + std::to_string(j) + "]");
      }
    }
    for (int i = 1; i <= p.M(); ++i) n.push_back("gamma[" + std::to_string(i) + "]");
    for (int i = 1; i <= p.M(); ++i) n.push_back("c[" + std::to_string(i) + "]");
    return n;
  }
};

}  // namespace

Eigen::VectorXd coordinates(const AnyParams& params) {
  return std::visit(CoordinatesVisitor{}, params);
}

std::vector<std::string> coordinate_names(const AnyParams& params) {
  return std::visit(NamesVisitor{}, params);
}

AnyParams with_coordinates(const AnyParams& shape, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != coordinates(shape).size()) {
    throw ValidationError("coordinate vector has the wrong length");
  }
  return std::visit(
      [&](const auto& s) -> AnyParams {
        using T = std::decay_t<decltype(s)>;
        T p = s;
        if constexpr (std::is_same_v<T, StgarchParams>) {
          const int q = p.q();
          p.gamma = v[0];
          p.omega = v[1];
          for (int i = 0; i < q; ++i) {
            p.alpha1[i] = v[2 + i];
            p.alpha2[i] = v[2 + q + i];
          }
          for (int j = 0; j < p.p(); ++j) p.beta[j] = v[2 + 2 * q + j];
        } else if constexpr (std::is_same_v<T, AgarchParams>) {
          p.omega = v[0];
          p.alpha = v[1];
          p.beta = v[2];
          p.gamma = v[3];
        } else if constexpr (std::is_same_v<T, IntgarchParams>) {
          p.omega = v[0];
          p.alpha1 = v[1];
          p.alpha2 = v[2];
          p.beta = v[3];
        } else {
          Eigen::Index k = 0;
          for (Eigen::Index i = 0; i < p.phi.rows(); ++i) {
            for (Eigen::Index j = 0; j < p.phi.cols(); ++j) p.phi(i, j) = v[k++];
          }
          p.gamma = v.segment(k, p.M());
          p.c = v.segment(k + p.M(), p.M());
        }
        return p;
      },
      shape);
}

std::string integer_parameter_name(const AnyParams& params) {
  return std::holds_alternative<IntgarchParams>(params) ? "l" : "d";
}

int integer_parameter(const AnyParams& params) {
  return std::visit(
      [](const auto& p) -> int {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IntgarchParams>) {
          return p.l;
        } else if constexpr (std::is_same_v<T, AgarchParams>) {
          return 1;
        } else {
          return p.d;
        }
      },
      params);
}

AnyParams with_integer_parameter(const AnyParams& params, int value) {
  return std::visit(
      [&](const auto& s) -> AnyParams {
        using T = std::decay_t<decltype(s)>;
        T p = s;
        if constexpr (std::is_same_v<T, IntgarchParams>) {
          p.l = value;
        } else if constexpr (!std::is_same_v<T, AgarchParams>) {
          p.d = value;
        }
        return p;
      },
      params);
}

}  // namespace nlts
