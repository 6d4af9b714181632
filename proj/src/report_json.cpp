#include "nlts/report_json.hpp"

#include "nlts/params_json.hpp"

namespace nlts {

using nlohmann::json;

namespace {

json complex_list(const std::vector<std::complex<double>>& roots) {
  json out = json::array();
  for (const auto& r : roots) out.push_back({r.real(), r.imag()});
  return out;
}

json points(const std::vector<ProbePoint>& pts) {
  json out = json::array();
  for (const auto& p : pts) {
    out.push_back({{"manifold", p.manifold}, {"theta", params_to_json(p.theta)}, {"D", p.discrepancy}});
  }
  return out;
}

}  // namespace

json vector_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
  return out;
}

json to_json(const Curvature& c) {
  return {{"coordinates", c.coordinates},
          {"eigenvalues", vector_json(c.eigenvalues)},
          {"min_eigenvalue", c.min_eigenvalue},
          {"condition_number", c.condition_number}};
}

json to_json(const FitResult& fit) {
  json trace = json::array();
  for (const auto& t : fit.trace) {
    trace.push_back({{"start_id", t.start_id},
                     {"integer_value", t.integer_value},
                     {"start", vector_json(t.start)},
                     {"end", vector_json(t.end)},
                     {"objective", t.objective},
                     {"iterations", t.iterations},
                     {"converged", t.converged}});
  }
  json profile = json::object();
  for (const auto& [k, v] : fit.profile) profile[std::to_string(k)] = v;
  json out = {{"theta_hat", params_to_json(fit.theta_hat)},
              {"coordinates", fit.coordinate_names},
              {"theta_hat_coordinates", vector_json(coordinates(fit.theta_hat))},
              {"objective", fit.objective},
              {"n_effective", fit.n_effective},
              {"warm_up", fit.warm_up},
              {"starts", fit.starts},
              {"profiled", {{"name", fit.profiled_name}, {"profile", profile}}},
              {"trace", trace},
              {"warnings", fit.warnings}};
  out["curvature"] = fit.curvature ? to_json(*fit.curvature) : json(nullptr);
  return out;
}

json to_json(const Minimizer& m) {
  return {{"start_id", m.start_id},
          {"theta", params_to_json(m.theta)},
          {"D", m.discrepancy},
          {"distance", m.distance},
          {"converged", m.converged},
          {"boundary_flat", m.boundary_flat}};
}

json to_json(const IdentReport& r) {
  auto list = [](const std::vector<Minimizer>& ms) {
    json out = json::array();
    for (const auto& m : ms) out.push_back(to_json(m));
    return out;
  };
  return {{"family", std::string(to_string(r.family))},
          {"theta_true", params_to_json(r.theta_true)},
          {"n", r.n},
          {"warm_up", r.warm_up},
          {"seed", r.seed},
          {"eps", r.eps},
          {"latent_scale", r.latent_scale},
          {"rho", r.rho},
          {"coordinates", r.coordinate_names},
          {"scales", vector_json(r.scales)},
          {"verdict", std::string(to_string(r.verdict))},
          {"free_coordinates", r.free_coordinates},
          {"identified_subvector", r.identified_subvector},
          {"clusters", r.clusters},
          {"max_distance", r.max_distance},
          {"starts", r.starts},
          {"converged", r.converged},
          {"minimizers", list(r.minimizers)},
          {"boundary_flat", list(r.boundary_flat)},
          {"trace", list(r.trace)},
          {"notes", r.notes}};
}

json to_json(const RootCheck& c) {
  json out = {{"pass", c.pass},
              {"reason", c.reason},
              {"alpha_roots", complex_list(c.alpha_roots)},
              {"beta_roots", complex_list(c.beta_roots)},
              {"warnings", c.warnings}};
  out["common_root"] = c.common_root ? json{c.common_root->real(), c.common_root->imag()} : json(nullptr);
  return out;
}

json to_json(const PartialProbeReport& r) {
  return {{"ident", to_json(r.ident)},
          {"root_check", to_json(r.root_check)},
          {"grid", points(r.grid)},
          {"max_grid_D", r.max_grid_discrepancy},
          {"ridge_holds", r.ridge_holds},
          {"perturbations", points(r.perturbations)},
          {"min_perturbation_D", r.min_perturbation_discrepancy},
          {"off_manifold_separated", r.off_manifold_separated},
          {"refined", points(r.refined)},
          {"subvector_max_deviation", r.subvector_max_deviation},
          {"subvector_constant", r.subvector_constant}};
}

json to_json(const GramReport& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs) pairs.push_back({p.gamma, p.c});
  return {{"pairs", pairs},
          {"family", gram_coefficient_names(r.pairs.size())},
          {"gram", matrix_json(r.gram)},
          {"normalized_gram", matrix_json(r.normalized_gram)},
          {"normalized", r.normalized},
          {"min_eigenvalue", r.min_eigenvalue},
          {"delta", r.delta},
          {"verdict", r.independent ? "independent" : "dependent"},
          {"quadrature_order", r.order},
          {"order_disagreement", r.order_disagreement},
          {"weight_sd", r.weight_sd}};
}

json to_json(const NullVector& v) {
  json coeffs = json::object();
  for (std::size_t i = 0; i < v.names.size(); ++i) coeffs[v.names[i]] = v.coefficients[static_cast<Eigen::Index>(i)];
  return {{"coefficients", coeffs}, {"residual", v.residual}};
}

json to_json(const StationarityReport& r) {
  json out = {{"condition", r.condition},
              {"value", r.value},
              {"components", r.components},
              {"threshold", r.threshold},
              {"verdict", std::string(to_string(r.verdict))},
              {"mc_n", r.mc_n}};
  out["mc_std_error"] = r.mc_std_error ? json(*r.mc_std_error) : json(nullptr);
  return out;
}

json to_json(const AgarchIdentity& r) { return {{"alpha", r.alpha}, {"gamma", r.gamma}, {"residual", r.residual}}; }

json to_json(const PoissonArCheck& c) {
  json probes = json::array();
  for (const auto& p : c.probes) {
    probes.push_back({{"theta", vector_json(p.theta)},
                      {"max_difference", p.max_difference},
                      {"is_truth", p.is_truth},
                      {"violation", p.violation}});
  }
  return {{"kappa1", c.kappa1},
          {"kappa2", c.kappa2},
          {"contractive", c.contractive},
          {"probes", probes},
          {"condition_b_violated", c.condition_b_violated}};
}

}  // namespace nlts
