#include "reports.hpp"

#include <cstdio>

namespace entgeom::cli {

json to_json(const NormBracket& b) {
  json j = {{"lower", b.lower}, {"upper", b.upper}, {"width", b.width()}, {"upper_certificate", b.upper_certificate}};
  if (b.restarts_used > 0) j["restarts_used"] = b.restarts_used;
  if (b.iterations > 0) j["iterations"] = b.iterations;
  return j;
}

json to_json(const CVector& v) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return {{"re", re}, {"im", im}};
}

json to_json(const CMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    json c = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      r.push_back(m(i, k).real());
      c.push_back(m(i, k).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  return {{"re", re}, {"im", im}};
}

json to_json(const ProductVector& p) {
  json factors = json::array();
  for (const auto& f : p.factors()) factors.push_back(to_json(f));
  return factors;
}

json to_json(const ProductDecomposition& d) {
  json terms = json::array();
  for (const auto& t : d.terms) {
    terms.push_back({{"coefficient", {{"re", t.coefficient.real()}, {"im", t.coefficient.imag()}}},
                     {"factors", to_json(t.product)}});
  }
  return {{"cost", d.cost()}, {"terms", terms}};
}

json to_json(const MaximalityEvidence& e) {
  return {{"injective", to_json(e.injective)},
          {"projective", to_json(e.projective)},
          {"distance", to_json(e.distance)},
          {"inner_radius", e.inner_radius}};
}

json to_json(const WitnessCertificate& w) {
  return {{"operator", to_json(w.x.matrix())},
          {"vnorm_upper", w.vnorm_upper},
          {"value", w.value},
          {"origin", w.origin}};
}

json to_json(const SeparableDecomposition& s) {
  json atoms = json::array();
  for (std::size_t k = 0; k < s.states.size(); ++k) {
    atoms.push_back({{"weight", s.weights[k]}, {"factors", to_json(s.states[k])}});
  }
  return {{"residual_trace_norm", s.residual}, {"raw_weight", s.raw_weight}, {"atoms", atoms}};
}

json to_json(const InnerRadiusResult& r) {
  json j = {{"bracket", to_json(r.bracket)},
            {"mode", to_string(r.mode)},
            {"strict_lower", r.strict_lower},
            {"minimizer_origin", r.minimizer_origin}};
  if (r.minimizer) j["minimizer"] = to_json(r.minimizer->amplitudes());
  return j;
}

json to_json(const DivergentState& d) {
  json rows = json::array();
  for (const auto& r : d.rows) {
    rows.push_back({{"k", r.k},
                    {"block_dim", r.block_dim},
                    {"theta", r.theta},
                    {"sqrt_theta_n", r.block_bound},
                    {"cumulative_nuclear_norm", r.cumulative_nuclear},
                    {"block_injective", to_json(r.block_injective)}});
  }
  return {{"side", d.side},
          {"raw_norm", d.raw_norm},
          {"nuclear_norm", d.nuclear_norm},
          {"normalized_nuclear_norm", d.normalized_nuclear_norm()},
          {"dense_state", d.state.has_value()},
          {"rows", rows}};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string render_csv(const std::vector<CsvRow>& rows) {
  std::string out = "quantity,lower,upper,notes\n";
  for (const auto& r : rows) {
    out += csv_field(r.quantity) + "," + number(r.lower) + "," + number(r.upper) + "," + csv_field(r.notes) + "\n";
  }
  return out;
}

}  // namespace entgeom::cli
