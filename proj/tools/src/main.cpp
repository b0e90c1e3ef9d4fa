#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reports.hpp"

#include <entgeom/acceptance.hpp>
#include <entgeom/errors.hpp>
#include <entgeom/state_file.hpp>

namespace {

using namespace entgeom;
using cli::CsvRow;
using cli::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitUndecided = 4;

struct Common {
  int restarts = 64;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  std::string csv;
  bool strict = false;

  SolverOptions solver() const {
    SolverOptions o;
    o.restarts = restarts;
    o.seed = seed;
    o.validate();
    return o;
  }
  json echo() const { return {{"restarts", restarts}, {"seed", seed}, {"tol", tol}}; }
};

struct Outcome {
  json report;
  std::vector<CsvRow> csv;
  bool undecided = false;
  int exit_code = kExitOk;
  std::string text;  // printed instead of the report when set
};

void add_common(CLI::App* sub, Common& c, bool tol = true) {
  sub->add_option("--restarts", c.restarts, "Multi-start restarts")->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "Random seed");
  if (tol) sub->add_option("--tol", c.tol, "Decision tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--csv", c.csv, "Also write quantity,lower,upper,notes rows to this file");
  sub->add_flag("--strict", c.strict, "Exit with status 4 on an undecided verdict");
}

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v == 0) {
      throw PreconditionError("--dims expects positive integers separated by commas, got \"" + text + "\"");
    }
    dims.push_back(static_cast<std::size_t>(v));
  }
  return dims;
}

json dims_json(const SpaceShape& s) { return s.dims(); }

CsvRow row(const std::string& q, const NormBracket& b, std::string notes = {}) {
  return {q, b.lower, b.upper, notes.empty() ? b.upper_certificate : std::move(notes)};
}

Outcome inj_norm(const std::string& file, const Common& c) {
  const PureState xi = read_pure_state(file);
  const NormBracket b = injective_norm(xi, c.solver());
  Outcome o;
  o.report = {{"quantity", "injective_norm"}, {"dims", dims_json(xi.shape())}, {"bracket", cli::to_json(b)}};
  if (b.lower_certificate) o.report["nearest_product"] = cli::to_json(*b.lower_certificate);
  o.csv.push_back(row("injective_norm", b));
  return o;
}

Outcome proj_norm(const std::string& file, const Common& c) {
  const PureState xi = read_pure_state(file);
  const ProjectiveResult r = projective_norm(xi, c.solver());
  Outcome o;
  o.report = {{"quantity", "projective_norm"},
              {"dims", dims_json(xi.shape())},
              {"bracket", cli::to_json(r.bracket)},
              {"decomposition", cli::to_json(r.decomposition)},
              {"residual", r.residual},
              {"dual_injective_upper", r.dual_injective_upper}};
  o.csv.push_back(row("projective_norm", r.bracket));
  return o;
}

Outcome distance(const std::string& file, const Common& c) {
  const PureState xi = read_pure_state(file);
  const NormBracket b = distance_to_V(xi, c.solver());
  Outcome o;
  o.report = {{"quantity", "distance_to_V"}, {"dims", dims_json(xi.shape())}, {"bracket", cli::to_json(b)}};
  o.csv.push_back(row("distance_to_V", b));
  return o;
}

Outcome is_maximal_cmd(const std::string& file, const Common& c) {
  const PureState xi = read_pure_state(file);
  const MaximalityReport r = is_maximal(xi, c.solver(), c.tol);
  Outcome o;
  o.report = {{"quantity", "maximality"}, {"dims", dims_json(xi.shape())}, {"verdict", to_string(r.verdict)}};
  if (r.evidence) {
    o.report["evidence"] = cli::to_json(*r.evidence);
    o.csv.push_back(row("injective_norm", r.evidence->injective));
    o.csv.push_back(row("projective_norm", r.evidence->projective));
    o.csv.push_back(row("distance_to_V", r.evidence->distance));
    o.csv.push_back({"inner_radius", r.evidence->inner_radius, r.evidence->inner_radius, "closed form"});
  }
  o.csv.push_back({"verdict", 0.0, 0.0, to_string(r.verdict)});
  o.undecided = r.verdict != MaximalityVerdict::maximal && r.verdict != MaximalityVerdict::not_maximal;
  return o;
}

Outcome make_maximal_cmd(const std::string& dims, const std::string& out, const Common& c) {
  const SpaceShape shape(parse_dims(dims));
  const PureState xi = make_maximal(shape, c.seed);
  Outcome o;
  if (out.empty()) {
    o.text = to_state_file(xi);
    return o;
  }
  write_state_file(out, xi);
  const auto r = closed_form_inner_radius(shape);
  o.report = {{"quantity", "make_maximal"}, {"dims", dims_json(shape)}, {"written", out}, {"inner_radius", *r}};
  o.csv.push_back({"inner_radius", *r, *r, "closed form"});
  return o;
}

Outcome inner_radius_cmd(const std::string& dims, bool search, const Common& c) {
  const SpaceShape shape(parse_dims(dims));
  const InnerRadiusResult r = inner_radius(shape, c.solver(), search);
  Outcome o;
  o.report = {{"quantity", "inner_radius"}, {"dims", dims_json(shape)}, {"result", cli::to_json(r)}};
  o.csv.push_back(row("inner_radius", r.bracket, std::string(to_string(r.mode)) + "; " + r.bracket.upper_certificate));
  return o;
}

DensityOperator load_density(const std::string& file) { return read_density_operator(file); }

Outcome entanglement_cmd(const std::string& file, const Common& c) {
  const DensityOperator rho = load_density(file);
  const EntanglementResult r = entanglement(rho, c.solver());
  Outcome o;
  o.report = {{"quantity", "entanglement_norm"}, {"dims", dims_json(rho.shape())}, {"bracket", cli::to_json(r.bracket)}};
  if (r.witness) o.report["witness"] = cli::to_json(*r.witness);
  if (r.separable) o.report["separable_decomposition"] = cli::to_json(*r.separable);
  if (r.operator_decomposition) o.report["operator_decomposition"] = cli::to_json(*r.operator_decomposition);
  o.csv.push_back(row("entanglement_norm", r.bracket));
  return o;
}

Outcome classify_cmd(const std::string& file, const Common& c) {
  const DensityOperator rho = load_density(file);
  const Classification r = classify(rho, c.solver(), c.tol);
  Outcome o;
  o.report = {{"quantity", "classification"},
              {"dims", dims_json(rho.shape())},
              {"verdict", to_string(r.verdict)},
              {"entanglement_lower", r.lower}};
  json cert;
  if (r.verdict == StateVerdict::separable && r.separable) {
    cert = {{"kind", "separable_decomposition"}, {"decomposition", cli::to_json(*r.separable)}};
  } else if (r.witness && r.verdict != StateVerdict::undecided) {
    cert = {{"kind", "witness"}, {"witness", cli::to_json(*r.witness)}};
  }
  if (!cert.is_null()) o.report["certificate"] = cert;
  o.csv.push_back({"entanglement_lower", r.lower, r.lower, to_string(r.verdict)});
  o.undecided = r.verdict == StateVerdict::undecided;
  return o;
}

Outcome divergence_cmd(int k, double theta, std::size_t base, const Common& c) {
  const DivergentState d = build_divergent(k, theta, base, c.solver());
  Outcome o;
  o.report = {{"quantity", "divergence_demo"}, {"K", k}, {"theta_base", theta}, {"dim_base", base}, {"table", cli::to_json(d)}};
  for (const auto& r : d.rows) {
    o.csv.push_back({"sqrt_theta_n[k=" + std::to_string(r.k) + "]", r.block_bound, r.block_bound,
                     "cumulative nuclear norm " + std::to_string(r.cumulative_nuclear)});
  }
  return o;
}

Outcome selftest(int only) {
  Outcome o;
  std::ostringstream text;
  bool all = true;
  for (int id = 1; id <= kAcceptanceCriteria; ++id) {
    if (only != 0 && id != only) continue;
    const CriterionOutcome r = run_criterion(id);
    all = all && r.pass;
    text << format_outcome(r) << "\n";
  }
  o.text = text.str();
  o.exit_code = all ? kExitOk : kExitFailure;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Injective and projective norms, maximal vectors and the entanglement norm"};
  app.require_subcommand(1);
  Common common;
  std::string file;
  std::string dims;
  std::string out;
  bool search = false;
  int k = 1;
  double theta = 0.5;
  std::size_t base = 4;
  int criterion = 0;
  std::function<Outcome()> action;

  auto file_command = [&](const char* name, const char* help, Outcome (*fn)(const std::string&, const Common&)) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("FILE", file, "State file")->required();
    add_common(sub, common);
    sub->callback([&, fn] { action = [&, fn] { return fn(file, common); }; });
  };
  file_command("inj-norm", "Injective norm bracket and nearest product vector", inj_norm);
  file_command("proj-norm", "Projective norm bracket and product decomposition", proj_norm);
  file_command("distance", "Distance to the decomposable vectors", distance);
  file_command("is-maximal", "Maximality verdict with injective, projective and distance evidence", is_maximal_cmd);
  file_command("entanglement", "Entanglement-norm bracket of a state or density file", entanglement_cmd);
  file_command("classify", "Separable / entangled / maximally entangled verdict with certificate", classify_cmd);

  auto* make = app.add_subcommand("make-maximal", "Write a maximal vector as a state file");
  make->add_option("--dims", dims, "n1,...,nN")->required();
  make->add_option("-o,--output", out, "Output state file (stdout when omitted)");
  add_common(make, common, false);
  make->callback([&] { action = [&] { return make_maximal_cmd(dims, out, common); }; });

  auto* radius = app.add_subcommand("inner-radius", "Inner radius of the convex hull of the decomposable vectors");
  radius->add_option("--dims", dims, "n1,...,nN")->required();
  radius->add_flag("--search", search, "Bracket by search even when the closed form applies");
  add_common(radius, common, false);
  radius->callback([&] { action = [&] { return inner_radius_cmd(dims, search, common); }; });

  auto* demo = app.add_subcommand("demo-divergence", "Truncations of a unit vector with infinite projective norm");
  demo->add_option("--k", k, "Number of blocks K")->required()->check(CLI::PositiveNumber);
  demo->add_option("--theta-base", theta, "theta_k = theta_base^k");
  demo->add_option("--dim-base", base, "n_k = dim_base^k");
  add_common(demo, common, false);
  demo->callback([&] { action = [&] { return divergence_cmd(k, theta, base, common); }; });

  auto* self = app.add_subcommand("selftest", "Run the acceptance suite");
  self->add_option("--criterion", criterion, "Run only this criterion")->check(CLI::Range(1, kAcceptanceCriteria));
  self->callback([&] { action = [&] { return selftest(criterion); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  Outcome o;
  try {
    o = action();
  } catch (const UnsupportedShapeError& e) {
    std::cerr << "unsupported shape: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }

  if (!o.text.empty()) {
    std::cout << o.text << std::flush;
    return o.exit_code;
  }
  o.report["options"] = common.echo();
  if (!common.csv.empty()) {
    std::ofstream f(common.csv, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write " << common.csv << "\n";
      return kExitValidation;
    }
    f << cli::render_csv(o.csv);
  }
  std::cout << o.report.dump(2) << "\n";
  if (common.strict && o.undecided) return kExitUndecided;
  return o.exit_code;
}
