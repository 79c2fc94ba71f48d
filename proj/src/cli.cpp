#include "modefisher/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "modefisher/frames.hpp"
#include "modefisher/io.hpp"
#include "modefisher/selftest.hpp"

namespace modefisher::cli {
namespace {

enum class Format { json, csv };

/// Parsed command line.  Exactly one subcommand is set.
struct RunConfig {
  std::string subcommand;
  Format format = Format::json;
  std::string state_path;
  std::string frame_path;
  std::string observable_path;
  std::string direction = "1,0,0";
  bool direction_given = false;
  std::string method = "spectral";
  bool witnesses = false;
  double theta = 0.3;
  int trials = 200;
  int shots = 10000;
  std::uint64_t seed = 42;
  double window_lo = 0.0;
  double window_hi = std::numbers::pi / 2;
  double tol = kDefaultTolerance;
  int n_particles = 1;
  std::optional<double> phi;
  std::string param = "theta";
  double from = 0.1;
  double to = 1.0;
  int steps = 10;
  std::string family;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const double kNaN = std::numeric_limits<double>::quiet_NaN();

double default_tolerance() {
  if (const char* env = std::getenv("MODEFISHER_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("MODEFISHER_TOL is not a positive number: ") + env);
    }
    return v;
  }
  return kDefaultTolerance;
}

json envelope(const std::string& command) { return {{"schema", kSchemaVersion}, {"command", command}}; }

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

void emit_csv(std::ostream& out, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
  out << "# schema=" << kSchemaVersion << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

// Validated against the user's tolerance, then cleaned up so the library's
// own checks see an exactly normalized, Hermitian, positive state.
SectorState condition_state(const SectorState& state, double tol) {
  require_valid(state, tol);
  if (validate_state(state).empty()) return state;
  if (state.is_pure()) {
    const Vector& c = state.amplitudes();
    return SectorState::pure(c / c.norm(), state.frame());
  }
  const Matrix rho = state.density_matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (rho + rho.adjoint()));
  const RealVector w = eig.eigenvalues().cwiseMax(0.0);
  Matrix clean = eig.eigenvectors() * w.asDiagonal() * eig.eigenvectors().adjoint();
  clean = 0.5 * (clean + clean.adjoint()) / w.sum();
  return SectorState::density(std::move(clean), state.frame());
}

SectorState load_state(const RunConfig& cfg) {
  if (cfg.state_path.empty()) throw UsageError("--state is required");
  return condition_state(state_from_json(read_json_file(cfg.state_path)), cfg.tol);
}

std::optional<std::vector<double>> spatial_diagonal(const SectorState& state, double tol) {
  const Matrix rho = transform_state(state, ModeFrame::spatial()).density_matrix();
  if (max_offdiagonal(rho) > tol) return std::nullopt;
  std::vector<double> p(rho.rows());
  for (Eigen::Index k = 0; k < rho.rows(); ++k) p[k] = rho(k, k).real();
  return p;
}

double closed_form_for(const SectorState& state, const Direction& n, double tol) {
  require_valid(state, tol);
  const auto p = spatial_diagonal(state, tol);
  if (!p) {
    throw std::invalid_argument("closed-form QFI requires a state diagonal in the spatial Fock basis");
  }
  return qfi_diagonal_closed_form(*p, state.n_particles(), n);
}

std::vector<std::string> report_row(const std::string& method, const QfiReport& r) {
  return {method, format_number(r.fisher), format_number(r.phase_bound), std::to_string(r.n_particles),
          std::string(to_string(r.classification)), format_number(r.heisenberg_fraction)};
}

int cmd_qfi(const RunConfig& cfg, std::ostream& out) {
  const SectorState state = load_state(cfg);
  const int n = state.n_particles();

  std::optional<Direction> dir;
  CollectiveObservable generator;
  if (!cfg.observable_path.empty()) {
    if (cfg.direction_given) throw UsageError("--direction and --observable are mutually exclusive");
    generator = observable_from_json(read_json_file(cfg.observable_path));
  } else {
    dir = parse_direction(cfg.direction);
    generator = direction_generator(n, *dir);
  }
  if (generator.n_particles() != n) throw std::invalid_argument("observable N does not match state N");
  generator = generator.in_frame(state.frame());

  std::vector<std::pair<std::string, double>> values;
  if (cfg.method == "spectral" || cfg.method == "both") values.emplace_back("spectral", qfi_spectral(state, generator));
  if (cfg.method == "closed-form" || cfg.method == "both") {
    if (!dir) throw std::invalid_argument("closed-form QFI requires --direction");
    values.emplace_back("closed-form", closed_form_for(state, *dir, cfg.tol));
  }

  if (cfg.format == Format::csv) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [method, f] : values) rows.push_back(report_row(method, classify(f, n)));
    emit_csv(out, {"method", "fisher", "phase_bound", "n_particles", "classification", "heisenberg_fraction"}, rows);
    return kExitOk;
  }
  json j = envelope("qfi");
  j["N"] = n;
  j["generator"] = generator.label;
  if (dir) j["direction"] = {dir->nx(), dir->ny(), dir->nz()};
  json results = json::array();
  for (const auto& [method, f] : values) {
    json r = report_to_json(classify(f, n));
    r["method"] = method;
    results.push_back(std::move(r));
  }
  j["results"] = std::move(results);
  j["fisher"] = values.front().second;
  emit_json(out, j);
  return kExitOk;
}

int cmd_separability(const RunConfig& cfg, std::ostream& out) {
  const SectorState state = load_state(cfg);
  const ModeFrame frame = cfg.frame_path.empty() ? ModeFrame::spatial() : frame_from_json(read_json_file(cfg.frame_path));
  const auto verdict = is_separable(state, frame, cfg.tol);

  json j = envelope("separability");
  j.update(verdict_to_json(verdict));
  j["tolerance"] = cfg.tol;
  std::vector<std::vector<std::string>> witness_rows;
  if (cfg.witnesses) {
    const SectorState local = transform_state(state, frame);
    json list = json::array();
    for (const auto& op : witness_monomials(local.n_particles())) {
      const Complex res = factorization_residual(local, op);
      if (std::abs(res) <= cfg.tol) continue;
      list.push_back({{"m", op.m}, {"n", op.n}, {"r", op.r}, {"s", op.s},
                      {"residual_re", res.real()}, {"residual_im", res.imag()}});
      witness_rows.push_back({std::to_string(op.m), std::to_string(op.n), std::to_string(op.r),
                              std::to_string(op.s), format_number(res.real()), format_number(res.imag())});
    }
    j["nonzero_witnesses"] = std::move(list);
    const auto sq = spin_squeezing_witness(state);
    j["spin_squeezing"] = {{"lhs", sq.lhs}, {"rhs", sq.rhs}, {"violated", sq.violated},
                           {"identical_particle_caveat", sq.identical_particle_caveat}};
  }
  if (cfg.format == Format::csv) {
    if (cfg.witnesses) {
      emit_csv(out, {"m", "n", "r", "s", "residual_re", "residual_im"}, witness_rows);
    } else {
      emit_csv(out, {"separable", "frame", "max_offdiagonal"},
               {{verdict.separable ? "true" : "false", verdict.frame.label(), format_number(verdict.max_offdiagonal)}});
    }
    return kExitOk;
  }
  emit_json(out, j);
  return kExitOk;
}

int cmd_rotate(const RunConfig& cfg, std::ostream& out) {
  const SectorState state = load_state(cfg);
  const Direction dir = parse_direction(cfg.direction);
  const PhaseModel model(state, dir);
  const auto p = model.probabilities(cfg.theta);
  if (cfg.format == Format::csv) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t m = 0; m < p.size(); ++m) rows.push_back({std::to_string(m), format_number(p[m])});
    emit_csv(out, {"m", "probability"}, rows);
    return kExitOk;
  }
  json j = envelope("rotate");
  j["theta"] = cfg.theta;
  j["direction"] = {dir.nx(), dir.ny(), dir.nz()};
  j["state"] = state_to_json(model.rotated(cfg.theta));
  j["probabilities"] = p;
  emit_json(out, j);
  return kExitOk;
}

EstimationConfig estimation_config(const RunConfig& cfg) {
  EstimationConfig ec;
  ec.trials = cfg.trials;
  ec.shots = cfg.shots;
  ec.seed = cfg.seed;
  ec.window_lo = cfg.window_lo;
  ec.window_hi = cfg.window_hi;
  return ec;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  const SectorState state = load_state(cfg);
  const Direction dir = parse_direction(cfg.direction);
  const EstimationRun run = monte_carlo_estimate(state, dir, cfg.theta, estimation_config(cfg));
  if (cfg.format == Format::csv) {
    emit_csv(out,
             {"theta_true", "trials", "shots_per_trial", "seed", "fisher", "classical_fisher", "qcrb", "ccrb",
              "empirical_std"},
             {{format_number(run.theta_true), std::to_string(run.trials), std::to_string(run.shots_per_trial),
               std::to_string(run.seed), format_number(run.fisher), format_number(run.classical_fisher),
               format_number(run.qcrb), format_number(run.ccrb), format_number(run.empirical_std)}});
    return kExitOk;
  }
  json j = envelope("estimate");
  j.update(run_to_json(run));
  emit_json(out, j);
  return kExitOk;
}

SectorState family_state(const std::string& family, int n) {
  if (n < 0) throw std::domain_error("N must be nonnegative");
  if (family == "twin-fock") return make_fock_state(n / 2, n);
  if (family == "pole") return make_fock_state(n, n);
  throw UsageError("unknown --family \"" + family + "\" (expected twin-fock or pole)");
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  static const std::vector<std::string> params{"theta", "phi", "shots", "N"};
  if (std::find(params.begin(), params.end(), cfg.param) == params.end()) {
    throw UsageError("unknown --param \"" + cfg.param + "\" (expected theta, phi, shots or N)");
  }
  if (cfg.steps < 1) throw std::domain_error("--steps must be >= 1");
  if (cfg.trials < 0) throw std::domain_error("--trials must be >= 0");
  if (cfg.param == "N" && cfg.family.empty()) throw UsageError("--param N requires --family");
  if (cfg.param != "N" && !cfg.family.empty() && !cfg.state_path.empty()) {
    throw UsageError("--family and --state are mutually exclusive");
  }

  std::vector<double> values;
  for (int i = 0; i < cfg.steps; ++i) {
    double v = cfg.steps == 1 ? cfg.from : cfg.from + (cfg.to - cfg.from) * i / (cfg.steps - 1);
    if (cfg.param == "N" || cfg.param == "shots") v = std::round(v);
    values.push_back(v);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::optional<SectorState> fixed;
  if (cfg.param != "N") fixed = cfg.family.empty() ? load_state(cfg) : family_state(cfg.family, cfg.n_particles);

  const std::vector<std::string> header{"param", "F_closed", "F_spectral", "F_cl", "qcrb", "ccrb", "empirical_std"};
  std::vector<std::vector<double>> rows;
  for (double v : values) {
    SectorState state = fixed ? *fixed : family_state(cfg.family, static_cast<int>(v));
    require_valid(state, cfg.tol);
    Direction dir = cfg.param == "phi" ? Direction::in_plane(v) : parse_direction(cfg.direction);
    const double theta = cfg.param == "theta" ? v : cfg.theta;
    EstimationConfig ec = estimation_config(cfg);
    if (cfg.param == "shots") ec.shots = static_cast<int>(v);
    if (ec.shots < 1) throw std::domain_error("shots must be >= 1");

    const int n = state.n_particles();
    const auto generator = direction_generator(n, dir).in_frame(state.frame());
    const double f_spec = qfi_spectral(state, generator);
    const auto p = spatial_diagonal(state, cfg.tol);
    const double f_closed = p ? qfi_diagonal_closed_form(*p, n, dir) : kNaN;
    const double f_cl = classical_fisher(state, dir, theta);
    const double s = ec.shots;
    const double inf = std::numeric_limits<double>::infinity();
    const double qcrb = f_spec > 0 ? 1.0 / std::sqrt(s * f_spec) : inf;
    const double ccrb = f_cl > 0 ? 1.0 / std::sqrt(s * f_cl) : inf;
    double emp = kNaN;
    if (cfg.trials > 0) {
      ec.trials = cfg.trials;
      emp = monte_carlo_estimate(state, dir, theta, ec).empirical_std;
    }
    rows.push_back({v, f_closed, f_spec, f_cl, qcrb, ccrb, emp});
  }

  if (cfg.format == Format::csv) {
    std::vector<std::vector<std::string>> text;
    for (const auto& row : rows) {
      std::vector<std::string> cells;
      for (double x : row) cells.push_back(format_number(x));
      text.push_back(std::move(cells));
    }
    emit_csv(out, header, text);
    return kExitOk;
  }
  json j = envelope("sweep");
  j["param"] = cfg.param;
  j["columns"] = header;
  json jrows = json::array();
  for (const auto& row : rows) {
    json r = json::array();
    for (double x : row) r.push_back(number_or_null(x));
    jrows.push_back(std::move(r));
  }
  j["rows"] = std::move(jrows);
  emit_json(out, j);
  return kExitOk;
}

int cmd_frames(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n_particles < 0) throw std::domain_error("--N must be nonnegative");
  if (!cfg.frame_path.empty() && cfg.phi) throw UsageError("--frame and --phi are mutually exclusive");
  const ModeFrame frame = !cfg.frame_path.empty() ? frame_from_json(read_json_file(cfg.frame_path))
                                                  : bogolubov_frame(cfg.phi.value_or(0.0));
  const Matrix v = frame_change_unitary(cfg.n_particles, frame);
  if (cfg.format == Format::csv) {
    std::vector<std::vector<std::string>> rows;
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      for (Eigen::Index c = 0; c < v.cols(); ++c) {
        rows.push_back({std::to_string(r), std::to_string(c), format_number(v(r, c).real()),
                        format_number(v(r, c).imag())});
      }
    }
    emit_csv(out, {"row", "col", "re", "im"}, rows);
    return kExitOk;
  }
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < v.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      rr.push_back(v(r, c).real());
      ii.push_back(v(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  json j = envelope("frames");
  j["N"] = cfg.n_particles;
  j["frame"] = frame_to_json(frame);
  j["v_re"] = std::move(re);
  j["v_im"] = std::move(im);
  j["unitarity_residual"] = unitarity_residual(v);
  emit_json(out, j);
  return kExitOk;
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
  const SelftestResult result = run_selftest();
  if (cfg.format == Format::csv) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : result.checks) rows.push_back({c.name, c.passed ? "pass" : "fail", c.detail});
    emit_csv(out, {"check", "status", "detail"}, rows);
  } else {
    json j = envelope("selftest");
    j["passed"] = result.passed();
    j["failed"] = result.failed();
    json checks = json::array();
    for (const auto& c : result.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = std::move(checks);
    emit_json(out, j);
  }
  return result.failed() == 0 ? kExitOk : kExitFailure;
}

int emit_error(std::ostream& out, std::ostream& err, const std::string& kind, const std::string& message) {
  json j{{"schema", kSchemaVersion}, {"error", {{"kind", kind}, {"message", message}}}};
  emit_json(out, j);
  err << "modefisher: " << message << "\n";
  return kExitValidation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Mode entanglement and quantum Fisher information for two-mode bosons", "modefisher"};
  app.require_subcommand(1, 1);

  const std::map<std::string, Format> formats{{"json", Format::json}, {"csv", Format::csv}};
  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format (json|csv)")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  };
  const auto add_tol = [&](CLI::App* sub) { sub->add_option("--tol", cfg.tol, "Tolerance override")->check(CLI::PositiveNumber); };
  const auto add_direction = [&](CLI::App* sub) {
    sub->add_option_function<std::string>(
        "--direction", [&](const std::string& d) { cfg.direction = d; cfg.direction_given = true; },
        "Rotation axis nx,ny,nz");
  };
  const auto add_estimation = [&](CLI::App* sub) {
    sub->add_option("--trials", cfg.trials, "Monte-Carlo trials M");
    sub->add_option("--shots", cfg.shots, "Shots per trial S");
    sub->add_option("--seed", cfg.seed, "Generator seed");
    sub->add_option("--window-lo", cfg.window_lo, "Lower end of the estimation window");
    sub->add_option("--window-hi", cfg.window_hi, "Upper end of the estimation window");
  };

  auto* qfi = app.add_subcommand("qfi", "Quantum Fisher information of a state");
  qfi->add_option("--state", cfg.state_path, "State JSON file")->required();
  add_direction(qfi);
  qfi->add_option("--observable", cfg.observable_path, "Observable JSON file used as generator");
  qfi->add_option("--method", cfg.method, "spectral|closed-form|both")
      ->check(CLI::IsMember({"spectral", "closed-form", "both"}));
  add_format(qfi);
  add_tol(qfi);

  auto* sep = app.add_subcommand("separability", "Separability with respect to a mode frame");
  sep->add_option("--state", cfg.state_path, "State JSON file")->required();
  sep->add_option("--frame", cfg.frame_path, "Frame JSON file (default spatial)");
  sep->add_flag("--witnesses", cfg.witnesses, "List nonzero witness monomials and the spin-squeezing test");
  add_format(sep);
  add_tol(sep);

  auto* rot = app.add_subcommand("rotate", "Apply exp(i theta J_n) and report counting probabilities");
  rot->add_option("--state", cfg.state_path, "State JSON file")->required();
  add_direction(rot);
  rot->add_option("--theta", cfg.theta, "Rotation angle");
  add_format(rot);
  add_tol(rot);

  auto* est = app.add_subcommand("estimate", "Monte-Carlo maximum-likelihood phase estimation");
  est->add_option("--state", cfg.state_path, "State JSON file")->required();
  add_direction(est);
  est->add_option("--theta", cfg.theta, "True phase");
  add_estimation(est);
  add_format(est);
  add_tol(est);

  auto* sweep = app.add_subcommand("sweep", "Scan one scalar parameter");
  sweep->add_option("--state", cfg.state_path, "State JSON file");
  sweep->add_option("--family", cfg.family, "Generated state family (twin-fock|pole)");
  sweep->add_option("--N", cfg.n_particles, "Particle number for --family when N is not swept");
  sweep->add_option("--param", cfg.param, "theta|phi|shots|N");
  sweep->add_option("--from", cfg.from, "First parameter value");
  sweep->add_option("--to", cfg.to, "Last parameter value");
  sweep->add_option("--steps", cfg.steps, "Number of parameter values");
  add_direction(sweep);
  sweep->add_option("--theta", cfg.theta, "Phase when theta is not swept");
  add_estimation(sweep);
  add_format(sweep);
  add_tol(sweep);

  auto* frames = app.add_subcommand("frames", "Print the Fock-basis change of a mode frame");
  frames->add_option("--N", cfg.n_particles, "Particle number")->required();
  frames->add_option("--frame", cfg.frame_path, "Frame JSON file");
  frames->add_option("--phi", cfg.phi, "Bogolubov phase (default 0)");
  add_format(frames);

  auto* self = app.add_subcommand("selftest", "Run the built-in invariant checks");
  add_format(self);

  try {
    cfg.tol = default_tolerance();
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (cfg.subcommand == "qfi") return cmd_qfi(cfg, out);
    if (cfg.subcommand == "separability") return cmd_separability(cfg, out);
    if (cfg.subcommand == "rotate") return cmd_rotate(cfg, out);
    if (cfg.subcommand == "estimate") return cmd_estimate(cfg, out);
    if (cfg.subcommand == "sweep") return cmd_sweep(cfg, out);
    if (cfg.subcommand == "frames") return cmd_frames(cfg, out);
    return cmd_selftest(cfg, out);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return emit_error(out, err, "usage", e.what());
  } catch (const UsageError& e) {
    return emit_error(out, err, "usage", e.what());
  } catch (const NonIdentifiableError& e) {
    return emit_error(out, err, "non_identifiable", e.what());
  } catch (const MalformedJsonError& e) {
    return emit_error(out, err, "malformed_json", e.what());
  } catch (const json::exception& e) {
    return emit_error(out, err, "malformed_json", e.what());
  } catch (const std::domain_error& e) {
    return emit_error(out, err, "validation", e.what());
  } catch (const std::invalid_argument& e) {
    return emit_error(out, err, "validation", e.what());
  } catch (const std::exception& e) {
    err << "modefisher: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace modefisher::cli
