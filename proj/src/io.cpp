#include "modefisher/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace modefisher {
namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + " must be an integer");
  return j.get<int>();
}

std::vector<double> as_numbers(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<double>> as_rows(const json& j, const std::string& where, std::size_t dim) {
  if (!j.is_array() || j.size() != dim) fail(where + " must have " + std::to_string(dim) + " rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < dim; ++i) {
    auto row = as_numbers(j[i], where + "[" + std::to_string(i) + "]");
    if (row.size() != dim) fail(where + " must be " + std::to_string(dim) + "x" + std::to_string(dim));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix complex_matrix(const json& j, const char* re_key, const char* im_key, std::size_t dim) {
  const auto re = as_rows(require(j, re_key), re_key, dim);
  std::vector<std::vector<double>> im(dim, std::vector<double>(dim, 0.0));
  if (j.contains(im_key)) im = as_rows(j.at(im_key), im_key, dim);
  Matrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = Complex(re[r][c], im[r][c]);
  }
  return m;
}

json matrix_parts(const Matrix& m, bool imag) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(imag ? m(r, c).imag() : m(r, c).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ModeFrame frame_from_json(const json& j) {
  const json& kind = require(j, "kind");
  if (!kind.is_string()) fail("frame kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "spatial") return ModeFrame::spatial();
  if (k == "bogolubov") return bogolubov_frame(as_number(require(j, "phi"), "phi"));
  if (k == "unitary") return ModeFrame::custom(Eigen::Matrix2cd(complex_matrix(j, "u_re", "u_im", 2)));
  fail("unknown frame kind \"" + k + "\"");
}

json frame_to_json(const ModeFrame& frame) {
  switch (frame.kind()) {
    case FrameKind::spatial:
      return {{"kind", "spatial"}};
    case FrameKind::bogolubov:
      return {{"kind", "bogolubov"}, {"phi", frame.phi()}};
    case FrameKind::custom:
      break;
  }
  const Matrix u = frame.mixing();
  return {{"kind", "unitary"}, {"u_re", matrix_parts(u, false)}, {"u_im", matrix_parts(u, true)}};
}

SectorState state_from_json(const json& j) {
  if (!j.is_object()) fail("state document must be a JSON object");
  const int n = as_int(require(j, "N"), "N");
  if (n < 0) fail("N must be nonnegative");
  const json& kind_field = require(j, "kind");
  if (!kind_field.is_string()) fail("state kind must be a string");
  const std::string kind = kind_field.get<std::string>();
  const ModeFrame frame = j.contains("frame") ? frame_from_json(j.at("frame")) : ModeFrame::spatial();
  const auto dim = static_cast<std::size_t>(n) + 1;

  if (kind == "fock") {
    const int k = as_int(require(j, "k"), "k");
    return make_fock_state(k, n).with_frame(frame);
  }
  if (kind == "pure") {
    const auto re = as_numbers(require(j, "amplitudes_re"), "amplitudes_re");
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("amplitudes_im")) im = as_numbers(j.at("amplitudes_im"), "amplitudes_im");
    if (re.size() != dim || im.size() != dim) fail("amplitudes must have N+1 = " + std::to_string(dim) + " entries");
    Vector c(dim);
    for (std::size_t i = 0; i < dim; ++i) c(i) = Complex(re[i], im[i]);
    return SectorState::pure(std::move(c), frame);
  }
  if (kind == "diagonal") {
    const auto p = as_numbers(require(j, "p"), "p");
    if (p.size() != dim) fail("p must have N+1 = " + std::to_string(dim) + " entries");
    return SectorState::diagonal(p, frame);
  }
  if (kind == "density") return SectorState::density(complex_matrix(j, "rho_re", "rho_im", dim), frame);
  fail("unknown state kind \"" + kind + "\"");
}

json state_to_json(const SectorState& state) {
  json j{{"N", state.n_particles()}, {"frame", frame_to_json(state.frame())}};
  if (state.is_pure()) {
    const Vector& c = state.amplitudes();
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      re.push_back(c(i).real());
      im.push_back(c(i).imag());
    }
    j["kind"] = "pure";
    j["amplitudes_re"] = std::move(re);
    j["amplitudes_im"] = std::move(im);
  } else {
    const Matrix rho = state.density_matrix();
    j["kind"] = "density";
    j["rho_re"] = matrix_parts(rho, false);
    j["rho_im"] = matrix_parts(rho, true);
  }
  return j;
}

CollectiveObservable observable_from_json(const json& j) {
  if (!j.is_object()) fail("observable document must be a JSON object");
  const int n = as_int(require(j, "N"), "N");
  if (n < 0) fail("N must be nonnegative");
  const json& kind_field = require(j, "kind");
  if (!kind_field.is_string()) fail("observable kind must be a string");
  const std::string kind = kind_field.get<std::string>();
  if (kind == "jx") return schwinger(n).jx;
  if (kind == "jy") return schwinger(n).jy;
  if (kind == "jz") return schwinger(n).jz;
  if (kind == "jn") {
    const auto v = as_numbers(require(j, "n"), "n");
    if (v.size() != 3) fail("n must have three components");
    return direction_generator(n, Direction(v[0], v[1], v[2]));
  }
  if (kind == "bose_hubbard") {
    const json& c = require(j, "couplings");
    BoseHubbardCouplings bh;
    bh.eps1 = as_number(require(c, "eps1"), "eps1");
    bh.eps2 = as_number(require(c, "eps2"), "eps2");
    bh.u = as_number(require(c, "U"), "U");
    bh.j = as_number(require(c, "J"), "J");
    return bose_hubbard(n, bh);
  }
  fail("unknown observable kind \"" + kind + "\"");
}

json number_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

json report_to_json(const QfiReport& report) {
  return {{"fisher", number_or_null(report.fisher)},
          {"phase_bound", number_or_null(report.phase_bound)},
          {"n_particles", report.n_particles},
          {"classification", std::string(to_string(report.classification))},
          {"heisenberg_fraction", number_or_null(report.heisenberg_fraction)}};
}

json verdict_to_json(const SeparabilityVerdict& verdict) {
  json j{{"separable", verdict.separable},
         {"frame", frame_to_json(verdict.frame)},
         {"max_offdiagonal", number_or_null(verdict.max_offdiagonal)},
         {"witness", nullptr}};
  if (verdict.witness) {
    const auto& w = *verdict.witness;
    j["witness"] = {{"m", w.op.m},
                    {"n", w.op.n},
                    {"r", w.op.r},
                    {"s", w.op.s},
                    {"residual_re", w.residual.real()},
                    {"residual_im", w.residual.imag()}};
  }
  return j;
}

json run_to_json(const EstimationRun& run) {
  return {{"theta_true", run.theta_true},
          {"direction", {run.n.nx(), run.n.ny(), run.n.nz()}},
          {"trials", run.trials},
          {"shots_per_trial", run.shots_per_trial},
          {"seed", run.seed},
          {"estimates", run.estimates},
          {"empirical_std", number_or_null(run.empirical_std)},
          {"fisher", number_or_null(run.fisher)},
          {"classical_fisher", number_or_null(run.classical_fisher)},
          {"fisher_gap", number_or_null(run.fisher - run.classical_fisher)},
          {"qcrb", number_or_null(run.qcrb)},
          {"ccrb", number_or_null(run.ccrb)}};
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Direction parse_direction(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      fail("cannot parse direction component \"" + item + "\"");
    }
  }
  if (parts.size() != 3) fail("direction must be three comma-separated numbers, got \"" + text + "\"");
  return {parts[0], parts[1], parts[2]};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw MalformedJsonError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace modefisher
