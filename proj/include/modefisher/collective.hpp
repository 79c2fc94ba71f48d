#pragma once

#include <string>

#include "modefisher/fock.hpp"
#include "modefisher/mode_frame.hpp"

namespace modefisher {

/// Unit rotation axis.  Inputs within 1e-6 of unit norm are renormalized,
/// anything else throws std::domain_error.
class Direction {
 public:
  Direction(double nx, double ny, double nz);

  static Direction x() { return {1.0, 0.0, 0.0}; }
  static Direction y() { return {0.0, 1.0, 0.0}; }
  static Direction z() { return {0.0, 0.0, 1.0}; }
  // (cos phi, sin phi, 0)
  static Direction in_plane(double phi);

  double nx() const { return nx_; }
  double ny() const { return ny_; }
  double nz() const { return nz_; }
  // nx^2 + ny^2
  double transverse_weight() const;

 private:
  double nx_, ny_, nz_;
};

struct BoseHubbardCouplings {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double u = 0.0;
  double j = 0.0;
};

/// Dense Hermitian operator on the N-particle sector, tagged with the frame
/// whose Fock basis the matrix refers to.
struct CollectiveObservable {
  Matrix matrix;
  std::string label;
  ModeFrame frame;

  int n_particles() const { return static_cast<int>(matrix.rows()) - 1; }
  CollectiveObservable in_frame(const ModeFrame& target) const;
};

struct SchwingerTriple {
  CollectiveObservable jx, jy, jz;
};

/// Jx, Jy, Jz from J+ = a1^dag a2, with <k+1|J+|k> = sqrt((k+1)(N-k)) and
/// Jz = diag((2k - N)/2).
SchwingerTriple schwinger(int n_particles);

/// J_n = nx Jx + ny Jy + nz Jz.
CollectiveObservable direction_generator(int n_particles, const Direction& n);

/// max over the three su(2) relations of max|[Ja, Jb] - i Jc|.
double commutator_residual(int n_particles);

/// max|Jx^2 + Jy^2 + Jz^2 - (N/2)(N/2 + 1) I|.
double casimir_residual(int n_particles);

/// eps1 n1 + eps2 n2 + U (n1^2 + n2^2) - J (a1^dag a2 + a1 a2^dag).
CollectiveObservable bose_hubbard(int n_particles, const BoseHubbardCouplings& c);

/// Throws std::invalid_argument on dimension or frame mismatch.
Complex expectation(const SectorState& state, const CollectiveObservable& obs);

}  // namespace modefisher
