#pragma once

#include <string>

#include "modefisher/linalg.hpp"

namespace modefisher {

enum class FrameKind { spatial, bogolubov, custom };

/// A unitary mixing of the two spatial modes.  Row i of `mixing()` gives the
/// new annihilation operator b_i = sum_j U(i,j) a_j.  Each mode frame defines
/// an algebraic bipartition: operators built from b_1 versus those from b_2.
class ModeFrame {
 public:
  ModeFrame();  // spatial

  static ModeFrame spatial();
  static ModeFrame bogolubov(double phi);
  // Throws std::invalid_argument when U is not unitary within `tol`.
  static ModeFrame custom(const Eigen::Matrix2cd& mixing, double tol = 1e-12);

  const Eigen::Matrix2cd& mixing() const { return mixing_; }
  FrameKind kind() const { return kind_; }
  double phi() const { return phi_; }
  std::string label() const;

  // Mixing of `*this` expressed relative to `from`: modes of `*this` written
  // in terms of the modes of `from`.
  ModeFrame relative_to(const ModeFrame& from) const;

  bool same_as(const ModeFrame& other, double tol = 1e-12) const;

 private:
  ModeFrame(Eigen::Matrix2cd mixing, FrameKind kind, double phi);

  Eigen::Matrix2cd mixing_;
  FrameKind kind_;
  double phi_;
};

/// b_1 = (a_1 + e^{-i phi} a_2)/sqrt2, b_2 = (a_1 - e^{-i phi} a_2)/sqrt2.
inline ModeFrame bogolubov_frame(double phi) { return ModeFrame::bogolubov(phi); }

}  // namespace modefisher
