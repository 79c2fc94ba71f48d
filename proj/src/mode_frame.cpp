#include "modefisher/mode_frame.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace modefisher {

ModeFrame::ModeFrame() : ModeFrame(Eigen::Matrix2cd::Identity(), FrameKind::spatial, 0.0) {}

ModeFrame::ModeFrame(Eigen::Matrix2cd mixing, FrameKind kind, double phi)
    : mixing_(std::move(mixing)), kind_(kind), phi_(phi) {}

ModeFrame ModeFrame::spatial() { return ModeFrame(); }

ModeFrame ModeFrame::bogolubov(double phi) {
  const double h = 1.0 / std::sqrt(2.0);
  const Complex e = std::polar(1.0, -phi);
  Eigen::Matrix2cd u;
  u << h, h * e,
       h, -h * e;
  return ModeFrame(u, FrameKind::bogolubov, phi);
}

ModeFrame ModeFrame::custom(const Eigen::Matrix2cd& mixing, double tol) {
  const double residual = (mixing.adjoint() * mixing - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  if (!(residual <= tol)) {
    std::ostringstream msg;
    msg << "mode frame is not unitary: max|U^dag U - I| = " << residual << " > " << tol;
    throw std::invalid_argument(msg.str());
  }
  return ModeFrame(mixing, FrameKind::custom, 0.0);
}

std::string ModeFrame::label() const {
  switch (kind_) {
    case FrameKind::spatial:
      return "spatial";
    case FrameKind::bogolubov: {
      std::ostringstream s;
      s.precision(17);
      s << "bogolubov(" << phi_ << ")";
      return s.str();
    }
    case FrameKind::custom:
      break;
  }
  return "custom";
}

ModeFrame ModeFrame::relative_to(const ModeFrame& from) const {
  // c = U_this a and b = U_from a  =>  c = U_this U_from^dag b
  if (from.kind_ == FrameKind::spatial) return *this;
  if (same_as(from)) return ModeFrame::spatial();
  return ModeFrame(mixing_ * from.mixing_.adjoint(), FrameKind::custom, 0.0);
}

bool ModeFrame::same_as(const ModeFrame& other, double tol) const {
  return (mixing_ - other.mixing_).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace modefisher
