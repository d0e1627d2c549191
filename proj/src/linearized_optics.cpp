#include "stokes_lab/linearized_optics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "stokes_lab/errors.hpp"
#include "stokes_lab/jones.hpp"

namespace stokes_lab::gaussian {

namespace {

constexpr Complex kI{0.0, 1.0};

Eigen::Matrix2cd stokes_kernel(int j) {
  Eigen::Matrix2cd k = Eigen::Matrix2cd::Zero();
  switch (j) {
    case 0: k(0, 0) = 1.0; k(1, 1) = 1.0; break;
    case 1: k(0, 0) = 1.0; k(1, 1) = -1.0; break;
    case 2: k(0, 1) = 1.0; k(1, 0) = 1.0; break;
    case 3: k(0, 1) = -kI; k(1, 0) = kI; break;
    default: throw InvalidArgument("Stokes index must be 0..3");
  }
  return k;
}

void check_single_mode_covariance(const ModeLabel& label, const Eigen::Matrix2d& c) {
  std::ostringstream msg;
  if (!c.allFinite() || std::abs(c(0, 1) - c(1, 0)) > 1e-12 || c(0, 0) <= 0.0 || c(1, 1) <= 0.0) {
    msg << "mode " << label.str() << ": quadrature covariance must be symmetric with positive variances";
    throw InvalidArgument(msg.str());
  }
  if (c.determinant() < 1.0 - 1e-9) {
    msg << "mode " << label.str() << ": quadrature covariance violates the uncertainty bound (det = "
        << c.determinant() << " < 1)";
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

void GaussianBeamSet::add_mode(const ModeLabel& label, Complex amplitude, const Eigen::Matrix2d& cov) {
  if (find(label)) throw InvalidArgument("duplicate mode " + label.str());
  if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag())) {
    throw InvalidArgument("mode " + label.str() + ": amplitude must be finite");
  }
  check_single_mode_covariance(label, cov);

  const Eigen::Index m = static_cast<Eigen::Index>(labels_.size());
  labels_.push_back(label);
  Eigen::VectorXcd amps(m + 1);
  amps.head(m) = amplitudes_;
  amps(m) = amplitude;
  amplitudes_ = std::move(amps);

  auto extend = [m](const Eigen::MatrixXd& old, const Eigen::Matrix2d& block) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * m + 2, 2 * m + 2);
    out.topLeftCorner(2 * m, 2 * m) = old;
    out.bottomRightCorner(2, 2) = block;
    return out;
  };
  covariance_ = extend(covariance_, cov);
  input_covariance_ = extend(input_covariance_, cov);
  transfer_ = extend(transfer_, Eigen::Matrix2d::Identity());
}

std::optional<std::size_t> GaussianBeamSet::find(const ModeLabel& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t GaussianBeamSet::index_of(const ModeLabel& label) const {
  if (auto i = find(label)) return *i;
  throw InvalidArgument("unknown mode " + label.str());
}

Eigen::Matrix2d GaussianBeamSet::mode_covariance(const ModeLabel& label) const {
  const auto i = static_cast<Eigen::Index>(index_of(label));
  return covariance_.block<2, 2>(2 * i, 2 * i);
}

Eigen::MatrixXd GaussianBeamSet::covariance_of(std::span<const ModeLabel> labels) const {
  const auto n = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd out(2 * n, 2 * n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto i = static_cast<Eigen::Index>(index_of(labels[static_cast<std::size_t>(r)]));
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto j = static_cast<Eigen::Index>(index_of(labels[static_cast<std::size_t>(c)]));
      out.block<2, 2>(2 * r, 2 * c) = covariance_.block<2, 2>(2 * i, 2 * j);
    }
  }
  return out;
}

void GaussianBeamSet::validate() const {
  const double scale = std::max(1.0, covariance_.cwiseAbs().maxCoeff());
  if ((covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgument("covariance matrix is not symmetric");
  }
  if (covariance_.size() == 0) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12 * scale) {
    throw InvalidArgument("covariance matrix is not positive semidefinite");
  }
}

void GaussianBeamSet::transform(std::vector<ModeLabel> labels, Eigen::VectorXcd amplitudes,
                                const Eigen::MatrixXd& step) {
  labels_ = std::move(labels);
  amplitudes_ = std::move(amplitudes);
  transfer_ = (step * transfer_).eval();
  covariance_ = transfer_ * input_covariance_ * transfer_.transpose();
  covariance_ = 0.5 * (covariance_ + covariance_.transpose()).eval();
}

GaussianBeamSet from_squeezed_beam(double alpha, double v_plus, double v_minus, const std::string& beam) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("primary beam amplitude alpha must be > 0");
  if (!(v_plus > 0.0) || !(v_minus > 0.0)) throw InvalidArgument("quadrature variances must be positive");
  GaussianBeamSet beams;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  cov(0, 0) = v_plus;
  cov(1, 1) = v_minus;
  beams.add_mode({beam, "x"}, alpha, cov);
  beams.add_mode({beam, "y"}, alpha, cov);
  return beams;
}

// ---------------------------------------------------------------------------

LinearElement::LinearElement(Kind kind, Eigen::MatrixXcd matrix) : kind_(kind), matrix_(std::move(matrix)) {
  if (!(jones::unitarity_residual(matrix_) <= 1e-12)) throw InvalidArgument("element mode matrix is not unitary");
}

LinearElement LinearElement::identity(int arity) {
  if (arity < 1) throw InvalidArgument("identity element needs at least one mode");
  return {Kind::identity, Eigen::MatrixXcd::Identity(arity, arity)};
}
LinearElement LinearElement::rotation(double angle) { return {Kind::rotation, jones::rotation(angle)}; }
LinearElement LinearElement::rotation45() { return {Kind::rotation, jones::rotation45()}; }
LinearElement LinearElement::quarter_wave_plate() { return {Kind::quarter_wave_plate, jones::quarter_wave_plate()}; }
LinearElement LinearElement::s3_analyzer() { return {Kind::s3_analyzer, jones::s3_analyzer()}; }
LinearElement LinearElement::polarizing_beam_splitter() { return {Kind::pbs, jones::polarizing_beam_splitter()}; }
LinearElement LinearElement::beam_splitter(double transmittance, double phase) {
  return {Kind::beam_splitter, jones::beam_splitter(transmittance, phase)};
}
LinearElement LinearElement::epr_beam_splitter() { return {Kind::beam_splitter, jones::epr_beam_splitter()}; }

Eigen::MatrixXd quadrature_action(const Eigen::MatrixXcd& u) {
  const Eigen::Index n = u.rows();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      const double a = u(i, j).real();
      const double b = u(i, j).imag();
      r(2 * i, 2 * j) = a;
      r(2 * i, 2 * j + 1) = -b;
      r(2 * i + 1, 2 * j) = b;
      r(2 * i + 1, 2 * j + 1) = a;
    }
  }
  return r;
}

GaussianBeamSet apply_element(const GaussianBeamSet& beams, const LinearElement& element,
                              std::span<const ModeLabel> targets, std::span<const ModeLabel> outputs) {
  const auto arity = static_cast<std::size_t>(element.arity());
  if (targets.size() != arity) {
    std::ostringstream msg;
    msg << "element acts on " << arity << " modes but " << targets.size() << " targets were given";
    throw InvalidArgument(msg.str());
  }
  if (!outputs.empty() && outputs.size() != arity) throw InvalidArgument("output labels must match the element arity");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      if (targets[i] == targets[j]) throw InvalidArgument("repeated target mode " + targets[i].str());
    }
  }

  GaussianBeamSet in = beams;
  for (const auto& t : targets) {
    if (in.find(t)) continue;
    if (!element.accepts_vacuum_ports()) throw InvalidArgument("unknown mode " + t.str());
    in.add_mode(t, 0.0);
  }

  const auto m = static_cast<Eigen::Index>(in.mode_count());
  std::vector<Eigen::Index> where(arity);
  for (std::size_t k = 0; k < arity; ++k) where[k] = static_cast<Eigen::Index>(in.index_of(targets[k]));

  Eigen::MatrixXcd full = Eigen::MatrixXcd::Identity(m, m);
  for (std::size_t r = 0; r < arity; ++r) {
    for (std::size_t c = 0; c < arity; ++c) {
      full(where[r], where[c]) = element.matrix()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }

  std::vector<ModeLabel> labels = in.modes();
  if (!outputs.empty()) {
    for (std::size_t k = 0; k < arity; ++k) labels[static_cast<std::size_t>(where[k])] = outputs[k];
    for (std::size_t i = 0; i < labels.size(); ++i) {
      for (std::size_t j = i + 1; j < labels.size(); ++j) {
        if (labels[i] == labels[j]) throw InvalidArgument("output label " + labels[i].str() + " already in use");
      }
    }
  }

  const Eigen::VectorXcd amps = full * in.amplitudes();
  in.transform(std::move(labels), amps, quadrature_action(full));
  return in;
}

// ---------------------------------------------------------------------------

LinearForm linearize(const GaussianBeamSet& beams, std::span<const ModeLabel> modes, const Eigen::MatrixXcd& kernel) {
  const auto n = static_cast<Eigen::Index>(modes.size());
  if (kernel.rows() != n || kernel.cols() != n) throw InvalidArgument("kernel size does not match the mode list");
  if ((kernel - kernel.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw InvalidArgument("kernel must be Hermitian");

  Eigen::VectorXcd alpha(n);
  std::vector<Eigen::Index> where(modes.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    where[static_cast<std::size_t>(k)] = static_cast<Eigen::Index>(beams.index_of(modes[static_cast<std::size_t>(k)]));
    alpha(k) = beams.amplitudes()(where[static_cast<std::size_t>(k)]);
  }
  // delta(a_j^dag a_k) = alpha_j^* da_k + alpha_k da_j^dag, and
  // beta^* da + beta da^dag = Re(beta) dX+ + Im(beta) dX-.
  const Eigen::VectorXcd beta = kernel * alpha;
  LinearForm f;
  f.mean = alpha.dot(beta).real();
  f.gradient = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(beams.mode_count()));
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = where[static_cast<std::size_t>(k)];
    f.gradient(2 * i) += beta(k).real();
    f.gradient(2 * i + 1) += beta(k).imag();
  }
  return f;
}

LinearForm linearized_stokes(const GaussianBeamSet& beams, const ModeLabel& x, const ModeLabel& y, int j) {
  const ModeLabel pair[2] = {x, y};
  return linearize(beams, pair, stokes_kernel(j));
}

double variance(const GaussianBeamSet& beams, const LinearForm& f) {
  const Eigen::VectorXd h = beams.transfer().transpose() * f.gradient;
  return h.dot(beams.input_covariance() * h);
}

double covariance(const GaussianBeamSet& beams, const LinearForm& f, const LinearForm& g) {
  const Eigen::VectorXd hf = beams.transfer().transpose() * f.gradient;
  const Eigen::VectorXd hg = beams.transfer().transpose() * g.gradient;
  return hf.dot(beams.input_covariance() * hg);
}

StokesSummary stokes_linearized(const GaussianBeamSet& beams, const ModeLabel& x, const ModeLabel& y) {
  const Complex ax = beams.amplitude(x);
  const Complex ay = beams.amplitude(y);
  const double tol = 1e-12 * std::max(1.0, std::abs(ax));
  if (std::abs(ax.imag()) > tol || std::abs(ay.imag()) > tol || std::abs(ax - ay) > tol) {
    std::ostringstream msg;
    msg << "linearized Stokes formulas need equal real amplitudes on " << x.str() << " and " << y.str()
        << " (got " << ax << ", " << ay << "); rotate the frame first";
    throw UnsupportedFrame(msg.str());
  }
  StokesSummary s;
  for (int j = 0; j < 4; ++j) {
    const auto f = linearized_stokes(beams, x, y, j);
    s.mean[j] = f.mean;
    s.variance[j] = variance(beams, f);
  }
  for (int j = 1; j <= 3; ++j) s.second_moment[j - 1] = s.variance[j] + s.mean[j] * s.mean[j];
  s.poincare_lhs = s.second_moment[0] + s.second_moment[1] + s.second_moment[2];
  s.poincare_rhs = s.variance[0] + s.mean[0] * s.mean[0] + 2.0 * s.mean[0];
  return s;
}

StokesSummary stokes_linearized(const GaussianBeamSet& beams, const std::string& beam) {
  return stokes_linearized(beams, {beam, "x"}, {beam, "y"});
}

DetectionStats detect_difference(const GaussianBeamSet& beams, const ModeLabel& bright, const ModeLabel& dark) {
  const ModeLabel pair[2] = {bright, dark};
  const auto f = linearize(beams, pair, stokes_kernel(1));
  return {f.mean, variance(beams, f)};
}

DetectionStats detect_sum(const GaussianBeamSet& beams, const ModeLabel& first, const ModeLabel& second) {
  const ModeLabel pair[2] = {first, second};
  const auto f = linearize(beams, pair, stokes_kernel(0));
  return {f.mean, variance(beams, f)};
}

double linearization_validity(double alpha, double s) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
  return std::sinh(s) / alpha;
}

}  // namespace stokes_lab::gaussian
