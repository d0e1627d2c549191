#include "stokes_lab/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "stokes_lab/errors.hpp"

namespace stokes_lab::entanglement {

using gaussian::GaussianBeamSet;
using gaussian::LinearForm;

void StokesFluctuationStats::validate() const {
  for (int k = 0; k < 3; ++k) {
    if (var_c[k] < -1e-12 || var_d[k] < -1e-12) throw InvalidArgument("negative fluctuation variance");
    if (std::abs(cross[k]) > std::sqrt(std::max(0.0, var_c[k] * var_d[k])) + 1e-9) {
      std::ostringstream msg;
      msg << "cross-correlation of S" << k + 1 << " violates Cauchy-Schwarz";
      throw InvalidArgument(msg.str());
    }
  }
}

StokesFluctuationStats fluctuation_stats(const GaussianBeamSet& beams, const BeamModes& c, const BeamModes& d) {
  StokesFluctuationStats st;
  for (int j = 1; j <= 3; ++j) {
    const LinearForm fc = gaussian::linearized_stokes(beams, c.x, c.y, j);
    const LinearForm fd = gaussian::linearized_stokes(beams, d.x, d.y, j);
    const auto k = static_cast<std::size_t>(j - 1);
    st.mean_c[k] = fc.mean;
    st.mean_d[k] = fd.mean;
    st.var_c[k] = gaussian::variance(beams, fc);
    st.var_d[k] = gaussian::variance(beams, fd);
    st.cross[k] = gaussian::covariance(beams, fd, fc);
    st.var_sum[k] = st.var_d[k] + st.var_c[k] + 2.0 * st.cross[k];
    st.var_diff[k] = st.var_d[k] + st.var_c[k] - 2.0 * st.cross[k];
    st.coherent_norm[k] = (fd.gradient + fc.gradient).squaredNorm();
    if (st.var_c[k] > 0.0) {
      const Eigen::VectorXd residual = fd.gradient - (st.cross[k] / st.var_c[k]) * fc.gradient;
      st.vcond[k] = gaussian::variance(beams, LinearForm{0.0, residual});
    } else {
      st.vcond[k] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  st.validate();
  return st;
}

double conditional_variance(double var_d, double var_c, double cross) {
  if (!(var_c > 0.0)) throw DegenerateConditioning("conditioning variance must be positive");
  return var_d - cross * cross / var_c;
}

EprResult epr_check(const StokesFluctuationStats& stats) {
  EprResult r;
  for (std::size_t k : {std::size_t{0}, std::size_t{2}}) {
    if (!(stats.var_c[k] > 0.0)) throw DegenerateConditioning("conditioning variance must be positive");
  }
  r.vcond_1 = stats.vcond[0];
  r.vcond_3 = stats.vcond[2];
  r.product = r.vcond_1 * r.vcond_3;
  r.bound = stats.mean_c[1] * stats.mean_c[1];
  r.entangled = r.product < r.bound * (1.0 - kBoundaryMargin);
  return r;
}

DuanResult duan_check(const StokesFluctuationStats& stats, int z, int w) {
  if (z < 1 || z > 3 || w < 1 || w > 3 || z == w) throw InvalidArgument("Duan pair needs two distinct indices in 1..3");
  auto pick = [&](int j, double& v, int& sign) {
    const auto k = static_cast<std::size_t>(j - 1);
    if (!(stats.coherent_norm[k] > 0.0)) throw DegenerateConditioning("coherent reference variance is zero");
    sign = stats.var_diff[k] < stats.var_sum[k] ? -1 : 1;
    v = (sign > 0 ? stats.var_sum[k] : stats.var_diff[k]) / stats.coherent_norm[k];
  };
  DuanResult r;
  r.z = z;
  r.w = w;
  pick(z, r.v_z, r.sign_z);
  pick(w, r.v_w, r.sign_w);
  r.sum = r.v_z + r.v_w;
  r.nonseparable = r.sum < 2.0 * (1.0 - kBoundaryMargin);
  r.squeezed_state_entangled = r.v_z < 1.0 - kBoundaryMargin && r.v_w < 1.0 - kBoundaryMargin;
  return r;
}

EntanglementReport evaluate(const StokesFluctuationStats& stats) {
  const EprResult e = epr_check(stats);
  const DuanResult d = duan_check(stats, 1, 3);
  EntanglementReport r;
  r.vcond_1 = e.vcond_1;
  r.vcond_3 = e.vcond_3;
  r.epr_product = e.product;
  r.epr_bound = e.bound;
  r.duan_sum = d.sum;
  r.v_s1 = d.v_z;
  r.v_s3 = d.v_w;
  r.epr = e.entangled;
  r.duan_nonseparable = d.nonseparable;
  r.squeezed_state_entangled = d.squeezed_state_entangled;
  r.sign_s1 = d.sign_z;
  r.sign_s3 = d.sign_w;
  return r;
}

double equal_squeezing_conditional_variance(double v_plus, double v_minus, double alpha) {
  if (!(v_plus > 0.0) || !(v_minus > 0.0)) throw InvalidArgument("quadrature variances must be positive");
  return 4.0 * alpha * alpha * v_plus * v_minus / (v_plus + v_minus);
}

std::vector<ThresholdRow> three_db_threshold_scan(std::span<const double> v_plus, std::span<const double> v_minus,
                                                  double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  std::vector<ThresholdRow> rows;
  rows.reserve(v_plus.size() * v_minus.size());
  for (double vp : v_plus) {
    for (double vm : v_minus) {
      ThresholdRow row;
      row.v_plus = vp;
      row.v_minus = vm;
      row.vcond = equal_squeezing_conditional_variance(vp, vm, alpha);
      row.ratio = 2.0 * vp * vm / (vp + vm);
      row.epr = row.ratio < 1.0 - kBoundaryMargin;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace stokes_lab::entanglement
