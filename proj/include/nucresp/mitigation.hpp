// Copyright 2026 The nucresp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nucresp/error.hpp"
#include "nucresp/gates.hpp"
#include "nucresp/noisy_sim.hpp"
#include "nucresp/parallel.hpp"

namespace nucresp {

/// Value with a one-sigma uncertainty.
struct Estimate {
  double value = 0.0;
  double sigma = 0.0;
};

enum class Extrapolant { Linear, Richardson2, Exponential };

inline std::string to_string(Extrapolant e) {
  switch (e) {
    case Extrapolant::Linear: return "linear";
    case Extrapolant::Richardson2: return "richardson2";
    default: return "exponential";
  }
}

inline Extrapolant parse_extrapolant(std::string_view s) {
  if (s == "linear") return Extrapolant::Linear;
  if (s == "richardson2") return Extrapolant::Richardson2;
  if (s == "exponential") return Extrapolant::Exponential;
  throw std::invalid_argument("unknown extrapolant: " + std::string(s));
}

inline std::size_t min_points(Extrapolant e) { return e == Extrapolant::Richardson2 ? 3 : 2; }

struct MitigationConfig {
  std::vector<int> scales{1, 3};
  Extrapolant extrapolant = Extrapolant::Linear;
  std::uint64_t readout_calibration_shots = 100000;
  bool readout = true;

  void validate() const {
    detail::require(!scales.empty() && scales.front() == 1, "MitigationConfig: scales must start at 1");
    for (std::size_t i = 0; i < scales.size(); ++i) {
      detail::require(scales[i] >= 1 && scales[i] % 2 == 1, "MitigationConfig: scales must be odd and positive");
      if (i > 0) detail::require(scales[i] > scales[i - 1], "MitigationConfig: scales must be strictly increasing");
    }
    detail::require(scales.size() == 1 || scales.size() >= min_points(extrapolant),
                    "MitigationConfig: too few scales for the extrapolant");
    detail::require(readout_calibration_shots >= 1, "MitigationConfig: calibration needs shots");
  }
};

/// Noise-scaled measurement of one observable.
struct ScalePoint {
  int scale = 1;
  double value = 0.0;
  double sigma = 0.0;
};

struct MitigatedValue {
  Estimate bare;
  std::vector<ScalePoint> per_scale;
  Estimate mitigated;
};

/// Estimated confusion matrix C (row = prepared bit) with binomial errors.
struct ConfusionEstimate {
  Eigen::Matrix2d matrix = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero();
  std::uint64_t shots = 0;

  /// P(report 1 | prepared 0)
  double a() const { return matrix(0, 1); }
  /// P(report 0 | prepared 1)
  double b() const { return matrix(1, 0); }
  double sigma_a() const { return sigma(0, 1); }
  double sigma_b() const { return sigma(1, 0); }

  /// Exactly known confusion, no calibration error.
  static ConfusionEstimate exact(const Eigen::Matrix2d& m) { return {m, Eigen::Matrix2d::Zero(), 0}; }
};

/// Prepares |0> and |1> on one wire and reads each out `shots` times.
///
/// State preparation is taken as ideal; only the readout channel acts.
inline ConfusionEstimate calibrate_readout(const NoiseModel& noise, std::uint64_t shots, std::uint64_t seed,
                                           int wire = 0) {
  noise.validate();
  detail::require(shots >= 1, "calibrate_readout: at least one shot is required");
  const Eigen::Matrix2d c = noise.confusion(wire);
  const ShotRecord r0 = sample_bernoulli(c(0, 1), shots, derive_seed(seed, 0));
  const ShotRecord r1 = sample_bernoulli(c(1, 1), shots, derive_seed(seed, 1));
  ConfusionEstimate est;
  est.shots = shots;
  const double m = static_cast<double>(shots);
  const double a = r0.frequency("1"), b = r1.frequency("0");
  est.matrix << 1.0 - a, a, b, 1.0 - b;
  const double sa = std::sqrt(a * (1.0 - a) / m), sb = std::sqrt(b * (1.0 - b) / m);
  est.sigma << sa, sa, sb, sb;
  if (std::abs(1.0 - a - b) < 1e-6) throw std::invalid_argument("calibrate_readout: estimated confusion is singular");
  return est;
}

/// (n0 - n1) / M with binomial error sqrt((1 - m^2) / M).
///
/// When every shot agrees the binomial error vanishes; the error then uses
/// the add-one estimate p = 1 / (M + 2) so that it stays positive.
inline Estimate raw_estimate(const ShotRecord& r) {
  detail::require(r.shots >= 1, "raw_estimate: empty record");
  const double m = r.mean();
  const double n = static_cast<double>(r.shots);
  double var = std::max(0.0, 1.0 - m * m) / n;
  if (var == 0.0) {
    const double p = 1.0 / (n + 2.0);
    var = 4.0 * p * (1.0 - p) / n;
  }
  return {m, std::sqrt(var)};
}

/// Inverts the confusion for an observed mean and propagates both error sources.
inline Estimate mitigate_readout(double m_obs, double sigma_obs, const ConfusionEstimate& c) {
  const double a = c.a(), b = c.b();
  const double d = 1.0 - a - b;
  if (std::abs(d) < 1e-12) throw std::invalid_argument("mitigate_readout: confusion matrix is singular");
  const double m = (m_obs - b + a) / d;
  const double dm_da = (1.0 + m_obs - 2.0 * b) / (d * d);
  const double dm_db = (m_obs - 1.0 + 2.0 * a) / (d * d);
  const double var = sigma_obs * sigma_obs / (d * d) + dm_da * dm_da * c.sigma_a() * c.sigma_a() +
                     dm_db * dm_db * c.sigma_b() * c.sigma_b();
  return {m, std::sqrt(var)};
}

/// Readout-mitigated <sigma> from a shot record. The result is not clipped to [-1, 1].
inline Estimate mitigate_readout(const ShotRecord& r, const ConfusionEstimate& c) {
  const Estimate raw = raw_estimate(r);
  return mitigate_readout(raw.value, raw.sigma, c);
}

/// Repeats every entangling gate `scale` times (local unitary folding).
inline Circuit fold_circuit(const Circuit& c, int scale) {
  detail::require(scale >= 1 && scale % 2 == 1, "fold_circuit: scale must be a positive odd integer");
  Circuit out(c.n_qubits());
  for (const auto& g : c.gates()) {
    const int reps = g.is_two_qubit() ? scale : 1;
    for (int k = 0; k < reps; ++k) out.append(g);
  }
  out.set_layout(c.layout());
  return out;
}

/// Weighted least-squares fit in the scale variable, evaluated at zero.
inline Estimate zne_extrapolate(const std::vector<ScalePoint>& points, Extrapolant method) {
  detail::require(points.size() >= min_points(method), "zne_extrapolate: not enough points for the extrapolant");
  const bool all_zero = std::all_of(points.begin(), points.end(), [](const ScalePoint& p) { return p.sigma == 0.0; });
  const bool all_pos = std::all_of(points.begin(), points.end(), [](const ScalePoint& p) { return p.sigma > 0.0; });
  detail::require(all_zero || all_pos, "zne_extrapolate: uncertainties must be all positive or all zero");

  std::vector<double> y(points.size()), s(points.size());
  double sign = 1.0;
  if (method == Extrapolant::Exponential) {
    const bool pos = std::all_of(points.begin(), points.end(), [](const ScalePoint& p) { return p.value > 0.0; });
    const bool neg = std::all_of(points.begin(), points.end(), [](const ScalePoint& p) { return p.value < 0.0; });
    detail::require(pos || neg, "zne_extrapolate: exponential fit needs values of one sign");
    sign = pos ? 1.0 : -1.0;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (method == Extrapolant::Exponential) {
      y[i] = std::log(sign * points[i].value);
      s[i] = points[i].sigma / std::abs(points[i].value);
    } else {
      y[i] = points[i].value;
      s[i] = points[i].sigma;
    }
  }
  const int cols = method == Extrapolant::Richardson2 ? 3 : 2;
  const auto rows = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd w(rows), yv(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double x = points[static_cast<std::size_t>(i)].scale;
    for (int k = 0; k < cols; ++k) a(i, k) = std::pow(x, k);
    w(i) = all_zero ? 1.0 : 1.0 / (s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)]);
    yv(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::MatrixXd normal = a.transpose() * w.asDiagonal() * a;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  detail::require(lu.isInvertible(), "zne_extrapolate: scales do not determine the fit");
  const Eigen::VectorXd coef = lu.solve(a.transpose() * w.asDiagonal() * yv);
  if (all_zero) {
    const double resid = (a * coef - yv).cwiseAbs().maxCoeff();
    detail::require(resid < 1e-10, "zne_extrapolate: zero uncertainties with inconsistent values");
  }
  const double var0 = all_zero ? 0.0 : lu.inverse()(0, 0);
  if (method == Extrapolant::Exponential) {
    const double v0 = sign * std::exp(coef(0));
    return {v0, std::abs(v0) * std::sqrt(var0)};
  }
  return {coef(0), std::sqrt(var0)};
}

}  // namespace nucresp
