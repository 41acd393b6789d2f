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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nucresp/circuits.hpp"
#include "nucresp/counts.hpp"
#include "nucresp/error.hpp"
#include "nucresp/mitigation.hpp"
#include "nucresp/model.hpp"
#include "nucresp/noisy_sim.hpp"
#include "nucresp/oracle.hpp"
#include "nucresp/parallel.hpp"

namespace nucresp {

enum class SeriesVariant { Bare, ReadoutMitigated, Mitigated, ExactTrotter, Exact };

inline std::string to_string(SeriesVariant v) {
  switch (v) {
    case SeriesVariant::Bare: return "bare";
    case SeriesVariant::ReadoutMitigated: return "readout_mitigated";
    case SeriesVariant::Mitigated: return "mitigated";
    case SeriesVariant::ExactTrotter: return "exact_trotter";
    default: return "exact";
  }
}

/// Correlator values on a tau grid with separate real/imaginary errors.
struct CorrelatorSeries {
  MomentumVector q;
  TrotterOrdering ordering = TrotterOrdering::A1;
  SeriesVariant variant = SeriesVariant::Exact;
  std::vector<double> taus;
  std::vector<cplx> values;
  std::vector<double> sigma_re;
  std::vector<double> sigma_im;

  std::size_t size() const { return taus.size(); }

  void resize(std::size_t n) {
    taus.assign(n, 0.0);
    values.assign(n, 0.0);
    sigma_re.assign(n, 0.0);
    sigma_im.assign(n, 0.0);
  }

  void validate() const {
    const std::size_t n = taus.size();
    detail::ensure(values.size() == n && sigma_re.size() == n && sigma_im.size() == n,
                   "CorrelatorSeries: array lengths differ");
    for (std::size_t i = 0; i < n; ++i) detail::ensure(sigma_re[i] >= 0.0 && sigma_im[i] >= 0.0, "CorrelatorSeries: negative sigma");
  }
};

struct EstimationOptions {
  /// Shots per (term, basis, scale). Empty means exact expectation values.
  std::optional<std::uint64_t> shots;
  NoiseModel noise;
  MitigationConfig mitigation;
  int trotter_steps = 1;
  unsigned workers = 1;
  OptimizeOptions optimize;
};

/// Per-measurement record kept for audit output.
struct MeasurementRecord {
  std::size_t tau_index = 0;
  std::size_t term_index = 0;
  MeasureBasis basis = MeasureBasis::X;
  int scale = 1;
  Estimate raw;
  Estimate readout_mitigated;
};

struct CorrelatorEstimate {
  CorrelatorSeries bare;
  CorrelatorSeries readout_mitigated;
  CorrelatorSeries mitigated;
  ConfusionEstimate confusion;
  std::vector<MeasurementRecord> records;
};

/// Full-register start state: targets in psi, ancilla in |0>.
inline StateVector with_ancilla(const StateVector& targets) { return targets.tensor_above(StateVector(1)); }

/// Hadamard-test estimate of C(tau, q) = sum_w w <P_left(tau) P_right>.
///
/// Each term is measured in the X and Y ancilla bases at every noise scale.
/// Bare values use scale 1 without mitigation; readout-mitigated values
/// invert the calibrated confusion; mitigated values additionally
/// extrapolate over the noise scales. Terms with identity on both sides
/// contribute exactly 1.
inline CorrelatorEstimate estimate_correlator(const MomentumVector& q, TrotterOrdering ordering,
                                              const std::vector<double>& taus, const ModelParams& p,
                                              const StateVector& init, const EstimationOptions& opt,
                                              std::uint64_t seed) {
  opt.noise.validate();
  opt.mitigation.validate();
  detail::require(init.n_qubits() == kModelQubits, "estimate_correlator: initial state must live on the four targets");
  detail::require(!opt.shots || *opt.shots >= 1, "estimate_correlator: shots must be positive");
  const auto terms = correlator_terms(q, p);
  const auto& scales = opt.mitigation.scales;
  const StateVector start = with_ancilla(init);

  CorrelatorEstimate out;
  if (opt.shots && opt.mitigation.readout)
    out.confusion = calibrate_readout(opt.noise, opt.mitigation.readout_calibration_shots, derive_seed(seed, 0xCA11B),
                                      kAncilla);
  else
    out.confusion = ConfusionEstimate::exact(opt.noise.confusion(kAncilla));

  struct Task {
    std::size_t tau, term;
    MeasureBasis basis;
    std::size_t scale;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < taus.size(); ++i)
    for (std::size_t k = 0; k < terms.size(); ++k) {
      if (terms[k].left.is_identity() && terms[k].right.is_identity()) continue;
      for (MeasureBasis b : {MeasureBasis::X, MeasureBasis::Y})
        for (std::size_t s = 0; s < scales.size(); ++s) tasks.push_back({i, k, b, s});
    }

  out.records.resize(tasks.size());
  parallel_for(
      tasks.size(),
      [&](std::size_t idx) {
        const Task& t = tasks[idx];
        const auto& term = terms[t.term];
        const Circuit base = correlator_circuit(ordering, taus[t.tau], p, term.left, term.right, t.basis, Circuit(),
                                                opt.trotter_steps, opt.optimize);
        const Circuit c = fold_circuit(base, scales[t.scale]);
        const int wire = c.layout()[kAncilla];
        Eigen::Matrix2cd reduced;
        if (opt.noise.has_gate_noise()) reduced = reduced_qubit(run_noisy(c, DensityMatrix(start), opt.noise).matrix(), wire);
        else reduced = reduced_qubit(run_ideal(c, start), wire);

        MeasurementRecord rec{t.tau, t.term, t.basis, scales[t.scale], {}, {}};
        if (opt.shots) {
          const ShotRecord shots = sample_ancilla(reduced, MeasureBasis::Z, *opt.shots, opt.noise,
                                                  derive_seed(seed, t.tau, t.term, static_cast<int>(t.basis), scales[t.scale]),
                                                  wire);
          rec.raw = raw_estimate(shots);
        } else {
          const double e = pauli_expectation(reduced, MeasureBasis::Z);
          rec.raw = {1.0 - 2.0 * reported_one_probability(e, opt.noise.confusion(wire)), 0.0};
        }
        rec.readout_mitigated = opt.mitigation.readout ? mitigate_readout(rec.raw.value, rec.raw.sigma, out.confusion) : rec.raw;
        out.records[idx] = rec;
      },
      opt.workers);

  // Deterministic reduction in task order.
  std::map<std::tuple<std::size_t, std::size_t, int>, std::vector<const MeasurementRecord*>> grouped;
  for (const auto& r : out.records) grouped[{r.tau_index, r.term_index, static_cast<int>(r.basis)}].push_back(&r);

  for (CorrelatorSeries* s : {&out.bare, &out.readout_mitigated, &out.mitigated}) {
    s->q = q;
    s->ordering = ordering;
    s->resize(taus.size());
    s->taus = taus;
  }
  out.bare.variant = SeriesVariant::Bare;
  out.readout_mitigated.variant = SeriesVariant::ReadoutMitigated;
  out.mitigated.variant = SeriesVariant::Mitigated;

  std::vector<double> var_bare_re(taus.size()), var_bare_im(taus.size()), var_ro_re(taus.size()),
      var_ro_im(taus.size()), var_m_re(taus.size()), var_m_im(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const double w = terms[k].weight;
      if (terms[k].left.is_identity() && terms[k].right.is_identity()) {
        for (CorrelatorSeries* s : {&out.bare, &out.readout_mitigated, &out.mitigated}) s->values[i] += w;
        continue;
      }
      Estimate bare[2], ro[2], mit[2];
      for (int b = 0; b < 2; ++b) {
        const auto& recs = grouped.at({i, k, b});
        bare[b] = recs.front()->raw;
        ro[b] = recs.front()->readout_mitigated;
        if (scales.size() > 1) {
          std::vector<ScalePoint> pts;
          for (const auto* r : recs) pts.push_back({r->scale, r->readout_mitigated.value, r->readout_mitigated.sigma});
          mit[b] = zne_extrapolate(pts, opt.mitigation.extrapolant);
        } else {
          mit[b] = ro[b];
        }
      }
      // s = <X> - i <Y>
      out.bare.values[i] += w * cplx(bare[0].value, -bare[1].value);
      out.readout_mitigated.values[i] += w * cplx(ro[0].value, -ro[1].value);
      out.mitigated.values[i] += w * cplx(mit[0].value, -mit[1].value);
      var_bare_re[i] += w * w * bare[0].sigma * bare[0].sigma;
      var_bare_im[i] += w * w * bare[1].sigma * bare[1].sigma;
      var_ro_re[i] += w * w * ro[0].sigma * ro[0].sigma;
      var_ro_im[i] += w * w * ro[1].sigma * ro[1].sigma;
      var_m_re[i] += w * w * mit[0].sigma * mit[0].sigma;
      var_m_im[i] += w * w * mit[1].sigma * mit[1].sigma;
    }
    out.bare.sigma_re[i] = std::sqrt(var_bare_re[i]);
    out.bare.sigma_im[i] = std::sqrt(var_bare_im[i]);
    out.readout_mitigated.sigma_re[i] = std::sqrt(var_ro_re[i]);
    out.readout_mitigated.sigma_im[i] = std::sqrt(var_ro_im[i]);
    out.mitigated.sigma_re[i] = std::sqrt(var_m_re[i]);
    out.mitigated.sigma_im[i] = std::sqrt(var_m_im[i]);
  }
  out.bare.validate();
  out.readout_mitigated.validate();
  out.mitigated.validate();
  return out;
}

/// Correlator of the Trotterized evolution from dense matrices (no circuits).
inline CorrelatorSeries exact_trotter_series(const MomentumVector& q, TrotterOrdering ordering,
                                             const std::vector<double>& taus, const ModelParams& p,
                                             const StateVector& init, int steps = 1) {
  CorrelatorSeries s;
  s.q = q;
  s.ordering = ordering;
  s.variant = SeriesVariant::ExactTrotter;
  s.resize(taus.size());
  s.taus = taus;
  const auto terms = correlator_terms(q, p);
  const CVector& psi = init.amplitudes();
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const CMatrix v = trotter_unitary(ordering, taus[i], p, steps);
    for (const auto& t : terms) {
      const CVector right = v * (to_matrix(t.right) * psi);
      const CVector left = v * psi;
      s.values[i] += t.weight * left.dot(to_matrix(t.left) * right);
    }
  }
  return s;
}

/// Exact correlator of the full Hamiltonian, evaluated in its eigenbasis.
inline CorrelatorSeries exact_series(const MomentumVector& q, const std::vector<double>& taus, const ModelParams& p,
                                     const StateVector& init) {
  CorrelatorSeries s;
  s.q = q;
  s.variant = SeriesVariant::Exact;
  s.resize(taus.size());
  s.taus = taus;
  const EigenSystem eig = diagonalize(build_qubit_hamiltonian(p));
  const CMatrix a = to_matrix(build_excitation(q, p));
  for (std::size_t i = 0; i < taus.size(); ++i) s.values[i] = exact_correlator(eig, a, init.amplitudes(), taus[i]);
  return s;
}

struct MeasurementBudget {
  std::uint64_t total = 0;      ///< N from the sum-of-squares bound
  double loose = 0.0;           ///< (L^4 / eps^2) max |alpha|^4
  std::uint64_t per_term = 0;   ///< M = N / L^2, rounded up
  std::size_t n_terms = 0;      ///< L
};

/// Measurements needed for statistical precision eps on every C(tau, q_k).
///
/// N = ceil((L^2 / eps^2) max_k (sum_i alpha_i(q_k)^2)^2), shared uniformly
/// as M = N / L^2 over the L^2 Hadamard tests of each correlator.
inline MeasurementBudget measurement_budget(double epsilon, const std::vector<std::vector<double>>& excitations) {
  detail::require(epsilon > 0.0, "measurement_budget: epsilon must be positive");
  detail::require(!excitations.empty(), "measurement_budget: no excitations given");
  MeasurementBudget b;
  double worst = 0.0, loose = 0.0;
  for (const auto& alphas : excitations) {
    detail::require(!alphas.empty(), "measurement_budget: empty coefficient list");
    const double l = static_cast<double>(alphas.size());
    double sq = 0.0, mx = 0.0;
    for (double a : alphas) {
      sq += a * a;
      mx = std::max(mx, std::abs(a));
    }
    worst = std::max(worst, l * l * sq * sq);
    loose = std::max(loose, l * l * l * l * std::pow(mx, 4));
    b.n_terms = std::max(b.n_terms, alphas.size());
  }
  const double e2 = epsilon * epsilon;
  b.total = static_cast<std::uint64_t>(std::ceil(worst / e2 - 1e-9));
  b.loose = loose / e2;
  const auto l2 = static_cast<std::uint64_t>(b.n_terms * b.n_terms);
  b.per_term = (b.total + l2 - 1) / l2;
  return b;
}

inline std::vector<double> excitation_coefficients(const QubitOperator& op) {
  std::vector<double> out;
  for (const auto& [k, c] : op.terms()) out.push_back(c.real());
  return out;
}

/// ||H_I||_1^2 (eps(tau) + sqrt(1 - F)) with ||H_I||_1 = sum_i |alpha_i|.
inline double deviation_bound(double trotter_eps, double fidelity, const QubitOperator& excitation) {
  detail::require(fidelity >= 0.0 && fidelity <= 1.0, "deviation_bound: fidelity must lie in [0, 1]");
  detail::require(trotter_eps >= 0.0, "deviation_bound: Trotter error must be non-negative");
  const double n1 = excitation.one_norm();
  return n1 * n1 * (trotter_eps + std::sqrt(1.0 - fidelity));
}

/// eps(tau) = 2 || V(tau) - exp(-i H tau) || with the constant part of H dropped from both.
inline double trotter_epsilon(TrotterOrdering ordering, double tau, const ModelParams& p, int steps = 1) {
  const QubitOperator h = build_qubit_hamiltonian(p) - QubitOperator::identity(kModelQubits, model::constant_shift(p));
  return 2.0 * operator_norm(trotter_unitary(ordering, tau, p, steps) - hermitian_evolution(to_matrix(h), tau));
}

struct QualityReport {
  double chi2_re = 0.0;
  double chi2_im = 0.0;
  double nssd_re = 0.0;
  double nssd_im = 0.0;
  double r = 0.1;
  std::size_t n_points = 0;
};

namespace detail {

inline void check_grids(const CorrelatorSeries& a, const CorrelatorSeries& b) {
  require(a.size() == b.size(), "quality_metrics: tau grids differ in length");
  for (std::size_t i = 0; i < a.size(); ++i)
    require(std::abs(a.taus[i] - b.taus[i]) < 1e-12, "quality_metrics: tau grids differ");
}

}  // namespace detail

/// Normalized sum of squared deviations, real and imaginary parts.
///
/// The denominator uses the reference curve unless denominator_on_reference
/// is false, in which case it uses the series itself.
inline std::pair<double, double> nssd(const CorrelatorSeries& series, const CorrelatorSeries& reference, double r = 0.1,
                                      bool denominator_on_reference = true) {
  detail::check_grids(series, reference);
  detail::require(r > 0.0, "nssd: r must be positive");
  double num_re = 0, num_im = 0, den_re = 0, den_im = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const cplx d = series.values[i] - reference.values[i];
    const cplx base = denominator_on_reference ? reference.values[i] : series.values[i];
    num_re += d.real() * d.real();
    num_im += d.imag() * d.imag();
    den_re += r * r * base.real() * base.real();
    den_im += r * r * base.imag() * base.imag();
  }
  auto ratio = [](double n, double d) { return d > 0.0 ? std::sqrt(n / d) : (n > 0.0 ? INFINITY : 0.0); };
  return {ratio(num_re, den_re), ratio(num_im, den_im)};
}

/// chi^2 and nssd of a measured series against a reference curve.
inline QualityReport quality_metrics(const CorrelatorSeries& series, const CorrelatorSeries& reference, double r = 0.1,
                                     bool denominator_on_reference = true) {
  detail::check_grids(series, reference);
  QualityReport q;
  q.r = r;
  q.n_points = series.size();
  for (std::size_t i = 0; i < series.size(); ++i) {
    detail::require(series.sigma_re[i] > 0.0 && series.sigma_im[i] > 0.0, "quality_metrics: chi2 needs positive sigma");
    const cplx d = series.values[i] - reference.values[i];
    q.chi2_re += d.real() * d.real() / (series.sigma_re[i] * series.sigma_re[i]);
    q.chi2_im += d.imag() * d.imag() / (series.sigma_im[i] * series.sigma_im[i]);
  }
  std::tie(q.nssd_re, q.nssd_im) = nssd(series, reference, r, denominator_on_reference);
  return q;
}

}  // namespace nucresp
