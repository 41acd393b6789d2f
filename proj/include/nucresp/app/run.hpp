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

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nucresp/app/config.hpp"
#include "nucresp/counts.hpp"
#include "nucresp/estimation.hpp"
#include "nucresp/oracle.hpp"
#include "nucresp/spectral.hpp"

namespace nucresp::app {

using json = nlohmann::json;

/// Writes files under one output directory, stamping each CSV with the config hash.
class OutputSink {
 public:
  OutputSink(std::filesystem::path dir, std::string hash) : dir_(std::move(dir)), hash_(std::move(hash)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  std::ofstream open(const std::string& name) {
    const auto path = dir_ / name;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << std::setprecision(12);
    written_.push_back(path.string());
    return out;
  }

  std::ofstream csv(const std::string& name, const std::string& header) {
    auto out = open(name);
    out << "# config_hash=" << hash_ << '\n' << header << '\n';
    return out;
  }

  void write_json(const std::string& name, json j) {
    j["config_hash"] = hash_;
    auto out = open(name);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + name);
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  std::filesystem::path dir_;
  std::string hash_;
  std::vector<std::string> written_;
};

namespace detail {

inline void write_series(OutputSink& sink, const CorrelatorSeries& s) {
  const std::string name =
      "correlator_q" + s.q.tag() + "_" +
      (s.variant == SeriesVariant::Exact ? std::string("exact") : nucresp::to_string(s.ordering) + "_" + to_string(s.variant)) +
      ".csv";
  auto out = sink.csv(name, "tau,re,re_err,im,im_err");
  for (std::size_t i = 0; i < s.size(); ++i)
    out << s.taus[i] << ',' << s.values[i].real() << ',' << s.sigma_re[i] << ',' << s.values[i].imag() << ','
        << s.sigma_im[i] << '\n';
}

inline json quality_json(const CorrelatorSeries& s, const CorrelatorSeries& ref, const ExperimentConfig& c) {
  json j;
  const auto [nre, nim] = nssd(s, ref, c.r, c.nssd_on_reference);
  j["nssd_re"] = nre;
  j["nssd_im"] = nim;
  bool sigma_ok = true;
  for (std::size_t i = 0; i < s.size(); ++i) sigma_ok = sigma_ok && s.sigma_re[i] > 0.0 && s.sigma_im[i] > 0.0;
  if (sigma_ok && s.size() > 0) {
    const auto q = quality_metrics(s, ref, c.r, c.nssd_on_reference);
    j["chi2_re"] = q.chi2_re;
    j["chi2_im"] = q.chi2_im;
  } else {
    j["chi2_re"] = nullptr;
    j["chi2_im"] = nullptr;
  }
  j["n_points"] = s.size();
  return j;
}

inline const char* basis_name(MeasureBasis b) { return b == MeasureBasis::X ? "X" : b == MeasureBasis::Y ? "Y" : "Z"; }

/// Initial target state: exact ground state, contaminated down to the configured fidelity.
inline StateVector initial_state(const EigenSystem& eig, const ExperimentConfig& c) {
  const auto cs = make_contaminated_state(eig, c.fidelity, derive_seed(*c.seed, 0x57A7E));
  return StateVector(cs.state(eig));
}

inline QubitOperator spectrum_operator(const ExperimentConfig& c) {
  if (c.spectrum_operator.empty()) return build_excitation(c.qs.front(), c.model);
  QubitOperator op(kModelQubits);
  op.add(PauliString::from_label(c.spectrum_operator), 1.0);
  return op;
}

}  // namespace detail

inline void run_correlator(const ExperimentConfig& c, OutputSink& sink) {
  const EigenSystem eig = diagonalize(build_qubit_hamiltonian(c.model));
  const StateVector init = detail::initial_state(eig, c);
  const auto taus = c.taus.values();
  EstimationOptions opt;
  opt.shots = c.shots;
  opt.noise = c.noise;
  opt.mitigation = c.mitigation;
  opt.trotter_steps = c.trotter_steps;
  opt.workers = c.workers;

  json quality = json::object();
  for (const auto& q : c.qs) {
    const CorrelatorSeries exact = exact_series(q, taus, c.model, init);
    detail::write_series(sink, exact);
    for (auto ordering : c.orderings) {
      const auto seed = derive_seed(*c.seed, static_cast<std::uint64_t>(q.m), static_cast<std::uint64_t>(q.n),
                                    static_cast<std::uint64_t>(ordering));
      const auto est = estimate_correlator(q, ordering, taus, c.model, init, opt, seed);
      const auto trotter = exact_trotter_series(q, ordering, taus, c.model, init, c.trotter_steps);
      const std::string key = "q" + q.tag() + "_" + nucresp::to_string(ordering);
      json entry;
      for (const auto* s : {&est.bare, &est.readout_mitigated, &est.mitigated, &trotter}) {
        detail::write_series(sink, *s);
        entry[to_string(s->variant)] = {{"vs_exact", detail::quality_json(*s, exact, c)},
                                        {"vs_exact_trotter", detail::quality_json(*s, trotter, c)}};
      }
      quality[key] = entry;

      json records = json::array();
      for (const auto& r : est.records)
        records.push_back({{"tau", taus.at(r.tau_index)},
                           {"term", r.term_index},
                           {"basis", detail::basis_name(r.basis)},
                           {"scale", r.scale},
                           {"raw", r.raw.value},
                           {"raw_err", r.raw.sigma},
                           {"readout_mitigated", r.readout_mitigated.value},
                           {"readout_mitigated_err", r.readout_mitigated.sigma}});
      sink.write_json("records_" + key + ".json",
                      {{"confusion", {{"a", est.confusion.a()},
                                      {"b", est.confusion.b()},
                                      {"sigma_a", est.confusion.sigma_a()},
                                      {"sigma_b", est.confusion.sigma_b()},
                                      {"shots", est.confusion.shots}}},
                       {"records", records}});
    }
  }
  sink.write_json("quality.json", {{"r", c.r},
                                   {"denominator", c.nssd_on_reference ? "reference" : "measured"},
                                   {"series", quality}});
}

inline void run_counts(const ExperimentConfig& c, OutputSink& sink) {
  const auto structures = count_structures();
  std::string header = "ordering";
  for (const auto& s : structures) header += "," + s.name;
  auto out = sink.csv(c.t_connectivity ? "counts_t.csv" : "counts_logical.csv", header);
  for (auto ordering : c.orderings) {
    out << nucresp::to_string(ordering);
    for (const auto& s : structures) out << ',' << correlator_cnot_count(ordering, c.model, s.left, s.right, c.t_connectivity);
    out << '\n';
  }
}

inline void run_budget(const ExperimentConfig& c, OutputSink& sink) {
  std::vector<std::vector<double>> alphas;
  for (const auto& q : c.qs) alphas.push_back(excitation_coefficients(build_excitation(q, c.model)));
  const auto b = measurement_budget(c.epsilon, alphas);
  json j{{"epsilon", c.epsilon}, {"total", b.total}, {"loose", b.loose}, {"per_term", b.per_term}, {"n_terms", b.n_terms}};
  json bounds = json::object();
  const auto taus = c.taus.values();
  for (const auto& q : c.qs)
    for (auto ordering : c.orderings) {
      json rows = json::array();
      for (double tau : taus) {
        const double eps = trotter_epsilon(ordering, tau, c.model, c.trotter_steps);
        rows.push_back({{"tau", tau},
                        {"trotter_epsilon", eps},
                        {"deviation_bound", deviation_bound(eps, c.fidelity, build_excitation(q, c.model))}});
      }
      bounds["q" + q.tag() + "_" + nucresp::to_string(ordering)] = rows;
    }
  j["deviation_bounds"] = bounds;
  sink.write_json("budget.json", j);
}

inline void run_spectrum(const ExperimentConfig& c, OutputSink& sink) {
  const EigenSystem eig = diagonalize(build_qubit_hamiltonian(c.model));
  const CVector psi = detail::initial_state(eig, c).amplitudes();
  const CMatrix a = to_matrix(detail::spectrum_operator(c));
  const auto cost = resolution_cost(c.delta, c.delta_omega);
  const GridSpec spec{c.delta, cost.n_t};
  const TwoTimeEvaluator eval = c.spectrum_source == "exact"
                                    ? exact_two_time_evaluator(eig, a, psi)
                                    : trotter_two_time_evaluator(c.orderings.front(), c.model, a, psi);
  const TwoTimeGrid grid = two_time_correlator(spec, eval, c.workers);
  const SpectralGrid s = riemann_spectrum(grid, default_omegas(c.delta, c.delta_omega));
  {
    auto out = sink.csv("spectrum.csv", "omega,re,im,abs");
    for (std::size_t i = 0; i < s.omegas.size(); ++i)
      out << s.omegas[i] << ',' << s.s_values[i].real() << ',' << s.s_values[i].imag() << ',' << std::abs(s.s_values[i])
          << '\n';
  }
  {
    auto out = sink.csv("lines.csv", "omega,weight");
    for (const auto& l : spectral_response(eig, a, psi)) out << l.omega << ',' << l.weight << '\n';
  }
  const auto [peak, idx] = spectral_peak(s);
  sink.write_json("spectrum.json", {{"delta", c.delta},
                                    {"delta_omega", c.delta_omega},
                                    {"n_t", cost.n_t},
                                    {"evaluations", grid.evaluations},
                                    {"predicted_evaluations", cost.evaluations},
                                    {"resolution", s.resolution},
                                    {"peak_omega", peak},
                                    {"source", c.spectrum_source}});
}

inline void run_euclidean(const ExperimentConfig& c, OutputSink& sink) {
  const EigenSystem eig = diagonalize(build_qubit_hamiltonian(c.model));
  const CMatrix a = to_matrix(detail::spectrum_operator(c));
  const CMatrix ae = eig.to_eigenbasis(a);
  Eigen::Index m = 1;
  for (Eigen::Index k = 1; k < eig.dim(); ++k)
    if (std::abs(ae(0, k)) > std::abs(ae(0, m)) + 1e-12) m = k;
  const CVector ground = eig.ground_state();
  auto out = sink.csv("euclidean.csv", "contamination,tau_e,re,im,ground_re,ground_im,abs_dev");
  for (double eps : c.contamination) {
    const CVector psi = single_contamination(eig, m, eps).state(eig);
    for (double te : c.tau_e.values()) {
      const cplx v = euclidean_correlator(eig, a, psi, te);
      const cplx g = euclidean_correlator(eig, a, ground, te);
      out << eps << ',' << te << ',' << v.real() << ',' << v.imag() << ',' << g.real() << ',' << g.imag() << ','
          << std::abs(v - g) << '\n';
    }
  }
}

/// Runs the configured mode and returns the written files.
inline std::vector<std::string> run(const ExperimentConfig& c) {
  c.validate();
  OutputSink sink(c.output_dir, c.hash());
  switch (c.mode) {
    case Mode::Correlator: run_correlator(c, sink); break;
    case Mode::Spectrum: run_spectrum(c, sink); break;
    case Mode::Budget: run_budget(c, sink); break;
    case Mode::Counts: run_counts(c, sink); break;
    case Mode::Euclidean: run_euclidean(c, sink); break;
  }
  {
    auto cfg = sink.open("config.txt");
    cfg << "# config_hash=" << c.hash() << '\n' << c.canonical();
  }
  return sink.written();
}

}  // namespace nucresp::app
