/* Copyright 2026 The impedans Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "trainer.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "error.hpp"

namespace impedans::train {

using losses::FieldAdjoint;
using losses::FieldEvaluation;
using losses::FrequencyTerms;

// ---------------------------------------------------------------------------
// preprocessing

Complex PreprocessRecord::restore(std::size_t frequency, Complex normalized) const {
  const PreprocessEntry& e = per_frequency.at(frequency);
  return normalized * std::polar(e.scale, e.phase_shift);
}

field::PressureMatrix PreprocessRecord::restore(const field::PressureMatrix& normalized) const {
  field::PressureMatrix out = normalized;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (Complex& p : out[i]) p = restore(i, p);
  }
  return out;
}

std::pair<field::PressureDataset, PreprocessRecord> preprocess_dataset(const field::PressureDataset& dataset) {
  field::PressureDataset out = dataset;
  PreprocessRecord record;
  for (std::size_t i = 0; i < out.pressure.size(); ++i) {
    auto& row = out.pressure[i];
    PreprocessEntry e;
    double best = 0.0;
    for (std::size_t m = 0; m < row.size(); ++m) {
      if (std::abs(row[m]) > best) {
        best = std::abs(row[m]);
        e.reference_sensor = m;
      }
    }
    if (!(best > 0.0)) {
      throw DomainError(fmt::format("frequency {} Hz: all sensor pressures are zero", dataset.frequencies.at(i)));
    }
    e.scale = best;
    e.phase_shift = std::arg(row[e.reference_sensor]);
    const Complex inverse = std::polar(1.0 / e.scale, -e.phase_shift);
    for (Complex& p : row) p *= inverse;
    // exact by construction; rounding would otherwise leave ~1e-16 residue
    row[e.reference_sensor] = Complex(1.0, 0.0);
    record.per_frequency.push_back(e);
  }
  return {std::move(out), std::move(record)};
}

// ---------------------------------------------------------------------------
// complexity index

void BudgetConfig::validate() const {
  if (!adaptive && fixed_epochs < 0) throw DomainError(fmt::format("epoch count must be >= 0, got {}", fixed_epochs));
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1])) throw DomainError("complexity thresholds must increase strictly");
  }
  for (std::size_t i = 1; i < budgets.size(); ++i) {
    if (!(budgets[i] > budgets[i - 1])) throw DomainError("epoch budgets must increase strictly");
  }
}

ComplexityIndex complexity_index(const field::PressureDataset& dataset, const field::ArrayGeometry& geometry,
                                 const BudgetConfig& budget) {
  geometry.validate();
  const std::size_t layer = static_cast<std::size_t>(geometry.nx) * static_cast<std::size_t>(geometry.ny);
  if (dataset.sensors.size() != 2 * layer) {
    throw DomainError(fmt::format("complexity index: {} sensors do not form two {}x{} layers", dataset.sensors.size(),
                                  geometry.nx, geometry.ny));
  }
  const double tol = 1e-9 + 1e-9 * geometry.d2;
  for (std::size_t m = 0; m < layer; ++m) {
    const Vec3 lower = geometry.to_local(dataset.sensors[m]);
    const Vec3 upper = geometry.to_local(dataset.sensors[m + layer]);
    if (std::abs(lower.x - upper.x) > tol || std::abs(lower.y - upper.y) > tol ||
        std::abs((upper.z - lower.z) - geometry.d2) > tol) {
      throw DomainError(fmt::format("complexity index: sensor {} is not paired with sensor {} across layers", m,
                                    m + layer));
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < dataset.frequencies.size(); ++i) {
    const auto& row = dataset.pressure.at(i);
    Complex diff{};
    double magnitude = 0.0;
    for (std::size_t m = 0; m < layer; ++m) diff += row[m + layer] - row[m];
    for (const Complex& p : row) magnitude += std::abs(p);
    diff /= static_cast<double>(layer);
    magnitude /= static_cast<double>(row.size());
    if (!(magnitude > 0.0)) {
      throw DomainError(fmt::format("complexity index: frequency {} Hz has zero pressure", dataset.frequencies[i]));
    }
    const double k = dataset.medium.wavenumber(dataset.frequencies[i]);
    sum += std::abs(diff) / (k * geometry.d2 * magnitude);
  }
  ComplexityIndex out;
  out.index = 1e4 * sum / static_cast<double>(dataset.frequencies.size());
  std::size_t level = 0;
  while (level < budget.thresholds.size() && out.index >= budget.thresholds[level]) ++level;
  out.epoch_budget = budget.budgets[level];
  return out;
}

// ---------------------------------------------------------------------------
// adaptive weights

void AdaptiveConfig::validate() const {
  if (update_period < 1) throw DomainError(fmt::format("weight update period must be >= 1, got {}", update_period));
  for (const double a : {alpha_data, alpha_pde, alpha_var}) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError(fmt::format("EMA factor must be in (0, 1), got {}", a));
  }
  if (alpha_smooth >= 1.0 || alpha_smooth == 0.0) {
    throw DomainError(fmt::format("smoothness EMA factor must be in (0, 1), got {}", alpha_smooth));
  }
  if (!(min_alpha_smooth > 0.0 && min_alpha_smooth < 1.0)) {
    throw DomainError(fmt::format("smoothness EMA lower bound must be in (0, 1), got {}", min_alpha_smooth));
  }
  if (!(floor > 0.0)) throw DomainError(fmt::format("gradient-norm floor must be > 0, got {}", floor));
}

double AdaptiveConfig::smooth_factor(int total_epochs) const {
  if (alpha_smooth > 0.0) return alpha_smooth;
  const double e = std::max(total_epochs, 1);
  return std::max(min_alpha_smooth, 1.0 - 1e4 / (e * e));
}

AdaptiveWeightState AdaptiveWeightState::initial(std::size_t frequencies, const AdaptiveConfig& config,
                                                 int total_epochs) {
  AdaptiveWeightState s;
  s.lambda.assign(frequencies, {1.0, 1.0, 1.0, 1.0});
  s.lambda_smooth = 1.0;
  s.alpha = {config.alpha_data, config.alpha_pde, config.alpha_var, config.alpha_var};
  s.alpha_smooth = config.smooth_factor(total_epochs);
  s.floor = config.floor;
  return s;
}

void update_adaptive_weights(AdaptiveWeightState& state, const GradientNorms& norms) {
  if (norms.per_frequency.size() != state.lambda.size()) {
    throw DomainError("adaptive weights: gradient norms do not match the frequency count");
  }
  const double f = state.floor;
  double s_sum = 0.0;
  for (std::size_t i = 0; i < state.lambda.size(); ++i) {
    const auto& g = norms.per_frequency[i];
    const double s = std::max(g[kData] + g[kPde], f);
    s_sum += s;
    for (int q = 0; q < 4; ++q) {
      const double target = s / std::max(g[q], f);
      state.lambda[i][q] = state.alpha[q] * state.lambda[i][q] + (1.0 - state.alpha[q]) * target;
    }
  }
  // The smoothness gradient concentrates on the few bins where the spectrum
  // bends, so it is scaled to one frequency's data and residual scale.
  if (norms.has_smooth) {
    const double s_mean = s_sum / static_cast<double>(state.lambda.size());
    const double target = s_mean / std::max(norms.smooth, f);
    state.lambda_smooth = state.alpha_smooth * state.lambda_smooth + (1.0 - state.alpha_smooth) * target;
  }
}

// ---------------------------------------------------------------------------
// per-frequency evaluation

void TrainConfig::validate() const {
  arch.validate();
  loss.validate();
  optimizer.validate();
  schedule.validate();
  adaptive.validate();
  budget.validate();
  if (!(report_angle >= 0.0 && report_angle < kPi / 2)) {
    throw DomainError(fmt::format("report angle must be in [0, pi/2), got {}", report_angle));
  }
  if (trace_period < 1) throw DomainError(fmt::format("trace period must be >= 1, got {}", trace_period));
}

std::uint64_t network_seed(std::uint64_t seed, std::size_t frequency) {
  // splitmix64 of the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(frequency) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

const char* term_name(int q) {
  static const char* names[] = {"data", "pde", "var_re", "var_im"};
  return names[q];
}

struct Worker {
  nf::ForwardCache sensors, volume, boundary;
  std::vector<FieldEvaluation> es, ev, eb;
  std::vector<FieldAdjoint> as, av, ab;
  std::vector<Complex> zeta_adj;
  losses::BoundaryImpedance b;
  FrequencyTerms terms;
  nf::NetworkParams grad;

  void clear_adjoints() {
    as.assign(es.size(), FieldAdjoint{});
    av.assign(ev.size(), FieldAdjoint{});
    ab.assign(eb.size(), FieldAdjoint{});
    zeta_adj.assign(eb.size(), Complex{});
  }
};

// Forward passes on the three point sets and the boundary impedance.
void evaluate(const NetworkBank& bank, const Problem& problem, std::size_t i, Worker& w) {
  const nf::NetworkParams& params = bank.networks[i];
  const field::SamplingDomain& d = *problem.domain;
  nf::forward(bank.arch, params, d.s_s, nf::Order::kSecond, w.sensors);
  nf::forward(bank.arch, params, d.s_v, nf::Order::kSecond, w.volume);
  nf::forward(bank.arch, params, d.s_b, nf::Order::kGradient, w.boundary);
  w.es = nf::read_evaluations(bank.arch, w.sensors);
  w.ev = nf::read_evaluations(bank.arch, w.volume);
  w.eb = nf::read_evaluations(bank.arch, w.boundary);
  w.b = losses::boundary_impedance(w.eb, d.normals, problem.wavenumbers[i], problem.loss.degenerate_floor);
  if (w.b.valid.size() < 2) {
    throw NumericError(fmt::format("frequency index {}: {} of {} boundary points have a degenerate normal derivative",
                                   i, w.b.degenerate_count(), w.eb.size()));
  }
}

// Term values, and the weighted adjoint of all per-frequency terms plus the
// smoothness coupling through zeta_bar.
void accumulate_adjoints(const Problem& problem, std::size_t i, Worker& w, const std::array<double, 4>& lambda,
                         Complex zeta_bar_adjoint) {
  w.clear_adjoints();
  const double k = problem.wavenumbers[i];
  w.terms.data = losses::data_loss(w.es, problem.measured[i], w.as, lambda[kData]);
  w.terms.pde = losses::pde_loss(w.ev, w.es, k, w.av, w.as, lambda[kPde]);
  const auto v = losses::variance_losses(w.b, lambda[kVarRe], lambda[kVarIm], w.zeta_adj);
  w.terms.var_re = v.var_re;
  w.terms.var_im = v.var_im;
  losses::zeta_bar_adjoint(w.b, zeta_bar_adjoint, w.zeta_adj);
  losses::boundary_impedance_adjoint(w.b, w.eb, problem.domain->normals, w.zeta_adj, w.ab);
}

void backpropagate(const NetworkBank& bank, std::size_t i, Worker& w, bool sensors, bool volume, bool boundary) {
  const nf::NetworkParams& params = bank.networks[i];
  if (w.grad.hidden.size() != params.hidden.size()) w.grad = params.zeros_like();
  w.grad.set_zero();
  if (sensors) nf::backward(bank.arch, params, w.sensors, w.as, w.grad);
  if (volume) nf::backward(bank.arch, params, w.volume, w.av, w.grad);
  if (boundary) nf::backward(bank.arch, params, w.boundary, w.ab, w.grad);
}

// Runs f(i) for i in [0, n) on up to `threads` threads; rethrows the first
// failure in index order.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < count; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += count) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool smoothness_active(const Problem& problem) { return problem.smoothness && problem.wavenumbers.size() >= 3; }

std::vector<Complex> zeta_bars(const std::vector<Worker>& workers) {
  std::vector<Complex> z;
  z.reserve(workers.size());
  for (const Worker& w : workers) z.push_back(w.b.zeta_bar);
  return z;
}

}  // namespace

BankLoss composite_loss(const NetworkBank& bank, const Problem& problem, const losses::LossWeights& weights) {
  const std::size_t n = bank.networks.size();
  std::vector<Worker> workers(n);
  for (std::size_t i = 0; i < n; ++i) evaluate(bank, problem, i, workers[i]);
  BankLoss out;
  out.breakdown.zeta_bar = zeta_bars(workers);
  std::vector<Complex> zbar_adj(n);
  if (smoothness_active(problem)) {
    out.breakdown.smooth =
        losses::smoothness_loss(out.breakdown.zeta_bar, problem.loss.huber_delta, zbar_adj, weights.smooth);
  }
  for (std::size_t i = 0; i < n; ++i) {
    accumulate_adjoints(problem, i, workers[i], weights.per_frequency[i], zbar_adj[i]);
    backpropagate(bank, i, workers[i], true, true, true);
    out.breakdown.per_frequency.push_back(workers[i].terms);
    out.breakdown.degenerate_points.push_back(workers[i].b.degenerate_count());
    out.gradient.push_back(workers[i].grad);
  }
  out.total = losses::total_loss(out.breakdown, weights);
  return out;
}

// ---------------------------------------------------------------------------
// training loop

namespace {

GradientNorms measure_gradient_norms(const NetworkBank& bank, const Problem& problem, std::vector<Worker>& workers,
                                     int threads) {
  const std::size_t n = workers.size();
  GradientNorms norms;
  norms.per_frequency.assign(n, {0.0, 0.0, 0.0, 0.0});
  std::vector<Complex> zbar_adj(n);
  norms.has_smooth = smoothness_active(problem);
  if (norms.has_smooth) {
    losses::smoothness_loss(zeta_bars(workers), problem.loss.huber_delta, zbar_adj, 1.0);
  }
  std::vector<double> smooth_sq(n, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    Worker& w = workers[i];
    for (int q = 0; q < 4; ++q) {
      std::array<double, 4> unit{0.0, 0.0, 0.0, 0.0};
      unit[q] = 1.0;
      accumulate_adjoints(problem, i, w, unit, Complex{});
      backpropagate(bank, i, w, q == kData || q == kPde, q == kPde, q >= kVarRe);
      norms.per_frequency[i][q] = std::sqrt(w.grad.squared_norm());
    }
    if (norms.has_smooth) {
      accumulate_adjoints(problem, i, w, {0.0, 0.0, 0.0, 0.0}, zbar_adj[i]);
      backpropagate(bank, i, w, false, false, true);
      smooth_sq[i] = w.grad.squared_norm();
    }
  });
  double total = 0.0;
  for (double s : smooth_sq) total += s;
  norms.smooth = std::sqrt(total);
  return norms;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void check_sensors(const field::PressureDataset& dataset, const field::SamplingDomain& domain) {
  if (domain.s_s.size() != dataset.sensors.size()) {
    throw DomainError(fmt::format("sampling domain has {} sensor points, dataset has {}", domain.s_s.size(),
                                  dataset.sensors.size()));
  }
  for (std::size_t m = 0; m < domain.s_s.size(); ++m) {
    if (norm(domain.s_s[m] - dataset.sensors[m]) > 1e-9) {
      throw DomainError(fmt::format("sampling domain sensor {} does not coincide with the dataset sensor", m));
    }
  }
  if (domain.normals.size() != domain.s_b.size()) throw DomainError("sampling domain needs one normal per boundary point");
  if (domain.s_v.empty() || domain.s_b.size() < 2) throw DomainError("sampling domain has too few points");
}

}  // namespace

InferenceResult train(const field::PressureDataset& dataset, const field::SamplingDomain& domain,
                      const TrainConfig& config, int epochs, const ProgressCallback& progress) {
  const auto t_start = std::chrono::steady_clock::now();
  config.validate();
  dataset.validate();
  check_sensors(dataset, domain);
  const std::size_t n = dataset.frequencies.size();
  if (config.smoothness && n < 3) {
    throw DomainError(fmt::format("smoothness term needs at least 3 frequencies, got {}; disable it", n));
  }

  InferenceResult result;
  result.config = config;
  result.seed = config.seed;
  result.complexity = complexity_index(dataset, dataset.geometry, config.budget);
  const int total_epochs =
      epochs >= 0 ? epochs : (config.budget.adaptive ? result.complexity.epoch_budget : config.budget.fixed_epochs);
  result.epochs = total_epochs;

  auto [normalized, record] = preprocess_dataset(dataset);
  result.preprocess = record;

  Problem problem;
  problem.domain = &domain;
  problem.loss = config.loss;
  problem.smoothness = config.smoothness;
  problem.measured = normalized.pressure;
  for (double f : dataset.frequencies) problem.wavenumbers.push_back(dataset.medium.wavenumber(f));

  NetworkBank& bank = result.bank;
  bank.arch = config.arch;
  bank.arch.box = domain.box;
  for (std::size_t i = 0; i < n; ++i) bank.networks.push_back(nf::init_network(bank.arch, network_seed(config.seed, i)));

  std::vector<optim::Optimizer> optimizers;
  for (std::size_t i = 0; i < n; ++i) optimizers.emplace_back(config.optimizer, bank.networks[i]);

  AdaptiveWeightState weights = AdaptiveWeightState::initial(n, config.adaptive, total_epochs);
  const int threads = resolve_threads(config.threads);
  std::vector<Worker> workers(n);
  const bool smooth = smoothness_active(problem);

  auto context = [&](int epoch, std::size_t i) {
    return fmt::format("epoch {}, frequency {} Hz", epoch, dataset.frequencies[i]);
  };

  // One pass over the bank: forward, losses, and (when stepping) the update.
  auto pass = [&](int epoch, bool step, double lr) {
    parallel_for(n, threads, [&](std::size_t i) {
      try {
        evaluate(bank, problem, i, workers[i]);
      } catch (const NumericError& e) {
        throw NumericError(fmt::format("{}: {}", context(epoch, i), e.what()));
      }
    });
    const std::vector<Complex> zb = zeta_bars(workers);
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(zb[i].real()) || !std::isfinite(zb[i].imag())) {
        throw NumericError(fmt::format("{}: non-finite mean impedance", context(epoch, i)));
      }
    }

    if (step && epoch % config.adaptive.update_period == 0) {
      update_adaptive_weights(weights, measure_gradient_norms(bank, problem, workers, threads));
      result.weights.push_back({epoch, weights.lambda, weights.lambda_smooth});
    }

    std::vector<Complex> zbar_adj(n);
    double smooth_value = 0.0;
    if (smooth) smooth_value = losses::smoothness_loss(zb, config.loss.huber_delta, zbar_adj, weights.lambda_smooth);

    parallel_for(n, threads, [&](std::size_t i) {
      Worker& w = workers[i];
      accumulate_adjoints(problem, i, w, weights.lambda[i], zbar_adj[i]);
      const FrequencyTerms& t = w.terms;
      const double terms[4] = {t.data, t.pde, t.var_re, t.var_im};
      for (int q = 0; q < 4; ++q) {
        if (!std::isfinite(terms[q])) {
          throw NumericError(fmt::format("{}: non-finite {} loss", context(epoch, i), term_name(q)));
        }
      }
      if (!step) return;
      backpropagate(bank, i, w, true, true, true);
      if (!w.grad.all_finite()) throw NumericError(fmt::format("{}: non-finite parameter gradient", context(epoch, i)));
      optimizers[i].step(bank.networks[i], w.grad, lr);
    });

    losses::LossBreakdown breakdown;
    breakdown.zeta_bar = zb;
    breakdown.smooth = smooth_value;
    for (const Worker& w : workers) {
      breakdown.per_frequency.push_back(w.terms);
      breakdown.degenerate_points.push_back(w.b.degenerate_count());
    }
    losses::LossWeights lw;
    lw.per_frequency = weights.lambda;
    lw.smooth = weights.lambda_smooth;
    const double total = losses::total_loss(breakdown, lw);
    if (!std::isfinite(total)) throw NumericError(fmt::format("epoch {}: non-finite total loss", epoch));
    return std::make_pair(total, std::move(breakdown));
  };

  auto trace_row = [&](int epoch, double lr, double total, const losses::LossBreakdown& b) {
    TraceRow row;
    row.epoch = epoch;
    row.lr = lr;
    row.total = total;
    for (const FrequencyTerms& t : b.per_frequency) {
      row.summed.data += t.data;
      row.summed.pde += t.pde;
      row.summed.var_re += t.var_re;
      row.summed.var_im += t.var_im;
    }
    row.smooth = b.smooth;
    row.zeta_bar = b.zeta_bar;
    result.trace.push_back(row);
    return !progress || progress(row);
  };

  int completed = 0;
  for (int epoch = 0; epoch < total_epochs; ++epoch) {
    const double lr = optim::lr_at_epoch(config.schedule, config.optimizer.peak_lr, epoch, total_epochs);
    const auto [total, breakdown] = pass(epoch, true, lr);
    completed = epoch + 1;
    if (epoch % config.trace_period == 0 && !trace_row(epoch, lr, total, breakdown)) {
      result.diagnostics.push_back(fmt::format("stopped by caller after epoch {}", epoch));
      break;
    }
  }
  result.epochs = completed;

  const auto [total, breakdown] = pass(completed, false, 0.0);
  trace_row(completed, 0.0, total, breakdown);
  result.final_losses = breakdown;

  for (std::size_t i = 0; i < n; ++i) {
    if (breakdown.degenerate_points[i] > 0) {
      result.diagnostics.push_back(fmt::format("frequency {} Hz: {} degenerate boundary points excluded",
                                               dataset.frequencies[i], breakdown.degenerate_points[i]));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const std::string& d : optimizers[i].diagnostics()) {
      result.diagnostics.push_back(fmt::format("frequency {} Hz: {}", dataset.frequencies[i], d));
    }
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  result.spectrum.frequencies = dataset.frequencies;
  result.spectrum.zeta = breakdown.zeta_bar;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex z = breakdown.zeta_bar[i];
    try {
      result.spectrum.alpha.push_back(materials::absorption_at_angle(z, config.report_angle));
    } catch (const Error& e) {
      result.spectrum.alpha.push_back(nan);
      result.diagnostics.push_back(fmt::format("frequency {} Hz: absorption undefined: {}", dataset.frequencies[i],
                                               e.what()));
    }
    if (z.real() > 0.0) {
      result.alpha_random.push_back(materials::paris_random_absorption(z));
    } else {
      result.alpha_random.push_back(nan);
      result.diagnostics.push_back(fmt::format(
          "frequency {} Hz: Re(zeta) = {} <= 0, random-incidence absorption undefined", dataset.frequencies[i], z.real()));
    }
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

std::vector<Complex> predict_pressure(const InferenceResult& result, std::size_t frequency, const Points& points) {
  if (frequency >= result.bank.networks.size()) {
    throw DomainError(fmt::format("frequency index {} out of range ({} networks)", frequency,
                                  result.bank.networks.size()));
  }
  std::vector<Complex> p = nf::evaluate(result.bank.arch, result.bank.networks[frequency], points);
  for (Complex& v : p) v = result.preprocess.restore(frequency, v);
  return p;
}

}  // namespace impedans::train
