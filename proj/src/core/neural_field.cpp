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

#include "neural_field.hpp"

#include <random>

#include <fmt/format.h>

#include "error.hpp"
#include "simd_math.hpp"

namespace impedans::nf {

using Eigen::Index;
using Eigen::MatrixXd;

void NetworkArch::validate() const {
  if (hidden_width < 2) throw DomainError(fmt::format("hidden width must be >= 2, got {}", hidden_width));
  if (hidden_layers < 1) throw DomainError(fmt::format("hidden layer count must be >= 1, got {}", hidden_layers));
  if (!(omega0 > 0.0)) throw DomainError(fmt::format("omega0 must be > 0, got {}", omega0));
  if (!(omega_hidden > 0.0)) throw DomainError(fmt::format("hidden omega must be > 0, got {}", omega_hidden));
  for (int a = 0; a < 3; ++a) {
    if (!(box.hi[a] > box.lo[a])) throw DomainError("normalization box is degenerate");
  }
}

std::size_t NetworkParams::size() const {
  std::size_t n = 0;
  visit([&](const std::string&, auto m) { n += static_cast<std::size_t>(m.size()); });
  return n;
}

std::vector<double> NetworkParams::flatten() const {
  std::vector<double> out;
  out.reserve(size());
  visit([&](const std::string&, auto m) { out.insert(out.end(), m.data(), m.data() + m.size()); });
  return out;
}

void NetworkParams::assign(std::span<const double> flat) {
  if (flat.size() != size()) throw DomainError("parameter vector length does not match the network");
  std::size_t offset = 0;
  visit([&](const std::string&, auto m) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset), m.size(), m.data());
    offset += static_cast<std::size_t>(m.size());
  });
}

NetworkParams NetworkParams::zeros_like() const {
  NetworkParams out = *this;
  out.set_zero();
  return out;
}

void NetworkParams::set_zero() {
  visit([](const std::string&, auto m) { m.setZero(); });
}

double NetworkParams::squared_norm() const {
  double s = 0.0;
  visit([&](const std::string&, auto m) { s += m.squaredNorm(); });
  return s;
}

void NetworkParams::add_scaled(const NetworkParams& other, double scale) {
  std::vector<Eigen::Map<const MatrixXd>> rhs;
  other.visit([&](const std::string&, auto m) { rhs.push_back(m); });
  std::size_t i = 0;
  visit([&](const std::string&, auto m) { m += scale * rhs[i++]; });
}

bool NetworkParams::all_finite() const {
  bool ok = true;
  visit([&](const std::string&, auto m) { ok = ok && m.allFinite(); });
  return ok;
}

NetworkParams init_network(const NetworkArch& arch, std::uint64_t seed) {
  arch.validate();
  const Index h = arch.hidden_width;
  NetworkParams p;
  auto shape = [](Affine& a, Index rows, Index cols) {
    a.weight.resize(rows, cols);
    a.bias.resize(rows);
  };
  shape(p.enc_u, h, 3);
  shape(p.enc_v, h, 3);
  p.hidden.resize(static_cast<std::size_t>(arch.hidden_layers));
  shape(p.hidden[0], h, 3);
  for (std::size_t k = 1; k < p.hidden.size(); ++k) shape(p.hidden[k], h, h);
  shape(p.head, 2, h);

  std::mt19937_64 rng(seed);
  auto fill = [&rng](auto m, double bound) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Index j = 0; j < m.cols(); ++j) {
      for (Index i = 0; i < m.rows(); ++i) m(i, j) = bound > 0.0 ? dist(rng) : 0.0;
    }
  };
  const double first = 1.0 / 3.0;
  const double first_bias = 1.0 / std::sqrt(3.0);
  const double deep = std::sqrt(6.0 / static_cast<double>(h)) / arch.omega_hidden;
  const double deep_bias = 1.0 / std::sqrt(static_cast<double>(h));
  p.visit([&](const std::string& name, auto m) {
    const bool is_bias = name.ends_with(".bias");
    const bool is_first = name.starts_with("enc_") || name.starts_with("hidden.0.");
    if (name.starts_with("head.")) {
      fill(m, is_bias ? 0.0 : deep);
    } else if (is_first) {
      fill(m, is_bias ? first_bias : first);
    } else {
      fill(m, is_bias ? deep_bias : deep);
    }
  });
  return p;
}

namespace {

// Column p * C + c holds channel c of point p, so the channels of one point
// are adjacent in memory: element (row, p, c) is at row + width * (p * C + c).

void affine_forward(const Affine& a, const MatrixXd& in, int channels, Index points, MatrixXd& pre) {
  pre.noalias() = a.weight * in;
  for (Index p = 0; p < points; ++p) pre.col(p * channels) += a.bias;
}

void affine_backward(const MatrixXd& in, const MatrixXd& pre_bar, int channels, Index points, Affine& grad) {
  grad.weight.noalias() += pre_bar * in.transpose();
  for (Index p = 0; p < points; ++p) grad.bias += pre_bar.col(p * channels);
}

template <int C>
void sine_forward_kernel(double w, Index rows, Index points, const double* __restrict q, const double* __restrict sn,
                         const double* __restrict cs, double* __restrict o) {
  const double w2 = w * w;
  for (Index p = 0; p < points; ++p) {
    const Index base = p * C * rows;
    const double* sp = sn + p * rows;
    const double* cp = cs + p * rows;
#pragma omp simd
    for (Index i = 0; i < rows; ++i) {
      o[base + i] = sp[i];
      if constexpr (C >= 4) {
        const double wc = w * cp[i];
        for (int d = 0; d < 3; ++d) {
          const double qd = q[base + (1 + d) * rows + i];
          o[base + (1 + d) * rows + i] = wc * qd;
          if constexpr (C == 7) {
            o[base + (4 + d) * rows + i] = wc * q[base + (4 + d) * rows + i] - w2 * sp[i] * qd * qd;
          }
        }
      }
    }
  }
}

void sine_forward(double w, int channels, Index points, SineState& s) {
  const Index rows = s.pre.rows();
  s.sin.resize(rows, points);
  s.cos.resize(rows, points);
  s.out.resize(rows, s.pre.cols());
  // gather the value channel so the sin/cos kernel sees contiguous input
  for (Index p = 0; p < points; ++p) s.sin.col(p) = s.pre.col(p * channels).array();
  simd::sincos(s.sin.data(), w, s.sin.data(), s.cos.data(), static_cast<long>(rows * points));
  switch (channels) {
    case 1: sine_forward_kernel<1>(w, rows, points, s.pre.data(), s.sin.data(), s.cos.data(), s.out.data()); break;
    case 4: sine_forward_kernel<4>(w, rows, points, s.pre.data(), s.sin.data(), s.cos.data(), s.out.data()); break;
    default: sine_forward_kernel<7>(w, rows, points, s.pre.data(), s.sin.data(), s.cos.data(), s.out.data()); break;
  }
}

template <int C>
void sine_backward_kernel(double w, Index rows, Index points, const double* __restrict q, const double* __restrict sn,
                          const double* __restrict cs, const double* __restrict ob, double* __restrict pb) {
  const double w2 = w * w;
  const double w3 = w2 * w;
  for (Index p = 0; p < points; ++p) {
    const Index base = p * C * rows;
    const double* sp = sn + p * rows;
    const double* cp = cs + p * rows;
#pragma omp simd
    for (Index i = 0; i < rows; ++i) {
      const double wc = w * cp[i];
      double acc = wc * ob[base + i];
      if constexpr (C >= 4) {
        for (int d = 0; d < 3; ++d) {
          const Index i1 = base + (1 + d) * rows + i;
          const double qd = q[i1];
          const double sbd = ob[i1];
          double pbd = wc * sbd;
          acc -= w2 * sp[i] * qd * sbd;
          if constexpr (C == 7) {
            const Index i2 = base + (4 + d) * rows + i;
            const double sbdd = ob[i2];
            pb[i2] = wc * sbdd;
            pbd -= 2.0 * w2 * sp[i] * qd * sbdd;
            acc -= sbdd * (w2 * sp[i] * q[i2] + w3 * cp[i] * qd * qd);
          }
          pb[i1] = pbd;
        }
      }
      pb[base + i] = acc;
    }
  }
}

// pre_bar = d(out)/d(pre)^T out_bar for the channel-extended sine.
void sine_backward(double w, int channels, Index points, const SineState& s, const MatrixXd& out_bar,
                   MatrixXd& pre_bar) {
  const Index rows = s.pre.rows();
  pre_bar.resize(rows, s.pre.cols());
  const double* q = s.pre.data();
  switch (channels) {
    case 1: sine_backward_kernel<1>(w, rows, points, q, s.sin.data(), s.cos.data(), out_bar.data(), pre_bar.data()); break;
    case 4: sine_backward_kernel<4>(w, rows, points, q, s.sin.data(), s.cos.data(), out_bar.data(), pre_bar.data()); break;
    default: sine_backward_kernel<7>(w, rows, points, q, s.sin.data(), s.cos.data(), out_bar.data(), pre_bar.data()); break;
  }
}

template <int C>
void gate_forward_kernel(Index rows, Index points, const double* __restrict up, const double* __restrict zp,
                         const double* __restrict dp, double* __restrict hp) {
  for (Index p = 0; p < points; ++p) {
    const Index base = p * C * rows;
#pragma omp simd
    for (Index i = 0; i < rows; ++i) {
      const Index e = base + i;
      const double z0 = zp[e];
      const double d0 = dp[e];
      hp[e] = up[e] + z0 * d0;
      if constexpr (C >= 4) {
        for (int c = 1; c <= 3; ++c) {
          const Index i1 = e + c * rows;
          hp[i1] = up[i1] + zp[i1] * d0 + z0 * dp[i1];
          if constexpr (C == 7) {
            const Index i2 = e + (c + 3) * rows;
            hp[i2] = up[i2] + zp[i2] * d0 + 2.0 * zp[i1] * dp[i1] + z0 * dp[i2];
          }
        }
      }
    }
  }
}

// h = u + z (v - u), channel by channel.
void gate_forward(const MatrixXd& u, const MatrixXd& z, const MatrixXd& diff, int channels, Index points,
                  MatrixXd& h) {
  h.resize(u.rows(), u.cols());
  switch (channels) {
    case 1: gate_forward_kernel<1>(u.rows(), points, u.data(), z.data(), diff.data(), h.data()); break;
    case 4: gate_forward_kernel<4>(u.rows(), points, u.data(), z.data(), diff.data(), h.data()); break;
    default: gate_forward_kernel<7>(u.rows(), points, u.data(), z.data(), diff.data(), h.data()); break;
  }
}

template <int C>
void gate_backward_kernel(Index rows, Index points, const double* __restrict zp, const double* __restrict dp,
                          const double* __restrict hb, double* __restrict zb, double* __restrict db) {
  for (Index p = 0; p < points; ++p) {
    const Index base = p * C * rows;
#pragma omp simd
    for (Index i = 0; i < rows; ++i) {
      const Index e = base + i;
      const double z0 = zp[e];
      const double d0 = dp[e];
      double zb0 = hb[e] * d0;
      double db0 = hb[e] * z0;
      if constexpr (C >= 4) {
        for (int c = 1; c <= 3; ++c) {
          const Index i1 = e + c * rows;
          const double hbd = hb[i1];
          zb0 += hbd * dp[i1];
          double zbd = hbd * d0;
          db0 += hbd * zp[i1];
          double dbd = hbd * z0;
          if constexpr (C == 7) {
            const Index i2 = e + (c + 3) * rows;
            const double hbdd = hb[i2];
            zb0 += hbdd * dp[i2];
            zbd += 2.0 * hbdd * dp[i1];
            zb[i2] = hbdd * d0;
            db0 += hbdd * zp[i2];
            dbd += 2.0 * hbdd * zp[i1];
            db[i2] += hbdd * z0;
          }
          zb[i1] = zbd;
          db[i1] += dbd;
        }
      }
      zb[e] = zb0;
      db[e] += db0;
    }
  }
}

// Given h_bar, writes z_bar and accumulates d_bar (adjoint of v - u).
void gate_backward(const MatrixXd& z, const MatrixXd& diff, const MatrixXd& h_bar, int channels, Index points,
                   MatrixXd& z_bar, MatrixXd& d_bar) {
  z_bar.resize(z.rows(), z.cols());
  const Index rows = z.rows();
  switch (channels) {
    case 1: gate_backward_kernel<1>(rows, points, z.data(), diff.data(), h_bar.data(), z_bar.data(), d_bar.data()); break;
    case 4: gate_backward_kernel<4>(rows, points, z.data(), diff.data(), h_bar.data(), z_bar.data(), d_bar.data()); break;
    default: gate_backward_kernel<7>(rows, points, z.data(), diff.data(), h_bar.data(), z_bar.data(), d_bar.data()); break;
  }
}

}  // namespace

void forward(const NetworkArch& arch, const NetworkParams& params, const Points& points, Order order,
             ForwardCache& cache) {
  const int channels = channel_count(order);
  const Index np = static_cast<Index>(points.size());
  cache.order = order;
  cache.points = np;

  const Vec3 center = arch.box.center();
  const Vec3 scale = arch.coord_scale();
  cache.input.setZero(3, channels * np);
  for (Index p = 0; p < np; ++p) {
    const Vec3& x = points[static_cast<std::size_t>(p)];
    for (int a = 0; a < 3; ++a) {
      cache.input(a, p * channels) = (x[a] - center[a]) / scale[a];
      if (channels >= 4) cache.input(a, p * channels + 1 + a) = 1.0;
    }
  }

  affine_forward(params.enc_u, cache.input, channels, np, cache.enc_u.pre);
  sine_forward(arch.omega0, channels, np, cache.enc_u);
  affine_forward(params.enc_v, cache.input, channels, np, cache.enc_v.pre);
  sine_forward(arch.omega0, channels, np, cache.enc_v);
  cache.diff = cache.enc_v.out - cache.enc_u.out;

  const std::size_t layers = params.hidden.size();
  cache.gate.resize(layers);
  cache.hidden.resize(layers);
  for (std::size_t k = 0; k < layers; ++k) {
    const MatrixXd& in = k == 0 ? cache.input : cache.hidden[k - 1];
    const double w = k == 0 ? arch.omega0 : arch.omega_hidden;
    affine_forward(params.hidden[k], in, channels, np, cache.gate[k].pre);
    sine_forward(w, channels, np, cache.gate[k]);
    gate_forward(cache.enc_u.out, cache.gate[k].out, cache.diff, channels, np, cache.hidden[k]);
  }
  affine_forward(params.head, cache.hidden.back(), channels, np, cache.output);
}

std::vector<FieldEvaluation> read_evaluations(const NetworkArch& arch, const ForwardCache& cache) {
  const int channels = channel_count(cache.order);
  const Index np = cache.points;
  const Vec3 scale = arch.coord_scale();
  const MatrixXd& out = cache.output;
  std::vector<FieldEvaluation> evals(static_cast<std::size_t>(np));
  for (Index p = 0; p < np; ++p) {
    FieldEvaluation& e = evals[static_cast<std::size_t>(p)];
    e.value = Complex(out(0, p * channels), out(1, p * channels));
    if (channels >= 4) {
      for (int d = 0; d < 3; ++d) {
        const Index c = p * channels + 1 + d;
        e.gradient[d] = Complex(out(0, c), out(1, c)) / scale[d];
      }
    }
    if (channels == 7) {
      for (int d = 0; d < 3; ++d) {
        const Index c = p * channels + 4 + d;
        e.second_diag[d] = Complex(out(0, c), out(1, c)) / (scale[d] * scale[d]);
      }
    }
  }
  return evals;
}

void backward(const NetworkArch& arch, const NetworkParams& params, ForwardCache& cache,
              std::span<const FieldAdjoint> adjoints, NetworkParams& grad) {
  const int channels = channel_count(cache.order);
  const Index np = cache.points;
  if (static_cast<Index>(adjoints.size()) != np) throw DomainError("adjoint count does not match cached points");
  const Vec3 scale = arch.coord_scale();

  MatrixXd& ob = cache.out_bar;
  ob.setZero(2, channels * np);
  for (Index p = 0; p < np; ++p) {
    const FieldAdjoint& a = adjoints[static_cast<std::size_t>(p)];
    ob(0, p * channels) = a.value.real();
    ob(1, p * channels) = a.value.imag();
    if (channels >= 4) {
      for (int d = 0; d < 3; ++d) {
        const Index c = p * channels + 1 + d;
        ob(0, c) = a.gradient[d].real() / scale[d];
        ob(1, c) = a.gradient[d].imag() / scale[d];
      }
    }
    if (channels == 7) {
      for (int d = 0; d < 3; ++d) {
        const Index c = p * channels + 4 + d;
        const double s2 = scale[d] * scale[d];
        ob(0, c) = a.second_diag[d].real() / s2;
        ob(1, c) = a.second_diag[d].imag() / s2;
      }
    }
  }

  const std::size_t layers = params.hidden.size();
  affine_backward(cache.hidden.back(), ob, channels, np, grad.head);
  cache.h_bar.noalias() = params.head.weight.transpose() * ob;

  const Index width = params.head.weight.cols();
  cache.u_bar.setZero(width, channels * np);
  cache.d_bar.setZero(width, channels * np);
  for (std::size_t k = layers; k-- > 0;) {
    const MatrixXd& in = k == 0 ? cache.input : cache.hidden[k - 1];
    const double w = k == 0 ? arch.omega0 : arch.omega_hidden;
    cache.u_bar += cache.h_bar;
    gate_backward(cache.gate[k].out, cache.diff, cache.h_bar, channels, np, cache.z_bar, cache.d_bar);
    sine_backward(w, channels, np, cache.gate[k], cache.z_bar, cache.q_bar);
    affine_backward(in, cache.q_bar, channels, np, grad.hidden[k]);
    if (k > 0) cache.h_bar.noalias() = params.hidden[k].weight.transpose() * cache.q_bar;
  }
  // diff = v - u
  cache.u_bar -= cache.d_bar;
  sine_backward(arch.omega0, channels, np, cache.enc_u, cache.u_bar, cache.q_bar);
  affine_backward(cache.input, cache.q_bar, channels, np, grad.enc_u);
  sine_backward(arch.omega0, channels, np, cache.enc_v, cache.d_bar, cache.q_bar);
  affine_backward(cache.input, cache.q_bar, channels, np, grad.enc_v);
}

std::vector<Complex> evaluate(const NetworkArch& arch, const NetworkParams& params, const Points& points) {
  ForwardCache cache;
  forward(arch, params, points, Order::kValue, cache);
  std::vector<Complex> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    out[p] = Complex(cache.output(0, static_cast<Index>(p)), cache.output(1, static_cast<Index>(p)));  // one channel
  }
  return out;
}

std::vector<FieldEvaluation> evaluate_with_spatial_derivatives(const NetworkArch& arch, const NetworkParams& params,
                                                               const Points& points) {
  ForwardCache cache;
  forward(arch, params, points, Order::kSecond, cache);
  return read_evaluations(arch, cache);
}

namespace {

bool finite(const FieldEvaluation& e) {
  auto ok = [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
  bool good = ok(e.value);
  for (int d = 0; d < 3; ++d) good = good && ok(e.gradient[d]) && ok(e.second_diag[d]);
  return good;
}

}  // namespace

LossAndGradient parameter_gradients(const NetworkArch& arch, const NetworkParams& params, const Points& points,
                                    Order order, const LossClosure& closure) {
  ForwardCache cache;
  forward(arch, params, points, order, cache);
  const std::vector<FieldEvaluation> evals = read_evaluations(arch, cache);
  for (std::size_t p = 0; p < evals.size(); ++p) {
    if (!finite(evals[p])) throw NumericError(fmt::format("non-finite network output at point {}", p));
  }
  std::vector<FieldAdjoint> adjoints(evals.size());
  LossAndGradient out;
  out.loss = closure(evals, adjoints);
  if (!std::isfinite(out.loss)) throw NumericError("loss closure returned a non-finite value");
  for (std::size_t p = 0; p < adjoints.size(); ++p) {
    if (!finite(adjoints[p])) throw NumericError(fmt::format("non-finite loss adjoint at point {}", p));
  }
  out.gradient = params.zeros_like();
  backward(arch, params, cache, adjoints, out.gradient);
  out.gradient.visit([](const std::string& name, auto m) {
    if (!m.allFinite()) throw NumericError(fmt::format("non-finite gradient in tensor {}", name));
  });
  return out;
}

}  // namespace impedans::nf
