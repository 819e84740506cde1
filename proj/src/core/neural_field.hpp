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

#pragma once

// SIREN-based modified MLP for one frequency's complex pressure patch.
//
//   u = sin(w0 (Wu x + bu)),  v = sin(w0 (Wv x + bv))
//   z_k = sin(w_k (W_k h_{k-1} + b_k)),  h_k = (1 - z_k) u + z_k v,  h_0 = x
//   (Re p, Im p) = W_out h_L + b_out
//
// x is the input normalized per axis so that the domain box maps to [-1, 1]^3.
// The forward pass carries, for every neuron, the value together with its
// first and second derivatives along the three coordinate axes. The reverse
// pass walks the same extended computation, so parameter gradients of losses
// built on the Laplacian or the normal derivative are exact.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "types.hpp"

namespace impedans::nf {

struct NetworkArch {
  int hidden_width = 64;
  int hidden_layers = 3;
  double omega0 = 1.0;        // first layer and both encoders
  double omega_hidden = 1.0;  // deeper layers
  Box box{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};

  void validate() const;
  /// Half extent of the box per axis: physical = center + scale * normalized.
  Vec3 coord_scale() const { return box.half_extent(); }
};

struct Affine {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

struct NetworkParams {
  Affine enc_u;
  Affine enc_v;
  std::vector<Affine> hidden;  // hidden[0] consumes the normalized coordinates
  Affine head;                 // 2 x width

  /// Calls f(name, map) for every tensor in a fixed order. Biases appear as n x 1.
  template <class F>
  void visit(F&& f) { visit_impl(*this, f); }
  template <class F>
  void visit(F&& f) const { visit_impl(*this, f); }

  std::size_t size() const;
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);
  NetworkParams zeros_like() const;
  void set_zero();
  double squared_norm() const;
  /// this += scale * other
  void add_scaled(const NetworkParams& other, double scale);
  bool all_finite() const;

 private:
  template <class Self, class F>
  static void visit_impl(Self& self, F& f) {
    using Matrix = std::conditional_t<std::is_const_v<Self>, const Eigen::MatrixXd, Eigen::MatrixXd>;
    auto affine = [&](const std::string& prefix, auto& a) {
      f(prefix + ".weight", Eigen::Map<Matrix>(a.weight.data(), a.weight.rows(), a.weight.cols()));
      f(prefix + ".bias", Eigen::Map<Matrix>(a.bias.data(), a.bias.rows(), 1));
    };
    affine("enc_u", self.enc_u);
    affine("enc_v", self.enc_v);
    for (std::size_t k = 0; k < self.hidden.size(); ++k) affine("hidden." + std::to_string(k), self.hidden[k]);
    affine("head", self.head);
  }
};

NetworkParams init_network(const NetworkArch& arch, std::uint64_t seed);

/// Pressure and its derivatives along the physical axes (per meter).
struct FieldEvaluation {
  Complex value;
  std::array<Complex, 3> gradient{};
  std::array<Complex, 3> second_diag{};

  Complex laplacian() const { return second_diag[0] + second_diag[1] + second_diag[2]; }
  Complex normal_derivative(Vec3 n) const { return n.x * gradient[0] + n.y * gradient[1] + n.z * gradient[2]; }
};

/// Adjoint of a FieldEvaluation: dL/dRe(.) in the real part and dL/dIm(.) in
/// the imaginary part of each entry.
using FieldAdjoint = FieldEvaluation;

/// Derivative order carried by a forward pass: 0 value only, 1 adds the
/// gradient, 2 adds the diagonal of the Hessian.
enum class Order : int { kValue = 0, kGradient = 1, kSecond = 2 };

constexpr int channel_count(Order order) { return order == Order::kValue ? 1 : (order == Order::kGradient ? 4 : 7); }

struct SineState {
  Eigen::MatrixXd pre;   // width x channels*points
  Eigen::ArrayXXd sin;   // width x points (value channel)
  Eigen::ArrayXXd cos;
  Eigen::MatrixXd out;   // width x channels*points
};

/// Intermediate state of one batched forward pass; reused across calls to
/// avoid reallocation. Channel c of point p lives in column p * channels + c.
struct ForwardCache {
  Order order = Order::kValue;
  Eigen::Index points = 0;
  Eigen::MatrixXd input;  // 3 x C*P
  SineState enc_u;
  SineState enc_v;
  Eigen::MatrixXd diff;   // v - u
  std::vector<SineState> gate;          // z_k
  std::vector<Eigen::MatrixXd> hidden;  // h_k, k = 1..L
  Eigen::MatrixXd output;               // 2 x C*P

  // backward scratch
  Eigen::MatrixXd h_bar, z_bar, q_bar, u_bar, d_bar, out_bar;
};

void forward(const NetworkArch& arch, const NetworkParams& params, const Points& points, Order order,
             ForwardCache& cache);

/// Converts the raw outputs of a cache into physical-unit evaluations.
std::vector<FieldEvaluation> read_evaluations(const NetworkArch& arch, const ForwardCache& cache);

/// Accumulates into grad the parameter gradient of a scalar whose adjoint with
/// respect to each evaluation of the cache is given (physical units).
void backward(const NetworkArch& arch, const NetworkParams& params, ForwardCache& cache,
              std::span<const FieldAdjoint> adjoints, NetworkParams& grad);

std::vector<Complex> evaluate(const NetworkArch& arch, const NetworkParams& params, const Points& points);

std::vector<FieldEvaluation> evaluate_with_spatial_derivatives(const NetworkArch& arch, const NetworkParams& params,
                                                               const Points& points);

/// Scalar loss over evaluations; writes its adjoint into the second argument
/// (pre-sized, zero-initialized) and returns the loss value.
using LossClosure = std::function<double(std::span<const FieldEvaluation>, std::span<FieldAdjoint>)>;

struct LossAndGradient {
  double loss = 0.0;
  NetworkParams gradient;
};

/// Exact gradient of closure(evaluate_with_spatial_derivatives(points)) with respect to params.
/// Throws NumericError naming the offending point or tensor on a non-finite value.
LossAndGradient parameter_gradients(const NetworkArch& arch, const NetworkParams& params, const Points& points,
                                    Order order, const LossClosure& closure);

}  // namespace impedans::nf
