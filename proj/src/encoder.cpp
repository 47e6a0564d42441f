/*
 * Copyright 2026 The rankbound Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rankbound/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "rankbound/error.hpp"

namespace rankbound {
namespace {

constexpr double kNormFloor = 1e-8;

Eigen::MatrixXd Gaussian(int rows, int cols, double scale,
                         std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return m;
}

}  // namespace

EncoderKind parse_encoder_kind(const std::string& name) {
  if (name == "linear") return EncoderKind::kLinear;
  if (name == "mlp") return EncoderKind::kMlp;
  throw Error("unknown encoder: " + name + " (expected linear or mlp)");
}

std::string to_string(EncoderKind kind) {
  return kind == EncoderKind::kLinear ? "linear" : "mlp";
}

Encoder Encoder::Linear(int in_dim, int out_dim, std::mt19937_64& rng) {
  if (in_dim < 1 || out_dim < 2) throw Error("encoder dimensions too small");
  Encoder e;
  e.kind_ = EncoderKind::kLinear;
  e.w1_ = Gaussian(out_dim, in_dim, 1.0 / std::sqrt(in_dim), rng);
  return e;
}

Encoder Encoder::Mlp(int in_dim, int hidden, int out_dim,
                     std::mt19937_64& rng) {
  if (in_dim < 1 || hidden < 1 || out_dim < 2) {
    throw Error("encoder dimensions too small");
  }
  Encoder e;
  e.kind_ = EncoderKind::kMlp;
  e.w1_ = Gaussian(hidden, in_dim, 1.0 / std::sqrt(in_dim), rng);
  e.b1_ = Eigen::VectorXd::Zero(hidden);
  e.w2_ = Gaussian(out_dim, hidden, 1.0 / std::sqrt(hidden), rng);
  return e;
}

Encoder Encoder::FromTensors(EncoderKind kind,
                             const std::vector<Eigen::MatrixXd>& tensors) {
  Encoder e;
  e.kind_ = kind;
  if (kind == EncoderKind::kLinear) {
    if (tensors.size() != 1) throw Error("linear encoder needs one tensor");
    e.w1_ = tensors[0];
  } else {
    if (tensors.size() != 3 || tensors[1].cols() != 1 ||
        tensors[1].rows() != tensors[0].rows() ||
        tensors[2].cols() != tensors[0].rows()) {
      throw Error("mlp encoder tensors have inconsistent shapes");
    }
    e.w1_ = tensors[0];
    e.b1_ = tensors[1].col(0);
    e.w2_ = tensors[2];
  }
  return e;
}

int Encoder::in_dim() const { return static_cast<int>(w1_.cols()); }

int Encoder::out_dim() const {
  return static_cast<int>(kind_ == EncoderKind::kLinear ? w1_.rows()
                                                        : w2_.rows());
}

Eigen::MatrixXd Encoder::Forward(const Eigen::MatrixXd& x,
                                 Cache* cache) const {
  if (x.cols() != w1_.cols()) throw Error("encoder input dimension mismatch");
  if (kind_ == EncoderKind::kLinear) {
    if (cache != nullptr) cache->input = x;
    return x * w1_.transpose();
  }
  Eigen::MatrixXd hidden = x * w1_.transpose();
  hidden.rowwise() += b1_.transpose();
  hidden = hidden.array().tanh().matrix();
  Eigen::MatrixXd out = hidden * w2_.transpose();
  if (cache != nullptr) {
    cache->input = x;
    cache->hidden = std::move(hidden);
  }
  return out;
}

std::vector<double> Encoder::Backward(const Cache& cache,
                                      const Eigen::MatrixXd& d_out) const {
  std::vector<double> flat;
  flat.reserve(num_parameters());
  auto append = [&flat](const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
    }
  };
  if (kind_ == EncoderKind::kLinear) {
    append(d_out.transpose() * cache.input);
    return flat;
  }
  const Eigen::MatrixXd d_w2 = d_out.transpose() * cache.hidden;
  const Eigen::MatrixXd d_hidden =
      ((d_out * w2_).array() * (1.0 - cache.hidden.array().square())).matrix();
  append(d_hidden.transpose() * cache.input);
  append(d_hidden.colwise().sum().transpose());
  append(d_w2);
  return flat;
}

std::size_t Encoder::num_parameters() const {
  return static_cast<std::size_t>(w1_.size() + b1_.size() + w2_.size());
}

std::vector<double> Encoder::parameters() const {
  std::vector<double> flat;
  flat.reserve(num_parameters());
  for (const auto& t : tensors()) {
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      for (Eigen::Index c = 0; c < t.cols(); ++c) flat.push_back(t(r, c));
    }
  }
  return flat;
}

void Encoder::set_parameters(std::span<const double> flat) {
  if (flat.size() != num_parameters()) {
    throw Error("parameter vector has wrong length");
  }
  std::size_t i = 0;
  auto fill = [&](auto& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = flat[i++];
    }
  };
  fill(w1_);
  if (kind_ == EncoderKind::kMlp) {
    for (Eigen::Index r = 0; r < b1_.size(); ++r) b1_[r] = flat[i++];
    fill(w2_);
  }
}

std::vector<Eigen::MatrixXd> Encoder::tensors() const {
  if (kind_ == EncoderKind::kLinear) return {w1_};
  return {w1_, Eigen::MatrixXd(b1_), w2_};
}

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& x,
                               Eigen::VectorXd* norms) {
  Eigen::MatrixXd y = x;
  Eigen::VectorXd n(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    n[i] = std::max(x.row(i).norm(), kNormFloor);
    y.row(i) /= n[i];
  }
  if (norms != nullptr) *norms = std::move(n);
  return y;
}

Eigen::MatrixXd normalize_rows_backward(const Eigen::MatrixXd& y,
                                        const Eigen::VectorXd& norms,
                                        const Eigen::MatrixXd& d_y) {
  Eigen::MatrixXd d_x(y.rows(), y.cols());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const double along = y.row(i).dot(d_y.row(i));
    d_x.row(i) = (d_y.row(i) - along * y.row(i)) / norms[i];
  }
  return d_x;
}

}  // namespace rankbound
