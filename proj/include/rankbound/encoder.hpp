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

#ifndef RANKBOUND_ENCODER_HPP_
#define RANKBOUND_ENCODER_HPP_

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rankbound {

enum class EncoderKind { kLinear, kMlp };
EncoderKind parse_encoder_kind(const std::string& name);
std::string to_string(EncoderKind kind);

// Small embedding network: a linear map, or one tanh hidden layer followed
// by a linear map. Inputs and outputs are row-per-sample.
class Encoder {
 public:
  struct Cache {
    Eigen::MatrixXd input;
    Eigen::MatrixXd hidden;  // post-activation, MLP only
  };

  static Encoder Linear(int in_dim, int out_dim, std::mt19937_64& rng);
  static Encoder Mlp(int in_dim, int hidden, int out_dim, std::mt19937_64& rng);
  // Restores an encoder from its tensors (see tensors()).
  static Encoder FromTensors(EncoderKind kind,
                             const std::vector<Eigen::MatrixXd>& tensors);

  EncoderKind kind() const { return kind_; }
  int in_dim() const;
  int out_dim() const;

  Eigen::MatrixXd Forward(const Eigen::MatrixXd& x, Cache* cache) const;
  // Flat parameter gradient given d loss / d output.
  std::vector<double> Backward(const Cache& cache,
                               const Eigen::MatrixXd& d_out) const;

  std::size_t num_parameters() const;
  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> flat);
  // Linear: {W}. MLP: {W1, b1, W2}. Weights are out x in.
  std::vector<Eigen::MatrixXd> tensors() const;

 private:
  EncoderKind kind_ = EncoderKind::kLinear;
  Eigen::MatrixXd w1_;  // linear: the only weight
  Eigen::VectorXd b1_;
  Eigen::MatrixXd w2_;
};

// Row-wise L2 normalization with an epsilon floor on the norm.
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& x,
                               Eigen::VectorXd* norms = nullptr);
// Backward of normalize_rows: given y = x / |x| and dL/dy, returns dL/dx.
Eigen::MatrixXd normalize_rows_backward(const Eigen::MatrixXd& y,
                                        const Eigen::VectorXd& norms,
                                        const Eigen::MatrixXd& d_y);

}  // namespace rankbound

#endif  // RANKBOUND_ENCODER_HPP_
