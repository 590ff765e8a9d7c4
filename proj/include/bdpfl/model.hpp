// Copyright 2026 The bdpfl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef BDPFL_MODEL_HPP_
#define BDPFL_MODEL_HPP_

#include <span>
#include <vector>

#include "bdpfl/data.hpp"
#include "bdpfl/mechanism.hpp"

namespace bdpfl {

enum class ModelKind { kLogistic, kMlp };

// Width of the single tanh hidden layer of the mlp learner; fixed so the
// config surface stays minimal.
inline constexpr int kMlpHiddenUnits = 16;

struct ModelSpec {
  ModelKind kind = ModelKind::kLogistic;
  int dim = 2;
  int classes = 2;

  std::size_t param_count() const;
};

struct ModelState {
  std::vector<double> weights;
  int round = 0;
};

// Zero weights for the logistic learner; small deterministic normals for the
// mlp (zeros would never break hidden-unit symmetry).
ModelState init_model(const ModelSpec& spec, RngStream& rng);

// Per-example gradients of the average loss at the current weights:
// multinomial logistic loss for kLogistic, one-hidden-layer tanh network
// with softmax output for kMlp, both in exact closed form. Row i of the
// result is the gradient for batch_ids[i]. Throws on dimension mismatch.
std::vector<std::vector<double>> model_gradient(
    const ModelSpec& spec, const ModelState& model, const DataSet& data,
    std::span<const std::size_t> batch_ids);

// Gradient of a single example, written into `out` (size param_count).
void example_gradient(const ModelSpec& spec, const ModelState& model,
                      const double* x, int label, double* out);

double example_loss(const ModelSpec& spec, const ModelState& model,
                    const double* x, int label);

int predict(const ModelSpec& spec, const ModelState& model, const double* x);

// Fraction of examples predicted correctly; restricted to `ids` when
// non-empty.
double accuracy(const ModelSpec& spec, const ModelState& model,
                const DataSet& data);

}  // namespace bdpfl

#endif  // BDPFL_MODEL_HPP_
