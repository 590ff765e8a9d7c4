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
#include "bdpfl/model.hpp"

#include <algorithm>
#include <cmath>

#include "bdpfl/errors.hpp"

namespace bdpfl {

namespace {

// Log-softmax in place; returns log(sum(exp(logits))) shift-stably.
void log_softmax(std::vector<double>& logits) {
  double hi = logits[0];
  for (double v : logits) hi = std::max(hi, v);
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - hi);
  const double lse = hi + std::log(sum);
  for (double& v : logits) v -= lse;
}

// Logistic weights layout: classes rows of (dim + 1) columns, bias last.
// Mlp layout: W1 (hidden x (dim+1)) followed by W2 (classes x (hidden+1)).

void logistic_logits(const ModelSpec& spec, const ModelState& model,
                     const double* x, std::vector<double>& logits) {
  const int d = spec.dim;
  logits.assign(spec.classes, 0.0);
  for (int c = 0; c < spec.classes; ++c) {
    const double* w = model.weights.data() + c * (d + 1);
    double z = w[d];
    for (int j = 0; j < d; ++j) z += w[j] * x[j];
    logits[c] = z;
  }
}

struct MlpForward {
  std::vector<double> hidden;  // tanh activations
  std::vector<double> logits;
};

void mlp_forward(const ModelSpec& spec, const ModelState& model,
                 const double* x, MlpForward& fwd) {
  const int d = spec.dim;
  const int h = kMlpHiddenUnits;
  fwd.hidden.assign(h, 0.0);
  for (int u = 0; u < h; ++u) {
    const double* w = model.weights.data() + u * (d + 1);
    double z = w[d];
    for (int j = 0; j < d; ++j) z += w[j] * x[j];
    fwd.hidden[u] = std::tanh(z);
  }
  const double* w2 = model.weights.data() + h * (d + 1);
  fwd.logits.assign(spec.classes, 0.0);
  for (int c = 0; c < spec.classes; ++c) {
    const double* w = w2 + c * (h + 1);
    double z = w[h];
    for (int u = 0; u < h; ++u) z += w[u] * fwd.hidden[u];
    fwd.logits[c] = z;
  }
}

}  // namespace

std::size_t ModelSpec::param_count() const {
  const std::size_t d = static_cast<std::size_t>(dim);
  const std::size_t c = static_cast<std::size_t>(classes);
  if (kind == ModelKind::kLogistic) return c * (d + 1);
  const std::size_t h = kMlpHiddenUnits;
  return h * (d + 1) + c * (h + 1);
}

ModelState init_model(const ModelSpec& spec, RngStream& rng) {
  ModelState state;
  state.weights.assign(spec.param_count(), 0.0);
  if (spec.kind == ModelKind::kMlp) {
    for (double& w : state.weights) w = 0.1 * rng.normal();
  }
  return state;
}

void example_gradient(const ModelSpec& spec, const ModelState& model,
                      const double* x, int label, double* out) {
  if (label < 0 || label >= spec.classes) {
    throw DomainError("example_gradient: label out of range");
  }
  const int d = spec.dim;
  std::fill(out, out + spec.param_count(), 0.0);
  if (spec.kind == ModelKind::kLogistic) {
    std::vector<double> logits;
    logistic_logits(spec, model, x, logits);
    log_softmax(logits);
    for (int c = 0; c < spec.classes; ++c) {
      const double err = std::exp(logits[c]) - (c == label ? 1.0 : 0.0);
      double* g = out + c * (d + 1);
      for (int j = 0; j < d; ++j) g[j] = err * x[j];
      g[d] = err;
    }
    return;
  }
  const int h = kMlpHiddenUnits;
  MlpForward fwd;
  mlp_forward(spec, model, x, fwd);
  log_softmax(fwd.logits);
  std::vector<double> dlogits(spec.classes);
  for (int c = 0; c < spec.classes; ++c) {
    dlogits[c] = std::exp(fwd.logits[c]) - (c == label ? 1.0 : 0.0);
  }
  double* g2 = out + h * (d + 1);
  for (int c = 0; c < spec.classes; ++c) {
    double* g = g2 + c * (h + 1);
    for (int u = 0; u < h; ++u) g[u] = dlogits[c] * fwd.hidden[u];
    g[h] = dlogits[c];
  }
  const double* w2 = model.weights.data() + h * (d + 1);
  for (int u = 0; u < h; ++u) {
    double dz = 0.0;
    for (int c = 0; c < spec.classes; ++c) {
      dz += dlogits[c] * w2[c * (h + 1) + u];
    }
    dz *= 1.0 - fwd.hidden[u] * fwd.hidden[u];
    double* g = out + u * (d + 1);
    for (int j = 0; j < d; ++j) g[j] = dz * x[j];
    g[d] = dz;
  }
}

std::vector<std::vector<double>> model_gradient(
    const ModelSpec& spec, const ModelState& model, const DataSet& data,
    std::span<const std::size_t> batch_ids) {
  if (batch_ids.empty()) throw DomainError("model_gradient: empty batch");
  if (data.dim != static_cast<std::size_t>(spec.dim)) {
    throw DomainError("model_gradient: feature dimension mismatch");
  }
  if (model.weights.size() != spec.param_count()) {
    throw DomainError("model_gradient: weight dimension mismatch");
  }
  std::vector<std::vector<double>> grads(batch_ids.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < batch_ids.size(); ++i) {
    grads[i].resize(spec.param_count());
    example_gradient(spec, model, data.example(batch_ids[i]),
                     data.labels[batch_ids[i]], grads[i].data());
  }
  return grads;
}

double example_loss(const ModelSpec& spec, const ModelState& model,
                    const double* x, int label) {
  std::vector<double> logits;
  if (spec.kind == ModelKind::kLogistic) {
    logistic_logits(spec, model, x, logits);
  } else {
    MlpForward fwd;
    mlp_forward(spec, model, x, fwd);
    logits = fwd.logits;
  }
  log_softmax(logits);
  return -logits[label];
}

int predict(const ModelSpec& spec, const ModelState& model, const double* x) {
  std::vector<double> logits;
  if (spec.kind == ModelKind::kLogistic) {
    logistic_logits(spec, model, x, logits);
  } else {
    MlpForward fwd;
    mlp_forward(spec, model, x, fwd);
    logits = fwd.logits;
  }
  // Ties resolve to the smallest class index.
  int best = 0;
  for (int c = 1; c < spec.classes; ++c) {
    if (logits[c] > logits[best]) best = c;
  }
  return best;
}

double accuracy(const ModelSpec& spec, const ModelState& model,
                const DataSet& data) {
  if (data.n() == 0) return 0.0;
  long correct = 0;
#pragma omp parallel for schedule(static) reduction(+ : correct)
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (predict(spec, model, data.example(i)) == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.n());
}

}  // namespace bdpfl
