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
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "bdpfl/data.hpp"
#include "bdpfl/errors.hpp"
#include "bdpfl/model.hpp"
#include "doctest.h"

using namespace bdpfl;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "bdpfl_test_data";
  fs::create_directories(dir);
  return dir;
}

void write_idx_pair(const fs::path& images, const fs::path& labels,
                    std::uint32_t n, std::uint32_t rows, std::uint32_t cols,
                    bool truncate_images = false) {
  auto be32 = [](std::ofstream& out, std::uint32_t v) {
    const unsigned char buf[4] = {
        static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
        static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(buf), 4);
  };
  std::ofstream img(images, std::ios::binary);
  be32(img, 0x00000803u);
  be32(img, n);
  be32(img, rows);
  be32(img, cols);
  std::size_t pixels = static_cast<std::size_t>(n) * rows * cols;
  if (truncate_images && pixels > 10) pixels -= 10;
  for (std::size_t i = 0; i < pixels; ++i) {
    img.put(static_cast<char>(i % 251));
  }
  img.close();
  std::ofstream lab(labels, std::ios::binary);
  be32(lab, 0x00000801u);
  be32(lab, n);
  for (std::uint32_t i = 0; i < n; ++i) lab.put(static_cast<char>(i % 10));
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("synth_data determinism and shape") {
  SynthSpec spec{3, 4, 50, 5.0, 1.0};
  RngStream a(11, 0);
  RngStream b(11, 0);
  const DataSet d1 = synth_data(spec, a);
  const DataSet d2 = synth_data(spec, b);
  CHECK(d1.n() == 150);
  CHECK(d1.dim == 4);
  CHECK(d1.features == d2.features);
  CHECK(d1.labels == d2.labels);
}

TEST_CASE("synth_data separation 0 gives chance-level Bayes accuracy") {
  SynthSpec spec{4, 3, 2500, 0.0, 1.0};
  RngStream rng(21, 0);
  const DataSet d = synth_data(spec, rng);
  // With identical centers the nearest-center rule degenerates to a constant
  // guess; its accuracy is the frequency of one class.
  long hits = 0;
  for (std::size_t i = 0; i < d.n(); ++i) {
    if (d.labels[i] == 0) ++hits;
  }
  const double acc = static_cast<double>(hits) / d.n();
  CHECK(std::abs(acc - 0.25) < 0.05);
}

TEST_CASE("synth_data large separation is linearly separable") {
  SynthSpec spec{2, 2, 5000, 10.0, 1.0};
  RngStream rng(31, 0);
  const DataSet d = synth_data(spec, rng);
  int violations = 0;
  for (std::size_t i = 0; i < d.n(); ++i) {
    const double x0 = d.example(i)[0];
    if ((d.labels[i] == 0 && x0 > 0.0) || (d.labels[i] == 1 && x0 < 0.0)) {
      ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("partition_iid") {
  SynthSpec spec{2, 2, 50, 2.0, 1.0};
  RngStream rng(5, 0);
  const DataSet d = synth_data(spec, rng);
  RngStream part(5, 1);
  const auto shards = partition_iid(d, 10, part);
  CHECK(shards.size() == 10);
  std::set<std::size_t> seen;
  for (const auto& s : shards) {
    CHECK(s.n_local() == 10);
    for (std::size_t id : s.example_ids) {
      CHECK(seen.insert(id).second);  // pairwise disjoint
    }
  }
  CHECK(seen.size() == d.n());  // union covers the data

  RngStream p1(5, 1);
  const auto again = partition_iid(d, 10, p1);
  for (int c = 0; c < 10; ++c) {
    CHECK(again[c].example_ids == shards[c].example_ids);
  }
  RngStream p2(5, 2);
  CHECK_THROWS_AS(partition_iid(d, 101, p2), DomainError);
}

TEST_CASE("partition_iid sizes differ by at most one") {
  SynthSpec spec{2, 2, 51, 2.0, 1.0};  // 102 examples over 10 clients
  RngStream rng(6, 0);
  const DataSet d = synth_data(spec, rng);
  RngStream part(6, 1);
  const auto shards = partition_iid(d, 10, part);
  std::size_t lo = d.n();
  std::size_t hi = 0;
  for (const auto& s : shards) {
    lo = std::min(lo, s.n_local());
    hi = std::max(hi, s.n_local());
  }
  CHECK(hi - lo <= 1);
}

TEST_CASE("partition_shards label-homogeneous assignment") {
  // 6000 points, 10 classes, 10 clients x 2 shards of 300.
  SynthSpec spec{10, 2, 600, 3.0, 1.0};
  RngStream rng(7, 0);
  const DataSet d = synth_data(spec, rng);
  RngStream part(7, 1);
  const auto shards = partition_shards(d, 10, 2, 300, part);
  for (const auto& s : shards) {
    CHECK(s.n_local() == 600);
    std::set<int> labels;
    for (std::size_t id : s.example_ids) labels.insert(d.labels[id]);
    CHECK(labels.size() <= 2);
  }

  RngStream part_single(7, 2);
  const auto single = partition_shards(d, 10, 1, 300, part_single);
  for (const auto& s : single) {
    std::set<int> labels;
    for (std::size_t id : s.example_ids) labels.insert(d.labels[id]);
    CHECK(labels.size() == 1);
  }

  RngStream part_fail(7, 3);
  CHECK_THROWS_AS(partition_shards(d, 100, 2, 300, part_fail), DomainError);
}

TEST_CASE("load_idx round trip and official test-set shape") {
  const fs::path dir = temp_dir();
  write_idx_pair(dir / "images.idx", dir / "labels.idx", 10000, 28, 28);
  const DataSet d = load_idx((dir / "images.idx").string(),
                             (dir / "labels.idx").string());
  CHECK(d.n() == 10000);
  CHECK(d.dim == 784);
  for (int label : d.labels) {
    CHECK(label >= 0);
    CHECK(label <= 9);
  }
  // Pixels scaled to [0, 1].
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(d.features[i] >= 0.0);
    CHECK(d.features[i] <= 1.0);
  }
}

TEST_CASE("load_idx rejects malformed files") {
  const fs::path dir = temp_dir();
  write_idx_pair(dir / "trunc.idx", dir / "trunc_labels.idx", 100, 5, 5,
                 /*truncate_images=*/true);
  CHECK_THROWS_WITH_AS(
      load_idx((dir / "trunc.idx").string(), (dir / "trunc_labels.idx").string()),
      doctest::Contains("truncated at byte offset"), Error);

  std::ofstream bad(dir / "bad.idx", std::ios::binary);
  bad.write("\x00\x00\x08\x05", 4);
  bad.close();
  CHECK_THROWS_WITH_AS(
      load_idx((dir / "bad.idx").string(), (dir / "trunc_labels.idx").string()),
      doctest::Contains("bad image magic"), Error);
}

}  // TEST_SUITE

TEST_SUITE("model") {

TEST_CASE("logistic symmetric batch has zero mean gradient") {
  ModelSpec spec{ModelKind::kLogistic, 2, 2};
  ModelState model;
  model.weights.assign(spec.param_count(), 0.0);
  DataSet d;
  d.dim = 2;
  d.features = {1.0, 2.0, -1.0, -2.0};
  d.labels = {0, 1};
  const std::vector<std::size_t> batch{0, 1};
  const auto grads = model_gradient(spec, model, d, batch);
  for (std::size_t j = 0; j < spec.param_count(); ++j) {
    CHECK(grads[0][j] + grads[1][j] == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("duplicating an example duplicates its gradient row") {
  ModelSpec spec{ModelKind::kLogistic, 3, 2};
  RngStream rng(17, 0);
  ModelState model = init_model(spec, rng);
  for (double& w : model.weights) w = rng.normal();
  DataSet d;
  d.dim = 3;
  d.features = {0.5, -1.0, 2.0};
  d.labels = {1};
  const std::vector<std::size_t> batch{0, 0};
  const auto grads = model_gradient(spec, model, d, batch);
  CHECK(grads[0] == grads[1]);
}

TEST_CASE("per-example gradients match central finite differences") {
  for (ModelKind kind : {ModelKind::kLogistic, ModelKind::kMlp}) {
    ModelSpec spec{kind, 5, 3};
    RngStream rng(kind == ModelKind::kLogistic ? 100 : 200, 0);
    for (int instance = 0; instance < 20; ++instance) {
      ModelState model;
      model.weights.resize(spec.param_count());
      for (double& w : model.weights) w = 0.5 * rng.normal();
      std::vector<double> x(spec.dim);
      for (double& v : x) v = rng.normal();
      const int label = static_cast<int>(rng.uniform_index(spec.classes));

      std::vector<double> grad(spec.param_count());
      example_gradient(spec, model, x.data(), label, grad.data());

      const double h = 1e-5;
      for (std::size_t j = 0; j < spec.param_count(); ++j) {
        ModelState plus = model;
        plus.weights[j] += h;
        ModelState minus = model;
        minus.weights[j] -= h;
        const double fd = (example_loss(spec, plus, x.data(), label) -
                           example_loss(spec, minus, x.data(), label)) /
                          (2.0 * h);
        CHECK(std::abs(grad[j] - fd) <= 1e-5 * (1.0 + std::abs(fd)));
      }
    }
  }
}

TEST_CASE("model_gradient validates dimensions") {
  ModelSpec spec{ModelKind::kLogistic, 4, 2};
  ModelState model;
  model.weights.assign(spec.param_count(), 0.0);
  DataSet d;
  d.dim = 3;  // mismatch
  d.features = {1.0, 2.0, 3.0};
  d.labels = {0};
  const std::vector<std::size_t> batch{0};
  CHECK_THROWS_AS(model_gradient(spec, model, d, batch), DomainError);
  CHECK_THROWS_AS(model_gradient(spec, model, d, {}), DomainError);
}

TEST_CASE("accuracy on separable data after a few plain steps") {
  SynthSpec sspec{2, 2, 200, 8.0, 1.0};
  RngStream rng(300, 0);
  const DataSet d = synth_data(sspec, rng);
  ModelSpec spec{ModelKind::kLogistic, 2, 2};
  ModelState model;
  model.weights.assign(spec.param_count(), 0.0);
  std::vector<std::size_t> all(d.n());
  for (std::size_t i = 0; i < d.n(); ++i) all[i] = i;
  for (int step = 0; step < 50; ++step) {
    const auto grads = model_gradient(spec, model, d, all);
    std::vector<double> mean(spec.param_count(), 0.0);
    for (const auto& g : grads) {
      for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += g[j];
    }
    for (std::size_t j = 0; j < mean.size(); ++j) {
      model.weights[j] -= 0.5 * mean[j] / static_cast<double>(d.n());
    }
  }
  CHECK(accuracy(spec, model, d) > 0.95);
}

}  // TEST_SUITE
