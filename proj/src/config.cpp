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
#include "bdpfl/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bdpfl/errors.hpp"

namespace bdpfl {

std::string to_string(PrivacyMode mode) {
  switch (mode) {
    case PrivacyMode::kClient: return "client";
    case PrivacyMode::kInstanceSeq: return "instance_seq";
    case PrivacyMode::kInstancePar: return "instance_par";
    case PrivacyMode::kJoint: return "joint";
  }
  return "?";
}

std::string to_string(PartitionKind kind) {
  return kind == PartitionKind::kIid ? "iid" : "shards";
}

std::string to_string(DataKind kind) {
  return kind == DataKind::kSynthetic ? "synthetic" : "idx";
}

std::string to_string(ModelKind kind) {
  return kind == ModelKind::kLogistic ? "logistic" : "mlp";
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

double parse_double(const Entry& e) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ParseError("invalid numeric value for " + e.section + "." + e.key,
                     e.line);
  }
}

long long parse_int(const Entry& e) {
  long long v = 0;
  const auto* begin = e.value.data();
  const auto* end = begin + e.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("invalid integer value for " + e.section + "." + e.key,
                     e.line);
  }
  return v;
}

void require(bool ok, const std::string& message, int line) {
  if (!ok) throw ParseError(message, line);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  std::vector<Entry> entries;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "experiment" && section != "model" &&
          section != "privacy" && section != "data" && section != "output") {
        throw ParseError("unknown section [" + section + "]", line_no);
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    if (section.empty()) throw ParseError("key outside any section", line_no);
    entries.push_back(Entry{section, trim(line.substr(0, eq)),
                            trim(line.substr(eq + 1)), line_no});
  }

  for (const Entry& e : entries) {
    const std::string qual = e.section + "." + e.key;
    if (e.section == "experiment") {
      if (e.key == "seed") {
        const long long v = parse_int(e);
        require(v >= 0, "seed must be >= 0", e.line);
        cfg.experiment.seed = static_cast<std::uint64_t>(v);
      } else if (e.key == "rounds") {
        const long long v = parse_int(e);
        require(v >= 0, "rounds must be >= 0", e.line);
        cfg.experiment.rounds = static_cast<int>(v);
      } else if (e.key == "clients") {
        const long long v = parse_int(e);
        require(v >= 1, "clients must be >= 1", e.line);
        cfg.experiment.clients = static_cast<int>(v);
      } else if (e.key == "participation") {
        const double v = parse_double(e);
        require(v > 0.0 && v <= 1.0, "participation must lie in (0, 1]", e.line);
        cfg.experiment.participation = v;
      } else if (e.key == "partition") {
        if (e.value == "iid") {
          cfg.experiment.partition = PartitionKind::kIid;
        } else if (e.value == "shards") {
          cfg.experiment.partition = PartitionKind::kShards;
        } else {
          throw ParseError("partition must be iid or shards", e.line);
        }
      } else if (e.key == "shards_per_client") {
        const long long v = parse_int(e);
        require(v >= 1, "shards_per_client must be >= 1", e.line);
        cfg.experiment.shards_per_client = static_cast<int>(v);
      } else {
        throw ParseError("unknown key " + qual, e.line);
      }
    } else if (e.section == "model") {
      if (e.key == "kind") {
        if (e.value == "logistic") {
          cfg.model.kind = ModelKind::kLogistic;
        } else if (e.value == "mlp") {
          cfg.model.kind = ModelKind::kMlp;
        } else {
          throw ParseError("model kind must be logistic or mlp", e.line);
        }
      } else if (e.key == "dimension") {
        const long long v = parse_int(e);
        require(v >= 2, "dimension must be >= 2", e.line);
        cfg.model.dimension = static_cast<int>(v);
      } else if (e.key == "classes") {
        const long long v = parse_int(e);
        require(v >= 2, "classes must be >= 2", e.line);
        cfg.model.classes = static_cast<int>(v);
      } else if (e.key == "learning_rate") {
        const double v = parse_double(e);
        require(v > 0.0, "learning_rate must be > 0", e.line);
        cfg.model.learning_rate = v;
        cfg.model.learning_rate_set = true;
      } else {
        throw ParseError("unknown key " + qual, e.line);
      }
    } else if (e.section == "privacy") {
      if (e.key == "mode") {
        if (e.value == "client") {
          cfg.privacy.mode = PrivacyMode::kClient;
        } else if (e.value == "instance_seq") {
          cfg.privacy.mode = PrivacyMode::kInstanceSeq;
        } else if (e.value == "instance_par") {
          cfg.privacy.mode = PrivacyMode::kInstancePar;
        } else if (e.value == "joint") {
          cfg.privacy.mode = PrivacyMode::kJoint;
        } else {
          throw ParseError(
              "mode must be client, instance_seq, instance_par or joint",
              e.line);
        }
      } else if (e.key == "sigma_client") {
        const double v = parse_double(e);
        require(v >= 0.0, "sigma_client must be >= 0", e.line);
        cfg.privacy.sigma_client = v;
      } else if (e.key == "sigma_instance") {
        const double v = parse_double(e);
        require(v >= 0.0, "sigma_instance must be >= 0", e.line);
        cfg.privacy.sigma_instance = v;
      } else if (e.key == "clip_client") {
        const double v = parse_double(e);
        require(v > 0.0, "clip_client must be > 0", e.line);
        cfg.privacy.clip_client = v;
      } else if (e.key == "clip_instance") {
        const double v = parse_double(e);
        require(v > 0.0, "clip_instance must be > 0", e.line);
        cfg.privacy.clip_instance = v;
      } else if (e.key == "batch") {
        const long long v = parse_int(e);
        require(v >= 0, "batch must be >= 0 (0 = full local data)", e.line);
        cfg.privacy.batch = static_cast<int>(v);
      } else if (e.key == "delta") {
        const double v = parse_double(e);
        require(v > 0.0 && v < 1.0, "delta must lie in (0, 1)", e.line);
        cfg.privacy.delta = v;
      } else if (e.key == "lambda_max") {
        const long long v = parse_int(e);
        require(v >= 1, "lambda_max must be >= 1", e.line);
        cfg.privacy.lambda_max = static_cast<int>(v);
      } else if (e.key == "estimator_samples") {
        const long long v = parse_int(e);
        require(v == 0 || v >= 2, "estimator_samples must be 0 (all) or >= 2",
                e.line);
        cfg.privacy.estimator_samples = static_cast<int>(v);
      } else if (e.key == "epsilon_budget") {
        const double v = parse_double(e);
        require(v >= 0.0, "epsilon_budget must be >= 0 (0 disables)", e.line);
        cfg.privacy.epsilon_budget = v;
      } else {
        throw ParseError("unknown key " + qual, e.line);
      }
    } else if (e.section == "data") {
      if (e.key == "kind") {
        if (e.value == "synthetic") {
          cfg.data.kind = DataKind::kSynthetic;
        } else if (e.value == "idx") {
          cfg.data.kind = DataKind::kIdx;
        } else {
          throw ParseError("data kind must be synthetic or idx", e.line);
        }
      } else if (e.key == "per_class") {
        const long long v = parse_int(e);
        require(v >= 1, "per_class must be >= 1", e.line);
        cfg.data.per_class = static_cast<int>(v);
      } else if (e.key == "separation") {
        const double v = parse_double(e);
        require(v >= 0.0, "separation must be >= 0", e.line);
        cfg.data.separation = v;
      } else if (e.key == "cluster_std") {
        const double v = parse_double(e);
        require(v >= 0.0, "cluster_std must be >= 0", e.line);
        cfg.data.cluster_std = v;
      } else if (e.key == "images") {
        cfg.data.images = e.value;
      } else if (e.key == "labels") {
        cfg.data.labels = e.value;
      } else {
        throw ParseError("unknown key " + qual, e.line);
      }
    } else {  // output
      if (e.key == "csv") {
        cfg.output.csv = e.value;
      } else {
        throw ParseError("unknown key " + qual, e.line);
      }
    }
  }

  if (!cfg.model.learning_rate_set && cfg.model.kind == ModelKind::kMlp) {
    cfg.model.learning_rate = 0.1;
  }
  if (cfg.data.kind == DataKind::kIdx) {
    if (cfg.data.images.empty()) throw ParseError("missing required key data.images", 0);
    if (cfg.data.labels.empty()) throw ParseError("missing required key data.labels", 0);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "[experiment]\n";
  out << "seed = " << cfg.experiment.seed << "\n";
  out << "rounds = " << cfg.experiment.rounds << "\n";
  out << "clients = " << cfg.experiment.clients << "\n";
  out << "participation = " << num(cfg.experiment.participation) << "\n";
  out << "partition = " << to_string(cfg.experiment.partition) << "\n";
  out << "shards_per_client = " << cfg.experiment.shards_per_client << "\n";
  out << "[model]\n";
  out << "kind = " << to_string(cfg.model.kind) << "\n";
  out << "dimension = " << cfg.model.dimension << "\n";
  out << "classes = " << cfg.model.classes << "\n";
  out << "learning_rate = " << num(cfg.model.learning_rate) << "\n";
  out << "[privacy]\n";
  out << "mode = " << to_string(cfg.privacy.mode) << "\n";
  out << "sigma_client = " << num(cfg.privacy.sigma_client) << "\n";
  out << "sigma_instance = " << num(cfg.privacy.sigma_instance) << "\n";
  out << "clip_client = " << num(cfg.privacy.clip_client) << "\n";
  out << "clip_instance = " << num(cfg.privacy.clip_instance) << "\n";
  out << "batch = " << cfg.privacy.batch << "\n";
  out << "delta = " << num(cfg.privacy.delta) << "\n";
  out << "lambda_max = " << cfg.privacy.lambda_max << "\n";
  out << "estimator_samples = " << cfg.privacy.estimator_samples << "\n";
  out << "epsilon_budget = " << num(cfg.privacy.epsilon_budget) << "\n";
  out << "[data]\n";
  out << "kind = " << to_string(cfg.data.kind) << "\n";
  out << "per_class = " << cfg.data.per_class << "\n";
  out << "separation = " << num(cfg.data.separation) << "\n";
  out << "cluster_std = " << num(cfg.data.cluster_std) << "\n";
  if (!cfg.data.images.empty()) out << "images = " << cfg.data.images << "\n";
  if (!cfg.data.labels.empty()) out << "labels = " << cfg.data.labels << "\n";
  out << "[output]\n";
  out << "csv = " << cfg.output.csv << "\n";
  return out.str();
}

}  // namespace bdpfl
