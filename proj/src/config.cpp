// Copyright 2026 The dpminimax Authors
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

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "dpminimax/experiment.hpp"

namespace dpmm {

namespace {

struct Line {
  int number;
  std::string key;
  std::string value;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
}

class KeyTable {
 public:
  using Handler = std::function<void(const Line&)>;

  void add(const std::string& key, Handler handler) {
    handlers_[key] = std::move(handler);
  }

  void dispatch(const std::string& source, const Line& line) {
    const auto it = handlers_.find(line.key);
    if (it == handlers_.end()) {
      fail(source, line.number, "unknown key '" + line.key + "'");
    }
    it->second(line);
  }

 private:
  std::map<std::string, Handler> handlers_;
};

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& source_name) {
  std::vector<Line> lines;
  {
    std::istringstream stream(text);
    std::string raw;
    int number = 0;
    while (std::getline(stream, raw)) {
      ++number;
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw = raw.substr(0, hash);
      raw = trim(raw);
      if (raw.empty()) continue;
      const auto eq = raw.find('=');
      if (eq == std::string::npos) {
        fail(source_name, number, "expected 'key = value'");
      }
      Line line;
      line.number = number;
      line.key = trim(raw.substr(0, eq));
      line.value = trim(raw.substr(eq + 1));
      if (line.key.empty() || line.value.empty()) {
        fail(source_name, number, "expected 'key = value'");
      }
      lines.push_back(std::move(line));
    }
  }

  ExperimentConfig cfg;
  cfg.name = std::filesystem::path(source_name).stem().string();
  if (cfg.name.empty() || cfg.name == "<config>") cfg.name = "experiment";

  auto parse_double = [&](const Line& l) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(l.value, &pos);
      if (pos != l.value.size()) throw std::invalid_argument("trailing junk");
      return v;
    } catch (const std::exception&) {
      fail(source_name, l.number, "bad number '" + l.value + "'");
    }
  };
  auto parse_int = [&](const Line& l) {
    int v = 0;
    const auto res = std::from_chars(l.value.data(), l.value.data() + l.value.size(), v);
    if (res.ec != std::errc() || res.ptr != l.value.data() + l.value.size()) {
      fail(source_name, l.number, "bad integer '" + l.value + "'");
    }
    return v;
  };
  auto parse_u64 = [&](const Line& l) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(l.value.data(), l.value.data() + l.value.size(), v);
    if (res.ec != std::errc() || res.ptr != l.value.data() + l.value.size()) {
      fail(source_name, l.number, "bad integer '" + l.value + "'");
    }
    return v;
  };
  auto parse_bool = [&](const Line& l) {
    if (l.value == "true") return true;
    if (l.value == "false") return false;
    fail(source_name, l.number, "expected true or false, got '" + l.value + "'");
  };

  // Budget / noise fields are assembled after parsing.
  std::optional<double> budget_eps, budget_delta, report_eps, report_delta;
  std::optional<double> nsx, nsy, nsx1, nsx2, npdy;

  KeyTable table;
  table.add("name", [&](const Line& l) { cfg.name = l.value; });
  table.add("problem", [&](const Line& l) {
    if (l.value == "quadratic") cfg.problem = ProblemKind::kQuadratic;
    else if (l.value == "auc") cfg.problem = ProblemKind::kAuc;
    else if (l.value == "worst_group") cfg.problem = ProblemKind::kWorstGroup;
    else if (l.value == "td") cfg.problem = ProblemKind::kTd;
    else fail(source_name, l.number, "unknown problem '" + l.value + "'");
  });
  table.add("algorithm", [&](const Line& l) {
    if (l.value == "dp_sgda") cfg.algorithm = AlgorithmKind::kDpSgda;
    else if (l.value == "privatediff") cfg.algorithm = AlgorithmKind::kPrivateDiff;
    else if (l.value == "gda_reference") cfg.algorithm = AlgorithmKind::kGdaReference;
    else fail(source_name, l.number, "unknown algorithm '" + l.value + "'");
  });
  table.add("seeds", [&](const Line& l) {
    cfg.seeds.clear();
    std::stringstream ss(l.value);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      if (cell.empty()) fail(source_name, l.number, "empty seed entry");
      std::uint64_t v = 0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        fail(source_name, l.number, "bad seed '" + cell + "'");
      }
      cfg.seeds.push_back(v);
    }
    if (cfg.seeds.empty()) fail(source_name, l.number, "seeds must be non-empty");
  });
  table.add("out", [&](const Line& l) { cfg.out_dir = l.value; });
  table.add("metrics.stride", [&](const Line& l) { cfg.metrics_stride = parse_int(l); });
  table.add("trace.store_iterates", [&](const Line& l) { cfg.store_iterates = parse_bool(l); });
  table.add("trace.wallclock", [&](const Line& l) { cfg.wallclock = parse_bool(l); });
  table.add("accountant.lambda_max", [&](const Line& l) { cfg.lambda_max = parse_int(l); });
  table.add("workers", [&](const Line& l) { cfg.workers = parse_int(l); });
  table.add("schedule", [&](const Line& l) {
    if (l.value == "theory") cfg.theory_schedule = true;
    else if (l.value == "explicit") cfg.theory_schedule = false;
    else fail(source_name, l.number, "schedule must be theory or explicit");
  });

  table.add("budget.epsilon", [&](const Line& l) { budget_eps = parse_double(l); });
  table.add("budget.delta", [&](const Line& l) { budget_delta = parse_double(l); });
  table.add("report.epsilon", [&](const Line& l) { report_eps = parse_double(l); });
  table.add("report.delta", [&](const Line& l) { report_delta = parse_double(l); });
  table.add("noise.sigma_x", [&](const Line& l) { nsx = parse_double(l); });
  table.add("noise.sigma_y", [&](const Line& l) { nsy = parse_double(l); });
  table.add("noise.sigma_x1", [&](const Line& l) { nsx1 = parse_double(l); });
  table.add("noise.sigma_x2", [&](const Line& l) { nsx2 = parse_double(l); });

  table.add("sgda.T", [&](const Line& l) { cfg.sgda.iterations = parse_int(l); });
  table.add("sgda.m", [&](const Line& l) { cfg.sgda.batch_size = parse_int(l); });
  table.add("sgda.eta_x", [&](const Line& l) { cfg.sgda.step_x = parse_double(l); });
  table.add("sgda.eta_y", [&](const Line& l) { cfg.sgda.step_y = parse_double(l); });
  table.add("sgda.C1", [&](const Line& l) { cfg.sgda.clip_x = parse_double(l); });
  table.add("sgda.C2", [&](const Line& l) { cfg.sgda.clip_y = parse_double(l); });

  table.add("pd.R", [&](const Line& l) { cfg.privatediff.rounds = parse_int(l); });
  table.add("pd.T", [&](const Line& l) { cfg.privatediff.restart_interval = parse_int(l); });
  table.add("pd.T2", [&](const Line& l) { cfg.privatediff.inner_iterations = parse_int(l); });
  table.add("pd.m", [&](const Line& l) { cfg.privatediff.batch_size = parse_int(l); });
  table.add("pd.eta_x", [&](const Line& l) { cfg.privatediff.step_x = parse_double(l); });
  table.add("pd.C0", [&](const Line& l) { cfg.privatediff.clip_sga = parse_double(l); });
  table.add("pd.C1", [&](const Line& l) { cfg.privatediff.clip_restart = parse_double(l); });
  table.add("pd.C2", [&](const Line& l) { cfg.privatediff.clip_diff_slope = parse_double(l); });
  table.add("pd.C3", [&](const Line& l) { cfg.privatediff.clip_diff_const = parse_double(l); });

  table.add("gda.T", [&](const Line& l) { cfg.gda.iterations = parse_int(l); });
  table.add("gda.eta_x", [&](const Line& l) { cfg.gda.step_x = parse_double(l); });
  table.add("gda.eta_y", [&](const Line& l) { cfg.gda.step_y = parse_double(l); });

  table.add("quadratic.n", [&](const Line& l) { cfg.quadratic.n = parse_int(l); });
  table.add("quadratic.d1", [&](const Line& l) { cfg.quadratic.d1 = parse_int(l); });
  table.add("quadratic.d2", [&](const Line& l) { cfg.quadratic.d2 = parse_int(l); });
  table.add("quadratic.s", [&](const Line& l) { cfg.quadratic.sin_weight = parse_double(l); });
  table.add("quadratic.rho", [&](const Line& l) { cfg.quadratic.ridge = parse_double(l); });
  table.add("quadratic.mu", [&](const Line& l) { cfg.quadratic.mu = parse_double(l); });
  table.add("quadratic.lambda", [&](const Line& l) { cfg.quadratic.diameter_y = parse_double(l); });
  table.add("quadratic.x_box", [&](const Line& l) { cfg.quadratic.x_box = parse_double(l); });
  table.add("quadratic.coupling", [&](const Line& l) { cfg.quadratic.coupling_spread = parse_double(l); });
  table.add("quadratic.data_seed", [&](const Line& l) { cfg.quadratic.data_seed = parse_u64(l); });
  table.add("quadratic.x0_radius", [&](const Line& l) { cfg.quadratic.x0_radius = parse_double(l); });

  table.add("auc.csv", [&](const Line& l) { cfg.auc.csv_path = l.value; });
  table.add("auc.n", [&](const Line& l) { cfg.auc.n = parse_int(l); });
  table.add("auc.d", [&](const Line& l) { cfg.auc.dim = parse_int(l); });
  table.add("auc.imbalance", [&](const Line& l) { cfg.auc.imbalance = parse_double(l); });
  table.add("auc.separation", [&](const Line& l) { cfg.auc.separation = parse_double(l); });
  table.add("auc.data_seed", [&](const Line& l) { cfg.auc.data_seed = parse_u64(l); });
  table.add("auc.lambda_alpha", [&](const Line& l) { cfg.auc.lambda_alpha = parse_double(l); });
  table.add("auc.x_box", [&](const Line& l) { cfg.auc.x_box = parse_double(l); });

  table.add("worst_group.groups", [&](const Line& l) { cfg.worst_group.groups = parse_int(l); });
  table.add("worst_group.per_group", [&](const Line& l) { cfg.worst_group.per_group = parse_int(l); });
  table.add("worst_group.d", [&](const Line& l) { cfg.worst_group.dim = parse_int(l); });
  table.add("worst_group.shift", [&](const Line& l) { cfg.worst_group.shift = parse_double(l); });
  table.add("worst_group.data_seed", [&](const Line& l) { cfg.worst_group.data_seed = parse_u64(l); });
  table.add("worst_group.x_box", [&](const Line& l) { cfg.worst_group.x_box = parse_double(l); });

  table.add("td.states", [&](const Line& l) { cfg.td.states = parse_int(l); });
  table.add("td.gamma", [&](const Line& l) { cfg.td.discount = parse_double(l); });
  table.add("td.n", [&](const Line& l) { cfg.td.n = parse_int(l); });
  table.add("td.omega_radius", [&](const Line& l) { cfg.td.omega_radius = parse_double(l); });
  table.add("td.data_seed", [&](const Line& l) { cfg.td.data_seed = parse_u64(l); });

  std::map<std::string, int> seen;
  for (const auto& line : lines) {
    const auto [it, inserted] = seen.emplace(line.key, line.number);
    if (!inserted) {
      fail(source_name, line.number,
           "duplicate key '" + line.key + "' (first at line " +
               std::to_string(it->second) + ")");
    }
    table.dispatch(source_name, line);
  }

  if (budget_eps.has_value() != budget_delta.has_value()) {
    throw ConfigError(source_name +
                      ": budget.epsilon and budget.delta must be given together");
  }
  if (budget_eps) {
    cfg.budget = PrivacyBudget{*budget_eps, *budget_delta};
  }
  if (report_eps.has_value() != report_delta.has_value()) {
    throw ConfigError(source_name +
                      ": report.epsilon and report.delta must be given together");
  }
  if (report_eps) {
    cfg.report = PrivacyBudget{*report_eps, *report_delta};
  }
  if (nsx1 || nsx2) {
    if (!(nsx1 && nsx2 && nsy)) {
      throw ConfigError(source_name +
                        ": noise.sigma_x1, noise.sigma_x2 and noise.sigma_y must "
                        "be given together");
    }
    if (nsx) {
      throw ConfigError(source_name +
                        ": noise.sigma_x conflicts with noise.sigma_x1/x2");
    }
    cfg.noise_privatediff = NoiseScalesPrivateDiff{*nsx1, *nsx2, *nsy};
  } else if (nsx || nsy) {
    if (!(nsx && nsy)) {
      throw ConfigError(source_name +
                        ": noise.sigma_x and noise.sigma_y must be given together");
    }
    cfg.noise_sgda = NoiseScalesSgda{*nsx, *nsy};
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw ConfigError("cannot open config file " + path);
  }
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_config_text(buffer.str(), path);
}

void ExperimentConfig::validate() const {
  if (seeds.empty()) {
    throw ConfigError(name + ": seeds must be non-empty");
  }
  if (metrics_stride < 0) {
    throw ConfigError(name + ": metrics.stride must be nonnegative");
  }
  if (lambda_max < 1) {
    throw ConfigError(name + ": accountant.lambda_max must be >= 1");
  }
  if (workers < 1) {
    throw ConfigError(name + ": workers must be >= 1");
  }
  const bool is_private = algorithm != AlgorithmKind::kGdaReference;
  const bool has_noise = noise_sgda.has_value() || noise_privatediff.has_value();
  if (is_private) {
    if (budget.has_value() == has_noise) {
      throw ConfigError(name +
                        ": exactly one of budget.* or noise.* must be provided");
    }
    if (budget) budget->validate();
    if (report && budget) {
      throw ConfigError(name + ": report.* is only valid with explicit noise");
    }
    if (report) report->validate();
  } else {
    if (budget || has_noise || report) {
      throw ConfigError(name + ": gda_reference takes no budget or noise keys");
    }
  }
  if (theory_schedule && is_private && !budget) {
    throw ConfigError(name + ": schedule = theory requires budget mode");
  }
  if (algorithm == AlgorithmKind::kDpSgda && noise_privatediff) {
    throw ConfigError(name + ": dp_sgda uses noise.sigma_x / noise.sigma_y");
  }
  if (algorithm == AlgorithmKind::kPrivateDiff && noise_sgda) {
    throw ConfigError(name +
                      ": privatediff uses noise.sigma_x1 / noise.sigma_x2 / "
                      "noise.sigma_y");
  }
}

}  // namespace dpmm
