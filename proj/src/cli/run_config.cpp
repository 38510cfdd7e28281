// Copyright 2026 The augsearch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "augsearch/cli/run_config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace augsearch {

void RunConfig::validate() const {
  AUGS_REQUIRE(dataSource == "synthetic" || dataSource == "cifar10",
               "config: data.source must be synthetic or cifar10");
  AUGS_REQUIRE(workers >= 1, "config: run.workers must be >= 1");
  AUGS_REQUIRE(subsample >= 0, "config: data.subsample must be >= 0");
  moco.validate();
  search.validate();
  probe.sgd.validate();
}

Dataset loadConfiguredDataset(const RunConfig& cfg) {
  Dataset data;
  if (cfg.dataSource == "synthetic") {
    data = genSynthetic(cfg.classes, cfg.perClass, {cfg.imageSize, cfg.imageSize}, cfg.seed);
  } else {
    data = loadCifar10(cfg.dataDir);
  }
  if (cfg.subsample > 0 && static_cast<std::size_t>(cfg.subsample) < data.size()) {
    data = subsample(data, cfg.subsample, cfg.seed);
  }
  return data;
}

std::vector<int> parseIntList(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  return out;
}

std::vector<std::pair<int, double>> parseSchedule(const std::string& text) {
  std::vector<std::pair<int, double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.emplace_back(std::stoi(item), 0.1);
    } else {
      out.emplace_back(std::stoi(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    }
  }
  return out;
}

namespace {

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> readConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::string section;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const std::string text = trimmed(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') {
        throw ParseError("config: unterminated section at " + path + ":" +
                         std::to_string(lineNo));
      }
      section = trimmed(text.substr(1, text.size() - 2));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config: expected key=value at " + path + ":" + std::to_string(lineNo));
    }
    std::string key = trimmed(text.substr(0, eq));
    std::string value = trimmed(text.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (!section.empty()) key = section + "." + key;
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

void applyConfigEntry(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto asInt = [&value] { return std::stoi(value); };
  auto asU64 = [&value] { return std::strtoull(value.c_str(), nullptr, 10); };
  auto asDouble = [&value] { return std::stod(value); };
  auto asBool = [&value] { return value == "true" || value == "1" || value == "yes"; };
  try {
    if (key == "data.source") cfg.dataSource = value;
    else if (key == "data.dir") cfg.dataDir = value;
    else if (key == "data.classes") cfg.classes = asInt();
    else if (key == "data.perClass") cfg.perClass = asInt();
    else if (key == "data.imageSize") cfg.imageSize = asInt();
    else if (key == "data.subsample") cfg.subsample = asInt();
    else if (key == "run.seed") cfg.seed = asU64();
    else if (key == "run.outDir") cfg.outDir = value;
    else if (key == "run.workers") cfg.workers = asInt();
    else if (key == "moco.epochs") cfg.moco.epochs = asInt();
    else if (key == "moco.batchSize") cfg.moco.batchSize = asInt();
    else if (key == "moco.queueSize") cfg.moco.queueSize = asInt();
    else if (key == "moco.momentum") cfg.moco.momentum = asDouble();
    else if (key == "moco.temperature") cfg.moco.temperature = asDouble();
    else if (key == "moco.lr") cfg.moco.sgd.lr = asDouble();
    else if (key == "moco.sgdMomentum") cfg.moco.sgd.momentum = asDouble();
    else if (key == "moco.weightDecay") cfg.moco.sgd.weightDecay = asDouble();
    else if (key == "moco.schedule") cfg.moco.sgd.schedule = parseSchedule(value);
    else if (key == "moco.channels") {
      cfg.moco.encoder.channels = parseIntList(value);
      cfg.moco.encoder.strides.assign(cfg.moco.encoder.channels.size(), 2);
      cfg.moco.encoder.strides[0] = 1;
    } else if (key == "moco.strides") cfg.moco.encoder.strides = parseIntList(value);
    else if (key == "moco.projectionDim") cfg.moco.encoder.projectionDim = asInt();
    else if (key == "moco.projectionHidden") cfg.moco.encoder.projectionHidden = asInt();
    else if (key == "moco.residualBlocks") cfg.moco.encoder.residualBlocks = asBool();
    else if (key == "search.K") cfg.search.K = asInt();
    else if (key == "search.T") cfg.search.T = asInt();
    else if (key == "search.B") cfg.search.B = asInt();
    else if (key == "search.P") cfg.search.P = asInt();
    else if (key == "search.nTauSearch") cfg.search.nTauSearch = asInt();
    else if (key == "search.loss") cfg.search.lossKind = lossKindFromName(value);
    else if (key == "search.lambdaRot") cfg.search.lambdaRot = asDouble();
    else if (key == "search.lambdaNce") cfg.search.lambdaNce = asDouble();
    else if (key == "search.baseEpochFraction") cfg.search.baseEpochFraction = asDouble();
    else if (key == "search.gamma") cfg.search.tpe.gamma = asDouble();
    else if (key == "search.candidates") cfg.search.tpe.nCandidates = asInt();
    else if (key == "search.startupTrials") cfg.search.tpe.nStartup = asInt();
    else if (key == "probe.epochs") cfg.probe.epochs = asInt();
    else if (key == "probe.batchSize") cfg.probe.batchSize = asInt();
    else if (key == "probe.lr") cfg.probe.sgd.lr = asDouble();
    else if (key == "probe.schedule") cfg.probe.sgd.schedule = parseSchedule(value);
    else if (key == "probe.holdout") cfg.probe.holdoutFraction = asDouble();
    else if (key == "randaugment.ntau") cfg.gridNTau = parseIntList(value);
    else if (key == "randaugment.lambda") cfg.gridLambda = parseIntList(value);
    else throw ParseError("config: unknown key \"" + key + "\"");
  } catch (const std::invalid_argument&) {
    throw ParseError("config: bad value \"" + value + "\" for key \"" + key + "\"");
  } catch (const std::out_of_range&) {
    throw ParseError("config: bad value \"" + value + "\" for key \"" + key + "\"");
  }
}

namespace {

std::string joinInts(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

std::string scheduleString(const std::vector<std::pair<int, double>>& schedule) {
  std::string out;
  char buf[48];
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i) out += ",";
    std::snprintf(buf, sizeof(buf), "%d:%g", schedule[i].first, schedule[i].second);
    out += buf;
  }
  return out;
}

}  // namespace

std::string resolvedConfigToml(const RunConfig& cfg) {
  std::ostringstream out;
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%g", v);
    return std::string(buf);
  };
  out << "[data]\n";
  out << "source=" << cfg.dataSource << "\n";
  out << "dir=" << cfg.dataDir << "\n";
  out << "classes=" << cfg.classes << "\n";
  out << "perClass=" << cfg.perClass << "\n";
  out << "imageSize=" << cfg.imageSize << "\n";
  out << "subsample=" << cfg.subsample << "\n\n";
  out << "[run]\n";
  out << "seed=" << cfg.seed << "\n";
  out << "outDir=" << cfg.outDir << "\n";
  out << "workers=" << cfg.workers << "\n\n";
  out << "[moco]\n";
  out << "epochs=" << cfg.moco.epochs << "\n";
  out << "batchSize=" << cfg.moco.batchSize << "\n";
  out << "queueSize=" << cfg.moco.queueSize << "\n";
  out << "momentum=" << num(cfg.moco.momentum) << "\n";
  out << "temperature=" << num(cfg.moco.temperature) << "\n";
  out << "lr=" << num(cfg.moco.sgd.lr) << "\n";
  out << "sgdMomentum=" << num(cfg.moco.sgd.momentum) << "\n";
  out << "weightDecay=" << num(cfg.moco.sgd.weightDecay) << "\n";
  out << "schedule=" << scheduleString(cfg.moco.sgd.schedule) << "\n";
  out << "channels=" << joinInts(cfg.moco.encoder.channels) << "\n";
  out << "strides=" << joinInts(cfg.moco.encoder.strides) << "\n";
  out << "projectionDim=" << cfg.moco.encoder.projectionDim << "\n";
  out << "projectionHidden=" << cfg.moco.encoder.projectionHidden << "\n";
  out << "residualBlocks=" << (cfg.moco.encoder.residualBlocks ? "true" : "false") << "\n\n";
  out << "[search]\n";
  out << "K=" << cfg.search.K << "\n";
  out << "T=" << cfg.search.T << "\n";
  out << "B=" << cfg.search.B << "\n";
  out << "P=" << cfg.search.P << "\n";
  out << "nTauSearch=" << cfg.search.nTauSearch << "\n";
  out << "loss=" << lossKindName(cfg.search.lossKind) << "\n";
  out << "lambdaRot=" << num(cfg.search.lambdaRot) << "\n";
  out << "lambdaNce=" << num(cfg.search.lambdaNce) << "\n";
  out << "baseEpochFraction=" << num(cfg.search.baseEpochFraction) << "\n";
  out << "gamma=" << num(cfg.search.tpe.gamma) << "\n";
  out << "candidates=" << cfg.search.tpe.nCandidates << "\n";
  out << "startupTrials=" << cfg.search.tpe.nStartup << "\n\n";
  out << "[probe]\n";
  out << "epochs=" << cfg.probe.epochs << "\n";
  out << "batchSize=" << cfg.probe.batchSize << "\n";
  out << "lr=" << num(cfg.probe.sgd.lr) << "\n";
  out << "schedule=" << scheduleString(cfg.probe.sgd.schedule) << "\n";
  out << "holdout=" << num(cfg.probe.holdoutFraction) << "\n\n";
  out << "[randaugment]\n";
  out << "ntau=" << joinInts(cfg.gridNTau) << "\n";
  out << "lambda=" << joinInts(cfg.gridLambda) << "\n";
  return out.str();
}

}  // namespace augsearch
