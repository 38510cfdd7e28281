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

#include "augsearch/policy/policy.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace augsearch {

namespace {

using nlohmann::json;

std::string formatFloat(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string escapeJson(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void requireField(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) {
    throw ParseError(std::string("policy document: missing field \"") + key + "\" in " + where);
  }
}

double rangeChecked(const json& j, const char* key, const char* where) {
  const double v = j.at(key).get<double>();
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ParseError(std::string("policy document: field \"") + key + "\" in " + where +
                     " outside [0,1]: " + std::to_string(v));
  }
  return v;
}

}  // namespace

void validatePolicy(const Policy& policy) {
  if (policy.randaugment) {
    const auto& ra = *policy.randaugment;
    AUGS_REQUIRE(ra.nTau >= 1, "policy: randaugment nTau must be >= 1");
    AUGS_REQUIRE(ra.lambdaDiscrete >= 1 && ra.lambdaDiscrete <= 30,
                 "policy: randaugment lambda must be in [1,30]");
    AUGS_REQUIRE(!ra.opSubset.empty(), "policy: randaugment op subset is empty");
    for (OpId op : ra.opSubset) {
      AUGS_REQUIRE(isSearchable(op), "policy: randaugment op subset holds a non-searchable op");
    }
    return;
  }
  AUGS_REQUIRE(!policy.subPolicies.empty(), "policy: no sub-policies");
  for (const SubPolicy& sp : policy.subPolicies) {
    AUGS_REQUIRE(!sp.transforms.empty(), "policy: empty sub-policy");
    for (const TransformSpec& t : sp.transforms) {
      AUGS_REQUIRE(isSearchable(t.op), "policy: transform op must be searchable");
      AUGS_REQUIRE(t.p >= 0.0 && t.p <= 1.0, "policy: transform p outside [0,1]");
      AUGS_REQUIRE(t.lambda >= 0.0 && t.lambda <= 1.0, "policy: transform lambda outside [0,1]");
    }
  }
}

Policy makeRandaugmentPolicy(const RandAugmentConfig& cfg) {
  Policy policy;
  policy.name = "randaugment-n" + std::to_string(cfg.nTau) + "-l" +
                std::to_string(cfg.lambdaDiscrete);
  policy.randaugment = cfg;
  validatePolicy(policy);
  return policy;
}

Image applyPolicy(const Policy& policy, const Image& img, Rng& rng) {
  validatePolicy(policy);
  if (policy.randaugment) {
    const auto& ra = *policy.randaugment;
    const int k = static_cast<int>(ra.opSubset.size());
    // Discrete magnitude 1..30 maps onto the unit scale.
    const double lambda = (ra.lambdaDiscrete - 1) / 29.0;
    Image out = img;
    for (int n = 0; n < ra.nTau; ++n) {
      const OpId op = ra.opSubset[static_cast<std::size_t>(rng.uniformInt(k))];
      const bool fire = rng.bernoulli(1.0 / k);
      if (fire) out = applyTransform(out, op, magnitudeToParam(op, lambda), rng);
    }
    return out;
  }
  const int idx = rng.uniformInt(static_cast<int>(policy.subPolicies.size()));
  Image out = img;
  for (const TransformSpec& t : policy.subPolicies[static_cast<std::size_t>(idx)].transforms) {
    if (rng.bernoulli(t.p)) {
      out = applyTransform(out, t.op, magnitudeToParam(t.op, t.lambda), rng);
    }
  }
  return out;
}

std::string serializePolicy(const Policy& policy) {
  validatePolicy(policy);
  std::ostringstream out;
  out << "{\"name\":\"" << escapeJson(policy.name) << "\",";
  out << "\"provenance\":{\"foldIds\":[";
  for (std::size_t i = 0; i < policy.provenance.foldIds.size(); ++i) {
    if (i) out << ",";
    out << policy.provenance.foldIds[i];
  }
  out << "],\"lossKind\":\"" << escapeJson(policy.provenance.lossKind) << "\",\"seeds\":[";
  for (std::size_t i = 0; i < policy.provenance.seeds.size(); ++i) {
    if (i) out << ",";
    out << policy.provenance.seeds[i];
  }
  out << "]}";
  if (policy.randaugment) {
    const auto& ra = *policy.randaugment;
    out << ",\"randaugment\":{\"lambdaDiscrete\":" << ra.lambdaDiscrete
        << ",\"nTau\":" << ra.nTau << ",\"opSubset\":[";
    for (std::size_t i = 0; i < ra.opSubset.size(); ++i) {
      if (i) out << ",";
      out << "\"" << opName(ra.opSubset[i]) << "\"";
    }
    out << "]}";
  } else {
    out << ",\"subPolicies\":[";
    for (std::size_t s = 0; s < policy.subPolicies.size(); ++s) {
      if (s) out << ",";
      out << "[";
      const auto& ts = policy.subPolicies[s].transforms;
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) out << ",";
        out << "{\"lambda\":" << formatFloat(ts[i].lambda) << ",\"op\":\"" << opName(ts[i].op)
            << "\",\"p\":" << formatFloat(ts[i].p) << "}";
      }
      out << "]";
    }
    out << "]";
  }
  out << "}";
  return out.str();
}

Policy deserializePolicy(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("policy document: ") + e.what());
  }
  try {
    Policy policy;
    requireField(doc, "name", "policy");
    policy.name = doc.at("name").get<std::string>();
    if (doc.contains("provenance")) {
      const json& prov = doc.at("provenance");
      if (prov.contains("lossKind")) policy.provenance.lossKind = prov.at("lossKind");
      if (prov.contains("seeds")) {
        for (const auto& s : prov.at("seeds")) {
          policy.provenance.seeds.push_back(s.get<std::uint64_t>());
        }
      }
      if (prov.contains("foldIds")) {
        for (const auto& f : prov.at("foldIds")) policy.provenance.foldIds.push_back(f.get<int>());
      }
    }
    if (doc.contains("randaugment")) {
      const json& ra = doc.at("randaugment");
      requireField(ra, "nTau", "randaugment");
      requireField(ra, "lambdaDiscrete", "randaugment");
      requireField(ra, "opSubset", "randaugment");
      RandAugmentConfig cfg;
      cfg.nTau = ra.at("nTau").get<int>();
      cfg.lambdaDiscrete = ra.at("lambdaDiscrete").get<int>();
      for (const auto& name : ra.at("opSubset")) {
        cfg.opSubset.push_back(opFromName(name.get<std::string>()));
      }
      if (cfg.lambdaDiscrete < 1 || cfg.lambdaDiscrete > 30) {
        throw ParseError("policy document: field \"lambdaDiscrete\" outside [1,30]");
      }
      policy.randaugment = cfg;
      validatePolicy(policy);
      return policy;
    }
    requireField(doc, "subPolicies", "policy");
    for (const auto& sub : doc.at("subPolicies")) {
      SubPolicy sp;
      for (const auto& t : sub) {
        requireField(t, "op", "transform");
        requireField(t, "p", "transform");
        requireField(t, "lambda", "transform");
        TransformSpec spec;
        spec.op = opFromName(t.at("op").get<std::string>());
        spec.p = rangeChecked(t, "p", "transform");
        spec.lambda = rangeChecked(t, "lambda", "transform");
        sp.transforms.push_back(spec);
      }
      policy.subPolicies.push_back(std::move(sp));
    }
    validatePolicy(policy);
    return policy;
  } catch (const json::exception& e) {
    throw ParseError(std::string("policy document: ") + e.what());
  } catch (const ContractError& e) {
    throw ParseError(std::string("policy document: ") + e.what());
  }
}

double expectedStrength(const Policy& policy) {
  if (policy.randaugment) {
    const auto& ra = *policy.randaugment;
    const double lambda = (ra.lambdaDiscrete - 1) / 29.0;
    return lambda / static_cast<double>(ra.opSubset.size());
  }
  double acc = 0.0;
  std::size_t count = 0;
  for (const SubPolicy& sp : policy.subPolicies) {
    for (const TransformSpec& t : sp.transforms) {
      acc += t.lambda * t.p;
      ++count;
    }
  }
  AUGS_REQUIRE(count > 0, "expectedStrength: empty policy");
  return acc / static_cast<double>(count);
}

}  // namespace augsearch
