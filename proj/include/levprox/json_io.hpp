// JSON encoding of interval sets and operator graphs.
//
//   IntervalSet:     {"intervals":[{"lo":n|"-inf","hi":n|"inf","lo_closed":b,"hi_closed":b}]}
//   OperatorGraph1D: {"lambda":n,"samples":[{"x":n,"value":<IntervalSet>}]}
#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "levprox/core.hpp"

namespace levprox {

using json = nlohmann::ordered_json;

inline json endpoint_to_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v == 0.0 ? 0.0 : v;
}

inline double endpoint_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    // Accept both the ASCII and the Unicode minus sign.
    if (s == "-inf" || s == "\xE2\x88\x92inf") return -kInf;
  }
  throw InvalidArgument("interval endpoint must be a number, \"inf\" or \"-inf\"");
}

inline json to_json(const IntervalSet& s) {
  json arr = json::array();
  for (const auto& iv : s.intervals()) {
    arr.push_back({{"lo", endpoint_to_json(iv.lo)},
                   {"hi", endpoint_to_json(iv.hi)},
                   {"lo_closed", iv.lo_closed},
                   {"hi_closed", iv.hi_closed}});
  }
  return {{"intervals", arr}};
}

inline IntervalSet intervalset_from_json(const json& j) {
  std::vector<Interval> ivs;
  for (const auto& e : j.at("intervals")) {
    ivs.push_back(Interval::make(endpoint_from_json(e.at("lo")), endpoint_from_json(e.at("hi")),
                                 e.value("lo_closed", true), e.value("hi_closed", true)));
  }
  return IntervalSet(std::move(ivs));
}

inline json to_json(const OperatorGraph1D& g, double lambda) {
  json samples = json::array();
  for (const auto& s : g.samples()) samples.push_back({{"x", s.x}, {"value", to_json(s.value)}});
  return {{"lambda", lambda}, {"samples", samples}};
}

inline OperatorGraph1D graph_from_json(const json& j) {
  std::vector<GraphSample> pairs;
  for (const auto& s : j.at("samples")) pairs.push_back({s.at("x").get<double>(), intervalset_from_json(s.at("value"))});
  return OperatorGraph1D::from_pairs(std::move(pairs), 0.0);
}

}  // namespace levprox
