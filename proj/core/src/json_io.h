// Copyright 2026 The vspike Authors
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

// Internal JSON converters shared by calibration reports and run manifests.
#ifndef VSPIKE_SRC_JSON_IO_H_
#define VSPIKE_SRC_JSON_IO_H_

#include <string>

#include "json.hpp"
#include "vspike/encoding.h"
#include "vspike/error.h"
#include "vspike/sfm_neuron.h"

namespace vspike::internal {

inline nlohmann::json ToJson(const SfmParams& p) {
  return {{"gamma_a", p.gamma_a}, {"gamma_p", p.gamma_p},
          {"gamma_n", p.gamma_n}, {"gamma_s", p.gamma_s},
          {"kappa", p.kappa},     {"alpha", p.alpha},
          {"mu", p.mu},           {"k_inj", p.k_inj},
          {"beta_sp", p.beta_sp}, {"detuning_ghz", p.detuning_ghz}};
}

inline SfmParams SfmParamsFromJson(const nlohmann::json& j) {
  SfmParams p;
  p.gamma_a = j.at("gamma_a");
  p.gamma_p = j.at("gamma_p");
  p.gamma_n = j.at("gamma_n");
  p.gamma_s = j.at("gamma_s");
  p.kappa = j.at("kappa");
  p.alpha = j.at("alpha");
  p.mu = j.at("mu");
  p.k_inj = j.at("k_inj");
  p.beta_sp = j.at("beta_sp");
  p.detuning_ghz = j.at("detuning_ghz");
  return p;
}

inline nlohmann::json ToJson(const EncodingParams& e) {
  return {{"pixel_period", e.pixel_period},
          {"pulse_hold", e.pulse_hold},
          {"baseline", {e.baseline.real(), e.baseline.imag()}},
          {"mod_depth", e.mod_depth},
          {"v_max", e.v_max},
          {"lead_in", e.lead_in}};
}

inline EncodingParams EncodingParamsFromJson(const nlohmann::json& j) {
  EncodingParams e;
  e.pixel_period = j.at("pixel_period");
  e.pulse_hold = j.at("pulse_hold");
  e.baseline = {j.at("baseline").at(0).get<double>(),
                j.at("baseline").at(1).get<double>()};
  e.mod_depth = j.at("mod_depth");
  e.v_max = j.at("v_max");
  e.lead_in = j.at("lead_in");
  return e;
}

inline std::string ObservableName(Observable o) {
  switch (o) {
    case Observable::kX:
      return "x";
    case Observable::kY:
      return "y";
    case Observable::kTotal:
      break;
  }
  return "total";
}

inline Observable ParseObservable(const std::string& s) {
  if (s == "x") return Observable::kX;
  if (s == "y") return Observable::kY;
  if (s == "total") return Observable::kTotal;
  throw Error(ErrorCode::kParse, "unknown observable '" + s + "'");
}

}  // namespace vspike::internal

#endif  // VSPIKE_SRC_JSON_IO_H_
