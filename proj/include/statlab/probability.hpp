// Copyright 2026 The statlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Probability queries with their derivation document and plot data.

#pragma once

#include <cmath>
#include <string>

#include "statlab/derivation.hpp"
#include "statlab/display.hpp"
#include "statlab/distributions.hpp"
#include "statlab/narrative.hpp"

namespace statlab::dist {

struct ProbabilityResult {
  double value = 0;
  /// `value` rounded half away from zero to four decimals.
  std::string display_value;
  DerivationDocument derivation;
  PlotData plot;
  Moments moments;
};

inline ProbabilityResult probability(const Distribution& model,
                                     const ProbabilityQuery& q) {
  ProbabilityResult r;
  r.value = probability_value(model, q);
  if (!std::isfinite(r.value)) {
    fail(ErrorCode::kDomain,
         "the probability is not computable for these parameters");
  }
  r.display_value = format_fixed4(r.value);
  r.moments = moments(model);
  r.derivation = narrative::distribution_document(model, q, r.value, r.moments);
  r.plot = plot_data(model, q);
  return r;
}

}  // namespace statlab::dist
