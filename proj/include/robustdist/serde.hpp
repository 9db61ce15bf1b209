// Copyright 2026 The robustdist Authors
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

#ifndef ROBUSTDIST_SERDE_HPP_
#define ROBUSTDIST_SERDE_HPP_

#include "json.hpp"
#include "robustdist/channel.hpp"

namespace robustdist {

// Channel descriptor schema, enough to replay a transcript:
//   {"kind": "identity" | "hash" | "compression" | "krr" | "custom",
//    "k": int, and per kind: "ell" + "seed", "epsilon", or for custom the
//    full "matrix" (row-major), "y_size" and "constraint"}.
nlohmann::json channel_descriptor(const Channel& w);
Channel channel_from_descriptor(const nlohmann::json& j);

nlohmann::json constraint_to_json(const ConstraintSpec& c);
ConstraintSpec constraint_from_json(const nlohmann::json& j);

}  // namespace robustdist

#endif  // ROBUSTDIST_SERDE_HPP_
