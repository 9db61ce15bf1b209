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

#include "robustdist/serde.hpp"

#include <stdexcept>

namespace robustdist {

using nlohmann::json;

json constraint_to_json(const ConstraintSpec& c) {
  switch (c.kind) {
    case ConstraintSpec::Kind::kBits:
      return {{"kind", "bits"}, {"ell", c.ell}};
    case ConstraintSpec::Kind::kLdp:
      return {{"kind", "ldp"}, {"epsilon", c.epsilon}};
    default:
      return {{"kind", "unconstrained"}};
  }
}

ConstraintSpec constraint_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "unconstrained") return ConstraintSpec::unconstrained();
  if (kind == "bits") return ConstraintSpec::bits(j.at("ell").get<int>());
  if (kind == "ldp") return ConstraintSpec::ldp(j.at("epsilon").get<double>());
  throw std::invalid_argument("constraint_from_json: unknown kind '" + kind + "'");
}

json channel_descriptor(const Channel& w) {
  switch (w.kind()) {
    case ChannelKind::kIdentity:
      return {{"kind", "identity"}, {"k", w.k()}};
    case ChannelKind::kHash:
      return {{"kind", "hash"}, {"k", w.k()}, {"ell", w.constraint().ell}, {"seed", w.seed()}};
    case ChannelKind::kCompression:
      return {{"kind", "compression"}, {"k", w.k()}, {"ell", w.constraint().ell}, {"seed", w.seed()}};
    case ChannelKind::kKrr:
      return {{"kind", "krr"}, {"k", w.k()}, {"epsilon", w.constraint().epsilon}};
    case ChannelKind::kCustom: {
      std::vector<double> matrix;
      matrix.reserve(static_cast<size_t>(w.k()) * static_cast<size_t>(w.y_size()));
      for (int x = 0; x < w.k(); ++x) {
        const auto row = w.row(x);
        matrix.insert(matrix.end(), row.begin(), row.end());
      }
      return {{"kind", "custom"},
              {"k", w.k()},
              {"y_size", w.y_size()},
              {"matrix", matrix},
              {"constraint", constraint_to_json(w.constraint())}};
    }
  }
  throw std::logic_error("channel_descriptor: unreachable");
}

Channel channel_from_descriptor(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const int k = j.at("k").get<int>();
  if (kind == "identity") return identity_channel(k);
  if (kind == "hash") {
    return random_hash_channel(k, j.at("ell").get<int>(), j.at("seed").get<std::uint64_t>()).first;
  }
  if (kind == "compression") {
    return domain_compression_channel(k, j.at("ell").get<int>(), j.at("seed").get<std::uint64_t>());
  }
  if (kind == "krr") return krr_channel(k, j.at("epsilon").get<double>());
  if (kind == "custom") {
    return Channel(k, j.at("y_size").get<int>(), j.at("matrix").get<std::vector<double>>(),
                   ChannelKind::kCustom, constraint_from_json(j.at("constraint")));
  }
  throw std::invalid_argument("channel_from_descriptor: unknown kind '" + kind + "'");
}

}  // namespace robustdist
