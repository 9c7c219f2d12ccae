// Copyright 2026 belldisc contributors
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

#pragma once

#include <string>
#include <vector>

#include "belldisc/elements.hpp"

namespace belldisc {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ApplyError : std::runtime_error {
    ApplyError(std::size_t index, const std::string& what)
        : std::runtime_error("element " + std::to_string(index) + ": " + what),
          element_index(index) {}
    std::size_t element_index;
};

struct ApplyResult {
    PhotonState state;
    double discarded_probability = 0.0;
};

/// Ordered composition of elements. Norm may only change at declared loss
/// points (post-selected maps and time coalescing).
class Circuit {
  public:
    Circuit() = default;
    explicit Circuit(std::vector<ElementOp> elements);

    const std::vector<ElementOp>& elements() const { return elements_; }
    const std::vector<std::size_t>& declared_loss_points() const { return loss_points_; }
    std::size_t size() const { return elements_.size(); }

    void push_back(ElementOp e);

    ApplyResult apply(const PhotonState& input) const;

    /// Applies only elements [0, count); used to compare intermediate
    /// states against printed expansions.
    ApplyResult apply_prefix(const PhotonState& input, std::size_t count) const;

  private:
    std::vector<ElementOp> elements_;
    std::vector<std::size_t> loss_points_;
};

std::string serialize_circuit(const Circuit& c);
Circuit parse_circuit(const std::string& json_text);

bool operator==(const Circuit& a, const Circuit& b);

}  // namespace belldisc
