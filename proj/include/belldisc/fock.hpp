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

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <span>
#include <vector>

#include "belldisc/mode.hpp"

namespace belldisc {

using Complex = std::complex<double>;

inline constexpr int kMaxPhotons = 8;
inline constexpr double kPruneThreshold = 1e-14;

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A normal-formed product of creation operators: the sorted multiset of
/// mode labels they carry. Photon number is the operator count.
class Monomial {
  public:
    Monomial() = default;
    explicit Monomial(std::vector<Mode> modes);

    const std::vector<Mode>& modes() const { return modes_; }
    int photons() const { return static_cast<int>(modes_.size()); }

    /// Product of n_m! over distinct modes (the bosonic norm weight).
    double weight() const;

    auto operator<=>(const Monomial&) const = default;
    bool operator==(const Monomial&) const = default;

    std::string str() const;

  private:
    std::vector<Mode> modes_;  // kept sorted
};

Monomial normal_form(std::span<const Mode> modes);

/// A finite complex linear combination of creation-operator monomials
/// applied to vacuum. Amplitudes below kPruneThreshold are dropped.
class PhotonState {
  public:
    using Terms = std::map<Monomial, Complex>;

    PhotonState() = default;

    static PhotonState term(Monomial m, Complex amp = 1.0);
    static PhotonState term(std::initializer_list<Mode> modes, Complex amp = 1.0);

    const Terms& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Complex amplitude(const Monomial& m) const;

    /// Adds amp onto the monomial's coefficient (no pruning here; call
    /// prune() once after a batch of accumulations).
    void accumulate(const Monomial& m, Complex amp);
    void prune(double threshold = kPruneThreshold);

    std::string str() const;

  private:
    Terms terms_;
};

PhotonState add(const PhotonState& s, const PhotonState& t);
PhotonState scale(const PhotonState& s, Complex z);
PhotonState tensor(const PhotonState& s, const PhotonState& t);

/// <s|t> with the bosonic weight: sum over common monomials of
/// conj(c_s) * c_t * prod n_m!.
Complex inner_product(const PhotonState& s, const PhotonState& t);
double squared_norm(const PhotonState& s);

/// A linear substitution on a subset of modes: modes[j] is replaced by
/// sum_i matrix(i, j) * modes[i]. Modes outside the list pass through.
struct ModeMap {
    std::vector<Mode> modes;
    Eigen::MatrixXcd matrix;
};

PhotonState apply_mode_map(const PhotonState& s, const ModeMap& map);

/// Composition helper: applying `first` then `second` over a shared mode
/// list equals applying second.matrix * first.matrix.
ModeMap compose(const ModeMap& second, const ModeMap& first);

bool is_unitary(const Eigen::MatrixXcd& m, double tol = 1e-12);
double max_singular_value(const Eigen::MatrixXcd& m);

}  // namespace belldisc
