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

#include "belldisc/fock.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace belldisc {

Monomial::Monomial(std::vector<Mode> modes) : modes_(std::move(modes)) {
    if (modes_.empty() || modes_.size() > kMaxPhotons)
        throw CapacityError("monomial photon number out of range 1..8");
    std::sort(modes_.begin(), modes_.end());
}

double Monomial::weight() const {
    double w = 1.0;
    std::size_t i = 0;
    while (i < modes_.size()) {
        std::size_t j = i + 1;
        int n = 1;
        while (j < modes_.size() && modes_[j] == modes_[i]) {
            ++n;
            w *= n;
            ++j;
        }
        i = j;
    }
    return w;
}

std::string Monomial::str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (i) s += ", ";
        s += modes_[i].str();
    }
    s += "}";
    return s;
}

Monomial normal_form(std::span<const Mode> modes) {
    return Monomial(std::vector<Mode>(modes.begin(), modes.end()));
}

PhotonState PhotonState::term(Monomial m, Complex amp) {
    PhotonState s;
    if (std::abs(amp) >= kPruneThreshold) s.terms_.emplace(std::move(m), amp);
    return s;
}

PhotonState PhotonState::term(std::initializer_list<Mode> modes, Complex amp) {
    return term(Monomial(std::vector<Mode>(modes)), amp);
}

Complex PhotonState::amplitude(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Complex(0.0) : it->second;
}

void PhotonState::accumulate(const Monomial& m, Complex amp) {
    auto [it, inserted] = terms_.try_emplace(m, amp);
    if (!inserted) it->second += amp;
}

void PhotonState::prune(double threshold) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) < threshold)
            it = terms_.erase(it);
        else
            ++it;
    }
}

std::string PhotonState::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag())
           << "i)" << m.str();
        first = false;
    }
    return first ? "0" : os.str();
}

PhotonState add(const PhotonState& s, const PhotonState& t) {
    PhotonState out = s;
    for (const auto& [m, c] : t.terms()) out.accumulate(m, c);
    out.prune();
    return out;
}

PhotonState scale(const PhotonState& s, Complex z) {
    PhotonState out;
    for (const auto& [m, c] : s.terms()) out.accumulate(m, c * z);
    out.prune();
    return out;
}

PhotonState tensor(const PhotonState& s, const PhotonState& t) {
    PhotonState out;
    for (const auto& [m1, c1] : s.terms()) {
        for (const auto& [m2, c2] : t.terms()) {
            if (m1.photons() + m2.photons() > kMaxPhotons)
                throw CapacityError("tensor product exceeds 8 photons");
            std::vector<Mode> modes = m1.modes();
            modes.insert(modes.end(), m2.modes().begin(), m2.modes().end());
            out.accumulate(Monomial(std::move(modes)), c1 * c2);
        }
    }
    out.prune();
    return out;
}

Complex inner_product(const PhotonState& s, const PhotonState& t) {
    // Both term maps are ordered; walk them together.
    Complex acc = 0.0;
    auto is = s.terms().begin();
    auto it = t.terms().begin();
    while (is != s.terms().end() && it != t.terms().end()) {
        if (is->first < it->first)
            ++is;
        else if (it->first < is->first)
            ++it;
        else {
            acc += std::conj(is->second) * it->second * is->first.weight();
            ++is;
            ++it;
        }
    }
    return acc;
}

double squared_norm(const PhotonState& s) {
    double acc = 0.0;
    for (const auto& [m, c] : s.terms()) acc += std::norm(c) * m.weight();
    return acc;
}

PhotonState apply_mode_map(const PhotonState& s, const ModeMap& map) {
    const int n = static_cast<int>(map.modes.size());
    if (map.matrix.rows() != n || map.matrix.cols() != n)
        throw ShapeError("mode map matrix does not match its mode list");

    PhotonState out;
    std::vector<Mode> scratch;
    for (const auto& [mono, amp] : s.terms()) {
        // Expand the substitution product over this monomial's operators.
        struct Branch {
            std::vector<Mode> modes;
            Complex amp;
        };
        std::vector<Branch> branches{{{}, amp}};
        for (const Mode& op : mono.modes()) {
            int col = -1;
            for (int j = 0; j < n; ++j) {
                if (map.modes[j] == op) {
                    col = j;
                    break;
                }
            }
            if (col < 0) {
                for (auto& b : branches) b.modes.push_back(op);
                continue;
            }
            std::vector<Branch> next;
            next.reserve(branches.size() * n);
            for (const auto& b : branches) {
                for (int i = 0; i < n; ++i) {
                    Complex u = map.matrix(i, col);
                    if (u == Complex(0.0)) continue;
                    Branch nb = b;
                    nb.modes.push_back(map.modes[i]);
                    nb.amp *= u;
                    next.push_back(std::move(nb));
                }
            }
            branches = std::move(next);
        }
        for (auto& b : branches) out.accumulate(Monomial(std::move(b.modes)), b.amp);
    }
    out.prune();
    return out;
}

ModeMap compose(const ModeMap& second, const ModeMap& first) {
    if (second.modes != first.modes)
        throw ShapeError("composed mode maps must share one mode list");
    return ModeMap{first.modes, second.matrix * first.matrix};
}

bool is_unitary(const Eigen::MatrixXcd& m, double tol) {
    if (m.rows() != m.cols()) return false;
    Eigen::MatrixXcd delta =
        m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return delta.cwiseAbs().maxCoeff() <= tol;
}

double max_singular_value(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

}  // namespace belldisc
