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

#include <doctest.h>

#include <cmath>
#include <random>

#include "belldisc/fock.hpp"

using namespace belldisc;

namespace {

const Mode a1 = path_mode("a1");
const Mode b1 = path_mode("b1");
const Mode a2 = path_mode("a2");
const Mode b2 = path_mode("b2");
const Mode a1H = pol_mode("a1", Pol::H);

// <0| prod a_m  prod a-dagger_m' |0> by recursive contraction of the last
// annihilator against every matching creator. Independent of the n! rule
// used by inner_product.
double wick_pair(std::vector<Mode> bras, std::vector<Mode> kets) {
    if (bras.empty() && kets.empty()) return 1.0;
    if (bras.empty() || kets.empty()) return 0.0;
    const Mode bra = bras.back();
    bras.pop_back();
    double total = 0.0;
    for (std::size_t k = 0; k < kets.size(); ++k) {
        if (kets[k] == bra) {
            std::vector<Mode> rest = kets;
            rest.erase(rest.begin() + static_cast<long>(k));
            total += wick_pair(bras, rest);
        }
    }
    return total;
}

Complex wick_inner(const PhotonState& s, const PhotonState& t) {
    Complex acc = 0.0;
    for (const auto& [ms, cs] : s.terms())
        for (const auto& [mt, ct] : t.terms())
            acc += std::conj(cs) * ct * wick_pair(ms.modes(), mt.modes());
    return acc;
}

PhotonState bell_like_psi(int index, double theta) {
    const double s = std::sin(theta), c = std::cos(theta);
    switch (index) {
        case 1:
            return add(PhotonState::term({a1, a2}, s), PhotonState::term({b1, b2}, c));
        case 2:
            return add(PhotonState::term({a1, a2}, c), PhotonState::term({b1, b2}, -s));
        case 3:
            return add(PhotonState::term({a1, b2}, s), PhotonState::term({b1, a2}, c));
        default:
            return add(PhotonState::term({a1, b2}, c), PhotonState::term({b1, a2}, -s));
    }
}

}  // namespace

TEST_CASE("normal form sorts, keeps multiplicity, rejects bad sizes") {
    const Mode b1H = pol_mode("b1", Pol::H);
    CHECK(normal_form(std::vector<Mode>{b1H, a1H}) ==
          normal_form(std::vector<Mode>{a1H, b1H}));
    const Monomial doubled = normal_form(std::vector<Mode>{a1H, a1H});
    CHECK(doubled.photons() == 2);
    CHECK(doubled.weight() == doctest::Approx(2.0));
    CHECK(normal_form(std::vector<Mode>{a1H}).photons() == 1);
    CHECK_THROWS_AS(normal_form(std::vector<Mode>{}), CapacityError);
    CHECK_THROWS_AS(normal_form(std::vector<Mode>(9, a1H)), CapacityError);
    // Idempotent: renormalizing the stored modes changes nothing.
    CHECK(normal_form(doubled.modes()) == doubled);
}

TEST_CASE("add, scale and tensor combine termwise") {
    const PhotonState s = bell_like_psi(1, 0.3);
    CHECK(scale(s, 0.0).empty());
    CHECK(add(s, scale(s, -1.0)).empty());

    // Eq. 5 structure: momentum pair tensored with the polarization pair.
    const Mode h1 = pol_mode("q1", Pol::H), v1 = pol_mode("q1", Pol::V);
    const Mode h2 = pol_mode("q2", Pol::H), v2 = pol_mode("q2", Pol::V);
    const double r = 1.0 / std::sqrt(2.0);
    const PhotonState anc =
        add(PhotonState::term({h1, v2}, r), PhotonState::term({v1, h2}, r));
    const PhotonState theta1 = tensor(s, anc);
    CHECK(theta1.size() == 4);
    const double st = std::sin(0.3);
    CHECK(theta1.amplitude(normal_form(std::vector<Mode>{a1, a2, h1, v2})).real() ==
          doctest::Approx(st * r).epsilon(1e-12));
    CHECK(squared_norm(theta1) == doctest::Approx(1.0).epsilon(1e-12));

    PhotonState big = PhotonState::term(Monomial(std::vector<Mode>(8, a1H)));
    CHECK_THROWS_AS(tensor(big, PhotonState::term({a1H})), CapacityError);
}

TEST_CASE("inner product carries the bosonic weights") {
    const PhotonState psi1 = bell_like_psi(1, 0.3);
    const PhotonState psi2 = bell_like_psi(2, 0.3);
    CHECK(std::abs(inner_product(psi1, psi2)) < 1e-12);
    CHECK(inner_product(psi1, psi1).real() == doctest::Approx(1.0).epsilon(1e-12));

    const PhotonState doubled = PhotonState::term({a1H, a1H});
    CHECK(inner_product(doubled, doubled).real() == doctest::Approx(2.0));
    CHECK(wick_pair({a1H, a1H}, {a1H, a1H}) == doctest::Approx(2.0));
}

TEST_CASE("mode map reproduces the printed splitter actions") {
    ModeMap balanced{{a1, b1}, Eigen::MatrixXcd(2, 2)};
    const double r = 1.0 / std::sqrt(2.0);
    balanced.matrix << r, r, r, -r;

    const PhotonState one = PhotonState::term({a1});
    const PhotonState out = apply_mode_map(one, balanced);
    CHECK(out.amplitude(normal_form(std::vector<Mode>{a1})).real() == doctest::Approx(r));
    CHECK(out.amplitude(normal_form(std::vector<Mode>{b1})).real() == doctest::Approx(r));

    ModeMap unbalanced{{a2, b2}, Eigen::MatrixXcd(2, 2)};
    const double th = 0.7;
    unbalanced.matrix << std::cos(th), std::sin(th), std::sin(th), -std::cos(th);
    const PhotonState two = apply_mode_map(PhotonState::term({a2}), unbalanced);
    CHECK(two.amplitude(normal_form(std::vector<Mode>{a2})).real() ==
          doctest::Approx(std::cos(th)));
    CHECK(two.amplitude(normal_form(std::vector<Mode>{b2})).real() ==
          doctest::Approx(std::sin(th)));

    // Both photons on one balanced splitter bunch: (a^2 - b^2)/2.
    const PhotonState pair = apply_mode_map(PhotonState::term({a1, b1}), balanced);
    CHECK(pair.amplitude(normal_form(std::vector<Mode>{a1, a1})).real() ==
          doctest::Approx(0.5));
    CHECK(pair.amplitude(normal_form(std::vector<Mode>{b1, b1})).real() ==
          doctest::Approx(-0.5));
    CHECK(std::abs(pair.amplitude(normal_form(std::vector<Mode>{a1, b1}))) < 1e-14);
    CHECK(squared_norm(pair) == doctest::Approx(1.0).epsilon(1e-12));

    ModeMap bad{{a1, b1}, Eigen::MatrixXcd(3, 3)};
    bad.matrix.setIdentity();
    CHECK_THROWS_AS(apply_mode_map(one, bad), ShapeError);
}

TEST_CASE("randomized inner-product and unitarity properties") {
    std::mt19937_64 rng(20260810);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const std::vector<Mode> pool = {a1, b1, a2, b2, pol_mode("q1", Pol::H),
                                    pol_mode("q1", Pol::V)};

    auto random_state = [&](int terms, int photons) {
        PhotonState s;
        for (int t = 0; t < terms; ++t) {
            std::vector<Mode> modes;
            for (int p = 0; p < photons; ++p)
                modes.push_back(pool[rng() % pool.size()]);
            s = add(s, PhotonState::term(Monomial(modes), Complex(uni(rng), uni(rng))));
        }
        return s;
    };
    auto random_unitary = [&](int n) {
        Eigen::MatrixXcd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = Complex(uni(rng), uni(rng));
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
        Eigen::MatrixXcd q = qr.householderQ();
        return q;
    };

    for (int rep = 0; rep < 200; ++rep) {
        const PhotonState s = random_state(3, 2 + static_cast<int>(rng() % 2));
        const PhotonState t = random_state(3, 2 + static_cast<int>(rng() % 2));
        const Complex z(uni(rng), uni(rng));

        // Conjugate symmetry and sesquilinearity.
        CHECK(std::abs(inner_product(s, t) - std::conj(inner_product(t, s))) < 1e-12);
        const Complex lhs = inner_product(s, scale(t, z));
        CHECK(std::abs(lhs - z * inner_product(s, t)) < 1e-12);
        const Complex lhs2 = inner_product(scale(s, z), t);
        CHECK(std::abs(lhs2 - std::conj(z) * inner_product(s, t)) < 1e-12);

        // Wick-contraction oracle agreement.
        CHECK(std::abs(inner_product(s, t) - wick_inner(s, t)) < 1e-12);

        // Unitary maps preserve the norm; composition collapses to a product.
        ModeMap u{pool, random_unitary(static_cast<int>(pool.size()))};
        ModeMap v{pool, random_unitary(static_cast<int>(pool.size()))};
        REQUIRE(is_unitary(u.matrix));
        const PhotonState su = apply_mode_map(s, u);
        CHECK(squared_norm(su) == doctest::Approx(squared_norm(s)).epsilon(1e-10));
        const PhotonState svu = apply_mode_map(su, v);
        const PhotonState direct = apply_mode_map(s, compose(v, u));
        const PhotonState diff = add(svu, scale(direct, -1.0));
        CHECK(squared_norm(diff) < 1e-10);
    }
}

TEST_CASE("contractive maps never grow the norm") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const std::vector<Mode> pool = {a1, b1, a2};
    for (int rep = 0; rep < 100; ++rep) {
        Eigen::MatrixXcd m(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = Complex(uni(rng), uni(rng));
        const double top = max_singular_value(m);
        if (top > 0.0) m /= top;  // all singular values <= 1
        PhotonState s;
        for (int t = 0; t < 3; ++t) {
            std::vector<Mode> modes{pool[rng() % 3], pool[rng() % 3]};
            s = add(s, PhotonState::term(Monomial(modes), Complex(uni(rng), uni(rng))));
        }
        const double before = squared_norm(s);
        if (before == 0.0) continue;
        const double after = squared_norm(apply_mode_map(s, ModeMap{pool, m}));
        CHECK(after <= before * (1.0 + 1e-10));
    }
}
