#include <doctest.h>

#include <cmath>
#include <random>

#include "osmosis/drift.hpp"
#include "osmosis/errors.hpp"
#include "osmosis/operators.hpp"
#include "osmosis/synthetic.hpp"

using namespace osmosis;

namespace {

// Brute-force gating oracle: recompute the zeroed-face set by scanning every
// face and its dilation independently of the library's implementation.
DriftField gate_oracle(const DriftField& d, const LabelMap& map, int band) {
    DriftField out = d;
    for (int j = 0; j < d.height; ++j) {
        for (int i = 0; i + 1 < d.width; ++i) {
            bool zero = false;
            for (int k = i - band; k <= i + band && !zero; ++k) {
                if (k < 0 || k + 1 >= d.width) continue;
                if (map.at(k, j) != map.at(k + 1, j)) zero = true;
            }
            if (zero) out.d1_at(i, j) = 0.0;
        }
    }
    for (int j = 0; j + 1 < d.height; ++j) {
        for (int i = 0; i < d.width; ++i) {
            bool zero = false;
            for (int k = j - band; k <= j + band && !zero; ++k) {
                if (k < 0 || k + 1 >= d.height) continue;
                if (map.at(i, k) != map.at(i, k + 1)) zero = true;
            }
            if (zero) out.d2_at(i, j) = 0.0;
        }
    }
    return out;
}

LabelMap random_labels(int w, int h, std::uint64_t seed, int label_count) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(0, label_count - 1);
    LabelMap m(w, h);
    for (auto& v : m.labels) v = static_cast<std::uint16_t>(dist(rng));
    return m;
}

std::size_t count_zeroed(const DriftField& before, const DriftField& after) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < before.d1.size(); ++i) {
        if (before.d1[i] != after.d1[i]) ++n;
    }
    for (std::size_t i = 0; i < before.d2.size(); ++i) {
        if (before.d2[i] != after.d2[i]) ++n;
    }
    return n;
}

} // namespace

TEST_SUITE("drift") {

TEST_CASE("constant guide gives zero drift") {
    const DriftField d = canonical_drift(ScalarField(7, 5, 3.25));
    for (double v : d.d1) CHECK(v == 0.0);
    for (double v : d.d2) CHECK(v == 0.0);
}

TEST_CASE("two-value row matches the ratio form") {
    ScalarField v(2, 2, 0.0);
    v.at(0, 0) = 1.0;
    v.at(1, 0) = 3.0;
    v.at(0, 1) = 1.0;
    v.at(1, 1) = 3.0;
    const DriftField d = canonical_drift(v);
    CHECK(d.d1_at(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.d1_at(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.d2_at(0, 0) == 0.0);
    CHECK(d.d2_at(1, 0) == 0.0);
}

TEST_CASE("guide is an exact fixed point of the operator") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const ScalarField v = random_field(19, 13, seed, 0.5, 9.0);
        const ScalarField residual = apply_A(v, canonical_drift(v));
        for (double r : residual.values) CHECK(std::abs(r) <= 1e-12);
    }
}

TEST_CASE("canonical drift is scale invariant") {
    const ScalarField v = random_field(12, 10, 5, 0.2, 4.0);
    const DriftField base = canonical_drift(v);
    for (double c : {2.0, 0.25, 3.7, 1024.0}) {
        ScalarField scaled = v;
        for (double& val : scaled.values) val *= c;
        const DriftField d = canonical_drift(scaled);
        for (std::size_t i = 0; i < base.d1.size(); ++i) {
            CHECK(std::abs(d.d1[i] - base.d1[i]) <= 1e-14);
        }
        for (std::size_t i = 0; i < base.d2.size(); ++i) {
            CHECK(std::abs(d.d2[i] - base.d2[i]) <= 1e-14);
        }
    }
}

TEST_CASE("canonical drift entries satisfy |d|h < 2") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const ScalarField v = random_field(25, 17, seed, 1e-3, 1e3);
        CHECK(canonical_drift(v).max_abs_times_h() < 2.0);
    }
}

TEST_CASE("canonical drift rejects bad input") {
    ScalarField v(4, 4, 1.0);
    v.at(2, 2) = 0.0;
    CHECK_THROWS_AS(canonical_drift(v), ValueError);
    v.at(2, 2) = -1.0;
    CHECK_THROWS_AS(canonical_drift(v), ValueError);
}

TEST_CASE("empty mask leaves drift untouched") {
    const DriftField d = random_drift(9, 7, 21);
    const LabelMap mask(9, 7, 0);
    const DriftField g = gate_mask_boundary(d, mask, 0);
    CHECK(g.d1 == d.d1);
    CHECK(g.d2 == d.d2);
}

TEST_CASE("single crossing face on a 2x1 strip") {
    DriftField d(2, 1);
    d.d1[0] = 0.75;
    LabelMap mask(2, 1);
    mask.at(1, 0) = 1;
    const DriftField g = gate_mask_boundary(d, mask, 0);
    CHECK(g.d1[0] == 0.0);
}

TEST_CASE("interior block zeroes exactly the boundary faces") {
    DriftField d(8, 8);
    for (auto& v : d.d1) v = 1.0;
    for (auto& v : d.d2) v = 1.0;
    LabelMap mask(8, 8, 0);
    for (int y = 2; y < 6; ++y) {
        for (int x = 2; x < 6; ++x) mask.at(x, y) = 1;
    }
    const DriftField g = gate_mask_boundary(d, mask, 0);
    CHECK(count_zeroed(d, g) == 32);

    const DriftField expect = gate_oracle(d, mask, 0);
    CHECK(g.d1 == expect.d1);
    CHECK(g.d2 == expect.d2);
}

TEST_CASE("band dilation matches the brute-force oracle") {
    for (int band : {0, 1, 2, 3}) {
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            const DriftField d = random_drift(14, 11, 100 + seed);
            LabelMap mask = random_labels(14, 11, 200 + seed, 2);
            const DriftField g = gate_mask_boundary(d, mask, band);
            const DriftField expect = gate_oracle(d, mask, band);
            CHECK(g.d1 == expect.d1);
            CHECK(g.d2 == expect.d2);
        }
    }
}

TEST_CASE("gating is idempotent and only zeroes") {
    const DriftField d = random_drift(13, 9, 77);
    const LabelMap mask = random_labels(13, 9, 78, 2);
    const DriftField once = gate_mask_boundary(d, mask, 1);
    const DriftField twice = gate_mask_boundary(once, mask, 1);
    CHECK(once.d1 == twice.d1);
    CHECK(once.d2 == twice.d2);
    for (std::size_t i = 0; i < d.d1.size(); ++i) {
        CHECK((once.d1[i] == d.d1[i] || once.d1[i] == 0.0));
    }
    for (std::size_t i = 0; i < d.d2.size(); ++i) {
        CHECK((once.d2[i] == d.d2[i] || once.d2[i] == 0.0));
    }
}

TEST_CASE("mask gating rejects bad inputs") {
    const DriftField d = random_drift(6, 6, 1);
    CHECK_THROWS_AS(gate_mask_boundary(d, LabelMap(5, 6), 0), DimensionError);
    LabelMap nonbinary(6, 6, 0);
    nonbinary.at(0, 0) = 2;
    CHECK_THROWS_AS(gate_mask_boundary(d, nonbinary, 0), ValueError);
    CHECK_THROWS_AS(gate_mask_boundary(d, LabelMap(6, 6), -1), ValueError);
}

TEST_CASE("single-label tile map is a no-op") {
    const DriftField d = random_drift(10, 6, 5);
    const DriftField g = gate_label_seams(d, LabelMap(10, 6, 3));
    CHECK(g.d1 == d.d1);
    CHECK(g.d2 == d.d2);
}

TEST_CASE("vertical seam zeroes its eight x-faces") {
    DriftField d(8, 8);
    for (auto& v : d.d1) v = -0.5;
    for (auto& v : d.d2) v = 0.5;
    LabelMap tiles(8, 8, 0);
    for (int y = 0; y < 8; ++y) {
        for (int x = 4; x < 8; ++x) tiles.at(x, y) = 1;
    }
    const DriftField g = gate_label_seams(d, tiles);
    CHECK(count_zeroed(d, g) == 8);
    for (int y = 0; y < 8; ++y) CHECK(g.d1_at(3, y) == 0.0);
}

TEST_CASE("random tile maps match a brute-force face scan") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const DriftField d = random_drift(15, 12, 300 + seed);
        const LabelMap tiles = random_labels(15, 12, 400 + seed, 3);
        const DriftField g = gate_label_seams(d, tiles);
        const DriftField expect = gate_oracle(d, tiles, 0);
        CHECK(g.d1 == expect.d1);
        CHECK(g.d2 == expect.d2);
    }
}

TEST_CASE("seam gating rejects mismatched dimensions") {
    const DriftField d = random_drift(6, 6, 9);
    CHECK_THROWS_AS(gate_label_seams(d, LabelMap(6, 7)), DimensionError);
}

} // TEST_SUITE
