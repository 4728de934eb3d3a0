#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kpplab/edt.hpp"
#include "kpplab/rng.hpp"

using namespace kpplab;

namespace {

// O(n^2) oracle: exact squared distance in integer cell units.
std::vector<int64_t> brute_force_sq(const GridMask& m, bool of_complement) {
    const GridSpec& g = m.spec;
    std::vector<size_t> marked;
    for (size_t i = 0; i < m.bits.size(); ++i) {
        bool on = m.get(i);
        if (of_complement) on = !on;
        if (on) marked.push_back(i);
    }
    std::vector<int64_t> out(g.size(), kEdtInf);
    for (size_t i = 0; i < g.size(); ++i) {
        auto a = g.unindex(i);
        for (size_t j : marked) {
            auto b = g.unindex(j);
            int64_t s = 0;
            for (int ax = 0; ax < g.dim; ++ax) {
                int64_t d = a[ax] - b[ax];
                s += d * d;
            }
            out[i] = std::min(out[i], s);
        }
    }
    return out;
}

GridMask random_mask(int nx, int ny, double fill, uint64_t seed) {
    GridSpec g;
    g.dim = 2;
    g.dims = {nx, ny, 1};
    g.h = {0.1, 0.1, 0.1};
    GridMask m(g);
    Rng rng(seed);
    for (size_t i = 0; i < m.bits.size(); ++i) m.set(i, rng.uniform() < fill);
    return m;
}

}  // namespace

TEST_CASE("EDT equals brute force on random 64x64 masks, all fill levels") {
    for (double fill : {0.002, 0.05, 0.5, 0.95}) {
        auto m = random_mask(64, 64, fill, 1234 + static_cast<uint64_t>(fill * 1000));
        auto fast = exact_edt(m, false);
        auto slow = brute_force_sq(m, false);
        REQUIRE(fast.dist_sq_cells.size() == slow.size());
        for (size_t i = 0; i < slow.size(); ++i) CHECK(fast.dist_sq_cells[i] == slow[i]);
    }
}

TEST_CASE("EDT of the complement matches brute force") {
    auto m = random_mask(48, 64, 0.3, 99);
    auto fast = exact_edt(m, true);
    auto slow = brute_force_sq(m, true);
    for (size_t i = 0; i < slow.size(); ++i) CHECK(fast.dist_sq_cells[i] == slow[i]);
}

TEST_CASE("EDT in 1D and 3D") {
    GridSpec g1;
    g1.dim = 1;
    g1.dims = {101, 1, 1};
    g1.h = {0.1, 1, 1};
    GridMask m1(g1);
    m1.set(30, true);
    m1.set(70, true);
    auto r1 = exact_edt(m1, false);
    CHECK(r1.dist_sq_cells[0] == 30 * 30);
    CHECK(r1.dist_sq_cells[50] == 20 * 20);
    CHECK(r1.feature[45] == 30);
    CHECK(r1.feature[55] == 70);

    GridSpec g3;
    g3.dim = 3;
    g3.dims = {17, 13, 11};
    g3.h = {0.1, 0.1, 0.1};
    GridMask m3(g3);
    Rng rng(5);
    for (size_t i = 0; i < m3.bits.size(); ++i) m3.set(i, rng.uniform() < 0.02);
    auto fast = exact_edt(m3, false);
    auto slow = brute_force_sq(m3, false);
    for (size_t i = 0; i < slow.size(); ++i) CHECK(fast.dist_sq_cells[i] == slow[i]);
}

TEST_CASE("empty mask yields infinite distances and no features") {
    auto m = random_mask(8, 8, 0.0, 1);
    auto r = exact_edt(m, false);
    for (size_t i = 0; i < r.dist_sq_cells.size(); ++i) {
        CHECK(r.dist_sq_cells[i] >= kEdtInf);
        CHECK(r.feature[i] == -1);
    }
}

TEST_CASE("features point at genuinely nearest cells") {
    auto m = random_mask(64, 64, 0.02, 2024);
    auto fast = exact_edt(m, false);
    const GridSpec& g = m.spec;
    for (size_t i = 0; i < g.size(); ++i) {
        auto f = fast.feature[i];
        REQUIRE(f >= 0);
        CHECK(m.get(static_cast<size_t>(f)));
        auto a = g.unindex(i);
        auto b = g.unindex(static_cast<size_t>(f));
        int64_t s = 0;
        for (int ax = 0; ax < g.dim; ++ax) {
            int64_t d = a[ax] - b[ax];
            s += d * d;
        }
        CHECK(s == fast.dist_sq_cells[i]);
    }
}
