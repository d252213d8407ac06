#include <doctest.h>

#include <set>
#include <vector>

#include "efc/rng.hpp"

using namespace efc;

namespace {

std::vector<std::uint64_t> first_n(RngStream s, int n) {
    std::vector<std::uint64_t> v;
    for (int i = 0; i < n; ++i) v.push_back(s.next_u64());
    return v;
}

} // namespace

TEST_CASE("identical seed and label path give bit-identical streams") {
    auto a = derive_stream(7, {"trial", 0});
    auto b = derive_stream(7, {"trial", 0});
    CHECK(first_n(a, 64) == first_n(b, 64));
}

TEST_CASE("sibling trial streams differ") {
    auto a = first_n(derive_stream(7, {"trial", 0}), 64);
    auto b = first_n(derive_stream(7, {"trial", 1}), 64);
    CHECK(a != b);
}

TEST_CASE("different master seeds differ") {
    auto a = first_n(derive_stream(7, {}), 64);
    auto b = first_n(derive_stream(8, {}), 64);
    CHECK(a != b);
}

TEST_CASE("string and integer labels are domain-separated") {
    auto root = RngStream::root(42);
    CHECK(root.child("1").key() != root.child(1).key());
}

TEST_CASE("derivation depends only on the path, not on consumption") {
    auto a = RngStream::root(9);
    auto child_before = a.child("x").key();
    a.next_u64();
    a.next_u64();
    CHECK(a.child("x").key() == child_before);
}

// Frozen regression: pins the derivation and walk so output files stay
// replayable across releases (algorithm id splitmix64-v1).
TEST_CASE("stream regression vector") {
    auto s = derive_stream(7, {"trial", 0});
    const std::uint64_t got0 = s.next_u64();
    const std::uint64_t got1 = s.next_u64();
    CHECK(got0 == 0xdc36644f361f41fbull);
    CHECK(got1 == 0x9674f1f5d7806fb4ull);
}

TEST_CASE("next_unit in [0,1), next_below in range") {
    auto s = RngStream::root(3);
    for (int i = 0; i < 10000; ++i) {
        const double u = s.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(s.next_below(17) < 17);
    }
}
