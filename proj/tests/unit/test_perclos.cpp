#include <doctest.h>

#include <random>
#include <vector>

#include "ocular/perclos.hpp"

using namespace ocular;
using doctest::Approx;

namespace {

std::vector<FlaggedState> unflagged(const std::vector<EyeState>& s) {
    std::vector<FlaggedState> out;
    for (EyeState e : s) out.push_back({e, false});
    return out;
}

}  // namespace

TEST_CASE("blink filter") {
    using S = EyeState;
    const auto b = blink_filter({S::Open, S::PartiallyClosed, S::Closed, S::PartiallyClosed, S::Open}, 30.0);
    REQUIRE(b.size() == 5);
    CHECK_FALSE(b[0].blink);
    CHECK(b[1].blink);
    CHECK(b[2].blink);
    CHECK(b[3].blink);
    CHECK_FALSE(b[4].blink);

    std::vector<S> long_close(62, S::Closed);
    long_close.front() = S::Open;
    long_close.back() = S::Open;
    for (const auto& f : blink_filter(long_close, 30.0)) CHECK_FALSE(f.blink);

    // A run touching the end of the stream is not bracketed.
    for (const auto& f : blink_filter({S::Open, S::Closed, S::Closed}, 30.0)) CHECK_FALSE(f.blink);
    for (const auto& f : blink_filter(std::vector<S>(20, S::Open), 30.0)) CHECK_FALSE(f.blink);
    CHECK(default_max_blink_frames(30.0) == 12);
}

TEST_CASE("P3 arithmetic") {
    const int n = 5400;
    CHECK(perclos_p3(unflagged(std::vector<EyeState>(n, EyeState::Open)), 30.0).at(0).percent == 0.0);
    CHECK(perclos_p3(unflagged(std::vector<EyeState>(n, EyeState::Closed)), 30.0).at(0).percent == Approx(100.0));
    std::vector<EyeState> tenth(n, EyeState::Open);
    for (int i = 0; i < 540; ++i) tenth[i * 10] = i % 2 ? EyeState::Closed : EyeState::PartiallyClosed;
    const auto out = perclos_p3(unflagged(tenth), 30.0);
    REQUIRE(out.size() == 1);
    CHECK(out[0].percent == Approx(10.0));
    CHECK(out[0].minute == 3);
    CHECK(out[0].end_frame == n);
    CHECK(perclos_p3(unflagged(std::vector<EyeState>(n - 1, EyeState::Closed)), 30.0).empty());

    // Blink frames count as open.
    std::vector<FlaggedState> blinks(n, {EyeState::Closed, true});
    CHECK(perclos_p3(blinks, 30.0).at(0).percent == 0.0);
}

TEST_CASE("P3 emits once per minute after the third") {
    const auto out = perclos_p3(unflagged(std::vector<EyeState>(30 * 60 * 5, EyeState::Open)), 30.0);
    REQUIRE(out.size() == 3);
    CHECK(out[0].minute == 3);
    CHECK(out[1].minute == 4);
    CHECK(out[2].minute == 5);
}

TEST_CASE("P3 bounds and monotonicity") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> st(0, 2);
    const double fps = 2.0;
    std::vector<FlaggedState> stream(2000);
    for (auto& f : stream) f = {static_cast<EyeState>(st(rng)), st(rng) == 0};
    const auto base = perclos_p3(stream, fps);
    for (const auto& s : base) {
        CHECK(s.percent >= 0.0);
        CHECK(s.percent <= 100.0);
    }
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<FlaggedState> more = stream;
        std::uniform_int_distribution<std::size_t> pos(0, more.size() - 1);
        std::size_t i = pos(rng);
        while (more[i].state != EyeState::Open) i = pos(rng);
        more[i] = {EyeState::Closed, false};
        const auto after = perclos_p3(more, fps);
        REQUIRE(after.size() == base.size());
        for (std::size_t k = 0; k < base.size(); ++k) CHECK(after[k].percent >= base[k].percent);
    }
}

TEST_CASE("P3 window validates its rate") {
    CHECK_THROWS_AS(PerclosWindow(0.0), InvalidArgument);
    PerclosWindow w(1.0, 3.0, 1.0);
    CHECK(w.window_frames() == 3);
    CHECK_FALSE(w.push({EyeState::Closed, false}));
    CHECK_FALSE(w.push({EyeState::Open, false}));
    const auto s = w.push({EyeState::Closed, false});
    REQUIRE(s);
    CHECK(s->percent == Approx(200.0 / 3.0));
}
