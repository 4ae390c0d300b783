#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "epps/clocks.hpp"
#include "epps/rng.hpp"

namespace {

epps::TransactionSeries make_series(std::vector<double> times, std::vector<double> prices,
                                    std::vector<long long> volumes = {}) {
    epps::TransactionSeries s;
    s.times = std::move(times);
    s.prices = std::move(prices);
    s.volumes = volumes.empty() ? std::vector<long long>(s.times.size(), 1) : std::move(volumes);
    return s;
}

// Literal oracle: expand each price v times, then average consecutive runs of
// V entries, discarding the remainder. Prices are kept integer-valued in the
// tests so the streaming and expanded sums are both exact.
std::vector<double> expand_and_chunk(const epps::TransactionSeries& s, long long n) {
    std::vector<double> expanded;
    for (std::size_t h = 0; h < s.size(); ++h)
        for (long long k = 0; k < s.volumes[h]; ++k) expanded.push_back(s.prices[h]);
    const long long V = static_cast<long long>(expanded.size()) / n;
    std::vector<double> out;
    for (long long b = 0; b < n; ++b) {
        double sum = 0.0;
        for (long long k = 0; k < V; ++k) sum += expanded[static_cast<std::size_t>(b * V + k)];
        out.push_back(sum / static_cast<double>(V));
    }
    return out;
}

} // namespace

TEST_CASE("interval_to_sample_count") {
    CHECK(epps::interval_to_sample_count(10.0, 300.0) == 30);
    CHECK(epps::interval_to_sample_count(1.0, 300.0) == 300);
    CHECK(epps::interval_to_sample_count(300.0, 300.0) == 1);
    CHECK_THROWS_AS(epps::interval_to_sample_count(0.0, 300.0), epps::DomainError);
}

TEST_CASE("calendar grid with previous-tick interpolation") {
    SECTION("single trade carries forward and backward") {
        const auto a = make_series({0.0}, {100.0});
        const auto grid = epps::calendar_grid_previous_tick(a, a, 10.0, 30.0);
        CHECK(grid.times[0] == std::vector<double>{0.0, 10.0, 20.0, 30.0});
        CHECK(grid.prices[0] == std::vector<double>{100.0, 100.0, 100.0, 100.0});
        CHECK(grid.synchronous);
        CHECK(grid.homogeneous);
    }
    SECTION("previous-tick rule at interior points") {
        const auto a = make_series({0.0, 15.0}, {100.0, 101.0});
        const auto grid = epps::calendar_grid_previous_tick(a, a, 10.0, 30.0);
        CHECK(grid.prices[0] == std::vector<double>{100.0, 100.0, 101.0, 101.0});
    }
    SECTION("grid spacing is exactly dt") {
        const auto a = make_series({1.0, 2.0, 50.0}, {1.0, 2.0, 3.0});
        const auto grid = epps::calendar_grid_previous_tick(a, a, 10.0, 100.0);
        REQUIRE(grid.times[0].size() == 11);
        for (std::size_t k = 1; k < grid.times[0].size(); ++k)
            CHECK(grid.times[0][k] - grid.times[0][k - 1] == 10.0);
    }
    SECTION("leading gap: backfill by default, x0 when supplied") {
        const auto a = make_series({25.0}, {7.0});
        const auto backfilled = epps::calendar_grid_previous_tick(a, a, 10.0, 30.0);
        CHECK(backfilled.prices[0] == std::vector<double>{7.0, 7.0, 7.0, 7.0});
        CHECK(backfilled.leading_backfill[0]);

        const auto seeded =
            epps::calendar_grid_previous_tick(a, a, 10.0, 30.0, std::pair{3.0, 3.0});
        CHECK(seeded.prices[0] == std::vector<double>{3.0, 3.0, 3.0, 7.0});
        CHECK_FALSE(seeded.leading_backfill[0]);
    }
    SECTION("empty series rejected") {
        const auto a = make_series({1.0}, {1.0});
        CHECK_THROWS_AS(epps::calendar_grid_previous_tick(a, epps::TransactionSeries{}, 1.0, 10.0),
                        epps::EmptySeries);
    }
}

TEST_CASE("raw_calendar is a passthrough") {
    const auto a = make_series({1.0, 2.0}, {10.0, 11.0});
    const auto b = make_series({1.5}, {20.0});
    const auto grid = epps::raw_calendar(a, b);
    CHECK(grid.times[0] == a.times);
    CHECK(grid.prices[0] == a.prices);
    CHECK(grid.times[1] == b.times);
    CHECK_FALSE(grid.synchronous);
}

TEST_CASE("shared event clock") {
    SECTION("merge-sort order") {
        const auto a = make_series({1.2, 3.4}, {1.0, 2.0});
        const auto b = make_series({2.0}, {5.0});
        const auto grid = epps::shared_event_clock(a, b);
        CHECK(grid.times[0] == std::vector<double>{1.0, 3.0});
        CHECK(grid.times[1] == std::vector<double>{2.0});
        CHECK(grid.homogeneous);
        CHECK_FALSE(grid.synchronous);
    }
    SECTION("cross-asset ties share one index") {
        const auto a = make_series({1.0}, {1.0});
        const auto b = make_series({1.0}, {2.0});
        const auto grid = epps::shared_event_clock(a, b);
        CHECK(grid.times[0] == std::vector<double>{1.0});
        CHECK(grid.times[1] == std::vector<double>{1.0});
    }
    SECTION("one empty side") {
        const auto a = make_series({1.0, 2.0}, {1.0, 2.0});
        const auto grid = epps::shared_event_clock(a, epps::TransactionSeries{});
        CHECK(grid.times[0] == std::vector<double>{1.0, 2.0});
        CHECK(grid.times[1].empty());
    }
    SECTION("clock span = #A + #B - #collisions") {
        const auto a = make_series({1.0, 2.0, 5.0}, {1, 1, 1});
        const auto b = make_series({2.0, 3.0}, {2, 2});
        const auto grid = epps::shared_event_clock(a, b);
        double span = 0.0;
        for (int s = 0; s < 2; ++s)
            for (double t : grid.times[s]) span = std::max(span, t);
        CHECK(span == 3.0 + 2.0 - 1.0);
    }
}

TEST_CASE("event grid previous tick") {
    const auto a = make_series({1.2, 3.4}, {1.0, 2.0});
    const auto b = make_series({2.0}, {5.0});
    const auto event = epps::shared_event_clock(a, b);

    SECTION("dk = 1 fills gaps with the previous price") {
        const auto grid = epps::event_grid_previous_tick(event, 1);
        // Asset A has events at clock 1 and 3; at clock 2 it keeps price 1.0.
        CHECK(grid.prices[0][2] == 1.0);
        CHECK(grid.synchronous);
        CHECK(grid.interval == 1.0);
    }
    SECTION("dk past the span gives a single sample row") {
        const auto grid = epps::event_grid_previous_tick(event, 100);
        CHECK(grid.times[0].size() == 1);
    }
    SECTION("dk = 2 halves the sample count") {
        const auto one = epps::event_grid_previous_tick(event, 1);
        const auto two = epps::event_grid_previous_tick(event, 2);
        const std::size_t n1 = one.times[0].size();
        const std::size_t n2 = two.times[0].size();
        CHECK((n2 == n1 / 2 || n2 == n1 / 2 + 1));
    }
}

TEST_CASE("volume clock hand oracles") {
    SECTION("n = 3") {
        const auto a = make_series({1, 2, 3}, {10, 11, 12}, {2, 3, 5});
        const auto grid = epps::volume_clock(a, a, 3);
        REQUIRE(grid.prices[0].size() == 3);
        CHECK(grid.prices[0][0] == Catch::Approx(31.0 / 3.0).epsilon(1e-15));
        CHECK(grid.prices[0][1] == Catch::Approx(34.0 / 3.0).epsilon(1e-15));
        CHECK(grid.prices[0][2] == Catch::Approx(12.0).epsilon(1e-15));
        CHECK(grid.synchronous);
        CHECK(grid.homogeneous);
    }
    SECTION("n = 2") {
        const auto a = make_series({1, 2, 3}, {10, 11, 12}, {2, 3, 5});
        const auto grid = epps::volume_clock(a, a, 2);
        CHECK(grid.prices[0] == std::vector<double>{10.6, 12.0});
    }
    SECTION("single trade split into two buckets") {
        const auto a = make_series({1}, {7}, {10});
        const auto grid = epps::volume_clock(a, a, 2);
        CHECK(grid.prices[0] == std::vector<double>{7.0, 7.0});
    }
    SECTION("insufficient total volume rejected") {
        const auto a = make_series({1}, {7}, {3});
        CHECK_THROWS_AS(epps::volume_clock(a, a, 4), epps::InsufficientVolume);
    }
}

TEST_CASE("volume clock streaming equals the expansion oracle on 1000 random cases") {
    std::mt19937_64 rng = epps::make_rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t len = 1 + static_cast<std::size_t>(epps::uniform01(rng) * 20);
        epps::TransactionSeries s;
        for (std::size_t h = 0; h < len; ++h) {
            s.times.push_back(static_cast<double>(h) + 1.0);
            s.prices.push_back(std::floor(epps::uniform01(rng) * 200.0) - 100.0);
            s.volumes.push_back(1 + static_cast<long long>(epps::uniform01(rng) * 30.0));
        }
        const long long n =
            std::min(s.total_volume(),
                     1 + static_cast<long long>(epps::uniform01(rng) *
                                                static_cast<double>(s.total_volume())));
        const auto grid = epps::volume_clock(s, s, n);
        const auto oracle = expand_and_chunk(s, n);
        REQUIRE(grid.prices[0].size() == oracle.size());
        for (std::size_t k = 0; k < oracle.size(); ++k) CHECK(grid.prices[0][k] == oracle[k]);
    }
}
