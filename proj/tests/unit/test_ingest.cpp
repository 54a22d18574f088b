#include <sstream>
#include <string>

#include "doctest.h"
#include "mfts/error.hpp"
#include "mfts/ingest.hpp"
#include "mfts/io.hpp"
#include "oracles.hpp"

using namespace mfts;

namespace {

TickSeries from_text(const std::string& text, Dialect d = Dialect::generic, const std::string& id = "t") {
    std::istringstream in(text);
    return parse_ticks(in, d, id);
}

TickSeries make(std::initializer_list<TickRecord> r, const std::string& id = "p") {
    return TickSeries(id, std::vector<TickRecord>(r));
}

std::vector<double> volumes(const TickSeries& t) {
    std::vector<double> v;
    for (const auto& r : t.records()) v.push_back(r.volume_usd);
    return v;
}

}  // namespace

TEST_CASE("parse_ticks reads a sorted generic file") {
    const auto t = from_text("timestamp_ms,price,volume_usd\n0,100,1\n12000,101,2\n24000,102,3\n");
    REQUIRE(t.size() == 3);
    CHECK(t.records()[0] == TickRecord{0, 100, 1});
    CHECK(t.records()[2] == TickRecord{24000, 102, 3});
    CHECK(t.pair_id() == "t");
    CHECK(t.source_dialect() == Dialect::generic);
}

TEST_CASE("parse_ticks sorts rows stored out of order") {
    const auto sorted = from_text("timestamp_ms,price,volume_usd\n0,100,1\n12000,101,2\n24000,102,3\n");
    const auto shuffled = from_text("timestamp_ms,price,volume_usd\n24000,102,3\n0,100,1\n12000,101,2\n");
    CHECK(sorted.records() == shuffled.records());
}

TEST_CASE("parse_ticks rejects bad rows and names them") {
    try {
        from_text("timestamp_ms,price,volume_usd\n0,100,1\n12000,-5,2\n24000,abc,3\n36000,1,-1\n");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 3:") != std::string::npos);
        CHECK(msg.find("row 4:") != std::string::npos);
        CHECK(msg.find("row 5:") != std::string::npos);
    }
    CHECK_THROWS_AS(from_text("time,price,volume\n0,1,1\n"), ValidationError);
    CHECK_THROWS_AS(parse_ticks(std::filesystem::path("/nonexistent/ticks.csv"), Dialect::generic), ValidationError);
}

TEST_CASE("binance aggTrades dialect computes USD volume") {
    const auto t = from_text("1,2000.5,0.5,10,11,1700000000000,true,true\n2,2001,2,12,12,1700000000100,false,true\n",
                             Dialect::binance_aggtrades);
    REQUIRE(t.size() == 2);
    CHECK(t.records()[0].timestamp_ms == 1700000000000);
    CHECK(t.records()[0].price == 2000.5);
    CHECK(t.records()[0].volume_usd == doctest::Approx(1000.25));
    CHECK(t.records()[1].volume_usd == doctest::Approx(4002.0));
    // Microsecond timestamps of newer dumps are brought to milliseconds.
    const auto us = from_text("1,10,1,1,1,1700000000000123,true,true\n", Dialect::binance_aggtrades);
    CHECK(us.records()[0].timestamp_ms == 1700000000000);
}

TEST_CASE("filter_min_volume keeps the threshold itself") {
    const auto t = make({{0, 1, 0.005}, {1, 1, 0.01}, {2, 1, 3.2}});
    CHECK(volumes(filter_min_volume(t, 0.01)) == std::vector<double>{0.01, 3.2});
    CHECK(filter_min_volume(t, 0.0).records() == t.records());
    CHECK(filter_min_volume(t, 100.0).empty());
    const auto once = filter_min_volume(t, 0.01);
    CHECK(filter_min_volume(once, 0.01).records() == once.records());
}

TEST_CASE("merge_pools interleaves by time with a first on ties") {
    const auto a = make({{0, 1, 1}, {20, 1, 1}}, "a");
    const auto b = make({{10, 2, 2}}, "b");
    const auto m = merge_pools(a, b);
    REQUIRE(m.size() == 3);
    CHECK(m.records()[1].timestamp_ms == 10);
    CHECK(m.pair_id() == "a+b");

    const auto empty = TickSeries("e", {});
    CHECK(merge_pools(a, empty).records() == a.records());

    const auto ta = make({{5, 1, 1}, {7, 1, 2}}, "a");
    const auto tb = make({{5, 9, 3}, {7, 9, 4}}, "b");
    CHECK(volumes(merge_pools(ta, tb)) == std::vector<double>{1, 3, 2, 4});

    const auto big = merge_pools(from_text(oracle::synthetic_ticks_csv(500, 0, 1000, 1)),
                                 from_text(oracle::synthetic_ticks_csv(300, 0, 1500, 2)));
    CHECK(big.size() == 800);
    for (std::size_t i = 1; i < big.size(); ++i)
        CHECK(big.records()[i - 1].timestamp_ms <= big.records()[i].timestamp_ms);
}

TEST_CASE("tick_stats") {
    const auto two = make({{0, 1, 4}, {12000, 1, 8}});
    const TickStats s = tick_stats(two);
    CHECK(s.n == 2);
    CHECK(s.mean_gap_s == doctest::Approx(12.0));
    CHECK(s.mean_volume == doctest::Approx(6.0));
    CHECK(s.max_volume == 8.0);
    const auto flat = make({{0, 1, 5}, {1000, 1, 5}, {3000, 1, 5}});
    CHECK(tick_stats(flat).mean_volume == 5.0);
    CHECK(tick_stats(flat).max_volume == 5.0);
    CHECK_THROWS_AS(tick_stats(TickSeries("e", {})), ValidationError);
}

TEST_CASE("write_ticks / parse_ticks round-trip bit-exactly") {
    const auto t = from_text(oracle::synthetic_ticks_csv(1000, 1'700'000'000'000, 900, 5));
    std::ostringstream out;
    write_ticks(out, t);
    const auto back = from_text(out.str());
    CHECK(back.records() == t.records());
}

TEST_CASE("dedup_exact drops exact duplicates only") {
    const auto t = make({{0, 1, 1}, {0, 1, 1}, {0, 1, 2}, {1, 1, 1}});
    CHECK(dedup_exact(t).size() == 3);
}

TEST_CASE("TickRecord invariants are enforced") {
    CHECK_THROWS_AS(make({{0, 0.0, 1}}), ValidationError);
    CHECK_THROWS_AS(make({{-1, 1, 1}}), ValidationError);
    CHECK_THROWS_AS(make({{0, 1, -0.5}}), ValidationError);
}
