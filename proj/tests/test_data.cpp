#include "nowcast/csv.hpp"
#include "nowcast/design.hpp"
#include "nowcast/errors.hpp"
#include "nowcast/rng.hpp"
#include "nowcast/stats.hpp"
#include "nowcast/transforms.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

using namespace nowcast;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = "/tmp/nowcast_test_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

SeriesFrame frame_of(Month start, const std::string& name, std::vector<Cell> vals) {
    SeriesFrame f(start, static_cast<int>(vals.size()));
    f.add_column(name, std::move(vals));
    return f;
}

} // namespace

TEST_CASE("load_csv parses a small panel") {
    auto path = write_temp("ok.csv", "date,x\n1962-01,1\n1962-02,2.5\n1962-03,\n");
    SeriesFrame f = load_csv(path);
    CHECK(f.rows() == 3);
    CHECK(f.start() == Month{1962, 1});
    CHECK(f.value("x", 0) == Cell{1.0});
    CHECK(f.value("x", 1) == Cell{2.5});
    CHECK_FALSE(f.value("x", 2).has_value());
    std::remove(path.c_str());
}

TEST_CASE("load_csv rejects month gaps naming the row") {
    auto path = write_temp("gap.csv", "date,x\n1962-01,1\n1962-03,2\n");
    CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("month gap at row 2"), DataError);
    std::remove(path.c_str());
}

TEST_CASE("load_csv rejects non-numeric cells with location") {
    auto path = write_temp("bad.csv", "date,x,y\n1962-01,1,2\n1962-02,abc,3\n");
    CHECK_THROWS_WITH_AS(load_csv(path),
                         doctest::Contains("\"abc\" at row 2, column 'x'"), DataError);
    std::remove(path.c_str());
}

TEST_CASE("load_csv rejects duplicate headers and bad dates") {
    auto dup = write_temp("dup.csv", "date,x,x\n1962-01,1,2\n");
    CHECK_THROWS_AS(load_csv(dup), DataError);
    std::remove(dup.c_str());
    auto bad = write_temp("baddate.csv", "date,x\n1962/01,1\n");
    CHECK_THROWS_WITH_AS(load_csv(bad), doctest::Contains("row 1"), DataError);
    std::remove(bad.c_str());
}

TEST_CASE("SeriesFrame round-trips through CSV cell-for-cell") {
    auto rng = make_rng(42, 0);
    std::uniform_real_distribution<double> u(-1000, 1000);
    std::uniform_int_distribution<int> miss(0, 4);
    SeriesFrame f(Month{1990, 11}, 40);
    for (std::string name : {"a", "b_5", "c"}) {
        std::vector<Cell> vals(40);
        for (auto& v : vals)
            if (miss(rng) != 0) v = u(rng);
        f.add_column(name, std::move(vals));
    }
    auto path = write_temp("roundtrip.csv", "");
    save_csv(f, path);
    SeriesFrame g = load_csv(path);
    CHECK(f.same_cells(g));
    std::remove(path.c_str());
}

TEST_CASE("pct_change_monthly basics") {
    auto f = frame_of(Month{1962, 1}, "x", {100.0, 110.0});
    auto out = apply_transforms(f, {{"x", TransformKind::pct_change_monthly, "x_pct"}});
    CHECK_FALSE(out.value("x_pct", 0).has_value());
    CHECK(*out.value("x_pct", 1) == doctest::Approx(10.0));
}

TEST_CASE("pct_change_monthly_ma3 of a constant series") {
    auto f = frame_of(Month{1962, 1}, "x", {1.0, 1.0, 1.0, 1.0});
    auto out = apply_transforms(f, {{"x", TransformKind::pct_change_monthly_ma3, "x_ma"}});
    for (int r = 0; r < 3; ++r) CHECK_FALSE(out.value("x_ma", r).has_value());
    CHECK(*out.value("x_ma", 3) == doctest::Approx(0.0));
}

TEST_CASE("pct change: zero denominator yields a missing value") {
    auto f = frame_of(Month{1962, 1}, "x", {100.0, 0.0, 50.0});
    auto out = apply_transforms(f, {{"x", TransformKind::pct_change_monthly, "p"}});
    CHECK_FALSE(out.value("p", 0).has_value());
    CHECK(*out.value("p", 1) == doctest::Approx(-100.0));
    CHECK_FALSE(out.value("p", 2).has_value());
}

TEST_CASE("diff and level transforms, unknown source") {
    auto f = frame_of(Month{1962, 1}, "x", {3.0, 7.0, Cell{}});
    auto out = apply_transforms(f, {{"x", TransformKind::diff, "d"},
                                    {"x", TransformKind::level, "lvl"}});
    CHECK_FALSE(out.value("d", 0).has_value());
    CHECK(*out.value("d", 1) == doctest::Approx(4.0));
    CHECK_FALSE(out.value("d", 2).has_value());
    CHECK(*out.value("lvl", 0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(apply_transforms(f, {{"nope", TransformKind::level, "z"}}), DataError);
}

TEST_CASE("build_design aligns lags of the target") {
    auto f = frame_of(Month{2000, 1}, "y", {1.0, 2.0, 3.0, 4.0, 5.0});
    auto d = build_design(f, "y", {{"y", {1, 2}}}, DesignMode::forecast);
    REQUIRE(d.rows() == 3);
    CHECK(d.feature_names == std::vector<std::string>{"y_t-1", "y_t-2"});
    CHECK(d.months[0] == Month{2000, 3});
    CHECK(d.target[0] == 3.0);
    CHECK(d.at(0, 0) == 2.0);
    CHECK(d.at(0, 1) == 1.0);
}

TEST_CASE("nowcast mode lag 0 gets the _t label; forecast mode rejects it") {
    SeriesFrame f(Month{2000, 1}, 6);
    f.add_column("y", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    f.add_column("TC_oficial", {9.0, 8.0, 7.0, 6.0, 5.0, 4.0});
    auto d = build_design(f, "y", {{"y", {1}}, {"TC_oficial", {0}}}, DesignMode::nowcast);
    CHECK(d.feature_index("TC_oficial_t") >= 0);
    CHECK(d.at(0, d.feature_index("TC_oficial_t")) == 8.0);
    CHECK_THROWS_AS(
        build_design(f, "y", {{"y", {1}}, {"TC_oficial", {0}}}, DesignMode::forecast),
        DataError);
    CHECK_THROWS_AS(build_design(f, "y", {{"y", {0}}}, DesignMode::nowcast), DataError);
}

TEST_CASE("build_design imputes missing feature cells with the column median") {
    SeriesFrame f(Month{2000, 1}, 4);
    f.add_column("y", {10.0, 20.0, 30.0, 40.0});
    f.add_column("x", {1.0, 3.0, Cell{}, 5.0});
    auto d = build_design(f, "y", {{"x", {0}}}, DesignMode::nowcast);
    REQUIRE(d.rows() == 4);
    CHECK(d.at(2, 0) == doctest::Approx(3.0));
    CHECK_THROWS_AS(build_design(f, "y", {{"x", {0}}}, DesignMode::nowcast, false), DataError);
}

TEST_CASE("build_design drops exactly target-missing and out-of-range rows") {
    SeriesFrame f(Month{2000, 1}, 6);
    f.add_column("y", {1.0, Cell{}, 3.0, 4.0, Cell{}, 6.0});
    f.add_column("x", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    auto d = build_design(f, "y", {{"y", {1}}, {"x", {1}}}, DesignMode::forecast);
    // row 0 lost to the lag, rows 1 and 4 lost to missing targets
    REQUIRE(d.rows() == 3);
    CHECK(d.months == std::vector<Month>{{2000, 3}, {2000, 4}, {2000, 6}});
    for (const auto& col : d.columns)
        for (double v : col) CHECK(std::isfinite(v));
}

TEST_CASE("train_test_split: sizes, disjointness, determinism, seed sensitivity") {
    auto [train, test] = train_test_split(100, 0.2, 7);
    CHECK(train.size() == 80);
    CHECK(test.size() == 20);
    std::set<int> all(train.begin(), train.end());
    all.insert(test.begin(), test.end());
    CHECK(all.size() == 100);

    auto [train2, test2] = train_test_split(100, 0.2, 7);
    CHECK(train == train2);
    CHECK(test == test2);

    auto [train3, test3] = train_test_split(100, 0.2, 8);
    CHECK(test != test3);

    CHECK_THROWS_AS(train_test_split(3, 0.01, 1), DataError);
    CHECK_THROWS_AS(train_test_split(4, 0.95, 1), DataError);
}

TEST_CASE("kfold_partition fold shapes") {
    auto folds = kfold_partition(100, 10, 3);
    REQUIRE(folds.size() == 10);
    std::set<int> all;
    for (const auto& f : folds) {
        CHECK(f.size() == 10);
        all.insert(f.begin(), f.end());
    }
    CHECK(all.size() == 100);

    auto singles = kfold_partition(10, 10, 3);
    for (const auto& f : singles) CHECK(f.size() == 1);

    auto uneven = kfold_partition(11, 10, 3);
    int ones = 0, twos = 0;
    for (const auto& f : uneven) (f.size() == 2 ? twos : ones)++;
    CHECK(ones == 9);
    CHECK(twos == 1);

    CHECK(kfold_partition(20, 4, 5) == kfold_partition(20, 4, 5));
    CHECK_THROWS_AS(kfold_partition(5, 6, 1), DataError);
    CHECK_THROWS_AS(kfold_partition(5, 1, 1), DataError);
}

TEST_CASE("month arithmetic and parsing") {
    CHECK(Month{2022, 12}.next() == Month{2023, 1});
    CHECK(Month{2024, 7}.since(Month{2022, 8}) == 23);
    CHECK(Month::parse("1962-01") == Month{1962, 1});
    CHECK(Month::parse("1962-01").str() == "1962-01");
    CHECK_THROWS_AS(Month::parse("1962-13"), DataError);
    CHECK_THROWS_AS(Month::parse("196201"), DataError);
}
