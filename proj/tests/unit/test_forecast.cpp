#include <cmath>

#include "doctest.h"
#include "support/ar_data.hpp"
#include "support/metric_oracles.hpp"
#include "wfl/common/rng.hpp"
#include "wfl/forecast/codec.hpp"
#include "wfl/forecast/csv.hpp"
#include "wfl/forecast/error.hpp"
#include "wfl/forecast/evaluation.hpp"

using namespace wfl;
using namespace wfl::forecast;

namespace {

ForecastErrc error_of(auto&& fn) {
    try {
        fn();
    } catch (const ForecastError& e) {
        return e.code();
    }
    FAIL("expected ForecastError");
    return ForecastErrc::InvalidArgument;
}

Dataset series(std::vector<double> y) {
    Dataset d;
    for (std::size_t i = 0; i < y.size(); ++i) d.timestamps.push_back(static_cast<double>(i));
    d.numeric.push_back({columns::kTemperature, std::move(y)});
    return d;
}

Dataset random_weather(Rng& rng, std::size_t n) {
    Dataset d = empty_weather_dataset();
    const char* labels[] = {"Rain", "Sunny", "Cloudy"};
    for (std::size_t i = 0; i < n; ++i) {
        d.timestamps.push_back(static_cast<double>(i));
        for (auto& c : d.numeric) c.values.push_back(rng.normal(10.0, 5.0));
        d.categorical[0].values.push_back(labels[rng.below(3)]);
    }
    return d;
}

}  // namespace

TEST_SUITE("impute") {
    TEST_CASE("forward fill, then column mean for leading gaps") {
        auto a = impute_missing(series({1, kMissing, 3}));
        CHECK(a.numeric[0].values == std::vector<double>{1, 1, 3});
        auto b = impute_missing(series({kMissing, 2, 4}));
        CHECK(b.numeric[0].values == std::vector<double>{3, 2, 4});
        auto c = impute_missing(series({5, 6, 7}));
        CHECK(c.numeric[0].values == std::vector<double>{5, 6, 7});
    }

    TEST_CASE("categorical gaps become unknown; all-missing columns are errors") {
        Dataset d = series({1, 2});
        d.categorical.push_back({"Summary", {std::string("Rain"), std::nullopt}});
        auto out = impute_missing(d);
        CHECK(out.categorical[0].values[1] == std::optional<std::string>("unknown"));
        CHECK(out.rows() == 2);
        CHECK(error_of([] { impute_missing(series({kMissing, kMissing})); }) == ForecastErrc::AllMissingColumn);
    }
}

TEST_SUITE("preprocess") {
    TEST_CASE("population statistics and first-appearance label order") {
        Dataset d = series({1, 2, 3});
        d.categorical.push_back({"Summary", {std::string("rain"), std::string("sun"), std::string("rain")}});
        auto stats = fit_preprocessor(d);
        CHECK(stats.numeric[0].mean == doctest::Approx(2.0));
        CHECK(stats.numeric[0].stddev == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
        CHECK(stats.numeric[0].stddev == doctest::Approx(0.8165).epsilon(1e-4));
        CHECK(stats.categorical[0].labels == std::vector<std::string>{"rain", "sun"});
        CHECK(stats.feature_width() == 3);

        auto m = apply_preprocessor(stats, d);
        CHECK(m(1, 0) == doctest::Approx(0.0));
        CHECK(m(0, 1) == 1.0);
        CHECK(m(1, 2) == 1.0);
        CHECK(m(1, 1) == 0.0);
    }

    TEST_CASE("constant columns standardize to zero") {
        auto stats = fit_preprocessor(series({5, 5, 5}));
        CHECK(stats.numeric[0].stddev == 1.0);
        auto m = apply_preprocessor(stats, series({5, 5, 5}));
        for (int r = 0; r < 3; ++r) CHECK(m(r, 0) == 0.0);
    }

    TEST_CASE("training rows standardize to mean 0, std 1") {
        Rng rng(3);
        auto d = random_weather(rng, 200);
        auto stats = fit_preprocessor(d, {"Summary"});
        auto m = apply_preprocessor(stats, d);
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            double mean = m.col(c).mean();
            double var = (m.col(c).array() - mean).square().mean();
            CHECK(std::abs(mean) < 1e-9);
            CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);
        }
    }

    TEST_CASE("unseen labels and schema mismatches") {
        Dataset train = series({1, 2});
        train.categorical.push_back({"Summary", {std::string("a"), std::string("unknown")}});
        auto stats = fit_preprocessor(train);
        Dataset other = series({1});
        other.categorical.push_back({"Summary", {std::string("zzz")}});
        auto m = apply_preprocessor(stats, other);
        CHECK(m(0, 1) == 0.0);
        CHECK(m(0, 2) == 1.0);  // falls back to the "unknown" slot

        CHECK(error_of([&] { apply_preprocessor(stats, series({1})); }) == ForecastErrc::ArityMismatch);
        CHECK(error_of([] { fit_preprocessor(Dataset{}); }) == ForecastErrc::EmptyTrainingSet);
    }

    TEST_CASE("held-out rows never influence the fitted transform") {
        Rng rng(17);
        for (int trial = 0; trial < 50; ++trial) {
            auto d = random_weather(rng, 60);
            auto split = temporal_split(d, 0.7);
            auto stats = fit_preprocessor(split.train);
            auto before = apply_preprocessor(stats, split.train);

            auto mutated = d;
            for (std::size_t r = split.train.rows(); r < mutated.rows(); ++r) {
                for (auto& c : mutated.numeric) c.values[r] += rng.normal(0.0, 100.0);
                mutated.categorical[0].values[r] = "Storm";
            }
            auto split2 = temporal_split(mutated, 0.7);
            auto stats2 = fit_preprocessor(split2.train);
            CHECK(stats2 == stats);
            CHECK(apply_preprocessor(stats2, split2.train) == before);
        }
    }
}

TEST_SUITE("temporal_split") {
    TEST_CASE("arithmetic") {
        auto s = temporal_split(series({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}), 0.8);
        CHECK(s.train.rows() == 8);
        CHECK(s.test.rows() == 2);
        CHECK(s.test.timestamps.front() == 8.0);

        auto m = temporal_split(series({0, 1}), 0.5);
        CHECK(m.train.rows() == 1);
        CHECK(m.test.rows() == 1);

        CHECK(error_of([] { temporal_split(series({0}), 0.5); }) == ForecastErrc::TooFewRows);
        CHECK(error_of([] { temporal_split(series({0, 1}), 1.0); }) == ForecastErrc::InvalidArgument);
    }

    TEST_CASE("ordering holds for every size") {
        for (std::size_t n = 2; n <= 500; ++n) {
            std::vector<double> y(n, 1.0);
            auto s = temporal_split(series(y), 0.5);
            CHECK(s.train.rows() + s.test.rows() == n);
            CHECK(s.train.timestamps.back() < s.test.timestamps.front());
        }
    }
}

TEST_SUITE("forecasters") {
    TEST_CASE("naive last") {
        auto m = fit_forecaster({ForecasterKind::NaiveLast}, series({3, 9, 14.0}));
        CHECK(std::get<NaiveLastParams>(m.params).last_value == 14.0);
        CHECK(forecast_series(m, std::vector<double>{1, 7}, 3) == std::vector<double>{7, 7, 7});
    }

    TEST_CASE("seasonal naive repeats the last period") {
        ForecasterSpec spec{ForecasterKind::SeasonalNaive};
        spec.period = 2;
        auto m = fit_forecaster(spec, series({1, 9, 1, 9}));
        auto p = std::get<std::vector<double>>(predict(m, series({1, 9, 1, 9}), 5));
        CHECK(p == std::vector<double>{1, 9, 1, 9, 1});
        CHECK(error_of([&] { forecast_series(m, std::vector<double>{1}, 1); }) == ForecastErrc::InsufficientContext);
    }

    TEST_CASE("AR(1) on y_t = 2 y_{t-1}") {
        std::vector<double> y{1};
        for (int i = 0; i < 20; ++i) y.push_back(2 * y.back());
        ForecasterSpec spec{ForecasterKind::AutoRegressive};
        spec.order = 1;
        auto m = fit_forecaster(spec, series(y));
        const auto& ar = std::get<AutoRegressiveParams>(m.params);
        CHECK(std::abs(ar.coefficients[0] - 2.0) < 1e-6);
        CHECK(std::abs(ar.intercept) < 1e-6);
    }

    TEST_CASE("AR recursion and intercept-only models") {
        ForecastModel m;
        m.params = AutoRegressiveParams{0.0, {2.0}};
        CHECK(forecast_series(m, std::vector<double>{1}, 3) == std::vector<double>{2, 4, 8});
        m.params = AutoRegressiveParams{5.0, {0.0}};
        CHECK(forecast_series(m, std::vector<double>{-3, 1}, 3) == std::vector<double>{5, 5, 5});
    }

    TEST_CASE("AR recovers noiseless coefficients") {
        Rng rng(8);
        for (std::size_t p = 1; p <= 4; ++p) {
            for (std::size_t n : {50u, 120u, 400u}) {
                auto s = wfl::testing::make_ar_series(rng, p, n);
                ForecasterSpec spec{ForecasterKind::AutoRegressive};
                spec.order = static_cast<std::uint32_t>(p);
                auto m = fit_forecaster(spec, series(s.values));
                const auto& ar = std::get<AutoRegressiveParams>(m.params);
                for (std::size_t i = 0; i < p; ++i) CHECK(std::abs(ar.coefficients[i] - s.coefficients[i]) < 1e-4);
            }
        }
    }

    TEST_CASE("fit errors") {
        ForecasterSpec spec{ForecasterKind::AutoRegressive};
        spec.order = 3;
        CHECK(error_of([&] { fit_forecaster(spec, series({1, 2, 3})); }) == ForecastErrc::InsufficientHistory);
        CHECK(error_of([&] { fit_forecaster(spec, Dataset{}); }) == ForecastErrc::EmptyTrainingSet);
        CHECK(error_of([&] { fit_forecaster(spec, series({1, kMissing, 3, 4, 5})); }) == ForecastErrc::InvalidArgument);
    }

    TEST_CASE("nearest centroid separates well-spaced classes") {
        Dataset d = empty_weather_dataset();
        Rng rng(4);
        for (std::size_t i = 0; i < 90; ++i) {
            d.timestamps.push_back(static_cast<double>(i));
            int cls = static_cast<int>(i % 3);
            for (auto& c : d.numeric) c.values.push_back(cls * 10.0 + rng.normal(0.0, 0.5));
            d.categorical[0].values.push_back(std::string(cls == 0 ? "Cold" : cls == 1 ? "Mild" : "Hot"));
        }
        auto m = fit_forecaster({ForecasterKind::NearestCentroid}, d);
        const auto& nc = std::get<NearestCentroidParams>(m.params);
        CHECK(nc.labels == std::vector<std::string>{"Cold", "Mild", "Hot"});
        CHECK(nc.centroids[0].size() == m.preprocess.feature_width());
        CHECK(m.ledger_kind() == ledger::ModelKind::Classification);
        auto labels = classify(m, d);
        for (std::size_t i = 0; i < d.rows(); ++i) CHECK(labels[i] == *d.categorical[0].values[i]);
        auto tail = std::get<std::vector<std::string>>(predict(m, d, 2));
        CHECK(tail == std::vector<std::string>{"Mild", "Hot"});
    }
}

TEST_SUITE("metrics") {
    TEST_CASE("regression worked example") {
        auto m = regression_metrics(std::vector<double>{3, 5}, std::vector<double>{1, 5});
        CHECK(m.mae == doctest::Approx(1.0));
        CHECK(m.rmse == doctest::Approx(1.41421356).epsilon(1e-8));
        CHECK(m.mape == doctest::Approx(1.0 / 3.0));
        auto z = regression_metrics(std::vector<double>{3, 5}, std::vector<double>{3, 5});
        CHECK(z.mae == 0.0);
        CHECK(z.rmse == 0.0);
        CHECK(z.mape == 0.0);
    }

    TEST_CASE("regression guards") {
        auto m = regression_metrics(std::vector<double>{0, 2}, std::vector<double>{1, 1});
        CHECK(m.mape_excluded == 1);
        CHECK(m.mape == doctest::Approx(0.5));
        CHECK(error_of([] { regression_metrics(std::vector<double>{0}, std::vector<double>{1}); }) ==
              ForecastErrc::MapeUndefined);
        CHECK(error_of([] { regression_metrics(std::vector<double>{1}, std::vector<double>{1, 2}); }) ==
              ForecastErrc::LengthMismatch);
        CHECK(error_of([] { regression_metrics({}, {}); }) == ForecastErrc::EmptyInput);
    }

    TEST_CASE("classification worked examples") {
        std::vector<std::string> t{"a", "b"};
        auto perfect = classification_metrics(t, t);
        CHECK(perfect.accuracy == 1.0);
        CHECK(perfect.f1_macro == 1.0);
        auto half = classification_metrics(std::vector<std::string>{"a", "a", "b", "b"},
                                           std::vector<std::string>{"a", "b", "a", "b"});
        CHECK(half.accuracy == doctest::Approx(0.5));
        CHECK(half.f1_macro == doctest::Approx(0.5));
        // A predicted-only class contributes no F1 term; "a" scores 0.
        auto skew = classification_metrics(std::vector<std::string>{"a"}, std::vector<std::string>{"z"});
        CHECK(skew.f1_macro == 0.0);
    }

    TEST_CASE("metrics match brute-force oracles") {
        Rng rng(77);
        for (int trial = 0; trial < 500; ++trial) {
            std::size_t n = 1 + rng.below(200);
            std::vector<double> y(n), yhat(n);
            for (std::size_t i = 0; i < n; ++i) {
                y[i] = rng.normal(10.0, 20.0);
                yhat[i] = y[i] + rng.normal(0.0, 3.0);
            }
            auto m = regression_metrics(y, yhat);
            auto o = wfl::testing::oracle_regression(y, yhat);
            CHECK(wfl::testing::close_rel(m.mae, o.mae));
            CHECK(wfl::testing::close_rel(m.rmse, o.rmse));
            CHECK(wfl::testing::close_rel(m.mape, o.mape));
            CHECK(m.rmse >= m.mae);

            std::vector<std::string> lt(n), lp(n);
            for (std::size_t i = 0; i < n; ++i) {
                lt[i] = std::string(1, static_cast<char>('a' + rng.below(4)));
                lp[i] = std::string(1, static_cast<char>('a' + rng.below(5)));
            }
            auto c = classification_metrics(lt, lp);
            auto oc = wfl::testing::oracle_classification(lt, lp);
            CHECK(wfl::testing::close_rel(c.accuracy, oc.accuracy));
            CHECK(wfl::testing::close_rel(c.f1_macro, oc.f1_macro));
        }
    }

    TEST_CASE("skill score") {
        MetricReport cand, ref;
        cand.mae = 1.0;
        ref.mae = 2.0;
        CHECK(skill_score(cand, ref, ledger::ModelKind::Regression) == 5000);
        CHECK(skill_score(ref, ref, ledger::ModelKind::Regression) == 0);
        cand.mae = 3.0;
        CHECK(skill_score(cand, ref, ledger::ModelKind::Regression) == 0);
        cand.mae = std::numeric_limits<double>::infinity();
        CHECK(skill_score(cand, ref, ledger::ModelKind::Regression) == 0);
        cand.mae = 0.0;
        ref.mae = 0.0;
        CHECK(skill_score(cand, ref, ledger::ModelKind::Regression) == 10000);
        cand.mae = 0.1;
        CHECK(skill_score(cand, ref, ledger::ModelKind::Regression) == 0);

        MetricReport cls;
        cls.f1_macro = 0.5;
        CHECK(skill_score(cls, {}, ledger::ModelKind::Classification) == 5000);
        CHECK(error_of([] { skill_score({}, {}, ledger::ModelKind::Classification); }) == ForecastErrc::MissingMetric);
        CHECK(error_of([] { skill_score({}, {}, ledger::ModelKind::Regression); }) == ForecastErrc::MissingMetric);
    }
}

TEST_SUITE("evaluation") {
    TEST_CASE("rolling naive reference on a linear ramp") {
        // y_t = t: an h-step naive forecast is off by exactly h.
        std::vector<double> y;
        for (int i = 0; i < 20; ++i) y.push_back(100.0 + i);
        auto r = evaluate_naive_reference(series(y), 10, 2);
        // origins 10..18 contribute errors {1,2}, origin 19 only {1}: (9*3 + 1) / 19
        CHECK(*r.mae == doctest::Approx(28.0 / 19.0));
        CHECK(r.points == 19);
    }

    TEST_CASE("an exact AR model has zero rolling error") {
        std::vector<double> y{1, 2};
        for (int i = 0; i < 40; ++i) y.push_back(0.5 * y[y.size() - 1] + 0.25 * y[y.size() - 2] + 3.0);
        ForecastModel m;
        m.params = AutoRegressiveParams{3.0, {0.5, 0.25}};
        auto r = evaluate_rolling(m, series(y), 20, 6);
        CHECK(*r.mae < 1e-9);
    }

    TEST_CASE("diverging models report infinite error") {
        std::vector<double> y(50, 10.0);
        ForecastModel m;
        m.params = AutoRegressiveParams{0.0, {1e300}};
        auto r = evaluate_rolling(m, series(y), 40, 3);
        CHECK(std::isinf(*r.mae));
    }
}

TEST_SUITE("codec") {
    TEST_CASE("round trip and determinism for every kind") {
        Rng rng(12);
        auto d = random_weather(rng, 120);
        for (auto kind : {ForecasterKind::NaiveLast, ForecasterKind::SeasonalNaive, ForecasterKind::AutoRegressive,
                          ForecasterKind::NearestCentroid}) {
            ForecasterSpec spec{kind};
            auto m = fit_forecaster(spec, d);
            auto bytes = encode_model(m);
            CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "WFM1");
            CHECK(bytes[4] == static_cast<std::uint8_t>(kind));
            CHECK(decode_model(bytes) == m);
            CHECK(encode_model(decode_model(bytes)) == bytes);
            CHECK(encode_model(m) == bytes);
        }
    }

    TEST_CASE("fixed byte layout for a small AR model") {
        ForecastModel m;
        m.target = "T";
        m.training_rows = 7;
        m.params = AutoRegressiveParams{1.5, {0.25}};
        auto b = encode_model(m);
        Bytes expected{'W', 'F', 'M', '1', 2, 7, 0, 0, 0, 1, 0, 0, 0, 'T', 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0};
        // intercept 1.5 then coefficient 0.25 as little-endian IEEE-754
        for (std::uint8_t x : {0, 0, 0, 0, 0, 0, 0xf8, 0x3f}) expected.push_back(x);
        for (std::uint8_t x : {0, 0, 0, 0, 0, 0, 0xd0, 0x3f}) expected.push_back(x);
        CHECK(b == expected);
    }

    TEST_CASE("version and garbage handling") {
        ForecastModel m;
        m.params = NaiveLastParams{3.0};
        auto b = encode_model(m);
        b[3] = '2';
        CHECK(error_of([&] { decode_model(b); }) == ForecastErrc::UnsupportedVersion);

        Rng rng(1);
        for (int i = 0; i < 5000; ++i) {
            Bytes junk(rng.below(64));
            for (auto& x : junk) x = static_cast<std::uint8_t>(rng.next());
            if (i % 3 == 0 && junk.size() >= 5) {
                junk[0] = 'W';
                junk[1] = 'F';
                junk[2] = 'M';
                junk[3] = '1';
                junk[4] = static_cast<std::uint8_t>(rng.below(4));
            }
            try {
                decode_model(junk);
            } catch (const ForecastError& e) {
                CHECK((e.code() == ForecastErrc::MalformedBytes || e.code() == ForecastErrc::UnsupportedVersion));
            }
        }
    }
}

TEST_SUITE("csv") {
    TEST_CASE("timestamps") {
        CHECK(parse_iso8601_hours("1970-01-01T00:00:00Z") == 0.0);
        CHECK(parse_iso8601_hours("1970-01-02") == 24.0);
        CHECK(parse_iso8601_hours("2006-04-01 00:00:00.000 +0200") == parse_iso8601_hours("2006-03-31T22:00:00Z"));
        CHECK(parse_iso8601_hours("2006-04-01T01:30:00+01:00") == doctest::Approx(parse_iso8601_hours("2006-04-01")
                                                                                  + 0.5));
        CHECK(format_iso8601(parse_iso8601_hours("2016-02-29T13:00:00Z")) == "2016-02-29T13:00:00Z");
        CHECK(error_of([] { parse_iso8601_hours("2006-13-01"); }) == ForecastErrc::MalformedCsv);
        CHECK(error_of([] { parse_iso8601_hours("yesterday"); }) == ForecastErrc::MalformedCsv);
    }

    TEST_CASE("parses the schema with missing cells") {
        std::string text =
            "Timestamp,Temperature,Humidity,WindSpeed,Visibility,Pressure,Summary\n"
            "2006-04-01 00:00:00.000 +0200,9.47,0.89,14.12,15.82,1015.13,Partly Cloudy\n"
            "2006-04-01 01:00:00.000 +0200,,0.86,14.26,15.82,1015.63,\n"
            "2006-04-01 02:00:00.000 +0200,9.37,0.89,3.93,14.96,1015.94,\"Mostly, Cloudy\"\n";
        auto d = parse_weather_csv(text);
        REQUIRE(d.rows() == 3);
        CHECK(d.timestamps[1] - d.timestamps[0] == doctest::Approx(1.0));
        CHECK(is_missing(d.find_numeric("Temperature")->values[1]));
        CHECK_FALSE(d.categorical[0].values[1]);
        CHECK(*d.categorical[0].values[2] == "Mostly, Cloudy");

        auto again = parse_weather_csv(to_weather_csv(d));
        CHECK(again == d);
    }

    TEST_CASE("schema violations") {
        CHECK(error_of([] { parse_weather_csv(""); }) == ForecastErrc::MalformedCsv);
        CHECK(error_of([] { parse_weather_csv("Timestamp,Temperature\n"); }) == ForecastErrc::MalformedCsv);
        std::string hdr = "Timestamp,Temperature,Humidity,WindSpeed,Visibility,Pressure,Summary\n";
        CHECK(error_of([&] { parse_weather_csv(hdr + "2006-01-01,1,2,3\n"); }) == ForecastErrc::MalformedCsv);
        CHECK(error_of([&] { parse_weather_csv(hdr + "2006-01-01,x,2,3,4,5,a\n"); }) == ForecastErrc::MalformedCsv);
        CHECK(error_of([&] {
                  parse_weather_csv(hdr + "2006-01-02,1,2,3,4,5,a\n2006-01-01,1,2,3,4,5,a\n");
              }) == ForecastErrc::MalformedCsv);
        CHECK(error_of([&] { parse_weather_csv(hdr.substr(0, hdr.size() - 1) + ",Extra\n"); }) ==
              ForecastErrc::MalformedCsv);
    }
}
