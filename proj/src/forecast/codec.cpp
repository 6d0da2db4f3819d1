#include "wfl/forecast/codec.hpp"

#include "wfl/forecast/error.hpp"

namespace wfl::forecast {

namespace {

constexpr std::string_view kMagicStem = "WFM";
constexpr char kVersion = '1';

void put_doubles(ByteWriter& w, const std::vector<double>& v) {
    for (double d : v) w.f64(d);
}

std::vector<double> get_doubles(ByteReader& r, std::uint32_t n) {
    r.expect_items(n, 8);
    std::vector<double> v(n);
    for (auto& d : v) d = r.f64();
    return v;
}

}  // namespace

Bytes encode_model(const ForecastModel& m) {
    m.check_invariants();
    ByteWriter w;
    w.raw(kMagicStem);
    w.u8(static_cast<std::uint8_t>(kVersion));
    w.u8(static_cast<std::uint8_t>(m.kind()));
    w.u32(m.training_rows);
    w.str(m.target);

    w.u32(static_cast<std::uint32_t>(m.preprocess.numeric.size()));
    for (const auto& c : m.preprocess.numeric) {
        w.str(c.name);
        w.f64(c.mean);
        w.f64(c.stddev);
    }
    w.u32(static_cast<std::uint32_t>(m.preprocess.categorical.size()));
    for (const auto& c : m.preprocess.categorical) {
        w.str(c.name);
        w.u32(static_cast<std::uint32_t>(c.labels.size()));
        for (const auto& l : c.labels) w.str(l);
    }

    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, NaiveLastParams>) {
                w.f64(p.last_value);
            } else if constexpr (std::is_same_v<T, SeasonalNaiveParams>) {
                w.u32(static_cast<std::uint32_t>(p.season.size()));
                put_doubles(w, p.season);
            } else if constexpr (std::is_same_v<T, AutoRegressiveParams>) {
                w.u32(static_cast<std::uint32_t>(p.coefficients.size()));
                w.f64(p.intercept);
                put_doubles(w, p.coefficients);
            } else {
                w.str(p.class_column);
                w.u32(static_cast<std::uint32_t>(p.labels.size()));
                w.u32(static_cast<std::uint32_t>(m.preprocess.feature_width()));
                for (std::size_t k = 0; k < p.labels.size(); ++k) {
                    w.str(p.labels[k]);
                    put_doubles(w, p.centroids[k]);
                }
            }
        },
        m.params);
    return std::move(w).take();
}

ForecastModel decode_model(ByteView bytes) {
    try {
        ByteReader r(bytes);
        auto stem = r.raw(3);
        if (std::string_view(reinterpret_cast<const char*>(stem.data()), 3) != kMagicStem) {
            throw DecodeError("bad magic");
        }
        auto version = r.u8();
        if (version != static_cast<std::uint8_t>(kVersion)) {
            throw ForecastError(ForecastErrc::UnsupportedVersion,
                                std::string("model format version '") + static_cast<char>(version) + "'");
        }
        auto kind = r.u8();
        if (kind > static_cast<std::uint8_t>(ForecasterKind::NearestCentroid)) throw DecodeError("unknown model kind");

        ForecastModel m;
        m.training_rows = r.u32();
        m.target = r.str();

        auto n_numeric = r.u32();
        r.expect_items(n_numeric, 20);
        for (std::uint32_t i = 0; i < n_numeric; ++i) {
            ColumnStats c;
            c.name = r.str();
            c.mean = r.f64();
            c.stddev = r.f64();
            m.preprocess.numeric.push_back(std::move(c));
        }
        auto n_cat = r.u32();
        r.expect_items(n_cat, 8);
        for (std::uint32_t i = 0; i < n_cat; ++i) {
            CategoricalLayout c;
            c.name = r.str();
            auto n_labels = r.u32();
            r.expect_items(n_labels, 4);
            for (std::uint32_t k = 0; k < n_labels; ++k) c.labels.push_back(r.str());
            m.preprocess.categorical.push_back(std::move(c));
        }

        switch (static_cast<ForecasterKind>(kind)) {
            case ForecasterKind::NaiveLast:
                m.params = NaiveLastParams{r.f64()};
                break;
            case ForecasterKind::SeasonalNaive: {
                auto period = r.u32();
                m.params = SeasonalNaiveParams{get_doubles(r, period)};
                break;
            }
            case ForecasterKind::AutoRegressive: {
                auto order = r.u32();
                AutoRegressiveParams ar;
                ar.intercept = r.f64();
                ar.coefficients = get_doubles(r, order);
                m.params = std::move(ar);
                break;
            }
            case ForecasterKind::NearestCentroid: {
                NearestCentroidParams nc;
                nc.class_column = r.str();
                auto classes = r.u32();
                auto dim = r.u32();
                if (dim != m.preprocess.feature_width()) throw DecodeError("centroid width differs from preprocess");
                r.expect_items(classes, 4 + static_cast<std::size_t>(dim) * 8);
                for (std::uint32_t k = 0; k < classes; ++k) {
                    nc.labels.push_back(r.str());
                    nc.centroids.push_back(get_doubles(r, dim));
                }
                m.params = std::move(nc);
                break;
            }
        }
        if (!r.done()) throw DecodeError("trailing bytes");
        m.check_invariants();
        return m;
    } catch (const DecodeError& e) {
        throw ForecastError(ForecastErrc::MalformedBytes, e.what());
    } catch (const ForecastError& e) {
        if (e.code() == ForecastErrc::UnsupportedVersion) throw;
        throw ForecastError(ForecastErrc::MalformedBytes, e.what());
    }
}

}  // namespace wfl::forecast
