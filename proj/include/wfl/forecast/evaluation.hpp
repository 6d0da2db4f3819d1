#pragma once

#include "wfl/forecast/dataset.hpp"
#include "wfl/forecast/metrics.hpp"
#include "wfl/forecast/model.hpp"

namespace wfl::forecast {

/// Rolling-origin evaluation. For every origin o in [first_origin, rows) the
/// model sees target rows [0, o) and forecasts up to `horizon` steps, scored
/// against the rows that follow. Classification models are scored on the
/// labels of rows [first_origin, rows).
MetricReport evaluate_rolling(const ForecastModel& model, const Dataset& data, std::size_t first_origin,
                              std::size_t horizon);

/// Same protocol for the NaiveLast reference used by skill_score.
MetricReport evaluate_naive_reference(const Dataset& data, std::size_t first_origin, std::size_t horizon);

}  // namespace wfl::forecast
