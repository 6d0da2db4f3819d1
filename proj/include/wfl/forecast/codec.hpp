#pragma once

#include "wfl/common/bytes.hpp"
#include "wfl/forecast/model.hpp"

namespace wfl::forecast {

// "WFM1" model encoding:
//   magic[4] kind:u8 training_rows:u32 target:str
//   preprocess: n:u32 {name:str mean:f64 std:f64}*n  m:u32 {name:str k:u32 {label:str}*k}*m
//   kind payload:
//     NaiveLast        last:f64
//     SeasonalNaive    period:u32 {f64}*period
//     AutoRegressive   order:u32 intercept:f64 {f64}*order
//     NearestCentroid  class_column:str classes:u32 dim:u32 {label:str {f64}*dim}*classes
// where str = u32 byte length + UTF-8 bytes; all integers and floats little-endian.
Bytes encode_model(const ForecastModel& model);

/// Throws ForecastError{MalformedBytes} or ForecastError{UnsupportedVersion}.
ForecastModel decode_model(ByteView bytes);

}  // namespace wfl::forecast
