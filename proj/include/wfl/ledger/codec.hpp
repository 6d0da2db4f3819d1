#pragma once

#include <string>

#include "wfl/common/bytes.hpp"
#include "wfl/common/canonical_json.hpp"
#include "wfl/ledger/types.hpp"

namespace wfl::ledger {

enum class EventLogMode { Exclude, Include };

// "WFL1" canonical state encoding: fixed field order, little-endian fixed-width
// integers, maps in ascending key order. With EventLogMode::Exclude the event
// count is written as zero; that form is what digests hash.
Bytes encode_state(const LedgerState& state, EventLogMode mode = EventLogMode::Include);

/// Throws LedgerError{MalformedState}.
LedgerState decode_state(ByteView bytes);

Json event_to_json(const Event& event);
/// One canonical JSON object per line.
std::string events_to_jsonl(const std::vector<Event>& events);

Json model_to_json(const ModelRecord& model);
Json account_to_json(const Account& account);

}  // namespace wfl::ledger
