#pragma once

#include <span>

#include "wfl/ledger/types.hpp"

namespace wfl::ledger {

struct WeightedScore {
    Reputation reputation = 0;
    ScoreBp score_bp = 0;
};

/// floor(sum(rep * score) / sum(rep)), accumulated in 128-bit integers so that
/// no input within type bounds can overflow (vote sets up to 2^50 entries).
///
/// Throws LedgerError with EmptyVoteSet, ZeroTotalReputation or InvalidScore.
ScoreBp weighted_final_score(std::span<const WeightedScore> votes);

}  // namespace wfl::ledger
