#include "wfl/ledger/weighted_score.hpp"

namespace wfl::ledger {

ScoreBp weighted_final_score(std::span<const WeightedScore> votes) {
    if (votes.empty()) throw LedgerError(LedgerErrc::EmptyVoteSet, "no votes to aggregate");
    unsigned __int128 weight = 0;
    unsigned __int128 weighted = 0;
    for (const auto& v : votes) {
        if (v.score_bp > kScoreScaleBp) throw LedgerError(LedgerErrc::InvalidScore, std::to_string(v.score_bp));
        weight += v.reputation;
        weighted += static_cast<unsigned __int128>(v.reputation) * v.score_bp;
    }
    if (weight == 0) throw LedgerError(LedgerErrc::ZeroTotalReputation, "all voters have zero reputation");
    return static_cast<ScoreBp>(weighted / weight);
}

}  // namespace wfl::ledger
